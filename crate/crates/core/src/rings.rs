//! Exact arithmetic in `Z[x]`, in the localization `R = Z[x, 1/x, 1/(x+1)]`
//! (over `Z` or `Z/m`) and in the golden ring `Z[τ]`, `τ² = 1 − τ`.
//!
//! Elements of `R` are stored as `num / (x^xden (x+1)^uden)` with the
//! denominator stripped as far as possible, which makes the representation
//! canonical: two elements are equal iff their fields are equal.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("modulus mismatch: {left:?} vs {right:?}")]
    ModulusMismatch {
        left: Option<u64>,
        right: Option<u64>,
    },
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),
    #[error("operation needs integer coefficients, element is taken mod {0}")]
    UnsupportedDomain(u64),
    #[error("polynomial is already reduced mod {0}")]
    AlreadyReduced(u64),
}

fn check_modulus(m: u64) -> Result<(), RingError> {
    if m < 2 {
        Err(RingError::InvalidModulus(m))
    } else {
        Ok(())
    }
}

/// Polynomial with arbitrary-precision coefficients, `coeffs[i]` being the
/// coefficient of `x^i`. With a modulus the coefficients live in `0..m`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
    modulus: Option<u64>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly::default()
    }

    pub fn one() -> Self {
        IntPoly::constant(1)
    }

    pub fn x() -> Self {
        IntPoly::monomial(1, 1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        IntPoly::new(vec![c.into()])
    }

    pub fn monomial(c: impl Into<BigInt>, degree: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = c.into();
        IntPoly::new(coeffs)
    }

    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPoly {
            coeffs,
            modulus: None,
        };
        p.trim();
        p
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Builds a polynomial over `Z/m`, reducing every coefficient.
    pub fn new_mod(coeffs: Vec<BigInt>, m: u64) -> Result<Self, RingError> {
        check_modulus(m)?;
        let mut p = IntPoly {
            coeffs,
            modulus: Some(m),
        };
        p.normalize();
        Ok(p)
    }

    fn zero_like(&self) -> Self {
        IntPoly {
            coeffs: Vec::new(),
            modulus: self.modulus,
        }
    }

    fn with_coeffs(&self, coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPoly {
            coeffs,
            modulus: self.modulus,
        };
        p.normalize();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    fn normalize(&mut self) {
        if let Some(m) = self.modulus {
            let m = BigInt::from(m);
            for c in &mut self.coeffs {
                *c = c.mod_floor(&m);
            }
        }
        self.trim();
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn modulus(&self) -> Option<u64> {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default()
    }

    pub fn sum_abs_coeffs(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    /// Reduces integer coefficients into `0..m`.
    pub fn mod_reduce(&self, m: u64) -> Result<IntPoly, RingError> {
        if let Some(existing) = self.modulus {
            return Err(RingError::AlreadyReduced(existing));
        }
        IntPoly::new_mod(self.coeffs.clone(), m)
    }

    /// Forgets the modulus, keeping the representatives in `0..m`.
    pub fn lift(&self) -> IntPoly {
        IntPoly::new(self.coeffs.clone())
    }

    fn same_modulus(&self, other: &IntPoly) -> Result<(), RingError> {
        if self.modulus == other.modulus {
            Ok(())
        } else {
            Err(RingError::ModulusMismatch {
                left: self.modulus,
                right: other.modulus,
            })
        }
    }

    pub fn checked_add(&self, other: &IntPoly) -> Result<IntPoly, RingError> {
        self.same_modulus(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect();
        Ok(self.with_coeffs(coeffs))
    }

    pub fn checked_sub(&self, other: &IntPoly) -> Result<IntPoly, RingError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &IntPoly) -> Result<IntPoly, RingError> {
        self.same_modulus(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(self.zero_like());
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Ok(self.with_coeffs(coeffs))
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        self.with_coeffs(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul_x_pow(&self, k: usize) -> IntPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        self.with_coeffs(coeffs)
    }

    pub fn mul_x_plus_1(&self) -> IntPoly {
        let n = self.coeffs.len();
        let coeffs = (0..=n)
            .map(|i| {
                let lo = if i > 0 {
                    self.coeff(i - 1)
                } else {
                    BigInt::zero()
                };
                lo + self.coeff(i)
            })
            .collect();
        self.with_coeffs(coeffs)
    }

    /// `f(x + delta)`, computed by Horner's rule.
    pub fn shift_arg(&self, delta: i64) -> IntPoly {
        let step = self.with_coeffs(vec![BigInt::from(delta), BigInt::one()]);
        let mut acc = self.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.checked_mul(&step).expect("same modulus");
            acc = acc
                .checked_add(&self.with_coeffs(vec![c.clone()]))
                .expect("same modulus");
        }
        acc
    }

    pub fn eval_at_zero(&self) -> BigInt {
        self.coeff(0)
    }

    pub fn eval_at_minus_one(&self) -> BigInt {
        let mut acc = BigInt::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i % 2 == 0 {
                acc += c;
            } else {
                acc -= c;
            }
        }
        if let Some(m) = self.modulus {
            acc = acc.mod_floor(&BigInt::from(m));
        }
        acc
    }

    pub fn divisible_by_x(&self) -> bool {
        self.eval_at_zero().is_zero()
    }

    pub fn divisible_by_x_plus_1(&self) -> bool {
        self.eval_at_minus_one().is_zero()
    }

    /// Exact division by `x`; `None` if `x` does not divide.
    pub fn div_x(&self) -> Option<IntPoly> {
        if !self.divisible_by_x() {
            return None;
        }
        Some(self.with_coeffs(self.coeffs.iter().skip(1).cloned().collect()))
    }

    /// Exact division by the monic `x + 1`; `None` if it does not divide.
    pub fn div_x_plus_1(&self) -> Option<IntPoly> {
        if !self.divisible_by_x_plus_1() {
            return None;
        }
        let n = self.coeffs.len();
        if n == 0 {
            return Some(self.clone());
        }
        // synthetic division from the top: q_{i-1} = c_i - q_i
        let mut q = vec![BigInt::zero(); n - 1];
        let mut carry = BigInt::zero();
        for i in (1..n).rev() {
            let qi = &self.coeffs[i] - &carry;
            carry = qi.clone();
            q[i - 1] = qi;
        }
        Some(self.with_coeffs(q))
    }

    /// Evaluation at `τ`, the golden root of `x² + x − 1`.
    pub fn eval_at_tau(&self) -> Result<GoldenInt, RingError> {
        if let Some(m) = self.modulus {
            return Err(RingError::UnsupportedDomain(m));
        }
        let mut acc = GoldenInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &GoldenInt::tau()) + &GoldenInt::new(c.clone(), 0);
        }
        Ok(acc)
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        self.checked_add(rhs).expect("IntPoly modulus mismatch")
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        self.checked_sub(rhs).expect("IntPoly modulus mismatch")
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        self.checked_mul(rhs).expect("IntPoly modulus mismatch")
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        self.with_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")?;
        } else {
            let mut first = true;
            for (i, c) in self.coeffs.iter().enumerate().rev() {
                if c.is_zero() {
                    continue;
                }
                if !first {
                    write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
                } else if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
                let a = c.abs();
                match i {
                    0 => write!(f, "{a}")?,
                    _ => {
                        if !a.is_one() {
                            write!(f, "{a}")?;
                        }
                        write!(f, "x")?;
                        if i > 1 {
                            write!(f, "^{i}")?;
                        }
                    }
                }
            }
        }
        if let Some(m) = self.modulus {
            write!(f, " (mod {m})")?;
        }
        Ok(())
    }
}

/// A unit `sign · x^xexp · (x+1)^uexp` of `R`, kept in factored form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Unit {
    pub negative: bool,
    pub xexp: i64,
    pub uexp: i64,
}

impl Unit {
    pub const ONE: Unit = Unit {
        negative: false,
        xexp: 0,
        uexp: 0,
    };

    pub fn new(negative: bool, xexp: i64, uexp: i64) -> Self {
        Unit {
            negative,
            xexp,
            uexp,
        }
    }

    pub fn is_one(&self) -> bool {
        *self == Unit::ONE
    }

    pub fn inv(&self) -> Unit {
        Unit::new(self.negative, -self.xexp, -self.uexp)
    }

    pub fn to_elem(&self, modulus: Option<u64>) -> LocalizedElem {
        LocalizedElem::one(modulus).mul_unit(self)
    }

    pub fn eval_at_tau(&self) -> GoldenInt {
        // τ⁻¹ = 1 + τ and (τ + 1)⁻¹ = τ
        let tau = GoldenInt::tau();
        let tau_inv = GoldenInt::new(1, 1);
        let mut acc = GoldenInt::new(if self.negative { -1 } else { 1 }, 0);
        let x = if self.xexp >= 0 { &tau } else { &tau_inv };
        for _ in 0..self.xexp.unsigned_abs() {
            acc = &acc * x;
        }
        let u = if self.uexp >= 0 { &tau_inv } else { &tau };
        for _ in 0..self.uexp.unsigned_abs() {
            acc = &acc * u;
        }
        acc
    }
}

impl Mul for Unit {
    type Output = Unit;
    fn mul(self, rhs: Unit) -> Unit {
        Unit::new(
            self.negative != rhs.negative,
            self.xexp + rhs.xexp,
            self.uexp + rhs.uexp,
        )
    }
}

/// Element `num / (x^xden (x+1)^uden)` of `R` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LocalizedElem {
    num: IntPoly,
    xden: u32,
    uden: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
    Neg,
}

impl LocalizedElem {
    pub fn from_poly(num: IntPoly) -> Self {
        LocalizedElem::from_parts(num, 0, 0)
    }

    /// `num / (x^xden (x+1)^uden)`, brought into canonical form.
    pub fn from_parts(num: IntPoly, xden: u32, uden: u32) -> Self {
        let mut e = LocalizedElem { num, xden, uden };
        e.canonicalize();
        e
    }

    pub fn from_i64(c: i64, modulus: Option<u64>) -> Self {
        let p = match modulus {
            None => IntPoly::constant(c),
            Some(m) => IntPoly::new_mod(vec![BigInt::from(c)], m).expect("valid modulus"),
        };
        LocalizedElem::from_poly(p)
    }

    pub fn zero(modulus: Option<u64>) -> Self {
        LocalizedElem::from_i64(0, modulus)
    }

    pub fn one(modulus: Option<u64>) -> Self {
        LocalizedElem::from_i64(1, modulus)
    }

    pub fn num(&self) -> &IntPoly {
        &self.num
    }

    pub fn xden(&self) -> u32 {
        self.xden
    }

    pub fn uden(&self) -> u32 {
        self.uden
    }

    pub fn modulus(&self) -> Option<u64> {
        self.num.modulus()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_canonical(&self) -> bool {
        if self.num.is_zero() {
            return self.xden == 0 && self.uden == 0;
        }
        !(self.xden > 0 && self.num.divisible_by_x()
            || self.uden > 0 && self.num.divisible_by_x_plus_1())
    }

    fn canonicalize(&mut self) {
        if self.num.is_zero() {
            self.xden = 0;
            self.uden = 0;
            return;
        }
        while self.xden > 0 {
            match self.num.div_x() {
                Some(q) => {
                    self.num = q;
                    self.xden -= 1;
                }
                None => break,
            }
        }
        while self.uden > 0 {
            match self.num.div_x_plus_1() {
                Some(q) => {
                    self.num = q;
                    self.uden -= 1;
                }
                None => break,
            }
        }
    }

    /// Returns a copy in canonical form (the identity on canonical input).
    pub fn normalized(&self) -> Self {
        LocalizedElem::from_parts(self.num.clone(), self.xden, self.uden)
    }

    fn over_common_denominator(&self, xden: u32, uden: u32) -> IntPoly {
        let mut p = self.num.mul_x_pow((xden - self.xden) as usize);
        for _ in 0..(uden - self.uden) {
            p = p.mul_x_plus_1();
        }
        p
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, RingError> {
        let xden = self.xden.max(other.xden);
        let uden = self.uden.max(other.uden);
        let num = self
            .over_common_denominator(xden, uden)
            .checked_add(&other.over_common_denominator(xden, uden))?;
        Ok(LocalizedElem::from_parts(num, xden, uden))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, RingError> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, RingError> {
        let num = self.num.checked_mul(&other.num)?;
        Ok(LocalizedElem::from_parts(
            num,
            self.xden + other.xden,
            self.uden + other.uden,
        ))
    }

    pub fn neg(&self) -> Self {
        LocalizedElem {
            num: -&self.num,
            xden: self.xden,
            uden: self.uden,
        }
    }

    pub fn mul_unit(&self, u: &Unit) -> Self {
        let mut num = if u.negative {
            -&self.num
        } else {
            self.num.clone()
        };
        let mut xden = self.xden as i64;
        let mut uden = self.uden as i64;
        xden -= u.xexp;
        uden -= u.uexp;
        if xden < 0 {
            num = num.mul_x_pow((-xden) as usize);
            xden = 0;
        }
        while uden < 0 {
            num = num.mul_x_plus_1();
            uden += 1;
        }
        LocalizedElem::from_parts(num, xden as u32, uden as u32)
    }

    pub fn eval_at_tau(&self) -> Result<GoldenInt, RingError> {
        let num = self.num.eval_at_tau()?;
        let den_inv = Unit::new(false, -(self.xden as i64), -(self.uden as i64)).eval_at_tau();
        Ok(&num * &den_inv)
    }
}

/// Ring operation dispatcher; `Neg` ignores its second operand.
pub fn ring_arith(
    op: RingOp,
    e1: &LocalizedElem,
    e2: &LocalizedElem,
) -> Result<LocalizedElem, RingError> {
    match op {
        RingOp::Add => e1.checked_add(e2),
        RingOp::Sub => e1.checked_sub(e2),
        RingOp::Mul => e1.checked_mul(e2),
        RingOp::Neg => Ok(e1.neg()),
    }
}

impl fmt::Debug for LocalizedElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LocalizedElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.num.lift())?;
        if self.xden > 0 || self.uden > 0 {
            write!(f, "/(x^{} (x+1)^{})", self.xden, self.uden)?;
        }
        if let Some(m) = self.modulus() {
            write!(f, " mod {m}")?;
        }
        Ok(())
    }
}

/// `one + tau·τ` in `Z[τ]`, with `τ² = 1 − τ`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GoldenInt {
    pub one: BigInt,
    pub tau: BigInt,
}

impl GoldenInt {
    pub fn new(one: impl Into<BigInt>, tau: impl Into<BigInt>) -> Self {
        GoldenInt {
            one: one.into(),
            tau: tau.into(),
        }
    }

    pub fn zero() -> Self {
        GoldenInt::default()
    }

    pub fn tau() -> Self {
        GoldenInt::new(0, 1)
    }

    /// `√5 = 1 + 2τ`.
    pub fn sqrt5() -> Self {
        GoldenInt::new(1, 2)
    }

    pub fn is_zero(&self) -> bool {
        self.one.is_zero() && self.tau.is_zero()
    }
}

impl Add for &GoldenInt {
    type Output = GoldenInt;
    fn add(self, rhs: &GoldenInt) -> GoldenInt {
        GoldenInt::new(&self.one + &rhs.one, &self.tau + &rhs.tau)
    }
}

impl Sub for &GoldenInt {
    type Output = GoldenInt;
    fn sub(self, rhs: &GoldenInt) -> GoldenInt {
        GoldenInt::new(&self.one - &rhs.one, &self.tau - &rhs.tau)
    }
}

impl Neg for &GoldenInt {
    type Output = GoldenInt;
    fn neg(self) -> GoldenInt {
        GoldenInt::new(-&self.one, -&self.tau)
    }
}

impl Mul for &GoldenInt {
    type Output = GoldenInt;
    fn mul(self, rhs: &GoldenInt) -> GoldenInt {
        // (a + bτ)(c + dτ) = (ac + bd) + (ad + bc − bd)τ
        let bd = &self.tau * &rhs.tau;
        GoldenInt::new(
            &self.one * &rhs.one + &bd,
            &self.one * &rhs.tau + &self.tau * &rhs.one - bd,
        )
    }
}

impl fmt::Debug for GoldenInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GoldenInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}τ", self.one, self.tau)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn el(c: &[i64]) -> LocalizedElem {
        LocalizedElem::from_poly(p(c))
    }

    #[test]
    fn add_x_and_one() {
        assert_eq!(el(&[0, 1]).checked_add(&el(&[1])).unwrap(), el(&[1, 1]));
    }

    #[test]
    fn unit_cancellation() {
        let inv = LocalizedElem::from_parts(p(&[1]), 0, 1);
        assert_eq!(inv.checked_mul(&el(&[1, 1])).unwrap(), el(&[1]));
    }

    #[test]
    fn strips_common_x() {
        let e = LocalizedElem::from_parts(p(&[0, 1, 1]), 1, 0);
        assert_eq!(e.checked_mul(&el(&[1])).unwrap(), el(&[1, 1]));
        assert!(e.is_canonical());
    }

    #[test]
    fn modulus_mismatch_is_an_error() {
        let a = LocalizedElem::from_i64(1, Some(3));
        let b = LocalizedElem::from_i64(1, None);
        assert!(matches!(
            a.checked_add(&b),
            Err(RingError::ModulusMismatch { .. })
        ));
    }

    #[test]
    fn shift_arg_examples() {
        assert_eq!(p(&[0, 0, 1]).shift_arg(1), p(&[1, 2, 1]));
        let f = p(&[3, -1, 4, 1]);
        assert_eq!(f.shift_arg(1).shift_arg(-1), f);
        // (x+1)·h(x) shifted by −1 is x·h(x−1)
        let h = p(&[2, 5, -1]);
        let lhs = h.mul_x_plus_1().shift_arg(-1);
        assert_eq!(lhs, h.shift_arg(-1).mul_x_pow(1));
    }

    #[test]
    fn eval_at_tau_examples() {
        assert_eq!(el(&[-1, -2]).eval_at_tau().unwrap(), GoldenInt::new(-1, -2));
        let u = &el(&[-1, -1]).checked_mul(&el(&[-1, -1])).unwrap();
        let d = u.checked_sub(&el(&[0, 0, 1])).unwrap();
        assert_eq!(d, el(&[1, 2]));
        assert_eq!(d.eval_at_tau().unwrap(), GoldenInt::new(1, 2));
        let inv = LocalizedElem::from_parts(p(&[1]), 0, 1);
        assert_eq!(inv.eval_at_tau().unwrap(), GoldenInt::new(0, 1));
        let xinv = LocalizedElem::from_parts(p(&[1]), 1, 0);
        assert_eq!(xinv.eval_at_tau().unwrap(), GoldenInt::new(1, 1));
    }

    #[test]
    fn eval_at_tau_rejects_modular() {
        let e = LocalizedElem::from_i64(1, Some(5));
        assert_eq!(e.eval_at_tau(), Err(RingError::UnsupportedDomain(5)));
    }

    #[test]
    fn golden_examples() {
        let t = GoldenInt::tau();
        assert_eq!(&t * &t, GoldenInt::new(1, -1));
        let o = GoldenInt::new(1, 1);
        assert_eq!(&o * &o, GoldenInt::new(2, 1));
        let g = GoldenInt::new(7, -3);
        assert!((&g + &-&g).is_zero());
    }

    #[test]
    fn mod_reduce_examples() {
        assert_eq!(
            p(&[0, -1]).mod_reduce(3).unwrap().coeffs(),
            &[BigInt::from(0), BigInt::from(2)]
        );
        assert!(p(&[3, 0, 3]).mod_reduce(3).unwrap().is_zero());
        assert_eq!(p(&[0, 1]).mod_reduce(2).unwrap().lift(), p(&[0, 1]));
        assert_eq!(p(&[1]).mod_reduce(1), Err(RingError::InvalidModulus(1)));
    }

    #[test]
    fn modular_denominator_stripping() {
        let m = Some(6);
        let f = LocalizedElem::from_poly(
            IntPoly::new_mod(vec![2.into(), 3.into(), 5.into()], 6).unwrap(),
        );
        let xinv = LocalizedElem::from_parts(IntPoly::new_mod(vec![1.into()], 6).unwrap(), 1, 0);
        let x = Unit::new(false, 1, 0).to_elem(m);
        let back = f.checked_mul(&x).unwrap().checked_mul(&xinv).unwrap();
        assert_eq!(back, f);
        let uinv = LocalizedElem::from_parts(IntPoly::new_mod(vec![1.into()], 6).unwrap(), 0, 1);
        let u = Unit::new(false, 0, 1).to_elem(m);
        assert_eq!(f.checked_mul(&u).unwrap().checked_mul(&uinv).unwrap(), f);
    }

    #[test]
    fn div_x_plus_1_is_exact() {
        let h = p(&[4, -2, 7]);
        assert_eq!(h.mul_x_plus_1().div_x_plus_1().unwrap(), h);
        assert!(p(&[1, 1, 1]).div_x_plus_1().is_none());
    }

    #[test]
    fn unit_eval_matches_elem_eval() {
        for &(neg, xe, ue) in &[(false, 2, -1), (true, -3, 2), (false, 0, 0), (true, 1, 1)] {
            let u = Unit::new(neg, xe, ue);
            assert_eq!(u.eval_at_tau(), u.to_elem(None).eval_at_tau().unwrap());
        }
    }
}
