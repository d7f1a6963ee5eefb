//! Filling `τ_{f,g} = {{f}}{{g}}{{f+g}}⁻¹` over Γ_m by induction on degree.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::derivations::{Deriv, Derivation};
use crate::rings::IntPoly;
use crate::words::{brace_word, reduce_mod, tau_sigma_word, Presentation, Side, Word, A, S, T};

use super::shift::ShiftCache;
use super::tape::{run, Tape};
use super::{inverted, juxtapose_all, FillError};

/// A small change to one of the two polynomials of a τ-word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TauAdjust {
    /// `f ↦ f + c`.
    Constant(i64),
    /// `g ↦ g + coeff·x^n`, with `n` at least both degrees.
    Top { n: usize, coeff: i64 },
}

/// `τ_{f,g} → u⁻¹ τ_{f',g'} u` together with `u`, `f'` and `g'`.
#[derive(Clone, Debug)]
pub struct Adjusted {
    pub deriv: Deriv,
    pub conjugator: Word,
    pub f: IntPoly,
    pub g: IntPoly,
}

fn gamma_m(m: u64) -> Result<Presentation, FillError> {
    if m < 2 {
        return Err(FillError::OutOfRange(format!(
            "modulus {m} must be at least 2"
        )));
    }
    Ok(Presentation::gamma_m(m)?)
}

fn small(c: &BigInt) -> Result<i64, FillError> {
    c.to_i64()
        .ok_or_else(|| FillError::OutOfRange(format!("coefficient {c}")))
}

fn max_degree(f: &IntPoly, g: &IntPoly) -> usize {
    f.degree().unwrap_or(0).max(g.degree().unwrap_or(0))
}

/// The letters of `τ_{f,g}` with the three templates kept apart, plus the
/// boundary between `{{g}}` and `{{f+g}}⁻¹`.
fn tau_letters(f: &IntPoly, g: &IntPoly, m: u64) -> Result<(Word, usize), FillError> {
    let wf = brace_word(f, m, T, Side::Right)?;
    let wg = brace_word(g, m, T, Side::Right)?;
    let ws = brace_word(&(f + g), m, T, Side::Right)?;
    let split = wf.len() + wg.len();
    Ok((Word::concat_all([&wf, &wg, &ws.inverse()]), split))
}

/// Applies a single [`TauAdjust`] at a cost of at most one move.
pub fn tau_adjust(f: &IntPoly, g: &IntPoly, m: u64, adj: TauAdjust) -> Result<Adjusted, FillError> {
    let pres = gamma_m(m)?;
    let f = reduce_mod(f, m)?;
    let g = reduce_mod(g, m)?;
    let (start, split) = tau_letters(&f, &g, m)?;
    let mut tape = Tape::new(&pres, &start);
    match adj {
        TauAdjust::Constant(c) => {
            let f2 = reduce_mod(&(&f.lift() + &IntPoly::constant(c)), m)?;
            let d1 = small(&(f2.coeff(0) - f.coeff(0)))?;
            let d2 = small(&((&f2 + &g).coeff(0) - (&f + &g).coeff(0)))?;
            let end = tape.letters().len();
            tape.replace(end, 0, &run(A, d1 - d2))?;
            let u = Word::pow(A, d1);
            let target = tau_sigma_word(&f2, &g, m, T)?.conjugate(&u);
            Ok(Adjusted {
                deriv: tape.finish_at(&target)?,
                conjugator: u,
                f: f2,
                g,
            })
        }
        TauAdjust::Top { n, coeff } => {
            if n < max_degree(&f, &g) {
                return Err(FillError::OutOfRange(format!(
                    "top adjustment at degree {n} below the polynomial degree"
                )));
            }
            let g2 = reduce_mod(&(&g.lift() + &IntPoly::monomial(coeff, n)), m)?;
            let e = BigInt::from(coeff);
            let kappa = small(&(g2.coeff(n) - g.coeff(n) - &e))?;
            let kappa2 = small(&((&f + &g2).coeff(n) - (&f + &g).coeff(n) - &e))?;
            let n = n as i64;
            let mut ins = run(T, -n);
            ins.extend(run(A, kappa - kappa2));
            ins.extend(run(T, n));
            tape.replace(split, 0, &ins)?;
            let target = tau_sigma_word(&f, &g2, m, T)?;
            Ok(Adjusted {
                deriv: tape.finish_at(&target)?,
                conjugator: Word::empty(),
                f,
                g: g2,
            })
        }
    }
}

/// A derivation of `τ_{f,g}` (in the `t`-basis) to the empty word over Γ_m.
pub fn tau_fill(f: &IntPoly, g: &IntPoly, m: u64) -> Result<Deriv, FillError> {
    let mut cache = ShiftCache::new(Some(m))?;
    fill(&mut cache, &reduce_mod(f, m)?, &reduce_mod(g, m)?, m)
}

pub(crate) fn fill(
    cache: &mut ShiftCache,
    f: &IntPoly,
    g: &IntPoly,
    m: u64,
) -> Result<Deriv, FillError> {
    let pres = gamma_m(m)?;
    let n = max_degree(f, g);
    if n == 0 {
        let (start, _) = tau_letters(f, g, m)?;
        let mut tape = Tape::new(&pres, &start);
        tape.reduce();
        let len = tape.letters().len();
        if len > 0 {
            tape.replace(0, len, &[])?;
        }
        return Ok(tape.finish());
    }
    let mb = BigInt::from(m);
    let c = small(&(-f.lift().eval_at_minus_one()).mod_floor(&mb))?;
    let sign = BigInt::from(if n.is_multiple_of(2) { 1 } else { -1 });
    let e = small(&(-sign * g.lift().eval_at_minus_one()).mod_floor(&mb))?;

    let a1 = tau_adjust(f, g, m, TauAdjust::Constant(c))?;
    let a2 = tau_adjust(&a1.f, &a1.g, m, TauAdjust::Top { n, coeff: e })?;
    let (f0, g0) = (a2.f, a2.g);
    let f1 = f0
        .div_x_plus_1()
        .ok_or_else(|| FillError::Internal(format!("x + 1 does not divide {f0}")))?;
    let g1 = g0
        .div_x_plus_1()
        .ok_or_else(|| FillError::Internal(format!("x + 1 does not divide {g0}")))?;
    let r = reduce_degree(cache, &f1, &g1, m)?;
    let rest = fill(cache, &f1, &g1, m)?;
    let u = a1.conjugator;
    let su = Word::gen(S).concat(&u);
    Ok(Derivation::concat(vec![
        a1.deriv,
        Derivation::conjugate(a2.deriv, &u),
        Derivation::conjugate(r, &u),
        Derivation::conjugate(rest, &su),
    ])?)
}

/// `τ_{(x+1)f, (x+1)g} → s⁻¹ τ_{f,g} s`.
fn reduce_degree(
    cache: &mut ShiftCache,
    f: &IntPoly,
    g: &IntPoly,
    m: u64,
) -> Result<Deriv, FillError> {
    let big_f = reduce_mod(&f.shift_arg(-1), m)?;
    let big_g = reduce_mod(&g.shift_arg(-1), m)?;
    let big_h = &big_f + &big_g;
    let mut sh = |p: &IntPoly| cache.shift(p, Side::Right);
    let x = |p: &IntPoly| p.mul_x_pow(1);
    let outer = juxtapose_all([
        Derivation::mirror(sh(&x(&big_f))?),
        Derivation::mirror(sh(&x(&big_g))?),
        inverted(&Derivation::mirror(sh(&x(&big_h))?)),
    ]);
    let inner = juxtapose_all([sh(&big_f)?, sh(&big_g)?, inverted(&sh(&big_h)?)]);
    Ok(Derivation::concat(vec![
        outer,
        Derivation::conjugate(inner, &Word::gen(S)),
    ])?)
}
