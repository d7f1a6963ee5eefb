//! Word evaluation in concrete groups.
//!
//! * the affine representation of Γ and Γ_m (`a ↦ z + 1`, `t ↦ x z`,
//!   `s ↦ (x + 1) z`), used as the word-problem oracle;
//! * the upper triangular group `G ≤ GL₃(R)` and its quotient `Ĝ` carrying
//!   the extension `Γ̄` of Γ by `H = ⟨p, q⟩ ≅ Z²`;
//! * lamplighter normal forms on the `⟨a, t⟩` subgroup;
//! * the integral Heisenberg group.
//!
//! Words act left to right: in `w = g₁ g₂ …` the map of `g₁` is applied
//! first. With this convention `a^{t^k}` is translation by `x^k`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::rings::{GoldenInt, IntPoly, LocalizedElem, RingError, Unit};
use crate::words::{Gen, Presentation, PresentationKind, Word, A, B, C, P, Q, S, T};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("generator `{0}` cannot be evaluated in this representation")]
    ForeignGenerator(Gen),
    #[error("word does not represent the identity in {0}")]
    NotNull(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// The affine map `z ↦ (x+1)^sexp x^texp z + trans`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineElem {
    pub sexp: i64,
    pub texp: i64,
    pub trans: LocalizedElem,
}

impl AffineElem {
    pub fn identity(modulus: Option<u64>) -> Self {
        AffineElem {
            sexp: 0,
            texp: 0,
            trans: LocalizedElem::zero(modulus),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.sexp == 0 && self.texp == 0 && self.trans.is_zero()
    }

    pub fn multiplier(&self) -> Unit {
        Unit::new(false, self.texp, self.sexp)
    }

    /// Apply `self`, then `other`.
    pub fn then(&self, other: &AffineElem) -> Result<AffineElem, RingError> {
        Ok(AffineElem {
            sexp: self.sexp + other.sexp,
            texp: self.texp + other.texp,
            trans: self
                .trans
                .mul_unit(&other.multiplier())
                .checked_add(&other.trans)?,
        })
    }

    fn generator_power(g: Gen, e: i64, modulus: Option<u64>) -> Result<AffineElem, RepError> {
        let mut out = AffineElem::identity(modulus);
        match g {
            A => out.trans = LocalizedElem::from_i64(e, modulus),
            S => out.sexp = e,
            T => out.texp = e,
            other => return Err(RepError::ForeignGenerator(other)),
        }
        Ok(out)
    }
}

pub fn eval_affine(w: &Word, modulus: Option<u64>) -> Result<AffineElem, RepError> {
    let mut acc = AffineElem::identity(modulus);
    for &(g, e) in w.syllables() {
        acc = acc.then(&AffineElem::generator_power(g, e, modulus)?)?;
    }
    Ok(acc)
}

/// `(1 e12 e13; 0 u22 e23; 0 0 u33)` with `u22, u33` units of `R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat3Loc {
    pub u22: Unit,
    pub u33: Unit,
    pub e12: LocalizedElem,
    pub e13: LocalizedElem,
    pub e23: LocalizedElem,
}

/// As [`Mat3Loc`], with the corner entry evaluated at `τ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat3Hat {
    pub u22: Unit,
    pub u33: Unit,
    pub e12: LocalizedElem,
    pub e13: GoldenInt,
    pub e23: LocalizedElem,
}

fn zero() -> LocalizedElem {
    LocalizedElem::zero(None)
}

fn lin(c0: i64, c1: i64) -> LocalizedElem {
    LocalizedElem::from_poly(IntPoly::from_i64s(&[c0, c1]))
}

impl Mat3Loc {
    pub fn identity() -> Self {
        Mat3Loc {
            u22: Unit::ONE,
            u33: Unit::ONE,
            e12: zero(),
            e13: zero(),
            e23: zero(),
        }
    }

    /// Identity except for `f` in the top-right corner.
    pub fn corner(f: LocalizedElem) -> Self {
        Mat3Loc {
            e13: f,
            ..Mat3Loc::identity()
        }
    }

    pub fn generator(g: Gen) -> Result<Self, RepError> {
        let neg_x2_x = Unit::new(true, 1, 1);
        Ok(match g {
            A => Mat3Loc {
                e12: lin(1, 0),
                e23: lin(1, 0),
                ..Mat3Loc::identity()
            },
            P => Mat3Loc::corner(lin(-1, -2)),
            Q => Mat3Loc::corner(lin(-1, -1)),
            S => Mat3Loc {
                u22: Unit::new(false, 0, 1),
                u33: neg_x2_x,
                ..Mat3Loc::identity()
            },
            T => Mat3Loc {
                u22: Unit::new(false, 1, 0),
                u33: neg_x2_x,
                ..Mat3Loc::identity()
            },
            other => return Err(RepError::ForeignGenerator(other)),
        })
    }

    pub fn mul(&self, o: &Mat3Loc) -> Result<Mat3Loc, RingError> {
        Ok(Mat3Loc {
            u22: self.u22 * o.u22,
            u33: self.u33 * o.u33,
            e12: o.e12.checked_add(&self.e12.mul_unit(&o.u22))?,
            e13: o
                .e13
                .checked_add(&self.e12.checked_mul(&o.e23)?)?
                .checked_add(&self.e13.mul_unit(&o.u33))?,
            e23: self
                .e23
                .mul_unit(&o.u33)
                .checked_add(&o.e23.mul_unit(&self.u22))?,
        })
    }

    pub fn inverse(&self) -> Result<Mat3Loc, RingError> {
        let v22 = self.u22.inv();
        let v33 = self.u33.inv();
        let f12 = self.e12.mul_unit(&v22).neg();
        let f23 = self.e23.mul_unit(&(v22 * v33)).neg();
        let f13 = self
            .e12
            .checked_mul(&f23)?
            .checked_add(&self.e13.mul_unit(&v33))?
            .neg();
        Ok(Mat3Loc {
            u22: v22,
            u33: v33,
            e12: f12,
            e13: f13,
            e23: f23,
        })
    }

    pub fn pow(&self, e: i64) -> Result<Mat3Loc, RingError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Mat3Loc::identity();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat3Loc::identity()
    }

    /// Applies `f ↦ f(τ)` to the corner entry.
    pub fn to_hat(&self) -> Result<Mat3Hat, RingError> {
        Ok(Mat3Hat {
            u22: self.u22,
            u33: self.u33,
            e12: self.e12.clone(),
            e13: self.e13.eval_at_tau()?,
            e23: self.e23.clone(),
        })
    }
}

impl Mat3Hat {
    pub fn identity() -> Self {
        Mat3Hat {
            u22: Unit::ONE,
            u33: Unit::ONE,
            e12: zero(),
            e13: GoldenInt::zero(),
            e23: zero(),
        }
    }

    pub fn corner(g: GoldenInt) -> Self {
        Mat3Hat {
            e13: g,
            ..Mat3Hat::identity()
        }
    }

    /// Multiplication inherited from `G`: lift, multiply, evaluate the corner.
    pub fn mul(&self, o: &Mat3Hat) -> Result<Mat3Hat, RingError> {
        let cross = self.e12.checked_mul(&o.e23)?.eval_at_tau()?;
        let scaled = &self.e13 * &o.u33.eval_at_tau();
        Ok(Mat3Hat {
            u22: self.u22 * o.u22,
            u33: self.u33 * o.u33,
            e12: o.e12.checked_add(&self.e12.mul_unit(&o.u22))?,
            e13: &(&o.e13 + &cross) + &scaled,
            e23: self
                .e23
                .mul_unit(&o.u33)
                .checked_add(&o.e23.mul_unit(&self.u22))?,
        })
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat3Hat::identity()
    }

    /// The corner entry, if the matrix is otherwise the identity.
    pub fn as_corner(&self) -> Option<&GoldenInt> {
        let c = Mat3Hat::corner(self.e13.clone());
        (*self == c).then_some(&self.e13)
    }
}

pub fn eval_gbar(w: &Word) -> Result<Mat3Loc, RepError> {
    let mut acc = Mat3Loc::identity();
    for &(g, e) in w.syllables() {
        acc = acc.mul(&Mat3Loc::generator(g)?.pow(e)?)?;
    }
    Ok(acc)
}

/// Evaluation in `Ĝ`, multiplying `Ĝ` matrices directly.
pub fn eval_ghat(w: &Word) -> Result<Mat3Hat, RepError> {
    let mut acc = Mat3Hat::identity();
    for &(g, e) in w.syllables() {
        let gen = Mat3Loc::generator(g)?;
        let step = if e < 0 { gen.inverse()? } else { gen }.to_hat()?;
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&step)?;
        }
    }
    Ok(acc)
}

/// Exponents `(λ, μ)` with a null word's `Γ̄` image equal to `p^λ q^μ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HCoords {
    pub lambda: BigInt,
    pub mu: BigInt,
}

impl HCoords {
    /// The `Ĝ` corner entry of `p^λ q^μ`, namely `λ(−1−2τ) + μ(−1−τ)`.
    pub fn corner(&self) -> GoldenInt {
        GoldenInt::new(
            -&self.lambda - &self.mu,
            -BigInt::from(2) * &self.lambda - &self.mu,
        )
    }

    /// Inverse of [`HCoords::corner`]; the change of basis is unimodular.
    pub fn from_corner(g: &GoldenInt) -> Self {
        HCoords {
            lambda: &g.one - &g.tau,
            mu: &g.tau - BigInt::from(2) * &g.one,
        }
    }

    /// Word length with respect to `{p, q}`.
    pub fn length(&self) -> BigInt {
        self.lambda.abs() + self.mu.abs()
    }
}

pub fn h_coords(w: &Word) -> Result<HCoords, RepError> {
    let gamma = Presentation::gamma();
    if !is_identity(w, &gamma)? {
        return Err(RepError::NotNull(gamma.name().into()));
    }
    let hat = eval_ghat(w)?;
    let corner = hat
        .as_corner()
        .ok_or_else(|| RepError::Invariant(format!("Ĝ image is not a corner matrix: {hat:?}")))?;
    Ok(HCoords::from_corner(corner))
}

/// A lamplighter configuration: lamp values by position, plus the cursor.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LampConfig {
    pub cursor: i64,
    pub lamps: BTreeMap<i64, BigInt>,
}

impl LampConfig {
    pub fn is_identity(&self) -> bool {
        self.cursor == 0 && self.lamps.is_empty()
    }
}

pub fn wreath_normal_form(w: &Word, modulus: Option<u64>) -> Result<LampConfig, RepError> {
    let mut cfg = LampConfig::default();
    for &(g, e) in w.syllables() {
        match g {
            T => cfg.cursor += e,
            A => {
                let slot = cfg.lamps.entry(-cfg.cursor).or_default();
                *slot += e;
                if let Some(m) = modulus {
                    *slot = slot.mod_floor(&BigInt::from(m));
                }
                if slot.is_zero() {
                    cfg.lamps.remove(&-cfg.cursor);
                }
            }
            other => return Err(RepError::ForeignGenerator(other)),
        }
    }
    Ok(cfg)
}

/// Element `(1 x z; 0 1 y; 0 0 1)` of the integral Heisenberg group.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HeisElem {
    pub x: BigInt,
    pub y: BigInt,
    pub z: BigInt,
}

impl HeisElem {
    pub fn mul(&self, o: &HeisElem) -> HeisElem {
        HeisElem {
            x: &self.x + &o.x,
            y: &self.y + &o.y,
            z: &self.z + &o.z + &self.x * &o.y,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }
}

/// Evaluation with `a = E₁₂`, `b = E₂₃`, `c = E₁₃` (so `[a, b] = c`).
pub fn eval_heis(w: &Word) -> Result<HeisElem, RepError> {
    let mut acc = HeisElem::default();
    for &(g, e) in w.syllables() {
        let e = BigInt::from(e);
        let step = match g {
            A => HeisElem {
                x: e,
                ..Default::default()
            },
            B => HeisElem {
                y: e,
                ..Default::default()
            },
            C => HeisElem {
                z: e,
                ..Default::default()
            },
            other => return Err(RepError::ForeignGenerator(other)),
        };
        acc = acc.mul(&step);
    }
    Ok(acc)
}

/// Word problem for the built-in presentations.
///
/// `gamma_bar` is decided in `Ĝ`, which relies on `Γ̄ → Ĝ` being injective.
pub fn is_identity(w: &Word, pres: &Presentation) -> Result<bool, RepError> {
    if let Some(g) = w.generators().find(|g| !pres.alphabet().contains(g)) {
        return Err(RepError::ForeignGenerator(g));
    }
    Ok(match pres.kind() {
        PresentationKind::Gamma => eval_affine(w, None)?.is_identity(),
        PresentationKind::GammaM(m) => eval_affine(w, Some(m))?.is_identity(),
        PresentationKind::GammaBar => eval_ghat(w)?.is_identity(),
        PresentationKind::Z2 => w.exponent_sum(S) == 0 && w.exponent_sum(T) == 0,
        PresentationKind::Heis => eval_heis(w)?.is_identity(),
        PresentationKind::Z2C => w.exponent_sum(A) == 0 && w.exponent_sum(B) == 0,
    })
}
