//! Changing the conjugating letter of a template from `s` to `t`:
//! `⟦a⟧_s^{f(x)} = ⟦a⟧_t^{f(x+1)}` over Γ and its mod-`m` analogues.

use std::collections::HashMap;

use crate::derivations::{Deriv, Derivation};
use crate::rings::IntPoly;
use crate::words::{brace_word, bracket_word, reduce_mod, Presentation, Side, Word, A, S, T};

use super::tape::Tape;
use super::FillError;

/// Memoized change-of-basis derivations for one modulus (or none).
pub(crate) struct ShiftCache {
    pres: Presentation,
    modulus: Option<u64>,
    memo: HashMap<(IntPoly, Side), Deriv>,
}

impl ShiftCache {
    pub(crate) fn new(modulus: Option<u64>) -> Result<Self, FillError> {
        let pres = match modulus {
            Some(m) if m < 2 => {
                return Err(FillError::OutOfRange(format!(
                    "modulus {m} must be at least 2"
                )))
            }
            Some(m) => Presentation::gamma_m(m)?,
            None => Presentation::gamma(),
        };
        Ok(ShiftCache {
            pres,
            modulus,
            memo: HashMap::new(),
        })
    }

    fn template(&self, f: &IntPoly, r: crate::words::Gen, side: Side) -> Result<Word, FillError> {
        Ok(match self.modulus {
            Some(m) => brace_word(f, m, r, side)?,
            None => bracket_word(f, r)?,
        })
    }

    fn normalize(&self, f: &IntPoly) -> Result<IntPoly, FillError> {
        Ok(match self.modulus {
            Some(m) => reduce_mod(f, m)?,
            None => f.clone(),
        })
    }

    /// Template over `s` for `f` → template over `t` for `f(x+1)`.
    pub(crate) fn shift(&mut self, f: &IntPoly, side: Side) -> Result<Deriv, FillError> {
        let f = self.normalize(f)?;
        if let Some(d) = self.memo.get(&(f.clone(), side)) {
            return Ok(d.clone());
        }
        let d = self.build(&f, side)?;
        self.memo.insert((f, side), d.clone());
        Ok(d)
    }

    fn build(&mut self, f: &IntPoly, side: Side) -> Result<Deriv, FillError> {
        let n = match f.degree() {
            None | Some(0) => return Ok(Derivation::identity(&self.template(f, S, side)?)),
            Some(n) => n,
        };
        let c0 = f.coeff(0);
        let rest: Vec<_> = f.coeffs()[1..].to_vec();
        let fhat = match self.modulus {
            Some(m) => IntPoly::new_mod(rest, m)?,
            None => IntPoly::new(rest),
        };
        let child = self.shift(&fhat, side)?;
        let g = self.normalize(&fhat.shift_arg(1))?;
        let c0 =
            i64::try_from(&c0).map_err(|_| FillError::OutOfRange(format!("coefficient {c0}")))?;
        let head = Word::pow(A, c0);
        let s = Word::gen(S);
        let inner = self.template(&g, T, side)?;
        let target = self.template(&f.shift_arg(1), T, side)?;
        let (pre, start) = match side {
            Side::Right => (
                Derivation::juxtapose(
                    Derivation::identity(&head),
                    Derivation::conjugate(child, &s),
                ),
                Word::concat_all([&head, &inner.conjugate(&s)]),
            ),
            Side::Left => (
                Derivation::juxtapose(
                    Derivation::conjugate(child, &s),
                    Derivation::identity(&head),
                ),
                Word::concat_all([&inner.conjugate(&s), &head]),
            ),
        };
        let mut tape = Tape::new(&self.pres, &start);
        let s_pos = if side == Side::Right {
            c0.unsigned_abs() as usize
        } else {
            0
        };
        let s_pos = tape.push_s_inverse(s_pos)?;
        // s⁻¹ s now adjacent
        let mut letters = tape.letters().to_vec();
        letters.drain(s_pos..s_pos + 2);
        tape.set(letters)?;
        let len = tape.letters().len();
        tape.collect(0, len, side == Side::Right, self.modulus)?;
        let leaf = tape.finish_at(&target)?;
        debug_assert!(n >= 1);
        Ok(Derivation::concat(vec![pre, leaf])?)
    }
}

/// `⟦a⟧_s^{f(x)} → ⟦a⟧_t^{f(x+1)}` over Γ.
pub fn shift_basis(f: &IntPoly) -> Result<Deriv, FillError> {
    if f.modulus().is_some() {
        return Err(FillError::OutOfRange(
            "shift_basis takes an integer polynomial".into(),
        ));
    }
    ShiftCache::new(None)?.shift(f, Side::Right)
}

/// `{{a}}_s^{f(x)} → {{a}}_t^{f(x+1)}` (or the left-handed templates) over
/// Γ_m, keeping exponents in `0..m`.
pub fn shift_basis_mod(f: &IntPoly, m: u64, side: Side) -> Result<Deriv, FillError> {
    ShiftCache::new(Some(m))?.shift(f, side)
}
