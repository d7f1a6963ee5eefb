//! Derivations for `[a, a^{t^n}]` and the swaps built from them.

use crate::derivations::{Deriv, Derivation};
use crate::words::{commutator_word, Presentation, Word, A, S, T};

use super::tape::Tape;
use super::{in_context, inverted, FillError};

/// `a^{t^i}` as the word `t^{-i} a t^i`.
pub(crate) fn x(i: i64) -> Word {
    Word::gen(A).conjugate(&Word::pow(T, i))
}

/// `a^{μ t^γ}`.
pub(crate) fn x_pow(mu: i64, gamma: i64) -> Word {
    Word::pow(A, mu).conjugate(&Word::pow(T, gamma))
}

fn cat(parts: &[&Word]) -> Word {
    Word::concat_all(parts.iter().copied())
}

/// Memoized swaps `a a^{t^d} → a^{t^d} a`, shared across one fill.
pub struct SwapCache {
    pres: Presentation,
    swaps: Vec<Deriv>,
}

impl Default for SwapCache {
    fn default() -> Self {
        SwapCache::new()
    }
}

impl SwapCache {
    pub fn new() -> Self {
        SwapCache {
            pres: Presentation::gamma(),
            swaps: Vec::new(),
        }
    }

    /// `x₀ x_d → x_d x₀`.
    pub fn swap(&mut self, d: usize) -> Result<Deriv, FillError> {
        while self.swaps.len() <= d {
            let next = self.build(self.swaps.len())?;
            self.swaps.push(next);
        }
        Ok(self.swaps[d].clone())
    }

    fn build(&mut self, d: usize) -> Result<Deriv, FillError> {
        match d {
            0 => Ok(Derivation::identity(&cat(&[&x(0), &x(0)]))),
            1 => {
                let from = cat(&[&x(0), &x(1)]);
                let to = cat(&[&x(1), &x(0)]);
                let mut tape = Tape::new(&self.pres, &from);
                tape.replace(0, from.len(), &to.letters())?;
                tape.finish_at(&to)
            }
            _ => self.step(d as i64 - 1),
        }
    }

    /// `Swap_{n+1}` from `Swap_n`, `Swap_{n-1}` and `Swap_1`, at cost
    /// `3C(n) + C(n-1) + 4n + 6`.
    fn step(&mut self, n: i64) -> Result<Deriv, FillError> {
        let sw_n = self.swaps[n as usize].clone();
        let sw_prev = self.swaps[n as usize - 1].clone();
        let sw_1 = self.swaps[1].clone();
        let (x0, x1, xn, xn1) = (x(0), x(1), x(n), x(n + 1));
        let s = Word::gen(S);
        let t = Word::gen(T);
        let tn = Word::pow(T, n);

        // (x₀ x_n)^s → x₀ x₁ x_n x_{n+1} and (x_n x₀)^s → x_n x_{n+1} x₀ x₁
        let e = self.push_through_s(&cat(&[&x0, &xn]), &cat(&[&x0, &x1, &xn, &xn1]))?;
        let e_prime = self.push_through_s(&cat(&[&xn, &x0]), &cat(&[&xn, &xn1, &x0, &x1]))?;
        let phi = Derivation::concat(vec![
            Derivation::mirror(e),
            Derivation::conjugate(sw_n.clone(), &s),
            e_prime,
        ])?;

        let steps = vec![
            // x₀ x_{n+1} x₁ x_n → x₀ x₁ x_{n+1} x_n
            in_context(
                &x0,
                Derivation::mirror(Derivation::conjugate(sw_n.clone(), &t)),
                &xn,
            ),
            // → x₀ x₁ x_n x_{n+1}
            in_context(
                &cat(&[&x0, &x1]),
                Derivation::mirror(Derivation::conjugate(sw_1.clone(), &tn)),
                &Word::empty(),
            ),
            // → x_n x_{n+1} x₀ x₁
            phi,
            // → x_{n+1} x_n x₀ x₁
            in_context(
                &Word::empty(),
                Derivation::conjugate(sw_1, &tn),
                &cat(&[&x0, &x1]),
            ),
            // → x_{n+1} x₀ x_n x₁
            in_context(&xn1, Derivation::mirror(sw_n), &x1),
            // → x_{n+1} x₀ x₁ x_n
            in_context(
                &cat(&[&xn1, &x0]),
                Derivation::mirror(Derivation::conjugate(sw_prev, &t)),
                &Word::empty(),
            ),
        ];
        let body = Derivation::concat(steps)?;
        Ok(in_context(
            &Word::empty(),
            body,
            &cat(&[&x1, &xn]).inverse(),
        ))
    }

    /// `w^s → target` for `w` over `{a, t}`, pushing `s⁻¹` through `w`.
    fn push_through_s(&self, w: &Word, target: &Word) -> Result<Deriv, FillError> {
        let mut tape = Tape::new(&self.pres, &w.conjugate(&Word::gen(S)));
        tape.push_s_inverse(0)?;
        tape.finish_at(target)
    }

    /// `x_i x_j → x_j x_i`.
    fn positive_swap(&mut self, i: i64, j: i64) -> Result<Deriv, FillError> {
        if i < j {
            let d = self.swap((j - i) as usize)?;
            Ok(Derivation::conjugate(d, &Word::pow(T, i)))
        } else {
            let d = self.swap((i - j) as usize)?;
            Ok(Derivation::mirror(Derivation::conjugate(
                d,
                &Word::pow(T, j),
            )))
        }
    }

    /// `x_i^{e₁} x_j^{e₂} → x_j^{e₂} x_i^{e₁}` for signs `e₁, e₂`, `i ≠ j`.
    pub fn letter_swap(&mut self, i: i64, e1: i64, j: i64, e2: i64) -> Result<Deriv, FillError> {
        if i == j {
            return Err(FillError::Internal("swap of letters at equal depth".into()));
        }
        Ok(match (e1 > 0, e2 > 0) {
            (true, true) => self.positive_swap(i, j)?,
            (false, true) => {
                let xi = x(i).inverse();
                in_context(&xi, self.positive_swap(j, i)?, &xi)
            }
            (true, false) => {
                let xj = x(j).inverse();
                in_context(&xj, self.positive_swap(j, i)?, &xj)
            }
            (false, false) => inverted(&self.positive_swap(j, i)?),
        })
    }

    /// `a^{μ t^i} a^{ν t^j} → a^{ν t^j} a^{μ t^i}` at cost `|μν| C(|i-j|)`.
    pub fn block_swap(
        &mut self,
        (mu, i): (i64, i64),
        (nu, j): (i64, i64),
    ) -> Result<Deriv, FillError> {
        let single = self.letter_swap(i, mu.signum(), j, nu.signum())?;
        let y = x_pow(nu.signum(), j);
        let xm = x_pow(mu, i);
        // X^{|μ|} y → y X^{|μ|}
        let b1 = if mu.abs() == 1 {
            single
        } else {
            let conj = in_context(&y.inverse(), single, &Word::empty());
            in_context(
                &y,
                Derivation::power(conj, mu.unsigned_abs()),
                &Word::empty(),
            )
        };
        if nu.abs() == 1 {
            return Ok(b1);
        }
        let g = in_context(&xm.inverse(), b1, &Word::empty());
        Ok(in_context(
            &xm,
            Derivation::power(g, nu.unsigned_abs()),
            &Word::empty(),
        ))
    }
}

/// A derivation of `[a, a^{t^n}]` to the empty word over Γ.
pub fn fill_commutator(n: u32) -> Result<Deriv, FillError> {
    let n = n as i64;
    let w = commutator_word(n);
    if n == 0 {
        return Ok(Derivation::free(&w, &Word::empty())?);
    }
    let sw = SwapCache::new().swap(n as usize)?;
    let d = in_context(&cat(&[&x(n), &x(0)]).inverse(), sw, &Word::empty());
    debug_assert!(d.from().free_eq(&w) && d.to().is_empty());
    Ok(d)
}

/// Costs predicted by `C(n+1) = 3C(n) + C(n-1) + 4n + 6`, `C(1) = 1`.
#[cfg(test)]
pub(crate) fn recurrence(n: u32) -> num_bigint::BigInt {
    use num_bigint::BigInt;
    let mut c = vec![BigInt::from(0), BigInt::from(1)];
    for k in 1..n as i64 {
        let next = 3 * &c[k as usize] + &c[k as usize - 1] + 4 * k + 6;
        c.push(next);
    }
    c[n as usize].clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivations::{verify_derivation, VerifyMode, DEFAULT_REPLAY_CAP};
    use num_bigint::BigUint;

    #[test]
    fn small_commutators_replay() {
        let pres = Presentation::gamma();
        for n in 0..=6u32 {
            let d = fill_commutator(n).unwrap();
            assert!(d.from().free_eq(&commutator_word(n as i64)));
            assert!(d.to().is_empty());
            for mode in [VerifyMode::Replay, VerifyMode::Structural] {
                let r = verify_derivation(&d, &pres, mode, DEFAULT_REPLAY_CAP).unwrap();
                assert!(r.valid, "n={n} {mode:?}: {:?}", r.failure);
            }
            let expect = recurrence(n).to_biguint().unwrap();
            assert_eq!(d.cost(), &expect, "n={n}");
        }
    }

    #[test]
    fn letter_and_block_swaps() {
        let pres = Presentation::gamma();
        let mut cache = SwapCache::new();
        for (i, j) in [(0, 2), (3, 1), (-1, 2)] {
            for e1 in [-1, 1] {
                for e2 in [-1, 1] {
                    let d = cache.letter_swap(i, e1, j, e2).unwrap();
                    assert!(d.from().free_eq(&x_pow(e1, i).concat(&x_pow(e2, j))));
                    assert!(d.to().free_eq(&x_pow(e2, j).concat(&x_pow(e1, i))));
                    assert!(
                        verify_derivation(&d, &pres, VerifyMode::Replay, DEFAULT_REPLAY_CAP)
                            .unwrap()
                            .valid
                    );
                }
            }
        }
        let d = cache.block_swap((3, 0), (-2, 2)).unwrap();
        assert!(d.from().free_eq(&x_pow(3, 0).concat(&x_pow(-2, 2))));
        assert!(d.to().free_eq(&x_pow(-2, 2).concat(&x_pow(3, 0))));
        assert_eq!(
            d.cost(),
            &(BigUint::from(6u32) * cache.swap(2).unwrap().cost())
        );
        assert!(
            verify_derivation(&d, &pres, VerifyMode::Replay, DEFAULT_REPLAY_CAP)
                .unwrap()
                .valid
        );
    }
}
