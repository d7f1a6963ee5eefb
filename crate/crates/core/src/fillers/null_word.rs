//! Fillers for arbitrary null words of Γ and Γ_m, organized in stages so
//! that each stage can be checked against its own budget.

use num_bigint::BigUint;
use num_traits::{Pow, Zero};

use crate::derivations::{Deriv, Derivation};
use crate::reps::is_identity;
use crate::rings::IntPoly;
use crate::words::{
    brace_word, invert_letters, reduce_letters, reduce_mod, ConjFactor, Letter, Presentation, Side,
    TPowerProduct, Word, A, S, T,
};

use super::budget::{dc, km};
use super::commutator::SwapCache;
use super::shift::ShiftCache;
use super::tape::Tape;
use super::{in_context, inverted, juxtapose_all, tau, FillError};

/// One stage of a staged fill: its endpoints, realized cost and budget.
#[derive(Clone, Debug)]
pub struct StageReport {
    pub label: String,
    pub from: Word,
    pub to: Word,
    pub cost: BigUint,
    pub budget: BigUint,
}

impl StageReport {
    fn new(label: &str, d: &Deriv, budget: BigUint) -> Self {
        StageReport {
            label: label.to_string(),
            from: d.from().clone(),
            to: d.to().clone(),
            cost: d.cost().clone(),
            budget,
        }
    }

    pub fn within_budget(&self) -> bool {
        self.cost <= self.budget
    }
}

/// A complete fill together with its per-stage accounting.
#[derive(Clone, Debug)]
pub struct StagedFill {
    pub deriv: Deriv,
    pub stages: Vec<StageReport>,
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn cube(n: u64) -> BigUint {
    big(n).pow(3u32)
}

/// `s^p t^q → t^q s^p`.
fn st_leaf(pres: &Presentation, p: i64, q: i64) -> Result<Deriv, FillError> {
    let from = Word::from_syllables([(S, p), (T, q)]);
    let mut tape = Tape::new(pres, &from);
    let len = tape.letters().len();
    tape.sort_st(0, len, T)?;
    tape.finish_at(&Word::from_syllables([(T, q), (S, p)]))
}

/// `w → Π a^{ε_i s^{α_i} t^{β_i}}`, one factor per `a`-letter of `w`.
fn to_conjugates(pres: &Presentation, w: &Word) -> Result<(Deriv, Vec<ConjFactor>), FillError> {
    let letters = reduce_letters(w.letters());
    let mut prefix: Vec<Letter> = Vec::new();
    let mut pieces = Vec::new();
    let mut factors = Vec::new();
    for l in letters {
        if l.gen != A {
            prefix.push(l);
            continue;
        }
        let mut start = prefix.clone();
        start.push(l);
        start.extend(invert_letters(&prefix));
        let mut tape = Tape::new(pres, &Word::from_letters(&start));
        let a_pos = tape.sort_st(0, prefix.len(), T)?;
        let len = tape.letters().len();
        tape.sort_st(a_pos + 1, len, S)?;
        let p: i64 = prefix.iter().filter(|x| x.gen == S).map(|x| x.exp()).sum();
        let q: i64 = prefix.iter().filter(|x| x.gen == T).map(|x| x.exp()).sum();
        let f = ConjFactor {
            sign: l.exp() as i8,
            alpha: -p,
            beta: -q,
        };
        pieces.push(tape.finish_at(&f.to_word())?);
        factors.push(f);
    }
    pieces.push(z2_sort(pres, &Word::from_letters(&prefix))?);
    Ok((juxtapose_all(pieces), factors))
}

/// Sorts a null word over `{s, t}` to the empty word with `[s, t]` moves.
fn z2_sort(pres: &Presentation, w: &Word) -> Result<Deriv, FillError> {
    let mut tape = Tape::new(pres, w);
    let len = tape.letters().len();
    tape.sort_st(0, len, T)?;
    tape.finish_at(&Word::empty())
}

/// Conjugates every factor by `t^β s^α` and normalizes it to
/// `a^{ε s^j t^b}` with `j = α_i - α`, `b = β_i - β`.
fn normalize_conjugators(
    pres: &Presentation,
    factors: &[ConjFactor],
    alpha: i64,
    beta: i64,
) -> Result<(Deriv, Vec<ConjFactor>), FillError> {
    let mut pieces = Vec::new();
    let mut out = Vec::new();
    for f in factors {
        let mid = Word::pow(A, f.sign as i64).conjugate(&Word::pow(S, f.alpha));
        let d = juxtapose_all([
            st_leaf(pres, alpha, -f.beta)?,
            Derivation::identity(&mid),
            Derivation::mirror(st_leaf(pres, -alpha, f.beta)?),
        ]);
        pieces.push(in_context(&Word::pow(T, beta), d, &Word::pow(T, -beta)));
        out.push(ConjFactor {
            sign: f.sign,
            alpha: f.alpha - alpha,
            beta: f.beta - beta,
        });
    }
    Ok((juxtapose_all(pieces), out))
}

fn check_null(w: &Word, pres: &Presentation) -> Result<(), FillError> {
    if is_identity(w, pres)? {
        Ok(())
    } else {
        Err(FillError::NotNull {
            word: w.clone(),
            group: pres.name().to_string(),
        })
    }
}

fn has_a(w: &Word) -> bool {
    w.generators().any(|g| g == A)
}

fn z2_only(pres: &Presentation, w: &Word) -> Result<StagedFill, FillError> {
    let d = z2_sort(pres, w)?;
    let n = w.len() as u64;
    Ok(StagedFill {
        stages: vec![StageReport::new("sort s and t", &d, big(n * n))],
        deriv: d,
    })
}

/// A derivation of the null word `w` to the empty word over Γ.
pub fn fill_null_word(w: &Word) -> Result<Deriv, FillError> {
    Ok(fill_null_word_staged(w)?.deriv)
}

pub fn fill_null_word_staged(w: &Word) -> Result<StagedFill, FillError> {
    let pres = Presentation::gamma();
    check_null(w, &pres)?;
    if !has_a(w) {
        return z2_only(&pres, w);
    }
    let n = w.len() as u64;
    let (d_a, factors) = to_conjugates(&pres, w)?;
    let alpha = factors.iter().map(|f| f.alpha).min().unwrap_or(0);
    let (d_b, factors) = normalize_conjugators(&pres, &factors, alpha, 0)?;

    let mut shifts = ShiftCache::new(None)?;
    let mut pieces = Vec::new();
    let mut terms = Vec::new();
    for f in &factors {
        let j = f.alpha as usize;
        let d = Derivation::conjugate(
            shifts.shift(&IntPoly::monomial(1, j), Side::Right)?,
            &Word::pow(T, f.beta),
        );
        let coeffs = IntPoly::monomial(1, j).shift_arg(1);
        let mut block: Vec<(i64, i64)> = (0..=j)
            .map(|k| {
                let c = i64::try_from(coeffs.coeff(k)).expect("binomial fits in i64");
                (c, f.beta + k as i64)
            })
            .collect();
        if f.sign < 0 {
            block.reverse();
            block.iter_mut().for_each(|t| t.0 = -t.0);
            pieces.push(inverted(&d));
        } else {
            pieces.push(d);
        }
        terms.extend(block);
    }
    let d_c = juxtapose_all(pieces);
    let w5 = TPowerProduct {
        terms: terms.clone(),
    }
    .to_word();
    let d_d = Derivation::free(d_c.to(), &w5)?;
    let d_e = sort_terms(terms)?;

    let l = big(2).pow(2 * n) * big(2 * n + 1) * big(n);
    let stages = vec![
        StageReport::new("conjugate form", &d_a, big(2) * cube(n)),
        StageReport::new("common s-exponent", &d_b, big(2) * cube(n)),
        StageReport::new("change of basis", &d_c, big(n) * dc(1, 2 * n)),
        StageReport::new("expand", &d_d, BigUint::zero()),
        StageReport::new("reorder", &d_e, &l * &l * big(4).pow(6 * n)),
    ];
    let tail = Derivation::concat(vec![d_b, d_c, d_e])?;
    let u = Word::pow(S, -alpha);
    let deriv = Derivation::concat(vec![d_a, Derivation::conjugate(tail, &u.inverse())])?;
    Ok(StagedFill { deriv, stages })
}

/// Insertion-sorts `Π a^{μ_i t^{γ_i}}` by `γ`, merging equal depths for
/// free. The product must collapse to the empty word.
fn sort_terms(mut list: Vec<(i64, i64)>) -> Result<Deriv, FillError> {
    let start = TPowerProduct {
        terms: list.clone(),
    }
    .to_word();
    let mut swaps = SwapCache::new();
    let mut pieces = vec![Derivation::identity(&start)];
    let mut i = 0;
    while i < list.len() {
        let mut p = i;
        while p > 0 && list[p - 1].1 > list[p].1 {
            let prefix = TPowerProduct {
                terms: list[..p - 1].to_vec(),
            }
            .to_word();
            let suffix = TPowerProduct {
                terms: list[p + 1..].to_vec(),
            }
            .to_word();
            let d = swaps.block_swap(list[p - 1], list[p])?;
            pieces.push(in_context(&prefix, d, &suffix));
            list.swap(p - 1, p);
            p -= 1;
        }
        if p > 0 && list[p - 1].1 == list[p].1 {
            list[p - 1].0 += list[p].0;
            list.remove(p);
            if list[p - 1].0 == 0 {
                list.remove(p - 1);
                i -= 1;
            }
        } else {
            i += 1;
        }
    }
    if !list.is_empty() {
        return Err(FillError::Internal(format!(
            "terms {list:?} survive reordering"
        )));
    }
    pieces.push(Derivation::identity(&Word::empty()));
    Ok(Derivation::concat(pieces)?)
}

/// A derivation of the null word `w` to the empty word over Γ_m.
pub fn fill_null_word_mod(w: &Word, m: u64) -> Result<Deriv, FillError> {
    Ok(fill_null_word_mod_staged(w, m)?.deriv)
}

pub fn fill_null_word_mod_staged(w: &Word, m: u64) -> Result<StagedFill, FillError> {
    if m < 2 {
        return Err(FillError::OutOfRange(format!(
            "modulus {m} must be at least 2"
        )));
    }
    let pres = Presentation::gamma_m(m)?;
    check_null(w, &pres)?;
    if !has_a(w) {
        return z2_only(&pres, w);
    }
    let n = w.len() as u64;
    let (d_a, factors) = to_conjugates(&pres, w)?;
    let alpha = factors.iter().map(|f| f.alpha).min().unwrap_or(0);
    let beta = factors.iter().map(|f| f.beta).min().unwrap_or(0);
    let (d_b, factors) = normalize_conjugators(&pres, &factors, alpha, beta)?;

    let brace = |p: &IntPoly| brace_word(p, m, T, Side::Right);
    let mut shifts = ShiftCache::new(Some(m))?;
    let mut shifted = Vec::new();
    let mut flips = Vec::new();
    let mut polys = Vec::new();
    for f in &factors {
        let tb = Word::pow(T, f.beta);
        let d = Derivation::conjugate(
            shifts.shift(&IntPoly::monomial(1, f.alpha as usize), Side::Right)?,
            &tb,
        );
        let h = reduce_mod(&IntPoly::monomial(1, f.alpha as usize).shift_arg(1), m)?;
        if f.sign > 0 {
            flips.push(Derivation::identity(d.to()));
            shifted.push(d);
            polys.push(h.mul_x_pow(f.beta as usize));
        } else {
            let neg = reduce_mod(&-&h, m)?;
            let fill = tau::fill(&mut shifts, &h, &neg, m)?;
            let flip = Derivation::mirror(in_context(&brace(&h)?.inverse(), fill, &Word::empty()));
            flips.push(Derivation::conjugate(flip, &tb));
            shifted.push(inverted(&d));
            polys.push(neg.mul_x_pow(f.beta as usize));
        }
    }
    let d_c = juxtapose_all(shifted);
    let d_d = juxtapose_all(flips);

    let words: Vec<Word> = polys.iter().map(&brace).collect::<Result<_, _>>()?;
    let mut merges = vec![Derivation::free(d_d.to(), &Word::concat_all(&words))?];
    let mut acc = polys[0].clone();
    for (i, g) in polys.iter().enumerate().skip(1) {
        let sum = &acc + g;
        let fill = tau::fill(&mut shifts, &acc, g, m)?;
        let merge = in_context(&Word::empty(), fill, &brace(&sum)?);
        let rest = Word::concat_all(&words[i + 1..]);
        merges.push(in_context(&Word::empty(), merge, &rest));
        acc = sum;
    }
    if !acc.is_zero() {
        return Err(FillError::Internal(format!(
            "merged polynomial {acc} is not zero"
        )));
    }
    let d_e = Derivation::concat(merges)?;

    let k = km(m, n);
    let quad = big(6) * big(n) * big(n) * &k + big(4) * big(m) * big(n) * big(n);
    let stages = vec![
        StageReport::new("conjugate form", &d_a, big(2) * cube(n)),
        StageReport::new("common conjugator", &d_b, big(2) * cube(n)),
        StageReport::new("change of basis", &d_c, big(n) * &k),
        StageReport::new("sign flips", &d_d, quad.clone()),
        StageReport::new("merge", &d_e, quad),
    ];
    let tail = Derivation::concat(vec![d_b, d_c, d_d, d_e])?;
    let u = Word::from_syllables([(S, -alpha), (T, -beta)]);
    let deriv = Derivation::concat(vec![d_a, Derivation::conjugate(tail, &u.inverse())])?;
    Ok(StagedFill { deriv, stages })
}
