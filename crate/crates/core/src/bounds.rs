//! Lower bounds on area, an exhaustive small-word oracle, and growth tables.

use std::collections::{HashMap, HashSet};

use num_bigint::{BigInt, BigUint};
use thiserror::Error;

use crate::derivations::{Deriv, Derivation, DerivationError, Move, RelatorFactor};
use crate::fillers::{budget::c4n, fill_commutator, FillError};
use crate::reps::{eval_ghat, eval_heis, h_coords, is_identity, HCoords, Mat3Hat, RepError};
use crate::rings::RingError;
use crate::words::{
    commutator, commutator_word, invert_letters, reduce_letters, Letter, Presentation,
    PresentationKind, Word, A, B, S, T,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("word `{word}` is not null in {group}")]
    NotNull { word: Word, group: String },
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Fill(#[from] FillError),
    #[error(transparent)]
    Derivation(#[from] DerivationError),
}

/// `F_n` with `F_0 = 0`, `F_1 = 1`.
pub fn fibonacci(n: u64) -> BigUint {
    let (mut a, mut b) = (BigUint::from(0u32), BigUint::from(1u32));
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

fn require_null(w: &Word, pres: &Presentation) -> Result<(), BoundsError> {
    if is_identity(w, pres)? {
        Ok(())
    } else {
        Err(BoundsError::NotNull {
            word: w.clone(),
            group: pres.name().to_string(),
        })
    }
}

/// `|λ| + |μ|` for the image `p^λ q^μ` of a null word of Γ in the central
/// subgroup of `Γ̄`: a lower bound on the area of `w` over Γ.
pub fn area_lower(w: &Word) -> Result<BigUint, BoundsError> {
    require_null(w, &Presentation::gamma())?;
    let h = h_coords(w)?;
    Ok(h.length().magnitude().clone())
}

/// The `c`-exponent of `[aⁿ, bⁿ]` in the Heisenberg group, `n²`.
pub fn heisenberg_area_lower(n: u64) -> Result<BigUint, BoundsError> {
    let e = i64::try_from(n).map_err(|_| BoundsError::OutOfRange(format!("n = {n}")))?;
    let w = commutator(&Word::pow(A, e), &Word::pow(B, e));
    Ok(eval_heis(&w)?.z.magnitude().clone())
}

/// Parity of the `s`- and `t`-exponents: conjugation by `s` or `t` inverts
/// the central subgroup, conjugation by `a` fixes it.
fn flips(w: &Word) -> bool {
    (w.exponent_sum(S) + w.exponent_sum(T)).rem_euclid(2) == 1
}

/// Sums the central images of a relator product of Γ (or Γ_m).
///
/// Factors of the three relators of Γ are central in `Γ̄`, so they add up
/// with a sign per conjugation. Factors `a^{±m}` are not central and are
/// multiplied in order in `Ĝ`. The result is the `H`-coordinate pair of
/// the product, which must be central.
pub fn transport_h_coords(
    factors: &[RelatorFactor],
    pres: &Presentation,
) -> Result<HCoords, BoundsError> {
    if !matches!(
        pres.kind(),
        PresentationKind::Gamma | PresentationKind::GammaM(_)
    ) {
        return Err(BoundsError::OutOfRange(format!(
            "no H-coordinates over {}",
            pres.name()
        )));
    }
    let base: Vec<HCoords> = pres.relators()[..3]
        .iter()
        .map(h_coords)
        .collect::<Result<_, _>>()?;
    let mut lambda = BigInt::from(0);
    let mut mu = BigInt::from(0);
    let mut torsion = Mat3Hat::identity();
    for f in factors {
        if f.relator < 3 {
            let h = &base[f.relator];
            let negate = f.inverted ^ flips(&f.conjugator);
            if negate {
                lambda -= &h.lambda;
                mu -= &h.mu;
            } else {
                lambda += &h.lambda;
                mu += &h.mu;
            }
        } else {
            let r = &pres.relators()[f.relator];
            let r = if f.inverted { r.inverse() } else { r.clone() };
            torsion = torsion.mul(&eval_ghat(&r.conjugate(&f.conjugator))?)?;
        }
    }
    let central = HCoords { lambda, mu }.corner();
    let total = torsion.mul(&Mat3Hat::corner(central))?;
    let corner = total.as_corner().ok_or_else(|| {
        BoundsError::Rep(RepError::Invariant(
            "relator product is not central in Ĝ".into(),
        ))
    })?;
    Ok(HCoords::from_corner(corner))
}

/// Outcome of [`area_exact`].
#[derive(Clone, Debug)]
pub enum AreaSearch {
    /// A derivation of least cost among those the search can see.
    Exact { area: u64, deriv: Deriv },
    /// No derivation of cost below `lower` within the caps.
    Unknown { lower: u64 },
}

impl AreaSearch {
    pub fn exact(&self) -> Option<u64> {
        match self {
            AreaSearch::Exact { area, .. } => Some(*area),
            AreaSearch::Unknown { .. } => None,
        }
    }
}

/// Default caps for [`area_exact`]: `(max_cost, max_len)`.
pub fn default_caps(w: &Word) -> (u64, usize) {
    (6, w.len() + 8)
}

/// Breadth-first search for a least-cost derivation `w → ε`.
///
/// States are freely reduced words of length at most `max_len`; a step
/// inserts a cyclic conjugate of a relator or its inverse anywhere and
/// reduces. Minimality holds relative to this move space and the caps.
pub fn area_exact(
    w: &Word,
    pres: &Presentation,
    max_cost: u64,
    max_len: usize,
) -> Result<AreaSearch, BoundsError> {
    require_null(w, pres)?;
    if w.len() > max_len {
        return Err(BoundsError::OutOfRange(format!(
            "word length {} exceeds max_len {max_len}",
            w.len()
        )));
    }
    let pieces = relator_rotations(pres);
    let start = reduce_letters(w.letters());
    let mut parent: HashMap<Vec<Letter>, (Vec<Letter>, usize, usize)> = HashMap::new();
    let mut seen: HashSet<Vec<Letter>> = HashSet::from([start.clone()]);
    let mut frontier = vec![start.clone()];
    let mut depth = 0u64;
    while !frontier.iter().any(|s| s.is_empty()) {
        if depth == max_cost || frontier.is_empty() {
            return Ok(AreaSearch::Unknown { lower: depth + 1 });
        }
        let mut next = Vec::new();
        for cur in &frontier {
            for pos in 0..=cur.len() {
                for (k, piece) in pieces.iter().enumerate() {
                    let mut cand = cur[..pos].to_vec();
                    cand.extend_from_slice(piece);
                    cand.extend_from_slice(&cur[pos..]);
                    let cand = reduce_letters(cand);
                    if cand.len() <= max_len && seen.insert(cand.clone()) {
                        parent.insert(cand.clone(), (cur.clone(), pos, k));
                        next.push(cand);
                    }
                }
            }
        }
        frontier = next;
        depth += 1;
    }
    let mut path = Vec::new();
    let mut cur: Vec<Letter> = Vec::new();
    while let Some((prev, pos, k)) = parent.get(&cur) {
        path.push((*pos, *k));
        cur = prev.clone();
    }
    path.reverse();
    let deriv = replay_insertions(pres, w, &start, &pieces, &path)?;
    Ok(AreaSearch::Exact { area: depth, deriv })
}

fn replay_insertions(
    pres: &Presentation,
    w: &Word,
    start: &[Letter],
    pieces: &[Vec<Letter>],
    path: &[(usize, usize)],
) -> Result<Deriv, BoundsError> {
    let mut moves = Vec::new();
    let mut cur = start.to_vec();
    let rels: Vec<Vec<Letter>> = pres
        .relators()
        .iter()
        .map(|r| reduce_letters(r.letters()))
        .collect();
    for &(pos, k) in path {
        let piece = &pieces[k];
        // piece = y x with r' = x y; insert r' between x⁻¹ and x
        let (relator, inverted, x, rel) = rels
            .iter()
            .enumerate()
            .flat_map(|(i, r)| [(i, false, r.clone()), (i, true, invert_letters(r))])
            .find_map(|(i, inv, r)| {
                (0..r.len())
                    .find(|&j| r[j..].iter().chain(&r[..j]).eq(piece.iter()))
                    .map(|j| (i, inv, r[..j].to_vec(), r.clone()))
            })
            .ok_or_else(|| BoundsError::Rep(RepError::Invariant("unknown relator piece".into())))?;
        let mut u = cur[..pos].to_vec();
        u.extend(invert_letters(&x));
        let mut v = x;
        v.extend_from_slice(&cur[pos..]);
        moves.push(Move {
            u: Word::from_letters(&u),
            alpha: Word::empty(),
            beta: Word::from_letters(&rel),
            v: Word::from_letters(&v),
            relator,
            inverted: !inverted,
        });
        let mut next = cur[..pos].to_vec();
        next.extend_from_slice(piece);
        next.extend_from_slice(&cur[pos..]);
        cur = reduce_letters(next);
    }
    Ok(Derivation::leaf(pres, w.clone(), moves, Word::empty())?)
}

/// All distinct cyclic rotations of the relators and their inverses.
fn relator_rotations(pres: &Presentation) -> Vec<Vec<Letter>> {
    let mut out: Vec<Vec<Letter>> = Vec::new();
    for r in pres.relators() {
        let r = reduce_letters(r.letters());
        for r in [r.clone(), invert_letters(&r)] {
            for j in 0..r.len() {
                let rot: Vec<Letter> = r[j..].iter().chain(&r[..j]).copied().collect();
                if !out.contains(&rot) {
                    out.push(rot);
                }
            }
        }
    }
    out
}

/// One row of the growth table for `[a, a^{tⁿ}]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthRow {
    pub n: u32,
    pub word_length: usize,
    pub lower: BigUint,
    pub cert_cost: BigUint,
    pub budget: BigUint,
}

pub fn growth_table(max_n: u32) -> Result<Vec<GrowthRow>, BoundsError> {
    if max_n == 0 {
        return Err(BoundsError::OutOfRange("max_n must be at least 1".into()));
    }
    (1..=max_n)
        .map(|n| {
            let w = commutator_word(n as i64);
            Ok(GrowthRow {
                n,
                word_length: w.len(),
                lower: area_lower(&w)?,
                cert_cost: fill_commutator(n)?.cost().clone(),
                budget: c4n(n as u64),
            })
        })
        .collect()
}
