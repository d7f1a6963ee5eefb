//! Words over named generators, free reduction, the built-in presentations
//! and the word templates used by the area constructions.
//!
//! Conventions: `[x, y] = x⁻¹ y⁻¹ x y` and `x^y = y⁻¹ x y`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::rings::{IntPoly, RingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("generator `{0}` is not in the alphabet of {1}")]
    ForeignGenerator(Gen, String),
    #[error("operation {0:?} needs a second operand")]
    MissingOperand(WordOp),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("coefficient {0} does not fit in a word exponent")]
    ExponentOverflow(BigInt),
}

/// A generator symbol. Every built-in alphabet uses single lowercase letters.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gen(pub char);

pub const A: Gen = Gen('a');
pub const S: Gen = Gen('s');
pub const T: Gen = Gen('t');
pub const P: Gen = Gen('p');
pub const Q: Gen = Gen('q');
pub const B: Gen = Gen('b');
pub const C: Gen = Gen('c');

impl fmt::Debug for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A single letter `gen^{±1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: Gen,
    pub positive: bool,
}

impl Letter {
    pub fn new(gen: Gen, positive: bool) -> Self {
        Letter { gen, positive }
    }

    pub fn inverse(self) -> Self {
        Letter::new(self.gen, !self.positive)
    }

    pub fn exp(self) -> i64 {
        if self.positive {
            1
        } else {
            -1
        }
    }
}

/// Free reduction of a letter sequence.
pub fn reduce_letters(letters: impl IntoIterator<Item = Letter>) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for l in letters {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn invert_letters(letters: &[Letter]) -> Vec<Letter> {
    letters.iter().rev().map(|l| l.inverse()).collect()
}

/// A word stored as syllables `gen^exp` with nonzero exponents. Adjacent
/// syllables may share a generator; `free_reduce` merges them.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Word {
    syl: Vec<(Gen, i64)>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn gen(g: Gen) -> Self {
        Word::pow(g, 1)
    }

    pub fn pow(g: Gen, e: i64) -> Self {
        let mut w = Word::empty();
        w.push(g, e);
        w
    }

    pub fn from_syllables(syl: impl IntoIterator<Item = (Gen, i64)>) -> Self {
        let mut w = Word::empty();
        for (g, e) in syl {
            w.push(g, e);
        }
        w
    }

    pub fn from_letters(letters: &[Letter]) -> Self {
        let mut w = Word::empty();
        for l in letters {
            match w.syl.last_mut() {
                Some((g, e)) if *g == l.gen && (*e > 0) == l.positive => *e += l.exp(),
                _ => w.syl.push((l.gen, l.exp())),
            }
        }
        w
    }

    pub fn syllables(&self) -> &[(Gen, i64)] {
        &self.syl
    }

    /// Appends `g^e`; a zero exponent is skipped.
    pub fn push(&mut self, g: Gen, e: i64) {
        if e != 0 {
            self.syl.push((g, e));
        }
    }

    pub fn is_empty(&self) -> bool {
        self.syl.is_empty()
    }

    /// Number of letters.
    pub fn len(&self) -> usize {
        self.syl
            .iter()
            .map(|(_, e)| e.unsigned_abs() as usize)
            .sum()
    }

    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::with_capacity(self.len());
        self.extend_letters(&mut out);
        out
    }

    pub fn extend_letters(&self, out: &mut Vec<Letter>) {
        for &(g, e) in &self.syl {
            let l = Letter::new(g, e > 0);
            out.extend(std::iter::repeat_n(l, e.unsigned_abs() as usize));
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut syl = Vec::with_capacity(self.syl.len() + other.syl.len());
        syl.extend_from_slice(&self.syl);
        syl.extend_from_slice(&other.syl);
        Word { syl }
    }

    pub fn concat_all<'a>(parts: impl IntoIterator<Item = &'a Word>) -> Word {
        let mut w = Word::empty();
        for p in parts {
            w.syl.extend_from_slice(&p.syl);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word {
            syl: self.syl.iter().rev().map(|&(g, e)| (g, -e)).collect(),
        }
    }

    /// `by⁻¹ · self · by`.
    pub fn conjugate(&self, by: &Word) -> Word {
        Word::concat_all([&by.inverse(), self, by])
    }

    /// `self^k`; negative `k` repeats the inverse.
    pub fn power(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::empty();
        for _ in 0..k.unsigned_abs() {
            w.syl.extend_from_slice(&base.syl);
        }
        w
    }

    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<(Gen, i64)> = Vec::with_capacity(self.syl.len());
        for &(g, e) in &self.syl {
            match out.last_mut() {
                Some((h, f)) if *h == g => {
                    *f += e;
                    if *f == 0 {
                        out.pop();
                    }
                }
                _ => out.push((g, e)),
            }
        }
        Word { syl: out }
    }

    pub fn is_reduced(&self) -> bool {
        self.syl.windows(2).all(|w| w[0].0 != w[1].0)
    }

    pub fn free_eq(&self, other: &Word) -> bool {
        self.free_reduce() == other.free_reduce()
    }

    pub fn exponent_sum(&self, g: Gen) -> i64 {
        self.syl
            .iter()
            .filter(|(h, _)| *h == g)
            .map(|(_, e)| e)
            .sum()
    }

    pub fn generators(&self) -> impl Iterator<Item = Gen> + '_ {
        self.syl.iter().map(|(g, _)| *g)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

/// Prints in the CLI word grammar, e.g. `a^-1 t^2 s`; the empty word is `1`.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syl.is_empty() {
            return write!(f, "1");
        }
        for (i, (g, e)) in self.syl.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if *e == 1 {
                write!(f, "{g}")?;
            } else {
                write!(f, "{g}^{e}")?;
            }
        }
        Ok(())
    }
}

/// `[x, y] = x⁻¹ y⁻¹ x y`.
pub fn commutator(x: &Word, y: &Word) -> Word {
    Word::concat_all([&x.inverse(), &y.inverse(), x, y])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WordOp {
    Concat,
    Invert,
    Conjugate,
}

pub fn word_compose(op: WordOp, u: &Word, v: Option<&Word>) -> Result<Word, WordError> {
    match op {
        WordOp::Invert => Ok(u.inverse()),
        WordOp::Concat => Ok(u.concat(v.ok_or(WordError::MissingOperand(op))?)),
        WordOp::Conjugate => Ok(u.conjugate(v.ok_or(WordError::MissingOperand(op))?)),
    }
}

pub fn free_reduce(w: &Word) -> Word {
    w.free_reduce()
}

/// `[a, a^{t^n}]`.
pub fn commutator_word(n: i64) -> Word {
    let a = Word::gen(A);
    commutator(&a, &a.conjugate(&Word::pow(T, n)))
}

fn exponent(c: &BigInt) -> Result<i64, WordError> {
    c.to_i64()
        .ok_or_else(|| WordError::ExponentOverflow(c.clone()))
}

/// `a^{c0} r⁻¹ a^{c1} r⁻¹ … a^{cn} r^n`. Zero coefficients emit no `a`
/// block but keep their `r⁻¹` step.
pub fn bracket_word(f: &IntPoly, r: Gen) -> Result<Word, WordError> {
    let mut w = Word::empty();
    let Some(n) = f.degree() else {
        return Ok(w);
    };
    for (i, c) in f.coeffs().iter().enumerate() {
        w.push(A, exponent(c)?);
        if i < n {
            w.push(r, -1);
        }
    }
    w.push(r, n as i64);
    Ok(w)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Right,
    Left,
}

/// Reduces `f` mod `m`, accepting input that is already reduced mod `m`.
pub fn reduce_mod(f: &IntPoly, m: u64) -> Result<IntPoly, RingError> {
    match f.modulus() {
        None => f.mod_reduce(m),
        Some(k) if k == m => Ok(f.clone()),
        Some(k) => Err(RingError::ModulusMismatch {
            left: Some(k),
            right: Some(m),
        }),
    }
}

/// The mod-`m` templates: `Right` is `a^{c0} r⁻¹ a^{c1} … a^{cn} r^n` and
/// `Left` is `r^{-n} a^{cn} r a^{c(n-1)} … r a^{c0}`, with `c_i ∈ 0..m`.
pub fn brace_word(f: &IntPoly, m: u64, r: Gen, side: Side) -> Result<Word, WordError> {
    let f = reduce_mod(f, m)?;
    match side {
        Side::Right => bracket_word(&f.lift(), r),
        Side::Left => {
            let mut w = Word::empty();
            let Some(n) = f.degree() else {
                return Ok(w);
            };
            w.push(r, -(n as i64));
            for i in (0..=n).rev() {
                w.push(A, exponent(&f.coeff(i))?);
                if i > 0 {
                    w.push(r, 1);
                }
            }
            Ok(w)
        }
    }
}

/// `{{a}}_r^f {{a}}_r^g ({{a}}_r^{f+g})⁻¹` with `r` the basis letter
/// (`s` gives the σ words, `t` the τ words).
pub fn tau_sigma_word(f: &IntPoly, g: &IntPoly, m: u64, basis: Gen) -> Result<Word, WordError> {
    let f = reduce_mod(f, m)?;
    let g = reduce_mod(g, m)?;
    let sum = &f + &g;
    Ok(Word::concat_all([
        &brace_word(&f, m, basis, Side::Right)?,
        &brace_word(&g, m, basis, Side::Right)?,
        &brace_word(&sum, m, basis, Side::Right)?.inverse(),
    ]))
}

/// `Π a^{ε_i s^{α_i} t^{β_i}}`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ConjPowerForm {
    pub factors: Vec<ConjFactor>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConjFactor {
    pub sign: i8,
    pub alpha: i64,
    pub beta: i64,
}

impl ConjFactor {
    /// `t^{-β} s^{-α} a^ε s^α t^β`.
    pub fn to_word(&self) -> Word {
        let conj = Word::from_syllables([(S, self.alpha), (T, self.beta)]);
        Word::pow(A, self.sign as i64).conjugate(&conj)
    }
}

impl ConjPowerForm {
    pub fn to_word(&self) -> Word {
        Word::concat_all(
            self.factors
                .iter()
                .map(|f| f.to_word())
                .collect::<Vec<_>>()
                .iter(),
        )
    }
}

/// `Π a^{μ_i t^{γ_i}}`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TPowerProduct {
    pub terms: Vec<(i64, i64)>,
}

impl TPowerProduct {
    pub fn to_word(&self) -> Word {
        let mut w = Word::empty();
        for &(mu, gamma) in &self.terms {
            w.push(T, -gamma);
            w.push(A, mu);
            w.push(T, gamma);
        }
        w
    }

    /// Total absolute `a`-exponent.
    pub fn weight(&self) -> BigInt {
        self.terms
            .iter()
            .map(|(mu, _)| BigInt::from(mu.unsigned_abs()))
            .fold(BigInt::zero(), |a, b| a + b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PresentationKind {
    Gamma,
    GammaM(u64),
    GammaBar,
    Z2,
    Heis,
    Z2C,
}

/// A finite presentation with reduced relators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    name: String,
    kind: PresentationKind,
    alphabet: Vec<Gen>,
    relators: Vec<Word>,
}

impl Presentation {
    fn build(kind: PresentationKind, name: String, alphabet: &[Gen], relators: Vec<Word>) -> Self {
        Presentation {
            name,
            kind,
            alphabet: alphabet.to_vec(),
            relators: relators.iter().map(|r| r.free_reduce()).collect(),
        }
    }

    /// `⟨a, s, t | [a, a^t], [s, t], a^s (a a^t)⁻¹⟩`.
    pub fn gamma() -> Self {
        Presentation::build(
            PresentationKind::Gamma,
            "gamma".into(),
            &[A, S, T],
            gamma_relators(),
        )
    }

    /// Γ with the extra relator `a^m`.
    pub fn gamma_m(m: u64) -> Result<Self, RingError> {
        if m < 2 {
            return Err(RingError::InvalidModulus(m));
        }
        let mut rels = gamma_relators();
        rels.push(Word::pow(A, m as i64));
        Ok(Presentation::build(
            PresentationKind::GammaM(m),
            format!("gamma_m:{m}"),
            &[A, S, T],
            rels,
        ))
    }

    /// The ten-relator extension of Γ by `H = ⟨p, q⟩`.
    pub fn gamma_bar() -> Self {
        let (a, p, q, s, t) = (
            Word::gen(A),
            Word::gen(P),
            Word::gen(Q),
            Word::gen(S),
            Word::gen(T),
        );
        let at = a.conjugate(&t);
        let eq = |l: &Word, r: &Word| l.concat(&r.inverse());
        let rels = vec![
            eq(&commutator(&a, &at), &p),
            eq(&a.concat(&at), &a.conjugate(&s).concat(&q)),
            eq(&p.conjugate(&s), &p.inverse()),
            eq(&p.conjugate(&t), &p.inverse()),
            commutator(&a, &p),
            commutator(&s, &t),
            commutator(&p, &q),
            eq(&q.conjugate(&s), &q.inverse()),
            eq(&q.conjugate(&t), &q.inverse()),
            commutator(&a, &q),
        ];
        Presentation::build(
            PresentationKind::GammaBar,
            "gamma_bar".into(),
            &[A, P, Q, S, T],
            rels,
        )
    }

    pub fn z2() -> Self {
        let rels = vec![commutator(&Word::gen(S), &Word::gen(T))];
        Presentation::build(PresentationKind::Z2, "z2".into(), &[S, T], rels)
    }

    /// Integral Heisenberg group `⟨a, b, c | [a,b] c⁻¹, [a,c], [b,c]⟩`.
    pub fn heis() -> Self {
        let (a, b, c) = (Word::gen(A), Word::gen(B), Word::gen(C));
        let rels = vec![
            commutator(&a, &b).concat(&c.inverse()),
            commutator(&a, &c),
            commutator(&b, &c),
        ];
        Presentation::build(PresentationKind::Heis, "heis".into(), &[A, B, C], rels)
    }

    /// `⟨a, b, c | [a,b] c⁻¹, c⟩ ≅ Z²`.
    pub fn z2c() -> Self {
        let (a, b, c) = (Word::gen(A), Word::gen(B), Word::gen(C));
        let rels = vec![commutator(&a, &b).concat(&c.inverse()), c];
        Presentation::build(PresentationKind::Z2C, "z2c".into(), &[A, B, C], rels)
    }

    /// Looks up a built-in by its name, e.g. `gamma` or `gamma_m:3`.
    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "gamma" => Some(Presentation::gamma()),
            "gamma_bar" => Some(Presentation::gamma_bar()),
            "z2" => Some(Presentation::z2()),
            "heis" => Some(Presentation::heis()),
            "z2c" => Some(Presentation::z2c()),
            _ => {
                let m = name.strip_prefix("gamma_m:")?.parse().ok()?;
                Presentation::gamma_m(m).ok()
            }
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> PresentationKind {
        self.kind
    }

    pub fn alphabet(&self) -> &[Gen] {
        &self.alphabet
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn torsion(&self) -> Option<u64> {
        match self.kind {
            PresentationKind::GammaM(m) => Some(m),
            _ => None,
        }
    }

    pub fn validate(&self, w: &Word) -> Result<(), WordError> {
        match w.generators().find(|g| !self.alphabet.contains(g)) {
            Some(g) => Err(WordError::ForeignGenerator(g, self.name.clone())),
            None => Ok(()),
        }
    }
}

fn gamma_relators() -> Vec<Word> {
    let (a, s, t) = (Word::gen(A), Word::gen(S), Word::gen(T));
    let at = a.conjugate(&t);
    vec![
        commutator(&a, &at),
        commutator(&s, &t),
        a.conjugate(&s).concat(&a.concat(&at).inverse()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(syl: &[(char, i64)]) -> Word {
        Word::from_syllables(syl.iter().map(|&(c, e)| (Gen(c), e)))
    }

    #[test]
    fn free_reduce_examples() {
        assert!(w(&[('a', 1), ('t', 1), ('t', -1), ('a', -1)])
            .free_reduce()
            .is_empty());
        assert_eq!(w(&[('a', 2), ('a', -1)]).free_reduce(), w(&[('a', 1)]));
        let a = Word::gen(A);
        assert!(commutator(&a, &a).free_reduce().is_empty());
    }

    #[test]
    fn compose_examples() {
        let t = Word::gen(T);
        let a = Word::gen(A);
        assert_eq!(
            word_compose(WordOp::Conjugate, &a, Some(&t)).unwrap(),
            w(&[('t', -1), ('a', 1), ('t', 1)])
        );
        let at = w(&[('a', 1), ('t', 1)]);
        assert_eq!(
            word_compose(WordOp::Invert, &at, None).unwrap(),
            w(&[('t', -1), ('a', -1)])
        );
        let u = w(&[('s', 2), ('a', -1), ('t', 3)]);
        assert!(u.concat(&u.inverse()).free_reduce().is_empty());
        assert!(matches!(
            word_compose(WordOp::Concat, &u, None),
            Err(WordError::MissingOperand(_))
        ));
    }

    #[test]
    fn commutator_word_shapes() {
        assert!(commutator_word(0).free_reduce().is_empty());
        let c1 = commutator_word(1);
        assert_eq!(c1.free_reduce(), Presentation::gamma().relators()[0]);
        assert_eq!(c1.len(), 8);
        assert_eq!(commutator_word(2).len(), 12);
        assert_eq!(commutator_word(7).len(), 32);
    }

    #[test]
    fn bracket_examples() {
        assert_eq!(bracket_word(&IntPoly::one(), T).unwrap(), Word::gen(A));
        assert_eq!(
            bracket_word(&IntPoly::x(), T).unwrap().free_reduce(),
            w(&[('t', -1), ('a', 1), ('t', 1)])
        );
        assert_eq!(
            bracket_word(&IntPoly::from_i64s(&[1, 2]), S).unwrap(),
            w(&[('a', 1), ('s', -1), ('a', 2), ('s', 1)])
        );
        assert_eq!(
            bracket_word(&IntPoly::from_i64s(&[0, 0, 1]), T).unwrap(),
            w(&[('t', -1), ('t', -1), ('a', 1), ('t', 2)])
        );
    }

    #[test]
    fn brace_examples() {
        let minus_one = IntPoly::constant(-1);
        assert_eq!(
            brace_word(&minus_one, 3, T, Side::Right).unwrap(),
            w(&[('a', 2)])
        );
        assert_eq!(
            brace_word(&IntPoly::x(), 2, T, Side::Right).unwrap(),
            w(&[('t', -1), ('a', 1), ('t', 1)])
        );
        assert!(brace_word(&IntPoly::zero(), 5, T, Side::Right)
            .unwrap()
            .is_empty());
        let f = IntPoly::from_i64s(&[1, 2, 4]);
        assert_eq!(
            brace_word(&f, 3, S, Side::Left).unwrap(),
            w(&[('s', -2), ('a', 1), ('s', 1), ('a', 2), ('s', 1), ('a', 1)])
        );
        assert!(matches!(
            brace_word(&f, 1, S, Side::Right),
            Err(WordError::Ring(RingError::InvalidModulus(1)))
        ));
    }

    #[test]
    fn tau_sigma_examples() {
        let z = IntPoly::zero();
        assert!(tau_sigma_word(&z, &z, 3, T).unwrap().is_empty());
        let x = IntPoly::x();
        let word = tau_sigma_word(&x, &-&x, 2, T).unwrap();
        let tat = w(&[('t', -1), ('a', 1), ('t', 1)]);
        assert_eq!(word, tat.concat(&tat));
        let one = IntPoly::one();
        let word = tau_sigma_word(&one, &one, 3, T).unwrap();
        assert_eq!(word, w(&[('a', 1), ('a', 1), ('a', -2)]));
        assert!(word.free_reduce().is_empty());
    }

    #[test]
    fn presentations_are_reduced_and_in_alphabet() {
        for p in [
            Presentation::gamma(),
            Presentation::gamma_m(4).unwrap(),
            Presentation::gamma_bar(),
            Presentation::z2(),
            Presentation::heis(),
            Presentation::z2c(),
        ] {
            assert!(!p.relators().is_empty());
            for r in p.relators() {
                assert!(r.is_reduced(), "{} relator {r}", p.name());
                assert!(!r.is_empty());
                p.validate(r).unwrap();
            }
            assert_eq!(Presentation::by_name(p.name()).unwrap(), p);
        }
        assert_eq!(Presentation::gamma_bar().relators().len(), 10);
        assert!(Presentation::gamma_m(1).is_err());
        assert_eq!(
            Presentation::gamma().relators()[2],
            w(&[
                ('s', -1),
                ('a', 1),
                ('s', 1),
                ('t', -1),
                ('a', -1),
                ('t', 1),
                ('a', -1)
            ])
        );
    }

    #[test]
    fn validate_rejects_foreign() {
        let err = Presentation::gamma().validate(&Word::gen(P)).unwrap_err();
        assert!(matches!(err, WordError::ForeignGenerator(g, _) if g == P));
    }

    #[test]
    fn conj_forms() {
        let f = ConjFactor {
            sign: -1,
            alpha: 2,
            beta: -1,
        };
        assert_eq!(
            f.to_word(),
            w(&[('t', 1), ('s', -2), ('a', -1), ('s', 2), ('t', -1)])
        );
        let tp = TPowerProduct {
            terms: vec![(3, 1), (-3, 1)],
        };
        assert!(tp.to_word().free_reduce().is_empty());
        assert_eq!(tp.weight(), BigInt::from(6));
    }

    #[test]
    fn letters_roundtrip() {
        let u = w(&[('a', 3), ('t', -2), ('a', -1)]);
        assert_eq!(Word::from_letters(&u.letters()), u);
        assert_eq!(u.len(), 6);
    }
}
