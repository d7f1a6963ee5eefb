//! Benchmark inputs shared by the criterion suites.

use dehn_core::words::{commutator_word, A, S, T};
use dehn_core::Word;

/// A null word of Γ mixing all three generators, of length growing with `n`.
pub fn mixed_null_word(n: i64) -> Word {
    let x = Word::gen(A).conjugate(&Word::from_syllables([(S, n), (T, -1)]));
    let y = Word::pow(A, 2).conjugate(&Word::pow(T, n));
    dehn_core::words::commutator(&x, &y).concat(&commutator_word(n))
}
