//! Constructive area upper bounds.
//!
//! Each filler returns a [`Deriv`] whose cost can be compared against the
//! explicit budgets in [`budget`]. Subderivations are shared, so certificates
//! of astronomically large cost stay small.

use thiserror::Error;

use crate::derivations::{Deriv, Derivation, DerivationError};
use crate::reps::RepError;
use crate::rings::RingError;
use crate::words::{Word, WordError};

pub mod budget;
mod commutator;
mod null_word;
mod shift;
mod tape;
mod tau;

pub use budget::{cost_budget, BudgetKind, BudgetParams};
pub use commutator::{fill_commutator, SwapCache};
pub use null_word::{
    fill_null_word, fill_null_word_mod, fill_null_word_mod_staged, fill_null_word_staged,
    StageReport, StagedFill,
};
pub use shift::{shift_basis, shift_basis_mod};
pub use tau::{tau_adjust, tau_fill, Adjusted, TauAdjust};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FillError {
    #[error("word `{word}` is not null in {group}")]
    NotNull { word: Word, group: String },
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error(transparent)]
    Derivation(#[from] DerivationError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("filler invariant violated: {0}")]
    Internal(String),
}

/// `prefix · d · suffix`, omitting empty sides.
pub(crate) fn in_context(prefix: &Word, d: Deriv, suffix: &Word) -> Deriv {
    let mut d = d;
    if !suffix.free_reduce().is_empty() {
        d = Derivation::juxtapose(d, Derivation::identity(suffix));
    }
    if !prefix.free_reduce().is_empty() {
        d = Derivation::juxtapose(Derivation::identity(prefix), d);
    }
    d
}

/// `from⁻¹ → to⁻¹`, built as `from⁻¹ · mirror(d) · to⁻¹`.
pub(crate) fn inverted(d: &Deriv) -> Deriv {
    in_context(
        &d.from().inverse(),
        Derivation::mirror(d.clone()),
        &d.to().inverse(),
    )
}

/// Runs the derivations side by side, left to right.
pub(crate) fn juxtapose_all(parts: impl IntoIterator<Item = Deriv>) -> Deriv {
    let mut iter = parts.into_iter();
    let first = iter
        .next()
        .unwrap_or_else(|| Derivation::identity(&Word::empty()));
    iter.fold(first, Derivation::juxtapose)
}
