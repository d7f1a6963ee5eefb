//! Dehn function machinery for Baumslag's metabelian group
//! `Γ = ⟨a, s, t | [a, a^t], [s, t], a^s = a a^t⟩` and relatives.

pub mod bounds;
pub mod derivations;
pub mod fillers;
pub mod reps;
pub mod rings;
pub mod words;

pub use bounds::{
    area_exact, area_lower, fibonacci, growth_table, heisenberg_area_lower, AreaSearch,
    BoundsError, GrowthRow,
};
pub use derivations::{
    verify_derivation, CertReport, Certificate, Deriv, Derivation, DerivationError, Move,
    VerifyMode, DEFAULT_REPLAY_CAP,
};
pub use fillers::{
    fill_commutator, fill_null_word, fill_null_word_mod, shift_basis, shift_basis_mod, tau_fill,
    FillError,
};
pub use reps::{eval_affine, h_coords, is_identity, HCoords, RepError};
pub use rings::{GoldenInt, IntPoly, LocalizedElem, RingError, Unit};
pub use words::{Gen, Letter, Presentation, Side, Word, WordError};
