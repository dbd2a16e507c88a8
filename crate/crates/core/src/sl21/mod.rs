//! U_q^H sl(2|1) at an odd root of unity q = ζ_ℓ: the modules A_k, the
//! defining relations, characters, the fusion rule for A = A_{ℓ−1} and the
//! resulting bound on the rank of the generic S-matrix.

mod character;
mod emit;
mod fusion;
mod rank_bound;
mod relations;
mod rep;

pub use character::{
    character_of_label, character_of_rep, chi_ak_closed_form, chi_standard, decompose_typical, x0, CharacterExpr,
    LaurentPoly, Parity, WeightLabel,
};
pub use emit::{emit_datum, label_index, label_name};
pub use fusion::{fuse_a, fuse_a_by_characters, fuse_a_twice};
pub use rank_bound::{involution, rank_bound_analysis, PairClass, RankBoundReport, OPEN_QUESTIONS};
pub use relations::{check_relations, RelationOutcome, RelationReport, CHECK_RELATIONS};
pub use rep::{build_ak, default_convention, tensor_rep, Convention, WeightModuleRep};

use crate::exactnum::ExactError;

/// Cartan matrix of sl(2|1) with the second simple root odd.
pub const CARTAN: [[i64; 2]; 2] = [[2, -1], [-1, 0]];
/// Symmetrizers d_i; the Cartan matrix is already symmetric.
pub const SYMMETRIZER: [i64; 2] = [1, 1];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Sl21Error {
    #[error(transparent)]
    Ell(#[from] ExactError),
    #[error("k = {k} out of range 1..={max}")]
    KOutOfRange { k: i64, max: i64 },
    #[error("modules are over different roots of unity ({0} vs {1})")]
    EllMismatch(u32, u32),
    #[error("H_{0} is not diagonal with integer entries")]
    NonDiagonal(usize),
    #[error("label {0} is negligible (k = ell-1)")]
    NegligibleInput(String),
    #[error("characters carry different alpha powers ({0} vs {1})")]
    AlphaMismatch(i32, i32),
    #[error("character is not a sum of typical characters; residual {0}")]
    NotTypical(String),
    #[error("fusion did not produce a single simple label: {0}")]
    NotSimple(String),
}
