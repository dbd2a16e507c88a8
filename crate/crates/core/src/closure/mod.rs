//! Finite presentations of tensor-generated subcategories C^{S^v} and
//! certificates of strong decomposition.
//!
//! Strong decomposition is a flag asserted on atoms and propagated by the
//! closure steps (direct sum, retract, tensor-then-rewrite); morphisms are
//! never inspected.

mod datum;
mod engine;
mod expr;

pub use datum::{
    load_closure, AtomSpec, ClosureDatum, PairRule, PowerRule, Powers, RawClosure, RuleTerm, CLOSURE_SCHEMA,
};
pub use engine::{
    certify, check_cor1, check_cor2, negligible_closure, replay, two_atom_expressions, Certificate, Negligibility, Node,
};
pub use expr::{normalize, Expr, Nf, ParseExprError, Word};

/// Two-atom toy S^v satisfying the ungraded conditions.
pub const TOY_COR1_JSON: &str = include_str!("../../data/toy_cor1.json");
/// Same shape graded by C/Z with X = {0}; products of degree 0 carry no rule.
pub const TOY_COR2_JSON: &str = include_str!("../../data/toy_cor2.json");

#[derive(Debug, thiserror::Error)]
pub enum ClosureError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("unsupported schema {0:?} (expected \"relmod-closure/1\")")]
    UnsupportedSchema(String),
    #[error("invalid value at {path}: {message}")]
    Field { path: String, message: String },
    #[error("datum has no distinguished atom v")]
    NoDistinguished,
    #[error("datum has no grading")]
    NoGrading,
    #[error(transparent)]
    Parse(#[from] ParseExprError),
    #[error("atom {0} is not declared")]
    UnknownAtom(String),
}

impl ClosureError {
    pub fn path(&self) -> Option<&str> {
        match self {
            ClosureError::Schema { path, .. } | ClosureError::Field { path, .. } => Some(path),
            _ => None,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CertifyError {
    #[error(transparent)]
    Closure(#[from] ClosureError),
    #[error("closure conditions do not hold: {0}")]
    Preconditions(String),
    #[error("stuck at {expr}: no flag, power rule or pair rule applies")]
    Stuck { expr: String },
    #[error("depth {depth} exhausted at {expr}")]
    DepthExhausted { expr: String, depth: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReplayError {
    #[error("derivation proves {found}, target normalizes to {expected}")]
    Mismatch { expected: String, found: String },
    #[error("invalid derivation step: {0}")]
    BadNode(String),
}
