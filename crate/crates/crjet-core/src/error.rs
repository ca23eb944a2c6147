//! Crate-wide error type.
//!
//! Every failure carries enough context to reproduce it: indices, orders,
//! offending monomials (already formatted), retry counts. Nothing is ever
//! silently rounded or dropped; a condition the exact algorithms cannot
//! certify is an error, not a guess.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("variable count mismatch: expected {expected}, got {got}")]
    VariableMismatch { expected: usize, got: usize },

    #[error("component count mismatch: expected {expected}, got {got}")]
    ComponentMismatch { expected: usize, got: usize },

    #[error("base point mismatch: got {got} where {expected} is required")]
    BaseMismatch { expected: String, got: String },

    #[error("germ has a nonzero constant term in component {component}: {value}")]
    NonzeroConstantTerm { component: usize, value: String },

    #[error("linear part is singular; no compositional inverse / implicit solution")]
    SingularLinearPart,

    #[error("jet order {got} is insufficient: the operation needs order {needed}")]
    InsufficientOrder { needed: u32, got: u32 },

    #[error("reality symmetry violated in rho{index}: coefficient of {monomial} is {found}, conjugate partner has {partner}")]
    RealityViolation {
        index: usize,
        monomial: String,
        found: String,
        partner: String,
    },

    #[error("base point is not on the manifold: rho{index} evaluates to {value}")]
    BaseNotOnManifold { index: usize, value: String },

    #[error("manifold is not generic at the given center: holomorphic differentials have rank {rank} < {codim}")]
    NotGeneric { rank: usize, codim: usize },

    #[error("point pair is not on the complexification: rho{index} evaluates to {value}")]
    NotOnComplexification { index: usize, value: String },

    #[error("no invertible coordinate split: the {rows}x{cols} matrix has rank below {rows}")]
    NoInvertibleMinor { rows: usize, cols: usize },

    #[error("rank condition failed at {stage}: got rank {got}, need {needed}")]
    RankCondition {
        stage: &'static str,
        got: usize,
        needed: usize,
    },

    #[error("map germ is not admissible: {reason}")]
    NotAdmissible { reason: String },

    #[error("no nondegeneracy order found up to k_max = {k_max}; status unknown (>= {})", k_max + 1)]
    NondegeneracyUnknown { k_max: u32 },

    #[error("value recovery needs defining polynomials of degree <= 1 in the conjugate block; rho{index} has a degree-{degree} monomial {monomial}")]
    UnsupportedTarget {
        index: usize,
        degree: u32,
        monomial: String,
    },

    #[error("linear system for {what} is {status}")]
    LinearSystem {
        what: &'static str,
        status: &'static str,
    },

    #[error("reflection chain step {step}: {source}")]
    ChainStep {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("bad series text at `{line}`: {reason}")]
    SeriesText { line: String, reason: String },

    #[error("retries exhausted after {attempts} attempts at {stage} (seed {seed}): {last}")]
    RetriesExhausted {
        attempts: u32,
        stage: &'static str,
        seed: u64,
        last: String,
    },
}
