use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid algebra parameters: {reason}")]
    InvalidAlgebra { reason: String },

    #[error("element {code} out of range for a universe of {universe} elements")]
    InvalidElement { code: u64, universe: u64 },

    #[error("duplicate element {code} in set")]
    DuplicateElement { code: u64 },

    #[error("operands belong to different algebras")]
    AlgebraMismatch,

    #[error("set is not independent")]
    DependentSet,

    #[error("endomorphism is not singular")]
    NotSingular,

    #[error("element {code} lies outside the domain of the partial endomorphism")]
    OutsideDomain { code: u64 },

    #[error("malformed input at token {position}: {reason}")]
    Malformed { position: usize, reason: String },

    #[error("enumeration of {count} endomorphisms is not below the cap of {cap}")]
    EnumerationCap { count: u128, cap: u64 },

    #[error("universe of {size} elements exceeds the enumeration cap of {cap}")]
    UniverseCap { size: u64, cap: u64 },

    #[error("search budget exceeded: {what}")]
    BudgetExceeded { what: String },

    #[error("rank-0 image: no sink element available")]
    DegenerateRank,

    #[error("precondition of {op} violated: {reason}")]
    Precondition { op: &'static str, reason: String },

    /// An internal consistency check failed. `stage` names the pipeline
    /// step whose guarantee was violated; any occurrence is a bug.
    #[error("invariant violated in {stage}: {detail}")]
    Invariant { stage: &'static str, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
