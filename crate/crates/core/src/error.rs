use thiserror::Error;

/// Errors raised while building or querying divisor-lattice structures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be a positive integer")]
    ZeroModulus,

    #[error("{value} is not a divisor of {modulus}")]
    NotInLattice { value: u64, modulus: u64 },

    #[error("{value} does not divide the sieve base {base}")]
    NotBelow { value: u64, base: u64 },

    #[error(
        "sieve on {base} is not down-closed: {member} is present but its divisor {missing} is not"
    )]
    NotDownClosed {
        base: u64,
        member: u64,
        missing: u64,
    },

    #[error("unknown topology name `{0}` (expected trivial, discrete, atomic or dense)")]
    UnknownTopology(String),

    #[error("presheaf has no value set for {0}")]
    MissingValues(u64),

    #[error("presheaf value set for {n} repeats label `{label}`")]
    DuplicateLabel { n: u64, label: String },

    #[error("presheaf is missing the restriction map {k}|{n}")]
    MissingRestriction { k: u64, n: u64 },

    #[error("restriction map {k}|{n} is not total: `{label}` has no valid image")]
    PartialRestriction { k: u64, n: u64, label: String },

    #[error("restriction key `{0}` is not of the form k|n with k dividing n")]
    BadRestrictionKey(String),

    #[error("`{label}` is not an element of F({n})")]
    UnknownLabel { n: u64, label: String },

    #[error(
        "selection is not closed under restriction: `{label}` in A({n}) restricts outside A({k})"
    )]
    NotSubpresheaf { k: u64, n: u64, label: String },

    #[error("modulus mismatch: expected {expected}, found {found}")]
    ModulusMismatch { expected: u64, found: u64 },

    #[error("indexed family does not match the divisor order: {0}")]
    NotIsomorphic(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
