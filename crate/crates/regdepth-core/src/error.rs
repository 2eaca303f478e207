use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Errors shared by every module in the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A vector or index had the wrong length for the dataset dimension.
    DimensionMismatch { expected: usize, got: usize },
    /// Fewer observations than parameters (`n >= p` is assumed throughout).
    TooFewPoints { n: usize, p: usize },
    /// A coordinate was NaN or infinite.
    NonFinite { index: usize },
    /// The selected observations lie in a vertical hyperplane; no
    /// non-vertical fit passes through all of them.
    DegenerateSubset { indices: Vec<usize> },
    /// Exact enumeration would exceed the configured budget; use the
    /// approximate mode instead.
    Budget {
        subsets: u128,
        ops: u128,
        max_subsets: u128,
        max_ops: u128,
    },
    /// The contamination site could not be verified within the retry limit.
    AttackConstructionFailed { retries: usize, detail: String },
    /// The retained rows span all of parameter space; no shift direction exists.
    DegenerateNullspace,
    /// The brute-force oracle refuses instances beyond its size guard.
    SizeGuard {
        n: usize,
        p: usize,
        max_n: usize,
        max_p: usize,
    },
    /// A simulation spec named a generator that does not match the table.
    GeneratorMismatch { detail: String },
    /// A parameter outside the supported range (for example `p != 2` for
    /// the p=2 sweep, or `reps = 0`).
    BadParameter { detail: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::TooFewPoints { n, p } => {
                write!(f, "need at least p = {p} observations, got n = {n}")
            }
            Error::NonFinite { index } => {
                write!(f, "non-finite coordinate in observation {index}")
            }
            Error::DegenerateSubset { indices } => {
                write!(f, "observations {indices:?} lie in a vertical hyperplane")
            }
            Error::Budget {
                subsets,
                ops,
                max_subsets,
                max_ops,
            } => write!(
                f,
                "exact enumeration over budget ({subsets} subsets / {ops} est. ops vs caps \
                 {max_subsets} / {max_ops}); use the approximate mode"
            ),
            Error::AttackConstructionFailed { retries, detail } => {
                write!(f, "attack construction failed after {retries} retries: {detail}")
            }
            Error::DegenerateNullspace => {
                write!(f, "retained rows have full rank; null space is trivial")
            }
            Error::SizeGuard { n, p, max_n, max_p } => write!(
                f,
                "oracle size guard exceeded: n = {n}, p = {p} (limits n <= {max_n}, p <= {max_p})"
            ),
            Error::GeneratorMismatch { detail } => write!(f, "generator mismatch: {detail}"),
            Error::BadParameter { detail } => write!(f, "bad parameter: {detail}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
