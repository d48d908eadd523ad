use thiserror::Error;

use crate::complex::Simplex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed simplex {0:?}: vertices must be strictly increasing and non-empty")]
    MalformedSimplex(Vec<usize>),
    #[error("simplex {0} is not in the ambient complex")]
    SimplexNotInAmbient(Simplex),
    #[error("invalid subcomplex: {0}")]
    InvalidSubcomplex(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("not a subspace: containment residual {residual:e} exceeds tolerance")]
    NotASubspace { residual: f64 },
    #[error("complexes are not nested")]
    NotNested,
    #[error("function is not admissible: f({face}) >= f({coface})")]
    NotAdmissible { face: Simplex, coface: Simplex },
    #[error("index out of range: s={s}, t={t}, N={n}")]
    IndexOutOfRange { s: usize, t: usize, n: usize },
    #[error("bar is not simple (multiplicity {0})")]
    NotSimple(usize),
    #[error("bar has infinite death time")]
    InfiniteBar,
    #[error("chain is zero")]
    ZeroChain,
    #[error("no bar with birth {s} and death {t}")]
    NoSuchBar { s: usize, t: String },
    #[error("objects live on different complexes")]
    ComplexMismatch,
    #[error("hypothesis violated: dim P^({s},{t}) = {dim} > 1")]
    HypothesisViolated { s: usize, t: usize, dim: usize },
    #[error("invalid step function: {0}")]
    InvalidStepFunction(String),
    #[error("invalid ladder parameters n={n}, m={m}")]
    InvalidLadder { n: usize, m: usize },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("line {line}: duplicate simplex {simplex}")]
    DuplicateSimplex { line: usize, simplex: Simplex },
    #[error("line {line}: value of {simplex} is below that of its face {face}")]
    NonMonotone { line: usize, simplex: Simplex, face: Simplex },
    #[error("linear algebra backend failed: {0}")]
    Numerical(String),
}
