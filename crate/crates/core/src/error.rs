use thiserror::Error;

use crate::dynamics::SearchReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report. Variant names double as the
/// machine-readable error codes surfaced by the CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("gram matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("gram matrix has odd diagonal entry at index {index}")]
    OddDiagonal { index: usize },
    #[error("gram matrix is degenerate (determinant 0)")]
    Degenerate,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("sublattice basis rows are linearly dependent")]
    DependentBasis,

    #[error("quadratic form is not negative definite")]
    NotNegativeDefinite,
    #[error("target norm must be negative and even, got {0}")]
    BadTargetNorm(String),
    #[error("vector has self-intersection {0}, not -2")]
    NotARoot(String),
    #[error("vector has non-positive self-intersection {0}")]
    NotPositive(String),
    #[error("vectors lie in opposite components of the positive cone")]
    OppositeCones,
    #[error("Weyl walk did not reach the chamber within {budget} reflections")]
    BudgetExceeded { budget: usize },
    #[error("reference vector lies on the wall of root {0}")]
    OnWall(String),

    #[error("lattice signature is ({0}, {1}), not hyperbolic")]
    NotHyperbolic(usize, usize),
    #[error("vector is not primitive isotropic")]
    NotPrimitiveIsotropic,
    #[error("at least two infinite-type fibration classes are required, found {0}")]
    InsufficientFibrations(usize),
    #[error("lattice dimension {0} is odd")]
    OddDimension(usize),
    #[error("lattice dimension {0} is below 4")]
    DimensionTooSmall(usize),
    #[error("sample is inconsistent: {0}")]
    Inconsistent(String),

    #[error("matrix does not preserve the gram form")]
    NotFormPreserving,
    #[error("matrix determinant {0} is not +1 or -1")]
    NotUnimodular(String),
    #[error("reference vector is not positive")]
    ReferenceNotPositive,
    #[error("isometry does not fix the isotropic vector")]
    DoesNotFixE,
    #[error("isometry has finite order {0}")]
    FiniteOrder(String),
    #[error("subspace basis is not linearly independent")]
    DependentSubspace,

    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("interval endpoint {0} is a root")]
    EndpointIsRoot(String),
    #[error("empty interval: lower end must be below upper end")]
    EmptyInterval,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("non-cyclotomic remainder {0} is not a Salem polynomial")]
    NotSpectrallySalem(String),
    #[error("width must be a positive rational")]
    BadWidth,

    #[error("vector is not isotropic")]
    NotIsotropic,
    #[error("vector is not primitive")]
    NotPrimitive,
    #[error("v is not orthogonal to e")]
    NotOrthogonal,
    #[error("v is proportional to e")]
    ProportionalToE,
    #[error("atlas contains no infinite-type classes")]
    NoInfiniteClasses,
    #[error("search budget exhausted at degree {} (target {})", .0.achieved_degree, .0.target_degree)]
    BudgetExhausted(Box<SearchReport>),
    #[error("word {0} has a spectrum outside the Salem/cyclotomic dichotomy")]
    SpectralAnomaly(String),
    #[error("matrix is not an isometric embedding")]
    NotIsometricEmbedding,
    #[error("embedding has infinite index")]
    InfiniteIndex,
    #[error("Weyl walk in the sublattice exceeded its budget of {0}")]
    WalkBudgetExceeded(usize),
    #[error("transferred class lost its infinite verdict: {0}")]
    PersistenceViolated(String),
    #[error("unknown {kind} `{name}`; known: {known}")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        known: String,
    },
    #[error("box scan would overflow 128-bit arithmetic")]
    ScanOverflow,
    #[error("parse error in {source_name}: {message}")]
    Parse {
        source_name: String,
        message: String,
    },
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    /// Stable identifier for reports and exit-code mapping.
    pub fn name(&self) -> &'static str {
        use Error::*;
        match self {
            NotSquare { .. } => "NotSquare",
            NotSymmetric { .. } => "NotSymmetric",
            OddDiagonal { .. } => "OddDiagonal",
            Degenerate => "Degenerate",
            DimensionMismatch { .. } => "DimensionMismatch",
            NotPrime(_) => "NotPrime",
            DependentBasis => "DependentBasis",
            NotNegativeDefinite => "NotNegativeDefinite",
            BadTargetNorm(_) => "BadTargetNorm",
            NotARoot(_) => "NotARoot",
            NotPositive(_) => "NotPositive",
            OppositeCones => "OppositeCones",
            BudgetExceeded { .. } => "BudgetExceeded",
            OnWall(_) => "OnWall",
            NotHyperbolic(..) => "NotHyperbolic",
            NotPrimitiveIsotropic => "NotPrimitiveIsotropic",
            InsufficientFibrations(_) => "InsufficientFibrations",
            OddDimension(_) => "OddDimension",
            DimensionTooSmall(_) => "DimensionTooSmall",
            Inconsistent(_) => "Inconsistent",
            NotFormPreserving => "NotFormPreserving",
            NotUnimodular(_) => "NotUnimodular",
            ReferenceNotPositive => "ReferenceNotPositive",
            DoesNotFixE => "DoesNotFixE",
            FiniteOrder(_) => "FiniteOrder",
            DependentSubspace => "DependentSubspace",
            ZeroPolynomial => "ZeroPolynomial",
            NotSquarefree => "NotSquarefree",
            EndpointIsRoot(_) => "EndpointIsRoot",
            EmptyInterval => "EmptyInterval",
            NotMonic => "NotMonic",
            NotSpectrallySalem(_) => "NotSpectrallySalem",
            BadWidth => "BadWidth",
            NotIsotropic => "NotIsotropic",
            NotPrimitive => "NotPrimitive",
            NotOrthogonal => "NotOrthogonal",
            ProportionalToE => "ProportionalToE",
            NoInfiniteClasses => "NoInfiniteClasses",
            BudgetExhausted(_) => "BudgetExhausted",
            SpectralAnomaly(_) => "SpectralAnomaly",
            NotIsometricEmbedding => "NotIsometricEmbedding",
            InfiniteIndex => "InfiniteIndex",
            WalkBudgetExceeded(_) => "WalkBudgetExceeded",
            PersistenceViolated(_) => "PersistenceViolated",
            UnknownStrategy { .. } => "UnknownStrategy",
            ScanOverflow => "ScanOverflow",
            Parse { .. } => "ParseError",
            Io { .. } => "IoError",
        }
    }

    /// Parse and I/O failures, as opposed to domain errors.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::Io { .. })
    }
}
