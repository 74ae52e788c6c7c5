use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix has non-positive determinant {0}")]
    BadDeterminant(f64),
    #[error("not a geodesic class")]
    NotGeodesic,
    #[error("not a hyperbolic element")]
    NotHyperbolic,
    #[error("not a parabolic element")]
    NotParabolic,
    #[error("geodesics cross")]
    GeodesicsCross,
    #[error("endpoints of an ideal geodesic must be distinct")]
    DegenerateGeodesic,
    #[error("horoball size must be positive")]
    BadHoroball,
    #[error("point is not in the upper half-plane")]
    NotInUpperHalfPlane,

    #[error("identity word has no conjugacy class")]
    IdentityWord,
    #[error("cannot parse word {0:?}")]
    BadWord(String),
    #[error("cannot parse key {0:?}")]
    BadKey(String),
    #[error("automorphism is not invertible: {0}")]
    NotInvertible(String),
    #[error("automorphism {0} does not fix peripheral class {1}")]
    NotPure(String, String),

    #[error("below minimal arc length m_{{i,j}} ({min})")]
    BelowMinimalArcLength { min: f64 },
    #[error("below minimal t-length m_t ({min})")]
    BelowMinimalTLength { min: f64 },
    #[error("invalid pants dimensions: {0}")]
    BadPantsDims(String),
    #[error("cusp area parameter t must lie in (0, 1], got {0}")]
    BadArea(f64),
    #[error("empty list of boundary lengths")]
    EmptyCuffList,

    #[error("not a boundary surface (cusp or elliptic commutator): boundary trace {0}")]
    NotBoundarySurface(f64),
    #[error("commutator trace condition violated: {0}")]
    TraceCondition(String),
    #[error("infeasible trace configuration: {0}")]
    InfeasibleTraces(String),
    #[error("not an essential non-peripheral curve")]
    PeripheralOrInessential,
    #[error("degenerate arc class")]
    DegenerateArc,
    #[error("arc class does not match the surface: {0}")]
    ArcMismatch(String),
    #[error("surface has no {0}")]
    MissingFeature(&'static str),
    #[error("undecided at cutoff {cutoff}")]
    UndecidedAtCutoff { cutoff: f64 },
    #[error("unsupported surface for this operation: {0}")]
    Unsupported(String),
    #[error("surface document invalid: {0}")]
    BadSurfaceDocument(String),
    #[error("discreteness guard failed: word {0} is elliptic")]
    NotDiscrete(String),

    #[error("census incomplete: {0}")]
    NotCertified(String),
    #[error("frontier budget exceeded after {0} elements")]
    BudgetExceeded(usize),

    #[error("insufficient points for fit: {0} (need at least 4)")]
    InsufficientPoints(usize),
    #[error("orbit mismatch: {0}")]
    OrbitMismatch(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
