use thiserror::Error;

/// Errors produced by mesh construction, segment fitting, and the eigenvalue
/// search.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid mesh: {0}")]
    Mesh(String),

    #[error("local basis pole: x = {x} reaches +/-pi/2 on a cos^2 segment")]
    BasisPole { x: f64 },

    #[error("seed solution vanishes near x = {x}; transformed potential is singular there")]
    SeedPole { x: f64 },

    #[error("singular Wronskian denominator in commutation determinant at x = {x}")]
    SingularWronskian { x: f64 },

    #[error("bessel basis is defined for x != 0 and lambda > 0 (got x = {x}, lambda = {lambda})")]
    BesselDomain { x: f64, lambda: f64 },

    #[error("boundary conditions degenerate: coefficients at one endpoint are both zero")]
    DegenerateBoundary,

    #[error("tabulated potential: {0}")]
    Table(String),

    #[error("unknown potential case id: {0}")]
    UnknownCase(String),

    #[error("segments do not match the mesh: {0}")]
    SegmentMismatch(String),

    #[error("invalid solver configuration: {0}")]
    Config(String),

    #[error(
        "eigenvalue scan reached lambda = {ceiling:.6} with {found} of {requested} roots found"
    )]
    ScanExhausted {
        ceiling: f64,
        found: usize,
        requested: usize,
    },

    #[error(
        "missed root suspected: {found} sign changes below lambda = {lambda:.6} \
         but the counting estimate gives {estimate}"
    )]
    MissedRootSuspected {
        found: usize,
        lambda: f64,
        estimate: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
