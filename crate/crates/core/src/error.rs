use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("grid size {0} must be a power of two and at least 4")]
    InvalidGridSize(usize),

    #[error("bandwidth {bandwidth} aliases on a {n}-point grid (need n >= 2K+2)")]
    Aliasing { bandwidth: usize, n: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("radius {0} is outside [0, 1)")]
    InvalidRadius(f64),

    #[error("point with modulus {0} is outside the open unit disc")]
    OutsideDisc(f64),

    #[error("eta_s for s = {s} drifted by {drift:.3e} under refinement")]
    EtaUnstable { s: f64, drift: f64 },

    #[error("requested bandwidth {requested} exceeds the {available} stored coefficients and the tail is unknown")]
    Coverage { requested: usize, available: usize },

    #[error("not a member: {0}")]
    Divergent(String),

    #[error("numerical resolution: {0}")]
    Resolution(String),

    #[error("internal consistency: {0}")]
    Inconsistent(String),

    #[error("unknown gallery entry `{0}`")]
    UnknownGallery(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
