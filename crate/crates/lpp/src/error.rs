use crate::process::Rect;
use thiserror::Error;

/// Errors shared across the passage, equilibrium and lattice machinery.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Param(String),

    /// A queried rectangle sticks out of the sampled region. Refusing the
    /// query prevents silently truncated passage values.
    #[error("rectangle ({},{}]x({},{}] not covered by sampled region ({},{}]x({},{}]",
        needed.x0, needed.x1, needed.t0, needed.t1,
        region.x0, region.x1, region.t0, region.t1)]
    Coverage { needed: Rect, region: Rect },

    #[error("location {z} outside boundary window ({w_left},{w_right}]")]
    OutsideWindow { z: f64, w_left: f64, w_right: f64 },

    /// The maximizer set of the boundary-augmented passage value touches the
    /// left edge of the sampled window, so the reported exit points (and
    /// possibly the value itself) are lower bounds only.
    #[error("window inadequate: maximizer set touches the left edge {w_left} after {doublings} doubling(s)")]
    WindowInadequate { w_left: f64, doublings: u32 },

    #[error("exhaustive oracle refused: {count} points exceeds limit {limit}")]
    TooManyPoints { count: usize, limit: usize },

    #[error("exhaustive oracle refused: {steps} lattice steps exceeds limit {limit}")]
    TooManyPaths { steps: usize, limit: usize },

    #[error("empty sample")]
    EmptySample,

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("requested abscissa {requested} is not a grid point")]
    OffGrid { requested: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
