//! Crate-wide error type.
//!
//! Numerical routines return `Result<_, Error>` so the CLI can map failures
//! onto stable exit codes (usage=1, config=2, numerical=3, verification=4).

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an argument was violated (bad parameter range,
    /// point outside the required half-plane, non power-of-two grid, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A point that must lie inside the domain does not.
    #[error("point ({re}, {im}) is not inside the domain")]
    OutsideDomain { re: f64, im: f64 },

    /// The circle |z| = r does not meet the domain, so circular
    /// symmetrization has nothing to work with at that radius.
    #[error("circle of radius {radius} does not intersect the domain")]
    EmptyCircle { radius: f64 },

    /// Maximal-arc profile increased along the grid; the domain is not
    /// starlike about the origin as far as the scan can tell.
    #[error("maximal arc length increases at t = {t}; domain is not starlike about 0")]
    NotStarlike { t: f64 },

    /// Exponent fit called with too few informative ladder points.
    #[error("need at least 3 usable ladder points, got {0}")]
    TooFewPoints(usize),

    /// Every radius of the ladder came back with zero circle exits.
    #[error("all ladder radii had zero successes; nothing to fit")]
    AllZeroSuccesses,

    /// More than 1% of walks hit the step budget.
    #[error("{truncated} of {total} walks hit max_steps; increase max_steps or relax eps_rel")]
    ExcessiveTruncation { truncated: u64, total: u64 },

    /// Integral-mean slope decreased while p increased inside the bracket.
    #[error("growth slope is not monotone across the bracket near p = {p}")]
    NonMonotoneSlope { p: f64 },

    /// Analytic bounds contradict each other (empty intersection).
    #[error("analytic bounds are inconsistent: lower {lo} exceeds upper {hi}")]
    InconsistentBounds { lo: f64, hi: f64 },

    /// Configuration file or flag problem.
    #[error("config error: {0}")]
    Config(String),

    /// Another run holds the output directory.
    #[error("output directory is locked by another run: {0}")]
    OutputLocked(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// I/O failure with the file it happened on.
    #[error("io error at {path}: {source}")]
    IoAt {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Attach the offending path to an I/O error.
    pub fn io_at(path: &std::path::Path, source: std::io::Error) -> Self {
        Error::IoAt { path: path.display().to_string(), source }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
