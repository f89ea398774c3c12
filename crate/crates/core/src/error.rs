use num_complex::Complex64;
use thiserror::Error;

/// Which generator a spectral condition refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Axis::X => f.write_str("x"),
            Axis::Y => f.write_str("y"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("incompatible series: {0}")]
    Incompatible(String),

    #[error("index enumeration needs {needed} tuples, cap is {cap}; use the repeated method")]
    CapExceeded { needed: u128, cap: u128 },

    #[error("spectrum outside domain: spectral radius of the {axis} generator is {spectral_radius}, domain radius r_{axis} = {radius}")]
    SpectrumOutsideDomain {
        axis: Axis,
        radius: f64,
        spectral_radius: f64,
    },

    #[error("singular resolvent at lambda = {0}")]
    SingularResolvent(Complex64),

    #[error("character ({0}, {1}) is off both axes")]
    OffAxis(Complex64, Complex64),

    #[error("{routine} did not converge within {iterations} iterations")]
    NoConvergence {
        routine: &'static str,
        iterations: usize,
        partial: Vec<Complex64>,
    },

    #[error("sampling failed: accepted {accepted} of {requested} points within the retry budget")]
    Sampling { accepted: usize, requested: usize },

    #[error("format error: {0}")]
    Format(String),

    #[error("q-relation violated: residual {residual:e} exceeds {allowed:e}")]
    NotQCommuting { residual: f64, allowed: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

pub(crate) fn ensure_finite(values: &[Complex64], what: &'static str) -> Result<()> {
    if values.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}
