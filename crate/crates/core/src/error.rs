use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("both amplitudes are zero; outcome probabilities are undefined")]
    DegenerateAmplitudes,

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid rule power {0}; expected n >= 0 or infinity")]
    InvalidPower(f64),

    #[error("probability {value} at (x={x}, y={y}, a={a}, b={b}) is outside [0, 1]")]
    InvalidProbability {
        x: usize,
        y: usize,
        a: usize,
        b: usize,
        value: f64,
    },

    #[error("setting (x={x}, y={y}) sums to {sum}, expected 1")]
    NotNormalized { x: usize, y: usize, sum: f64 },

    #[error("root search did not converge: {0}")]
    NoConvergence(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
