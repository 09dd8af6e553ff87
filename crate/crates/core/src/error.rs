use core::fmt;

use crate::channel::Family;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by the numerical core.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A qudit dimension below 2.
    InvalidDimension(usize),
    /// Operand shapes do not fit together.
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    /// Largest elementwise `|M - M^dagger|` exceeded the tolerance.
    NotHermitian { asymmetry: f64 },
    /// Noise parameter outside the family's valid interval.
    EtaOutOfRange {
        family: Family,
        eta: f64,
        lo: f64,
        hi: f64,
    },
    /// A parameter outside its closed interval.
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    /// Vector or amplitude list whose norm is not 1.
    NotNormalized { norm: f64 },
    /// Spectrum whose values do not sum to 1.
    SpectrumNotNormalized { sum: f64 },
    /// Eigenvalue below the clipping threshold.
    NegativeEigenvalue(f64),
    /// Input is not a density matrix (trace or positivity).
    NotDensity { trace: f64, min_eigenvalue: f64 },
    /// The closed forms only cover Schmidt states with offset 0.
    NonzeroOffset(usize),
    /// Oracle requested above the dimension cap.
    OracleCapExceeded { d: usize, cap: usize },
    /// The requested parity branch does not match `d`.
    ParityMismatch { d: usize, expected_even: bool },
    /// Grid with fewer than two points.
    InvalidGrid(usize),
    /// Non-positive or non-finite tolerance.
    InvalidTolerance(f64),
    /// Empty list where at least one entry is required.
    EmptyList(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDimension(d) => write!(f, "dimension d={d} is invalid, need d >= 2"),
            Error::DimensionMismatch { expected, found } => write!(
                f,
                "dimension mismatch: expected {}x{}, found {}x{}",
                expected.0, expected.1, found.0, found.1
            ),
            Error::NotHermitian { asymmetry } => {
                write!(f, "matrix is not Hermitian (max |M - M^dagger| = {asymmetry:e})")
            }
            Error::EtaOutOfRange { family, eta, lo, hi } => write!(
                f,
                "eta={eta} out of range for the {family} family, valid interval is [{lo}, {hi}]"
            ),
            Error::ParameterOutOfRange { name, value, lo, hi } => {
                write!(f, "{name}={value} out of range, valid interval is [{lo}, {hi}]")
            }
            Error::NotNormalized { norm } => write!(f, "state is not normalized (norm {norm})"),
            Error::SpectrumNotNormalized { sum } => {
                write!(f, "spectrum does not sum to 1 (sum {sum})")
            }
            Error::NegativeEigenvalue(v) => write!(f, "negative eigenvalue {v:e}"),
            Error::NotDensity {
                trace,
                min_eigenvalue,
            } => write!(
                f,
                "input is not a density matrix (trace {trace}, min eigenvalue {min_eigenvalue:e})"
            ),
            Error::NonzeroOffset(m) => write!(
                f,
                "closed forms need Schmidt offset 0 (got {m}); use the oracle method"
            ),
            Error::OracleCapExceeded { d, cap } => write!(
                f,
                "oracle cost grows as d^8; d={d} exceeds the cap d<={cap} (override to force)"
            ),
            Error::ParityMismatch { d, expected_even } => write!(
                f,
                "d={d} is {} but the {} branch was requested",
                if d % 2 == 0 { "even" } else { "odd" },
                if *expected_even { "even" } else { "odd" }
            ),
            Error::InvalidGrid(n) => write!(f, "grid needs at least 2 points (got {n})"),
            Error::InvalidTolerance(t) => write!(f, "tolerance must be positive (got {t})"),
            Error::EmptyList(what) => write!(f, "{what} must not be empty"),
        }
    }
}

impl core::error::Error for Error {}
