use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Every failure the model library can report.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A factor that must be strictly positive and finite was not.
    NonPositiveFactor {
        name: &'static str,
        value: f64,
    },
    /// The amount dimension does not match the hierarchy level convention.
    DimensionMismatch {
        level: crate::fom::HierarchyLevel,
        expected: crate::fom::AmountDim,
        found: crate::fom::AmountDim,
    },
    /// A weighting exponent was negative or not finite.
    InvalidWeight {
        name: &'static str,
        value: f64,
    },
    EmptyOptionSet,
    /// Two figure-of-merit values from different levels or unit signatures were compared.
    IncomparableFom,
    NonPositiveTemperature(f64),
    InvalidParams(&'static str),
    NegativeInput {
        name: &'static str,
        value: f64,
    },
    NonPositiveLength(f64),
    InsufficientPoints {
        needed: usize,
        got: usize,
    },
    DegenerateYears,
    NoUsableRecords,
    InvalidRecord {
        index: usize,
        reason: &'static str,
    },
    InvalidRange(&'static str),
    NonPositiveEvaluation {
        length_m: f64,
        value: f64,
    },
    InvalidContext(&'static str),
    /// The evaluated figure of merit overflowed or underflowed `f64`.
    NonFiniteResult(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonPositiveFactor { name, value } => {
                write!(f, "{name} must be strictly positive and finite, got {value}")
            }
            Error::DimensionMismatch { level, expected, found } => {
                write!(f, "amount dimension {found} does not match {level} level (expected {expected})")
            }
            Error::InvalidWeight { name, value } => {
                write!(f, "weight {name} must be finite and >= 0, got {value}")
            }
            Error::EmptyOptionSet => f.write_str("no technology options given"),
            Error::IncomparableFom => {
                f.write_str("figure-of-merit values with different level or units cannot be compared")
            }
            Error::NonPositiveTemperature(t) => write!(f, "temperature must be > 0 K, got {t}"),
            Error::InvalidParams(why) => write!(f, "invalid parameters: {why}"),
            Error::NegativeInput { name, value } => {
                write!(f, "{name} must be >= 0, got {value}")
            }
            Error::NonPositiveLength(l) => write!(f, "length must be > 0 m, got {l}"),
            Error::InsufficientPoints { needed, got } => {
                write!(f, "need at least {needed} points, got {got}")
            }
            Error::DegenerateYears => f.write_str("all points share the same year"),
            Error::NoUsableRecords => f.write_str("no record carries the fields this figure of merit needs"),
            Error::InvalidRecord { index, reason } => write!(f, "record {index}: {reason}"),
            Error::InvalidRange(why) => write!(f, "invalid range: {why}"),
            Error::NonPositiveEvaluation { length_m, value } => {
                write!(f, "evaluator returned {value} at length {length_m} m")
            }
            Error::InvalidContext(why) => write!(f, "invalid operating context: {why}"),
            Error::NonFiniteResult(what) => write!(f, "{what} is not representable as a positive finite number"),
        }
    }
}

#[cfg(any(feature = "std", test))]
impl std::error::Error for Error {}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::NonPositiveFactor { name, value })
    }
}
