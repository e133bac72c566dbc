use core::fmt;

/// Errors raised by parsing and by subspace membership checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A rule string had the wrong number of characters.
    RuleLength { expected: usize, found: usize },
    /// A rule string had an invalid character at `position`.
    RuleChar { position: usize, found: char },
    /// A template string had the wrong number of symbols.
    TemplateLength { found: usize },
    /// A template string had a symbol other than `0`, `1` or `*`.
    TemplateChar { position: usize, found: char },
    /// A rule disagrees with a template at a fixed position.
    NotInSubspace { position: usize },
    /// A genotype does not have one bit per free template position.
    GenotypeLength { expected: usize, found: usize },
    /// Lattice widths must be odd and non-zero.
    EvenWidth(usize),
    /// Autocorrelation of a constant series is undefined.
    ZeroVariance,
    /// The series is too short for the requested lag.
    SeriesTooShort { len: usize, max_lag: usize },
    /// Olympus derivation takes exactly six rules.
    RuleCount { expected: usize, found: usize },
    /// A numeric argument was outside its domain.
    InvalidParameter(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::RuleLength { expected, found } => {
                write!(f, "rule must have {expected} characters, found {found}")
            }
            Error::RuleChar { position, found } => {
                write!(f, "invalid rule character {found:?} at position {position}")
            }
            Error::TemplateLength { found } => {
                write!(f, "template must have 128 symbols, found {found}")
            }
            Error::TemplateChar { position, found } => {
                write!(f, "invalid template symbol {found:?} at position {position}")
            }
            Error::NotInSubspace { position } => {
                write!(f, "rule disagrees with the template at fixed position {position}")
            }
            Error::GenotypeLength { expected, found } => {
                write!(f, "genotype must have {expected} bits, found {found}")
            }
            Error::EvenWidth(n) => write!(f, "lattice width must be odd and positive, got {n}"),
            Error::ZeroVariance => write!(f, "autocorrelation undefined for a zero-variance series"),
            Error::SeriesTooShort { len, max_lag } => {
                write!(f, "series of length {len} is too short for max lag {max_lag}")
            }
            Error::RuleCount { expected, found } => {
                write!(f, "expected {expected} rules, found {found}")
            }
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
