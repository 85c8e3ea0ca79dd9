use thiserror::Error;

/// Errors raised across the crate.
///
/// Each variant maps onto one CLI exit code, see [`Error::exit_code`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Bad input: out-of-range parameter, invalid index, malformed spec.
    #[error("parameter error: {0}")]
    Parameter(String),
    /// Singular matrix or wrong dimensions.
    #[error("structural error: {0}")]
    Structural(String),
    /// A requested object (orbit, equilibrium, simplex point) does not exist.
    #[error("existence error: {0}")]
    Existence(String),
    /// A point lies outside the domain where the requested map is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// The interior-equilibrium solve left the simplex.
    #[error("no interior equilibrium: unnormalized solution {unnormalized:?}")]
    NoInteriorEquilibrium { unnormalized: Vec<f64> },
    /// Restricted 2x2 game with a vanishing payoff difference.
    #[error("non-generic restricted game: {0}")]
    Classification(String),
    /// The flow direction is not determined (non-transversal line).
    #[error("ambiguous flow: {0}")]
    Ambiguity(String),
    /// The flow is not unique at the interior equilibrium.
    #[error("non-unique flow: {0}")]
    NonUnique(String),
    /// Event detection called on a state that is already tied.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A bracketing search found no sign change.
    #[error("search error: {0}")]
    Search(String),
    /// A fitted model failed its verification residual.
    #[error("model error: {0}")]
    Model(String),
    /// Computed quantities violate an invariant they must satisfy.
    #[error("internal consistency error: {0}")]
    Consistency(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code: 2 for parameter problems, 3 for existence and
    /// domain problems, 4 for invariant failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parameter(_) | Error::Structural(_) | Error::Io(_) => 2,
            Error::Existence(_)
            | Error::Domain(_)
            | Error::NoInteriorEquilibrium { .. }
            | Error::Classification(_)
            | Error::Ambiguity(_)
            | Error::NonUnique(_)
            | Error::Precondition(_)
            | Error::Search(_) => 3,
            Error::Model(_) | Error::Consistency(_) => 4,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
