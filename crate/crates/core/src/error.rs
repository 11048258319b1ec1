use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// The space of invariant symmetric forms has no positive-definite
    /// member, so the action cannot be compact.
    #[error("no positive-definite invariant metric exists ({0})")]
    NoPositiveSolution(String),

    #[error("representation is not real-irreducible: {0}")]
    IrreducibilityViolated(String),

    #[error("complex structure does not fit the representation: {0}")]
    NotSecretlyComplex(String),

    #[error("candidate '{name}' neither commutes nor anticommutes with J (commutator {commutator:.3e}, anticommutator {anticommutator:.3e})")]
    NeitherCommutesNorAnticommutes {
        name: String,
        commutator: f64,
        anticommutator: f64,
    },

    #[error("quartic potential with alpha = 0 has a flat vacuum at the origin")]
    DegenerateQuartic,

    #[error("not a minimum: Hessian eigenvalue {0:.6e} is negative")]
    NotAMinimum(f64),

    #[error("massless zero mode carries data ({0:.3e}); the 1/omega measure is singular there")]
    ZeroModeSingular(f64),

    #[error("Cauchy data inconsistent with first-order dynamics (residual {0:.3e})")]
    InconsistentCauchyData(f64),

    #[error("unknown builtin '{0}'")]
    UnknownName(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("{context}: {source}")]
    Context { context: String, source: Box<Error> },
}

impl Error {
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, with context stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::Context { source, .. } => source.root(),
            e => e,
        }
    }

    /// Process exit code: 2 for bad input, 1 for anything else.
    pub fn exit_code(&self) -> i32 {
        match self.root() {
            Error::ZeroModeSingular(_) | Error::InconsistentCauchyData(_) | Error::NotSecretlyComplex(_) => 1,
            Error::Context { .. } => unreachable!("root strips context"),
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
