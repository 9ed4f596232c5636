use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A parameter sits on a boundary where a closed form degenerates,
    /// e.g. `mu = 0` makes `1/sqrt(m2)` singular.
    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Term-by-term assembly disagrees with the closed form it should reproduce.
    #[error("assembly mismatch in {what}: assembled {assembled}, closed form {closed_form}")]
    AssemblyMismatch {
        what: &'static str,
        assembled: f64,
        closed_form: f64,
    },

    /// A determinant fell below the validity threshold of the expansion.
    #[error("outside validity region: {what} = {value} (must exceed {threshold})")]
    ValidityRegion {
        what: String,
        value: f64,
        threshold: f64,
    },

    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
