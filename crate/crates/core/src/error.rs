use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Structurally invalid input: unknown identifiers, missing table entries, bad JSON shape.
    #[error("malformed input: {0}")]
    Malformed(String),

    /// A validated law does not hold.
    #[error("law `{law}` fails, witness {witness}")]
    Law { law: String, witness: String },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("quantale or monad mismatch: {0}")]
    Mismatch(String),

    #[error("size cap exceeded: {what} needs {needed} elements, cap is {cap}")]
    SizeCap { what: String, needed: u128, cap: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// An operation's precondition is not met (e.g. lifting against a map outside R).
    #[error("precondition failed: {0}")]
    Precondition(String),
}

impl Error {
    pub fn law(law: impl Into<String>, witness: impl Into<String>) -> Self {
        Error::Law { law: law.into(), witness: witness.into() }
    }

    pub fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
