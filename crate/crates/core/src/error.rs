use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("party index {party} out of range for {parties} parties")]
    InvalidParty { party: usize, parties: usize },
    #[error("operator is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("not a density matrix: {0}")]
    NotDensity(String),
    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),
    #[error("degenerate operator tuple: the image of the state vanishes")]
    DegenerateOperator,
    #[error("invalid state id `{0}`")]
    InvalidStateId(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("problem dimension {dim} exceeds the budget of {budget}")]
    BudgetExceeded { dim: usize, budget: usize },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn shape<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Shape(msg.into()))
}
