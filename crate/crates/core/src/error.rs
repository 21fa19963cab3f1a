use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A precondition on the input of a series or normalization routine failed.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("residue of form {index} is not real (imaginary part {imag:e})")]
    ResidueNotReal { index: usize, imag: f64 },
    #[error("map is not an immersion near r = {r:e}, t = {t}")]
    DegenerateAtPoint { r: f64, t: f64 },
    #[error("independence test at pole order {level} falls inside the tie tolerance (relative determinant {ratio:e})")]
    NumericalRankFailure { level: i32, ratio: f64 },
    #[error("every m_k is infinite; the end cannot be an immersion")]
    AllMkInfinite,
    #[error("wrong case: {0}")]
    WrongCase(String),
    #[error("normalization residual {residual:e} exceeds tolerance {tolerance:e}")]
    SolveFailure { residual: f64, tolerance: f64 },
    #[error("quadrature did not converge: estimate {estimate}, error {error:e}")]
    QuadratureNoConvergence { estimate: f64, error: f64 },
    #[error("projected curve passes within tolerance of the origin at t = {t}")]
    CurveThroughOrigin { t: f64 },
    #[error("invalid end definition: {0}")]
    InvalidEnd(String),
}

impl Error {
    pub(crate) fn domain(msg: &str) -> Self {
        Error::Domain(String::from(msg))
    }

    pub(crate) fn wrong_case(msg: &str) -> Self {
        Error::WrongCase(String::from(msg))
    }
}
