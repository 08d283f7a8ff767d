use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operator shape invalid: {0}")]
    Shape(String),
    #[error("entries are not Hermitian: max |A - A^H| = {deviation:e}")]
    NotHermitian { deviation: f64 },
    #[error("non-finite matrix entry")]
    NonFinite,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },
    #[error("logarithm of an operator with eigenvalue {eigenvalue:e} <= 0")]
    LogDomain { eigenvalue: f64 },
    #[error("operator is not positive semidefinite: eigenvalue {eigenvalue:e}")]
    NotPsd { eigenvalue: f64 },
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("every grid point evaluated to an infinite distance")]
    AllInfinite,
    #[error("register of {m} qubits exceeds the limit of {max} for this evaluator")]
    RegisterTooLarge { m: u32, max: u32 },
    #[error("no default phase offset for m = {m}; pass an explicit delta")]
    ExplicitDeltaRequired { m: u32 },
    #[error("conventional coherence routes disagree: closed form {closed_form}, optimizer {optimized}")]
    RouteDisagreement { closed_form: f64, optimized: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Error {
    Error::InvalidParameter { name, value, reason }
}
