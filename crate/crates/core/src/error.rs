use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("function has the same sign at both ends of the bracket")]
    NoSignChange,
    #[error("objective is not finite at ({0}, {1})")]
    NonFinite(f64, f64),
    #[error("argument outside domain: {0}")]
    Domain(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("enumeration of {0} cases exceeds the guard")]
    TooLarge(u128),
    #[error("noise threshold undefined: L(P - N) <= P")]
    SigmaUndefined,
    #[error("only {0} errors observed, estimate unreliable")]
    InsufficientErrors(u64),
    #[error("window would hold about {0} points")]
    WindowTooLarge(u128),
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
