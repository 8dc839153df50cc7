use thiserror::Error;

/// Errors raised by the library. Each variant maps onto one error class of
/// the command-line tool (usage, capacity, infeasibility).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A numeric argument is outside its admissible range.
    #[error("domain error: {0}")]
    Domain(String),
    /// A flow does not route exactly the instance rate over simple s-t paths.
    #[error("infeasible flow: {0}")]
    Feasibility(String),
    /// The network is malformed or has no s-t path.
    #[error("structure error: {0}")]
    Structure(String),
    /// The operation does not support some latency function of the instance.
    #[error("unsupported model: {0}")]
    UnsupportedModel(String),
    /// A desk-scale enumeration bound was exceeded.
    #[error("capacity exceeded: {what} is {count}, the cap is {cap}")]
    Capacity { what: String, count: u128, cap: u128 },
    /// Randomized search ran out of attempts.
    #[error("search failed after {attempts} attempts; best deviation found {best_deviation}")]
    SearchFailure { attempts: u64, best_deviation: String },
    /// No feasible answer exists for the given parameters.
    #[error("infeasible: {0}")]
    Infeasible(String),
    /// The instance is degenerate for the requested quantity (e.g. a zero cost).
    #[error("degenerate instance: {0}")]
    Degenerate(String),
    /// Document parsing failed.
    #[error(transparent)]
    Parse(#[from] crate::io::ParseError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn capacity(what: impl Into<String>, count: u128, cap: u128) -> Self {
        Error::Capacity { what: what.into(), count, cap }
    }
}
