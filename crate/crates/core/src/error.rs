use crate::geometry::Node;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("positions must have 1 to 3 coordinates, got {0}")]
    InvalidDimension(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("coordinates must be finite")]
    NonFiniteCoordinate,
    #[error("a layout needs at least one destination")]
    NoDestinations,
    #[error("zero distance between {from} and {to}")]
    Singular { from: Node, to: Node },
    #[error("{0} has no transmit power")]
    NotATransmitter(Node),
    #[error("destination index {index} out of range for {count} destinations")]
    DestinationIndex { index: usize, count: usize },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    #[error("SNR must be finite and non-negative, got {0}")]
    NegativeSnr(f64),
    #[error("correlation coefficient must lie in [0, 1], got {0}")]
    RhoOutOfRange(f64),
    #[error("covariance matrix is not positive semidefinite")]
    NotPositiveSemidefinite,
    #[error("relay power is zero; the log-det ratio is undefined")]
    ZeroRelayPower,
    #[error("bound requires exactly {expected} destination(s), layout has {found}")]
    UnsupportedTopology { expected: usize, found: usize },
    #[error("bound is only defined in the low-SNR regime")]
    UnsupportedMode,
    #[error("objective returned a non-finite value")]
    NonFiniteObjective,
    #[error("search box is empty or excludes every feasible point")]
    EmptyFeasibleSet,
    #[error("no grid cell could be evaluated")]
    NoValidCells,
    #[error("point lies outside the function domain")]
    OutsideDomain,
}
