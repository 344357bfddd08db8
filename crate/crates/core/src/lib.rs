//! Rate and energy optimization for a two-tier network: a multi-antenna
//! base station broadcasting to cellular users while a full-duplex D2D pair
//! shares the band, with RF energy harvesting at the receivers.
//!
//! The library computes Pareto-optimal transmit covariance and
//! pseudo-covariance designs and traces rate-rate and rate-energy trade-off
//! boundaries. Max-min (weighted Chebyshev) objectives are solved by
//! bisection over semidefinite feasibility subproblems, with semidefinite
//! relaxation and Gaussian randomization for beamformer recovery, and a
//! second optimization stage over pseudo-covariances for improper Gaussian
//! signaling.

pub mod covopt;
pub mod error;
pub mod model;
pub mod pseudoopt;
pub mod regions;
pub mod sdp;
pub mod stats;

pub use error::{OptError, ParseError, SdpError};
pub use model::{
    example_network, load_channels, random_channels, serialize, ChannelSet, NetworkConfig,
    NetworkInstance, RsiMode, Violation,
};
pub use stats::{rates_and_energies, LinkStats, RateEnergyReport, RateSplit, StreamCovariance, TxDesign};
