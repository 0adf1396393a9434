//! Latency analysis of cache-aided fog radio access networks whose cloud
//! sees delayed channel state.
//!
//! * [`ndt`] evaluates the normalized delivery time (NDT) of edge, cloud,
//!   orthogonal and superposition delivery, and their convex combination.
//! * [`phy`] simulates the precoding, fronthaul quantization and successive
//!   decoding behind the cloud-based schemes.
//! * [`scaling`] turns simulated powers into high-SNR exponents and checks
//!   them, and replays the superposition schedule symbol by symbol.
//! * [`sweep`] drives parameter sweeps and verification runs from a flat
//!   configuration file and writes CSV.

pub mod envelope;
pub mod ndt;
pub mod params;
pub mod phy;
pub mod scaling;
pub mod sweep;

pub use envelope::{lower_convex_envelope, EnvelopeError, PiecewiseLinearCurve};
pub use ndt::{
    best_pointwise_ndt, cloud_hard_ndt, cloud_soft_ndt, combined_ndt, combined_ndt_curve,
    edge_ia_ndt, edge_zf_ndt, nonorthogonal_ndt, orthogonal_ndt, Ndt, NdtBreakdown,
};
pub use params::{ParamError, SystemParams};
