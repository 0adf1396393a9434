//! High-SNR exponent estimation and empirical NDT accounting.

mod fit;
mod latency;
mod verify;

pub use fit::{estimate_exponent, estimate_prelog, ExponentFit, FitError};
pub use latency::{account_nonorthogonal_latency, AccountError, LatencyAccount, Regime};
pub use verify::{
    claim_specs, log2_grid, round_seed, verify_scheme, ClaimResult, Scheme, VerificationReport, VerifyOptions,
};
