//! Signal-level Monte Carlo model of soft-transfer fronthauling and of the
//! superposition (cloud layer + edge layer) delivery scheme.
//!
//! Rounds report conditional expected powers given the channel draw, split
//! into signal, residual interference, quantization and thermal terms. The
//! transmit signal itself is drawn symbol by symbol so that per-node
//! transmit power can be measured.

mod channel;
mod matrix;
mod precoder;
mod quantizer;
mod round;

use thiserror::Error;

pub use channel::{complex_gaussian, degrade_csi, draw_channel, ChannelState};
pub use matrix::ComplexMatrix;
pub use precoder::{zf_precoders, CsiBasis, PrecoderSet};
pub use quantizer::{quantize_fronthaul, QuantizerConfig};
pub use round::{
    nonorthogonal_round_with_csi, simulate_nonorthogonal_round, simulate_soft_transfer_round,
    soft_transfer_round_with_csi, SinrDecomposition, UserPowers,
};

use crate::params::ParamError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("channel rows other than {user} are rank deficient (null space dimension {null_dim})")]
    RankDeficient { user: usize, null_dim: usize },
    #[error("quantizer needs a positive bit budget, got {0}")]
    ZeroRateQuantizer(f64),
    #[error("invalid quantizer sample power {0}")]
    InvalidSamplePower(f64),
    #[error("CSI degradation needs SNR P > 1, got {0}")]
    SnrTooLow(f64),
    #[error("{0}")]
    Precondition(&'static str),
    #[error(transparent)]
    Params(#[from] ParamError),
}
