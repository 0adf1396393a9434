use num_complex::Complex64;
use rand::Rng;

use super::channel::{complex_gaussian, degrade_csi, draw_channel, ChannelState};
use super::matrix::{dot, norm_sqr};
use super::precoder::{zf_precoders, CsiBasis, PrecoderSet};
use super::quantizer::{quantize_fronthaul, QuantizerConfig};
use super::SimError;
use crate::params::SystemParams;

/// Received power terms at one user for one decoded layer.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct UserPowers {
    pub signal: f64,
    /// Same-layer leakage through the CSI innovation (`z_k`).
    pub interference: f64,
    /// Power of the other layer when it is treated as noise.
    pub cross_layer: f64,
    /// Fronthaul quantization noise seen through the channel.
    pub quantization: f64,
    pub thermal: f64,
}

impl UserPowers {
    /// Everything except the desired signal.
    pub fn noise(&self) -> f64 {
        self.interference + self.cross_layer + self.quantization + self.thermal
    }

    pub fn total(&self) -> f64 {
        self.signal + self.noise()
    }

    pub fn sinr(&self) -> f64 {
        self.signal / self.noise()
    }
}

/// Per-user power split for one simulated round.
///
/// `cloud` is the fronthaul-precoded layer (after SIC when an edge layer is
/// present). `edge` is the cache-precoded layer, decoded first.
#[derive(Debug, Clone, PartialEq)]
pub struct SinrDecomposition {
    pub cloud: Vec<UserPowers>,
    pub edge: Option<Vec<UserPowers>>,
    /// Realized `|x_i|^2` at each edge node.
    pub node_tx_power: Vec<f64>,
}

fn check_common(p: &SystemParams, state: &ChannelState) -> Result<(), SimError> {
    if p.nodes() < 2 {
        return Err(SimError::Precondition("simulation needs at least two users"));
    }
    if p.alpha() <= 0.0 {
        return Err(SimError::Precondition("cloud precoding needs alpha > 0"));
    }
    if p.snr() <= 1.0 {
        return Err(SimError::SnrTooLow(p.snr()));
    }
    assert_eq!(state.nodes(), p.nodes(), "channel size must match K");
    Ok(())
}

/// `sum_k v_k s_k` with `s_k ~ CN(0, power)`.
fn precode<R: Rng + ?Sized>(beams: &PrecoderSet, power: f64, rng: &mut R) -> Vec<Complex64> {
    let n = beams.vectors.len();
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for v in &beams.vectors {
        let s = complex_gaussian(rng, power);
        for (xi, vi) in x.iter_mut().zip(v) {
            *xi += vi * s;
        }
    }
    x
}

/// Leakage at user `k` from the other streams of a layer, through the
/// innovation of the CSI the beams were designed from.
fn residual(innovation_row: &[Complex64], beams: &PrecoderSet, k: usize, power: f64) -> f64 {
    beams
        .vectors
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != k)
        .map(|(_, v)| dot(innovation_row, v).norm_sqr() * power)
        .sum()
}

/// Soft-transfer fronthauling on a given channel state.
///
/// Streams of power `P/K` are ZF-precoded on the estimate and quantized with
/// `B = alpha * log2(P)` bits per sample.
pub fn soft_transfer_round_with_csi<R: Rng + ?Sized>(
    p: &SystemParams,
    state: &ChannelState,
    rng: &mut R,
) -> Result<SinrDecomposition, SimError> {
    check_common(p, state)?;
    let k = p.nodes();
    let stream_power = p.snr() / k as f64;
    let beams = zf_precoders(&state.h_hat, CsiBasis::Estimated)?;
    // Beams are unit norm, so the per-node average of E|x_bar_i|^2 is P/K.
    let quantizer = QuantizerConfig::for_snr(p.snr(), p.alpha(), stream_power)?;

    let x_bar = precode(&beams, stream_power, rng);
    let x = quantize_fronthaul(&x_bar, &quantizer, rng);

    let cloud = (0..k)
        .map(|user| {
            let h = state.h.row(user);
            UserPowers {
                signal: dot(h, &beams.vectors[user]).norm_sqr() * stream_power,
                interference: residual(state.h_tilde.row(user), &beams, user, stream_power),
                cross_layer: 0.0,
                quantization: norm_sqr(h) * quantizer.noise_variance,
                thermal: 1.0,
            }
        })
        .collect();

    Ok(SinrDecomposition {
        cloud,
        edge: None,
        node_tx_power: x.iter().map(Complex64::norm_sqr).collect(),
    })
}

/// Draws a channel, degrades the cloud CSI and runs one soft-transfer round.
pub fn simulate_soft_transfer_round<R: Rng + ?Sized>(
    p: &SystemParams,
    rng: &mut R,
) -> Result<SinrDecomposition, SimError> {
    let h = draw_channel(p.nodes(), rng);
    let state = degrade_csi(h, p.snr(), p.alpha(), rng)?;
    soft_transfer_round_with_csi(p, &state, rng)
}

/// Superposition of an edge layer (ZF on the true channel, stream power
/// `P/(2K)`) and a cloud layer (soft transfer on the estimate, stream power
/// `P^alpha/(2K)`).
///
/// The edge layer is decoded first with the cloud layer as noise; the cloud
/// layer is then decoded after the edge layer has been subtracted exactly.
pub fn nonorthogonal_round_with_csi<R: Rng + ?Sized>(
    p: &SystemParams,
    state: &ChannelState,
    rng: &mut R,
) -> Result<SinrDecomposition, SimError> {
    check_common(p, state)?;
    if !(p.mu() > 0.0 && p.mu() < 1.0) {
        return Err(SimError::Precondition("superposition needs 0 < mu < 1"));
    }
    let k = p.nodes();
    let edge_power = p.snr() / (2 * k) as f64;
    let cloud_power = p.snr().powf(p.alpha()) / (2 * k) as f64;

    let edge_csi = ChannelState::perfect(state.h.clone());
    let edge_beams = zf_precoders(&edge_csi.h_hat, CsiBasis::True)?;
    let cloud_beams = zf_precoders(&state.h_hat, CsiBasis::Estimated)?;
    let quantizer = QuantizerConfig::for_snr(p.snr(), p.alpha(), cloud_power)?;

    let x_e = precode(&edge_beams, edge_power, rng);
    let x_f_bar = precode(&cloud_beams, cloud_power, rng);
    let x_f = quantize_fronthaul(&x_f_bar, &quantizer, rng);
    let node_tx_power = x_e.iter().zip(&x_f).map(|(a, b)| (a + b).norm_sqr()).collect();

    let mut edge = Vec::with_capacity(k);
    let mut cloud = Vec::with_capacity(k);
    for user in 0..k {
        let h = state.h.row(user);
        let quantization = norm_sqr(h) * quantizer.noise_variance;
        let layer = UserPowers {
            signal: dot(h, &cloud_beams.vectors[user]).norm_sqr() * cloud_power,
            interference: residual(state.h_tilde.row(user), &cloud_beams, user, cloud_power),
            cross_layer: 0.0,
            quantization,
            thermal: 1.0,
        };
        edge.push(UserPowers {
            signal: dot(h, &edge_beams.vectors[user]).norm_sqr() * edge_power,
            interference: residual(edge_csi.h_tilde.row(user), &edge_beams, user, edge_power),
            cross_layer: layer.signal + layer.interference,
            quantization,
            thermal: 1.0,
        });
        cloud.push(layer);
    }

    Ok(SinrDecomposition { cloud, edge: Some(edge), node_tx_power })
}

/// Draws a channel, degrades the cloud CSI and runs one superposition round.
pub fn simulate_nonorthogonal_round<R: Rng + ?Sized>(
    p: &SystemParams,
    rng: &mut R,
) -> Result<SinrDecomposition, SimError> {
    let h = draw_channel(p.nodes(), rng);
    let state = degrade_csi(h, p.snr(), p.alpha(), rng)?;
    nonorthogonal_round_with_csi(p, &state, rng)
}
