use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::matrix::ComplexMatrix;
use super::SimError;

/// Draws from `CN(0, variance)`: independent real and imaginary parts, each
/// with variance `variance / 2`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let scale = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * scale, im * scale)
}

/// True channel, cloud estimate and innovation for one time slot.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelState {
    /// `h[(k, i)]` is the gain from node `i` to user `k`.
    pub h: ComplexMatrix,
    pub h_hat: ComplexMatrix,
    /// `h - h_hat`.
    pub h_tilde: ComplexMatrix,
    /// Per-entry variance of the estimation error.
    pub innovation_variance: f64,
}

impl ChannelState {
    /// Cloud knows the channel exactly.
    pub fn perfect(h: ComplexMatrix) -> Self {
        let h_tilde = ComplexMatrix::zeros(h.rows(), h.cols());
        ChannelState { h_hat: h.clone(), h, h_tilde, innovation_variance: 0.0 }
    }

    pub fn nodes(&self) -> usize {
        self.h.cols()
    }
}

/// `K x K` matrix of i.i.d. `CN(0, 1)` gains.
pub fn draw_channel<R: Rng + ?Sized>(nodes: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(nodes, nodes, |_, _| complex_gaussian(rng, 1.0))
}

/// Cloud estimate `h_hat = h + e` with `e` i.i.d. `CN(0, P^-alpha)`.
///
/// The true channel keeps its exact distribution; only the estimate is
/// perturbed.
pub fn degrade_csi<R: Rng + ?Sized>(
    h: ComplexMatrix,
    snr: f64,
    alpha: f64,
    rng: &mut R,
) -> Result<ChannelState, SimError> {
    if !(snr > 1.0 && snr.is_finite()) {
        return Err(SimError::SnrTooLow(snr));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(crate::params::ParamError::AlphaOutOfRange(alpha).into());
    }
    let variance = snr.powf(-alpha);
    let err = ComplexMatrix::from_fn(h.rows(), h.cols(), |_, _| complex_gaussian(rng, variance));
    let h_hat = h.zip_map(&err, |a, e| a + e);
    let h_tilde = err.zip_map(&err, |e, _| -e);
    Ok(ChannelState { h, h_hat, h_tilde, innovation_variance: variance })
}
