use num_complex::Complex64;
use rand::Rng;

use super::channel::complex_gaussian;
use super::SimError;

/// Gaussian test-channel model of a fronthaul quantizer.
///
/// With `B` bits per sample, `B = log2(1 + E|x|^2 / sigma^2)`, so the noise
/// variance is `E|x|^2 / (2^B - 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantizerConfig {
    pub bits_per_sample: f64,
    pub sample_power: f64,
    pub noise_variance: f64,
}

impl QuantizerConfig {
    pub fn new(bits_per_sample: f64, sample_power: f64) -> Result<Self, SimError> {
        if bits_per_sample.is_nan() || bits_per_sample <= 0.0 {
            return Err(SimError::ZeroRateQuantizer(bits_per_sample));
        }
        if !(sample_power >= 0.0 && sample_power.is_finite()) {
            return Err(SimError::InvalidSamplePower(sample_power));
        }
        let noise_variance = sample_power / (bits_per_sample * std::f64::consts::LN_2).exp_m1();
        Ok(QuantizerConfig { bits_per_sample, sample_power, noise_variance })
    }

    /// `B = alpha * log2(P)` bits per sample.
    pub fn for_snr(snr: f64, alpha: f64, sample_power: f64) -> Result<Self, SimError> {
        Self::new(alpha * snr.log2(), sample_power)
    }
}

/// Adds independent `CN(0, sigma^2)` noise to each component.
pub fn quantize_fronthaul<R: Rng + ?Sized>(
    x_bar: &[Complex64],
    q: &QuantizerConfig,
    rng: &mut R,
) -> Vec<Complex64> {
    x_bar.iter().map(|&x| x + complex_gaussian(rng, q.noise_variance)).collect()
}
