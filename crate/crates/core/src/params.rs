//! System parameters shared by the NDT formulas and the link simulator.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("number of edge nodes must be at least 1, got {0}")]
    ZeroNodes(usize),
    #[error("fractional cache capacity mu = {0} outside [0, 1]")]
    CacheOutOfRange(f64),
    #[error("fronthaul rate r = {0} must be a non-negative number")]
    NegativeRate(f64),
    #[error("CSI quality alpha = {0} outside [0, 1]")]
    AlphaOutOfRange(f64),
    #[error("SNR P = {0} must be a positive finite number")]
    InvalidSnr(f64),
}

/// The tuple `(K, mu, r, alpha, P)` describing one fog network operating point.
///
/// Fields are private so every value in circulation has passed validation.
/// `snr` is only consumed by the simulator; the NDT formulas ignore it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    nodes: usize,
    mu: f64,
    r: f64,
    alpha: f64,
    snr: f64,
}

impl SystemParams {
    pub fn new(nodes: usize, mu: f64, r: f64, alpha: f64, snr: f64) -> Result<Self, ParamError> {
        let p = SystemParams { nodes, mu, r, alpha, snr };
        p.validate()?;
        Ok(p)
    }

    /// Parameters for pure NDT evaluation, with a placeholder SNR.
    pub fn for_ndt(nodes: usize, mu: f64, r: f64, alpha: f64) -> Result<Self, ParamError> {
        Self::new(nodes, mu, r, alpha, 1.0)
    }

    fn validate(&self) -> Result<(), ParamError> {
        if self.nodes == 0 {
            return Err(ParamError::ZeroNodes(self.nodes));
        }
        if !(0.0..=1.0).contains(&self.mu) {
            return Err(ParamError::CacheOutOfRange(self.mu));
        }
        // r = +inf is allowed: an unlimited fronthaul.
        if self.r.is_nan() || self.r < 0.0 {
            return Err(ParamError::NegativeRate(self.r));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(ParamError::AlphaOutOfRange(self.alpha));
        }
        if !(self.snr.is_finite() && self.snr > 0.0) {
            return Err(ParamError::InvalidSnr(self.snr));
        }
        Ok(())
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn snr(&self) -> f64 {
        self.snr
    }

    pub fn with_mu(self, mu: f64) -> Result<Self, ParamError> {
        Self::new(self.nodes, mu, self.r, self.alpha, self.snr)
    }

    pub fn with_r(self, r: f64) -> Result<Self, ParamError> {
        Self::new(self.nodes, self.mu, r, self.alpha, self.snr)
    }

    pub fn with_alpha(self, alpha: f64) -> Result<Self, ParamError> {
        Self::new(self.nodes, self.mu, self.r, alpha, self.snr)
    }

    pub fn with_snr(self, snr: f64) -> Result<Self, ParamError> {
        Self::new(self.nodes, self.mu, self.r, self.alpha, snr)
    }
}
