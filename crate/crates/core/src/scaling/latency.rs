use thiserror::Error;

use crate::params::SystemParams;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AccountError {
    #[error("superposition has no cloud layer without CSI (alpha = 0)")]
    Infeasible,
    #[error("fronthaul rate must be positive, got {0}")]
    NoFronthaul(f64),
}

/// Which layer finishes last in the superposition scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `mu <= 1 - alpha`: the cloud layer dominates the edge time.
    CloudLimited,
    /// `mu >= 1 - alpha`: the edge layer dominates; the cloud layer is done
    /// early and the rest of the cached part is sent interference free.
    EdgeLimited,
}

/// Symbol counts of the superposition scheme in units of `L / log P`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatencyAccount {
    pub t_f: f64,
    /// Edge layer alone at prelog `1 - alpha`.
    pub t_e1: f64,
    /// Cloud layer at prelog `alpha`.
    pub t_e2: f64,
    /// Leftover cached part at full prelog after the cloud layer ends.
    pub t_e1_prime: f64,
    pub t_e: f64,
    pub regime: Regime,
}

impl LatencyAccount {
    pub fn total(&self) -> f64 {
        self.t_f + self.t_e
    }
}

/// Walks the superposition schedule step by step: fronthaul time, time to
/// finish each layer, and the interference-free tail when the edge layer
/// outlasts the cloud layer.
pub fn account_nonorthogonal_latency(p: &SystemParams) -> Result<LatencyAccount, AccountError> {
    let (mu, alpha, r) = (p.mu(), p.alpha(), p.r());
    let cloud_part = mu < 1.0;
    if cloud_part && alpha == 0.0 {
        return Err(AccountError::Infeasible);
    }
    if cloud_part && r <= 0.0 {
        return Err(AccountError::NoFronthaul(r));
    }
    // Quantized cloud samples carry B = alpha log P bits for (1 - mu) L /
    // R_F samples at R_F = alpha log P, over a C = r log P link.
    let (t_f, t_e2) = if cloud_part { ((1.0 - mu) / r, (1.0 - mu) / alpha) } else { (0.0, 0.0) };
    let t_e1 = if mu == 0.0 { 0.0 } else { mu / (1.0 - alpha) };

    let account = if cloud_part && mu <= 1.0 - alpha {
        LatencyAccount { t_f, t_e1, t_e2, t_e1_prime: 0.0, t_e: t_e2, regime: Regime::CloudLimited }
    } else {
        // Fraction t_e2 / t_e1 of the cached part is delivered alongside the
        // cloud layer; the remainder goes at rate log P.
        let t_e1_prime = mu * (1.0 - t_e2 / t_e1);
        LatencyAccount {
            t_f,
            t_e1,
            t_e2,
            t_e1_prime,
            t_e: t_e2 + t_e1_prime,
            regime: Regime::EdgeLimited,
        }
    };
    debug_assert!(
        (account.total() - crate::ndt::nonorthogonal_ndt(p).delta.get()).abs() < 1e-9,
        "schedule disagrees with the closed form at {p:?}"
    );
    Ok(account)
}
