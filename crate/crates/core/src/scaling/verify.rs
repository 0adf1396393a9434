use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::fit::{estimate_exponent, estimate_prelog, ExponentFit, FitError};
use crate::params::SystemParams;
use crate::phy::{simulate_nonorthogonal_round, simulate_soft_transfer_round, SimError, SinrDecomposition};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    SoftTransfer,
    NonOrthogonal,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::SoftTransfer => "soft",
            Scheme::NonOrthogonal => "noma",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub rounds: usize,
    pub p_grid: Vec<f64>,
    /// Allowed `|measured - theory|` on every exponent.
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { rounds: 10_000, p_grid: log2_grid(10.0, 40.0, 7), tolerance: 0.05, seed: 0 }
    }
}

/// `count` SNR values evenly spaced in `log2 P` from `start` to `stop`.
pub fn log2_grid(start: f64, stop: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![start.exp2()];
    }
    (0..count)
        .map(|i| (start + (stop - start) * i as f64 / (count - 1) as f64).exp2())
        .collect()
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of round `round` at grid point `point`: the indices are mixed into
/// the master seed so every round has an independent stream.
pub fn round_seed(master: u64, point: usize, round: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ point as u64) ^ round as u64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClaimResult {
    pub name: String,
    pub theory: f64,
    pub measured: f64,
    pub r_squared: f64,
    pub pass: bool,
}

impl ClaimResult {
    pub fn delta(&self) -> f64 {
        self.measured - self.theory
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub scheme: Scheme,
    pub claims: Vec<ClaimResult>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }

    pub fn claim(&self, name: &str) -> Option<&ClaimResult> {
        self.claims.iter().find(|c| c.name == name)
    }
}

/// Running sums of the per-round powers, averaged over users and nodes.
#[derive(Debug, Default, Clone, Copy)]
struct Means {
    rounds: usize,
    cloud_signal: f64,
    cloud_interference: f64,
    cloud_quantization: f64,
    cloud_noise: f64,
    edge_signal: f64,
    edge_noise: f64,
    node_power: f64,
}

impl Means {
    fn add(&mut self, d: &SinrDecomposition) {
        let users = d.cloud.len() as f64;
        let mean = |f: &dyn Fn(&crate::phy::UserPowers) -> f64, layer: &[crate::phy::UserPowers]| {
            layer.iter().map(f).sum::<f64>() / users
        };
        self.rounds += 1;
        self.cloud_signal += mean(&|u| u.signal, &d.cloud);
        self.cloud_interference += mean(&|u| u.interference, &d.cloud);
        self.cloud_quantization += mean(&|u| u.quantization, &d.cloud);
        self.cloud_noise += mean(&|u| u.noise(), &d.cloud);
        if let Some(edge) = &d.edge {
            self.edge_signal += mean(&|u| u.signal, edge);
            self.edge_noise += mean(&|u| u.noise(), edge);
        }
        self.node_power += d.node_tx_power.iter().sum::<f64>() / d.node_tx_power.len() as f64;
    }

    fn get(&self, field: fn(&Means) -> f64) -> f64 {
        field(self) / self.rounds as f64
    }
}

fn measure_point(
    p: &SystemParams,
    scheme: Scheme,
    rounds: usize,
    seed: u64,
    point: usize,
) -> Result<Means, SimError> {
    let mut means = Means::default();
    for round in 0..rounds {
        let mut rng = ChaCha8Rng::seed_from_u64(round_seed(seed, point, round));
        let d = match scheme {
            Scheme::SoftTransfer => simulate_soft_transfer_round(p, &mut rng)?,
            Scheme::NonOrthogonal => simulate_nonorthogonal_round(p, &mut rng)?,
        };
        means.add(&d);
    }
    Ok(means)
}

type Series = fn(&[Means]) -> Vec<f64>;

enum Fit {
    Exponent(Series),
    Prelog(Series),
}

fn column(points: &[Means], field: fn(&Means) -> f64) -> Vec<f64> {
    points.iter().map(|m| m.get(field)).collect()
}

/// Claim name, theoretical slope and what to regress.
fn claims(scheme: Scheme, alpha: f64) -> Vec<(&'static str, f64, Fit)> {
    match scheme {
        Scheme::SoftTransfer => vec![
            ("soft.signal_exponent", 1.0, Fit::Exponent(|m| column(m, |x| x.cloud_signal))),
            ("soft.interference_exponent", 1.0 - alpha, Fit::Exponent(|m| column(m, |x| x.cloud_interference))),
            ("soft.quantization_exponent", 1.0 - alpha, Fit::Exponent(|m| column(m, |x| x.cloud_quantization))),
            ("soft.effective_noise_exponent", 1.0 - alpha, Fit::Exponent(|m| column(m, |x| x.cloud_noise))),
            ("soft.prelog", alpha, Fit::Prelog(|m| m.iter().map(|x| x.cloud_signal / x.cloud_noise).collect())),
            ("soft.node_power_exponent", 1.0, Fit::Exponent(|m| column(m, |x| x.node_power))),
        ],
        Scheme::NonOrthogonal => vec![
            ("noma.edge_prelog", 1.0 - alpha, Fit::Prelog(|m| m.iter().map(|x| x.edge_signal / x.edge_noise).collect())),
            ("noma.cloud_prelog", alpha, Fit::Prelog(|m| m.iter().map(|x| x.cloud_signal / x.cloud_noise).collect())),
            ("noma.edge_noise_exponent", alpha, Fit::Exponent(|m| column(m, |x| x.edge_noise))),
            ("noma.cloud_noise_exponent", 0.0, Fit::Exponent(|m| column(m, |x| x.cloud_noise))),
            ("noma.cloud_interference_exponent", 0.0, Fit::Exponent(|m| column(m, |x| x.cloud_interference))),
            ("noma.node_power_exponent", 1.0, Fit::Exponent(|m| column(m, |x| x.node_power))),
        ],
    }
}

/// Names and theoretical slopes of the claims checked for `scheme`.
pub fn claim_specs(scheme: Scheme, alpha: f64) -> Vec<(&'static str, f64)> {
    claims(scheme, alpha).into_iter().map(|(name, theory, _)| (name, theory)).collect()
}

/// Simulates `scheme` on every grid SNR and checks each claimed high-SNR
/// slope against its theoretical value.
///
/// Slopes come from sample means over rounds at each SNR; prelogs use the
/// ratio of mean signal to mean noise power.
pub fn verify_scheme(
    params: &SystemParams,
    scheme: Scheme,
    opts: &VerifyOptions,
) -> Result<VerificationReport, SimError> {
    if opts.rounds == 0 {
        return Err(SimError::Precondition("need at least one round per grid point"));
    }
    if opts.p_grid.len() < 4 {
        return Err(SimError::Precondition("need at least four SNR grid points"));
    }
    let points = opts
        .p_grid
        .iter()
        .enumerate()
        .map(|(i, &snr)| measure_point(&params.with_snr(snr)?, scheme, opts.rounds, opts.seed, i))
        .collect::<Result<Vec<_>, SimError>>()?;

    let claims = claims(scheme, params.alpha())
        .into_iter()
        .map(|(name, theory, fit)| {
            let result: Result<ExponentFit, FitError> = match fit {
                Fit::Exponent(series) => estimate_exponent(&opts.p_grid, &series(&points)),
                Fit::Prelog(series) => estimate_prelog(&opts.p_grid, &series(&points)),
            };
            match result {
                Ok(f) => ClaimResult {
                    name: name.to_string(),
                    theory,
                    measured: f.slope,
                    r_squared: f.r_squared,
                    pass: (f.slope - theory).abs() <= opts.tolerance,
                },
                // A zero or otherwise unusable mean cannot support the claim.
                Err(_) => ClaimResult {
                    name: name.to_string(),
                    theory,
                    measured: f64::NAN,
                    r_squared: f64::NAN,
                    pass: false,
                },
            }
        })
        .collect();
    Ok(VerificationReport { scheme, claims })
}
