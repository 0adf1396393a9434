use thiserror::Error;

use super::config::{Curve, Mode, SweepConfig, SweepVar};
use crate::ndt::{
    cloud_hard_ndt, cloud_soft_ndt, combined_ndt, edge_ia_ndt, edge_zf_ndt, nonorthogonal_ndt,
    orthogonal_ndt, NdtBreakdown,
};
use crate::params::{ParamError, SystemParams};
use crate::phy::SimError;
use crate::scaling::{claim_specs, log2_grid, verify_scheme, ClaimResult, Scheme, VerifyOptions};

pub const NDT_HEADER: [&str; 6] = ["sweep_var", "value", "curve", "delta_f", "delta_e", "delta"];
pub const VERIFY_HEADER: [&str; 5] = ["claim", "theory", "measured", "r2", "pass"];

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("configuration is for {found}, expected {expected}")]
    WrongMode { expected: &'static str, found: &'static str },
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub sweep_var: SweepVar,
    pub value: f64,
    pub curve: Curve,
    pub ndt: NdtBreakdown,
}

/// Evaluates one curve at one operating point.
pub fn evaluate_curve(curve: Curve, p: &SystemParams) -> NdtBreakdown {
    match curve {
        Curve::Orthogonal => orthogonal_ndt(p),
        Curve::NonOrthogonal => nonorthogonal_ndt(p),
        Curve::Combined => combined_ndt(p),
        Curve::EdgeZf => edge_zf_ndt(),
        Curve::EdgeIa => edge_ia_ndt(p.nodes()).expect("validated params"),
        Curve::CloudHard => cloud_hard_ndt(p.nodes(), p.r()).expect("validated params"),
        Curve::CloudSoft => cloud_soft_ndt(p.r(), p.alpha()),
    }
}

/// Kinks of the curves along the swept axis, used to refine the grid.
fn kinks(cfg: &SweepConfig) -> Vec<f64> {
    let k = cfg.nodes as f64;
    match cfg.sweep {
        SweepVar::Mu => {
            let alpha = cfg.alpha.expect("validated");
            vec![1.0 / k, 1.0 - alpha]
        }
        SweepVar::Alpha => {
            let (mu, r) = (cfg.mu.expect("validated"), cfg.r.expect("validated"));
            let mut xs = vec![1.0 - mu];
            // Where soft transfer overtakes hard transfer.
            if let Ok(hard) = cloud_hard_ndt(cfg.nodes, r) {
                let gap = hard.delta.get() - 1.0 / r;
                if gap.is_finite() && gap > 0.0 {
                    xs.push(1.0 / gap);
                }
            }
            xs
        }
        // The two hard-transfer options cross at r = K.
        SweepVar::R => vec![k],
    }
}

/// Inclusive linear grid with the curves' kinks inside the range added.
pub fn sweep_grid(cfg: &SweepConfig) -> Vec<f64> {
    let n = cfg.count;
    let mut xs: Vec<f64> = (0..n)
        .map(|i| {
            if i == n - 1 {
                cfg.stop
            } else {
                cfg.start + (cfg.stop - cfg.start) * i as f64 / (n - 1) as f64
            }
        })
        .collect();
    xs.extend(kinks(cfg).into_iter().filter(|&x| x > cfg.start && x < cfg.stop));
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + b.abs()));
    xs
}

fn point_params(cfg: &SweepConfig, value: f64) -> Result<SystemParams, ParamError> {
    let pick = |var: SweepVar, fixed: Option<f64>| {
        if cfg.sweep == var {
            value
        } else {
            fixed.expect("validated config sets every fixed parameter")
        }
    };
    SystemParams::for_ndt(
        cfg.nodes,
        pick(SweepVar::Mu, cfg.mu),
        pick(SweepVar::R, cfg.r),
        pick(SweepVar::Alpha, cfg.alpha),
    )
}

/// One row per grid point per selected curve, sorted by (value, curve).
pub fn run_ndt_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>, SweepError> {
    if cfg.mode != Mode::NdtSweep {
        return Err(SweepError::WrongMode { expected: "ndt-sweep", found: cfg.mode.as_str() });
    }
    let mut rows = Vec::with_capacity(cfg.count * cfg.curves.len());
    for value in sweep_grid(cfg) {
        let p = point_params(cfg, value)?;
        for &curve in &cfg.curves {
            rows.push(SweepRow { sweep_var: cfg.sweep, value, curve, ndt: evaluate_curve(curve, &p) });
        }
    }
    Ok(rows)
}

pub fn ndt_csv(rows: &[SweepRow]) -> Result<String, SweepError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(NDT_HEADER)?;
    for row in rows {
        w.write_record([
            row.sweep_var.as_str().to_string(),
            row.value.to_string(),
            row.curve.as_str().to_string(),
            row.ndt.delta_f.to_string(),
            row.ndt.delta_e.to_string(),
            row.ndt.delta.to_string(),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("ascii output"))
}

/// Verification outcome for both cloud-based schemes.
#[derive(Debug)]
pub struct SimVerifyOutcome {
    pub claims: Vec<ClaimResult>,
    /// Schemes whose simulation failed; their claims are listed as failed.
    pub errors: Vec<(Scheme, SimError)>,
}

impl SimVerifyOutcome {
    pub fn all_passed(&self) -> bool {
        self.errors.is_empty() && self.claims.iter().all(|c| c.pass)
    }
}

pub fn verify_options(cfg: &SweepConfig) -> VerifyOptions {
    VerifyOptions {
        rounds: cfg.rounds,
        p_grid: log2_grid(cfg.p_log2_start, cfg.p_log2_stop, cfg.p_points),
        tolerance: cfg.tolerance,
        seed: cfg.seed,
    }
}

/// Runs the soft-transfer and superposition verifiers. A failing scheme
/// does not stop the other.
pub fn run_sim_verify(cfg: &SweepConfig) -> Result<SimVerifyOutcome, SweepError> {
    if cfg.mode != Mode::SimVerify {
        return Err(SweepError::WrongMode { expected: "sim-verify", found: cfg.mode.as_str() });
    }
    let opts = verify_options(cfg);
    let alpha = cfg.alpha.expect("validated");
    let params = SystemParams::new(
        cfg.nodes,
        cfg.mu.expect("validated"),
        cfg.r.expect("validated"),
        alpha,
        opts.p_grid[0],
    )?;
    let mut outcome = SimVerifyOutcome { claims: Vec::new(), errors: Vec::new() };
    for scheme in [Scheme::SoftTransfer, Scheme::NonOrthogonal] {
        match verify_scheme(&params, scheme, &opts) {
            Ok(report) => outcome.claims.extend(report.claims),
            Err(e) => {
                outcome.claims.extend(claim_specs(scheme, alpha).into_iter().map(|(name, theory)| {
                    ClaimResult { name: name.to_string(), theory, measured: f64::NAN, r_squared: f64::NAN, pass: false }
                }));
                outcome.errors.push((scheme, e));
            }
        }
    }
    Ok(outcome)
}

pub fn verify_csv(claims: &[ClaimResult]) -> Result<String, SweepError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(VERIFY_HEADER)?;
    for c in claims {
        w.write_record([
            c.name.clone(),
            c.theory.to_string(),
            c.measured.to_string(),
            c.r_squared.to_string(),
            c.pass.to_string(),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("ascii output"))
}

/// Sidecar written next to every output file.
pub fn manifest(cfg: &SweepConfig) -> String {
    format!(
        "# run manifest\n# tool = {} {}\n{}",
        env!("CARGO_PKG_NAME"),
        env!("CARGO_PKG_VERSION"),
        cfg.to_config_string()
    )
}
