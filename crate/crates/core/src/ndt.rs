//! Closed-form normalized delivery time (NDT) of the cloud, edge, orthogonal
//! and non-orthogonal delivery policies.
//!
//! All values live in the extended non-negative reals. An infeasible policy
//! (no fronthaul, no useful CSI at the cloud) has NDT `+inf`, and time
//! sharing uses the convention `0 * inf = 0` so that a policy with zero
//! weight never contaminates the mix.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use crate::envelope::{lower_convex_envelope, PiecewiseLinearCurve};
use crate::params::{ParamError, SystemParams};

/// An extended non-negative real: a finite value `>= 0` or `+inf`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Ndt(f64);

impl Ndt {
    pub const ZERO: Ndt = Ndt(0.0);
    pub const ONE: Ndt = Ndt(1.0);
    pub const INFINITY: Ndt = Ndt(f64::INFINITY);

    /// Wraps a value. Negative or NaN inputs are a logic error.
    pub fn new(value: f64) -> Ndt {
        debug_assert!(value >= 0.0, "NDT must be non-negative, got {value}");
        Ndt(value)
    }

    /// `1 / x` with `1 / 0 = +inf`.
    pub fn reciprocal(x: f64) -> Ndt {
        if x == 0.0 {
            Ndt::INFINITY
        } else {
            Ndt::new(1.0 / x)
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    /// Multiplication by a non-negative weight with `0 * inf = 0`.
    pub fn scale(self, weight: f64) -> Ndt {
        debug_assert!(weight >= 0.0);
        if weight == 0.0 {
            Ndt::ZERO
        } else {
            Ndt::new(self.0 * weight)
        }
    }

    pub fn min(self, other: Ndt) -> Ndt {
        if other.0 < self.0 {
            other
        } else {
            self
        }
    }

    pub fn total_cmp(&self, other: &Ndt) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl Add for Ndt {
    type Output = Ndt;

    fn add(self, rhs: Ndt) -> Ndt {
        Ndt(self.0 + rhs.0)
    }
}

impl fmt::Display for Ndt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Fronthaul and edge components of a policy's NDT.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NdtBreakdown {
    pub delta_f: Ndt,
    pub delta_e: Ndt,
    pub delta: Ndt,
}

impl NdtBreakdown {
    pub fn new(delta_f: Ndt, delta_e: Ndt) -> Self {
        NdtBreakdown { delta_f, delta_e, delta: delta_f + delta_e }
    }

    /// A policy that uses only the edge caches.
    pub fn edge_only(delta_e: Ndt) -> Self {
        Self::new(Ndt::ZERO, delta_e)
    }

    pub fn infeasible() -> Self {
        Self::new(Ndt::INFINITY, Ndt::INFINITY)
    }

    /// Time sharing: fraction `1 - weight` of `self` and `weight` of `other`.
    pub fn time_share(&self, weight: f64, other: &NdtBreakdown) -> NdtBreakdown {
        debug_assert!((0.0..=1.0).contains(&weight));
        let keep = 1.0 - weight;
        NdtBreakdown::new(
            self.delta_f.scale(keep) + other.delta_f.scale(weight),
            self.delta_e.scale(keep) + other.delta_e.scale(weight),
        )
    }

    /// Returns whichever breakdown has the smaller total; `self` on ties.
    pub fn better(self, other: NdtBreakdown) -> NdtBreakdown {
        if other.delta.get() < self.delta.get() {
            other
        } else {
            self
        }
    }
}

/// Edge-only cooperative ZF beamforming with full caches.
pub fn edge_zf_ndt() -> NdtBreakdown {
    NdtBreakdown::edge_only(Ndt::ONE)
}

/// Edge-only X-channel interference alignment with `mu = 1/K`: `2 - 1/K`.
pub fn edge_ia_ndt(nodes: usize) -> Result<NdtBreakdown, ParamError> {
    if nodes == 0 {
        return Err(ParamError::ZeroNodes(nodes));
    }
    Ok(NdtBreakdown::edge_only(Ndt::new(2.0 - 1.0 / nodes as f64)))
}

/// Hard-transfer fronthauling without caches: `min{1 + K/r, 2 - 1/K + 1/r}`.
///
/// The first term sends every requested file to every node followed by
/// cooperative ZF, the second splits files across nodes and aligns.
pub fn cloud_hard_ndt(nodes: usize, r: f64) -> Result<NdtBreakdown, ParamError> {
    let ia = edge_ia_ndt(nodes)?;
    if r.is_nan() || r < 0.0 {
        return Err(ParamError::NegativeRate(r));
    }
    let inv_r = Ndt::reciprocal(r);
    let broadcast = NdtBreakdown::new(inv_r.scale(nodes as f64), Ndt::ONE);
    let split = NdtBreakdown::new(inv_r, ia.delta_e);
    Ok(broadcast.better(split))
}

/// Soft-transfer fronthauling with imperfect cloud CSI: `1/r + 1/alpha`.
pub fn cloud_soft_ndt(r: f64, alpha: f64) -> NdtBreakdown {
    NdtBreakdown::new(Ndt::reciprocal(r), Ndt::reciprocal(alpha))
}

fn cloud_ndt(p: &SystemParams) -> NdtBreakdown {
    // nodes >= 1 and r >= 0 are guaranteed by SystemParams.
    let hard = cloud_hard_ndt(p.nodes(), p.r()).expect("validated params");
    hard.better(cloud_soft_ndt(p.r(), p.alpha()))
}

/// Best orthogonal (time-division) combination of the cloud and edge policies.
///
/// Candidates are the cloud/edge-ZF mix, and either the edge IA/ZF mix
/// (`mu >= 1/K`) or the cloud/edge-IA mix (`mu <= 1/K`). At `mu = 1/K` both
/// of the last two are evaluated.
pub fn orthogonal_ndt(p: &SystemParams) -> NdtBreakdown {
    let k = p.nodes() as f64;
    let mu = p.mu();
    let cloud = cloud_ndt(p);
    let ia = edge_ia_ndt(p.nodes()).expect("validated params");

    let mut best = cloud.time_share(mu, &edge_zf_ndt());
    if mu * k >= 1.0 {
        // Mixing edge IA at 1/K with edge ZF at 1 traces 2 - mu; both
        // endpoints are cache-only.
        best = best.better(NdtBreakdown::edge_only(Ndt::new(2.0 - mu)));
    }
    if mu * k <= 1.0 {
        best = best.better(cloud.time_share(mu * k, &ia));
    }
    best
}

/// Superposition of cloud soft-transfer and edge ZF signals with SIC.
///
/// Fronthaul NDT is `(1 - mu)/r` in both regimes; edge NDT is `1` once
/// `mu >= 1 - alpha` and `(1 - mu)/alpha` below it.
pub fn nonorthogonal_ndt(p: &SystemParams) -> NdtBreakdown {
    let mu = p.mu();
    let alpha = p.alpha();
    let uncached = 1.0 - mu;
    let delta_f = Ndt::reciprocal(p.r()).scale(uncached);

    let edge_bound = NdtBreakdown::new(delta_f, Ndt::ONE);
    let cloud_bound = NdtBreakdown::new(delta_f, Ndt::reciprocal(alpha).scale(uncached));
    let edge_regime = mu >= 1.0 - alpha;
    // With alpha = 0 the cloud regime formula would read 0 * inf at mu = 1;
    // the cloud layer carries nothing there and only the edge regime applies.
    let cloud_regime = mu <= 1.0 - alpha && alpha > 0.0;
    match (edge_regime, cloud_regime) {
        (true, true) => edge_bound.better(cloud_bound),
        (true, false) => edge_bound,
        (false, true) => cloud_bound,
        (false, false) => NdtBreakdown::new(delta_f, Ndt::INFINITY),
    }
}

/// Better of the orthogonal and non-orthogonal policies at a single point.
pub fn best_pointwise_ndt(p: &SystemParams) -> NdtBreakdown {
    orthogonal_ndt(p).better(nonorthogonal_ndt(p))
}

/// Candidate vertices of `min{delta_O, delta_NO}` in `mu`.
fn breakpoint_grid(nodes: usize, alpha: f64) -> Vec<f64> {
    let mut xs = vec![0.0, 1.0 / nodes as f64, 1.0 - alpha, 1.0];
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

fn combined_vertices(
    nodes: usize,
    r: f64,
    alpha: f64,
) -> Result<Vec<(f64, NdtBreakdown)>, ParamError> {
    let base = SystemParams::for_ndt(nodes, 0.0, r, alpha)?;
    breakpoint_grid(nodes, alpha)
        .into_iter()
        .map(|mu| Ok((mu, best_pointwise_ndt(&base.with_mu(mu)?))))
        .collect()
}

/// Lower convex envelope in `mu` of the pointwise best of the orthogonal and
/// non-orthogonal NDTs.
///
/// Each constituent is piecewise linear with vertices among `{0, 1/K,
/// 1 - alpha, 1}`, so hulling the pointwise minimum at those abscissae is
/// exact.
pub fn combined_ndt_curve(
    nodes: usize,
    r: f64,
    alpha: f64,
) -> Result<PiecewiseLinearCurve, ParamError> {
    let points: Vec<(f64, Ndt)> = combined_vertices(nodes, r, alpha)?
        .into_iter()
        .map(|(mu, b)| (mu, b.delta))
        .collect();
    // mu = 1 is always finite. With K = 1 and no fronthaul it is the only
    // finite vertex and there is nothing to hull.
    if points.iter().filter(|(_, y)| y.is_finite()).count() == 1 {
        let curve = PiecewiseLinearCurve::new(vec![0.0, 1.0], vec![Ndt::INFINITY, Ndt::ONE]);
        return Ok(curve.expect("valid degenerate curve"));
    }
    Ok(lower_convex_envelope(&points).expect("combined NDT has at least two finite vertices"))
}

/// Combined NDT at `p.mu()` with its fronthaul/edge split.
///
/// Between two hull vertices the split is the time-shared split of the
/// policies achieving the vertices.
pub fn combined_ndt(p: &SystemParams) -> NdtBreakdown {
    let curve = combined_ndt_curve(p.nodes(), p.r(), p.alpha()).expect("validated params");
    let mu = p.mu();
    let xs = curve.breakpoints();
    let values = curve.values();
    let seg = xs.windows(2).position(|w| mu <= w[1]).unwrap_or(xs.len() - 2);
    let (lo, hi) = (xs[seg], xs[seg + 1]);
    if !values[seg].is_finite() && mu < hi {
        return best_pointwise_ndt(p);
    }
    let at = |x: f64| best_pointwise_ndt(&p.with_mu(x).expect("hull vertex in [0, 1]"));
    let weight = ((mu - lo) / (hi - lo)).clamp(0.0, 1.0);
    at(lo).time_share(weight, &at(hi))
}
