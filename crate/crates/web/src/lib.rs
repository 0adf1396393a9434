//! WebAssembly bindings behind `www/index.html`. Every function returns a
//! JSON document; infinite NDTs are encoded as `null`.

use fogndt::scaling::{log2_grid, verify_scheme, Scheme, VerifyOptions};
use fogndt::sweep::{evaluate_curve, Curve};
use fogndt::{combined_ndt_curve, Ndt, SystemParams};
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

const CURVES: [Curve; 3] = [Curve::Orthogonal, Curve::NonOrthogonal, Curve::Combined];

fn num(x: Ndt) -> Value {
    if x.is_finite() {
        json!(x.get())
    } else {
        Value::Null
    }
}

fn grid(start: f64, stop: f64, count: usize, kinks: &[f64]) -> Vec<f64> {
    let count = count.max(2);
    let mut xs: Vec<f64> =
        (0..count).map(|i| start + (stop - start) * i as f64 / (count - 1) as f64).collect();
    xs.extend(kinks.iter().copied().filter(|x| (start..=stop).contains(x)));
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

fn curves_over(xs: &[f64], at: impl Fn(f64) -> Result<SystemParams, String>) -> Result<Value, String> {
    let mut out = serde_json::Map::new();
    for curve in CURVES {
        let ys = xs
            .iter()
            .map(|&x| at(x).map(|p| num(evaluate_curve(curve, &p).delta)))
            .collect::<Result<Vec<_>, String>>()?;
        out.insert(curve.as_str().to_string(), Value::Array(ys));
    }
    Ok(Value::Object(out))
}

/// Orthogonal, superposition and combined NDT against the cache size, plus
/// the vertices of the combined curve.
#[wasm_bindgen]
pub fn mu_curves(nodes: usize, r: f64, alpha: f64, count: usize) -> Result<String, String> {
    let base = SystemParams::for_ndt(nodes, 0.0, r, alpha).map_err(|e| e.to_string())?;
    let xs = grid(0.0, 1.0, count, &[1.0 / nodes as f64, 1.0 - alpha]);
    let curves = curves_over(&xs, |mu| base.with_mu(mu).map_err(|e| e.to_string()))?;
    let hull = combined_ndt_curve(nodes, r, alpha).map_err(|e| e.to_string())?;
    let vertices: Vec<Value> = hull.points().map(|(x, y)| json!([x, num(y)])).collect();
    Ok(json!({ "x": xs, "curves": curves, "vertices": vertices }).to_string())
}

/// The same three curves against the CSI quality at a fixed cache size.
#[wasm_bindgen]
pub fn alpha_curves(nodes: usize, r: f64, mu: f64, count: usize) -> Result<String, String> {
    let base = SystemParams::for_ndt(nodes, mu, r, 1.0).map_err(|e| e.to_string())?;
    let xs = grid(0.0, 1.0, count, &[1.0 - mu]);
    let curves = curves_over(&xs, |alpha| base.with_alpha(alpha).map_err(|e| e.to_string()))?;
    Ok(json!({ "x": xs, "curves": curves }).to_string())
}

/// Simulates one scheme over `points` SNRs from `2^10` to `2^40` and
/// reports each fitted exponent against its high-SNR value.
#[wasm_bindgen]
pub fn scaling_check(
    nodes: usize,
    alpha: f64,
    superposition: bool,
    rounds: usize,
    points: usize,
    seed: u64,
) -> Result<String, String> {
    if points < 4 {
        return Err("need at least four SNR points".into());
    }
    let opts = VerifyOptions { rounds, p_grid: log2_grid(10.0, 40.0, points), tolerance: 0.05, seed };
    let params = SystemParams::new(nodes, 0.5, 1.0, alpha, opts.p_grid[0]).map_err(|e| e.to_string())?;
    let scheme = if superposition { Scheme::NonOrthogonal } else { Scheme::SoftTransfer };
    let report = verify_scheme(&params, scheme, &opts).map_err(|e| e.to_string())?;
    let claims: Vec<Value> = report
        .claims
        .iter()
        .map(|c| {
            let measured = if c.measured.is_finite() { json!(c.measured) } else { Value::Null };
            json!({ "claim": c.name, "theory": c.theory, "measured": measured, "pass": c.pass })
        })
        .collect();
    Ok(json!({ "scheme": scheme.name(), "claims": claims }).to_string())
}
