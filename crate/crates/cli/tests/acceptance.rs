//! Acceptance checks, one line per criterion. Runs without the libtest
//! harness so the summary is always printed.

use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use fogndt::scaling::{account_nonorthogonal_latency, verify_scheme, AccountError, Scheme, VerifyOptions};
use fogndt::sweep::{parse_config, run_ndt_sweep, Curve};
use fogndt::{best_pointwise_ndt, combined_ndt_curve, nonorthogonal_ndt, orthogonal_ndt, Ndt, SystemParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_budget(elapsed: Duration, budget: Duration) -> Result<(), String> {
    ensure(elapsed < budget, || format!("took {elapsed:?}, budget {budget:?}"))
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= tol * b.abs().max(1.0)
}

fn params(k: usize, mu: f64, r: f64, alpha: f64) -> SystemParams {
    SystemParams::for_ndt(k, mu, r, alpha).unwrap()
}

// Closed forms written out branch by branch, for finite positive r and alpha.

fn oracle_delta_c(k: f64, r: f64, alpha: f64) -> f64 {
    let ch = (1.0 + k / r).min(2.0 - 1.0 / k + 1.0 / r);
    let cs = 1.0 / r + 1.0 / alpha;
    ch.min(cs)
}

fn oracle_orthogonal(k: usize, mu: f64, r: f64, alpha: f64) -> f64 {
    let k = k as f64;
    let dc = oracle_delta_c(k, r, alpha);
    let dei = 2.0 - 1.0 / k;
    let first = (1.0 - dc) * mu + dc;
    let second = if mu >= 1.0 / k { 2.0 - mu } else { (dei - dc) * k * mu + dc };
    first.min(second)
}

fn oracle_nonorthogonal(mu: f64, r: f64, alpha: f64) -> f64 {
    if mu >= 1.0 - alpha {
        1.0 + (1.0 - mu) / r
    } else {
        (1.0 - mu) * (1.0 / alpha + 1.0 / r)
    }
}

fn formula_fidelity() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let tol = 1e-12;
    for _ in 0..10_000 {
        let k = rng.random_range(1..=6usize);
        let r = rng.random_range(0.05..8.0);
        let alpha = if rng.random_bool(0.1) { 1.0 } else { rng.random_range(0.01..=1.0) };
        let mu = match rng.random_range(0..10) {
            0 => 0.0,
            1 => 1.0,
            2 => 1.0 / k as f64,
            3 => 1.0 - alpha,
            _ => rng.random::<f64>(),
        };
        let p = params(k, mu, r, alpha);
        let (o, no) = (orthogonal_ndt(&p).delta.get(), nonorthogonal_ndt(&p).delta.get());
        let (o_ref, no_ref) = (oracle_orthogonal(k, mu, r, alpha), oracle_nonorthogonal(mu, r, alpha));
        ensure(rel_close(o, o_ref, tol), || format!("orthogonal at {p:?}: {o} vs {o_ref}"))?;
        ensure(rel_close(no, no_ref, tol), || format!("nonorthogonal at {p:?}: {no} vs {no_ref}"))?;

        // Both branches agree where they meet.
        let mb = 1.0 - alpha;
        let edge = 1.0 + (1.0 - mb) / r;
        let cloud = (1.0 - mb) * (1.0 / alpha + 1.0 / r);
        ensure(rel_close(edge, cloud, tol), || format!("nonorthogonal branches split at mu = {mb}"))?;
        let at_mb = nonorthogonal_ndt(&p.with_mu(mb).unwrap()).delta.get();
        ensure(rel_close(at_mb, edge, tol), || format!("nonorthogonal at mu = {mb}: {at_mb}"))?;

        let kf = k as f64;
        let dc = oracle_delta_c(kf, r, alpha);
        let ia_side = (2.0 - 1.0 / kf - dc) * kf * (1.0 / kf) + dc;
        let zf_side = 2.0 - 1.0 / kf;
        ensure(rel_close(ia_side, zf_side, tol), || format!("orthogonal branches split at mu = 1/{k}"))?;
    }
    let elapsed = start.elapsed();
    within_budget(elapsed, Duration::from_secs(1))?;
    Ok(format!("10000 tuples in {elapsed:.2?}"))
}

fn mu_sweep(r: f64) -> Vec<(f64, Curve, f64)> {
    let cfg = parse_config(&format!(
        "mode = ndt-sweep\nK = 2\nr = {r}\nalpha = {}\nsweep = mu\ncount = 101\n",
        2.0 / 3.0
    ))
    .unwrap();
    run_ndt_sweep(&cfg).unwrap().into_iter().map(|row| (row.value, row.curve, row.ndt.delta.get())).collect()
}

fn at(rows: &[(f64, Curve, f64)], mu: f64, curve: Curve) -> f64 {
    rows.iter().find(|(x, c, _)| *x == mu && *c == curve).map(|row| row.2).unwrap()
}

fn cache_sweep_curves() -> Outcome {
    let start = Instant::now();
    let tol = 1e-9;
    let near = |a: f64, b: f64| (a - b).abs() <= tol;
    let r2 = mu_sweep(2.0);
    let r6 = mu_sweep(6.0);
    ensure(near(at(&r2, 0.0, Curve::NonOrthogonal), 2.0), || "r = 2: delta_NO(0) != 2".into())?;
    ensure(near(at(&r2, 0.0, Curve::Orthogonal), 2.0), || "r = 2: delta_O(0) != 2".into())?;
    ensure(near(at(&r6, 0.0, Curve::Orthogonal), 4.0 / 3.0), || "r = 6: delta_O(0) != 4/3".into())?;
    ensure(near(at(&r6, 0.0, Curve::NonOrthogonal), 5.0 / 3.0), || "r = 6: delta_NO(0) != 5/3".into())?;
    for rows in [&r2, &r6] {
        for curve in [Curve::Orthogonal, Curve::NonOrthogonal, Curve::Combined] {
            ensure(near(at(rows, 1.0, curve), 1.0), || format!("{} at mu = 1", curve.as_str()))?;
        }
        let mut xs: Vec<f64> = rows.iter().map(|row| row.0).collect();
        xs.dedup();
        for &mu in &xs {
            let lower = at(rows, mu, Curve::Orthogonal).min(at(rows, mu, Curve::NonOrthogonal));
            let c = at(rows, mu, Curve::Combined);
            ensure(c <= lower + tol, || format!("combined above constituents at mu = {mu}"))?;
        }
    }
    let mut xs: Vec<f64> = r2.iter().map(|row| row.0).collect();
    xs.dedup();
    for &mu in xs.iter().filter(|&&mu| mu > 0.0 && mu < 1.0) {
        let (no, o) = (at(&r2, mu, Curve::NonOrthogonal), at(&r2, mu, Curve::Orthogonal));
        ensure(no <= o + tol, || format!("r = 2: delta_NO > delta_O at mu = {mu}"))?;
    }
    let elapsed = start.elapsed();
    within_budget(elapsed, Duration::from_secs(1))?;
    Ok(format!("{} grid points per r in {elapsed:.2?}", xs.len()))
}

fn csi_sweep_curves() -> Outcome {
    let tol = 1e-9;
    let mut checked = 0;
    for mu in [0.25, 0.5, 0.75] {
        let cfg = parse_config(&format!(
            "mode = ndt-sweep\nK = 2\nr = 1.5\nmu = {mu}\nsweep = alpha\ncurves = nonorthogonal\n"
        ))
        .unwrap();
        let rows: Vec<(f64, Ndt)> =
            run_ndt_sweep(&cfg).unwrap().into_iter().map(|row| (row.value, row.ndt.delta)).collect();
        let flat = 1.0 + (1.0 - mu) / 1.5;
        for &(alpha, d) in rows.iter().filter(|(a, _)| *a >= 1.0 - mu) {
            ensure((d.get() - flat).abs() <= tol, || format!("mu = {mu}, alpha = {alpha}: {d} != {flat}"))?;
            checked += 1;
        }
        let below: Vec<&(f64, Ndt)> = rows.iter().filter(|(a, _)| *a < 1.0 - mu).collect();
        for w in below.windows(2) {
            let ((a0, d0), (a1, d1)) = (w[0], w[1]);
            ensure(d1.get() < d0.get(), || format!("mu = {mu}: not decreasing from alpha {a0} to {a1}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} comparisons"))
}

/// Lower hull by gift wrapping: from each vertex, step to the point of
/// least slope, preferring the farthest on ties.
fn gift_wrap(xs: &[f64], ys: &[f64]) -> Vec<usize> {
    let mut hull = vec![0];
    let mut i = 0;
    while i + 1 < xs.len() {
        let mut best = i + 1;
        let mut best_slope = f64::INFINITY;
        for j in i + 1..xs.len() {
            let s = (ys[j] - ys[i]) / (xs[j] - xs[i]);
            if s <= best_slope + 1e-13 * best_slope.abs().max(1.0) {
                best = j;
                best_slope = best_slope.min(s);
            }
        }
        hull.push(best);
        i = best;
    }
    hull
}

fn brute_force_envelope(k: usize, r: f64, alpha: f64, grid: &[f64]) -> Vec<f64> {
    let f: Vec<f64> = grid.iter().map(|&mu| best_pointwise_ndt(&params(k, mu, r, alpha)).delta.get()).collect();
    let first = f.iter().position(|y| y.is_finite()).unwrap();
    let (xs, ys) = (&grid[first..], &f[first..]);
    let hull = gift_wrap(xs, ys);
    let mut out = vec![f64::INFINITY; first];
    let mut seg = 0;
    for &x in xs {
        while seg + 2 < hull.len() && x > xs[hull[seg + 1]] {
            seg += 1;
        }
        if hull.len() == 1 {
            out.push(ys[hull[0]]);
            continue;
        }
        let (a, b) = (hull[seg], hull[seg + 1]);
        let t = (x - xs[a]) / (xs[b] - xs[a]);
        out.push(ys[a] + t * (ys[b] - ys[a]));
    }
    out
}

fn envelope_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..100 {
        let k = rng.random_range(1..=6usize);
        let r = if rng.random_bool(0.1) { 0.0 } else { rng.random_range(0.05..8.0) };
        let alpha = match rng.random_range(0..10) {
            0 => 0.0,
            1 => 1.0,
            _ => rng.random::<f64>(),
        };
        let mut grid: Vec<f64> = (0..=1000).map(|i| i as f64 / 1000.0).collect();
        grid.extend([1.0 / k as f64, 1.0 - alpha]);
        grid.sort_by(f64::total_cmp);
        grid.dedup();
        let expected = brute_force_envelope(k, r, alpha, &grid);
        let curve = combined_ndt_curve(k, r, alpha).unwrap();
        for (&x, &want) in grid.iter().zip(&expected) {
            let got = curve.eval(x).unwrap().get();
            ensure(rel_close(got, want, 1e-9), || {
                format!("K = {k}, r = {r}, alpha = {alpha}, mu = {x}: {got} vs {want}")
            })?;
        }
    }
    let elapsed = start.elapsed();
    within_budget(elapsed, Duration::from_secs(5))?;
    Ok(format!("100 settings in {elapsed:.2?}"))
}

fn scaling_laws() -> Outcome {
    let start = Instant::now();
    let opts = VerifyOptions::default();
    let mut worst = (0.0f64, String::new());
    for k in [2usize, 3] {
        for alpha in [1.0 / 3.0, 2.0 / 3.0, 1.0] {
            let p = SystemParams::new(k, 0.5, 1.0, alpha, opts.p_grid[0]).unwrap();
            let soft = verify_scheme(&p, Scheme::SoftTransfer, &opts).map_err(|e| e.to_string())?;
            let noma = verify_scheme(&p, Scheme::NonOrthogonal, &opts).map_err(|e| e.to_string())?;
            let checked = [
                soft.claim("soft.effective_noise_exponent"),
                soft.claim("soft.node_power_exponent"),
                noma.claim("noma.edge_prelog"),
                noma.claim("noma.cloud_prelog"),
                noma.claim("noma.node_power_exponent"),
            ];
            for c in checked.into_iter().map(Option::unwrap) {
                let label = format!("K = {k}, alpha = {alpha:.3}: {} = {:.4}", c.name, c.measured);
                ensure(c.delta() <= 0.05, || format!("{label}, expected {:.4}", c.theory))?;
                if c.delta() > worst.0 {
                    worst = (c.delta(), label);
                }
            }
        }
    }
    let elapsed = start.elapsed();
    within_budget(elapsed, Duration::from_secs(60))?;
    Ok(format!("worst |error| {:.4} ({}) in {elapsed:.2?}", worst.0, worst.1))
}

fn accounting() -> Outcome {
    let mut compared = 0;
    let mut infeasible = 0;
    for r in [0.5, 1.0, 1.5, 2.0, 6.0] {
        for i in 0..=200 {
            for j in 0..=200 {
                let (mu, alpha) = (i as f64 / 200.0, j as f64 / 200.0);
                let p = params(2, mu, r, alpha);
                let closed = nonorthogonal_ndt(&p).delta.get();
                match account_nonorthogonal_latency(&p) {
                    Ok(a) => {
                        ensure((a.total() - closed).abs() <= 1e-12, || {
                            format!("mu = {mu}, alpha = {alpha}, r = {r}: {} vs {closed}", a.total())
                        })?;
                        compared += 1;
                    }
                    Err(AccountError::Infeasible) if closed.is_infinite() => infeasible += 1,
                    Err(e) => return Err(format!("mu = {mu}, alpha = {alpha}, r = {r}: {e}")),
                }
            }
        }
    }
    Ok(format!("{compared} points equal, {infeasible} infeasible with alpha = 0"))
}

fn run_cli(args: &[&str]) -> Result<(), String> {
    let status = Command::new(env!("CARGO_BIN_EXE_fogndt")).args(args).status().map_err(|e| e.to_string())?;
    ensure(status.success(), || format!("fogndt {args:?} exited with {status}"))
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let read = |p: &str| std::fs::read(Path::new(p)).map_err(|e| e.to_string());

    let sweep_cfg = path("two_node.cfg");
    std::fs::write(&sweep_cfg, "K = 2\nr = 2\nalpha = 0.6666666666666666\nsweep = mu\n").unwrap();
    let verify_cfg = path("verify.cfg");
    std::fs::write(&verify_cfg, "K = 2\nalpha = 0.6666666666666666\nrounds = 200\n").unwrap();

    let mut bytes = 0;
    for (sub, cfg) in [("ndt-sweep", &sweep_cfg), ("sim-verify", &verify_cfg)] {
        let (a, b) = (path(&format!("{sub}-a.csv")), path(&format!("{sub}-b.csv")));
        for out in [&a, &b] {
            run_cli(&[sub, "--config", cfg, "--seed", "7", "--out", out])?;
        }
        let (ba, bb) = (read(&a)?, read(&b)?);
        ensure(ba == bb, || format!("{sub}: outputs differ"))?;
        bytes += ba.len();
    }
    Ok(format!("{bytes} bytes identical across runs"))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 7] = [
        ("formula fidelity", formula_fidelity),
        ("cache sweep curves", cache_sweep_curves),
        ("csi sweep curves", csi_sweep_curves),
        ("envelope oracle", envelope_oracle),
        ("scaling laws", scaling_laws),
        ("accounting equivalence", accounting),
        ("cli determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
