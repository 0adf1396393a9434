//! Piecewise linear curves and their lower convex envelope.

use thiserror::Error;

use crate::ndt::Ndt;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnvelopeError {
    #[error("abscissae must be strictly increasing (index {0})")]
    Unsorted(usize),
    #[error("need at least two finite points, got {0}")]
    TooFewFinite(usize),
    #[error("infinite value at index {0} follows a finite one")]
    InfiniteAfterFinite(usize),
    #[error("abscissa at index {0} is not finite")]
    NonFiniteAbscissa(usize),
}

/// A function given by its values at strictly increasing breakpoints and
/// linear interpolation in between.
///
/// Only a prefix of the breakpoints may carry `+inf`; the curve is `+inf`
/// on `[x_0, x_j)` where `x_j` is the first finite breakpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinearCurve {
    breakpoints: Vec<f64>,
    values: Vec<Ndt>,
}

impl PiecewiseLinearCurve {
    pub fn new(breakpoints: Vec<f64>, values: Vec<Ndt>) -> Result<Self, EnvelopeError> {
        assert_eq!(breakpoints.len(), values.len(), "one value per breakpoint");
        check_points(breakpoints.iter().copied().zip(values.iter().copied()))?;
        Ok(PiecewiseLinearCurve { breakpoints, values })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Ndt] {
        &self.values
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, Ndt)> + '_ {
        self.breakpoints.iter().copied().zip(self.values.iter().copied())
    }

    /// Value at `x`, or `None` outside `[first, last]` breakpoint.
    pub fn eval(&self, x: f64) -> Option<Ndt> {
        let xs = &self.breakpoints;
        if xs.is_empty() || !(xs[0]..=xs[xs.len() - 1]).contains(&x) {
            return None;
        }
        if xs.len() == 1 {
            return Some(self.values[0]);
        }
        let seg = xs.windows(2).position(|w| x <= w[1]).expect("x within range");
        let (x0, x1) = (xs[seg], xs[seg + 1]);
        let (y0, y1) = (self.values[seg], self.values[seg + 1]);
        if x == x1 {
            return Some(y1);
        }
        if x == x0 {
            return Some(y0);
        }
        if !y0.is_finite() {
            return Some(Ndt::INFINITY);
        }
        let t = (x - x0) / (x1 - x0);
        Some(Ndt::new(y0.get() + t * (y1.get() - y0.get())))
    }

    /// Slopes of the finite segments, left to right.
    pub fn slopes(&self) -> Vec<f64> {
        self.points()
            .collect::<Vec<_>>()
            .windows(2)
            .filter(|w| w[0].1.is_finite())
            .map(|w| (w[1].1.get() - w[0].1.get()) / (w[1].0 - w[0].0))
            .collect()
    }

    pub fn is_convex(&self, tol: f64) -> bool {
        self.slopes().windows(2).all(|s| s[1] >= s[0] - tol)
    }
}

fn check_points(points: impl Iterator<Item = (f64, Ndt)>) -> Result<usize, EnvelopeError> {
    let mut prev: Option<f64> = None;
    let mut finite = 0;
    for (i, (x, y)) in points.enumerate() {
        if !x.is_finite() {
            return Err(EnvelopeError::NonFiniteAbscissa(i));
        }
        if prev.is_some_and(|p| x <= p) {
            return Err(EnvelopeError::Unsorted(i));
        }
        prev = Some(x);
        if y.is_finite() {
            finite += 1;
        } else if finite > 0 {
            return Err(EnvelopeError::InfiniteAfterFinite(i));
        }
    }
    Ok(finite)
}

/// Cross product sign of `(b - a) x (c - a)`; positive for a left turn.
fn cross(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

/// Lower convex hull of `points` (monotone chain), keeping only vertices.
///
/// A leading run of `+inf` values is collapsed to a single `+inf` breakpoint
/// at the first abscissa, so the envelope stays `+inf` up to the first
/// finite point.
pub fn lower_convex_envelope(points: &[(f64, Ndt)]) -> Result<PiecewiseLinearCurve, EnvelopeError> {
    let finite = check_points(points.iter().copied())?;
    if finite < 2 {
        return Err(EnvelopeError::TooFewFinite(finite));
    }

    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(points.len());
    for &(x, y) in points.iter().filter(|(_, y)| y.is_finite()) {
        let p = (x, y.get());
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }

    let mut breakpoints = Vec::with_capacity(hull.len() + 1);
    let mut values = Vec::with_capacity(hull.len() + 1);
    if !points[0].1.is_finite() {
        breakpoints.push(points[0].0);
        values.push(Ndt::INFINITY);
    }
    for (x, y) in hull {
        breakpoints.push(x);
        values.push(Ndt::new(y));
    }
    Ok(PiecewiseLinearCurve { breakpoints, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pts(raw: &[(f64, f64)]) -> Vec<(f64, Ndt)> {
        raw.iter().map(|&(x, y)| (x, Ndt::new(y))).collect()
    }

    fn raw(curve: &PiecewiseLinearCurve) -> Vec<(f64, f64)> {
        curve.points().map(|(x, y)| (x, y.get())).collect()
    }

    #[test]
    fn drops_point_above_chord() {
        let hull = lower_convex_envelope(&pts(&[(0.0, 2.0), (0.5, 2.0), (1.0, 1.0)])).unwrap();
        assert_eq!(raw(&hull), vec![(0.0, 2.0), (1.0, 1.0)]);
        assert_eq!(hull.eval(0.5), Some(Ndt::new(1.5)));
    }

    #[test]
    fn keeps_convex_input() {
        let v = [(0.0, 3.0), (0.5, 1.0), (1.0, 3.0)];
        let hull = lower_convex_envelope(&pts(&v)).unwrap();
        assert_eq!(raw(&hull), v.to_vec());
    }

    #[test]
    fn collinear_points_are_removed() {
        let hull = lower_convex_envelope(&pts(&[(0.0, 2.0), (0.5, 1.5), (1.0, 1.0)])).unwrap();
        assert_eq!(raw(&hull), vec![(0.0, 2.0), (1.0, 1.0)]);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            lower_convex_envelope(&pts(&[(0.0, 1.0), (0.0, 2.0)])),
            Err(EnvelopeError::Unsorted(1))
        );
        assert_eq!(lower_convex_envelope(&pts(&[(0.0, 1.0)])), Err(EnvelopeError::TooFewFinite(1)));
        let with_inf = [(0.0, Ndt::INFINITY), (0.5, Ndt::ONE)];
        assert_eq!(lower_convex_envelope(&with_inf), Err(EnvelopeError::TooFewFinite(1)));
        let gap = [(0.0, Ndt::ONE), (0.5, Ndt::INFINITY), (1.0, Ndt::ONE)];
        assert_eq!(lower_convex_envelope(&gap), Err(EnvelopeError::InfiniteAfterFinite(1)));
    }

    #[test]
    fn infinite_prefix_is_retained() {
        let input = [
            (0.0, Ndt::INFINITY),
            (0.25, Ndt::INFINITY),
            (0.5, Ndt::new(1.5)),
            (1.0, Ndt::ONE),
        ];
        let hull = lower_convex_envelope(&input).unwrap();
        assert_eq!(hull.breakpoints(), &[0.0, 0.5, 1.0]);
        assert_eq!(hull.eval(0.3), Some(Ndt::INFINITY));
        assert_eq!(hull.eval(0.5), Some(Ndt::new(1.5)));
        assert_eq!(hull.eval(0.75), Some(Ndt::new(1.25)));
    }

    #[test]
    fn eval_outside_domain() {
        let hull = lower_convex_envelope(&pts(&[(0.0, 2.0), (1.0, 1.0)])).unwrap();
        assert_eq!(hull.eval(-0.1), None);
        assert_eq!(hull.eval(1.1), None);
    }

    fn sorted_points() -> impl Strategy<Value = Vec<(f64, Ndt)>> {
        prop::collection::vec((0.0f64..1.0, 0.0f64..10.0), 2..30).prop_map(|mut v| {
            v.sort_by(|a, b| a.0.total_cmp(&b.0));
            v.dedup_by(|a, b| (a.0 - b.0).abs() < 1e-9);
            v.into_iter().map(|(x, y)| (x, Ndt::new(y))).collect()
        })
    }

    proptest! {
        #[test]
        fn envelope_is_convex_minorant(input in sorted_points()) {
            prop_assume!(input.len() >= 2);
            let hull = lower_convex_envelope(&input).unwrap();
            prop_assert!(hull.is_convex(1e-9));
            for &(x, y) in &input {
                let h = hull.eval(x).unwrap().get();
                prop_assert!(h <= y.get() + 1e-9, "hull {} above input {} at {}", h, y.get(), x);
            }
            // Every hull vertex is an input point.
            for (x, y) in hull.points() {
                prop_assert!(input.iter().any(|&(xi, yi)| xi == x && yi == y));
            }
        }

        #[test]
        fn envelope_is_idempotent(input in sorted_points()) {
            prop_assume!(input.len() >= 2);
            let once = lower_convex_envelope(&input).unwrap();
            let twice = lower_convex_envelope(&once.points().collect::<Vec<_>>()).unwrap();
            prop_assert_eq!(once, twice);
        }
    }
}
