use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("grid has {grid} points but {values} measurements")]
    LengthMismatch { grid: usize, values: usize },
    #[error("need at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("SNR grid must be positive and strictly increasing (index {0})")]
    BadGrid(usize),
    #[error("measurement {value} at index {index} is not allowed here")]
    BadMeasurement { index: usize, value: f64 },
}

/// Least-squares line through `(log2 P, y)`.
///
/// `slope` estimates the exponent `a` in `f(P) = P^a`; `intercept` is in
/// the units of `y` at `P = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub p_grid: Vec<f64>,
}

fn check_grid(p_grid: &[f64], values: usize) -> Result<(), FitError> {
    if p_grid.len() != values {
        return Err(FitError::LengthMismatch { grid: p_grid.len(), values });
    }
    if p_grid.len() < 3 {
        return Err(FitError::TooFewPoints(p_grid.len()));
    }
    for (i, &p) in p_grid.iter().enumerate() {
        if !(p > 0.0 && p.is_finite()) || (i > 0 && p <= p_grid[i - 1]) {
            return Err(FitError::BadGrid(i));
        }
    }
    Ok(())
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mean_x, y - mean_y);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = xs.iter().zip(ys).map(|(&x, &y)| (y - intercept - slope * x).powi(2)).sum();
    // A flat response is fit perfectly by a zero slope.
    let r_squared = if syy == 0.0 { 1.0 } else { (1.0 - ss_res / syy).clamp(0.0, 1.0) };
    (slope, intercept, r_squared)
}

/// Fits `log2(measurement)` against `log2(P)`.
pub fn estimate_exponent(p_grid: &[f64], measurements: &[f64]) -> Result<ExponentFit, FitError> {
    check_grid(p_grid, measurements.len())?;
    if let Some((index, &value)) =
        measurements.iter().enumerate().find(|(_, m)| !(**m > 0.0 && m.is_finite()))
    {
        return Err(FitError::BadMeasurement { index, value });
    }
    let xs: Vec<f64> = p_grid.iter().map(|p| p.log2()).collect();
    let ys: Vec<f64> = measurements.iter().map(|m| m.log2()).collect();
    let (slope, intercept, r_squared) = least_squares(&xs, &ys);
    Ok(ExponentFit { slope, intercept, r_squared, p_grid: p_grid.to_vec() })
}

/// Fits the rate `log2(1 + SINR)` against `log2(P)`; the slope is the prelog.
pub fn estimate_prelog(p_grid: &[f64], sinr_values: &[f64]) -> Result<ExponentFit, FitError> {
    check_grid(p_grid, sinr_values.len())?;
    if let Some((index, &value)) =
        sinr_values.iter().enumerate().find(|(_, s)| !(**s >= 0.0 && s.is_finite()))
    {
        return Err(FitError::BadMeasurement { index, value });
    }
    let xs: Vec<f64> = p_grid.iter().map(|p| p.log2()).collect();
    let ys: Vec<f64> = sinr_values.iter().map(|s| s.ln_1p() / std::f64::consts::LN_2).collect();
    let (slope, intercept, r_squared) = least_squares(&xs, &ys);
    Ok(ExponentFit { slope, intercept, r_squared, p_grid: p_grid.to_vec() })
}
