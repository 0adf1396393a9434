use num_complex::Complex64;

use super::matrix::{dot, norm_sqr, ComplexMatrix};
use super::SimError;

/// Relative residual below which a Gram-Schmidt step counts as dependent.
const RANK_TOL: f64 = 1e-10;

/// Which channel matrix a precoder set was designed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsiBasis {
    /// Edge nodes, designed from the true channel.
    True,
    /// Cloud, designed from the delayed estimate.
    Estimated,
}

/// One unit-norm ZF beam per user.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecoderSet {
    pub vectors: Vec<Vec<Complex64>>,
    pub basis: CsiBasis,
}

impl PrecoderSet {
    /// Largest `|row_j^T v_k|` over `j != k`.
    pub fn orthogonality_residual(&self, m: &ComplexMatrix) -> f64 {
        let mut worst = 0.0f64;
        for (k, v) in self.vectors.iter().enumerate() {
            for j in (0..m.rows()).filter(|&j| j != k) {
                worst = worst.max(dot(m.row(j), v).norm());
            }
        }
        worst
    }
}

fn hermitian_dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Removes the components of `w` along the orthonormal vectors in `basis`,
/// twice, for numerical orthogonality.
fn project_out(w: &mut [Complex64], basis: &[Vec<Complex64>]) {
    for _ in 0..2 {
        for q in basis {
            let c = hermitian_dot(q, w);
            for (wi, qi) in w.iter_mut().zip(q) {
                *wi -= c * qi;
            }
        }
    }
}

/// Unit vector `v` with `row_j^T v = 0` for every row `j != user` of `m`.
fn null_vector(m: &ComplexMatrix, user: usize) -> Result<Vec<Complex64>, SimError> {
    let n = m.cols();
    // row^T v = 0 is Hermitian orthogonality of v to conj(row).
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(n.saturating_sub(1));
    let mut rank = 0;
    for j in (0..m.rows()).filter(|&j| j != user) {
        let mut w: Vec<Complex64> = m.row(j).iter().map(Complex64::conj).collect();
        let scale = norm_sqr(&w).sqrt();
        project_out(&mut w, &basis);
        let residual = norm_sqr(&w).sqrt();
        if residual <= RANK_TOL * scale.max(f64::MIN_POSITIVE) {
            continue;
        }
        w.iter_mut().for_each(|x| *x /= residual);
        basis.push(w);
        rank += 1;
    }
    let null_dim = n - rank;
    if null_dim != 1 {
        return Err(SimError::RankDeficient { user, null_dim });
    }

    // Project each coordinate axis and keep the largest remainder.
    let mut best: Option<(f64, Vec<Complex64>)> = None;
    for axis in 0..n {
        let mut w = vec![Complex64::new(0.0, 0.0); n];
        w[axis] = Complex64::new(1.0, 0.0);
        project_out(&mut w, &basis);
        let len = norm_sqr(&w);
        if best.as_ref().is_none_or(|(l, _)| len > *l) {
            best = Some((len, w));
        }
    }
    let (len, mut v) = best.expect("at least one column");
    let len = len.sqrt();
    v.iter_mut().for_each(|x| *x /= len);

    // Fix the phase: largest-magnitude entry (first on ties) real positive.
    let mut anchor = 0;
    for (i, x) in v.iter().enumerate() {
        if x.norm() > v[anchor].norm() * (1.0 + 1e-12) {
            anchor = i;
        }
    }
    let phase = v[anchor] / v[anchor].norm();
    v.iter_mut().for_each(|x| *x /= phase);
    v[anchor] = Complex64::new(v[anchor].re, 0.0);
    Ok(v)
}

/// Zero-forcing beams: beam `k` is orthogonal to every row of `m` except
/// row `k`.
pub fn zf_precoders(m: &ComplexMatrix, basis: CsiBasis) -> Result<PrecoderSet, SimError> {
    assert_eq!(m.rows(), m.cols(), "square channel matrix");
    let vectors = (0..m.rows()).map(|k| null_vector(m, k)).collect::<Result<_, _>>()?;
    Ok(PrecoderSet { vectors, basis })
}
