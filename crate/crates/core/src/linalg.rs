//! Real symmetric eigendecomposition and the unitary `exp(-i h t)` built from it.

use faer::{Mat, Side};

use crate::error::{Error, Result};
use crate::C64;

/// `h = V diag(E) V^T` for a real symmetric `h`.
///
/// One decomposition serves every time point: `exp(-i h t) = V diag(exp(-i E t)) V^T`.
#[derive(Debug, Clone)]
pub(crate) struct SymmetricEigen {
    values: Vec<f64>,
    vectors: Mat<f64>,
}

impl SymmetricEigen {
    pub fn new(h: &Mat<f64>) -> Result<Self> {
        let n = h.nrows();
        if h.ncols() != n {
            return Err(Error::Eigendecomposition(format!(
                "matrix is {}x{}",
                n,
                h.ncols()
            )));
        }
        for j in 0..n {
            for i in 0..j {
                if h[(i, j)] != h[(j, i)] {
                    return Err(Error::Eigendecomposition(format!(
                        "matrix not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        let evd = h
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Eigendecomposition(format!("{e:?}")))?;
        let values = (0..n).map(|k| evd.S()[k]).collect();
        Ok(Self {
            values,
            vectors: evd.U().to_owned(),
        })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn phases(&self, t: f64) -> Vec<(f64, f64)> {
        self.values
            .iter()
            .map(|e| (e * t).sin_cos())
            .map(|(s, c)| (c, -s))
            .collect()
    }

    /// The full matrix `exp(-i h t)`.
    pub fn propagator(&self, t: f64) -> Mat<C64> {
        let n = self.dim();
        let v = &self.vectors;
        let phases = self.phases(t);
        let vc = Mat::<f64>::from_fn(n, n, |i, k| v[(i, k)] * phases[k].0);
        let vs = Mat::<f64>::from_fn(n, n, |i, k| v[(i, k)] * phases[k].1);
        let re = &vc * v.transpose();
        let im = &vs * v.transpose();
        Mat::from_fn(n, n, |i, j| C64::new(re[(i, j)], im[(i, j)]))
    }

    /// Row `r` of `exp(-i h t)`.
    pub fn propagator_row(&self, r: usize, t: f64) -> Vec<C64> {
        let v = &self.vectors;
        let weights: Vec<C64> = self
            .phases(t)
            .into_iter()
            .enumerate()
            .map(|(k, (c, s))| C64::new(c, s) * v[(r, k)])
            .collect();
        self.combine(&weights)
    }

    /// Coefficients of `psi` in the eigenbasis, `V^T psi`.
    pub fn project(&self, psi: &[C64]) -> Vec<C64> {
        let v = &self.vectors;
        (0..self.dim())
            .map(|k| psi.iter().enumerate().map(|(i, p)| p * v[(i, k)]).sum())
            .collect()
    }

    /// `V diag(exp(-i E t)) c` for eigenbasis coefficients `c`.
    pub fn evolve_projected(&self, coeffs: &[C64], t: f64) -> Vec<C64> {
        let weights: Vec<C64> = self
            .phases(t)
            .into_iter()
            .zip(coeffs)
            .map(|((c, s), a)| C64::new(c, s) * a)
            .collect();
        self.combine(&weights)
    }

    /// `V w`, walking `V` column by column.
    fn combine(&self, weights: &[C64]) -> Vec<C64> {
        let v = &self.vectors;
        let n = self.dim();
        let mut out = vec![C64::new(0.0, 0.0); n];
        for (k, w) in weights.iter().enumerate() {
            let col = v.col(k);
            for (o, x) in out.iter_mut().zip(col.iter()) {
                *o += w * *x;
            }
        }
        out
    }
}

/// `max |(M^dagger M - I)_ij|`.
pub(crate) fn unitarity_defect(m: &Mat<C64>) -> f64 {
    let gram = m.adjoint() * m;
    let mut worst = 0.0f64;
    for j in 0..gram.ncols() {
        for i in 0..gram.nrows() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[(i, j)] - target).norm());
        }
    }
    worst
}
