//! Initial states of the open system and reduced density matrices in a
//! truncated Fock basis.

use faer::{Mat, Side};

use crate::error::{invalid, Error, Result};
use crate::C64;

/// One branch `C_k |alpha_k>` of a finite coherent superposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentTerm {
    pub weight: C64,
    pub alpha: C64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum OpenSystemState {
    Fock(usize),
    Coherent(C64),
    CoherentSuperposition(Vec<CoherentTerm>),
}

/// `<alpha|beta> = exp(-|alpha|^2/2 - |beta|^2/2 + conj(alpha) beta)`.
pub fn coherent_overlap(alpha: C64, beta: C64) -> C64 {
    (-0.5 * alpha.norm_sqr() - 0.5 * beta.norm_sqr() + alpha.conj() * beta).exp()
}

/// Fock amplitudes `exp(-|alpha|^2/2) alpha^m / sqrt(m!)` for `m = 0..=n_max`.
pub fn coherent_amplitudes(alpha: C64, n_max: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut c = C64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    out.push(c);
    for m in 1..=n_max {
        c = c * alpha / (m as f64).sqrt();
        out.push(c);
    }
    out
}

impl OpenSystemState {
    pub fn superposition(terms: Vec<CoherentTerm>) -> Result<Self> {
        let state = OpenSystemState::CoherentSuperposition(terms);
        if !(state.norm_sqr() > 1e-300) {
            return Err(invalid("terms", "superposition has zero norm"));
        }
        Ok(state)
    }

    /// Norm squared of the represented vector; coherent branches overlap.
    pub fn norm_sqr(&self) -> f64 {
        match self {
            OpenSystemState::Fock(_) | OpenSystemState::Coherent(_) => 1.0,
            OpenSystemState::CoherentSuperposition(terms) => {
                let mut acc = C64::new(0.0, 0.0);
                for a in terms {
                    for b in terms {
                        acc += a.weight.conj() * b.weight * coherent_overlap(a.alpha, b.alpha);
                    }
                }
                acc.re
            }
        }
    }

    /// Largest excitation number with appreciable weight; used to size truncations.
    pub fn suggested_cutoff(&self) -> usize {
        let from_alpha = |a: f64| (a * a + 6.0 * a + 10.0).ceil() as usize;
        match self {
            OpenSystemState::Fock(n) => *n,
            OpenSystemState::Coherent(alpha) => from_alpha(alpha.norm()),
            OpenSystemState::CoherentSuperposition(terms) => terms
                .iter()
                .map(|t| from_alpha(t.alpha.norm()))
                .max()
                .unwrap_or(0),
        }
    }

    /// Normalized Fock amplitudes up to `n_max`, plus the weight lost beyond it.
    pub fn fock_amplitudes(&self, n_max: usize) -> Result<(Vec<C64>, f64)> {
        match self {
            OpenSystemState::Fock(n) => {
                if *n > n_max {
                    return Err(invalid(
                        "n_max",
                        format!("Fock({n}) needs n_max >= {n}, got {n_max}"),
                    ));
                }
                let mut v = vec![C64::new(0.0, 0.0); n_max + 1];
                v[*n] = C64::new(1.0, 0.0);
                Ok((v, 0.0))
            }
            OpenSystemState::Coherent(alpha) => {
                let v = coherent_amplitudes(*alpha, n_max);
                let kept: f64 = v.iter().map(|c| c.norm_sqr()).sum();
                Ok((v, (1.0 - kept).max(0.0)))
            }
            OpenSystemState::CoherentSuperposition(terms) => {
                let norm = self.norm_sqr();
                if !(norm > 1e-300) {
                    return Err(invalid("terms", "superposition has zero norm"));
                }
                let scale = 1.0 / norm.sqrt();
                let mut v = vec![C64::new(0.0, 0.0); n_max + 1];
                for term in terms {
                    for (acc, c) in v.iter_mut().zip(coherent_amplitudes(term.alpha, n_max)) {
                        *acc += term.weight * c * scale;
                    }
                }
                let kept: f64 = v.iter().map(|c| c.norm_sqr()).sum();
                Ok((v, (1.0 - kept).max(0.0)))
            }
        }
    }
}

/// Density matrix of the system mode on `|0>, ..., |n_max>`.
#[derive(Debug, Clone)]
pub struct DensityMatrixFock {
    entries: Mat<C64>,
}

impl DensityMatrixFock {
    pub fn from_matrix(entries: Mat<C64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return Err(invalid(
                "entries",
                "density matrix must be square and nonempty",
            ));
        }
        Ok(Self { entries })
    }

    /// `|psi><psi|` without normalization.
    pub fn from_pure(psi: &[C64]) -> Self {
        let n = psi.len();
        Self {
            entries: Mat::from_fn(n, n, |i, j| psi[i] * psi[j].conj()),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn n_max(&self) -> usize {
        self.dim() - 1
    }

    pub fn get(&self, m: usize, n: usize) -> C64 {
        self.entries[(m, n)]
    }

    pub fn entries(&self) -> &Mat<C64> {
        &self.entries
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|m| self.entries[(m, m)].re).collect()
    }

    pub fn trace(&self) -> f64 {
        self.populations().iter().sum()
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += self.entries[(i, j)].norm_sqr();
            }
        }
        acc
    }

    /// `Tr(rho b^dagger b)`.
    pub fn mean_number(&self) -> f64 {
        self.populations()
            .iter()
            .enumerate()
            .map(|(m, p)| m as f64 * p)
            .sum()
    }

    /// `<psi|rho|psi>` for a pure state given in the same basis.
    pub fn fidelity_with_pure(&self, psi: &[C64]) -> f64 {
        let n = self.dim().min(psi.len());
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += psi[i].conj() * self.entries[(i, j)] * psi[j];
            }
        }
        acc.re
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..=i {
                worst = worst.max((self.entries[(i, j)] - self.entries[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn max_off_diagonal(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    worst = worst.max(self.entries[(i, j)].norm());
                }
            }
        }
        worst
    }

    /// Sum of `|rho_mn|` over `m != n`.
    pub fn l1_coherence(&self) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    acc += self.entries[(i, j)].norm();
                }
            }
        }
        acc
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        let values = self
            .entries
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| Error::Eigendecomposition(format!("{e:?}")))?;
        Ok(values.into_iter().fold(f64::INFINITY, f64::min))
    }

    pub fn scale(&mut self, factor: f64) {
        let n = self.dim();
        for j in 0..n {
            for i in 0..n {
                self.entries[(i, j)] *= factor;
            }
        }
    }
}
