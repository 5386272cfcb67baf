//! Heisenberg-picture coefficients of the linear map
//!
//! ```text
//! b(t)   = u(t) b + sum_j v_j(t) a_j
//! a_j(t) = exp(-i w_j t) a_j + u_j(t) b + sum_s v_js(t) a_s
//! ```
//!
//! computed two ways: the Wigner-Weisskopf closed forms and the exact
//! single-excitation propagator of a discretized bath.

use faer::Mat;

use crate::error::{invalid, Error, Result};
use crate::linalg::{self, SymmetricEigen};
use crate::spectral::{BathMode, DiscreteBath};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemMode {
    omega_b: f64,
}

impl SystemMode {
    pub fn new(omega_b: f64) -> Result<Self> {
        if !(omega_b > 0.0 && omega_b.is_finite()) {
            return Err(invalid(
                "omega_b",
                format!("must be positive and finite, got {omega_b}"),
            ));
        }
        Ok(Self { omega_b })
    }

    pub fn omega_b(&self) -> f64 {
        self.omega_b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Analytic,
    Oracle,
}

/// Bath-to-bath block `v_js`, row-major.
///
/// The free evolution `exp(-i w_j t)` is kept out of the diagonal, matching
/// the operator expansion in the module docs.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossBlock {
    n: usize,
    data: Vec<C64>,
}

impl CrossBlock {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, j: usize, s: usize) -> C64 {
        self.data[j * self.n + s]
    }

    pub fn row(&self, j: usize) -> &[C64] {
        &self.data[j * self.n..(j + 1) * self.n]
    }
}

/// Coefficients at a single time point.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagatorCoefficients {
    pub t: f64,
    pub u: C64,
    pub v: Vec<C64>,
    pub u_bath: Vec<C64>,
    /// `exp(-i w_j t)` for every bath mode.
    pub free_phases: Vec<C64>,
    pub v_cross: Option<CrossBlock>,
    pub provenance: Provenance,
}

impl PropagatorCoefficients {
    pub fn n_modes(&self) -> usize {
        self.v.len()
    }

    pub fn survival(&self) -> f64 {
        self.u.norm_sqr()
    }

    /// Reassembles the `(N+1) x (N+1)` coefficient matrix; needs the cross block.
    pub fn matrix(&self) -> Result<Mat<C64>> {
        let cross = self
            .v_cross
            .as_ref()
            .ok_or(Error::CrossBlockRequired { t: self.t })?;
        let n = self.n_modes() + 1;
        Ok(Mat::from_fn(n, n, |i, j| match (i, j) {
            (0, 0) => self.u,
            (0, j) => self.v[j - 1],
            (i, 0) => self.u_bath[i - 1],
            (i, j) if i == j => self.free_phases[i - 1] + cross.get(i - 1, j - 1),
            (i, j) => cross.get(i - 1, j - 1),
        }))
    }
}

/// `sum_j |v_j|^2`, the weight transferred into the bath.
pub fn dissipation_sum(coeffs: &PropagatorCoefficients) -> f64 {
    coeffs.v.iter().map(|v| v.norm_sqr()).sum()
}

/// `| |u|^2 + sum_j |v_j|^2 - 1 |`.
pub fn unitarity_defect(coeffs: &PropagatorCoefficients) -> f64 {
    (coeffs.survival() + dissipation_sum(coeffs) - 1.0).abs()
}

/// Max-norm distance of the full coefficient matrix from unitarity.
pub fn matrix_unitarity_defect(m: &Mat<C64>) -> f64 {
    linalg::unitarity_defect(m)
}

/// `1 - exp(-gamma t)`.
pub fn closed_form_dissipation(gamma: f64, t: f64) -> f64 {
    -(-gamma * t).exp_m1()
}

/// `u(t) = exp(-gamma t / 2) exp(-i w_b t)`.
pub fn analytic_u(system: &SystemMode, gamma: f64, t: f64) -> C64 {
    C64::from_polar((-0.5 * gamma * t).exp(), -system.omega_b * t)
}

fn bath_response(system: &SystemMode, gamma: f64, omega: f64, t: f64) -> C64 {
    let detuning = system.omega_b - omega;
    let decayed = C64::from_polar((-0.5 * gamma * t).exp(), -detuning * t);
    C64::from_polar(1.0, -omega * t) * (decayed - 1.0) / C64::new(detuning, -0.5 * gamma)
}

/// `v_j(t) = xi_j e^{-i w_j t} (e^{-gamma t/2} e^{-i (w_b - w_j) t} - 1) / (w_b - w_j - i gamma/2)`.
pub fn analytic_v(system: &SystemMode, gamma: f64, mode: &BathMode, t: f64) -> C64 {
    mode.xi * bath_response(system, gamma, mode.omega, t)
}

/// `u_j(t)`: as [`analytic_v`] with the conjugate coupling, identical for real `xi_j`.
pub fn analytic_uj(system: &SystemMode, gamma: f64, mode: &BathMode, t: f64) -> C64 {
    C64::new(mode.xi, 0.0).conj() * bath_response(system, gamma, mode.omega, t)
}

/// Closed-form coefficients on the frequencies and couplings of `bath`, with
/// `gamma` taken from its spectral density. No cross block.
pub fn analytic_coefficients(
    system: &SystemMode,
    bath: &DiscreteBath,
    t: f64,
) -> PropagatorCoefficients {
    let gamma = bath.spec().gamma();
    let modes = bath.modes();
    PropagatorCoefficients {
        t,
        u: analytic_u(system, gamma, t),
        v: modes
            .iter()
            .map(|m| analytic_v(system, gamma, m, t))
            .collect(),
        u_bath: modes
            .iter()
            .map(|m| analytic_uj(system, gamma, m, t))
            .collect(),
        free_phases: free_phases(bath, t),
        v_cross: None,
        provenance: Provenance::Analytic,
    }
}

fn free_phases(bath: &DiscreteBath, t: f64) -> Vec<C64> {
    bath.modes()
        .iter()
        .map(|m| C64::from_polar(1.0, -m.omega * t))
        .collect()
}

/// Single-excitation Hamiltonian: index 0 is the system, `1..=N` the bath,
/// nonzero only on the diagonal and in the first row and column.
#[derive(Debug, Clone)]
pub struct SinglePartHamiltonian {
    matrix: Mat<f64>,
}

impl SinglePartHamiltonian {
    pub fn new(system: &SystemMode, bath: &DiscreteBath) -> Self {
        let modes = bath.modes();
        let matrix = Mat::from_fn(modes.len() + 1, modes.len() + 1, |i, j| match (i, j) {
            (0, 0) => system.omega_b,
            (i, j) if i == j => modes[i - 1].omega,
            (0, j) => modes[j - 1].xi,
            (i, 0) => modes[i - 1].xi,
            _ => 0.0,
        });
        Self { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix[(i, j)]
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for j in 0..n {
            for i in 0..j {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)]).abs());
            }
        }
        worst
    }

    /// True when every entry off the diagonal, first row and first column is zero.
    pub fn is_arrowhead(&self) -> bool {
        let n = self.dim();
        (1..n).all(|i| (1..n).all(|j| i == j || self.matrix[(i, j)] == 0.0))
    }
}

/// Exact `exp(-i h t)` for the discretized bath, decomposed once and
/// evaluated at any `t`.
#[derive(Debug, Clone)]
pub struct ExactPropagator {
    system: SystemMode,
    bath: DiscreteBath,
    eigen: SymmetricEigen,
}

impl ExactPropagator {
    pub fn new(system: &SystemMode, bath: &DiscreteBath) -> Result<Self> {
        let h = SinglePartHamiltonian::new(system, bath);
        let eigen = SymmetricEigen::new(&h.matrix)?;
        Ok(Self {
            system: *system,
            bath: bath.clone(),
            eigen,
        })
    }

    pub fn system(&self) -> &SystemMode {
        &self.system
    }

    pub fn bath(&self) -> &DiscreteBath {
        &self.bath
    }

    /// Single-excitation energies.
    pub fn eigenvalues(&self) -> &[f64] {
        self.eigen.values()
    }

    /// Full `(N+1) x (N+1)` propagator.
    pub fn matrix(&self, t: f64) -> Mat<C64> {
        self.eigen.propagator(t)
    }

    /// `u`, `v_j`, `u_j` only; `O(N^2)` per call.
    pub fn coefficients(&self, t: f64) -> PropagatorCoefficients {
        let row = self.eigen.propagator_row(0, t);
        // h is real symmetric, so exp(-i h t) is complex symmetric and the
        // first column equals the first row.
        let v = row[1..].to_vec();
        PropagatorCoefficients {
            t,
            u: row[0],
            u_bath: v.clone(),
            v,
            free_phases: free_phases(&self.bath, t),
            v_cross: None,
            provenance: Provenance::Oracle,
        }
    }

    /// All coefficients including the `O(N^2)` cross block; `O(N^3)` per call.
    pub fn coefficients_with_cross(&self, t: f64) -> PropagatorCoefficients {
        let m = self.matrix(t);
        let n = self.bath.len();
        let phases = free_phases(&self.bath, t);
        let mut data = Vec::with_capacity(n * n);
        for j in 0..n {
            for s in 0..n {
                let free = if j == s {
                    phases[j]
                } else {
                    C64::new(0.0, 0.0)
                };
                data.push(m[(j + 1, s + 1)] - free);
            }
        }
        PropagatorCoefficients {
            t,
            u: m[(0, 0)],
            v: (1..=n).map(|j| m[(0, j)]).collect(),
            u_bath: (1..=n).map(|j| m[(j, 0)]).collect(),
            free_phases: phases,
            v_cross: Some(CrossBlock { n, data }),
            provenance: Provenance::Oracle,
        }
    }

    /// `|u(t)|^2`.
    pub fn survival(&self, t: f64) -> f64 {
        self.eigen.propagator_row(0, t)[0].norm_sqr()
    }
}
