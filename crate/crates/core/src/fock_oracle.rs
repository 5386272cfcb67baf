//! Brute-force evolution of the full many-boson Hamiltonian
//!
//! ```text
//! H = w_b b^dag b + sum_j w_j a_j^dag a_j + sum_j xi_j (b a_j^dag + b^dag a_j)
//! ```
//!
//! in a truncated product Fock basis, followed by a partial trace over the
//! bath. Nothing here uses the single-particle propagator: the Hamiltonian is
//! built from raw creation/annihilation matrix elements.
//!
//! `H` conserves the total excitation number `K`, and an initial state with at
//! most `n_max` system quanta and an empty bath never populates a sector with
//! `K > n_max`. Inside those sectors no single mode can exceed `n_max`, so
//! diagonalizing the sectors `K <= n_max` reproduces the per-mode truncated
//! product basis exactly.

use std::collections::HashMap;
use std::sync::OnceLock;

use faer::Mat;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::linalg::SymmetricEigen;
use crate::propagator::SystemMode;
use crate::spectral::DiscreteBath;
use crate::state::{DensityMatrixFock, OpenSystemState};
use crate::C64;

pub const MAX_BATH_MODES: usize = 4;
pub const MAX_PRODUCT_DIM: usize = 200_000;
/// Largest tolerated `1 - Tr(rho)` before a truncation error is raised.
pub const TRACE_TOLERANCE: f64 = 1e-6;

#[derive(Debug)]
struct Sector {
    /// `(system quanta, bath configuration index)` per basis state.
    states: Vec<(usize, usize)>,
    eigen: OnceLock<Result<SymmetricEigen>>,
}

/// Truncated Fock-space oracle for a bath of at most four modes.
#[derive(Debug)]
pub struct FockOracle {
    system: SystemMode,
    bath: DiscreteBath,
    n_max: usize,
    configs: Vec<Vec<usize>>,
    config_index: HashMap<Vec<usize>, usize>,
    /// Position of each configuration among those with the same total.
    position: Vec<usize>,
    /// Number of bath configurations holding exactly `k` quanta.
    count_by_total: Vec<usize>,
    sectors: Vec<Sector>,
}

fn enumerate_configs(n_modes: usize, budget: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, left: usize, budget: usize, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(prefix.clone());
            return;
        }
        for n in 0..=budget {
            prefix.push(n);
            rec(prefix, left - 1, budget - n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n_modes), n_modes, budget, &mut out);
    out
}

impl FockOracle {
    pub fn new(system: &SystemMode, bath: &DiscreteBath, n_max: usize) -> Result<Self> {
        let n_modes = bath.len();
        if n_modes > MAX_BATH_MODES {
            return Err(Error::ResourceLimit {
                what: "bath modes",
                requested: n_modes,
                limit: MAX_BATH_MODES,
            });
        }
        let product_dim = (n_max + 1).checked_pow(n_modes as u32 + 1);
        if product_dim.is_none_or(|d| d > MAX_PRODUCT_DIM) {
            return Err(Error::ResourceLimit {
                what: "truncated Hilbert dimension",
                requested: (n_max + 1).saturating_pow(n_modes as u32 + 1),
                limit: MAX_PRODUCT_DIM,
            });
        }

        let mut configs = enumerate_configs(n_modes, n_max);
        configs.sort_by_key(|c| c.iter().sum::<usize>());
        let mut by_total: Vec<Vec<usize>> = vec![Vec::new(); n_max + 1];
        let mut position = vec![0; configs.len()];
        for (idx, c) in configs.iter().enumerate() {
            let total: usize = c.iter().sum();
            position[idx] = by_total[total].len();
            by_total[total].push(idx);
        }
        let count_by_total = by_total.iter().map(Vec::len).collect();
        let config_index = configs
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, c)| (c, i))
            .collect();
        let sectors = (0..=n_max)
            .map(|k| {
                let states = (0..=k)
                    .rev()
                    .flat_map(|m| by_total[k - m].iter().map(move |&cfg| (m, cfg)))
                    .collect();
                Sector {
                    states,
                    eigen: OnceLock::new(),
                }
            })
            .collect();
        Ok(Self {
            system: *system,
            bath: bath.clone(),
            n_max,
            configs,
            config_index,
            position,
            count_by_total,
            sectors,
        })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Dimension of the `K`-excitation sector.
    pub fn sector_dim(&self, k: usize) -> usize {
        self.sectors[k].states.len()
    }

    fn local_index(&self, k: usize, m: usize, cfg: usize) -> usize {
        // Sector states run over m = k, k-1, ..., 0; the block for m holds the
        // configurations with total k - m.
        let offset: usize = (m + 1..=k)
            .map(|higher| self.count_by_total[k - higher])
            .sum();
        offset + self.position[cfg]
    }

    fn sector_hamiltonian(&self, k: usize) -> Mat<f64> {
        let sector = &self.sectors[k];
        let modes = self.bath.modes();
        let dim = sector.states.len();
        let mut h = Mat::<f64>::zeros(dim, dim);
        for (row, &(m, cfg)) in sector.states.iter().enumerate() {
            let occupation = &self.configs[cfg];
            h[(row, row)] = self.system.omega_b() * m as f64
                + occupation
                    .iter()
                    .zip(modes)
                    .map(|(n, mode)| *n as f64 * mode.omega)
                    .sum::<f64>();
            // b^dag a_j moves one quantum from mode j into the system.
            for (j, mode) in modes.iter().enumerate() {
                if occupation[j] == 0 || m + 1 > k {
                    continue;
                }
                let mut target = occupation.clone();
                target[j] -= 1;
                let target_cfg = self.config_index[&target];
                let col = self.local_index(k, m + 1, target_cfg);
                let amp = mode.xi * ((m + 1) as f64).sqrt() * (occupation[j] as f64).sqrt();
                h[(row, col)] += amp;
                h[(col, row)] += amp;
            }
        }
        h
    }

    fn sector_eigen(&self, k: usize) -> Result<&SymmetricEigen> {
        self.sectors[k]
            .eigen
            .get_or_init(|| SymmetricEigen::new(&self.sector_hamiltonian(k)))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Full state at time `t` as `amplitudes[cfg][m]`.
    fn evolve_state(&self, system_amplitudes: &[C64], t: f64) -> Result<Vec<Vec<C64>>> {
        let vacuum = self.config_index[&vec![0; self.bath.len()]];
        let zero = C64::new(0.0, 0.0);
        let mut amplitudes = vec![vec![zero; self.n_max + 1]; self.configs.len()];
        for (k, c) in system_amplitudes.iter().enumerate() {
            if *c == zero {
                continue;
            }
            let eigen = self.sector_eigen(k)?;
            let mut initial = vec![zero; self.sector_dim(k)];
            initial[self.local_index(k, k, vacuum)] = *c;
            let evolved = eigen.evolve_projected(&eigen.project(&initial), t);
            for (&(m, cfg), a) in self.sectors[k].states.iter().zip(evolved) {
                amplitudes[cfg][m] = a;
            }
        }
        Ok(amplitudes)
    }

    fn system_amplitudes(&self, initial: &OpenSystemState) -> Result<Vec<C64>> {
        let (amps, lost) = initial.fock_amplitudes(self.n_max)?;
        if lost > TRACE_TOLERANCE {
            return Err(Error::Truncation {
                defect: lost,
                tolerance: TRACE_TOLERANCE,
            });
        }
        Ok(amps)
    }

    /// Reduced system density matrix at time `t`.
    pub fn reduced_state(&self, initial: &OpenSystemState, t: f64) -> Result<DensityMatrixFock> {
        if t < 0.0 {
            return Err(invalid("t", format!("must be nonnegative, got {t}")));
        }
        let amps = self.system_amplitudes(initial)?;
        self.reduce(&self.evolve_state(&amps, t)?)
    }

    /// [`Self::reduced_state`] over a time grid; sector decompositions are shared.
    pub fn reduced_states(
        &self,
        initial: &OpenSystemState,
        times: &[f64],
    ) -> Result<Vec<DensityMatrixFock>> {
        let amps = self.system_amplitudes(initial)?;
        // Decompose serially, then evaluate time points in parallel.
        for (k, c) in amps.iter().enumerate() {
            if c.norm() > 0.0 {
                self.sector_eigen(k)?;
            }
        }
        times
            .par_iter()
            .map(|&t| {
                if t < 0.0 {
                    return Err(invalid("t", format!("must be nonnegative, got {t}")));
                }
                self.reduce(&self.evolve_state(&amps, t)?)
            })
            .collect()
    }

    fn reduce(&self, amplitudes: &[Vec<C64>]) -> Result<DensityMatrixFock> {
        let dim = self.n_max + 1;
        let rho = Mat::from_fn(dim, dim, |m, n| {
            amplitudes.iter().map(|a| a[m] * a[n].conj()).sum::<C64>()
        });
        let rho = DensityMatrixFock::from_matrix(rho)?;
        let defect = (1.0 - rho.trace()).abs();
        if defect > TRACE_TOLERANCE {
            return Err(Error::Truncation {
                defect,
                tolerance: TRACE_TOLERANCE,
            });
        }
        Ok(rho)
    }

    /// `|<psi(0)|psi(t)>|^2` for the global vacuum.
    pub fn vacuum_fidelity(&self, t: f64) -> Result<f64> {
        let mut amps = vec![C64::new(0.0, 0.0); self.n_max + 1];
        amps[0] = C64::new(1.0, 0.0);
        let state = self.evolve_state(&amps, t)?;
        let vacuum = self.config_index[&vec![0; self.bath.len()]];
        Ok(state[vacuum][0].norm_sqr())
    }
}

/// One-shot wrapper around [`FockOracle::reduced_state`].
pub fn full_fock_oracle(
    system: &SystemMode,
    bath: &DiscreteBath,
    initial: &OpenSystemState,
    t: f64,
    n_max: usize,
) -> Result<DensityMatrixFock> {
    FockOracle::new(system, bath, n_max)?.reduced_state(initial, t)
}

/// Checks that the joint vacuum is stationary under the full Hamiltonian.
pub fn ground_state_invariance_check(
    system: &SystemMode,
    bath: &DiscreteBath,
    t: f64,
) -> Result<bool> {
    let oracle = FockOracle::new(system, bath, 1)?;
    Ok((1.0 - oracle.vacuum_fidelity(t)?).abs() <= 1e-10)
}
