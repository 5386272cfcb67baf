//! Finite-temperature decay: the thermal factor `Phi(T, t)`, the conditional
//! coherent state built from it, and the short-time effective Hamiltonian
//!
//! ```text
//! H_eff = (w_b - i gamma / 2) b^dag b - (i / 2) n_th gamma
//! ```

use faer::Mat;

use crate::error::{invalid, Error, Result};
use crate::propagator::{PropagatorCoefficients, SystemMode};
use crate::spectral::{DiscreteBath, ThermalSpec};
use crate::state::{coherent_amplitudes, coherent_overlap, DensityMatrixFock, OpenSystemState};
use crate::C64;

/// Largest `gamma t` treated as short time by the effective Hamiltonian.
pub const SHORT_TIME_LIMIT: f64 = 0.1;
/// Smallest `Phi` for which the high-temperature asymptote is evaluated.
pub const HIGH_TEMPERATURE_MIN_PHI: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiMethod {
    DiscreteSum,
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiFactor {
    pub value: f64,
    pub t: f64,
    pub method: PhiMethod,
}

/// `Phi = 1 + sum_j n_j |u_j(t)|^2` over the discrete bath.
pub fn phi_discrete(
    bath: &DiscreteBath,
    thermal: &ThermalSpec,
    coeffs: &PropagatorCoefficients,
) -> Result<PhiFactor> {
    if coeffs.n_modes() != bath.len() {
        return Err(Error::ModeCountMismatch {
            expected: bath.len(),
            actual: coeffs.n_modes(),
        });
    }
    let occupations = thermal.occupations(bath)?;
    let sum: f64 = occupations
        .iter()
        .zip(&coeffs.u_bath)
        .map(|(n, u)| n * u.norm_sqr())
        .sum();
    Ok(PhiFactor {
        value: 1.0 + sum,
        t: coeffs.t,
        method: PhiMethod::DiscreteSum,
    })
}

/// `Phi = 1 + n_th (1 - exp(-gamma t))`, the Bose factor pulled out at `w_b`.
pub fn phi_closed(n_th: f64, gamma: f64, t: f64) -> Result<PhiFactor> {
    if !(n_th >= 0.0) {
        return Err(invalid("n_th", format!("must be nonnegative, got {n_th}")));
    }
    if t < 0.0 {
        return Err(invalid("t", format!("must be nonnegative, got {t}")));
    }
    let value = 1.0 - n_th * (-gamma * t).exp_m1();
    Ok(PhiFactor {
        value,
        t,
        method: PhiMethod::ClosedForm,
    })
}

fn check_phi(phi: &PhiFactor) -> Result<()> {
    if !(phi.value >= 1.0) {
        return Err(invalid(
            "phi",
            format!("must be at least 1, got {}", phi.value),
        ));
    }
    Ok(())
}

/// Weight and label of `Phi^{-1/2} |alpha ((u - 1) Phi^{-1/2} + 1)>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalState {
    pub weight: f64,
    pub label: C64,
}

pub fn conditional_wavefunction(alpha: C64, u: C64, phi: &PhiFactor) -> Result<ConditionalState> {
    check_phi(phi)?;
    let weight = phi.value.powf(-0.5);
    Ok(ConditionalState {
        weight,
        label: alpha * ((u - 1.0) * weight + 1.0),
    })
}

/// `|alpha|^2 |(u - 1) / Phi + Phi^{-1/2}|^2`.
pub fn paper_mean_number_t(alpha: C64, u: C64, phi: &PhiFactor) -> Result<f64> {
    check_phi(phi)?;
    Ok(alpha.norm_sqr() * ((u - 1.0) / phi.value + phi.value.powf(-0.5)).norm_sqr())
}

/// Low-temperature limit `|alpha|^2 exp(-gamma t)`.
pub fn low_temperature_mean_number(alpha: C64, gamma: f64, t: f64) -> f64 {
    alpha.norm_sqr() * (-gamma * t).exp()
}

/// High-temperature limit `|alpha|^2 beta w_b / (1 - exp(-gamma t))`.
///
/// Only meaningful once `Phi >> 1`; below [`HIGH_TEMPERATURE_MIN_PHI`] this
/// returns [`Error::OutsideRegime`].
pub fn high_temperature_mean_number(
    alpha: C64,
    beta_omega_b: f64,
    gamma: f64,
    phi: &PhiFactor,
) -> Result<f64> {
    if phi.value < HIGH_TEMPERATURE_MIN_PHI {
        return Err(Error::OutsideRegime(format!(
            "high-temperature asymptote needs Phi >= {HIGH_TEMPERATURE_MIN_PHI}, got {}",
            phi.value
        )));
    }
    Ok(alpha.norm_sqr() * beta_omega_b / -(-gamma * phi.t).exp_m1())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveHamiltonian {
    omega_b: f64,
    gamma: f64,
    n_th: f64,
}

impl EffectiveHamiltonian {
    pub fn new(omega_b: f64, gamma: f64, n_th: f64) -> Result<Self> {
        if !(gamma > 0.0) {
            return Err(invalid("gamma", format!("must be positive, got {gamma}")));
        }
        if !(n_th >= 0.0 && n_th.is_finite()) {
            return Err(invalid(
                "n_th",
                format!("must be finite and nonnegative, got {n_th}"),
            ));
        }
        Ok(Self {
            omega_b,
            gamma,
            n_th,
        })
    }

    pub fn from_thermal(system: &SystemMode, gamma: f64, thermal: &ThermalSpec) -> Result<Self> {
        Self::new(system.omega_b(), gamma, thermal.n_th())
    }

    pub fn omega_b(&self) -> f64 {
        self.omega_b
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn n_th(&self) -> f64 {
        self.n_th
    }

    /// Eigenvalue on `|n>`: `n (w_b - i gamma / 2) - i n_th gamma / 2`.
    pub fn eigenvalue(&self, n: usize) -> C64 {
        C64::new(
            n as f64 * self.omega_b,
            -0.5 * self.gamma * (n as f64 + self.n_th),
        )
    }

    fn decay_time(&self, quanta: f64) -> f64 {
        let rate = (self.n_th + quanta) * self.gamma;
        if rate == 0.0 {
            f64::INFINITY
        } else {
            1.0 / rate
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeffFockEvolution {
    pub amplitude: C64,
    pub mean_number: f64,
    pub decay_time: f64,
}

/// `exp(-i H_eff t) |n> = exp(-i n w_b t) exp(-(n_th + n) gamma t / 2) |n>`.
pub fn heff_evolve_fock(h: &EffectiveHamiltonian, n: usize, t: f64) -> Result<HeffFockEvolution> {
    if t < 0.0 {
        return Err(invalid("t", format!("must be nonnegative, got {t}")));
    }
    let amplitude = (C64::new(0.0, -t) * h.eigenvalue(n)).exp();
    Ok(HeffFockEvolution {
        amplitude,
        mean_number: n as f64 * (-(h.n_th + n as f64) * h.gamma * t).exp(),
        decay_time: h.decay_time(n as f64),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeffCoherentEvolution {
    pub weight: f64,
    pub label: C64,
    pub mean_number: f64,
    pub decay_time: f64,
}

/// `exp(-i H_eff t) |alpha> = exp(-n_th gamma t / 2) |alpha exp(-i (w_b - i gamma / 2) t)>`.
pub fn heff_evolve_coherent(
    h: &EffectiveHamiltonian,
    alpha: C64,
    t: f64,
) -> Result<HeffCoherentEvolution> {
    if t < 0.0 {
        return Err(invalid("t", format!("must be nonnegative, got {t}")));
    }
    let label = alpha * C64::from_polar((-0.5 * h.gamma * t).exp(), -h.omega_b * t);
    Ok(HeffCoherentEvolution {
        weight: (-0.5 * h.n_th * h.gamma * t).exp(),
        label,
        mean_number: alpha.norm_sqr() * (-(h.n_th + 1.0) * h.gamma * t).exp(),
        decay_time: h.decay_time(1.0),
    })
}

/// Result of pushing a coherent superposition through `exp(-i H_eff t)`.
#[derive(Debug, Clone)]
pub struct SuperpositionEvolution {
    /// Renormalized to unit trace.
    pub rho: DensityMatrixFock,
    /// Norm left after the nonunitary evolution, before renormalization.
    pub retained_norm: f64,
    /// `gamma t` exceeded [`SHORT_TIME_LIMIT`].
    pub outside_short_time: bool,
}

/// Evolves every branch with [`heff_evolve_coherent`] and assembles
/// `sum_kl C_k C_l^* |psi_k><psi_l|` on `|0>..|n_max>`.
pub fn heff_evolve_superposition(
    h: &EffectiveHamiltonian,
    state: &OpenSystemState,
    t: f64,
    n_max: usize,
) -> Result<SuperpositionEvolution> {
    let terms = match state {
        OpenSystemState::Coherent(alpha) => {
            vec![crate::state::CoherentTerm {
                weight: C64::new(1.0, 0.0),
                alpha: *alpha,
            }]
        }
        OpenSystemState::CoherentSuperposition(terms) => terms.clone(),
        OpenSystemState::Fock(_) => {
            return Err(invalid(
                "state",
                "superposition evolution needs coherent branches",
            ))
        }
    };
    let initial_norm = state.norm_sqr();
    if !(initial_norm > 1e-300) {
        return Err(invalid("state", "superposition has zero norm"));
    }
    let evolved: Vec<(C64, C64)> = terms
        .iter()
        .map(|term| {
            heff_evolve_coherent(h, term.alpha, t)
                .map(|e| (term.weight * e.weight / initial_norm.sqrt(), e.label))
        })
        .collect::<Result<_>>()?;

    let mut retained = C64::new(0.0, 0.0);
    for (ca, a) in &evolved {
        for (cb, b) in &evolved {
            retained += ca.conj() * cb * coherent_overlap(*a, *b);
        }
    }
    let retained_norm = retained.re;

    let mut psi = vec![C64::new(0.0, 0.0); n_max + 1];
    for (c, label) in &evolved {
        for (acc, amp) in psi.iter_mut().zip(coherent_amplitudes(*label, n_max)) {
            *acc += c * amp;
        }
    }
    let kept: f64 = psi.iter().map(|c| c.norm_sqr()).sum();
    let defect = 1.0 - kept / retained_norm;
    if defect > crate::fock_oracle::TRACE_TOLERANCE {
        return Err(Error::Truncation {
            defect,
            tolerance: crate::fock_oracle::TRACE_TOLERANCE,
        });
    }
    let n = psi.len();
    let rho = Mat::from_fn(n, n, |i, j| psi[i] * psi[j].conj() / kept);
    Ok(SuperpositionEvolution {
        rho: DensityMatrixFock::from_matrix(rho)?,
        retained_norm,
        outside_short_time: h.gamma * t > SHORT_TIME_LIMIT,
    })
}

/// Decay of Fock-basis coherences relative to the mean number between two
/// reduced states: `(C_l1(t) / C_l1(0)) / (N(t) / N(0))`.
pub fn coherence_decay_ratio(initial: &DensityMatrixFock, later: &DensityMatrixFock) -> f64 {
    let coherence = later.l1_coherence() / initial.l1_coherence();
    let population = later.mean_number() / initial.mean_number();
    coherence / population
}

/// Effective-Hamiltonian Fock mean number `n exp(-(n_th + n) gamma t)`.
pub fn heff_fock_mean_number(n: usize, n_th: f64, gamma: f64, t: f64) -> f64 {
    n as f64 * (-(n_th + n as f64) * gamma * t).exp()
}

/// Exact-moment Fock mean number in closed form, `n exp(-gamma t) + n_th (1 - exp(-gamma t))`.
pub fn exact_fock_mean_number(n: usize, n_th: f64, gamma: f64, t: f64) -> f64 {
    let survival = (-gamma * t).exp();
    n as f64 * survival - n_th * (-gamma * t).exp_m1()
}

/// Slope at `t = 0` of `exact_fock_mean_number - heff_fock_mean_number`.
pub fn fock_divergence_slope(n: usize, n_th: f64, gamma: f64) -> f64 {
    let n = n as f64;
    gamma * (n * n - n + n_th * (n + 1.0))
}
