//! Zero-temperature decay laws: binomial populations of an initial Fock
//! state, coherent-state damping, and coherent labels for an excited bath.

use crate::error::{invalid, Error, Result};
use crate::propagator::PropagatorCoefficients;
use crate::C64;

/// `P_0..P_n` at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationDistribution {
    pub probs: Vec<f64>,
    pub t: f64,
}

impl PopulationDistribution {
    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(m, p)| m as f64 * p)
            .sum()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.probs
            .iter()
            .enumerate()
            .map(|(m, p)| (m as f64 - mean).powi(2) * p)
            .sum()
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

const SURVIVAL_SLACK: f64 = 1e-12;

/// Binomial law `P_m = C(n, m) p^m (1 - p)^(n - m)` for survival probability
/// `p` of a single excitation.
///
/// Pass `p = exp(-gamma t)` for the closed form or `p = |u(t)|^2` from the
/// exact propagator. Roundoff of up to `1e-12` outside `[0, 1]` is clamped.
pub fn fock_populations(n: usize, survival: f64, t: f64) -> Result<PopulationDistribution> {
    if !(-SURVIVAL_SLACK..=1.0 + SURVIVAL_SLACK).contains(&survival) {
        return Err(invalid(
            "survival",
            format!("must lie in [0, 1], got {survival}"),
        ));
    }
    let survival = survival.clamp(0.0, 1.0);
    let lost = 1.0 - survival;
    let probs = (0..=n)
        .map(|m| binomial(n, m) * survival.powi(m as i32) * lost.powi((n - m) as i32))
        .collect();
    Ok(PopulationDistribution { probs, t })
}

/// Probability of still finding all `n` excitations, with its decay time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockSurvival {
    pub probability: f64,
    /// `1 / (n gamma)`; infinite for the ground state.
    pub decay_time: f64,
}

pub fn fock_survival(n: usize, gamma: f64, t: f64) -> Result<FockSurvival> {
    if t < 0.0 {
        return Err(invalid("t", format!("must be nonnegative, got {t}")));
    }
    if n == 0 {
        return Ok(FockSurvival {
            probability: 1.0,
            decay_time: f64::INFINITY,
        });
    }
    let rate = n as f64 * gamma;
    Ok(FockSurvival {
        probability: (-rate * t).exp(),
        decay_time: 1.0 / rate,
    })
}

/// Reduced state `|alpha u>` of an initial coherent state with a vacuum bath.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentDecay {
    pub label: C64,
    pub mean_number: f64,
}

pub fn coherent_decay(alpha: C64, u: C64) -> Result<CoherentDecay> {
    if u.norm() > 1.0 + 1e-12 {
        return Err(invalid(
            "u",
            format!("|u| must not exceed 1, got {}", u.norm()),
        ));
    }
    let label = alpha * u;
    Ok(CoherentDecay {
        label,
        mean_number: label.norm_sqr(),
    })
}

/// Decay time of the coherent-state mean number, `1 / gamma`.
pub fn coherent_decay_time(gamma: f64) -> f64 {
    1.0 / gamma
}

/// Coherent labels of system and bath after evolving `|alpha> x prod_j |lambda_j>`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointCoherentLabels {
    pub mu: C64,
    pub mu_bath: Vec<C64>,
}

impl JointCoherentLabels {
    pub fn norm_sqr(&self) -> f64 {
        self.mu.norm_sqr() + self.mu_bath.iter().map(|m| m.norm_sqr()).sum::<f64>()
    }
}

fn check_modes(lambdas: &[C64], coeffs: &PropagatorCoefficients) -> Result<()> {
    if lambdas.len() != coeffs.n_modes() {
        return Err(Error::ModeCountMismatch {
            expected: coeffs.n_modes(),
            actual: lambdas.len(),
        });
    }
    Ok(())
}

/// System label `mu = u alpha + sum_j v_j lambda_j`; `O(N)` and needs no cross block.
pub fn system_label(alpha: C64, lambdas: &[C64], coeffs: &PropagatorCoefficients) -> Result<C64> {
    check_modes(lambdas, coeffs)?;
    Ok(coeffs.u * alpha
        + coeffs
            .v
            .iter()
            .zip(lambdas)
            .map(|(v, l)| v * l)
            .sum::<C64>())
}

/// Propagates coherent labels through the linear Heisenberg map.
///
/// Coherent amplitudes evolve with the same matrix as the annihilation
/// operators, so
///
/// ```text
/// mu   = u alpha + sum_j v_j lambda_j
/// mu_j = u_j alpha + exp(-i w_j t) lambda_j + sum_s v_js lambda_s
/// ```
///
/// The sum over `s` includes `s = j`: the diagonal of the bath block differs
/// from the free phase. With real couplings the matrix is symmetric, so this
/// equals the transposed form `mu = alpha u + sum_j lambda_j u_j`.
pub fn excited_bath_evolution(
    alpha: C64,
    lambdas: &[C64],
    coeffs: &PropagatorCoefficients,
) -> Result<JointCoherentLabels> {
    check_modes(lambdas, coeffs)?;
    let mu = system_label(alpha, lambdas, coeffs)?;
    let zero = C64::new(0.0, 0.0);
    if lambdas.iter().all(|l| *l == zero) {
        let mu_bath = coeffs.u_bath.iter().map(|u| u * alpha).collect();
        return Ok(JointCoherentLabels { mu, mu_bath });
    }
    let cross = coeffs
        .v_cross
        .as_ref()
        .ok_or(Error::CrossBlockRequired { t: coeffs.t })?;
    let mu_bath = (0..lambdas.len())
        .map(|j| {
            let scattered: C64 = cross.row(j).iter().zip(lambdas).map(|(v, l)| v * l).sum();
            coeffs.u_bath[j] * alpha + coeffs.free_phases[j] * lambdas[j] + scattered
        })
        .collect();
    Ok(JointCoherentLabels { mu, mu_bath })
}
