//! Thermal bath sampling in the Glauber P representation.
//!
//! A thermal mode with occupation `n` is a Gaussian mixture of coherent
//! states, `P(lambda) = exp(-|lambda|^2 / n) / (pi n)`. Each sample is a
//! product of coherent bath states, and the linear map carries it to a
//! coherent system label. Normally ordered system moments are averages over
//! those labels.
//!
//! Sample `k` is drawn from its own ChaCha stream, so results do not depend
//! on how the work is split across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::analysis::{neumaier_sum, neumaier_sum_complex};
use crate::decay::system_label;
use crate::error::{invalid, Error, Result};
use crate::propagator::{PropagatorCoefficients, Provenance};
use crate::spectral::{DiscreteBath, ThermalSpec};
use crate::C64;

/// Allowed deviation of a sampled per-mode occupation, in standard errors.
pub const SAMPLE_GATE_SIGMAS: f64 = 5.0;

/// Lazily generated set of thermal bath samples.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalSampleSet {
    seed: u64,
    count: usize,
    occupations: Vec<f64>,
}

impl ThermalSampleSet {
    /// Builds the set and checks the per-mode sample occupations against `n_j`.
    pub fn new(occupations: Vec<f64>, count: usize, seed: u64) -> Result<Self> {
        if count == 0 {
            return Err(invalid("samples", "need at least one sample"));
        }
        if let Some(n) = occupations.iter().find(|n| !(**n >= 0.0 && n.is_finite())) {
            return Err(invalid(
                "occupations",
                format!("must be finite and nonnegative, got {n}"),
            ));
        }
        let set = Self {
            seed,
            count,
            occupations,
        };
        set.check_gate()?;
        Ok(set)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn n_modes(&self) -> usize {
        self.occupations.len()
    }

    pub fn occupations(&self) -> &[f64] {
        &self.occupations
    }

    /// Bath labels of sample `k`; real and imaginary parts are `N(0, n_j / 2)`.
    pub fn sample(&self, k: usize) -> Vec<C64> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(k as u64);
        self.occupations
            .iter()
            .map(|n| {
                let sigma = (0.5 * n).sqrt();
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                C64::new(sigma * re, sigma * im)
            })
            .collect()
    }

    /// `|lambda_j|^2` is exponential with mean `n_j`, so its sample mean has
    /// standard error `n_j / sqrt(M)`.
    fn check_gate(&self) -> Result<()> {
        let sums = (0..self.count)
            .into_par_iter()
            .map(|k| {
                self.sample(k)
                    .iter()
                    .map(|l| l.norm_sqr())
                    .collect::<Vec<f64>>()
            })
            .collect::<Vec<_>>();
        let m = self.count as f64;
        for (j, n) in self.occupations.iter().enumerate() {
            let mean = neumaier_sum(sums.iter().map(|s| s[j])) / m;
            let stderr = n / m.sqrt();
            if (mean - n).abs() > SAMPLE_GATE_SIGMAS * stderr {
                return Err(Error::SampleGate {
                    mode: j,
                    mean,
                    expected: *n,
                    stderr,
                });
            }
        }
        Ok(())
    }
}

pub fn sample_thermal_bath(
    bath: &DiscreteBath,
    thermal: &ThermalSpec,
    count: usize,
    seed: u64,
) -> Result<ThermalSampleSet> {
    ThermalSampleSet::new(thermal.occupations(bath)?, count, seed)
}

/// First and second normally ordered moments of the system mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianMoments {
    /// `<b>`.
    pub mean_b: C64,
    /// `<b^dag b>`.
    pub occupation: f64,
}

/// Sample averages with their standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub t: f64,
    pub moments: GaussianMoments,
    /// Standard error of `<b>`, from `E|mu - <b>|^2`.
    pub stderr_mean: f64,
    pub stderr_occupation: f64,
}

fn estimate(t: f64, labels: impl Iterator<Item = C64> + Clone, m: f64) -> McEstimate {
    let mean_b = neumaier_sum_complex(labels.clone()) / m;
    let occupation = neumaier_sum(labels.clone().map(|z| z.norm_sqr())) / m;
    let spread = neumaier_sum(labels.clone().map(|z| (z - mean_b).norm_sqr())) / m;
    let occ_var = neumaier_sum(labels.map(|z| (z.norm_sqr() - occupation).powi(2))) / m;
    let bessel = if m > 1.0 { m / (m - 1.0) } else { 1.0 };
    McEstimate {
        t,
        moments: GaussianMoments { mean_b, occupation },
        stderr_mean: (spread * bessel / m).sqrt(),
        stderr_occupation: (occ_var * bessel / m).sqrt(),
    }
}

/// Monte Carlo moments at one time point.
pub fn mc_reduced_moments(
    alpha: C64,
    coeffs: &PropagatorCoefficients,
    samples: &ThermalSampleSet,
) -> Result<McEstimate> {
    Ok(mc_reduced_moments_series(alpha, std::slice::from_ref(coeffs), samples)?.remove(0))
}

/// Monte Carlo moments at several time points, reusing each bath sample.
///
/// Labels are computed in parallel; all sums run sequentially in sample order.
pub fn mc_reduced_moments_series(
    alpha: C64,
    coeffs: &[PropagatorCoefficients],
    samples: &ThermalSampleSet,
) -> Result<Vec<McEstimate>> {
    for c in coeffs {
        if c.n_modes() != samples.n_modes() {
            return Err(Error::ModeCountMismatch {
                expected: c.n_modes(),
                actual: samples.n_modes(),
            });
        }
    }
    let labels: Vec<Vec<C64>> = (0..samples.len())
        .into_par_iter()
        .map(|k| {
            let lambdas = samples.sample(k);
            coeffs
                .iter()
                .map(|c| system_label(alpha, &lambdas, c))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let m = samples.len() as f64;
    Ok(coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| estimate(c.t, labels.iter().map(move |row| row[i]), m))
        .collect())
}

/// Exact Gaussian moments `<b> = alpha u`, `<b^dag b> = |alpha u|^2 + sum_j n_j |v_j|^2`.
///
/// Requires coefficients from the exact propagator.
pub fn gaussian_moment_oracle(
    alpha: C64,
    occupations: &[f64],
    coeffs: &PropagatorCoefficients,
) -> Result<GaussianMoments> {
    if coeffs.provenance != Provenance::Oracle {
        return Err(Error::OracleRequired {
            what: "Gaussian moment oracle",
        });
    }
    if occupations.len() != coeffs.n_modes() {
        return Err(Error::ModeCountMismatch {
            expected: coeffs.n_modes(),
            actual: occupations.len(),
        });
    }
    let mean_b = alpha * coeffs.u;
    let thermal = neumaier_sum(
        occupations
            .iter()
            .zip(&coeffs.v)
            .map(|(n, v)| n * v.norm_sqr()),
    );
    Ok(GaussianMoments {
        mean_b,
        occupation: mean_b.norm_sqr() + thermal,
    })
}
