//! Flat spectral density, its midpoint discretization, and Bose-Einstein
//! occupations.

use std::f64::consts::PI;
use std::io::{self, Write};

use crate::error::{invalid, Error, Result};

/// Flat band spectral density `J(w) = gamma / (2 pi)` on `|w - w_c| <= delta`.
///
/// The normalization is fixed by the golden-rule rate `2 pi J(w_b) = gamma`,
/// so that a system mode at the band center has `|u(t)|^2 -> exp(-gamma t)`
/// and `sum_j |v_j(t)|^2 -> 1 - exp(-gamma t)` once `delta >> gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDensitySpec {
    gamma: f64,
    band_center: f64,
    half_bandwidth: f64,
}

impl SpectralDensitySpec {
    pub fn new(gamma: f64, band_center: f64, half_bandwidth: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(invalid(
                "gamma",
                format!("must be positive and finite, got {gamma}"),
            ));
        }
        if !(half_bandwidth > 0.0 && half_bandwidth.is_finite()) {
            return Err(invalid(
                "half_bandwidth",
                format!("must be positive and finite, got {half_bandwidth}"),
            ));
        }
        if !band_center.is_finite() {
            return Err(invalid("band_center", "must be finite"));
        }
        Ok(Self {
            gamma,
            band_center,
            half_bandwidth,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn band_center(&self) -> f64 {
        self.band_center
    }

    pub fn half_bandwidth(&self) -> f64 {
        self.half_bandwidth
    }

    /// Height of the flat band.
    pub fn level(&self) -> f64 {
        self.gamma / (2.0 * PI)
    }

    pub fn contains(&self, omega: f64) -> bool {
        (omega - self.band_center).abs() <= self.half_bandwidth
    }

    /// Integral of `J` over the band, `gamma * delta / pi`.
    pub fn total_weight(&self) -> f64 {
        self.level() * 2.0 * self.half_bandwidth
    }
}

/// Evaluates the flat spectral density at `omega`.
pub fn spectral_density(spec: &SpectralDensitySpec, omega: f64) -> f64 {
    if spec.contains(omega) {
        spec.level()
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathMode {
    pub omega: f64,
    /// Real, nonnegative coupling; only `|xi|^2` enters observables.
    pub xi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscretizationScheme {
    Midpoint,
}

impl DiscretizationScheme {
    pub fn as_str(&self) -> &'static str {
        match self {
            DiscretizationScheme::Midpoint => "midpoint",
        }
    }
}

/// Finite set of bath modes realizing a [`SpectralDensitySpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteBath {
    modes: Vec<BathMode>,
    spec: SpectralDensitySpec,
    scheme: DiscretizationScheme,
}

impl DiscreteBath {
    pub fn modes(&self) -> &[BathMode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn spec(&self) -> &SpectralDensitySpec {
        &self.spec
    }

    pub fn scheme(&self) -> DiscretizationScheme {
        self.scheme
    }

    /// Uniform grid spacing.
    pub fn spacing(&self) -> f64 {
        2.0 * self.spec.half_bandwidth / self.modes.len() as f64
    }

    /// Time after which the discrete bath stops mimicking a continuum.
    pub fn recurrence_time(&self) -> f64 {
        2.0 * PI / self.spacing()
    }

    /// `sum_j xi_j^2`.
    pub fn coupling_weight(&self) -> f64 {
        self.modes.iter().map(|m| m.xi * m.xi).sum()
    }

    /// Replaces the couplings while keeping frequencies; used by tests that
    /// need irregular baths.
    pub fn with_couplings(&self, xi: &[f64]) -> Result<Self> {
        if xi.len() != self.modes.len() {
            return Err(Error::ModeCountMismatch {
                expected: self.modes.len(),
                actual: xi.len(),
            });
        }
        if let Some(bad) = xi.iter().find(|x| !(**x >= 0.0 && x.is_finite())) {
            return Err(invalid(
                "xi",
                format!("couplings must be finite and nonnegative, got {bad}"),
            ));
        }
        let modes = self
            .modes
            .iter()
            .zip(xi)
            .map(|(m, &xi)| BathMode { omega: m.omega, xi })
            .collect();
        Ok(Self {
            modes,
            spec: self.spec,
            scheme: self.scheme,
        })
    }

    /// Writes `j,omega_j,xi_j` rows, `j` counted from 1.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "j,omega_j,xi_j")?;
        for (j, m) in self.modes.iter().enumerate() {
            writeln!(w, "{},{},{}", j + 1, m.omega, m.xi)?;
        }
        Ok(())
    }
}

/// Midpoint discretization: `w_j = w_c - delta + (j - 1/2) dw`, `xi_j = sqrt(J(w_j) dw)`.
pub fn discretize_bath(spec: &SpectralDensitySpec, n_modes: usize) -> Result<DiscreteBath> {
    if n_modes == 0 {
        return Err(invalid("n_modes", "must be at least 1"));
    }
    let dw = 2.0 * spec.half_bandwidth / n_modes as f64;
    let lower = spec.band_center - spec.half_bandwidth;
    // Every midpoint lies inside the band, so the coupling is uniform.
    let xi = (spec.level() * dw).sqrt();
    let modes = (1..=n_modes)
        .map(|j| BathMode {
            omega: lower + (j as f64 - 0.5) * dw,
            xi,
        })
        .collect();
    Ok(DiscreteBath {
        modes,
        spec: *spec,
        scheme: DiscretizationScheme::Midpoint,
    })
}

/// Bose-Einstein occupation `1 / (exp(beta omega) - 1)`.
///
/// `beta = +inf` is the zero-temperature limit and gives 0.
pub fn thermal_occupation(beta: f64, omega: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(invalid("omega", format!("must be positive, got {omega}")));
    }
    if beta.is_nan() || beta < 0.0 {
        return Err(invalid("beta", format!("must be nonnegative, got {beta}")));
    }
    if beta == 0.0 {
        return Err(Error::InfiniteOccupation { omega });
    }
    Ok(1.0 / (beta * omega).exp_m1())
}

/// Inverse temperature together with the resonant occupation `n_th` at the
/// system frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalSpec {
    beta: f64,
    omega_b: f64,
    n_th: f64,
}

impl ThermalSpec {
    pub fn new(beta: f64, omega_b: f64) -> Result<Self> {
        let n_th = thermal_occupation(beta, omega_b)?;
        Ok(Self {
            beta,
            omega_b,
            n_th,
        })
    }

    /// Zero temperature (`beta = inf`).
    pub fn zero_temperature(omega_b: f64) -> Result<Self> {
        Self::new(f64::INFINITY, omega_b)
    }

    /// Chooses `beta` so that the resonant occupation equals `n_th`.
    pub fn from_resonant_occupation(n_th: f64, omega_b: f64) -> Result<Self> {
        if !(n_th > 0.0 && n_th.is_finite()) {
            return Err(invalid(
                "n_th",
                format!("must be positive and finite, got {n_th}"),
            ));
        }
        if !(omega_b > 0.0) {
            return Err(invalid(
                "omega_b",
                format!("must be positive, got {omega_b}"),
            ));
        }
        let beta = (1.0 / n_th).ln_1p() / omega_b;
        Self::new(beta, omega_b)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn omega_b(&self) -> f64 {
        self.omega_b
    }

    pub fn n_th(&self) -> f64 {
        self.n_th
    }

    /// Occupation of every bath mode.
    pub fn occupations(&self, bath: &DiscreteBath) -> Result<Vec<f64>> {
        bath.modes()
            .iter()
            .map(|m| thermal_occupation(self.beta, m.omega))
            .collect()
    }
}
