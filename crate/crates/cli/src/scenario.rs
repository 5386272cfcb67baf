//! Scenario execution. Each scenario turns a validated configuration into
//! a [`Table`] on the configured time grid.

use std::time::Instant;

use rayon::prelude::*;

use boson_decay_core::decay::{coherent_decay, excited_bath_evolution, fock_populations};
use boson_decay_core::montecarlo::{
    gaussian_moment_oracle, mc_reduced_moments_series, ThermalSampleSet,
};
use boson_decay_core::propagator::{
    analytic_u, closed_form_dissipation, dissipation_sum, unitarity_defect,
};
use boson_decay_core::spectral::discretize_bath;
use boson_decay_core::thermal::{
    exact_fock_mean_number, fock_divergence_slope, heff_evolve_coherent, heff_fock_mean_number,
    paper_mean_number_t, phi_closed, phi_discrete,
};
use boson_decay_core::{
    DiscreteBath, EffectiveHamiltonian, ExactPropagator, FockOracle, OpenSystemState,
    SpectralDensitySpec, SystemMode, ThermalSpec, C64,
};

use crate::config::{InitialState, Scenario, ScenarioConfig};
use crate::error::CliError;
use crate::report::{Meta, RunReport, Table};

/// Tolerance reported by `wwa-validate`.
pub const WWA_TOLERANCE: f64 = 2e-2;

pub const THERMAL_COLUMNS: [&str; 8] = [
    "t",
    "phi_discrete",
    "phi_closed",
    "paper_mean_number",
    "heff_mean_number",
    "oracle_occupation",
    "mc_occupation",
    "mc_stderr",
];

struct Context<'a> {
    config: &'a ScenarioConfig,
    scenario: &'static str,
    times: Vec<f64>,
}

impl Context<'_> {
    fn model<T>(&self, r: boson_decay_core::Result<T>) -> Result<T, CliError> {
        r.map_err(|source| CliError::Model {
            scenario: self.scenario,
            source,
        })
    }

    fn system(&self) -> Result<SystemMode, CliError> {
        self.model(SystemMode::new(self.config.omega_b))
    }

    fn bath(&self) -> Result<DiscreteBath, CliError> {
        let c = self.config;
        let spec = self.model(SpectralDensitySpec::new(
            c.gamma,
            c.band_center,
            c.half_bandwidth,
        ))?;
        self.model(discretize_bath(&spec, c.n_modes))
    }

    fn alpha(&self) -> C64 {
        match self.config.initial {
            Some(InitialState::Coherent { re, im }) => C64::new(re, im),
            _ => C64::new(0.0, 0.0),
        }
    }

    fn fock_n(&self) -> usize {
        match self.config.initial {
            Some(InitialState::Fock(n)) => n,
            _ => 0,
        }
    }

    fn thermal(&self) -> Result<ThermalSpec, CliError> {
        match self.config.beta {
            Some(beta) => self.model(ThermalSpec::new(beta, self.config.omega_b)),
            None => self.model(ThermalSpec::zero_temperature(self.config.omega_b)),
        }
    }
}

/// Runs the configured scenario on the current rayon pool.
pub fn run_scenario(config: &ScenarioConfig) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let ctx = Context {
        config,
        scenario: config.scenario.as_str(),
        times: config.times(),
    };
    let (table, summary) = match config.scenario {
        Scenario::FockDecay => (fock_decay(&ctx)?, None),
        Scenario::CoherentDecay => (coherent(&ctx)?, None),
        Scenario::ExcitedBath => (excited_bath(&ctx)?, None),
        Scenario::Thermal => (thermal(&ctx)?, None),
        Scenario::WwaValidate => wwa_validate(&ctx)?,
        Scenario::OracleCompare => oracle_compare(&ctx)?,
    };
    let meta = Meta {
        scenario: ctx.scenario.to_string(),
        config: config.to_document(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        core_version: boson_decay_core::VERSION.to_string(),
        seed: config.mc.map(|m| m.seed),
        threads: rayon::current_num_threads(),
        rows: table.rows.len(),
        summary,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
    };
    Ok(RunReport { table, meta })
}

/// Runs on a dedicated pool of `threads` workers; `0` uses the global pool.
pub fn run_with_thread_cap(config: &ScenarioConfig, threads: usize) -> Result<RunReport, CliError> {
    if threads == 0 {
        return run_scenario(config);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::config(format!("cannot build thread pool: {e}")))?;
    pool.install(|| run_scenario(config))
}

fn fock_decay(ctx: &Context) -> Result<Table, CliError> {
    let n = ctx.fock_n();
    let mut table =
        Table::new(std::iter::once("t".to_string()).chain((0..=n).map(|m| format!("P_{m}"))));
    for &t in &ctx.times {
        let survival = (-ctx.config.gamma * t).exp();
        let dist = ctx.model(fock_populations(n, survival, t))?;
        table.push(std::iter::once(t).chain(dist.probs).collect());
    }
    Ok(table)
}

fn coherent(ctx: &Context) -> Result<Table, CliError> {
    let system = ctx.system()?;
    let exact = ctx.model(ExactPropagator::new(&system, &ctx.bath()?))?;
    let alpha = ctx.alpha();
    let mut table = Table::new([
        "t",
        "mean_number",
        "re_label",
        "im_label",
        "oracle_mean_number",
    ]);
    for &t in &ctx.times {
        let decay = ctx.model(coherent_decay(
            alpha,
            analytic_u(&system, ctx.config.gamma, t),
        ))?;
        let oracle = alpha.norm_sqr() * exact.survival(t);
        table.push(vec![
            t,
            decay.mean_number,
            decay.label.re,
            decay.label.im,
            oracle,
        ]);
    }
    Ok(table)
}

fn excited_bath(ctx: &Context) -> Result<Table, CliError> {
    let system = ctx.system()?;
    let bath = ctx.bath()?;
    let exact = ctx.model(ExactPropagator::new(&system, &bath))?;
    let alpha = ctx.alpha();
    let mut lambdas = vec![C64::new(0.0, 0.0); bath.len()];
    if let Some(e) = ctx.config.bath_excitation {
        lambdas[e.mode] = C64::new(e.re, e.im);
    }
    let rows = ctx
        .times
        .par_iter()
        .map(|&t| {
            let coeffs = exact.coefficients_with_cross(t);
            let labels = ctx.model(excited_bath_evolution(alpha, &lambdas, &coeffs))?;
            let bath_norm: f64 = labels.mu_bath.iter().map(|m| m.norm_sqr()).sum();
            Ok(vec![
                t,
                labels.mu.re,
                labels.mu.im,
                labels.mu.norm_sqr(),
                bath_norm,
                labels.norm_sqr(),
            ])
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut table = Table::new([
        "t",
        "re_mu",
        "im_mu",
        "abs_mu_sq",
        "bath_label_norm_sq",
        "total_label_norm_sq",
    ]);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

fn thermal(ctx: &Context) -> Result<Table, CliError> {
    let c = ctx.config;
    let system = ctx.system()?;
    let bath = ctx.bath()?;
    let spec = ctx.thermal()?;
    let exact = ctx.model(ExactPropagator::new(&system, &bath))?;
    let coeffs: Vec<_> = ctx
        .times
        .par_iter()
        .map(|t| exact.coefficients(*t))
        .collect();
    let occupations = ctx.model(spec.occupations(&bath))?;
    let mc = c.mc.expect("validated: thermal has mc settings");
    let samples = ctx.model(ThermalSampleSet::new(
        occupations.clone(),
        mc.samples,
        mc.seed,
    ))?;
    let alpha = ctx.alpha();
    let estimates = ctx.model(mc_reduced_moments_series(alpha, &coeffs, &samples))?;
    let heff = ctx.model(EffectiveHamiltonian::from_thermal(&system, c.gamma, &spec))?;

    let mut table = Table::new(THERMAL_COLUMNS);
    for (coeff, est) in coeffs.iter().zip(&estimates) {
        let t = coeff.t;
        let discrete = ctx.model(phi_discrete(&bath, &spec, coeff))?;
        let closed = ctx.model(phi_closed(spec.n_th(), c.gamma, t))?;
        let conditional = ctx.model(paper_mean_number_t(alpha, coeff.u, &discrete))?;
        let effective = ctx.model(heff_evolve_coherent(&heff, alpha, t))?;
        let oracle = ctx.model(gaussian_moment_oracle(alpha, &occupations, coeff))?;
        table.push(vec![
            t,
            discrete.value,
            closed.value,
            conditional,
            effective.mean_number,
            oracle.occupation,
            est.moments.occupation,
            est.stderr_occupation,
        ]);
    }
    Ok(table)
}

fn wwa_validate(ctx: &Context) -> Result<(Table, Option<String>), CliError> {
    let gamma = ctx.config.gamma;
    let exact = ctx.model(ExactPropagator::new(&ctx.system()?, &ctx.bath()?))?;
    let rows: Vec<Vec<f64>> = ctx
        .times
        .par_iter()
        .map(|&t| {
            let c = exact.coefficients(t);
            vec![
                t,
                c.u.re,
                c.u.im,
                c.survival(),
                dissipation_sum(&c),
                unitarity_defect(&c),
            ]
        })
        .collect();
    let mut worst_survival = 0.0f64;
    let mut worst_dissipation = 0.0f64;
    for r in &rows {
        worst_survival = worst_survival.max((r[3] - (-gamma * r[0]).exp()).abs());
        worst_dissipation =
            worst_dissipation.max((r[4] - closed_form_dissipation(gamma, r[0])).abs());
    }
    let status = if worst_survival.max(worst_dissipation) <= WWA_TOLERANCE {
        "PASS"
    } else {
        "FAIL"
    };
    let summary = format!(
        "wwa-validate: max_abs_survival_deviation={worst_survival:e} \
         max_abs_dissipation_deviation={worst_dissipation:e} tolerance={WWA_TOLERANCE:e} status={status}"
    );
    let mut table = Table::new([
        "t",
        "re_u",
        "im_u",
        "abs_u_sq",
        "sum_abs_v_sq",
        "unitarity_defect",
    ]);
    rows.into_iter().for_each(|r| table.push(r));
    Ok((table, Some(summary)))
}

fn oracle_compare(ctx: &Context) -> Result<(Table, Option<String>), CliError> {
    let gamma = ctx.config.gamma;
    let n = ctx.fock_n();
    let system = ctx.system()?;
    let bath = ctx.bath()?;
    let exact = ctx.model(ExactPropagator::new(&system, &bath))?;
    let oracle = ctx.model(FockOracle::new(&system, &bath, n))?;
    let states = ctx.model(oracle.reduced_states(&OpenSystemState::Fock(n), &ctx.times))?;
    let n_th = ctx.thermal()?.n_th();

    let mut table = Table::new([
        "t",
        "max_population_deviation",
        "paper_mean_number",
        "exact_mean_number",
        "divergence",
    ]);
    let mut worst = 0.0f64;
    for (&t, rho) in ctx.times.iter().zip(&states) {
        let binomial = ctx.model(fock_populations(n, exact.survival(t), t))?;
        let deviation = rho
            .populations()
            .iter()
            .zip(&binomial.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        worst = worst.max(deviation);
        let conditional = heff_fock_mean_number(n, n_th, gamma, t);
        let exact_mean = exact_fock_mean_number(n, n_th, gamma, t);
        table.push(vec![
            t,
            deviation,
            conditional,
            exact_mean,
            exact_mean - conditional,
        ]);
    }
    let first = &table.rows[1];
    let summary = format!(
        "oracle-compare: max_population_deviation={worst:e} initial_divergence_slope={:e} \
         first_order_slope={:e}",
        first[4] / first[0],
        fock_divergence_slope(n, n_th, gamma)
    );
    Ok((table, Some(summary)))
}
