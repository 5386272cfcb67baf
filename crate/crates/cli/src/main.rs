use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use boson_decay::{
    run_with_thread_cap, thread_cap_from_env, CliError, ConfigDocument, OutputFormat, Overrides,
    ScenarioConfig,
};

/// Runs a boson-bath decay scenario and writes its time trace.
///
/// Flags override values from `--config`. Worker threads are capped by
/// BOSON_DECAY_THREADS (0 or unset: all cores).
#[derive(Debug, Parser)]
#[command(name = "boson-decay", version)]
struct Args {
    /// TOML scenario file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// fock-decay | coherent-decay | excited-bath | thermal | wwa-validate | oracle-compare
    #[arg(long)]
    scenario: Option<String>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    omega_b: Option<f64>,
    #[arg(long)]
    n_modes: Option<usize>,
    #[arg(long)]
    half_bandwidth: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    fock_n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    alpha_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha_im: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    n_steps: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// csv | json
    #[arg(long)]
    format: Option<String>,
}

impl Args {
    fn overrides(&self) -> Result<Overrides, CliError> {
        Ok(Overrides {
            scenario: self.scenario.clone(),
            gamma: self.gamma,
            omega_b: self.omega_b,
            n_modes: self.n_modes,
            half_bandwidth: self.half_bandwidth,
            beta: self.beta,
            fock_n: self.fock_n,
            alpha_re: self.alpha_re,
            alpha_im: self.alpha_im,
            t_max: self.t_max,
            n_steps: self.n_steps,
            samples: self.samples,
            seed: self.seed,
            output: self.output.clone(),
            format: self
                .format
                .as_deref()
                .map(str::parse::<OutputFormat>)
                .transpose()?,
        })
    }
}

fn run(args: &Args) -> Result<(), CliError> {
    let mut doc = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            ConfigDocument::from_toml(&text)?
        }
        None => ConfigDocument::default(),
    };
    args.overrides()?.apply(&mut doc);
    let config = ScenarioConfig::from_document(&doc)?;
    let report = run_with_thread_cap(&config, thread_cap_from_env()?)?;
    match &config.output_path {
        Some(path) => {
            report.emit(path, config.format)?;
            if let Some(summary) = &report.meta.summary {
                println!("{summary}");
            }
        }
        None => {
            report.emit_stdout(config.format)?;
            if let Some(summary) = &report.meta.summary {
                eprintln!("{summary}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or_default();
            let err = CliError::config(first.trim_start_matches("error: "));
            eprintln!("{}", err.to_record());
            return ExitCode::from(2);
        }
    };
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_record());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
