//! Scenario configuration: a TOML document with flat sections, overridden
//! by command-line flags, then validated into a [`ScenarioConfig`].
//!
//! ```toml
//! scenario = "fock-decay"
//!
//! [system]
//! omega_b = 100.0
//!
//! [bath]
//! gamma = 1.0
//! n_modes = 400          # default: 10 modes per gamma across the band
//! half_bandwidth = 20.0  # default: 20 gamma
//! band_center = 100.0    # default: omega_b
//!
//! [thermal]
//! beta = 0.01
//!
//! [initial]
//! fock_n = 2             # or alpha_re / alpha_im
//!
//! [grid]
//! t_max = 5.0
//! n_steps = 100
//!
//! [mc]
//! samples = 10000
//! seed = 42
//!
//! [output]
//! path = "out.csv"
//! format = "csv"
//! ```

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Modes per unit `gamma` used when `n_modes` is not given.
pub const DEFAULT_MODE_DENSITY: f64 = 10.0;
/// Default half-bandwidth in units of `gamma`.
pub const DEFAULT_HALF_BANDWIDTH: f64 = 20.0;
pub const DEFAULT_SAMPLES: usize = 10_000;
/// Bath size used by `oracle-compare` when `n_modes` is not given.
pub const DEFAULT_ORACLE_MODES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    FockDecay,
    CoherentDecay,
    ExcitedBath,
    Thermal,
    WwaValidate,
    OracleCompare,
}

impl Scenario {
    pub const ALL: [Scenario; 6] = [
        Scenario::FockDecay,
        Scenario::CoherentDecay,
        Scenario::ExcitedBath,
        Scenario::Thermal,
        Scenario::WwaValidate,
        Scenario::OracleCompare,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Scenario::FockDecay => "fock-decay",
            Scenario::CoherentDecay => "coherent-decay",
            Scenario::ExcitedBath => "excited-bath",
            Scenario::Thermal => "thermal",
            Scenario::WwaValidate => "wwa-validate",
            Scenario::OracleCompare => "oracle-compare",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scenario {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.as_str() == s)
            .ok_or_else(|| {
                let known: Vec<_> = Scenario::ALL.iter().map(|sc| sc.as_str()).collect();
                CliError::config(format!(
                    "unknown scenario `{s}` (expected one of {})",
                    known.join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(CliError::config(format!(
                "unknown format `{other}` (expected csv or json)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    pub omega_b: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathSection {
    pub gamma: Option<f64>,
    pub n_modes: Option<usize>,
    pub half_bandwidth: Option<f64>,
    pub band_center: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThermalSection {
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    pub fock_n: Option<usize>,
    pub alpha_re: Option<f64>,
    pub alpha_im: Option<f64>,
    /// 1-based index of the bath mode prepared in a coherent state.
    pub lambda_mode: Option<usize>,
    pub lambda_re: Option<f64>,
    pub lambda_im: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub t_max: Option<f64>,
    pub n_steps: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McSection {
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub path: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

/// Raw document as read from disk; every field optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub scenario: Option<String>,
    #[serde(default)]
    pub system: SystemSection,
    #[serde(default)]
    pub bath: BathSection,
    #[serde(default)]
    pub thermal: ThermalSection,
    #[serde(default)]
    pub initial: InitialSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub mc: McSection,
    #[serde(default)]
    pub output: OutputSection,
}

impl ConfigDocument {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::config(e.message().to_string()))
    }
}

/// Flag values; any `Some` replaces the document's value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub scenario: Option<String>,
    pub gamma: Option<f64>,
    pub omega_b: Option<f64>,
    pub n_modes: Option<usize>,
    pub half_bandwidth: Option<f64>,
    pub beta: Option<f64>,
    pub fock_n: Option<usize>,
    pub alpha_re: Option<f64>,
    pub alpha_im: Option<f64>,
    pub t_max: Option<f64>,
    pub n_steps: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

impl Overrides {
    pub fn apply(&self, doc: &mut ConfigDocument) {
        fn set<T: Clone>(slot: &mut Option<T>, value: &Option<T>) {
            if value.is_some() {
                slot.clone_from(value);
            }
        }
        set(&mut doc.scenario, &self.scenario);
        set(&mut doc.bath.gamma, &self.gamma);
        set(&mut doc.system.omega_b, &self.omega_b);
        set(&mut doc.bath.n_modes, &self.n_modes);
        set(&mut doc.bath.half_bandwidth, &self.half_bandwidth);
        set(&mut doc.thermal.beta, &self.beta);
        set(&mut doc.initial.fock_n, &self.fock_n);
        set(&mut doc.initial.alpha_re, &self.alpha_re);
        set(&mut doc.initial.alpha_im, &self.alpha_im);
        set(&mut doc.grid.t_max, &self.t_max);
        set(&mut doc.grid.n_steps, &self.n_steps);
        set(&mut doc.mc.samples, &self.samples);
        set(&mut doc.mc.seed, &self.seed);
        set(&mut doc.output.path, &self.output);
        set(&mut doc.output.format, &self.format);
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialState {
    Fock(usize),
    Coherent { re: f64, im: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathExcitation {
    /// 0-based.
    pub mode: usize,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McSettings {
    pub samples: usize,
    pub seed: u64,
}

/// Fully resolved and validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub omega_b: f64,
    pub gamma: f64,
    pub n_modes: usize,
    pub half_bandwidth: f64,
    pub band_center: f64,
    pub beta: Option<f64>,
    /// Absent only for scenarios that do not evolve a state (`wwa-validate`).
    pub initial: Option<InitialState>,
    pub bath_excitation: Option<BathExcitation>,
    pub t_max: f64,
    pub n_steps: usize,
    pub mc: Option<McSettings>,
    pub output_path: Option<PathBuf>,
    pub format: OutputFormat,
}

fn required<T: Copy>(value: Option<T>, key: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::config(format!("missing required field `{key}`")))
}

fn positive(value: f64, key: &str) -> Result<f64, CliError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(CliError::config(format!(
            "`{key}` must be positive and finite (> 0), got {value}"
        )))
    }
}

fn finite(value: f64, key: &str) -> Result<f64, CliError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(CliError::config(format!(
            "`{key}` must be finite, got {value}"
        )))
    }
}

impl ScenarioConfig {
    pub fn from_toml(text: &str, overrides: &Overrides) -> Result<Self, CliError> {
        let mut doc = ConfigDocument::from_toml(text)?;
        overrides.apply(&mut doc);
        Self::from_document(&doc)
    }

    pub fn from_document(doc: &ConfigDocument) -> Result<Self, CliError> {
        let scenario: Scenario = doc
            .scenario
            .as_deref()
            .ok_or_else(|| CliError::config("missing required field `scenario`"))?
            .parse()?;
        let omega_b = positive(
            required(doc.system.omega_b, "system.omega_b")?,
            "system.omega_b",
        )?;
        let gamma = positive(required(doc.bath.gamma, "bath.gamma")?, "bath.gamma")?;
        let half_bandwidth = positive(
            doc.bath
                .half_bandwidth
                .unwrap_or(DEFAULT_HALF_BANDWIDTH * gamma),
            "bath.half_bandwidth",
        )?;
        let band_center = finite(doc.bath.band_center.unwrap_or(omega_b), "bath.band_center")?;
        if band_center - half_bandwidth <= 0.0 {
            return Err(CliError::config(format!(
                "band must lie above zero frequency: band_center - half_bandwidth = {} (must be > 0)",
                band_center - half_bandwidth
            )));
        }
        let default_modes = match scenario {
            Scenario::OracleCompare => DEFAULT_ORACLE_MODES,
            _ => (DEFAULT_MODE_DENSITY * 2.0 * half_bandwidth / gamma).ceil() as usize,
        };
        let n_modes = doc.bath.n_modes.unwrap_or(default_modes);
        if n_modes == 0 {
            return Err(CliError::config("`bath.n_modes` must be at least 1"));
        }

        let beta = match doc.thermal.beta {
            Some(b) if b.is_nan() || b <= 0.0 => {
                return Err(CliError::config(format!(
                    "`thermal.beta` must be positive (> 0), got {b}"
                )))
            }
            other => other,
        };
        if scenario == Scenario::Thermal && beta.is_none() {
            return Err(CliError::config("thermal requires beta"));
        }

        let init = &doc.initial;
        let has_alpha = init.alpha_re.is_some() || init.alpha_im.is_some();
        let initial = match (init.fock_n, has_alpha) {
            (Some(_), true) => {
                return Err(CliError::config(
                    "`initial.fock_n` and `initial.alpha_*` are mutually exclusive",
                ))
            }
            (Some(n), false) => Some(InitialState::Fock(n)),
            (None, true) => Some(InitialState::Coherent {
                re: finite(init.alpha_re.unwrap_or(0.0), "initial.alpha_re")?,
                im: finite(init.alpha_im.unwrap_or(0.0), "initial.alpha_im")?,
            }),
            (None, false) => None,
        };
        match (scenario, initial) {
            (Scenario::WwaValidate, _) => {}
            (
                Scenario::FockDecay | Scenario::OracleCompare,
                None | Some(InitialState::Coherent { .. }),
            ) => {
                return Err(CliError::config(format!(
                    "{scenario} requires initial.fock_n"
                )))
            }
            (
                Scenario::CoherentDecay | Scenario::ExcitedBath | Scenario::Thermal,
                None | Some(InitialState::Fock(_)),
            ) => {
                return Err(CliError::config(format!(
                    "{scenario} requires initial.alpha_re/alpha_im"
                )))
            }
            _ => {}
        }

        let has_lambda =
            init.lambda_mode.is_some() || init.lambda_re.is_some() || init.lambda_im.is_some();
        let bath_excitation = if has_lambda {
            if scenario != Scenario::ExcitedBath {
                return Err(CliError::config(
                    "`initial.lambda_*` only applies to excited-bath",
                ));
            }
            let mode = required(init.lambda_mode, "initial.lambda_mode")?;
            if !(1..=n_modes).contains(&mode) {
                return Err(CliError::config(format!(
                    "`initial.lambda_mode` must lie in 1..={n_modes}, got {mode}"
                )));
            }
            Some(BathExcitation {
                mode: mode - 1,
                re: finite(init.lambda_re.unwrap_or(0.0), "initial.lambda_re")?,
                im: finite(init.lambda_im.unwrap_or(0.0), "initial.lambda_im")?,
            })
        } else {
            None
        };

        let t_max = positive(required(doc.grid.t_max, "grid.t_max")?, "grid.t_max")?;
        let n_steps = required(doc.grid.n_steps, "grid.n_steps")?;
        if n_steps < 2 {
            return Err(CliError::config(format!(
                "`grid.n_steps` must be at least 2, got {n_steps}"
            )));
        }

        let mc = match (doc.mc.samples, doc.mc.seed) {
            (_, Some(seed)) => {
                let samples = doc.mc.samples.unwrap_or(DEFAULT_SAMPLES);
                if samples == 0 {
                    return Err(CliError::config("`mc.samples` must be at least 1"));
                }
                Some(McSettings { samples, seed })
            }
            (Some(_), None) => return Err(CliError::config("mc requires seed")),
            (None, None) => None,
        };
        if scenario == Scenario::Thermal && mc.is_none() {
            return Err(CliError::config("thermal requires mc.seed"));
        }

        Ok(ScenarioConfig {
            scenario,
            omega_b,
            gamma,
            n_modes,
            half_bandwidth,
            band_center,
            beta,
            initial,
            bath_excitation,
            t_max,
            n_steps,
            mc,
            output_path: doc.output.path.clone(),
            format: doc.output.format.unwrap_or_default(),
        })
    }

    /// Effective configuration with every default filled in.
    pub fn to_document(&self) -> ConfigDocument {
        let (fock_n, alpha_re, alpha_im) = match self.initial {
            Some(InitialState::Fock(n)) => (Some(n), None, None),
            Some(InitialState::Coherent { re, im }) => (None, Some(re), Some(im)),
            None => (None, None, None),
        };
        ConfigDocument {
            scenario: Some(self.scenario.as_str().to_string()),
            system: SystemSection {
                omega_b: Some(self.omega_b),
            },
            bath: BathSection {
                gamma: Some(self.gamma),
                n_modes: Some(self.n_modes),
                half_bandwidth: Some(self.half_bandwidth),
                band_center: Some(self.band_center),
            },
            thermal: ThermalSection { beta: self.beta },
            initial: InitialSection {
                fock_n,
                alpha_re,
                alpha_im,
                lambda_mode: self.bath_excitation.map(|e| e.mode + 1),
                lambda_re: self.bath_excitation.map(|e| e.re),
                lambda_im: self.bath_excitation.map(|e| e.im),
            },
            grid: GridSection {
                t_max: Some(self.t_max),
                n_steps: Some(self.n_steps),
            },
            mc: McSection {
                samples: self.mc.map(|m| m.samples),
                seed: self.mc.map(|m| m.seed),
            },
            output: OutputSection {
                path: self.output_path.clone(),
                format: Some(self.format),
            },
        }
    }

    /// `n_steps` evenly spaced times on `[0, t_max]`.
    pub fn times(&self) -> Vec<f64> {
        boson_decay_core::analysis::linspace(0.0, self.t_max, self.n_steps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
scenario = "fock-decay"
[system]
omega_b = 100.0
[bath]
gamma = 1.0
[initial]
fock_n = 2
[grid]
t_max = 5.0
n_steps = 100
"#;

    fn parse(text: &str) -> Result<ScenarioConfig, CliError> {
        ScenarioConfig::from_toml(text, &Overrides::default())
    }

    fn message(text: &str) -> String {
        parse(text).unwrap_err().to_string()
    }

    #[test]
    fn minimal_config_gets_defaults() {
        let c = parse(MINIMAL).unwrap();
        assert_eq!(c.scenario, Scenario::FockDecay);
        assert_eq!(c.initial, Some(InitialState::Fock(2)));
        assert_eq!(
            (c.half_bandwidth, c.band_center, c.n_modes),
            (20.0, 100.0, 400)
        );
        assert_eq!(c.format, OutputFormat::Csv);
        assert_eq!(c.times().len(), 100);
    }

    #[test]
    fn unknown_key_is_named() {
        let text = MINIMAL.replace("gamma = 1.0", "gamma = 1.0\ngama = 2.0");
        assert!(message(&text).contains("gama"));
        let text = format!("{MINIMAL}\n[extra]\nx = 1\n");
        assert!(message(&text).contains("extra"));
    }

    #[test]
    fn range_errors_carry_bounds() {
        assert!(message(&MINIMAL.replace("n_steps = 100", "n_steps = 1")).contains("at least 2"));
        assert!(message(&MINIMAL.replace("t_max = 5.0", "t_max = 0.0")).contains("> 0"));
        assert!(message(&MINIMAL.replace("gamma = 1.0", "gamma = -1.0")).contains("bath.gamma"));
        let low = MINIMAL.replace("omega_b = 100.0", "omega_b = 10.0");
        assert!(message(&low).contains("above zero frequency"));
    }

    #[test]
    fn missing_fields_are_named() {
        assert!(message(&MINIMAL.replace("omega_b = 100.0", "")).contains("system.omega_b"));
        assert!(message(&MINIMAL.replace("scenario = \"fock-decay\"", "")).contains("scenario"));
        assert!(
            message(&MINIMAL.replace("scenario = \"fock-decay\"", "scenario = \"nope\""))
                .contains("nope")
        );
        assert!(message(&MINIMAL.replace("fock_n = 2", "")).contains("requires initial.fock_n"));
        let validate = MINIMAL
            .replace("fock-decay", "wwa-validate")
            .replace("fock_n = 2", "");
        assert_eq!(parse(&validate).unwrap().initial, None);
    }

    #[test]
    fn thermal_requires_beta() {
        let text = MINIMAL
            .replace("fock-decay", "thermal")
            .replace("fock_n = 2", "alpha_re = 1.0")
            .replace("[grid]", "[mc]\nseed = 1\n[grid]");
        assert_eq!(message(&text), "configuration error: thermal requires beta");
        let with_beta = text.replace("[mc]", "[thermal]\nbeta = 0.01\n[mc]");
        let c = parse(&with_beta).unwrap();
        assert_eq!(
            c.mc,
            Some(McSettings {
                samples: DEFAULT_SAMPLES,
                seed: 1
            })
        );
        let no_seed = with_beta.replace("[mc]\nseed = 1\n", "");
        assert!(message(&no_seed).contains("thermal requires mc.seed"));
    }

    #[test]
    fn scenario_initial_state_pairing() {
        let text = MINIMAL.replace("fock_n = 2", "alpha_re = 1.0");
        assert!(message(&text).contains("requires initial.fock_n"));
        let text = MINIMAL.replace("fock_n = 2", "fock_n = 2\nalpha_im = 1.0");
        assert!(message(&text).contains("mutually exclusive"));
        let text = MINIMAL.replace("fock_n = 2", "fock_n = 2\nlambda_mode = 1");
        assert!(message(&text).contains("excited-bath"));
    }

    #[test]
    fn flags_override_file() {
        let overrides = Overrides {
            gamma: Some(2.0),
            n_steps: Some(7),
            format: Some(OutputFormat::Json),
            ..Overrides::default()
        };
        let c = ScenarioConfig::from_toml(MINIMAL, &overrides).unwrap();
        assert_eq!((c.gamma, c.n_steps, c.format), (2.0, 7, OutputFormat::Json));
        assert_eq!(c.half_bandwidth, 40.0);
    }

    #[test]
    fn effective_document_round_trips() {
        let text = r#"
scenario = "excited-bath"
[system]
omega_b = 30.0
[bath]
gamma = 0.5
n_modes = 17
[initial]
alpha_re = 0.25
alpha_im = -1.5
lambda_mode = 4
lambda_im = 0.1
[grid]
t_max = 2.0
n_steps = 3
[mc]
seed = 9
[output]
path = "x.json"
format = "json"
"#;
        let c = parse(text).unwrap();
        let doc = c.to_document();
        assert_eq!(ScenarioConfig::from_document(&doc).unwrap(), c);
        let echoed = toml::to_string(&doc).unwrap();
        assert_eq!(parse(&echoed).unwrap(), c);
        let json = serde_json::to_string(&doc).unwrap();
        let back: ConfigDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(back, doc);
    }
}
