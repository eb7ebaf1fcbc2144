//! Experiment configuration: defaults, config-file parsing, flag overrides,
//! and the metadata header embedded in every output.
//!
//! Configs are flat `key = value` text (one pair per line, `#` comments).
//! Command-line flags use the same keys and win over the file. The resolved
//! configuration is written as `# key = value` lines at the top of every
//! output, so any artifact can be regenerated from its own header.

use std::f64::consts::FRAC_PI_4;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use qkml::qkernel::KernelKind;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Profile,
    Mqspec,
    Regress,
    Classify,
    Gram,
}

impl CommandKind {
    pub fn name(&self) -> &'static str {
        match self {
            CommandKind::Profile => "profile",
            CommandKind::Mqspec => "mqspec",
            CommandKind::Regress => "regress",
            CommandKind::Classify => "classify",
            CommandKind::Gram => "gram",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Units {
    Degrees,
    Radians,
}

impl Units {
    pub fn name(&self) -> &'static str {
        match self {
            Units::Degrees => "degrees",
            Units::Radians => "radians",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    Grid,
    Union,
}

impl EvalMode {
    pub fn name(&self) -> &'static str {
        match self {
            EvalMode::Grid => "grid",
            EvalMode::Union => "union",
        }
    }
}

/// Unresolved configuration: file values and flag values before defaults.
#[derive(Debug, Default, Clone)]
pub struct RawConfig {
    pub spins: Option<usize>,
    pub tau: Option<Vec<f64>>,
    pub dt: Option<f64>,
    pub seed: Option<u64>,
    pub task: Option<String>,
    pub kernel: Option<String>,
    pub units: Option<String>,
    pub count: Option<usize>,
    pub noise: Option<f64>,
    pub factor: Option<f64>,
    pub halfwidth: Option<f64>,
    pub eval_count: Option<usize>,
    pub eval_mode: Option<String>,
    pub range_min: Option<f64>,
    pub range_max: Option<f64>,
    pub lambda_min: Option<f64>,
    pub lambda_max: Option<f64>,
    pub lambda_count: Option<usize>,
    pub c_cap: Option<f64>,
    pub svm_tol: Option<f64>,
    pub grid_res: Option<usize>,
    pub profile_points: Option<usize>,
    pub mq_samples: Option<usize>,
    pub fast_1d: Option<bool>,
    pub trace_cap: Option<usize>,
    pub threads: Option<usize>,
    pub data: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub report: Option<PathBuf>,
}

fn parse<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    v.parse::<T>()
        .map_err(|e| CliError::config(format!("bad value '{v}' for key '{key}': {e}")))
}

impl RawConfig {
    /// Parse a flat key-value config file.
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_str(&text)
    }

    pub fn from_str(text: &str) -> Result<Self, CliError> {
        let mut raw = RawConfig::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::config(format!("config line {} is not 'key = value'", lineno + 1))
            })?;
            raw.set(key.trim(), value.trim())?;
        }
        Ok(raw)
    }

    fn set(&mut self, key: &str, v: &str) -> Result<(), CliError> {
        match key {
            "command" => {} // informational in round-tripped headers
            "spins" => self.spins = Some(parse(key, v)?),
            "tau" => {
                let taus = v
                    .split(',')
                    .map(|s| parse::<f64>(key, s.trim()))
                    .collect::<Result<Vec<f64>, _>>()?;
                self.tau = Some(taus);
            }
            "dt" => self.dt = Some(parse(key, v)?),
            "seed" => self.seed = Some(parse(key, v)?),
            "task" => self.task = Some(v.to_string()),
            "kernel" => self.kernel = Some(v.to_string()),
            "units" => self.units = Some(v.to_string()),
            "count" => self.count = Some(parse(key, v)?),
            "noise" => self.noise = Some(parse(key, v)?),
            "factor" => self.factor = Some(parse(key, v)?),
            "halfwidth" => self.halfwidth = Some(parse(key, v)?),
            "eval_count" => self.eval_count = Some(parse(key, v)?),
            "eval_mode" => self.eval_mode = Some(v.to_string()),
            "range_min" => self.range_min = Some(parse(key, v)?),
            "range_max" => self.range_max = Some(parse(key, v)?),
            "lambda_min" => self.lambda_min = Some(parse(key, v)?),
            "lambda_max" => self.lambda_max = Some(parse(key, v)?),
            "lambda_count" => self.lambda_count = Some(parse(key, v)?),
            "c_cap" => self.c_cap = Some(parse(key, v)?),
            "svm_tol" => self.svm_tol = Some(parse(key, v)?),
            "grid_res" => self.grid_res = Some(parse(key, v)?),
            "profile_points" => self.profile_points = Some(parse(key, v)?),
            "mq_samples" => self.mq_samples = Some(parse(key, v)?),
            "fast_1d" => self.fast_1d = Some(parse(key, v)?),
            "trace_cap" => self.trace_cap = Some(parse(key, v)?),
            "threads" => self.threads = Some(parse(key, v)?),
            "data" => self.data = Some(PathBuf::from(v)),
            "out" => self.out = Some(PathBuf::from(v)),
            "report" => self.report = Some(PathBuf::from(v)),
            other => {
                return Err(CliError::config(format!("unknown config key '{other}'")));
            }
        }
        Ok(())
    }

    /// Overlay: any field set in `flags` replaces the file value.
    pub fn overlay(mut self, flags: RawConfig) -> Self {
        macro_rules! take {
            ($f:ident) => {
                if flags.$f.is_some() {
                    self.$f = flags.$f;
                }
            };
        }
        take!(spins);
        take!(tau);
        take!(dt);
        take!(seed);
        take!(task);
        take!(kernel);
        take!(units);
        take!(count);
        take!(noise);
        take!(factor);
        take!(halfwidth);
        take!(eval_count);
        take!(eval_mode);
        take!(range_min);
        take!(range_max);
        take!(lambda_min);
        take!(lambda_max);
        take!(lambda_count);
        take!(c_cap);
        take!(svm_tol);
        take!(grid_res);
        take!(profile_points);
        take!(mq_samples);
        take!(fast_1d);
        take!(trace_cap);
        take!(threads);
        take!(data);
        take!(out);
        take!(report);
        self
    }

    /// Apply defaults and validate for the given command.
    pub fn resolve(self, command: CommandKind) -> Result<ExperimentConfig, CliError> {
        let spins = self.spins.unwrap_or(12);
        let taus = self.tau.unwrap_or_else(|| vec![0.06]);
        let dt = self.dt.unwrap_or(1e-3);
        let seed = self.seed.unwrap_or(42);
        let task = self.task.unwrap_or_else(|| {
            match command {
                CommandKind::Classify => "circles",
                _ => "sin",
            }
            .to_string()
        });
        let kernel = match self.kernel.as_deref().unwrap_or("pure") {
            "pure" => KernelKind::Pure,
            "trace" => KernelKind::Trace,
            other => {
                return Err(CliError::config(format!(
                    "kernel must be 'pure' or 'trace', got '{other}'"
                )))
            }
        };
        let default_units = match command {
            CommandKind::Regress => "degrees",
            _ => "radians",
        };
        let units = match self.units.as_deref().unwrap_or(default_units) {
            "degrees" => Units::Degrees,
            "radians" => Units::Radians,
            other => {
                return Err(CliError::config(format!(
                    "units must be 'degrees' or 'radians', got '{other}'"
                )))
            }
        };
        let eval_mode = match self.eval_mode.as_deref().unwrap_or("grid") {
            "grid" => EvalMode::Grid,
            "union" => EvalMode::Union,
            other => {
                return Err(CliError::config(format!(
                    "eval_mode must be 'grid' or 'union', got '{other}'"
                )))
            }
        };
        let count = self.count.unwrap_or(match command {
            CommandKind::Classify => 100,
            _ => 40,
        });
        let config = ExperimentConfig {
            command,
            spins,
            taus,
            dt,
            seed,
            task,
            kernel,
            units,
            count,
            noise: self.noise.unwrap_or(0.08),
            factor: self.factor.unwrap_or(0.5),
            halfwidth: self.halfwidth.unwrap_or(FRAC_PI_4),
            eval_count: self.eval_count.unwrap_or(64),
            eval_mode,
            range_min: self.range_min.unwrap_or(-45.0),
            range_max: self.range_max.unwrap_or(45.0),
            lambda_min: self.lambda_min.unwrap_or(1e-8),
            lambda_max: self.lambda_max.unwrap_or(1.0),
            lambda_count: self.lambda_count.unwrap_or(17),
            c_cap: self.c_cap.unwrap_or(1e6),
            svm_tol: self.svm_tol.unwrap_or(1e-6),
            grid_res: self.grid_res.unwrap_or(50),
            profile_points: self.profile_points.unwrap_or(181),
            mq_samples: self.mq_samples.unwrap_or(256),
            fast_1d: self.fast_1d.unwrap_or(false),
            trace_cap: self.trace_cap.unwrap_or(12),
            threads: self.threads.unwrap_or(0),
            data: self.data,
            out: self
                .out
                .ok_or_else(|| CliError::config("missing required output path (--out)"))?,
            report: self.report,
        };
        config.validate()?;
        Ok(config)
    }
}

/// Fully resolved configuration; everything a command needs, and everything
/// its outputs echo.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub command: CommandKind,
    pub spins: usize,
    pub taus: Vec<f64>,
    pub dt: f64,
    pub seed: u64,
    pub task: String,
    pub kernel: KernelKind,
    pub units: Units,
    pub count: usize,
    pub noise: f64,
    pub factor: f64,
    pub halfwidth: f64,
    pub eval_count: usize,
    pub eval_mode: EvalMode,
    pub range_min: f64,
    pub range_max: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub lambda_count: usize,
    pub c_cap: f64,
    pub svm_tol: f64,
    pub grid_res: usize,
    pub profile_points: usize,
    pub mq_samples: usize,
    pub fast_1d: bool,
    pub trace_cap: usize,
    pub threads: usize,
    pub data: Option<PathBuf>,
    pub out: PathBuf,
    pub report: Option<PathBuf>,
}

impl ExperimentConfig {
    fn validate(&self) -> Result<(), CliError> {
        if self.spins == 0 {
            return Err(CliError::config("spins must be >= 1"));
        }
        if self.taus.is_empty() {
            return Err(CliError::config("at least one tau is required"));
        }
        if self.taus.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err(CliError::config("tau values must be finite and >= 0"));
        }
        if self.dt.is_nan() || self.dt <= 0.0 {
            return Err(CliError::config("dt must be > 0"));
        }
        match self.command {
            CommandKind::Regress => {
                if self.task != "sin" && self.task != "sinc" {
                    return Err(CliError::config(format!(
                        "regress task must be 'sin' or 'sinc', got '{}'",
                        self.task
                    )));
                }
                if self.range_min.is_nan() || self.range_max.is_nan() || self.range_min >= self.range_max {
                    return Err(CliError::config("empty sampling range"));
                }
                if self.eval_count < 2 {
                    return Err(CliError::config("eval_count must be >= 2"));
                }
                if self.lambda_count == 0
                    || self.lambda_min.is_nan()
                    || self.lambda_min <= 0.0
                    || self.lambda_max < self.lambda_min
                {
                    return Err(CliError::config("bad regularization grid"));
                }
            }
            CommandKind::Classify => {
                if self.task != "circles" && self.task != "moons" {
                    return Err(CliError::config(format!(
                        "classify task must be 'circles' or 'moons', got '{}'",
                        self.task
                    )));
                }
                if self.units == Units::Degrees {
                    return Err(CliError::config(
                        "degrees apply only to 1D regression inputs",
                    ));
                }
                if self.grid_res < 2 {
                    return Err(CliError::config("grid_res must be >= 2"));
                }
            }
            CommandKind::Gram => {
                if self.data.is_none() {
                    return Err(CliError::config("gram needs an input dataset (--data)"));
                }
                if self.taus.len() != 1 {
                    return Err(CliError::config("gram takes exactly one tau"));
                }
            }
            CommandKind::Profile | CommandKind::Mqspec => {
                if self.profile_points < 2 {
                    return Err(CliError::config("profile_points must be >= 2"));
                }
                if self.mq_samples < 2 * self.spins + 1 {
                    return Err(CliError::config(format!(
                        "mq_samples must be at least 2*spins+1 = {}",
                        2 * self.spins + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// Ordered `key = value` pairs for this command's outputs. Feeding them
    /// back as a config file reproduces the run.
    pub fn header_pairs(&self) -> Vec<(String, String)> {
        let mut pairs: Vec<(String, String)> = vec![
            ("command".into(), self.command.name().into()),
            ("spins".into(), self.spins.to_string()),
            (
                "tau".into(),
                self.taus
                    .iter()
                    .map(|t| t.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            ("dt".into(), self.dt.to_string()),
            ("seed".into(), self.seed.to_string()),
            ("kernel".into(), self.kernel.to_string()),
            ("threads".into(), self.threads.to_string()),
        ];
        match self.command {
            CommandKind::Profile => {
                pairs.push(("profile_points".into(), self.profile_points.to_string()));
            }
            CommandKind::Mqspec => {
                pairs.push(("mq_samples".into(), self.mq_samples.to_string()));
            }
            CommandKind::Regress => {
                pairs.extend([
                    ("task".into(), self.task.clone()),
                    ("units".into(), self.units.name().into()),
                    ("count".into(), self.count.to_string()),
                    ("range_min".into(), self.range_min.to_string()),
                    ("range_max".into(), self.range_max.to_string()),
                    ("eval_count".into(), self.eval_count.to_string()),
                    ("eval_mode".into(), self.eval_mode.name().into()),
                    ("lambda_min".into(), self.lambda_min.to_string()),
                    ("lambda_max".into(), self.lambda_max.to_string()),
                    ("lambda_count".into(), self.lambda_count.to_string()),
                    ("fast_1d".into(), self.fast_1d.to_string()),
                    ("trace_cap".into(), self.trace_cap.to_string()),
                ]);
            }
            CommandKind::Classify => {
                pairs.extend([
                    ("task".into(), self.task.clone()),
                    ("count".into(), self.count.to_string()),
                    ("noise".into(), self.noise.to_string()),
                    ("factor".into(), self.factor.to_string()),
                    ("halfwidth".into(), self.halfwidth.to_string()),
                    ("c_cap".into(), self.c_cap.to_string()),
                    ("svm_tol".into(), self.svm_tol.to_string()),
                    ("grid_res".into(), self.grid_res.to_string()),
                    ("trace_cap".into(), self.trace_cap.to_string()),
                ]);
            }
            CommandKind::Gram => {
                pairs.extend([
                    ("units".into(), self.units.name().into()),
                    ("fast_1d".into(), self.fast_1d.to_string()),
                    ("trace_cap".into(), self.trace_cap.to_string()),
                    (
                        "data".into(),
                        self.data
                            .as_ref()
                            .map(|p| p.display().to_string())
                            .unwrap_or_default(),
                    ),
                ]);
            }
        }
        pairs
    }

    pub fn header_block(&self) -> String {
        let mut s = String::new();
        for (k, v) in self.header_pairs() {
            writeln!(s, "# {k} = {v}").unwrap();
        }
        s
    }

    /// The configuration as a JSON object for reports.
    pub fn as_json(&self) -> Value {
        let mut map = Map::new();
        for (k, v) in self.header_pairs() {
            // Keep numbers as numbers where they parse cleanly, except the
            // tau list which stays a list.
            if k == "tau" {
                let taus: Vec<Value> = self.taus.iter().map(|t| json!(t)).collect();
                map.insert(k, Value::Array(taus));
            } else if let Ok(n) = v.parse::<i64>() {
                map.insert(k, json!(n));
            } else if let Ok(x) = v.parse::<f64>() {
                map.insert(k, json!(x));
            } else if let Ok(b) = v.parse::<bool>() {
                map.insert(k, json!(b));
            } else {
                map.insert(k, json!(v));
            }
        }
        Value::Object(map)
    }

    /// Default report path: the output path with a `.json` extension.
    pub fn report_path(&self) -> PathBuf {
        self.report
            .clone()
            .unwrap_or_else(|| self.out.with_extension("json"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags_precedence() {
        let file = RawConfig::from_str("spins = 8\ntau = 0.02,0.04\nseed = 5\nout = a.csv\n").unwrap();
        let flags = RawConfig {
            seed: Some(9),
            ..Default::default()
        };
        let cfg = file.overlay(flags).resolve(CommandKind::Profile).unwrap();
        assert_eq!(cfg.spins, 8);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.taus, vec![0.02, 0.04]);
    }

    #[test]
    fn unknown_key_rejected() {
        assert!(RawConfig::from_str("bogus = 1\n").is_err());
    }

    #[test]
    fn header_round_trips_through_config_parser() {
        let cfg = RawConfig::from_str("out = x.csv\n")
            .unwrap()
            .resolve(CommandKind::Regress)
            .unwrap();
        let mut text = String::new();
        for (k, v) in cfg.header_pairs() {
            text.push_str(&format!("{k} = {v}\n"));
        }
        let mut reparsed = RawConfig::from_str(&text).unwrap();
        reparsed.out = Some("x.csv".into());
        let cfg2 = reparsed.resolve(CommandKind::Regress).unwrap();
        assert_eq!(cfg2.header_pairs(), cfg.header_pairs());
    }

    #[test]
    fn classify_rejects_degrees() {
        let raw = RawConfig::from_str("units = degrees\nout = x.csv\n").unwrap();
        assert!(raw.resolve(CommandKind::Classify).is_err());
    }

    #[test]
    fn gram_requires_data_and_single_tau() {
        let raw = RawConfig::from_str("out = g.csv\n").unwrap();
        assert!(raw.resolve(CommandKind::Gram).is_err());
        let raw = RawConfig::from_str("out = g.csv\ndata = d.csv\ntau = 0.1,0.2\n").unwrap();
        assert!(raw.resolve(CommandKind::Gram).is_err());
        let raw = RawConfig::from_str("out = g.csv\ndata = d.csv\n").unwrap();
        assert!(raw.resolve(CommandKind::Gram).is_ok());
    }
}
