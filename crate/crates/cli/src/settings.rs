//! Flat `key = value` configuration.
//!
//! Files hold one `dotted.key = value` per line; `#` starts a comment.
//! Values from the file are overridden by `--set key=value` and then by the
//! dedicated flags. Every run echoes the fully resolved table.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use hpr_core::harness::{default_solver_config, ExperimentSpec, ModelParams};
use hpr_core::sensing::ModelKind;
use hpr_core::solvers::{ScaleRule, SolverConfig, SolverKind, SpectralWeighting, StepRule};

/// Raw key/value pairs in file order, later entries winning.
#[derive(Debug, Default, Clone)]
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut raw = RawConfig::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected `key = value`, got `{line}`", i + 1))?;
            raw.set(k.trim(), v.trim())?;
        }
        Ok(raw)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if key.is_empty() || key.contains(char::is_whitespace) {
            bail!("bad config key `{key}`");
        }
        self.entries.insert(key.to_string(), value.to_string());
        Ok(())
    }

    /// Parses `key=value`.
    pub fn set_pair(&mut self, pair: &str) -> Result<()> {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| anyhow!("expected key=value, got `{pair}`"))?;
        self.set(k.trim(), v.trim())
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }
}

/// Everything a command needs, after defaults and overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub seed: u64,
    pub timing: bool,
    pub solver: SolverKind,
    pub model: ModelKind,
    pub n: usize,
    pub m_over_n: Vec<f64>,
    pub snr_db: Vec<f64>,
    pub trials: usize,
    pub success_threshold: f64,
    pub outliers: usize,
    pub outlier_factor: f64,
    pub params: ModelParams,
    pub config: SolverConfig,
    pub recover: RecoverSettings,
    pub selftest_samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoverSettings {
    /// File, MSI band directory, or `synthetic-rgb:WxH` / `synthetic-msi:WxH`.
    pub input: Option<String>,
    /// `None` picks 32 for RGB and 4 for spectral images.
    pub patch: Option<usize>,
    pub model: ModelKind,
    /// `None` picks 15 for RGB and 12 for spectral images.
    pub m_over_n: Option<f64>,
    /// `None` is 1 for integer encodings and the data maximum for raw cubes.
    pub peak: Option<f64>,
    pub oracle: bool,
}

/// Which command the defaults are for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Defaults {
    Simulate,
    Snr,
    Recover,
    Other,
}

impl Settings {
    /// Resolves `raw` on top of the command defaults. The solver is read
    /// first because the solver hyperparameter defaults depend on it.
    pub fn resolve(raw: &RawConfig, defaults: Defaults) -> Result<Self> {
        let solver = match raw.get("experiment.solver") {
            Some(v) => v.parse()?,
            None if defaults == Defaults::Snr => SolverKind::Owf,
            None => SolverKind::Qwf,
        };
        let model = match raw.get("experiment.model") {
            Some(v) => v.parse()?,
            None => match solver {
                SolverKind::Owf => ModelKind::GaussianOctonion,
                _ => ModelKind::GaussianQuaternion,
            },
        };
        let mut s = Settings {
            seed: 0,
            timing: false,
            solver,
            model,
            n: if solver == SolverKind::Owf { 8 } else { 16 },
            m_over_n: vec![if defaults == Defaults::Snr {
                12.0
            } else {
                10.0
            }],
            snr_db: if defaults == Defaults::Snr {
                vec![0.0, 10.0, 20.0, 30.0]
            } else {
                vec![f64::INFINITY]
            },
            trials: 100,
            success_threshold: 1e-5,
            outliers: 0,
            outlier_factor: 100.0,
            params: ModelParams::default(),
            config: default_solver_config(solver),
            recover: RecoverSettings {
                input: None,
                patch: None,
                model: ModelKind::CodedFourier,
                m_over_n: None,
                peak: None,
                oracle: false,
            },
            selftest_samples: 10_000,
        };
        for (k, v) in &raw.entries {
            s.apply(k, v).with_context(|| format!("config key `{k}`"))?;
        }
        Ok(s)
    }

    fn apply(&mut self, key: &str, v: &str) -> Result<()> {
        let c = &mut self.config;
        match key {
            "seed" => self.seed = v.parse()?,
            "timing" => self.timing = parse_bool(v)?,
            "experiment.solver" | "experiment.model" => {}
            "experiment.n" => self.n = v.parse()?,
            "experiment.m_over_n" => self.m_over_n = parse_list(v)?,
            "experiment.snr_db" => self.snr_db = parse_list(v)?,
            "experiment.trials" => self.trials = v.parse()?,
            "experiment.success_threshold" => self.success_threshold = v.parse()?,
            "experiment.outliers" => self.outliers = v.parse()?,
            "experiment.outlier_factor" => self.outlier_factor = v.parse()?,
            "model.doe_symbols" => self.params.doe_symbols = v.parse()?,
            "model.window" => self.params.window = v.parse()?,
            "solver.step_size" => c.step_size = v.parse()?,
            "solver.step_rule" => {
                c.step_rule = match v {
                    "fixed" => StepRule::Fixed,
                    "bb" => StepRule::BarzilaiBorwein,
                    _ => bail!("expected fixed or bb, got `{v}`"),
                }
            }
            "solver.max_iters" => c.max_iters = v.parse()?,
            "solver.stop_tol" => c.stop_tol = v.parse()?,
            "solver.abs_tol" => c.abs_tol = v.parse()?,
            "solver.max_backtracks" => c.max_backtracks = v.parse()?,
            "solver.power_iters" => c.power_iters = v.parse()?,
            "solver.power_tol" => c.power_tol = v.parse()?,
            "solver.weighting" => c.weighting = parse_weighting(v)?,
            "solver.scale_rule" => {
                c.scale_rule = match v {
                    "mean" => ScaleRule::MeanIntensity,
                    "rms" => ScaleRule::RootMeanSquare,
                    _ => bail!("expected mean or rms, got `{v}`"),
                }
            }
            "solver.tau_lo" => c.tau_lo = v.parse()?,
            "solver.tau_hi" => c.tau_hi = v.parse()?,
            "solver.tau_res" => c.tau_res = v.parse()?,
            "solver.log_floor" => c.log_floor = v.parse()?,
            "recover.input" => self.recover.input = (!v.is_empty()).then(|| v.to_string()),
            "recover.patch" => self.recover.patch = parse_auto(v)?,
            "recover.model" => self.recover.model = v.parse()?,
            "recover.m_over_n" => self.recover.m_over_n = parse_auto(v)?,
            "recover.peak" => self.recover.peak = parse_auto(v)?,
            "recover.oracle" => self.recover.oracle = parse_bool(v)?,
            "selftest.samples" => self.selftest_samples = v.parse()?,
            _ => bail!("unknown key"),
        }
        Ok(())
    }

    pub fn experiment(&self) -> ExperimentSpec {
        ExperimentSpec {
            solver: self.solver,
            model: self.model,
            n: self.n,
            params: self.params.clone(),
            m_over_n: self.m_over_n.clone(),
            snr_db: self.snr_db.clone(),
            trials: self.trials,
            success_threshold: self.success_threshold,
            outliers: self.outliers,
            outlier_factor: self.outlier_factor,
            seed: self.seed,
            config: self.config.clone(),
        }
    }

    /// The resolved table, in key order, as echoed into the manifest.
    pub fn entries(&self) -> BTreeMap<&'static str, String> {
        let c = &self.config;
        let list = |v: &[f64]| v.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
        let mut m = BTreeMap::new();
        m.insert("seed", self.seed.to_string());
        m.insert("timing", self.timing.to_string());
        m.insert("experiment.solver", self.solver.to_string());
        m.insert("experiment.model", self.model.to_string());
        m.insert("experiment.n", self.n.to_string());
        m.insert("experiment.m_over_n", list(&self.m_over_n));
        m.insert("experiment.snr_db", list(&self.snr_db));
        m.insert("experiment.trials", self.trials.to_string());
        m.insert(
            "experiment.success_threshold",
            self.success_threshold.to_string(),
        );
        m.insert("experiment.outliers", self.outliers.to_string());
        m.insert("experiment.outlier_factor", self.outlier_factor.to_string());
        m.insert("model.doe_symbols", self.params.doe_symbols.to_string());
        m.insert("model.window", self.params.window.to_string());
        m.insert("solver.step_size", c.step_size.to_string());
        m.insert(
            "solver.step_rule",
            match c.step_rule {
                StepRule::Fixed => "fixed",
                StepRule::BarzilaiBorwein => "bb",
            }
            .into(),
        );
        m.insert("solver.max_iters", c.max_iters.to_string());
        m.insert("solver.stop_tol", c.stop_tol.to_string());
        m.insert("solver.abs_tol", c.abs_tol.to_string());
        m.insert("solver.max_backtracks", c.max_backtracks.to_string());
        m.insert("solver.power_iters", c.power_iters.to_string());
        m.insert("solver.power_tol", c.power_tol.to_string());
        m.insert("solver.weighting", weighting_name(c.weighting));
        m.insert(
            "solver.scale_rule",
            match c.scale_rule {
                ScaleRule::MeanIntensity => "mean",
                ScaleRule::RootMeanSquare => "rms",
            }
            .into(),
        );
        m.insert("solver.tau_lo", c.tau_lo.to_string());
        m.insert("solver.tau_hi", c.tau_hi.to_string());
        m.insert("solver.tau_res", c.tau_res.to_string());
        m.insert("solver.log_floor", c.log_floor.to_string());
        m.insert(
            "recover.input",
            self.recover.input.clone().unwrap_or_default(),
        );
        m.insert("recover.patch", auto_name(self.recover.patch));
        m.insert("recover.model", self.recover.model.to_string());
        m.insert("recover.m_over_n", auto_name(self.recover.m_over_n));
        m.insert("recover.peak", auto_name(self.recover.peak));
        m.insert("recover.oracle", self.recover.oracle.to_string());
        m.insert("selftest.samples", self.selftest_samples.to_string());
        m
    }
}

fn parse_auto<T: std::str::FromStr>(v: &str) -> Result<Option<T>>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    if v == "auto" {
        Ok(None)
    } else {
        Ok(Some(v.parse()?))
    }
}

fn auto_name<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "auto".into(), |v| v.to_string())
}

fn parse_bool(v: &str) -> Result<bool> {
    match v {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => bail!("expected a boolean, got `{v}`"),
    }
}

/// Comma-separated numbers; `inf` is accepted.
fn parse_list(v: &str) -> Result<Vec<f64>> {
    v.split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<f64>().map_err(|_| anyhow!("bad number `{s}`"))
        })
        .collect()
}

fn parse_weighting(v: &str) -> Result<Option<SpectralWeighting>> {
    Ok(match v {
        "auto" => None,
        "plain" => Some(SpectralWeighting::Plain),
        "optimal" => Some(SpectralWeighting::Optimal),
        _ => match v.strip_prefix("truncated:") {
            Some(a) => Some(SpectralWeighting::Truncated { alpha: a.parse()? }),
            None => bail!("expected auto, plain, optimal or truncated:<alpha>, got `{v}`"),
        },
    })
}

fn weighting_name(w: Option<SpectralWeighting>) -> String {
    match w {
        None => "auto".into(),
        Some(SpectralWeighting::Plain) => "plain".into(),
        Some(SpectralWeighting::Optimal) => "optimal".into(),
        Some(SpectralWeighting::Truncated { alpha }) => format!("truncated:{alpha}"),
    }
}
