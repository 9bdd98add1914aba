//! The run configuration file (TOML).
//!
//! Every section is optional; each subcommand reads the sections it needs.
//! Relative paths are resolved against the directory of the config file.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use tourpp::index::{IndexDescriptor, IndexKind, IndexParams, SmoothingMethod};
use tourpp::optimizer::{Method, OptimizerConfig, WindowMetric};
use tourpp::simdata::{Family, SimSpec};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Master seed; sections without their own seed derive theirs from it.
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    /// Write measured evaluation times instead of zeros.
    #[serde(default)]
    pub timing: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<DataConfig>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub indexes: Vec<IndexConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evaluate: Option<EvaluateConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<TraceConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimize: Option<OptimizeConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnose: Option<DiagnoseConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plot: Option<PlotConfig>,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            output_dir: default_output_dir(),
            timing: false,
            data: None,
            indexes: Vec::new(),
            evaluate: None,
            trace: None,
            optimize: None,
            diagnose: None,
            plot: None,
        }
    }
}

/// Column scaling applied after loading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScaleMode {
    #[default]
    None,
    Standardize,
    Minmax,
    /// Principal components, keeping the first `k`.
    Sphere(usize),
}

impl fmt::Display for ScaleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScaleMode::None => f.write_str("none"),
            ScaleMode::Standardize => f.write_str("standardize"),
            ScaleMode::Minmax => f.write_str("minmax"),
            ScaleMode::Sphere(k) => write!(f, "sphere:{k}"),
        }
    }
}

impl FromStr for ScaleMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "none" => Ok(ScaleMode::None),
            "standardize" => Ok(ScaleMode::Standardize),
            "minmax" => Ok(ScaleMode::Minmax),
            other => match other.strip_prefix("sphere:").map(str::parse::<usize>) {
                Some(Ok(k)) if k >= 2 => Ok(ScaleMode::Sphere(k)),
                _ => Err(format!("unknown scale mode `{other}` (none, standardize, minmax, sphere:k with k >= 2)")),
            },
        }
    }
}

impl Serialize for ScaleMode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ScaleMode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

fn is_default<T: Default + PartialEq>(v: &T) -> bool {
    *v == T::default()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct DataConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub drop_columns: Vec<String>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub scale: ScaleMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulate: Option<SimConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub family: String,
    pub n: usize,
    pub p: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radial_sd: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jitter_sd: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spiral_a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spiral_b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_spread: Option<f64>,
}

impl SimConfig {
    pub fn spec(&self, master_seed: u64) -> Result<SimSpec, CliError> {
        let family: Family = self.family.parse().map_err(CliError::config)?;
        let mut spec = SimSpec::new(family, self.n, self.p, self.seed.unwrap_or(master_seed));
        spec.radial_sd = self.radial_sd.unwrap_or(spec.radial_sd);
        spec.jitter_sd = self.jitter_sd.unwrap_or(spec.jitter_sd);
        spec.spiral_a = self.spiral_a.unwrap_or(spec.spiral_a);
        spec.spiral_b = self.spiral_b.unwrap_or(spec.spiral_b);
        spec.theta_spread = self.theta_spread.unwrap_or(spec.theta_spread);
        spec.validate().map_err(CliError::config)?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexConfig {
    pub name: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smoothing: Option<SmoothingConfig>,
}

impl IndexConfig {
    pub fn named(name: &str) -> Self {
        Self {
            name: name.to_string(),
            params: BTreeMap::new(),
            smoothing: None,
        }
    }

    pub fn descriptor(&self, master_seed: u64) -> Result<IndexDescriptor, CliError> {
        let kind: IndexKind = self.name.parse().map_err(CliError::config)?;
        let mut params = IndexParams::default();
        for (k, v) in &self.params {
            params.set(k, *v).map_err(CliError::config)?;
        }
        let mut desc = IndexDescriptor::new(kind).with_params(params);
        if let Some(s) = &self.smoothing {
            let method = match s.method.as_str() {
                "mean" => SmoothingMethod::Mean,
                "median" => SmoothingMethod::Median,
                m => return Err(CliError::Config(format!("unknown smoothing method `{m}`"))),
            };
            desc = tourpp::diagnostics::smooth_index(&desc, s.window, method, s.step, s.seed.unwrap_or(master_seed))
                .map_err(CliError::config)?;
        }
        Ok(desc)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmoothingConfig {
    pub window: usize,
    #[serde(default = "default_smoothing_method")]
    pub method: String,
    #[serde(default = "default_probe_step")]
    pub step: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn default_smoothing_method() -> String {
    "mean".into()
}

fn default_probe_step() -> f64 {
    0.01
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct EvaluateConfig {
    /// One-based column pairs, each evaluated as the plane of those two axes.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pairs: Vec<[usize; 2]>,
    /// A frames.csv whose frames are evaluated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frames: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceConfig {
    /// `nuisance` or `squint`.
    pub kind: String,
    /// Frames of the nuisance path, or frames per leg of the squint path.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeConfig {
    /// `guided` or `scout_refine`.
    #[serde(default = "default_mode")]
    pub mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyConfig>,
    #[serde(default)]
    pub search: SearchConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refine: Option<SearchConfig>,
}

fn default_mode() -> String {
    "guided".into()
}

/// Known target plane the final anchor is checked against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    /// One-based columns spanning the target plane.
    pub columns: [usize; 2],
    #[serde(default = "default_verify_dist")]
    pub max_dist: f64,
}

fn default_verify_dist() -> f64 {
    0.15
}

/// Optimizer settings; unset fields take the library defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SearchConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cooling: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_tries: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe_step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub line_window: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interp_steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_dir: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub local_fraction: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl SearchConfig {
    pub fn optimizer(&self, default_method: Method, master_seed: u64) -> Result<OptimizerConfig, CliError> {
        let d = OptimizerConfig::default();
        let method = match &self.method {
            Some(m) => m.parse().map_err(CliError::config)?,
            None => default_method,
        };
        let window: WindowMetric = match &self.window {
            Some(w) => w.parse().map_err(CliError::config)?,
            None => d.window,
        };
        let cfg = OptimizerConfig {
            method,
            alpha: self.alpha.unwrap_or(d.alpha),
            window,
            cooling: self.cooling.unwrap_or(d.cooling),
            max_tries: self.max_tries.unwrap_or(d.max_tries),
            tol: self.tol.unwrap_or(d.tol),
            probe_step: self.probe_step.unwrap_or(d.probe_step),
            line_window: self.line_window.unwrap_or(d.line_window),
            interp_steps: self.interp_steps.unwrap_or(d.interp_steps),
            n_dir: self.n_dir.unwrap_or(d.n_dir),
            local_fraction: self.local_fraction.unwrap_or(d.local_fraction),
            seed: self.seed.unwrap_or(master_seed),
        };
        cfg.validate().map_err(CliError::config)?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnoseConfig {
    /// `percentile`, `rotation`, `timing`, `sweep` or `squint`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub families: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_reps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_angles: Option<usize>,
    /// One-based columns; defaults to the last two.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sizes: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_dirs: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_angle: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlotConfig {
    /// `trace` or `scatter`.
    pub kind: String,
    /// traces.csv for a trace plot.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    /// markers.csv with leg markers.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub markers: Option<PathBuf>,
    /// frames.csv: anchors become markers in a trace plot; for a scatter plot
    /// the frame `frame_id` is the projection.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frames: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame_id: Option<usize>,
    /// Two column names plotted directly against each other.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub columns: Option<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opacity: Option<f64>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Config(format!("cannot write config: {e}")))
    }

    /// Reads a config file and resolves its relative paths against the file's directory.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        cfg.resolve_paths(base);
        Ok(cfg)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.output_dir);
        if let Some(d) = &mut self.data {
            d.csv.iter_mut().for_each(fix);
        }
        if let Some(e) = &mut self.evaluate {
            e.frames.iter_mut().for_each(fix);
        }
        if let Some(p) = &mut self.plot {
            p.input.iter_mut().for_each(fix);
            p.markers.iter_mut().for_each(fix);
            p.frames.iter_mut().for_each(fix);
        }
    }

    /// Checks names and enumerations that the file format cannot express.
    pub fn validate(&self) -> Result<(), CliError> {
        self.check_seeds()?;
        for idx in &self.indexes {
            idx.descriptor(self.seed)?;
        }
        if let Some(d) = &self.data {
            if d.csv.is_some() == d.simulate.is_some() {
                return Err(CliError::Config("[data] needs exactly one of `csv` and `simulate`".into()));
            }
            if let Some(s) = &d.simulate {
                s.spec(self.seed)?;
            }
        }
        if let Some(t) = &self.trace {
            if !matches!(t.kind.as_str(), "nuisance" | "squint") {
                return Err(CliError::Config(format!("unknown trace kind `{}`", t.kind)));
            }
        }
        if let Some(o) = &self.optimize {
            match o.mode.as_str() {
                "guided" => {
                    o.search.optimizer(Method::Geodesic, self.seed)?;
                }
                "scout_refine" => {
                    o.search.optimizer(Method::Better, self.seed)?;
                    o.refine.clone().unwrap_or_default().optimizer(Method::Geodesic, self.seed)?;
                }
                m => return Err(CliError::Config(format!("unknown optimize mode `{m}`"))),
            }
        }
        if let Some(d) = &self.diagnose {
            if !matches!(d.kind.as_str(), "percentile" | "rotation" | "timing" | "sweep" | "squint") {
                return Err(CliError::Config(format!("unknown diagnostic `{}`", d.kind)));
            }
            for f in &d.families {
                f.parse::<Family>().map_err(CliError::config)?;
            }
        }
        if let Some(p) = &self.plot {
            if !matches!(p.kind.as_str(), "trace" | "scatter") {
                return Err(CliError::Config(format!("unknown plot kind `{}`", p.kind)));
            }
        }
        Ok(())
    }

    /// TOML integers are signed, so every seed must fit in an `i64`.
    fn check_seeds(&self) -> Result<(), CliError> {
        let mut seeds = vec![Some(self.seed)];
        if let Some(sim) = self.data.as_ref().and_then(|d| d.simulate.as_ref()) {
            seeds.push(sim.seed);
        }
        seeds.extend(self.indexes.iter().map(|i| i.smoothing.as_ref().and_then(|s| s.seed)));
        if let Some(o) = &self.optimize {
            seeds.push(o.search.seed);
            seeds.push(o.refine.as_ref().and_then(|r| r.seed));
        }
        match seeds.into_iter().flatten().find(|&s| s > i64::MAX as u64) {
            Some(s) => Err(CliError::Config(format!("seed {s} is larger than {}", i64::MAX))),
            None => Ok(()),
        }
    }

    pub fn descriptors(&self) -> Result<Vec<IndexDescriptor>, CliError> {
        self.indexes.iter().map(|i| i.descriptor(self.seed)).collect()
    }
}
