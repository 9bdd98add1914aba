//! Subcommand execution and artifact persistence.
//!
//! A command first computes all of its artifacts in memory. They are then
//! written into the output directory, each through a temporary file that is
//! renamed into place, followed by `manifest.json` and a copy of the config.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tourpp::diagnostics::{
    parameter_sweep, percentile_table, rotation_scan, squint_angle_estimate, timing_benchmark, trace_nuisance,
    trace_squint, PercentileStudy, TraceResult, NUISANCE_STEPS, SQUINT_STEPS_PER_LEG, SQUINT_THRESHOLD,
};
use tourpp::index::{IndexDescriptor, IndexKind};
use tourpp::optimizer::{frames_csv, guided_tour, scout_then_refine, Method, TourHistory, TourResult};
use tourpp::simdata::{generate, Family};
use tourpp::tour::{proj_dist, project, DataMatrix, Frame};

use crate::config::{DiagnoseConfig, RunConfig, SearchConfig};
use crate::data::{apply_scale, data_csv, load_csv, markers_csv, read_frames, read_markers, read_traces};
use crate::error::CliError;
use crate::svg::{loading_label, render_scatter_svg, render_trace_svg, ScatterOptions, TraceOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Simulate,
    Evaluate,
    Trace,
    Optimize,
    Diagnose,
    Plot,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Simulate,
        Command::Evaluate,
        Command::Trace,
        Command::Optimize,
        Command::Diagnose,
        Command::Plot,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Evaluate => "evaluate",
            Command::Trace => "trace",
            Command::Optimize => "optimize",
            Command::Diagnose => "diagnose",
            Command::Plot => "plot",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| CliError::Config(format!("unknown command `{s}`")))
    }
}

/// A file produced by a command, named relative to the output directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

impl Artifact {
    fn new(name: &str, contents: String) -> Self {
        Self {
            name: name.to_string(),
            contents,
        }
    }
}

/// Artifacts computed so far, and the error that stopped the command if any.
/// An aborted optimization still reports the frames it visited.
#[derive(Debug, Clone, PartialEq)]
pub struct Execution {
    pub artifacts: Vec<Artifact>,
    pub error: Option<CliError>,
}

impl From<Result<Vec<Artifact>, CliError>> for Execution {
    fn from(r: Result<Vec<Artifact>, CliError>) -> Self {
        match r {
            Ok(artifacts) => Execution { artifacts, error: None },
            Err(e) => Execution {
                artifacts: Vec::new(),
                error: Some(e),
            },
        }
    }
}

pub fn execute(cmd: Command, cfg: &RunConfig) -> Execution {
    match cmd {
        Command::Simulate => simulate(cfg).into(),
        Command::Evaluate => evaluate(cfg).into(),
        Command::Trace => trace(cfg).into(),
        Command::Optimize => optimize(cfg),
        Command::Diagnose => diagnose(cfg).into(),
        Command::Plot => plot(cfg).into(),
    }
}

/// Runs `cmd` and writes its artifacts, the manifest and the config copy
/// into `cfg.output_dir`. Returns the output directory on success.
pub fn run_command(cmd: Command, cfg: &RunConfig) -> Result<PathBuf, CliError> {
    cfg.validate()?;
    let t0 = Instant::now();
    let exec = execute(cmd, cfg);
    let wall_ms = t0.elapsed().as_secs_f64() * 1e3;
    let dir = cfg.output_dir.clone();
    let config_text = cfg.to_toml()?;
    let mut files = exec.artifacts;
    files.push(Artifact::new("config.toml", config_text.clone()));
    files.push(Artifact::new(
        "manifest.json",
        manifest(cmd, cfg, &config_text, &files, wall_ms, exec.error.as_ref()),
    ));
    write_artifacts(&dir, &files)?;
    match exec.error {
        Some(e) => Err(e),
        None => Ok(dir),
    }
}

fn manifest(
    cmd: Command,
    cfg: &RunConfig,
    config_text: &str,
    files: &[Artifact],
    wall_ms: f64,
    error: Option<&CliError>,
) -> String {
    let names: Vec<&str> = files.iter().map(|a| a.name.as_str()).collect();
    let value = serde_json::json!({
        "command": cmd.name(),
        "seed": cfg.seed,
        "config": config_text,
        "versions": {
            "tourpp-cli": env!("CARGO_PKG_VERSION"),
            "tourpp": tourpp::VERSION,
        },
        "wall_ms": wall_ms,
        "artifacts": names,
        "status": if error.is_some() { "error" } else { "ok" },
        "error": error.map(|e| serde_json::json!({"kind": e.kind(), "exit_code": e.exit_code(), "message": e.to_string()})),
    });
    let mut text = serde_json::to_string_pretty(&value).expect("manifest serializes");
    text.push('\n');
    text
}

/// Writes each artifact to a temporary sibling and renames it into place.
pub fn write_artifacts(dir: &Path, files: &[Artifact]) -> Result<(), CliError> {
    let io = |e: std::io::Error, what: &Path| CliError::Data(format!("cannot write {}: {e}", what.display()));
    std::fs::create_dir_all(dir).map_err(|e| io(e, dir))?;
    for a in files {
        let target = dir.join(&a.name);
        let tmp = dir.join(format!(".{}.tmp", a.name));
        std::fs::write(&tmp, &a.contents).map_err(|e| io(e, &tmp))?;
        std::fs::rename(&tmp, &target).map_err(|e| io(e, &target))?;
    }
    Ok(())
}

/// The dataset described by `[data]`, after column drops and scaling.
pub fn dataset(cfg: &RunConfig) -> Result<DataMatrix<f64>, CliError> {
    let data = cfg
        .data
        .as_ref()
        .ok_or_else(|| CliError::Config("this command needs a [data] section".into()))?;
    if let Some(path) = &data.csv {
        return load_csv(path, &data.drop_columns, data.scale);
    }
    let sim = data.simulate.as_ref().expect("validated: csv or simulate");
    let x: DataMatrix<f64> = generate(&sim.spec(cfg.seed)?)?;
    let mut keep = Vec::new();
    for (j, name) in x.names().iter().enumerate() {
        if !data.drop_columns.contains(name) {
            keep.push(j);
        }
    }
    if let Some(d) = data.drop_columns.iter().find(|d| !x.names().contains(d)) {
        return Err(CliError::Data(format!("unknown column `{d}`")));
    }
    apply_scale(&x.select(&keep)?, data.scale)
}

fn required_indexes(cfg: &RunConfig) -> Result<Vec<IndexDescriptor>, CliError> {
    if cfg.indexes.is_empty() {
        return Err(CliError::Config("this command needs at least one [[indexes]] entry".into()));
    }
    cfg.descriptors()
}

/// A one-based column pair as a frame of `p` variables.
fn axis_frame(p: usize, pair: [usize; 2]) -> Result<Frame<f64>, CliError> {
    let [a, b] = pair;
    if a == 0 || b == 0 || a > p || b > p || a == b {
        return Err(CliError::Config(format!("column pair {a},{b} is not two distinct columns in 1..={p}")));
    }
    Ok(Frame::axes(p, a - 1, b - 1)?)
}

fn simulate(cfg: &RunConfig) -> Result<Vec<Artifact>, CliError> {
    let has_sim = cfg.data.as_ref().is_some_and(|d| d.simulate.is_some());
    if !has_sim {
        return Err(CliError::Config("simulate needs a [data.simulate] section".into()));
    }
    Ok(vec![Artifact::new("data.csv", data_csv(&dataset(cfg)?))])
}

fn values_csv(names: &[String], values: &[Vec<f64>], times: &[Vec<f64>], timing: bool) -> String {
    let mut out = String::from("frame_id,index_name,value,eval_ms\n");
    for (i, (row, trow)) in values.iter().zip(times).enumerate() {
        for ((name, v), t) in names.iter().zip(row).zip(trow) {
            let t = if timing { *t } else { 0.0 };
            out.push_str(&format!("{i},{name},{v:.16e},{t}\n"));
        }
    }
    out
}

fn evaluate(cfg: &RunConfig) -> Result<Vec<Artifact>, CliError> {
    let x = dataset(cfg)?;
    let descs: Vec<IndexDescriptor> = required_indexes(cfg)?
        .into_iter()
        .map(|d| d.prepared(x.nrows()))
        .collect::<Result<_, _>>()?;
    let ev = cfg.evaluate.clone().unwrap_or_default();
    let mut frames = Vec::new();
    for pair in &ev.pairs {
        frames.push(axis_frame(x.ncols(), *pair)?);
    }
    if let Some(path) = &ev.frames {
        frames.extend(read_frames(path)?.frames);
    }
    if frames.is_empty() {
        return Err(CliError::Config("[evaluate] needs `pairs` or `frames`".into()));
    }
    if let Some(f) = frames.iter().find(|f| f.dim() != x.ncols()) {
        return Err(CliError::Data(format!("frame has {} rows but the data has {} columns", f.dim(), x.ncols())));
    }
    let names: Vec<String> = descs.iter().map(|d| d.name().to_string()).collect();
    let mut values = Vec::new();
    let mut times = Vec::new();
    for f in &frames {
        let mut row = Vec::new();
        let mut trow = Vec::new();
        for d in &descs {
            let t0 = Instant::now();
            row.push(d.evaluate_at(&x, f).map_err(CliError::evaluation)?);
            trow.push(t0.elapsed().as_secs_f64() * 1e3);
        }
        values.push(row);
        times.push(trow);
    }
    let stages = vec!["evaluate".to_string(); frames.len()];
    Ok(vec![
        Artifact::new("values.csv", values_csv(&names, &values, &times, cfg.timing)),
        Artifact::new("frames.csv", frames_csv(&frames, &[], &stages)),
    ])
}

fn trace_artifacts(result: &TraceResult, kind: &str) -> Vec<Artifact> {
    let stages = vec![kind.to_string(); result.path.len()];
    let markers: Vec<(usize, String)> = result.leg_markers.iter().map(|&m| (m, "leg".to_string())).collect();
    vec![
        Artifact::new("traces.csv", result.traces_csv()),
        Artifact::new("frames.csv", frames_csv(&result.path, &[], &stages)),
        Artifact::new("markers.csv", markers_csv(&markers)),
    ]
}

fn trace(cfg: &RunConfig) -> Result<Vec<Artifact>, CliError> {
    let tc = cfg
        .trace
        .as_ref()
        .ok_or_else(|| CliError::Config("trace needs a [trace] section".into()))?;
    let x = dataset(cfg)?;
    let descs = required_indexes(cfg)?;
    let result = match tc.kind.as_str() {
        "nuisance" => trace_nuisance(&x, &descs, tc.steps.unwrap_or(NUISANCE_STEPS))?,
        _ => trace_squint(&x, &descs, tc.steps.unwrap_or(SQUINT_STEPS_PER_LEG))?,
    };
    if let Some((frame, index, msg)) = result.errors.first() {
        return Err(CliError::Evaluation(format!("{index} failed at frame {frame}: {msg}")));
    }
    Ok(trace_artifacts(&result, &tc.kind))
}

fn history_artifacts(h: &TourHistory<f64>, timing: bool) -> Vec<Artifact> {
    vec![
        Artifact::new("frames.csv", h.frames_csv()),
        Artifact::new("traces.csv", h.traces_csv(timing)),
    ]
}

/// `target_a,target_b,proj_dist,max_dist,pass` for the final anchor.
fn verify(h: &TourHistory<f64>, target: &Frame<f64>, columns: [usize; 2], max_dist: f64) -> Result<(Artifact, bool), CliError> {
    let last = h
        .last_anchor()
        .ok_or_else(|| CliError::Evaluation("the tour recorded no frames".into()))?
        .0;
    let d = proj_dist(last, target)?;
    let pass = d <= max_dist;
    let text = format!(
        "target_a,target_b,proj_dist,max_dist,pass\n{},{},{d:.16e},{max_dist},{pass}\n",
        columns[0], columns[1]
    );
    Ok((Artifact::new("verify.csv", text), pass))
}

fn optimize(cfg: &RunConfig) -> Execution {
    let prepared = (|| -> Result<_, CliError> {
        let oc = cfg
            .optimize
            .as_ref()
            .ok_or_else(|| CliError::Config("optimize needs an [optimize] section".into()))?;
        let x = dataset(cfg)?;
        let descs = required_indexes(cfg)?;
        let target = match &oc.verify {
            Some(v) => Some((axis_frame(x.ncols(), v.columns)?, v.columns, v.max_dist)),
            None => None,
        };
        Ok((oc, x, descs, target))
    })();
    let (oc, x, descs, target) = match prepared {
        Ok(p) => p,
        Err(e) => return Err::<Vec<Artifact>, _>(e).into(),
    };
    let result: Result<TourResult<f64>, CliError> = (|| {
        Ok(match oc.mode.as_str() {
            "guided" => guided_tour(&x, &descs[0], &oc.search.optimizer(Method::Geodesic, cfg.seed)?, &descs[1..]),
            _ => {
                let scout = oc.search.optimizer(Method::Better, cfg.seed)?;
                let refine_cfg = oc.refine.clone().unwrap_or_else(SearchConfig::default);
                let refine = refine_cfg.optimizer(Method::Geodesic, cfg.seed)?;
                scout_then_refine(&x, &descs[0], &scout, &refine, &descs[1..])
            }
        })
    })();
    match result {
        Err(e) => Err::<Vec<Artifact>, _>(e).into(),
        Ok(Err(aborted)) => Execution {
            artifacts: history_artifacts(&aborted.history, cfg.timing),
            error: Some(CliError::from(aborted.error.clone())),
        },
        Ok(Ok(history)) => {
            let mut artifacts = history_artifacts(&history, cfg.timing);
            let mut error = None;
            if let Some((frame, columns, max_dist)) = target {
                match verify(&history, &frame, columns, max_dist) {
                    Ok((a, pass)) => {
                        artifacts.push(a);
                        if !pass {
                            error = Some(CliError::Evaluation(format!(
                                "verification failed: final anchor is farther than {max_dist} from the plane of columns {} and {}",
                                columns[0], columns[1]
                            )));
                        }
                    }
                    Err(e) => error = Some(e),
                }
            }
            Execution { artifacts, error }
        }
    }
}

fn diagnose_indexes(cfg: &RunConfig) -> Result<Vec<IndexDescriptor>, CliError> {
    if cfg.indexes.is_empty() {
        Ok(IndexKind::ALL.into_iter().map(IndexDescriptor::new).collect())
    } else {
        cfg.descriptors()
    }
}

fn default_pair(d: &DiagnoseConfig, p: usize) -> [usize; 2] {
    d.pair.unwrap_or([p - 1, p])
}

fn diagnose(cfg: &RunConfig) -> Result<Vec<Artifact>, CliError> {
    let d = cfg
        .diagnose
        .as_ref()
        .ok_or_else(|| CliError::Config("diagnose needs a [diagnose] section".into()))?;
    let descs = diagnose_indexes(cfg)?;
    match d.kind.as_str() {
        "percentile" => {
            let families: Vec<Family> = if d.families.is_empty() {
                Family::ALL.to_vec()
            } else {
                d.families.iter().map(|f| f.parse()).collect::<Result<_, _>>()?
            };
            let study = PercentileStudy {
                n: d.n.unwrap_or(1000),
                p: d.p.unwrap_or(6),
                n_reps: d.n_reps.unwrap_or(100),
                master_seed: cfg.seed,
            };
            let table = percentile_table(&families, &descs, &study)?;
            Ok(vec![Artifact::new("percentile.csv", table.to_csv())])
        }
        "rotation" => {
            let x = dataset(cfg)?;
            let [a, b] = default_pair(d, x.ncols());
            axis_frame(x.ncols(), [a, b])?;
            let scan = rotation_scan(&x.pair(a - 1, b - 1), &descs, d.n_angles.unwrap_or(36))?;
            let mut values = String::from("index,angle,value\n");
            let mut spread = String::from("index,spread\n");
            for (k, name) in scan.index_names.iter().enumerate() {
                for (angle, v) in scan.angles.iter().zip(&scan.values[k]) {
                    values.push_str(&format!("{name},{angle:.16e},{v:.16e}\n"));
                }
                let s = scan.spread(name).expect("name from the scan");
                spread.push_str(&format!("{name},{s:.16e}\n"));
            }
            Ok(vec![
                Artifact::new("rotation.csv", values),
                Artifact::new("rotation_spread.csv", spread),
            ])
        }
        "timing" => {
            let sizes = if d.sizes.is_empty() { vec![100, 1000] } else { d.sizes.clone() };
            let rows = timing_benchmark(&descs, &sizes, d.n_reps.unwrap_or(10), cfg.seed)?;
            let mut out = String::from("index,n,median_ms\n");
            for r in rows {
                out.push_str(&format!("{},{},{:.6e}\n", r.index, r.n, r.median_ms));
            }
            Ok(vec![Artifact::new("timing.csv", out)])
        }
        "sweep" => {
            let x = dataset(cfg)?;
            let param = d
                .param
                .as_deref()
                .ok_or_else(|| CliError::Config("a sweep needs `param`".into()))?;
            if d.values.is_empty() {
                return Err(CliError::Config("a sweep needs `values`".into()));
            }
            let rows = parameter_sweep(&x, &descs[0], param, &d.values)?;
            let mut out = String::from("index,param,value,structured,noise,trace_masd,median_ms\n");
            for r in rows {
                let ms = if cfg.timing { r.median_ms } else { 0.0 };
                out.push_str(&format!(
                    "{},{param},{},{:.16e},{:.16e},{:.16e},{ms}\n",
                    descs[0].name(),
                    r.value,
                    r.structured,
                    r.noise,
                    r.trace_masd
                ));
            }
            Ok(vec![Artifact::new("sweep.csv", out)])
        }
        _ => {
            let x = dataset(cfg)?;
            let target = axis_frame(x.ncols(), default_pair(d, x.ncols()))?;
            let threshold = d.threshold.unwrap_or(SQUINT_THRESHOLD);
            let n_dirs = d.n_dirs.unwrap_or(20);
            let max_angle = d.max_angle.unwrap_or(std::f64::consts::FRAC_PI_4);
            let mut out = String::from("index,median,q1,q3,value_at_target,n_dirs\n");
            for (k, desc) in descs.iter().enumerate() {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(k as u64));
                let s = squint_angle_estimate(&x, desc, &target, threshold, n_dirs, max_angle, &mut rng)?;
                out.push_str(&format!(
                    "{},{:.16e},{:.16e},{:.16e},{:.16e},{n_dirs}\n",
                    desc.name(),
                    s.median,
                    s.q1,
                    s.q3,
                    s.value_at_target
                ));
            }
            Ok(vec![Artifact::new("squint.csv", out)])
        }
    }
}

fn plot(cfg: &RunConfig) -> Result<Vec<Artifact>, CliError> {
    let pc = cfg
        .plot
        .as_ref()
        .ok_or_else(|| CliError::Config("plot needs a [plot] section".into()))?;
    let svg = if pc.kind == "trace" {
        let input = pc
            .input
            .as_ref()
            .ok_or_else(|| CliError::Config("a trace plot needs `input`".into()))?;
        let rows = read_traces(input)?;
        let mut markers: Vec<usize> = Vec::new();
        if let Some(m) = &pc.markers {
            markers.extend(read_markers(m)?.into_iter().map(|(pos, _)| pos));
        }
        if let Some(f) = &pc.frames {
            markers.extend(read_frames(f)?.anchors);
        }
        markers.sort_unstable();
        markers.dedup();
        render_trace_svg(
            &rows,
            &TraceOptions {
                title: pc.title.clone(),
                markers,
            },
        )?
    } else {
        let x = dataset(cfg)?;
        let (u, v, xl, yl) = if let Some([a, b]) = &pc.columns {
            let col = |name: &str| {
                x.names()
                    .iter()
                    .position(|n| n == name)
                    .ok_or_else(|| CliError::Data(format!("unknown column `{name}`")))
            };
            let (ja, jb) = (col(a)?, col(b)?);
            (x.column(ja), x.column(jb), a.clone(), b.clone())
        } else if let Some(path) = &pc.frames {
            let file = read_frames(path)?;
            let id = pc
                .frame_id
                .or_else(|| file.anchors.last().copied())
                .or_else(|| file.frames.len().checked_sub(1))
                .ok_or(CliError::EmptyTrace)?;
            let f = file
                .frames
                .get(id)
                .ok_or_else(|| CliError::Config(format!("frame {id} is not in {}", path.display())))?;
            if f.dim() != x.ncols() {
                return Err(CliError::Data(format!("frame has {} rows but the data has {} columns", f.dim(), x.ncols())));
            }
            let y = project(&x, f)?;
            let xl = loading_label(f.col(0), x.names());
            let yl = loading_label(f.col(1), x.names());
            (y.x().to_vec(), y.y().to_vec(), xl, yl)
        } else {
            if x.ncols() < 2 {
                return Err(CliError::Data("a scatter plot needs two columns".into()));
            }
            (x.column(0), x.column(1), x.names()[0].clone(), x.names()[1].clone())
        };
        render_scatter_svg(
            &u,
            &v,
            &ScatterOptions {
                title: pc.title.clone(),
                x_label: Some(xl),
                y_label: Some(yl),
                radius: pc.radius,
                opacity: pc.opacity,
            },
        )?
    };
    Ok(vec![Artifact::new("plot.svg", svg)])
}
