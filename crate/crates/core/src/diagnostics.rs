//! Assessment procedures for index behaviour: traces along fixed tour paths,
//! rotation scans, percentile tables, squint angles, timings, parameter
//! sweeps and smoothed indexes.
//!
//! This layer orchestrates f64 computations only.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::index::{IndexDescriptor, IndexKind, Smoothing, SmoothingMethod};
use crate::optimizer::{IndexObjective, Objective};
use crate::simdata::{generate, Family, SimSpec};
use crate::stats::{masd, median, quantile_of};
use crate::tour::{geodesic_path, proj_dist, random_frame, DataMatrix, Frame, Geodesic, ProjectedData};
use crate::fingerprint;

pub const NUISANCE_STEPS: usize = 41;
/// Frames per leg of the squint path; the two legs share the intermediate plane.
pub const SQUINT_STEPS_PER_LEG: usize = 30;
pub const SQUINT_THRESHOLD: f64 = 0.8;

/// Index values along a fixed path of frames.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceResult {
    pub path: Vec<Frame<f64>>,
    pub index_names: Vec<String>,
    /// `values[frame][index]`; `None` marks a cell whose evaluation failed.
    pub values: Vec<Vec<Option<f64>>>,
    pub errors: Vec<(usize, String, String)>,
    /// Positions of key planes along the path.
    pub leg_markers: Vec<usize>,
    pub fingerprint: String,
}

impl TraceResult {
    pub fn series(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let k = self.index_names.iter().position(|n| n == name)?;
        Some(self.values.iter().map(|row| row[k]).collect())
    }

    /// The series of `name` with failed cells dropped.
    pub fn valid_series(&self, name: &str) -> Option<Vec<f64>> {
        Some(self.series(name)?.into_iter().flatten().collect())
    }

    /// `(frame, index name, value)` for every cell.
    pub fn rows(&self) -> impl Iterator<Item = (usize, &str, Option<f64>)> + '_ {
        self.values.iter().enumerate().flat_map(move |(i, row)| {
            row.iter()
                .zip(&self.index_names)
                .map(move |(v, name)| (i, name.as_str(), *v))
        })
    }

    pub fn masd(&self, name: &str) -> Option<f64> {
        Some(masd(&self.valid_series(name)?))
    }

    /// Same schema as the optimizer's traces: `frame_id,index_name,value,eval_ms`.
    pub fn traces_csv(&self) -> String {
        let mut out = String::from("frame_id,index_name,value,eval_ms\n");
        for (i, name, v) in self.rows() {
            match v {
                Some(v) => out.push_str(&format!("{i},{name},{v:.16e},0\n")),
                None => out.push_str(&format!("{i},{name},NaN,0\n")),
            }
        }
        out
    }
}

fn prepared(indexes: &[IndexDescriptor], n: usize) -> Result<Vec<IndexDescriptor>> {
    indexes.iter().map(|d| d.clone().prepared(n)).collect()
}

/// Evaluates every objective on every frame of `path`, recording failures per cell.
pub fn trace_path(
    path: Vec<Frame<f64>>,
    objectives: &mut [&mut dyn Objective<f64>],
    leg_markers: Vec<usize>,
    fingerprint: String,
) -> TraceResult {
    let index_names: Vec<String> = objectives.iter().map(|o| o.name().to_string()).collect();
    let mut values = Vec::with_capacity(path.len());
    let mut errors = Vec::new();
    for (i, f) in path.iter().enumerate() {
        let row = objectives
            .iter_mut()
            .map(|o| match o.value(f) {
                Ok(v) => Some(v),
                Err(e) => {
                    errors.push((i, o.name().to_string(), e.to_string()));
                    None
                }
            })
            .collect();
        values.push(row);
    }
    TraceResult {
        path,
        index_names,
        values,
        errors,
        leg_markers,
        fingerprint,
    }
}

fn trace_indexes(
    x: &DataMatrix<f64>,
    indexes: &[IndexDescriptor],
    path: Vec<Frame<f64>>,
    markers: Vec<usize>,
    what: &str,
) -> Result<TraceResult> {
    let mut bound = indexes
        .iter()
        .map(|d| IndexObjective::new(x, d))
        .collect::<Result<Vec<_>>>()?;
    let mut objs: Vec<&mut dyn Objective<f64>> = bound.iter_mut().map(|o| o as &mut dyn Objective<f64>).collect();
    let fp = fingerprint(&format!(
        "{what}|{:?}|{}|{:016x}",
        indexes,
        path.len(),
        crate::optimizer::data_fingerprint(x)
    ));
    Ok(trace_path(path, &mut objs, markers, fp))
}

/// Geodesic path from `span(x1, x2)` to `span(x3, x4)`.
pub fn nuisance_path(p: usize, steps: usize) -> Result<Vec<Frame<f64>>> {
    if p < 4 {
        return Err(Error::Shape(format!("the nuisance path needs p >= 4, got {p}")));
    }
    geodesic_path(&Frame::axes(p, 0, 1)?, &Frame::axes(p, 2, 3)?, steps)
}

/// Two legs `span(x1, x2) → span(x1, x_{p−1}) → span(x_{p−1}, x_p)`; the
/// returned marker is the position of the intermediate plane. The bases are
/// `(x1, x2)`, `(x1, x_{p−1})` and `(x_p, x_{p−1})`: each leg keeps one axis
/// fixed, so no leg turns the basis within the plane.
pub fn squint_path(p: usize, steps_per_leg: usize) -> Result<(Vec<Frame<f64>>, usize)> {
    if p < 4 {
        return Err(Error::Shape(format!("the squint path needs p >= 4, got {p}")));
    }
    if steps_per_leg < 2 {
        return Err(Error::InvalidParameter("a squint leg needs at least 2 frames".into()));
    }
    let start = Frame::axes(p, 0, 1)?;
    let mid = Frame::axes(p, 0, p - 2)?;
    let end = Frame::axes(p, p - 1, p - 2)?;
    let mut path = geodesic_path(&start, &mid, steps_per_leg)?;
    let marker = path.len() - 1;
    path.extend(geodesic_path(&mid, &end, steps_per_leg)?.into_iter().skip(1));
    Ok((path, marker))
}

pub fn trace_nuisance(x: &DataMatrix<f64>, indexes: &[IndexDescriptor], steps: usize) -> Result<TraceResult> {
    let path = nuisance_path(x.ncols(), steps)?;
    trace_indexes(x, indexes, path, Vec::new(), "nuisance")
}

pub fn trace_squint(x: &DataMatrix<f64>, indexes: &[IndexDescriptor], steps_per_leg: usize) -> Result<TraceResult> {
    let (path, marker) = squint_path(x.ncols(), steps_per_leg)?;
    trace_indexes(x, indexes, path, vec![marker], "squint")
}

/// Index values over in-plane rotations.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationScan {
    pub angles: Vec<f64>,
    pub index_names: Vec<String>,
    /// `values[index][angle]`
    pub values: Vec<Vec<f64>>,
}

impl RotationScan {
    pub fn spread(&self, name: &str) -> Option<f64> {
        let k = self.index_names.iter().position(|n| n == name)?;
        let v = &self.values[k];
        let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = v.iter().copied().fold(f64::INFINITY, f64::min);
        Some(max - min)
    }
}

/// Evaluates each index on `y` rotated by `kπ / n_angles`, `k = 0..n_angles`.
pub fn rotation_scan(y: &ProjectedData<f64>, indexes: &[IndexDescriptor], n_angles: usize) -> Result<RotationScan> {
    if n_angles < 8 {
        return Err(Error::InvalidParameter(format!("a rotation scan needs at least 8 angles, got {n_angles}")));
    }
    let descs = prepared(indexes, y.len())?;
    let angles: Vec<f64> = (0..n_angles)
        .map(|k| k as f64 * std::f64::consts::PI / n_angles as f64)
        .collect();
    let rotated: Vec<ProjectedData<f64>> = angles.iter().map(|&a| y.rotated(a)).collect();
    let values = descs
        .iter()
        .map(|d| rotated.iter().map(|r| d.evaluate(r)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(RotationScan {
        angles,
        index_names: descs.iter().map(|d| d.name().to_string()).collect(),
        values,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Noise,
    Structure,
}

impl Role {
    pub fn name(self) -> &'static str {
        match self {
            Role::Noise => "noise",
            Role::Structure => "structure",
        }
    }
}

/// 5th and 95th percentiles of one (index, family, role) cell. `raw_*` are
/// the percentiles of the pre-rescaling quantity (the hull area ratio for
/// convex1m).
#[derive(Debug, Clone, PartialEq)]
pub struct PercentileRow {
    pub index: String,
    pub family: Family,
    pub role: Role,
    pub p5: f64,
    pub p95: f64,
    pub raw_p5: f64,
    pub raw_p95: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PercentileTable {
    pub rows: Vec<PercentileRow>,
    pub fingerprint: String,
}

impl PercentileTable {
    pub fn get(&self, index: &str, family: Family, role: Role) -> Option<&PercentileRow> {
        self.rows
            .iter()
            .find(|r| r.index == index && r.family == family && r.role == role)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,family,role,p5,p95,raw_p5,raw_p95\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                r.index,
                r.family,
                r.role.name(),
                r.p5,
                r.p95,
                r.raw_p5,
                r.raw_p95
            ));
        }
        out
    }
}

/// Settings of a percentile study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PercentileStudy {
    pub n: usize,
    pub p: usize,
    pub n_reps: usize,
    /// Replicate `r` of every family uses seed `master_seed + r`.
    pub master_seed: u64,
}

/// For every replicate, evaluates each index on the first nuisance pair
/// `(x1, x2)` and on the structured pair.
pub fn percentile_table(
    families: &[Family],
    indexes: &[IndexDescriptor],
    study: &PercentileStudy,
) -> Result<PercentileTable> {
    if study.n_reps < 20 {
        return Err(Error::InvalidParameter(format!("need at least 20 replicates, got {}", study.n_reps)));
    }
    let descs = prepared(indexes, study.n)?;
    let mut rows = Vec::new();
    for &family in families {
        // samples[index][role] = (values, raws)
        let mut samples = vec![[(Vec::new(), Vec::new()), (Vec::new(), Vec::new())]; descs.len()];
        for rep in 0..study.n_reps {
            let spec = SimSpec::new(family, study.n, study.p, study.master_seed.wrapping_add(rep as u64));
            let x: DataMatrix<f64> = generate(&spec)?;
            let (a, b) = spec.structured_columns();
            let pairs = [x.pair(0, 1), x.pair(a, b)];
            for (k, d) in descs.iter().enumerate() {
                for (role, y) in pairs.iter().enumerate() {
                    let s = d.score(y)?;
                    samples[k][role].0.push(s.value);
                    samples[k][role].1.push(s.raw);
                }
            }
        }
        for (d, cells) in descs.iter().zip(&samples) {
            for (role, (values, raws)) in [Role::Noise, Role::Structure].into_iter().zip(cells) {
                rows.push(PercentileRow {
                    index: d.name().to_string(),
                    family,
                    role,
                    p5: quantile_of(values, 0.05),
                    p95: quantile_of(values, 0.95),
                    raw_p5: quantile_of(raws, 0.05),
                    raw_p95: quantile_of(raws, 0.95),
                });
            }
        }
    }
    Ok(PercentileTable {
        rows,
        fingerprint: fingerprint(&format!("percentile|{families:?}|{indexes:?}|{study:?}")),
    })
}

/// Squint angles (radians of geodesic arc length) over random departure directions.
#[derive(Debug, Clone, PartialEq)]
pub struct SquintStats {
    pub angles: Vec<f64>,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub value_at_target: f64,
}

const SQUINT_SCAN: usize = 32;
const SQUINT_BISECTIONS: usize = 30;

/// For `n_dirs` spin-free geodesics leaving `target` towards random planes,
/// finds the first angle (up to `max_angle`) at which the objective drops
/// below `threshold` times its value at the target: a scan locates the
/// crossing and bisection refines it.
pub fn squint_angle_with<R: Rng + ?Sized>(
    objective: &mut dyn Objective<f64>,
    target: &Frame<f64>,
    threshold: f64,
    n_dirs: usize,
    max_angle: f64,
    rng: &mut R,
) -> Result<SquintStats> {
    if n_dirs == 0 || !(max_angle > 0.0) {
        return Err(Error::InvalidParameter("need n_dirs >= 1 and a positive max_angle".into()));
    }
    let v0 = objective.value(target)?;
    if !(v0 > 0.0) {
        return Err(Error::NoStructureAtTarget);
    }
    let level = threshold * v0;
    let mut angles = Vec::with_capacity(n_dirs);
    while angles.len() < n_dirs {
        let towards: Frame<f64> = random_frame(target.dim(), rng)?;
        let geo = Geodesic::between(target, &towards)?.without_spin();
        if geo.length() < 1e-6 {
            continue;
        }
        let mut value = |s: f64| objective.value(&geo.at_angle(s));
        let h = max_angle / SQUINT_SCAN as f64;
        let mut bracket = None;
        for i in 1..=SQUINT_SCAN {
            let s = h * i as f64;
            if value(s)? < level {
                bracket = Some((s - h, s));
                break;
            }
        }
        let angle = match bracket {
            None => max_angle,
            Some((mut lo, mut hi)) => {
                for _ in 0..SQUINT_BISECTIONS {
                    let mid = 0.5 * (lo + hi);
                    if value(mid)? < level {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                lo
            }
        };
        angles.push(angle);
    }
    Ok(SquintStats {
        median: median(&angles),
        q1: quantile_of(&angles, 0.25),
        q3: quantile_of(&angles, 0.75),
        angles,
        value_at_target: v0,
    })
}

/// [`squint_angle_with`] for an index on the projections of `x`.
pub fn squint_angle_estimate<R: Rng + ?Sized>(
    x: &DataMatrix<f64>,
    index: &IndexDescriptor,
    target: &Frame<f64>,
    threshold: f64,
    n_dirs: usize,
    max_angle: f64,
    rng: &mut R,
) -> Result<SquintStats> {
    let mut obj = IndexObjective::new(x, index)?;
    squint_angle_with(&mut obj, target, threshold, n_dirs, max_angle, rng)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingRow {
    pub index: String,
    pub n: usize,
    pub median_ms: f64,
}

/// Median wall-clock milliseconds per evaluation on standard-normal
/// projections of each size, measured on the calling thread.
pub fn timing_benchmark(indexes: &[IndexDescriptor], sizes: &[usize], n_reps: usize, seed: u64) -> Result<Vec<TimingRow>> {
    if sizes.is_empty() || n_reps == 0 {
        return Err(Error::InvalidParameter("need at least one size and one repetition".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for &n in sizes {
        let descs = prepared(indexes, n)?;
        let data: Vec<ProjectedData<f64>> = (0..n_reps)
            .map(|_| {
                let mut col = || (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect::<Vec<_>>();
                let a = col();
                ProjectedData::new(a, col())
            })
            .collect::<Result<_>>()?;
        for d in &descs {
            let mut times = Vec::with_capacity(n_reps);
            for y in &data {
                let t0 = Instant::now();
                std::hint::black_box(d.evaluate(y)?);
                times.push(t0.elapsed().as_secs_f64() * 1e3);
            }
            rows.push(TimingRow {
                index: d.name().to_string(),
                n,
                median_ms: median(&times).max(f64::MIN_POSITIVE),
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    /// Index on the structured pair `(x_{p−1}, x_p)`.
    pub structured: f64,
    /// Index on the nuisance pair `(x1, x2)`.
    pub noise: f64,
    /// Roughness of the index along the nuisance path.
    pub trace_masd: f64,
    /// Median milliseconds per evaluation over the nuisance path.
    pub median_ms: f64,
}

/// Which parameters an index reads.
pub fn applies_to(kind: IndexKind, param: &str) -> bool {
    match kind {
        IndexKind::Convex1m | IndexKind::Skinny | IndexKind::Stringy => {
            matches!(param, "bin_cap" | "max_bins" | "alpha_override")
        }
        IndexKind::Mic | IndexKind::Tic => matches!(param, "mic_exponent" | "mic_clump_factor"),
        IndexKind::Splines2d => matches!(param, "spline_df_min" | "spline_df_max"),
        IndexKind::Holes | IndexKind::Dcor2d => false,
    }
}

/// Re-evaluates `index` with `param_name` set to each of `values`.
pub fn parameter_sweep(x: &DataMatrix<f64>, index: &IndexDescriptor, param_name: &str, values: &[f64]) -> Result<Vec<SweepRow>> {
    if !applies_to(index.kind, param_name) {
        return Err(Error::InvalidParameter(format!("{param_name} does not apply to {}", index.name())));
    }
    let p = x.ncols();
    let path = nuisance_path(p, NUISANCE_STEPS)?;
    let mut rows = Vec::with_capacity(values.len());
    for &value in values {
        let mut params = index.params;
        params.set(param_name, value)?;
        let mut desc = index.clone().with_params(params);
        desc.tic_calibration = None;
        let desc = desc.prepared(x.nrows())?;
        let structured = desc.evaluate_at(x, &Frame::axes(p, p - 2, p - 1)?)?;
        let noise = desc.evaluate_at(x, &Frame::axes(p, 0, 1)?)?;
        let mut trace = Vec::with_capacity(path.len());
        let mut times = Vec::with_capacity(path.len());
        for f in &path {
            let t0 = Instant::now();
            trace.push(desc.evaluate_at(x, f)?);
            times.push(t0.elapsed().as_secs_f64() * 1e3);
        }
        rows.push(SweepRow {
            value,
            structured,
            noise,
            trace_masd: masd(&trace),
            median_ms: median(&times),
        });
    }
    Ok(rows)
}

/// Wraps `index` so that its value at a frame is the mean or median over the
/// frame and `window − 1` fixed neighbours `step` radians away.
pub fn smooth_index(
    index: &IndexDescriptor,
    window: usize,
    method: SmoothingMethod,
    step: f64,
    seed: u64,
) -> Result<IndexDescriptor> {
    if window == 0 || window % 2 == 0 {
        return Err(Error::InvalidParameter(format!("the smoothing window must be odd, got {window}")));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidParameter(format!("the smoothing step must be positive, got {step}")));
    }
    Ok(index.clone().with_smoothing(Smoothing {
        window,
        method,
        step,
        seed,
    }))
}

/// Plane distance between every pair of frames.
pub fn pairwise_distances(frames: &[&Frame<f64>]) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for i in 0..frames.len() {
        for j in i + 1..frames.len() {
            out.push(proj_dist(frames[i], frames[j])?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizer::FnObjective;

    fn sine(seed: u64, n: usize, p: usize) -> DataMatrix<f64> {
        generate(&SimSpec::new(Family::Sine, n, p, seed)).unwrap()
    }

    #[test]
    fn path_lengths_and_markers() {
        assert_eq!(nuisance_path(6, NUISANCE_STEPS).unwrap().len(), 41);
        let (path, marker) = squint_path(6, SQUINT_STEPS_PER_LEG).unwrap();
        assert_eq!(path.len(), 59);
        assert_eq!(marker, 29);
        assert_eq!(path[marker], Frame::axes(6, 0, 4).unwrap());
        assert_eq!(path[58], Frame::axes(6, 5, 4).unwrap());
        assert!(nuisance_path(3, 5).is_err());
    }

    #[test]
    fn constant_index_gives_flat_trace() {
        let mut c = FnObjective::new("const", |_: &Frame<f64>| Ok(0.25));
        let t = trace_path(nuisance_path(5, 41).unwrap(), &mut [&mut c], vec![], String::new());
        assert_eq!(t.masd("const"), Some(0.0));
        assert_eq!(t.rows().count(), 41);
    }

    #[test]
    fn distance_oracle_rises_along_squint_path() {
        let target = Frame::axes(6, 4, 5).unwrap();
        let mut o = FnObjective::new("close", move |f: &Frame<f64>| Ok(1.0 - proj_dist(f, &target)? / 2.0));
        let (path, m) = squint_path(6, 30).unwrap();
        let t = trace_path(path, &mut [&mut o], vec![m], String::new());
        let s = t.valid_series("close").unwrap();
        assert!(s.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn failed_cells_are_marked() {
        let mut o = FnObjective::new("odd", |f: &Frame<f64>| {
            if f.get(0, 0) > 0.99 {
                Err(Error::IndexEvaluation("boom".into()))
            } else {
                Ok(0.5)
            }
        });
        let t = trace_path(nuisance_path(4, 5).unwrap(), &mut [&mut o], vec![], String::new());
        assert_eq!(t.values[0][0], None);
        assert_eq!(t.errors.len(), 1);
        assert!(t.traces_csv().contains("0,odd,NaN,0"));
    }

    #[test]
    fn trace_replays_exactly() {
        let x = sine(1, 300, 4);
        let idx = [IndexDescriptor::new(IndexKind::Dcor2d), IndexDescriptor::new(IndexKind::Skinny)];
        let t = trace_nuisance(&x, &idx, 11).unwrap();
        for (f, row) in t.path.iter().zip(&t.values) {
            for (d, v) in idx.iter().zip(row) {
                assert_eq!(d.evaluate_at(&x, f).unwrap(), v.unwrap());
            }
        }
        assert_eq!(t.fingerprint.len(), 16);
    }

    #[test]
    fn rotation_scan_on_disk_is_flat_for_holes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pts: Vec<[f64; 2]> = (0..800)
            .map(|_| [rng.sample(StandardNormal), rng.sample(StandardNormal)])
            .collect();
        let y = ProjectedData::from_points(&pts);
        let scan = rotation_scan(&y, &[IndexDescriptor::new(IndexKind::Holes)], 12).unwrap();
        assert!(scan.spread("holes").unwrap() < 1e-9);
        assert!(rotation_scan(&y, &[], 4).is_err());
    }

    #[test]
    fn squint_cone_oracle_in_three_dimensions() {
        // in p = 3 two planes always share a line, so the distance after arc
        // length s is √2·sin(s) and the cone drops to half at √2·sin(s) = c/2
        let c = 0.8;
        let target = Frame::axes(3, 0, 1).unwrap();
        let t2 = target.clone();
        let mut cone = FnObjective::new("cone", move |f: &Frame<f64>| Ok((1.0 - proj_dist(f, &t2)? / c).max(0.0)));
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let stats = squint_angle_with(&mut cone, &target, 0.5, 9, std::f64::consts::FRAC_PI_4, &mut rng).unwrap();
        let expected = (c / 2.0 / 2f64.sqrt()).asin();
        for a in &stats.angles {
            assert!((a - expected).abs() / expected < 0.05, "{a} vs {expected}");
        }
        let zero = squint_angle_with(&mut cone, &target, 0.0, 3, 0.5, &mut rng).unwrap();
        assert!(zero.angles.iter().all(|&a| a == 0.5));
        let mut flat = FnObjective::new("zero", |_: &Frame<f64>| Ok(0.0));
        assert_eq!(
            squint_angle_with(&mut flat, &target, 0.5, 3, 0.5, &mut rng),
            Err(Error::NoStructureAtTarget)
        );
    }

    #[test]
    fn timing_rows_are_positive() {
        let rows = timing_benchmark(&[IndexDescriptor::new(IndexKind::Holes)], &[50, 100], 3, 1).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.median_ms > 0.0));
    }

    #[test]
    fn sweep_of_one_value_matches_direct_evaluation() {
        let x = sine(2, 300, 4);
        let d = IndexDescriptor::new(IndexKind::Skinny);
        let rows = parameter_sweep(&x, &d, "bin_cap", &[40.0]).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].structured, d.evaluate(&x.pair(2, 3)).unwrap());
        assert!(parameter_sweep(&x, &d, "mic_exponent", &[0.5]).is_err());
        assert!(parameter_sweep(&x, &d, "bin_cap", &[0.5]).is_err());
    }

    #[test]
    fn smoothing_window_one_and_constant_index() {
        let x = sine(3, 200, 4);
        let d = IndexDescriptor::new(IndexKind::Dcor2d);
        let s1 = smooth_index(&d, 1, SmoothingMethod::Mean, 0.01, 1).unwrap();
        let f = Frame::axes(4, 1, 3).unwrap();
        assert_eq!(s1.evaluate_at(&x, &f).unwrap(), d.evaluate_at(&x, &f).unwrap());
        assert!(smooth_index(&d, 4, SmoothingMethod::Mean, 0.01, 1).is_err());
        // a constant sample makes dcor2d degenerate everywhere
        let flat = DataMatrix::from_columns(&vec![vec![1.0; 20]; 4]).unwrap();
        let s5 = smooth_index(&d, 5, SmoothingMethod::Median, 0.01, 1).unwrap();
        assert_eq!(s5.evaluate_at(&flat, &f).unwrap(), d.evaluate_at(&flat, &f).unwrap());
    }

    #[test]
    fn percentile_table_is_deterministic() {
        let study = PercentileStudy { n: 100, p: 4, n_reps: 20, master_seed: 7 };
        let idx = [IndexDescriptor::new(IndexKind::Dcor2d)];
        let a = percentile_table(&[Family::Sine], &idx, &study).unwrap();
        assert_eq!(a, percentile_table(&[Family::Sine], &idx, &study).unwrap());
        let s = a.get("dcor2d", Family::Sine, Role::Structure).unwrap();
        let n = a.get("dcor2d", Family::Sine, Role::Noise).unwrap();
        assert!(s.p5 > n.p95);
        assert!(percentile_table(&[Family::Sine], &idx, &PercentileStudy { n_reps: 5, ..study }).is_err());
    }
}
