//! Guided-tour optimization over projection planes.
//!
//! Three derivative-free searches propose a target plane that improves the
//! index; [`guided_tour`] interpolates to each accepted target and records
//! every frame until a search comes back empty.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hash::Fnv1a;
use crate::index::IndexDescriptor;
use crate::tour::{geodesic_path, orthonormalize, proj_dist, random_frame, DataMatrix, Frame, Geodesic};
use crate::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    BetterRandom,
    Better,
    Geodesic,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::BetterRandom, Method::Better, Method::Geodesic];

    pub fn name(self) -> &'static str {
        match self {
            Method::BetterRandom => "better_random",
            Method::Better => "better",
            Method::Geodesic => "geodesic",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s.trim())
            .ok_or_else(|| Error::InvalidParameter(format!("unknown search method `{s}`")))
    }
}

/// How the search window `alpha` of the local searches is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WindowMetric {
    /// Candidates lie within plane distance `alpha` of the current frame.
    PlaneDistance,
    /// Candidates are `orthonormalize((1 − alpha)·current + alpha·random)`,
    /// the neighbourhood used by the reference guided-tour software. With
    /// `alpha = 0.5` in six dimensions the plane distance of a step is
    /// typically 1.0 to 1.6.
    Blend,
}

impl WindowMetric {
    pub const ALL: [WindowMetric; 2] = [WindowMetric::PlaneDistance, WindowMetric::Blend];

    pub fn name(self) -> &'static str {
        match self {
            WindowMetric::PlaneDistance => "plane_distance",
            WindowMetric::Blend => "blend",
        }
    }
}

impl fmt::Display for WindowMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WindowMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        WindowMetric::ALL
            .into_iter()
            .find(|m| m.name() == s.trim())
            .ok_or_else(|| Error::InvalidParameter(format!("unknown window metric `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub method: Method,
    /// Search window radius in plane-distance units.
    pub alpha: f64,
    pub window: WindowMetric,
    /// Factor applied to `alpha` after every accepted target.
    pub cooling: f64,
    /// Index evaluations allowed per search call.
    pub max_tries: usize,
    /// Minimum improvement for a candidate to be accepted.
    pub tol: f64,
    pub probe_step: f64,
    pub line_window: f64,
    /// Frames per interpolated leg, both ends included.
    pub interp_steps: usize,
    /// Probe directions per geodesic search attempt.
    pub n_dir: usize,
    /// Share of `better_random` samples drawn inside the window instead of globally.
    pub local_fraction: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            method: Method::Geodesic,
            alpha: 0.5,
            window: WindowMetric::PlaneDistance,
            cooling: 0.99,
            max_tries: 500,
            tol: 1e-4,
            probe_step: 0.01,
            line_window: std::f64::consts::FRAC_PI_4,
            interp_steps: 20,
            n_dir: 10,
            local_fraction: 0.0,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn new(method: Method) -> Self {
        Self { method, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.cooling > 0.0 && self.cooling <= 1.0) {
            return bad(format!("cooling must lie in (0, 1], got {}", self.cooling));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return bad(format!("alpha must be positive, got {}", self.alpha));
        }
        if self.window == WindowMetric::Blend && self.alpha > 1.0 {
            return bad(format!("a blend window needs alpha <= 1, got {}", self.alpha));
        }
        if self.max_tries == 0 {
            return bad("max_tries must be at least 1".into());
        }
        if !(self.tol >= 0.0 && self.tol.is_finite()) {
            return bad(format!("tol must be non-negative, got {}", self.tol));
        }
        if !(self.probe_step > 0.0 && self.probe_step.is_finite()) {
            return bad(format!("probe_step must be positive, got {}", self.probe_step));
        }
        if !(self.line_window > 0.0 && self.line_window.is_finite()) {
            return bad(format!("line_window must be positive, got {}", self.line_window));
        }
        if self.interp_steps == 0 {
            return bad("interp_steps must be at least 1".into());
        }
        if self.n_dir == 0 {
            return bad("n_dir must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.local_fraction) {
            return bad(format!("local_fraction must lie in [0, 1], got {}", self.local_fraction));
        }
        Ok(())
    }
}

/// Something that scores a plane. Implemented by [`IndexObjective`] and by
/// closures `(&str name, FnMut(&Frame) -> Result<T>)` via [`FnObjective`].
pub trait Objective<T: Real> {
    fn name(&self) -> &str;
    fn value(&mut self, frame: &Frame<T>) -> Result<T>;
}

/// An index evaluated on the projection of a bound data matrix.
#[derive(Debug, Clone)]
pub struct IndexObjective<'a, T> {
    x: &'a DataMatrix<T>,
    desc: IndexDescriptor,
}

impl<'a, T: Real> IndexObjective<'a, T> {
    /// Binds `desc` to `x`, preparing it for the sample size.
    pub fn new(x: &'a DataMatrix<T>, desc: &IndexDescriptor) -> Result<Self> {
        Ok(Self {
            x,
            desc: desc.clone().prepared(x.nrows())?,
        })
    }
}

impl<T: Real> Objective<T> for IndexObjective<'_, T> {
    fn name(&self) -> &str {
        self.desc.name()
    }

    fn value(&mut self, frame: &Frame<T>) -> Result<T> {
        self.desc.evaluate_at(self.x, frame)
    }
}

pub struct FnObjective<F> {
    name: String,
    f: F,
}

impl<F> FnObjective<F> {
    pub fn new(name: impl Into<String>, f: F) -> Self {
        Self { name: name.into(), f }
    }
}

impl<T: Real, F: FnMut(&Frame<T>) -> Result<T>> Objective<T> for FnObjective<F> {
    fn name(&self) -> &str {
        &self.name
    }

    fn value(&mut self, frame: &Frame<T>) -> Result<T> {
        (self.f)(frame)
    }
}

/// Counts evaluations passed through to the wrapped objective.
pub struct Counting<O> {
    pub inner: O,
    pub count: usize,
}

impl<O> Counting<O> {
    pub fn new(inner: O) -> Self {
        Self { inner, count: 0 }
    }
}

impl<T: Real, O: Objective<T>> Objective<T> for Counting<O> {
    fn name(&self) -> &str {
        self.inner.name()
    }

    fn value(&mut self, frame: &Frame<T>) -> Result<T> {
        self.count += 1;
        self.inner.value(frame)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SearchOutcome<T> {
    Found { frame: Frame<T>, value: T },
    Exhausted,
}

impl<T> SearchOutcome<T> {
    pub fn is_exhausted(&self) -> bool {
        matches!(self, SearchOutcome::Exhausted)
    }
}

/// State carried between search calls of one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchState {
    /// Current window radius; shrinks by the cooling factor on every acceptance.
    pub alpha: f64,
}

impl SearchState {
    pub fn new(cfg: &OptimizerConfig) -> Self {
        Self { alpha: cfg.alpha }
    }
}

/// Evaluation allowance of one search call.
struct Budget<'o, O: ?Sized> {
    objective: &'o mut O,
    left: usize,
}

impl<'o, O: ?Sized> Budget<'o, O> {
    fn new(objective: &'o mut O, max_tries: usize) -> Self {
        Self { objective, left: max_tries }
    }

    /// `None` once the allowance is spent.
    fn eval<T: Real>(&mut self, frame: &Frame<T>) -> Result<Option<T>>
    where
        O: Objective<T>,
    {
        if self.left == 0 {
            return Ok(None);
        }
        self.left -= 1;
        self.objective.value(frame).map(Some)
    }
}

/// A frame within plane distance `radius` of `current`. A random frame is
/// blended towards `current` and orthonormalized, with the blend weight found
/// by bisection so that the plane distance matches a draw `r = radius·u^(1/d)`
/// (`d = 2(p − 2)`, the dimension of the space of planes). The distance is
/// therefore distributed as for a uniform draw from the window.
pub fn sample_near<T: Real, R: Rng + ?Sized>(current: &Frame<T>, radius: f64, rng: &mut R) -> Result<Frame<T>> {
    let p = current.dim();
    let dim = (2 * p.saturating_sub(2)).max(1) as f64;
    loop {
        let target: Frame<T> = random_frame(p, rng)?;
        let r = radius * rng.gen::<f64>().powf(1.0 / dim);
        let blend = |w: f64| -> Option<Frame<T>> {
            let w = T::lit(w);
            let col = |k: usize| -> Vec<T> {
                current
                    .col(k)
                    .iter()
                    .zip(target.col(k))
                    .map(|(&c, &t)| (T::one() - w) * c + w * t)
                    .collect()
            };
            orthonormalize(&col(0), &col(1)).ok()
        };
        let dist = |f: &Frame<T>| proj_dist(f, current).map(|d| d.as_f64());
        let Some(far) = blend(1.0) else { continue };
        let cand = if dist(&far)? <= r {
            far
        } else {
            let (mut lo, mut hi) = (0.0, 1.0);
            let mut best = current.clone();
            for _ in 0..40 {
                let mid = 0.5 * (lo + hi);
                match blend(mid) {
                    Some(f) if dist(&f)? <= r => {
                        best = f;
                        lo = mid;
                    }
                    _ => hi = mid,
                }
            }
            best
        };
        if dist(&cand)? > radius {
            continue;
        }
        return Ok(cand);
    }
}

/// `orthonormalize((1 − alpha)·current + alpha·random)` for a fresh random frame.
pub fn sample_blend<T: Real, R: Rng + ?Sized>(current: &Frame<T>, alpha: f64, rng: &mut R) -> Result<Frame<T>> {
    let w = T::lit(alpha.min(1.0));
    loop {
        let target: Frame<T> = random_frame(current.dim(), rng)?;
        let col = |k: usize| -> Vec<T> {
            current
                .col(k)
                .iter()
                .zip(target.col(k))
                .map(|(&c, &t)| (T::one() - w) * c + w * t)
                .collect()
        };
        if let Ok(f) = orthonormalize(&col(0), &col(1)) {
            return Ok(f);
        }
    }
}

fn sample_window<T: Real, R: Rng + ?Sized>(
    current: &Frame<T>,
    alpha: f64,
    metric: WindowMetric,
    rng: &mut R,
) -> Result<Frame<T>> {
    match metric {
        WindowMetric::PlaneDistance => sample_near(current, alpha, rng),
        WindowMetric::Blend => sample_blend(current, alpha, rng),
    }
}

/// Global random search: the first sample beating `current_value + tol` wins.
pub fn search_better_random<T, O, R>(
    current: &Frame<T>,
    current_value: T,
    objective: &mut O,
    cfg: &OptimizerConfig,
    state: &mut SearchState,
    rng: &mut R,
) -> Result<SearchOutcome<T>>
where
    T: Real,
    O: Objective<T> + ?Sized,
    R: Rng + ?Sized,
{
    let mut budget = Budget::new(objective, cfg.max_tries);
    let threshold = current_value + T::lit(cfg.tol);
    loop {
        let cand = if cfg.local_fraction > 0.0 && rng.gen_bool(cfg.local_fraction) {
            sample_window(current, state.alpha, cfg.window, rng)?
        } else {
            random_frame(current.dim(), rng)?
        };
        match budget.eval(&cand)? {
            None => return Ok(SearchOutcome::Exhausted),
            Some(v) if v > threshold => return Ok(SearchOutcome::Found { frame: cand, value: v }),
            Some(_) => {}
        }
    }
}

/// Annealing-style local search inside the window `state.alpha`.
pub fn search_better<T, O, R>(
    current: &Frame<T>,
    current_value: T,
    objective: &mut O,
    cfg: &OptimizerConfig,
    state: &mut SearchState,
    rng: &mut R,
) -> Result<SearchOutcome<T>>
where
    T: Real,
    O: Objective<T> + ?Sized,
    R: Rng + ?Sized,
{
    let mut budget = Budget::new(objective, cfg.max_tries);
    let threshold = current_value + T::lit(cfg.tol);
    loop {
        let cand = sample_window(current, state.alpha, cfg.window, rng)?;
        match budget.eval(&cand)? {
            None => return Ok(SearchOutcome::Exhausted),
            Some(v) if v > threshold => {
                state.alpha *= cfg.cooling;
                return Ok(SearchOutcome::Found { frame: cand, value: v });
            }
            Some(_) => {}
        }
    }
}

const COARSE_POINTS: usize = 16;
const LINE_RESOLUTION: f64 = 1e-3;

/// Maximizes the objective along `geo` over arc lengths in `[-window, window]`:
/// a coarse grid followed by golden-section refinement around its best point.
/// Returns `(angle, frame, value)`, or `None` if the budget ran out first.
fn line_search<T, O>(
    geo: &Geodesic<T>,
    window: f64,
    budget: &mut Budget<'_, O>,
) -> Result<Option<(f64, Frame<T>, T)>>
where
    T: Real,
    O: Objective<T> + ?Sized,
{
    let h = 2.0 * window / COARSE_POINTS as f64;
    let mut best: Option<(f64, Frame<T>, T)> = None;
    for i in 0..=COARSE_POINTS {
        let s = -window + h * i as f64;
        let f = geo.at_angle(T::lit(s));
        let Some(v) = budget.eval(&f)? else {
            return Ok(best);
        };
        if best.as_ref().map_or(true, |b| v > b.2) {
            best = Some((s, f, v));
        }
    }
    let (s0, _, _) = best.clone().expect("grid is nonempty");
    let (mut a, mut b) = ((s0 - h).max(-window), (s0 + h).min(window));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut eval = |s: f64, best: &mut Option<(f64, Frame<T>, T)>| -> Result<Option<T>> {
        let f = geo.at_angle(T::lit(s));
        let v = budget.eval(&f)?;
        if let Some(v) = v {
            if best.as_ref().map_or(true, |bst| v > bst.2) {
                *best = Some((s, f, v));
            }
        }
        Ok(v)
    };
    let (Some(mut fc), Some(mut fd)) = (eval(c, &mut best)?, eval(d, &mut best)?) else {
        return Ok(best);
    };
    while b - a > LINE_RESOLUTION {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            match eval(c, &mut best)? {
                Some(v) => fc = v,
                None => break,
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            match eval(d, &mut best)? {
                Some(v) => fd = v,
                None => break,
            }
        }
    }
    Ok(best)
}

/// Maximizes `objective` along the spin-free geodesic from `from` towards
/// `towards`, over arc lengths in `[-window, window]`. Exposed for testing the
/// line search on its own; `max_evals` bounds the evaluations.
pub fn maximize_along<T, O>(
    from: &Frame<T>,
    towards: &Frame<T>,
    window: f64,
    objective: &mut O,
    max_evals: usize,
) -> Result<Option<(f64, Frame<T>, T)>>
where
    T: Real,
    O: Objective<T> + ?Sized,
{
    let geo = Geodesic::between(from, towards)?.without_spin();
    let mut budget = Budget::new(objective, max_evals);
    line_search(&geo, window, &mut budget)
}

/// Probes `n_dir` random directions at ±`probe_step`, then line-searches the
/// most promising one. Attempts repeat with fresh directions until one
/// improves by more than `tol` or the evaluation budget is spent.
pub fn search_geodesic<T, O, R>(
    current: &Frame<T>,
    current_value: T,
    objective: &mut O,
    cfg: &OptimizerConfig,
    _state: &mut SearchState,
    rng: &mut R,
) -> Result<SearchOutcome<T>>
where
    T: Real,
    O: Objective<T> + ?Sized,
    R: Rng + ?Sized,
{
    let mut budget = Budget::new(objective, cfg.max_tries);
    let threshold = current_value + T::lit(cfg.tol);
    let step = T::lit(cfg.probe_step);
    loop {
        let mut best_dir: Option<(Geodesic<T>, T)> = None;
        let mut dirs = 0;
        while dirs < cfg.n_dir {
            let target = random_frame(current.dim(), rng)?;
            let geo = Geodesic::between(current, &target)?.without_spin();
            if geo.length() <= T::lit(1e-6) {
                continue;
            }
            dirs += 1;
            let (Some(up), Some(down)) = (budget.eval(&geo.at_angle(step))?, budget.eval(&geo.at_angle(-step))?)
            else {
                return Ok(SearchOutcome::Exhausted);
            };
            let score = up.max(down);
            if best_dir.as_ref().map_or(true, |b| score > b.1) {
                best_dir = Some((geo, score));
            }
        }
        let (geo, _) = best_dir.expect("n_dir >= 1");
        let found = line_search(&geo, cfg.line_window, &mut budget)?;
        if let Some((_, frame, value)) = found {
            if value > threshold {
                return Ok(SearchOutcome::Found { frame, value });
            }
        }
        if budget.left == 0 {
            return Ok(SearchOutcome::Exhausted);
        }
    }
}

/// Dispatches to the search selected by `cfg.method`.
pub fn search<T, O, R>(
    current: &Frame<T>,
    current_value: T,
    objective: &mut O,
    cfg: &OptimizerConfig,
    state: &mut SearchState,
    rng: &mut R,
) -> Result<SearchOutcome<T>>
where
    T: Real,
    O: Objective<T> + ?Sized,
    R: Rng + ?Sized,
{
    match cfg.method {
        Method::BetterRandom => search_better_random(current, current_value, objective, cfg, state, rng),
        Method::Better => search_better(current, current_value, objective, cfg, state, rng),
        Method::Geodesic => search_geodesic(current, current_value, objective, cfg, state, rng),
    }
}

/// Everything a guided tour visited.
#[derive(Debug, Clone, PartialEq)]
pub struct TourHistory<T> {
    pub frames: Vec<Frame<T>>,
    /// Index names; column `k` of every row of `values` belongs to `index_names[k]`.
    /// The primary index comes first.
    pub index_names: Vec<String>,
    pub values: Vec<Vec<T>>,
    /// Wall-clock milliseconds of each recorded evaluation, parallel to `values`.
    pub eval_ms: Vec<Vec<f64>>,
    /// Positions in `frames` of the start frame and every accepted target, increasing.
    pub anchors: Vec<usize>,
    /// Stage label of every frame.
    pub stages: Vec<String>,
    pub configs: Vec<OptimizerConfig>,
    pub data_fingerprint: u64,
}

impl<T: Real> TourHistory<T> {
    pub fn new(index_names: Vec<String>, data_fingerprint: u64) -> Self {
        Self {
            frames: Vec::new(),
            index_names,
            values: Vec::new(),
            eval_ms: Vec::new(),
            anchors: Vec::new(),
            stages: Vec::new(),
            configs: Vec::new(),
            data_fingerprint,
        }
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn primary(&self) -> Vec<T> {
        self.values.iter().map(|v| v[0]).collect()
    }

    pub fn anchor_frames(&self) -> Vec<&Frame<T>> {
        self.anchors.iter().map(|&i| &self.frames[i]).collect()
    }

    pub fn anchor_values(&self) -> Vec<T> {
        self.anchors.iter().map(|&i| self.values[i][0]).collect()
    }

    pub fn last_anchor(&self) -> Option<(&Frame<T>, T)> {
        self.anchors.last().map(|&i| (&self.frames[i], self.values[i][0]))
    }

    pub fn final_frame(&self) -> Option<&Frame<T>> {
        self.frames.last()
    }

    /// Frames of the given stage, in order.
    pub fn stage_frames<'a>(&'a self, stage: &'a str) -> impl Iterator<Item = (usize, &'a Frame<T>)> + 'a {
        self.frames
            .iter()
            .enumerate()
            .filter(move |(i, _)| self.stages[*i] == stage)
    }

    /// Plane distances between consecutive anchors.
    pub fn anchor_steps(&self) -> Result<Vec<T>> {
        let a = self.anchor_frames();
        a.windows(2).map(|w| proj_dist(w[0], w[1])).collect()
    }

    /// Checks that the lengths agree, anchors increase and the primary index
    /// never decreases from one anchor to the next.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.frames.len();
        if self.values.len() != n || self.eval_ms.len() != n || self.stages.len() != n {
            return Err(Error::Shape("history columns have different lengths".into()));
        }
        if self.anchors.windows(2).any(|w| w[0] >= w[1]) || self.anchors.iter().any(|&i| i >= n) {
            return Err(Error::InvalidData("anchors are not strictly increasing".into()));
        }
        let v = self.anchor_values();
        if v.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidData("primary index decreases between anchors".into()));
        }
        Ok(())
    }

    /// `frame_id,anchor,stage,b11,b12,...,bp1,bp2` with 17 significant digits.
    pub fn frames_csv(&self) -> String {
        frames_csv(&self.frames, &self.anchors, &self.stages)
    }

    /// `frame_id,index_name,value,eval_ms`. Timings are written as 0 unless
    /// `with_timing`, so that repeated runs produce identical bytes.
    pub fn traces_csv(&self, with_timing: bool) -> String {
        let mut out = String::from("frame_id,index_name,value,eval_ms\n");
        for (i, row) in self.values.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                let ms = if with_timing { self.eval_ms[i][k] } else { 0.0 };
                out.push_str(&format!("{i},{},{:.16e},{ms}\n", self.index_names[k], v.as_f64()));
            }
        }
        out
    }
}

/// Writes frames as `frame_id,anchor,stage,b11,b12,...,bp1,bp2`; `anchors`
/// must be sorted and `stages` has one label per frame.
pub fn frames_csv<T: Real>(frames: &[Frame<T>], anchors: &[usize], stages: &[String]) -> String {
    let p = frames.first().map_or(0, |f| f.dim());
    let mut out = String::from("frame_id,anchor,stage");
    for j in 1..=p {
        out.push_str(&format!(",b{j}1,b{j}2"));
    }
    out.push('\n');
    for (i, f) in frames.iter().enumerate() {
        let anchor = u8::from(anchors.binary_search(&i).is_ok());
        out.push_str(&format!("{i},{anchor},{}", stages[i]));
        for j in 0..p {
            out.push_str(&format!(",{:.16e},{:.16e}", f.get(j, 0).as_f64(), f.get(j, 1).as_f64()));
        }
        out.push('\n');
    }
    out
}

/// A guided tour that stopped on an index error, with what was recorded before it.
#[derive(Debug, Clone)]
pub struct TourAborted<T> {
    pub history: TourHistory<T>,
    pub error: Error,
}

impl<T> fmt::Display for TourAborted<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "guided tour aborted: {}", self.error)
    }
}

impl<T: fmt::Debug> std::error::Error for TourAborted<T> {}

pub type TourResult<T> = std::result::Result<TourHistory<T>, Box<TourAborted<T>>>;

/// FNV-1a over the bit patterns of the data values and the shape.
pub fn data_fingerprint<T: Real>(x: &DataMatrix<T>) -> u64 {
    let mut h = Fnv1a::new();
    h.write(&(x.nrows() as u64).to_le_bytes());
    h.write(&(x.ncols() as u64).to_le_bytes());
    for v in x.values() {
        h.write(&v.as_f64().to_bits().to_le_bytes());
    }
    h.finish()
}

fn record<T: Real>(
    history: &mut TourHistory<T>,
    frame: Frame<T>,
    stage: &str,
    objectives: &mut [&mut dyn Objective<T>],
) -> Result<()> {
    let mut values = Vec::with_capacity(objectives.len());
    let mut times = Vec::with_capacity(objectives.len());
    for o in objectives.iter_mut() {
        let t0 = Instant::now();
        values.push(o.value(&frame)?);
        times.push(t0.elapsed().as_secs_f64() * 1e3);
    }
    history.frames.push(frame);
    history.values.push(values);
    history.eval_ms.push(times);
    history.stages.push(stage.to_string());
    Ok(())
}

/// Runs one guided-tour stage from `start`, appending to `history`.
/// `objectives[0]` drives the search; the others are only recorded.
pub fn run_stage<T: Real, R: Rng + ?Sized>(
    history: &mut TourHistory<T>,
    start: Frame<T>,
    objectives: &mut [&mut dyn Objective<T>],
    cfg: &OptimizerConfig,
    stage: &str,
    rng: &mut R,
) -> Result<()> {
    cfg.validate()?;
    if objectives.is_empty() {
        return Err(Error::InvalidParameter("a guided tour needs an index".into()));
    }
    history.configs.push(*cfg);
    let mut state = SearchState::new(cfg);
    let mut current = start;
    record(history, current.clone(), stage, objectives)?;
    history.anchors.push(history.frames.len() - 1);
    let mut current_value = history.values.last().expect("just recorded")[0];
    loop {
        let outcome = search(&current, current_value, &mut *objectives[0], cfg, &mut state, rng)?;
        let SearchOutcome::Found { frame: target, .. } = outcome else {
            return Ok(());
        };
        let path = geodesic_path(&current, &target, cfg.interp_steps)?;
        let skip = usize::from(cfg.interp_steps > 1);
        for f in path.into_iter().skip(skip) {
            record(history, f, stage, objectives)?;
        }
        history.anchors.push(history.frames.len() - 1);
        current = target;
        current_value = history.values.last().expect("just recorded")[0];
    }
}

fn bind<'a, T: Real>(
    x: &'a DataMatrix<T>,
    desc: &IndexDescriptor,
    extra: &[IndexDescriptor],
) -> Result<Vec<IndexObjective<'a, T>>> {
    std::iter::once(desc).chain(extra).map(|d| IndexObjective::new(x, d)).collect()
}

fn abort<T: Real>(history: TourHistory<T>, error: Error) -> Box<TourAborted<T>> {
    Box::new(TourAborted { history, error })
}

/// Guided tour from a random start frame drawn with `cfg.seed`, recording
/// `desc` and every index in `extra` on every frame.
pub fn guided_tour<T: Real>(
    x: &DataMatrix<T>,
    desc: &IndexDescriptor,
    cfg: &OptimizerConfig,
    extra: &[IndexDescriptor],
) -> TourResult<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let start = random_frame(x.ncols(), &mut rng).map_err(|e| abort(TourHistory::new(vec![], 0), e))?;
    guided_tour_from(x, desc, cfg, extra, start, &mut rng)
}

/// [`guided_tour`] from a given start frame and generator.
pub fn guided_tour_from<T: Real, R: Rng + ?Sized>(
    x: &DataMatrix<T>,
    desc: &IndexDescriptor,
    cfg: &OptimizerConfig,
    extra: &[IndexDescriptor],
    start: Frame<T>,
    rng: &mut R,
) -> TourResult<T> {
    let names = std::iter::once(desc).chain(extra).map(|d| d.name().to_string()).collect();
    let mut history = TourHistory::new(names, data_fingerprint(x));
    let mut bound = match bind(x, desc, extra) {
        Ok(b) => b,
        Err(e) => return Err(abort(history, e)),
    };
    let mut objectives: Vec<&mut dyn Objective<T>> = bound.iter_mut().map(|o| o as &mut dyn Objective<T>).collect();
    match run_stage(&mut history, start, &mut objectives, cfg, "guided", rng) {
        Ok(()) => Ok(history),
        Err(e) => Err(abort(history, e)),
    }
}

/// Scouts with `cfg_scout` from a random start, then refines with
/// `cfg_refine` from the scout's last (best) anchor. Frames carry the stage
/// labels `scout` and `refine`; the generator is seeded from `cfg_scout.seed`.
pub fn scout_then_refine<T: Real>(
    x: &DataMatrix<T>,
    desc: &IndexDescriptor,
    cfg_scout: &OptimizerConfig,
    cfg_refine: &OptimizerConfig,
    extra: &[IndexDescriptor],
) -> TourResult<T> {
    let names = std::iter::once(desc).chain(extra).map(|d| d.name().to_string()).collect();
    let mut history = TourHistory::new(names, data_fingerprint(x));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg_scout.seed);
    let result = (|| -> Result<()> {
        if cfg_scout.method == Method::Geodesic || cfg_refine.method != Method::Geodesic {
            return Err(Error::InvalidParameter(
                "scouting uses a random search and refinement uses the geodesic search".into(),
            ));
        }
        let mut bound = bind(x, desc, extra)?;
        let mut objectives: Vec<&mut dyn Objective<T>> =
            bound.iter_mut().map(|o| o as &mut dyn Objective<T>).collect();
        let start = random_frame(x.ncols(), &mut rng)?;
        run_stage(&mut history, start, &mut objectives, cfg_scout, "scout", &mut rng)?;
        let best = history.last_anchor().expect("scout records its start").0.clone();
        let mut rng_refine = ChaCha8Rng::seed_from_u64(cfg_refine.seed);
        run_stage(&mut history, best, &mut objectives, cfg_refine, "refine", &mut rng_refine)?;
        Ok(())
    })();
    match result {
        Ok(()) => Ok(history),
        Err(e) => Err(abort(history, e)),
    }
}
