//! The eight projection-pursuit indexes and a uniform way to evaluate them.
//!
//! Every index maps a two-column projection to a value in `[0, 1]`.
//! [`IndexDescriptor`] names an index together with its parameters and is the
//! unit the optimizer, the diagnostics and the command line work with.

mod dcor;
mod holes;
mod mine;
mod scagnostics;
mod splines;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use dcor::{dcor2, idx_dcor2d};
pub use holes::{holes_raw, idx_holes, normal_anchor};
pub use mine::{
    calibrate_tic, characteristic_matrix, idx_mi_grid, idx_mic, idx_tic, tic_raw, CharacteristicMatrix, MineParams,
    TicCalibration, DEFAULT_CLUMP_FACTOR, DEFAULT_MIC_EXPONENT,
};
pub use scagnostics::{default_alpha, idx_convex1m, idx_skinny, idx_stringy, measures_on_bins, scag_measures, ScagMeasures};
pub use splines::{idx_splines2d, smoothing_spline_r2, SplineFit};

use crate::error::{Error, Result};
use crate::scag::{DEFAULT_BIN_CAP, DEFAULT_MAX_BINS};
use crate::tour::{project, random_frame, DataMatrix, Frame, Geodesic, ProjectedData};
use crate::Real;

/// An index value. `value` is clipped to `[0, 1]`; `raw` is the quantity
/// before rescaling or inversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Score<T> {
    pub value: T,
    pub raw: T,
    /// Set when the input geometry was degenerate and a fallback value was used.
    pub degenerate: bool,
}

impl<T: Real> Score<T> {
    pub fn new(value: T, raw: T) -> Self {
        let value = if value.is_nan() { T::zero() } else { value.max(T::zero()).min(T::one()) };
        Self {
            value,
            raw,
            degenerate: false,
        }
    }

    pub fn degenerate(value: T) -> Self {
        Self {
            degenerate: true,
            ..Self::new(value, value)
        }
    }

    pub fn with_raw(mut self, raw: T) -> Self {
        self.raw = raw;
        self
    }

    pub fn flagged(mut self, degenerate: bool) -> Self {
        self.degenerate |= degenerate;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndexKind {
    Holes,
    Convex1m,
    Skinny,
    Stringy,
    Dcor2d,
    Splines2d,
    Mic,
    Tic,
}

impl IndexKind {
    pub const ALL: [IndexKind; 8] = [
        IndexKind::Holes,
        IndexKind::Convex1m,
        IndexKind::Skinny,
        IndexKind::Stringy,
        IndexKind::Dcor2d,
        IndexKind::Splines2d,
        IndexKind::Mic,
        IndexKind::Tic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IndexKind::Holes => "holes",
            IndexKind::Convex1m => "convex1m",
            IndexKind::Skinny => "skinny",
            IndexKind::Stringy => "stringy",
            IndexKind::Dcor2d => "dcor2d",
            IndexKind::Splines2d => "splines2d",
            IndexKind::Mic => "mic",
            IndexKind::Tic => "tic",
        }
    }

    /// Whether the value is unchanged by rotating the projection within its plane.
    pub fn rotation_invariant(self) -> bool {
        matches!(self, IndexKind::Holes | IndexKind::Convex1m | IndexKind::Mic)
    }
}

impl fmt::Display for IndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IndexKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IndexKind::ALL
            .into_iter()
            .find(|k| k.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::UnknownIndex(s.to_string()))
    }
}

/// Tunable parameters. Each index reads only the fields that concern it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexParams {
    pub bin_cap: usize,
    /// The scagnostic grid is coarsened until at most this many cells are occupied.
    pub max_bins: usize,
    pub alpha_override: Option<f64>,
    pub mic_exponent: f64,
    pub mic_clump_factor: f64,
    pub spline_df_min: f64,
    pub spline_df_max: f64,
}

impl Default for IndexParams {
    fn default() -> Self {
        Self {
            bin_cap: DEFAULT_BIN_CAP,
            max_bins: DEFAULT_MAX_BINS,
            alpha_override: None,
            mic_exponent: DEFAULT_MIC_EXPONENT,
            mic_clump_factor: DEFAULT_CLUMP_FACTOR,
            spline_df_min: 2.0,
            spline_df_max: 15.0,
        }
    }
}

impl IndexParams {
    pub const NAMES: [&'static str; 7] = [
        "bin_cap",
        "max_bins",
        "alpha_override",
        "mic_exponent",
        "mic_clump_factor",
        "spline_df_min",
        "spline_df_max",
    ];

    pub fn mine(&self) -> MineParams {
        MineParams {
            exponent: self.mic_exponent,
            clump_factor: self.mic_clump_factor,
        }
    }

    /// Sets a parameter by name.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        let bad = || Error::InvalidParameter(format!("{name} = {value}"));
        match name {
            "bin_cap" => {
                if !(value >= 2.0 && value.fract() == 0.0 && value <= 4096.0) {
                    return Err(bad());
                }
                self.bin_cap = value as usize;
            }
            "max_bins" => {
                if !(value >= 3.0 && value.fract() == 0.0) {
                    return Err(bad());
                }
                self.max_bins = value as usize;
            }
            "alpha_override" => {
                if !(value > 0.0) {
                    return Err(bad());
                }
                self.alpha_override = Some(value);
            }
            "mic_exponent" => {
                if !(value > 0.0 && value <= 1.0) {
                    return Err(bad());
                }
                self.mic_exponent = value;
            }
            "mic_clump_factor" => {
                if !(value >= 1.0) {
                    return Err(bad());
                }
                self.mic_clump_factor = value;
            }
            "spline_df_min" => {
                if !(value >= 1.0 && value <= self.spline_df_max) {
                    return Err(bad());
                }
                self.spline_df_min = value;
            }
            "spline_df_max" => {
                if !(value >= self.spline_df_min) {
                    return Err(bad());
                }
                self.spline_df_max = value;
            }
            _ => return Err(Error::InvalidParameter(format!("unknown parameter {name}"))),
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        match name {
            "bin_cap" => Some(self.bin_cap as f64),
            "max_bins" => Some(self.max_bins as f64),
            "alpha_override" => self.alpha_override,
            "mic_exponent" => Some(self.mic_exponent),
            "mic_clump_factor" => Some(self.mic_clump_factor),
            "spline_df_min" => Some(self.spline_df_min),
            "spline_df_max" => Some(self.spline_df_max),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmoothingMethod {
    Mean,
    Median,
}

/// Averages an index over `window − 1` fixed nearby frames plus the frame itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Smoothing {
    pub window: usize,
    pub method: SmoothingMethod,
    /// Angular distance of the neighbouring frames, in radians.
    pub step: f64,
    pub seed: u64,
}

/// A named index with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexDescriptor {
    pub kind: IndexKind,
    pub params: IndexParams,
    pub tic_calibration: Option<TicCalibration>,
    pub smoothing: Option<Smoothing>,
}

impl IndexDescriptor {
    pub fn new(kind: IndexKind) -> Self {
        Self {
            kind,
            params: IndexParams::default(),
            tic_calibration: None,
            smoothing: None,
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Ok(Self::new(name.parse()?))
    }

    pub fn with_params(mut self, params: IndexParams) -> Self {
        self.params = params;
        self
    }

    pub fn with_smoothing(mut self, smoothing: Smoothing) -> Self {
        self.smoothing = Some(smoothing);
        self
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    /// Computes anything that depends only on the sample size (the TIC
    /// calibration). Other indexes need no preparation.
    pub fn prepare(&mut self, n: usize) -> Result<()> {
        if self.kind == IndexKind::Tic {
            let params = self.params.mine();
            let fresh = self.tic_calibration.map_or(true, |c| c.n != n || c.params != params);
            if fresh {
                self.tic_calibration = Some(calibrate_tic(n, &params)?);
            }
        }
        Ok(())
    }

    pub fn prepared(mut self, n: usize) -> Result<Self> {
        self.prepare(n)?;
        Ok(self)
    }

    /// Evaluates on a projection. Smoothed descriptors need the frame; use
    /// [`IndexDescriptor::evaluate_at`] for those.
    pub fn score<T: Real>(&self, y: &ProjectedData<T>) -> Result<Score<T>> {
        if self.smoothing.is_some() {
            return Err(Error::RequiresFrame);
        }
        self.score_unsmoothed(y)
    }

    fn score_unsmoothed<T: Real>(&self, y: &ProjectedData<T>) -> Result<Score<T>> {
        let p = &self.params;
        match self.kind {
            IndexKind::Holes => Ok(idx_holes(y)),
            IndexKind::Convex1m => idx_convex1m(y, p),
            IndexKind::Skinny => idx_skinny(y, p),
            IndexKind::Stringy => idx_stringy(y, p),
            IndexKind::Dcor2d => Ok(idx_dcor2d(y)),
            IndexKind::Splines2d => idx_splines2d(y, p),
            IndexKind::Mic => idx_mic(y, &p.mine()),
            IndexKind::Tic => idx_tic(y, &p.mine(), self.tic_calibration.as_ref()),
        }
    }

    pub fn evaluate<T: Real>(&self, y: &ProjectedData<T>) -> Result<T> {
        Ok(self.score(y)?.value)
    }

    /// Evaluates on the projection of `x` onto `frame`, applying smoothing if configured.
    pub fn evaluate_at<T: Real>(&self, x: &DataMatrix<T>, frame: &Frame<T>) -> Result<T> {
        let Some(sm) = self.smoothing.filter(|s| s.window > 1) else {
            return Ok(self.score_unsmoothed(&project(x, frame)?)?.value);
        };
        let mut values = Vec::with_capacity(sm.window);
        values.push(self.score_unsmoothed(&project(x, frame)?)?.value.as_f64());
        for f in smoothing_frames(frame, &sm)? {
            values.push(self.score_unsmoothed(&project(x, &f)?)?.value.as_f64());
        }
        let v = match sm.method {
            SmoothingMethod::Mean => crate::stats::mean(&values),
            SmoothingMethod::Median => crate::stats::median(&values),
        };
        Ok(T::lit(v))
    }
}

impl fmt::Display for IndexDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The neighbouring frames used to smooth an index at `frame`: the same
/// seeded random targets every call, each approached by `step` radians.
pub fn smoothing_frames<T: Real>(frame: &Frame<T>, sm: &Smoothing) -> Result<Vec<Frame<T>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(sm.seed);
    let mut out = Vec::with_capacity(sm.window.saturating_sub(1));
    while out.len() + 1 < sm.window {
        let target = random_frame(frame.dim(), &mut rng)?;
        let g = Geodesic::between(frame, &target)?.without_spin();
        if g.length() > T::lit(1e-6) {
            out.push(g.at_angle(T::lit(sm.step)));
        }
    }
    Ok(out)
}

/// Evaluates `desc` on `y`.
pub fn evaluate<T: Real>(desc: &IndexDescriptor, y: &ProjectedData<T>) -> Result<T> {
    desc.evaluate(y)
}

/// Evaluates `desc` on `y`, keeping the raw value and degeneracy flag.
pub fn evaluate_detailed<T: Real>(desc: &IndexDescriptor, y: &ProjectedData<T>) -> Result<Score<T>> {
    desc.score(y)
}
