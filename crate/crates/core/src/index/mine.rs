//! Grid mutual information, MIC and TIC.
//!
//! For a resolution `(kx, ky)` the axis with more bins is equipartitioned and
//! the axis with fewer bins is partitioned optimally by dynamic programming
//! (for `kx = ky` the second coordinate is the equipartitioned one). Each
//! entry of the characteristic matrix is that mutual information divided by
//! `ln(min(kx, ky))`.

use crate::error::{Error, Result};
use crate::index::Score;
use crate::tour::ProjectedData;
use crate::Real;

pub const DEFAULT_MIC_EXPONENT: f64 = 0.6;
pub const DEFAULT_CLUMP_FACTOR: f64 = 15.0;
const MIN_POINTS: usize = 10;

/// Settings shared by MIC and TIC.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MineParams {
    /// The resolution bound is `B(n) = n^exponent`.
    pub exponent: f64,
    /// Maximum number of superclumps per admissible column, relative to the column count.
    pub clump_factor: f64,
}

impl Default for MineParams {
    fn default() -> Self {
        Self {
            exponent: DEFAULT_MIC_EXPONENT,
            clump_factor: DEFAULT_CLUMP_FACTOR,
        }
    }
}

impl MineParams {
    pub fn resolution_bound(&self, n: usize) -> usize {
        ((n as f64).powf(self.exponent) + 1e-9).floor() as usize
    }

    fn validate(&self) -> Result<()> {
        if !(self.exponent > 0.0 && self.exponent <= 1.0) {
            return Err(Error::InvalidParameter(format!("mic_exponent must be in (0, 1], got {}", self.exponent)));
        }
        if !(self.clump_factor >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "mic_clump_factor must be at least 1, got {}",
                self.clump_factor
            )));
        }
        Ok(())
    }
}

/// Empirical TIC maximum for one sample size and parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TicCalibration {
    pub n: usize,
    pub max_estimate: f64,
    pub params: MineParams,
}

/// Normalized mutual information for every admissible resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacteristicMatrix {
    /// `(kx, ky, value)` for `kx, ky ≥ 2` and `kx·ky ≤ B(n)`, ordered by `ky` then `kx`.
    pub entries: Vec<(usize, usize, f64)>,
}

impl CharacteristicMatrix {
    pub fn mic(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, e| m.max(e.2))
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|e| e.2).sum()
    }

    pub fn get(&self, kx: usize, ky: usize) -> Option<f64> {
        self.entries.iter().find(|e| e.0 == kx && e.1 == ky).map(|e| e.2)
    }
}

/// Splits consecutive atomic groups into at most `bins` bins of nearly equal mass.
/// A group never straddles two bins. Returns the bin of each group.
fn equipartition(sizes: &[usize], bins: usize) -> Vec<usize> {
    let total: usize = sizes.iter().sum();
    let mut out = Vec::with_capacity(sizes.len());
    let mut current = 0usize;
    let mut filled = 0usize;
    let mut assigned = 0usize;
    let mut desired = total as f64 / bins as f64;
    for &s in sizes {
        let over = (filled as f64 + s as f64 - desired).abs();
        let under = (filled as f64 - desired).abs();
        if filled > 0 && over >= under && current + 1 < bins {
            current += 1;
            filled = 0;
            desired = (total - assigned) as f64 / (bins - current) as f64;
        }
        out.push(current);
        filled += s;
        assigned += s;
    }
    out
}

fn sorted_order(v: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).expect("finite").then(a.cmp(&b)));
    idx
}

/// Sizes of runs of tied values along `order`.
fn tie_groups(v: &[f64], order: &[usize]) -> Vec<usize> {
    let mut groups = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && v[order[j]] == v[order[i]] {
            j += 1;
        }
        groups.push(j - i);
        i = j;
    }
    groups
}

/// Row of every point when `v` is equipartitioned into `rows` rows, and the number of rows used.
fn row_assignment(v: &[f64], order: &[usize], rows: usize) -> (Vec<usize>, usize) {
    let groups = tie_groups(v, order);
    let bins = equipartition(&groups, rows);
    let mut row = vec![0usize; v.len()];
    let mut pos = 0;
    for (&g, &b) in groups.iter().zip(&bins) {
        for &i in &order[pos..pos + g] {
            row[i] = b;
        }
        pos += g;
    }
    (row, bins.last().map_or(0, |b| b + 1))
}

/// Cumulative row counts at the column-boundary candidates along the
/// optimized axis. `cum[t * q + r]` counts points of row `r` before boundary `t`.
struct Clumps {
    cum: Vec<usize>,
    count: usize,
    q: usize,
}

impl Clumps {
    fn new(u_order: &[usize], u_groups: &[usize], row: &[usize], q: usize, max_clumps: Option<usize>) -> Self {
        // each tied run is atomic; consecutive pure runs of one row merge into a clump
        let mut sizes: Vec<usize> = Vec::new();
        let mut labels: Vec<Option<usize>> = Vec::new();
        let mut pos = 0;
        for &g in u_groups {
            let first = row[u_order[pos]];
            let pure = u_order[pos..pos + g].iter().all(|&i| row[i] == first);
            let label = pure.then_some(first);
            match (labels.last(), label) {
                (Some(&Some(prev)), Some(l)) if prev == l => *sizes.last_mut().expect("non-empty") += g,
                _ => {
                    sizes.push(g);
                    labels.push(label);
                }
            }
            pos += g;
        }
        let mut merged_sizes = sizes;
        if let Some(cap) = max_clumps {
            if merged_sizes.len() > cap {
                let bins = equipartition(&merged_sizes, cap);
                let mut sc = Vec::with_capacity(cap);
                for (&s, &b) in merged_sizes.iter().zip(&bins) {
                    if sc.len() == b {
                        sc.push(0);
                    }
                    sc[b] += s;
                }
                merged_sizes = sc;
            }
        }
        let count = merged_sizes.len();
        let mut cum = vec![0usize; (count + 1) * q];
        let mut pos = 0;
        for (t, &s) in merged_sizes.iter().enumerate() {
            let (head, tail) = cum.split_at_mut((t + 1) * q);
            tail[..q].copy_from_slice(&head[t * q..]);
            for &i in &u_order[pos..pos + s] {
                tail[row[i]] += 1;
            }
            pos += s;
        }
        Self { cum, count, q }
    }
}

/// Best mutual information (nats) with exactly `ℓ` columns for `ℓ = 1..=max_cols`
/// (or the clump count if smaller, later entries repeating the last value).
fn optimize_columns(clumps: &Clumps, xlogx: &[f64], n: usize, max_cols: usize) -> Vec<f64> {
    let k = clumps.count;
    let q = clumps.q;
    let cum = &clumps.cum;
    // entropy of the row partition
    let nf = n as f64;
    let h_rows = (xlogx[n] - (0..q).map(|r| xlogx[cum[k * q + r]]).sum::<f64>()) / nf;
    // cost(s, t) = N log N − Σ c log c over the points between boundaries s and t
    let mut cost = vec![0.0; (k + 1) * (k + 1)];
    for s in 0..k {
        for t in s + 1..=k {
            let mut total = 0usize;
            let mut acc = 0.0;
            for r in 0..q {
                let c = cum[t * q + r] - cum[s * q + r];
                total += c;
                acc += xlogx[c];
            }
            cost[s * (k + 1) + t] = xlogx[total] - acc;
        }
    }
    let mut best = Vec::with_capacity(max_cols);
    let mut f: Vec<f64> = (0..=k).map(|t| cost[t]).collect();
    best.push(h_rows - f[k] / nf);
    let mut g = vec![f64::INFINITY; k + 1];
    for l in 2..=max_cols.min(k) {
        g.iter_mut().for_each(|v| *v = f64::INFINITY);
        for t in l..=k {
            let mut m = f64::INFINITY;
            for s in l - 1..t {
                let v = f[s] + cost[s * (k + 1) + t];
                if v < m {
                    m = v;
                }
            }
            g[t] = m;
        }
        std::mem::swap(&mut f, &mut g);
        best.push(h_rows - f[k] / nf);
    }
    while best.len() < max_cols {
        let last = *best.last().expect("non-empty");
        best.push(last);
    }
    best
}

fn xlogx_table(n: usize) -> Vec<f64> {
    (0..=n).map(|c| if c == 0 { 0.0 } else { c as f64 * (c as f64).ln() }).collect()
}

struct Axis<'a> {
    v: &'a [f64],
    order: Vec<usize>,
    groups: Vec<usize>,
}

impl<'a> Axis<'a> {
    fn new(v: &'a [f64]) -> Self {
        let order = sorted_order(v);
        let groups = tie_groups(v, &order);
        Self { v, order, groups }
    }
}

/// Reports `(columns, rows, value)` for every resolution whose row count is
/// at least its column count (strictly more when `strict`), with `rows` axis
/// equipartitioned and the `cols` axis optimized.
fn one_orientation(
    cols: &Axis<'_>,
    rows: &Axis<'_>,
    bound: usize,
    clump_factor: Option<f64>,
    strict: bool,
    xlogx: &[f64],
    mut record: impl FnMut(usize, usize, f64),
) {
    let n = cols.v.len();
    for r in 2..=bound / 2 {
        let c_max = (bound / r).min(if strict { r - 1 } else { r });
        if c_max < 2 {
            continue;
        }
        let (row, q) = row_assignment(rows.v, &rows.order, r);
        let cap = clump_factor.map(|f| ((f * c_max as f64).ceil() as usize).max(c_max));
        let clumps = Clumps::new(&cols.order, &cols.groups, &row, q, cap);
        let info = optimize_columns(&clumps, xlogx, n, c_max);
        for c in 2..=c_max {
            let norm = (c.min(r) as f64).ln();
            record(c, r, (info[c - 1] / norm).clamp(0.0, 1.0));
        }
    }
}

fn to_f64<T: Real>(v: &[T]) -> Vec<f64> {
    v.iter().map(|a| a.as_f64()).collect()
}

/// Characteristic matrix over all resolutions with `kx·ky ≤ B(n)`.
pub fn characteristic_matrix<T: Real>(y: &ProjectedData<T>, params: &MineParams) -> Result<CharacteristicMatrix> {
    params.validate()?;
    let n = y.len();
    if n < MIN_POINTS {
        return Err(Error::TooFewPoints { needed: MIN_POINTS, got: n });
    }
    let xs = to_f64(y.x());
    let ys = to_f64(y.y());
    let ax = Axis::new(&xs);
    let ay = Axis::new(&ys);
    let bound = params.resolution_bound(n);
    let xlogx = xlogx_table(n);
    let mut entries: Vec<(usize, usize, f64)> = Vec::new();
    // the axis with more bins is equipartitioned, the other is optimized
    one_orientation(&ax, &ay, bound, Some(params.clump_factor), false, &xlogx, |kx, ky, v| {
        entries.push((kx, ky, v))
    });
    one_orientation(&ay, &ax, bound, Some(params.clump_factor), true, &xlogx, |ky, kx, v| {
        entries.push((kx, ky, v))
    });
    entries.sort_by(|a, b| (a.1, a.0).cmp(&(b.1, b.0)));
    Ok(CharacteristicMatrix { entries })
}

/// Normalized mutual information at a single resolution, with the second
/// coordinate equipartitioned into `ky` rows and the first coordinate
/// partitioned optimally into at most `kx` columns (no superclump approximation).
pub fn idx_mi_grid<T: Real>(y: &ProjectedData<T>, kx: usize, ky: usize) -> Result<T> {
    if kx < 2 || ky < 2 {
        return Err(Error::InvalidParameter(format!("grid resolution must be at least 2x2, got {kx}x{ky}")));
    }
    let xs = to_f64(y.x());
    let ys = to_f64(y.y());
    let ax = Axis::new(&xs);
    let ay = Axis::new(&ys);
    let (row, q) = row_assignment(&ys, &ay.order, ky);
    let clumps = Clumps::new(&ax.order, &ax.groups, &row, q, None);
    let info = optimize_columns(&clumps, &xlogx_table(xs.len()), xs.len(), kx);
    let norm = (kx.min(ky) as f64).ln();
    Ok(T::lit((info[kx - 1] / norm).clamp(0.0, 1.0)))
}

pub fn idx_mic<T: Real>(y: &ProjectedData<T>, params: &MineParams) -> Result<Score<T>> {
    let mic = T::lit(characteristic_matrix(y, params)?.mic());
    Ok(Score::new(mic, mic))
}

/// Unscaled total information coefficient: the sum of the characteristic matrix.
pub fn tic_raw<T: Real>(y: &ProjectedData<T>, params: &MineParams) -> Result<f64> {
    Ok(characteristic_matrix(y, params)?.total())
}

pub fn idx_tic<T: Real>(y: &ProjectedData<T>, params: &MineParams, cal: Option<&TicCalibration>) -> Result<Score<T>> {
    let n = y.len();
    let cal = match cal {
        Some(c) if c.n == n && c.params == *params => c,
        _ => return Err(Error::CalibrationRequired(n)),
    };
    let raw = tic_raw(y, params)?;
    Ok(Score::new(T::lit(raw / cal.max_estimate), T::lit(raw)))
}

/// TIC of the perfectly dependent reference `y₂ = y₁`, `y₁` equispaced on `[0, 1]`.
pub fn calibrate_tic(n: usize, params: &MineParams) -> Result<TicCalibration> {
    if n < MIN_POINTS {
        return Err(Error::TooFewPoints { needed: MIN_POINTS, got: n });
    }
    let t: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
    let reference = ProjectedData::new(t.clone(), t)?;
    let max_estimate = tic_raw(&reference, params)?;
    if !(max_estimate > 0.0) {
        return Err(Error::IndexEvaluation("TIC calibration produced a non-positive maximum".into()));
    }
    Ok(TicCalibration {
        n,
        max_estimate,
        params: *params,
    })
}
