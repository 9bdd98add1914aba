use crate::error::{Error, Result};
use crate::tour::ProjectedData;
use crate::Real;

pub const DEFAULT_BIN_CAP: usize = 40;
/// Occupied-cell limit used by the scagnostic indexes.
pub const DEFAULT_MAX_BINS: usize = 250;

/// Centroids of occupied grid cells, scaled to the unit square, with counts.
#[derive(Debug, Clone, PartialEq)]
pub struct BinnedPoints<T> {
    pub points: Vec<[T; 2]>,
    pub weights: Vec<usize>,
}

impl<T: Real> BinnedPoints<T> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Unit-weight points, for geometry that skips the binning step.
    pub fn from_points(points: Vec<[T; 2]>) -> Self {
        let weights = vec![1; points.len()];
        Self { points, weights }
    }
}

/// Min-max scales both coordinates into `[0, 1]` and aggregates them on a
/// `bin_cap × bin_cap` grid.
///
/// Output cells are ordered by grid position and each centroid is summed in
/// sorted coordinate order, so the result does not depend on the row order.
pub fn bin_points<T: Real>(y: &ProjectedData<T>, bin_cap: usize) -> Result<BinnedPoints<T>> {
    let (sx, sy) = scaled(y, bin_cap)?;
    Ok(aggregate(&sx, &sy, bin_cap))
}

/// Like [`bin_points`], but coarsens the grid one step at a time until at
/// most `max_bins` cells are occupied.
pub fn bin_points_limited<T: Real>(y: &ProjectedData<T>, bin_cap: usize, max_bins: usize) -> Result<BinnedPoints<T>> {
    let (sx, sy) = scaled(y, bin_cap)?;
    let mut cap = bin_cap;
    let mut seen = vec![false; bin_cap * bin_cap];
    while cap > 1 {
        seen[..cap * cap].iter_mut().for_each(|s| *s = false);
        let mut occupied = 0;
        for (&a, &b) in sx.iter().zip(&sy) {
            let k = cell(a, cap) * cap + cell(b, cap);
            if !seen[k] {
                seen[k] = true;
                occupied += 1;
            }
        }
        if occupied <= max_bins {
            break;
        }
        cap -= 1;
    }
    Ok(aggregate(&sx, &sy, cap))
}

fn scaled<T: Real>(y: &ProjectedData<T>, bin_cap: usize) -> Result<(Vec<T>, Vec<T>)> {
    let n = y.len();
    if n < 3 {
        return Err(Error::TooFewPoints { needed: 3, got: n });
    }
    if bin_cap < 1 {
        return Err(Error::InvalidParameter("bin_cap must be positive".into()));
    }
    let scale = |v: &[T]| -> Result<Vec<T>> {
        let (lo, hi) = v
            .iter()
            .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &x| (lo.min(x), hi.max(x)));
        let range = hi - lo;
        if !(range > T::zero()) {
            return Err(Error::DegenerateSpread);
        }
        Ok(v.iter().map(|&x| ((x - lo) / range).min(T::one()).max(T::zero())).collect())
    };
    Ok((scale(y.x())?, scale(y.y())?))
}

fn cell<T: Real>(v: T, cap: usize) -> usize {
    let c = (v * T::from_usize_lossy(cap)).floor().to_usize().unwrap_or(0);
    c.min(cap - 1)
}

fn aggregate<T: Real>(sx: &[T], sy: &[T], cap: usize) -> BinnedPoints<T> {
    let mut keyed: Vec<(usize, T, T)> = sx
        .iter()
        .zip(sy)
        .map(|(&a, &b)| (cell(a, cap) * cap + cell(b, cap), a, b))
        .collect();
    keyed.sort_by(|l, r| {
        l.0.cmp(&r.0)
            .then(l.1.partial_cmp(&r.1).expect("finite"))
            .then(l.2.partial_cmp(&r.2).expect("finite"))
    });
    let mut points = Vec::new();
    let mut weights = Vec::new();
    let mut start = 0;
    while start < keyed.len() {
        let key = keyed[start].0;
        let mut end = start;
        let (mut ax, mut ay) = (T::zero(), T::zero());
        while end < keyed.len() && keyed[end].0 == key {
            ax += keyed[end].1;
            ay += keyed[end].2;
            end += 1;
        }
        let count = end - start;
        let c = T::from_usize_lossy(count);
        points.push([(ax / c).min(T::one()), (ay / c).min(T::one())]);
        weights.push(count);
        start = end;
    }
    BinnedPoints { points, weights }
}
