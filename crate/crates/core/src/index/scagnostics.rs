//! Convex, skinny and stringy measures on binned projections.

use crate::error::{Error, Result};
use crate::index::{IndexParams, Score};
use crate::scag::{
    alpha_hull_from, bin_points_limited, convex_hull, mst, mst_from_triangulation, BinnedPoints, Triangulation,
};
use crate::stats::quantile;
use crate::tour::ProjectedData;
use crate::Real;

/// The three measures, computed together because they share the geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScagMeasures<T> {
    /// `area(alpha hull) / area(convex hull)`
    pub convex: T,
    pub skinny: T,
    pub stringy: T,
    pub alpha: T,
    pub degenerate: bool,
}

/// Alpha radius used when no override is given: the 90th percentile of MST edge lengths.
pub fn default_alpha<T: Real>(edge_lengths: &[T]) -> T {
    let mut v: Vec<f64> = edge_lengths.iter().map(|w| w.as_f64()).collect();
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    T::lit(quantile(&v, 0.9))
}

/// Bins `y` (coarsening the grid until at most `params.max_bins` cells are
/// occupied) and computes the three measures on the occupied cells.
pub fn scag_measures<T: Real>(y: &ProjectedData<T>, params: &IndexParams) -> Result<ScagMeasures<T>> {
    let binned = match bin_points_limited(y, params.bin_cap, params.max_bins) {
        Ok(b) => b,
        Err(Error::DegenerateSpread) => return Ok(collinear(T::one())),
        Err(e) => return Err(e),
    };
    measures_on_bins(&binned, params.alpha_override)
}

fn collinear<T: Real>(stringy: T) -> ScagMeasures<T> {
    ScagMeasures {
        convex: T::one(),
        skinny: T::one(),
        stringy,
        alpha: T::zero(),
        degenerate: true,
    }
}

pub fn measures_on_bins<T: Real>(b: &BinnedPoints<T>, alpha_override: Option<f64>) -> Result<ScagMeasures<T>> {
    if b.len() < 2 {
        return Ok(collinear(T::zero()));
    }
    let tri = match Triangulation::new(&b.points) {
        Ok(t) => t,
        Err(Error::CollinearInput) => {
            let tree = mst(&b.points)?;
            let stringy = ratio(tree.diameter, tree.total_length);
            return Ok(collinear(stringy));
        }
        Err(e) => return Err(e),
    };
    let tree = mst_from_triangulation(&b.points, &tri)?;
    let stringy = ratio(tree.diameter, tree.total_length);
    let alpha = match alpha_override {
        Some(a) => T::lit(a),
        None => {
            let lengths: Vec<T> = tree.edges.iter().map(|e| e.2).collect();
            default_alpha(&lengths)
        }
    };
    let hull = convex_hull(&b.points)?;
    let shape = alpha_hull_from(&b.points, &tri, alpha)?;
    let convex = ratio(shape.area, hull.area);
    let skinny = if shape.perimeter <= T::zero() {
        T::zero()
    } else if shape.area <= T::zero() {
        T::one()
    } else {
        T::one() - (T::lit(4.0) * T::PI() * shape.area).sqrt() / shape.perimeter
    };
    Ok(ScagMeasures {
        convex,
        skinny: clip(skinny),
        stringy,
        alpha,
        degenerate: false,
    })
}

fn ratio<T: Real>(num: T, den: T) -> T {
    if den > T::zero() {
        clip(num / den)
    } else {
        T::zero()
    }
}

fn clip<T: Real>(v: T) -> T {
    v.max(T::zero()).min(T::one())
}

pub fn idx_convex1m<T: Real>(y: &ProjectedData<T>, params: &IndexParams) -> Result<Score<T>> {
    let m = scag_measures(y, params)?;
    if m.degenerate {
        return Ok(Score::degenerate(T::zero()).with_raw(m.convex));
    }
    Ok(Score::new(T::one() - m.convex, m.convex))
}

pub fn idx_skinny<T: Real>(y: &ProjectedData<T>, params: &IndexParams) -> Result<Score<T>> {
    let m = scag_measures(y, params)?;
    Ok(Score::new(m.skinny, m.skinny).flagged(m.degenerate))
}

pub fn idx_stringy<T: Real>(y: &ProjectedData<T>, params: &IndexParams) -> Result<Score<T>> {
    let m = scag_measures(y, params)?;
    Ok(Score::new(m.stringy, m.stringy).flagged(m.degenerate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn disk(n: usize, seed: u64) -> ProjectedData<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pts = Vec::new();
        while pts.len() < n {
            let p = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            if p[0] * p[0] + p[1] * p[1] <= 1.0 {
                pts.push(p);
            }
        }
        ProjectedData::from_points(&pts)
    }

    #[test]
    fn uniform_disk_is_convex_and_round() {
        let y = disk(1000, 3);
        let c = idx_convex1m(&y, &IndexParams::default()).unwrap();
        assert!(c.value <= 0.15, "convex1m {}", c.value);
        let s = idx_skinny(&y, &IndexParams::default()).unwrap();
        assert!(s.value <= 0.2, "skinny {}", s.value);
    }

    #[test]
    fn line_is_maximally_stringy() {
        let pts: Vec<[f64; 2]> = (0..50).map(|i| [i as f64, 2.0 * i as f64 + 1.0]).collect();
        let y = ProjectedData::from_points(&pts);
        assert_eq!(idx_stringy(&y, &IndexParams::default()).unwrap().value, 1.0);
        let c = idx_convex1m(&y, &IndexParams::default()).unwrap();
        assert_eq!(c.value, 0.0);
        assert!(c.degenerate);
        assert_eq!(idx_skinny(&y, &IndexParams::default()).unwrap().value, 1.0);
    }

    #[test]
    fn star_has_half_stringiness() {
        // centre plus four unit arms: diameter 2, length 4
        let pts: [[f64; 2]; 5] = [[0.0, 0.0], [1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]];
        let y = ProjectedData::from_points(&pts);
        let s = idx_stringy(&y, &IndexParams::default()).unwrap();
        assert!((s.value - 0.5).abs() < 1e-12, "{}", s.value);
    }
}
