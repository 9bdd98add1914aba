//! Holes index on whitened projections, rescaled so a bivariate normal sample scores 0.

use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::index::Score;
use crate::tour::ProjectedData;
use crate::Real;

/// Sample size and seed of the simulated normal anchor.
const ANCHOR_SAMPLES: usize = 100_000;
const ANCHOR_SEED: u64 = 0x686f6c6573;

/// Centers and whitens with the symmetric inverse square root of the sample
/// covariance; `None` when the covariance is singular.
fn whiten<T: Real>(y: &ProjectedData<T>) -> Option<(Vec<T>, Vec<T>)> {
    let n = T::from_usize_lossy(y.len());
    let mx = y.x().iter().copied().sum::<T>() / n;
    let my = y.y().iter().copied().sum::<T>() / n;
    let (mut sxx, mut syy, mut sxy) = (T::zero(), T::zero(), T::zero());
    for (&a, &b) in y.x().iter().zip(y.y()) {
        let (da, db) = (a - mx, b - my);
        sxx += da * da;
        syy += db * db;
        sxy += da * db;
    }
    let denom = n - T::one();
    let (sxx, syy, sxy) = (sxx / denom, syy / denom, sxy / denom);
    // closed-form eigen-decomposition of [[sxx, sxy], [sxy, syy]]
    let half = T::lit(0.5);
    let mean = (sxx + syy) * half;
    let rad = ((sxx - syy) * (sxx - syy) * T::lit(0.25) + sxy * sxy).sqrt();
    let (l1, l2) = (mean + rad, mean - rad);
    if !(l1 > T::zero()) || !(l2 > l1 * T::epsilon() * T::lit(1e3)) {
        return None;
    }
    let theta = (T::lit(2.0) * sxy).atan2(sxx - syy) * half;
    let (s, c) = theta.sin_cos();
    let (r1, r2) = (l1.sqrt().recip(), l2.sqrt().recip());
    // W = V diag(r) Vᵀ
    let w00 = c * c * r1 + s * s * r2;
    let w11 = s * s * r1 + c * c * r2;
    let w01 = c * s * (r1 - r2);
    let mut u = Vec::with_capacity(y.len());
    let mut v = Vec::with_capacity(y.len());
    for (&a, &b) in y.x().iter().zip(y.y()) {
        let (da, db) = (a - mx, b - my);
        u.push(w00 * da + w01 * db);
        v.push(w01 * da + w11 * db);
    }
    Some((u, v))
}

/// `(1 − mean exp(−|z|²/2)) / (1 − e⁻¹)` on whitened data; 0 for singular covariance.
pub fn holes_raw<T: Real>(y: &ProjectedData<T>) -> T {
    let Some((u, v)) = whiten(y) else {
        return T::zero();
    };
    let n = T::from_usize_lossy(u.len());
    let half = T::lit(0.5);
    let mean = u
        .iter()
        .zip(&v)
        .map(|(&a, &b)| (-(a * a + b * b) * half).exp())
        .sum::<T>()
        / n;
    (T::one() - mean) / (T::one() - (-T::one()).exp())
}

/// Raw holes value of a large bivariate normal sample.
pub fn normal_anchor() -> f64 {
    static ANCHOR: OnceLock<f64> = OnceLock::new();
    *ANCHOR.get_or_init(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(ANCHOR_SEED);
        let pts: Vec<[f64; 2]> = (0..ANCHOR_SAMPLES)
            .map(|_| [StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)])
            .collect();
        holes_raw(&ProjectedData::from_points(&pts))
    })
}

pub fn idx_holes<T: Real>(y: &ProjectedData<T>) -> Score<T> {
    let raw = holes_raw(y);
    let anchor = T::lit(normal_anchor());
    Score::new((raw - anchor) / (T::one() - anchor), raw)
}
