//! Functional-dependence index from cubic smoothing splines.
//!
//! Each direction fits a penalized cubic B-spline (integrated squared second
//! derivative penalty, knots at quantiles of the distinct predictor values)
//! with the smoothing parameter chosen by generalized cross-validation inside
//! an effective-degrees-of-freedom window. The grid for `log10 λ` runs from
//! −8 to 24 relative to the trace ratio of the Gram and penalty matrices.

use crate::error::{Error, Result};
use crate::index::{IndexParams, Score};
use crate::linalg::{cholesky, cholesky_solve};
use crate::tour::ProjectedData;
use crate::Real;

const DEGREE: usize = 3;
const MAX_INTERIOR_KNOTS: usize = 16;
/// Below this many distinct predictor values the fit is the group means.
const MIN_DISTINCT: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplineFit<T> {
    /// `1 − Var(residual) / Var(response)`
    pub r2: T,
    pub edf: T,
    pub log10_lambda: T,
}

struct Basis<T> {
    knots: Vec<T>,
    count: usize,
}

impl<T: Real> Basis<T> {
    fn new(sorted_unique: &[T], interior: usize) -> Self {
        let d = sorted_unique.len();
        let mut knots = vec![T::zero(); DEGREE + 1];
        for i in 1..=interior {
            let pos = (i * (d - 1)) as f64 / (interior + 1) as f64;
            let k = sorted_unique[pos.round() as usize];
            if k > *knots.last().expect("non-empty") && k < T::one() {
                knots.push(k);
            }
        }
        knots.extend(std::iter::repeat(T::one()).take(DEGREE + 1));
        let count = knots.len() - DEGREE - 1;
        Self { knots, count }
    }

    fn span(&self, u: T) -> usize {
        let last = self.count - 1;
        if u >= self.knots[last + 1] {
            return last;
        }
        // largest s in [DEGREE, last] with knots[s] <= u
        let mut lo = DEGREE;
        let mut hi = last + 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.knots[mid] <= u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Values and first two derivatives of the four basis functions that are
    /// nonzero on `span`, i.e. `N_{span-3} .. N_{span}`.
    fn derivatives(&self, span: usize, u: T) -> [[T; DEGREE + 1]; 3] {
        let p = DEGREE;
        let t = &self.knots;
        let mut ndu = [[T::zero(); DEGREE + 1]; DEGREE + 1];
        let mut left = [T::zero(); DEGREE + 1];
        let mut right = [T::zero(); DEGREE + 1];
        ndu[0][0] = T::one();
        for j in 1..=p {
            left[j] = u - t[span + 1 - j];
            right[j] = t[span + j] - u;
            let mut saved = T::zero();
            for r in 0..j {
                ndu[j][r] = right[r + 1] + left[j - r];
                let temp = ndu[r][j - 1] / ndu[j][r];
                ndu[r][j] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            ndu[j][j] = saved;
        }
        let mut ders = [[T::zero(); DEGREE + 1]; 3];
        for j in 0..=p {
            ders[0][j] = ndu[j][p];
        }
        let p_i = p as isize;
        for r in 0..=p_i {
            let mut a = [[T::zero(); DEGREE + 1]; 2];
            let (mut s1, mut s2) = (0usize, 1usize);
            a[0][0] = T::one();
            for k in 1..=2isize {
                let mut d = T::zero();
                let rk = r - k;
                let pk = p_i - k;
                if r >= k {
                    a[s2][0] = a[s1][0] / ndu[(pk + 1) as usize][rk as usize];
                    d = a[s2][0] * ndu[rk as usize][pk as usize];
                }
                let j1 = if rk >= -1 { 1 } else { -rk };
                let j2 = if r - 1 <= pk { k - 1 } else { p_i - r };
                for j in j1..=j2 {
                    a[s2][j as usize] = (a[s1][j as usize] - a[s1][(j - 1) as usize])
                        / ndu[(pk + 1) as usize][(rk + j) as usize];
                    d += a[s2][j as usize] * ndu[(rk + j) as usize][pk as usize];
                }
                if r <= pk {
                    a[s2][k as usize] = -a[s1][(k - 1) as usize] / ndu[(pk + 1) as usize][r as usize];
                    d += a[s2][k as usize] * ndu[r as usize][pk as usize];
                }
                ders[k as usize][r as usize] = d;
                std::mem::swap(&mut s1, &mut s2);
            }
        }
        let mut factor = T::from_usize_lossy(p);
        for (k, row) in ders.iter_mut().enumerate().skip(1) {
            row.iter_mut().for_each(|v| *v *= factor);
            factor *= T::from_usize_lossy(p - k);
        }
        ders
    }

    /// `∫ B_i'' B_j''` over `[0, 1]`, exact because `B''` is piecewise linear.
    fn penalty(&self) -> Vec<T> {
        let nb = self.count;
        let mut s = vec![T::zero(); nb * nb];
        let six = T::lit(6.0);
        for span in DEGREE..nb {
            let (a, b) = (self.knots[span], self.knots[span + 1]);
            let h = b - a;
            if h <= T::zero() {
                continue;
            }
            let da = self.derivatives(span, a)[2];
            let db = self.derivatives(span, b)[2];
            for i in 0..=DEGREE {
                for j in 0..=DEGREE {
                    let v = h / six
                        * (T::lit(2.0) * da[i] * da[j] + da[i] * db[j] + db[i] * da[j] + T::lit(2.0) * db[i] * db[j]);
                    s[(span - DEGREE + i) * nb + span - DEGREE + j] += v;
                }
            }
        }
        s
    }
}

/// Fits `response ~ s(predictor)` and reports the explained variance.
pub fn smoothing_spline_r2<T: Real>(predictor: &[T], response: &[T], df_min: f64, df_max: f64) -> Result<SplineFit<T>> {
    let n = predictor.len();
    if n != response.len() {
        return Err(Error::Shape("predictor and response lengths differ".into()));
    }
    let nf = T::from_usize_lossy(n);
    let (lo, hi) = predictor
        .iter()
        .fold((T::infinity(), T::neg_infinity()), |(l, h), &v| (l.min(v), h.max(v)));
    let my = response.iter().copied().sum::<T>() / nf;
    let vy = response.iter().map(|&v| (v - my) * (v - my)).sum::<T>() / nf;
    if !(hi > lo) || !(vy > T::zero()) {
        return Ok(SplineFit {
            r2: T::zero(),
            edf: T::zero(),
            log10_lambda: T::infinity(),
        });
    }
    let sdy = vy.sqrt();
    let u: Vec<T> = predictor.iter().map(|&v| ((v - lo) / (hi - lo)).min(T::one())).collect();
    let z: Vec<T> = response.iter().map(|&v| (v - my) / sdy).collect();
    let mut uniq = u.clone();
    uniq.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    uniq.dedup();
    if uniq.len() < MIN_DISTINCT {
        return Ok(group_mean_fit(&u, &z, &uniq));
    }
    let interior = MAX_INTERIOR_KNOTS.min(uniq.len() - 4);
    let basis = Basis::new(&uniq, interior);
    let nb = basis.count;
    let mut gram = vec![T::zero(); nb * nb];
    let mut rhs = vec![T::zero(); nb];
    let mut spans = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n);
    for (&ui, &zi) in u.iter().zip(&z) {
        let span = basis.span(ui);
        let b = basis.derivatives(span, ui)[0];
        let off = span - DEGREE;
        for i in 0..=DEGREE {
            rhs[off + i] += b[i] * zi;
            for j in 0..=DEGREE {
                gram[(off + i) * nb + off + j] += b[i] * b[j];
            }
        }
        spans.push(off);
        values.push(b);
    }
    let zz = z.iter().map(|&v| v * v).sum::<T>();
    let penalty = basis.penalty();
    let trace = |m: &[T]| (0..nb).map(|i| m[i * nb + i]).sum::<T>();
    let scale = trace(&gram) / trace(&penalty);
    let ridge = trace(&gram) / T::from_usize_lossy(nb) * T::lit(1e-10);

    let solve = |log_lambda: f64| -> Option<(f64, T, Vec<T>)> {
        let lambda = scale * T::lit(10f64.powf(log_lambda));
        let a: Vec<T> = gram
            .iter()
            .zip(&penalty)
            .enumerate()
            .map(|(k, (&g, &s))| g + lambda * s + if k % (nb + 1) == 0 { ridge } else { T::zero() })
            .collect();
        let l = cholesky(&a, nb)?;
        let mut beta = rhs.clone();
        cholesky_solve(&l, nb, &mut beta);
        let mut edf = T::zero();
        let mut col = vec![T::zero(); nb];
        for j in 0..nb {
            for i in 0..nb {
                col[i] = gram[i * nb + j];
            }
            cholesky_solve(&l, nb, &mut col);
            edf += col[j];
        }
        let mut fit_sq = T::zero();
        for i in 0..nb {
            for j in 0..nb {
                fit_sq += beta[i] * gram[i * nb + j] * beta[j];
            }
        }
        let cross = beta.iter().zip(&rhs).map(|(&b, &r)| b * r).sum::<T>();
        let rss = (zz - T::lit(2.0) * cross + fit_sq).max(T::zero());
        let resid_df = nf - edf;
        if !(resid_df > T::zero()) {
            return None;
        }
        let edf_f = edf.as_f64();
        if edf_f > df_max + 1e-9 || edf_f < df_min - 1e-9 {
            return None;
        }
        let gcv = (nf * rss / (resid_df * resid_df)).as_f64();
        Some((gcv, edf, beta))
    };

    let grid: Vec<f64> = (0..=64).map(|i| -8.0 + 0.5 * i as f64).collect();
    let mut best: Option<(f64, f64)> = None;
    for &l in &grid {
        match solve(l) {
            Some((g, _, _)) => {
                if best.map_or(true, |b| g < b.1) {
                    best = Some((l, g));
                }
            }
            // past the lower df bound everything smoother is infeasible too
            None if best.is_some() => break,
            None => {}
        }
    }
    let (mut best_l, _) = best.ok_or_else(|| Error::IndexEvaluation("no smoothing parameter satisfies the df bounds".into()))?;
    // golden-section refinement around the grid minimum
    let gcv_at = |l: f64| solve(l).map_or(f64::INFINITY, |s| s.0);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (best_l - 0.5, best_l + 0.5);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (gcv_at(c), gcv_at(d));
    for _ in 0..12 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = gcv_at(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = gcv_at(d);
        }
    }
    let refined = if fc < fd { c } else { d };
    if gcv_at(refined) < gcv_at(best_l) {
        best_l = refined;
    }
    let (_, edf, beta) = solve(best_l).expect("feasible smoothing parameter");
    let mut resid = Vec::with_capacity(n);
    for ((&off, b), &zi) in spans.iter().zip(&values).zip(&z) {
        let fitted = (0..=DEGREE).map(|i| b[i] * beta[off + i]).sum::<T>();
        resid.push(zi - fitted);
    }
    let mr = resid.iter().copied().sum::<T>() / nf;
    let vr = resid.iter().map(|&r| (r - mr) * (r - mr)).sum::<T>() / nf;
    let vz = z.iter().map(|&v| v * v).sum::<T>() / nf;
    Ok(SplineFit {
        r2: T::one() - vr / vz,
        edf,
        log10_lambda: T::lit(best_l),
    })
}

fn group_mean_fit<T: Real>(u: &[T], z: &[T], uniq: &[T]) -> SplineFit<T> {
    let mut sums = vec![(T::zero(), 0usize); uniq.len()];
    for (&ui, &zi) in u.iter().zip(z) {
        let k = uniq.partition_point(|&v| v < ui);
        sums[k].0 += zi;
        sums[k].1 += 1;
    }
    let nf = T::from_usize_lossy(z.len());
    let mut rss = T::zero();
    for (&ui, &zi) in u.iter().zip(z) {
        let k = uniq.partition_point(|&v| v < ui);
        let m = sums[k].0 / T::from_usize_lossy(sums[k].1);
        rss += (zi - m) * (zi - m);
    }
    let tss = z.iter().map(|&v| v * v).sum::<T>();
    let _ = nf;
    SplineFit {
        r2: T::one() - rss / tss,
        edf: T::from_usize_lossy(uniq.len()),
        log10_lambda: T::neg_infinity(),
    }
}

pub fn idx_splines2d<T: Real>(y: &ProjectedData<T>, params: &IndexParams) -> Result<Score<T>> {
    let (df_min, df_max) = (params.spline_df_min, params.spline_df_max);
    if y.len() < 10 {
        return Err(Error::TooFewPoints { needed: 10, got: y.len() });
    }
    let spread = |v: &[T]| v.iter().any(|&a| a != v[0]);
    if !spread(y.x()) || !spread(y.y()) {
        return Ok(Score::degenerate(T::zero()));
    }
    let a = smoothing_spline_r2(y.x(), y.y(), df_min, df_max)?;
    let b = smoothing_spline_r2(y.y(), y.x(), df_min, df_max)?;
    let raw = a.r2.max(b.r2);
    Ok(Score::new(raw, raw))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn basis_is_partition_of_unity_with_zero_derivative_sum() {
        let uniq: Vec<f64> = (0..50).map(|i| (i as f64 / 49.0).powi(2)).collect();
        let basis = Basis::new(&uniq, 10);
        for k in 0..=100 {
            let u = k as f64 / 100.0;
            let d = basis.derivatives(basis.span(u), u);
            assert!((d[0].iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(d[1].iter().sum::<f64>().abs() < 1e-9);
            assert!(d[2].iter().sum::<f64>().abs() < 1e-7);
        }
    }

    #[test]
    fn penalty_matches_quadrature() {
        let uniq: Vec<f64> = (0..40).map(|i| i as f64 / 39.0).collect();
        let basis = Basis::new(&uniq, 6);
        let nb = basis.count;
        let s = basis.penalty();
        // midpoint rule on a fine grid
        let steps = 20_000;
        let mut q = vec![0.0; nb * nb];
        for k in 0..steps {
            let u = (k as f64 + 0.5) / steps as f64;
            let span = basis.span(u);
            let d2 = basis.derivatives(span, u)[2];
            for i in 0..4 {
                for j in 0..4 {
                    q[(span - 3 + i) * nb + span - 3 + j] += d2[i] * d2[j] / steps as f64;
                }
            }
        }
        for (a, b) in s.iter().zip(&q) {
            assert!((a - b).abs() < 1e-3 * (1.0 + b.abs()), "{a} vs {b}");
        }
    }

    #[test]
    fn noiseless_sine_is_functional() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let x: Vec<f64> = (0..1000).map(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI)).collect();
        let y: Vec<f64> = x.iter().map(|v| v.sin()).collect();
        let s = idx_splines2d(&ProjectedData::new(x, y).unwrap(), &IndexParams::default()).unwrap();
        assert!(s.value >= 0.99, "{}", s.value);
    }

    #[test]
    fn circle_is_not_functional() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let pts: Vec<[f64; 2]> = (0..1000)
            .map(|_| {
                let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                [t.cos(), t.sin()]
            })
            .collect();
        let s = idx_splines2d(&ProjectedData::from_points(&pts), &IndexParams::default()).unwrap();
        assert!(s.value <= 0.07, "{}", s.value);
    }

    #[test]
    fn straight_line_is_fully_explained() {
        let x: Vec<f64> = (0..100).map(|i| i as f64 * 0.1).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 - 3.0 * v).collect();
        let fit = smoothing_spline_r2(&x, &y, 2.0, 15.0).unwrap();
        assert!(fit.r2 > 1.0 - 1e-9);
        assert!(fit.edf >= 2.0 - 1e-6 && fit.edf <= 15.0 + 1e-6);
    }

    #[test]
    fn few_distinct_values_use_group_means() {
        let x: Vec<f64> = (0..30).map(|i| (i % 3) as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| v * v).collect();
        let fit = smoothing_spline_r2(&x, &y, 2.0, 15.0).unwrap();
        assert!((fit.r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_column_scores_zero() {
        let y = ProjectedData::new((0..20).map(f64::from).collect(), vec![1.0; 20]).unwrap();
        assert_eq!(idx_splines2d(&y, &IndexParams::default()).unwrap().value, 0.0);
        let short = ProjectedData::new(vec![1.0, 2.0], vec![1.0, 3.0]).unwrap();
        assert!(idx_splines2d(&short, &IndexParams::default()).is_err());
    }
}
