use crate::index::Score;
use crate::tour::ProjectedData;
use crate::Real;

/// Squared distance correlation (V-statistic) between the two coordinates.
///
/// Uses `dCov² = S₁ + S₂ − 2 S₃` with `S₁` the mean of `aᵢⱼ bᵢⱼ`, `S₂` the
/// product of grand means and `S₃` the mean product of row means, so no
/// `n × n` matrix is stored.
pub fn dcor2<T: Real>(x: &[T], y: &[T]) -> T {
    let n = x.len();
    let nf = T::from_usize_lossy(n);
    let mut row_a = vec![T::zero(); n];
    let mut row_b = vec![T::zero(); n];
    let (mut sab, mut saa, mut sbb) = (T::zero(), T::zero(), T::zero());
    for i in 0..n {
        for j in (i + 1)..n {
            let a = (x[i] - x[j]).abs();
            let b = (y[i] - y[j]).abs();
            row_a[i] += a;
            row_a[j] += a;
            row_b[i] += b;
            row_b[j] += b;
            sab += a * b;
            saa += a * a;
            sbb += b * b;
        }
    }
    let two = T::lit(2.0);
    let n2 = nf * nf;
    let (sab, saa, sbb) = (two * sab / n2, two * saa / n2, two * sbb / n2);
    let grand_a = row_a.iter().copied().sum::<T>() / n2;
    let grand_b = row_b.iter().copied().sum::<T>() / n2;
    let (mut rab, mut raa, mut rbb) = (T::zero(), T::zero(), T::zero());
    for i in 0..n {
        let (a, b) = (row_a[i] / nf, row_b[i] / nf);
        rab += a * b;
        raa += a * a;
        rbb += b * b;
    }
    let (rab, raa, rbb) = (rab / nf, raa / nf, rbb / nf);
    let dcov = sab + grand_a * grand_b - two * rab;
    let dvar_x = saa + grand_a * grand_a - two * raa;
    let dvar_y = sbb + grand_b * grand_b - two * rbb;
    let denom = (dvar_x * dvar_y).sqrt();
    if !(denom > T::zero()) {
        return T::zero();
    }
    dcov / denom
}

pub fn idx_dcor2d<T: Real>(y: &ProjectedData<T>) -> Score<T> {
    let spread = |v: &[T]| v.iter().any(|&a| a != v[0]);
    if y.len() < 2 || !spread(y.x()) || !spread(y.y()) {
        return Score::degenerate(T::zero());
    }
    let raw = dcor2(y.x(), y.y());
    Score::new(raw, raw)
}
