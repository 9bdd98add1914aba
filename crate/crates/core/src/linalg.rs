//! Small dense linear algebra kernels: vector helpers, closed-form 2×2 SVD,
//! cyclic Jacobi for symmetric eigenproblems and a Cholesky solver.

use crate::Real;

#[inline]
pub(crate) fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

#[inline]
pub(crate) fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

/// `y += a * x`
#[inline]
pub(crate) fn axpy<T: Real>(a: T, x: &[T], y: &mut [T]) {
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// Singular value decomposition of a 2×2 matrix `m = u · diag(s) · vᵀ`.
///
/// `m` is row-major. Singular values are non-negative and sorted descending;
/// `u` and `v` are orthogonal (either may be a reflection).
#[derive(Debug, Clone, Copy)]
pub struct Svd2<T> {
    pub u: [[T; 2]; 2],
    pub s: [T; 2],
    pub v: [[T; 2]; 2],
}

pub fn svd2<T: Real>(m: [[T; 2]; 2]) -> Svd2<T> {
    let [[a, b], [c, d]] = m;
    let half = T::lit(0.5);
    let e = (a + d) * half;
    let f = (a - d) * half;
    let g = (c + b) * half;
    let h = (c - b) * half;
    let q = (e * e + h * h).sqrt();
    let r = (f * f + g * g).sqrt();
    let sx = q + r;
    let mut sy = q - r;
    let a1 = g.atan2(f);
    let a2 = h.atan2(e);
    // m = rot(phi) · diag(sx, sy) · rot(theta)
    let theta = (a2 - a1) * half;
    let phi = (a2 + a1) * half;
    let (sp, cp) = phi.sin_cos();
    let (st, ct) = theta.sin_cos();
    let mut u = [[cp, -sp], [sp, cp]];
    // v = rot(theta)ᵀ
    let v = [[ct, st], [-st, ct]];
    if sy < T::zero() {
        sy = -sy;
        u[0][1] = -u[0][1];
        u[1][1] = -u[1][1];
    }
    Svd2 { u, s: [sx, sy], v }
}

#[inline]
pub(crate) fn det2<T: Real>(m: [[T; 2]; 2]) -> T {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// `a` is row-major `n×n`. Returns eigenvalues sorted descending and the
/// matching eigenvectors as columns of a row-major `n×n` matrix.
pub fn symmetric_eigen<T: Real>(a: &[T], n: usize) -> (Vec<T>, Vec<T>) {
    assert_eq!(a.len(), n * n);
    let mut m = a.to_vec();
    let mut v = vec![T::zero(); n * n];
    for i in 0..n {
        v[i * n + i] = T::one();
    }
    let eps = T::epsilon();
    for _sweep in 0..100 {
        let mut off = T::zero();
        let mut diag = T::zero();
        for i in 0..n {
            diag += m[i * n + i] * m[i * n + i];
            for j in (i + 1)..n {
                off += m[i * n + j] * m[i * n + j];
            }
        }
        if off <= eps * eps * diag || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let tau = (aqq - app) / (T::lit(2.0) * apq);
                let t = tau.signum() / (tau.abs() + (T::one() + tau * tau).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = c * mkp - s * mkq;
                    m[k * n + q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = c * mpk - s * mqk;
                    m[q * n + k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        m[j * n + j]
            .partial_cmp(&m[i * n + i])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| m[i * n + i]).collect();
    let mut vectors = vec![T::zero(); n * n];
    for (new_col, &old_col) in order.iter().enumerate() {
        for r in 0..n {
            vectors[r * n + new_col] = v[r * n + old_col];
        }
    }
    (values, vectors)
}

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
pub(crate) fn cholesky<T: Real>(a: &[T], n: usize) -> Option<Vec<T>> {
    let mut l = vec![T::zero(); n * n];
    for j in 0..n {
        let mut d = a[j * n + j];
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        if d <= T::zero() || !d.is_finite() {
            return None;
        }
        let d = d.sqrt();
        l[j * n + j] = d;
        for i in (j + 1)..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / d;
        }
    }
    Some(l)
}

/// Solves `L Lᵀ x = b` in place.
pub(crate) fn cholesky_solve<T: Real>(l: &[T], n: usize, b: &mut [T]) {
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * n + k] * b[k];
        }
        b[i] = s / l[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in (i + 1)..n {
            s -= l[k * n + i] * b[k];
        }
        b[i] = s / l[i * n + i];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reconstruct(s: &Svd2<f64>) -> [[f64; 2]; 2] {
        let mut out = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = (0..2).map(|k| s.u[i][k] * s.s[k] * s.v[j][k]).sum();
            }
        }
        out
    }

    #[test]
    fn svd2_reconstructs() {
        let cases = [
            [[1.0, 0.0], [0.0, 1.0]],
            [[0.3, -0.7], [2.0, 0.1]],
            [[0.0, 0.0], [0.0, 0.0]],
            [[1.0, 2.0], [2.0, 4.0]],
            [[-0.2, 0.5], [0.4, -1.0]],
            [[0.0, 1.0], [-1.0, 0.0]],
        ];
        for m in cases {
            let s = svd2(m);
            assert!(s.s[0] >= s.s[1] && s.s[1] >= 0.0, "{m:?} -> {:?}", s.s);
            let r = reconstruct(&s);
            for i in 0..2 {
                for j in 0..2 {
                    assert!((r[i][j] - m[i][j]).abs() < 1e-12, "{m:?}");
                }
            }
            for q in [s.u, s.v] {
                let c0 = q[0][0] * q[0][1] + q[1][0] * q[1][1];
                assert!(c0.abs() < 1e-12);
                assert!((q[0][0].hypot(q[1][0]) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn jacobi_diagonalizes() {
        let a = [4.0, 1.0, 0.5, 1.0, 3.0, 0.2, 0.5, 0.2, 1.0];
        let (vals, vecs) = symmetric_eigen(&a, 3);
        assert!(vals[0] >= vals[1] && vals[1] >= vals[2]);
        for k in 0..3 {
            for i in 0..3 {
                let av: f64 = (0..3).map(|j| a[i * 3 + j] * vecs[j * 3 + k]).sum();
                assert!((av - vals[k] * vecs[i * 3 + k]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn cholesky_solves_spd_system() {
        let a = [4.0, 2.0, 0.6, 2.0, 5.0, 1.0, 0.6, 1.0, 3.0];
        let l = cholesky(&a, 3).unwrap();
        let x = [1.0, -2.0, 0.5];
        let mut b: Vec<f64> = (0..3)
            .map(|i| (0..3).map(|j| a[i * 3 + j] * x[j]).sum())
            .collect();
        cholesky_solve(&l, 3, &mut b);
        for i in 0..3 {
            assert!((b[i] - x[i]).abs() < 1e-12);
        }
        assert!(cholesky(&[1.0, 2.0, 2.0, 1.0], 2).is_none());
    }
}
