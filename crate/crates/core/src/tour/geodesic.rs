//! Geodesic interpolation between 2-planes.
//!
//! With `Faᵀ Fb = U Σ Vᵀ` the principal directions are `Ga = Fa U` and
//! `Gb = Fb V`, and the principal angles are `θₖ = acos σₖ`. Each principal
//! direction rotates towards its partner inside the 2-space it spans with
//! `Gzₖ`, the normalized component of `Gbₖ` orthogonal to `Ga`. The within-plane
//! orientation is spun from `Uᵀ` to `Vᵀ` along the way so a full step lands
//! exactly on the target basis.

use crate::error::{Error, Result};
use crate::linalg::{axpy, det2, dot, norm, svd2};
use crate::tour::frame::{orthonormalize, Frame};
use crate::Real;

#[derive(Debug, Clone)]
pub struct Geodesic<T> {
    principal: [Vec<T>; 2],
    ortho: [Vec<T>; 2],
    angles: [T; 2],
    /// `U` from the SVD, row-major.
    u: [[T; 2]; 2],
    /// Angle of the rotation `U Vᵀ` spun in over a full step.
    spin: T,
}

impl<T: Real> Geodesic<T> {
    pub fn between(fa: &Frame<T>, fb: &Frame<T>) -> Result<Self> {
        let p = fa.dim();
        if fb.dim() != p {
            return Err(Error::Shape(format!("frames have {} and {} rows", p, fb.dim())));
        }
        let mut target = fb.clone();
        let mut svd = svd2(fa.cross(&target));
        if det2(svd.u) * det2(svd.v) < T::zero() {
            // same plane, opposite orientation, so the spin below is a proper rotation
            target = Frame::from_cols_unchecked(
                fb.col(0).to_vec(),
                fb.col(1).iter().map(|&v| -v).collect(),
            );
            svd = svd2(fa.cross(&target));
        }
        let combine = |f: &Frame<T>, m: [[T; 2]; 2], k: usize| -> Vec<T> {
            let mut out = vec![T::zero(); p];
            axpy(m[0][k], f.col(0), &mut out);
            axpy(m[1][k], f.col(1), &mut out);
            out
        };
        let ga = [combine(fa, svd.u, 0), combine(fa, svd.u, 1)];
        let gb = [combine(&target, svd.v, 0), combine(&target, svd.v, 1)];
        let angles = [
            svd.s[0].min(T::one()).max(T::zero()).acos(),
            svd.s[1].min(T::one()).max(T::zero()).acos(),
        ];
        let tiny = T::epsilon() * T::lit(16.0);
        let mut ortho: [Vec<T>; 2] = [vec![T::zero(); p], vec![T::zero(); p]];
        for k in 0..2 {
            if angles[k] <= tiny {
                continue;
            }
            let mut z = gb[k].clone();
            axpy(-angles[k].cos(), &ga[k], &mut z);
            for _ in 0..2 {
                for basis in ga.iter().chain(ortho[..k].iter()) {
                    let c = dot(basis, &z);
                    axpy(-c, basis, &mut z);
                }
            }
            let r = norm(&z);
            if r > tiny {
                z.iter_mut().for_each(|v| *v /= r);
                ortho[k] = z;
            }
        }
        // U Vᵀ
        let w10 = svd.u[1][0] * svd.v[0][0] + svd.u[1][1] * svd.v[0][1];
        let w00 = svd.u[0][0] * svd.v[0][0] + svd.u[0][1] * svd.v[0][1];
        Ok(Self {
            principal: ga,
            ortho,
            angles,
            u: svd.u,
            spin: w10.atan2(w00),
        })
    }

    /// Same plane motion with the within-plane orientation held at the start basis.
    pub fn without_spin(mut self) -> Self {
        self.spin = T::zero();
        self
    }

    /// Principal angles between the endpoint planes, ascending.
    pub fn angles(&self) -> [T; 2] {
        self.angles
    }

    /// Geodesic length `√(θ₁² + θ₂²)`.
    pub fn length(&self) -> T {
        (self.angles[0] * self.angles[0] + self.angles[1] * self.angles[1]).sqrt()
    }

    /// Frame at fraction `t` of the way (0 = start, 1 = end); `t` may leave `[0, 1]`.
    pub fn at(&self, t: T) -> Frame<T> {
        let p = self.principal[0].len();
        let g: Vec<Vec<T>> = (0..2)
            .map(|k| {
                let (s, c) = (t * self.angles[k]).sin_cos();
                let mut col: Vec<T> = self.principal[k].iter().map(|&v| v * c).collect();
                axpy(s, &self.ortho[k], &mut col);
                col
            })
            .collect();
        let (rs, rc) = (t * self.spin).sin_cos();
        let rot = [[rc, -rs], [rs, rc]];
        // C = Uᵀ · rot
        let mut cmat = [[T::zero(); 2]; 2];
        for (k, row) in cmat.iter_mut().enumerate() {
            for (c, entry) in row.iter_mut().enumerate() {
                *entry = self.u[0][k] * rot[0][c] + self.u[1][k] * rot[1][c];
            }
        }
        let mut cols = [vec![T::zero(); p], vec![T::zero(); p]];
        for (c, col) in cols.iter_mut().enumerate() {
            for (k, gk) in g.iter().enumerate() {
                axpy(cmat[k][c], gk, col);
            }
        }
        let [c1, c2] = cols;
        orthonormalize(&c1, &c2).unwrap_or_else(|_| Frame::from_cols_unchecked(c1, c2))
    }

    /// Frame at geodesic arc length `angle` from the start (unit-speed parametrization).
    pub fn at_angle(&self, angle: T) -> Frame<T> {
        let len = self.length();
        if len <= T::epsilon() {
            return self.at(T::zero());
        }
        self.at(angle / len)
    }
}

/// `n_steps` frames along the geodesic; the first is `fa` and the last is `fb`, exactly.
pub fn geodesic_path<T: Real>(fa: &Frame<T>, fb: &Frame<T>, n_steps: usize) -> Result<Vec<Frame<T>>> {
    if n_steps == 0 {
        return Err(Error::InvalidParameter("n_steps must be positive".into()));
    }
    let geo = Geodesic::between(fa, fb)?;
    if n_steps == 1 {
        return Ok(vec![fb.clone()]);
    }
    let last = T::from_usize_lossy(n_steps - 1);
    let mut path = Vec::with_capacity(n_steps);
    path.push(fa.clone());
    for i in 1..n_steps - 1 {
        path.push(geo.at(T::from_usize_lossy(i) / last));
    }
    path.push(fb.clone());
    Ok(path)
}
