use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, norm};
use crate::tour::data::{DataMatrix, ProjectedData};
use crate::Real;

/// Orthonormality tolerance every `f64` frame satisfies.
pub const FRAME_TOL: f64 = 1e-10;

/// [`FRAME_TOL`], widened to the working precision of `T`.
pub fn frame_tol<T: Real>() -> T {
    T::lit(FRAME_TOL).max(T::epsilon() * T::lit(64.0))
}

/// A `p × 2` orthonormal basis; its column span is the projection plane.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame<T> {
    cols: [Vec<T>; 2],
}

impl<T: Real> Frame<T> {
    /// Wraps two columns, checking orthonormality to [`frame_tol`].
    pub fn new(c1: Vec<T>, c2: Vec<T>) -> Result<Self> {
        if c1.len() != c2.len() {
            return Err(Error::Shape("frame columns have unequal lengths".into()));
        }
        if c1.len() < 2 {
            return Err(Error::Shape("frames need p >= 2".into()));
        }
        let frame = Self { cols: [c1, c2] };
        let err = frame.orthonormality_error();
        if !(err <= frame_tol::<T>()) {
            return Err(Error::InvalidData(format!(
                "frame columns are not orthonormal (error {err})"
            )));
        }
        Ok(frame)
    }

    pub(crate) fn from_cols_unchecked(c1: Vec<T>, c2: Vec<T>) -> Self {
        Self { cols: [c1, c2] }
    }

    /// The plane spanned by coordinate axes `a` and `b` (zero-based).
    pub fn axes(p: usize, a: usize, b: usize) -> Result<Self> {
        if a >= p || b >= p || a == b {
            return Err(Error::Shape(format!("axes ({a}, {b}) invalid for p = {p}")));
        }
        let mut c1 = vec![T::zero(); p];
        let mut c2 = vec![T::zero(); p];
        c1[a] = T::one();
        c2[b] = T::one();
        Ok(Self { cols: [c1, c2] })
    }

    pub fn dim(&self) -> usize {
        self.cols[0].len()
    }

    pub fn col(&self, k: usize) -> &[T] {
        &self.cols[k]
    }

    pub fn get(&self, j: usize, k: usize) -> T {
        self.cols[k][j]
    }

    /// Largest deviation of `FᵀF` from the identity.
    pub fn orthonormality_error(&self) -> T {
        let n0 = (dot(&self.cols[0], &self.cols[0]) - T::one()).abs();
        let n1 = (dot(&self.cols[1], &self.cols[1]) - T::one()).abs();
        let c = dot(&self.cols[0], &self.cols[1]).abs();
        n0.max(n1).max(c)
    }

    /// `Fᵀ G` as a row-major 2×2 matrix.
    pub(crate) fn cross(&self, other: &Self) -> [[T; 2]; 2] {
        [
            [dot(&self.cols[0], &other.cols[0]), dot(&self.cols[0], &other.cols[1])],
            [dot(&self.cols[1], &other.cols[0]), dot(&self.cols[1], &other.cols[1])],
        ]
    }

    /// Full-precision CSV: `p` rows of two comma-separated values.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for j in 0..self.dim() {
            out.push_str(&format!(
                "{:.16e},{:.16e}\n",
                self.cols[0][j].as_f64(),
                self.cols[1][j].as_f64()
            ));
        }
        out
    }

    /// Parses the format written by [`Frame::to_csv`]; the basis is re-orthonormalized.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut c1 = Vec::new();
        let mut c2 = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split(',');
            let mut next = || -> Result<T> {
                let field = fields
                    .next()
                    .ok_or_else(|| Error::InvalidData(format!("line {}: expected 2 values", lineno + 1)))?;
                field
                    .trim()
                    .parse::<f64>()
                    .map(T::lit)
                    .map_err(|_| Error::InvalidData(format!("line {}: `{field}` is not a number", lineno + 1)))
            };
            c1.push(next()?);
            c2.push(next()?);
        }
        orthonormalize(&c1, &c2)
    }
}

/// Gram–Schmidt on two columns; the first output column is `m1` normalized.
pub fn orthonormalize<T: Real>(m1: &[T], m2: &[T]) -> Result<Frame<T>> {
    if m1.len() != m2.len() {
        return Err(Error::Shape("columns have unequal lengths".into()));
    }
    if m1.len() < 2 {
        return Err(Error::Shape("frames need p >= 2".into()));
    }
    let tiny = T::epsilon() * T::lit(1e3);
    let n1 = norm(m1);
    let n2 = norm(m2);
    if !(n1 > T::min_positive_value()) || !(n2 > T::min_positive_value()) {
        return Err(Error::DegeneratePlane);
    }
    let c1: Vec<T> = m1.iter().map(|&v| v / n1).collect();
    let mut c2 = m2.to_vec();
    // two passes keep the columns orthogonal to working precision
    for _ in 0..2 {
        let proj = dot(&c1, &c2);
        axpy(-proj, &c1, &mut c2);
    }
    let r = norm(&c2);
    if !(r > tiny * n2) {
        return Err(Error::DegeneratePlane);
    }
    c2.iter_mut().for_each(|v| *v /= r);
    Ok(Frame::from_cols_unchecked(c1, c2))
}

/// `Y = X · F`
pub fn project<T: Real>(x: &DataMatrix<T>, f: &Frame<T>) -> Result<ProjectedData<T>> {
    if x.ncols() != f.dim() {
        return Err(Error::Shape(format!(
            "data has {} columns but the frame has {} rows",
            x.ncols(),
            f.dim()
        )));
    }
    let (a, b) = (f.col(0), f.col(1));
    let mut y1 = Vec::with_capacity(x.nrows());
    let mut y2 = Vec::with_capacity(x.nrows());
    for i in 0..x.nrows() {
        let row = x.row(i);
        y1.push(dot(row, a));
        y2.push(dot(row, b));
    }
    ProjectedData::new(y1, y2)
}

/// Frobenius norm of the difference of the two orthogonal projectors.
pub fn proj_dist<T: Real>(fa: &Frame<T>, fb: &Frame<T>) -> Result<T> {
    let p = fa.dim();
    if fb.dim() != p {
        return Err(Error::Shape(format!("frames have {} and {} rows", p, fb.dim())));
    }
    let mut sum = T::zero();
    for i in 0..p {
        for j in i..p {
            let pa = fa.cols[0][i] * fa.cols[0][j] + fa.cols[1][i] * fa.cols[1][j];
            let pb = fb.cols[0][i] * fb.cols[0][j] + fb.cols[1][i] * fb.cols[1][j];
            let d = pa - pb;
            sum += if i == j { d * d } else { T::lit(2.0) * d * d };
        }
    }
    Ok(sum.sqrt())
}

/// Rotates the basis within its own plane by `angle` radians.
pub fn rotate_in_plane<T: Real>(f: &Frame<T>, angle: T) -> Frame<T> {
    let (s, c) = angle.sin_cos();
    let c1 = f.cols[0]
        .iter()
        .zip(&f.cols[1])
        .map(|(&a, &b)| c * a + s * b)
        .collect();
    let c2 = f.cols[0]
        .iter()
        .zip(&f.cols[1])
        .map(|(&a, &b)| -s * a + c * b)
        .collect();
    Frame::from_cols_unchecked(c1, c2)
}

/// Orthonormalized standard-normal `p × 2` matrix.
pub fn random_frame<T: Real, R: Rng + ?Sized>(p: usize, rng: &mut R) -> Result<Frame<T>> {
    if p < 2 {
        return Err(Error::Shape(format!("random frames need p >= 2, got {p}")));
    }
    loop {
        let c1: Vec<T> = (0..p)
            .map(|_| T::lit(rng.sample::<f64, _>(StandardNormal)))
            .collect();
        let c2: Vec<T> = (0..p)
            .map(|_| T::lit(rng.sample::<f64, _>(StandardNormal)))
            .collect();
        if let Ok(f) = orthonormalize(&c1, &c2) {
            return Ok(f);
        }
    }
}
