//! Simulated benchmark families and the preprocessing transforms.
//!
//! Every family has `p − 2` nuisance columns followed by a structured pair in
//! the last two columns. Generators standardize all columns before returning.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::symmetric_eigen;
use crate::tour::DataMatrix;
use crate::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Pipe,
    Sine,
    Spiral,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Pipe, Family::Sine, Family::Spiral];

    pub fn name(self) -> &'static str {
        match self {
            Family::Pipe => "pipe",
            Family::Sine => "sine",
            Family::Spiral => "spiral",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidParameter(format!("unknown family `{s}`")))
    }
}

/// Recipe for one simulated dataset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimSpec {
    pub family: Family,
    pub n: usize,
    pub p: usize,
    pub seed: u64,
    /// Standard deviation of the radius around the unit circle (pipe).
    pub radial_sd: f64,
    /// Standard deviation of the noise added to the sine (sine).
    pub jitter_sd: f64,
    /// Spiral radius is `spiral_a + spiral_b·|θ|`.
    pub spiral_a: f64,
    pub spiral_b: f64,
    /// Standard deviation of θ (spiral).
    pub theta_spread: f64,
}

pub const DEFAULT_RADIAL_SD: f64 = 0.05;
pub const DEFAULT_JITTER_SD: f64 = 0.01;

impl SimSpec {
    pub fn new(family: Family, n: usize, p: usize, seed: u64) -> Self {
        Self {
            family,
            n,
            p,
            seed,
            radial_sd: DEFAULT_RADIAL_SD,
            jitter_sd: DEFAULT_JITTER_SD,
            spiral_a: 0.1,
            spiral_b: 0.1,
            // θ has variance 2π
            theta_spread: (2.0 * std::f64::consts::PI).sqrt(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 10 {
            return Err(Error::TooFewPoints { needed: 10, got: self.n });
        }
        if self.p < 3 {
            return Err(Error::InvalidParameter(format!("p must be at least 3, got {}", self.p)));
        }
        let nonneg = [
            ("radial_sd", self.radial_sd),
            ("jitter_sd", self.jitter_sd),
            ("theta_spread", self.theta_spread),
        ];
        for (name, v) in nonneg {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be finite and non-negative, got {v}")));
            }
        }
        if !(self.spiral_a.is_finite() && self.spiral_b.is_finite()) {
            return Err(Error::InvalidParameter("spiral coefficients must be finite".into()));
        }
        Ok(())
    }

    /// The structured pair as zero-based column indices.
    pub fn structured_columns(&self) -> (usize, usize) {
        (self.p - 2, self.p - 1)
    }
}

/// The sample before standardization, columns `x1..xp`.
pub fn raw_sample<T: Real>(spec: &SimSpec) -> Result<DataMatrix<T>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n;
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(spec.p);
    for _ in 0..spec.p - 2 {
        let col = match spec.family {
            Family::Pipe => (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            Family::Sine | Family::Spiral => (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect(),
        };
        columns.push(col);
    }
    let (a, b): (Vec<f64>, Vec<f64>) = match spec.family {
        Family::Pipe => (0..n)
            .map(|_| {
                let angle = rng.gen_range(0.0..std::f64::consts::TAU);
                let r = 1.0 + spec.radial_sd * rng.sample::<f64, _>(StandardNormal);
                (r * angle.cos(), r * angle.sin())
            })
            .unzip(),
        Family::Sine => (0..n)
            .map(|_| {
                let x: f64 = rng.sample(StandardNormal);
                let e: f64 = rng.sample(StandardNormal);
                (x, x.sin() + spec.jitter_sd * e)
            })
            .unzip(),
        Family::Spiral => (0..n)
            .map(|_| {
                let theta = spec.theta_spread * rng.sample::<f64, _>(StandardNormal);
                let t = theta.abs();
                let r = spec.spiral_a + spec.spiral_b * t;
                (r * t.cos(), r * t.sin())
            })
            .unzip(),
    };
    columns.push(a);
    columns.push(b);
    let columns: Vec<Vec<T>> = columns.into_iter().map(|c| c.into_iter().map(T::lit).collect()).collect();
    DataMatrix::from_columns(&columns)
}

/// Generates and standardizes the dataset described by `spec`.
pub fn generate<T: Real>(spec: &SimSpec) -> Result<DataMatrix<T>> {
    standardize(&raw_sample(spec)?)
}

fn check_family(spec: &SimSpec, family: Family) -> Result<()> {
    if spec.family != family {
        return Err(Error::InvalidParameter(format!(
            "spec is for the {} family, not {family}",
            spec.family
        )));
    }
    Ok(())
}

pub fn gen_pipe<T: Real>(spec: &SimSpec) -> Result<DataMatrix<T>> {
    check_family(spec, Family::Pipe)?;
    generate(spec)
}

pub fn gen_sine<T: Real>(spec: &SimSpec) -> Result<DataMatrix<T>> {
    check_family(spec, Family::Sine)?;
    generate(spec)
}

pub fn gen_spiral<T: Real>(spec: &SimSpec) -> Result<DataMatrix<T>> {
    check_family(spec, Family::Spiral)?;
    generate(spec)
}

fn map_columns<T: Real>(
    x: &DataMatrix<T>,
    mut f: impl FnMut(&str, &[T]) -> Result<Vec<T>>,
) -> Result<DataMatrix<T>> {
    let columns = (0..x.ncols())
        .map(|j| f(&x.names()[j], &x.column(j)))
        .collect::<Result<Vec<_>>>()?;
    DataMatrix::from_columns(&columns)?.with_names(x.names().to_vec())
}

/// Per-column z-scores using the `n − 1` standard deviation.
pub fn standardize<T: Real>(x: &DataMatrix<T>) -> Result<DataMatrix<T>> {
    map_columns(x, |name, col| {
        let n = T::from_usize_lossy(col.len());
        let mean = col.iter().copied().sum::<T>() / n;
        let var = col.iter().map(|&v| (v - mean) * (v - mean)).sum::<T>() / (n - T::one());
        if !(var > T::zero()) {
            return Err(Error::DegenerateColumn(name.to_string()));
        }
        let sd = var.sqrt();
        Ok(col.iter().map(|&v| (v - mean) / sd).collect())
    })
}

/// Per-column affine map of `[min, max]` onto `[0, 1]`.
pub fn minmax_scale<T: Real>(x: &DataMatrix<T>) -> Result<DataMatrix<T>> {
    map_columns(x, |name, col| {
        let (lo, hi) = col
            .iter()
            .fold((T::infinity(), T::neg_infinity()), |(l, h), &v| (l.min(v), h.max(v)));
        if !(hi > lo) {
            return Err(Error::DegenerateColumn(name.to_string()));
        }
        Ok(col
            .iter()
            .map(|&v| if v == hi { T::one() } else { (v - lo) / (hi - lo) })
            .collect())
    })
}

/// Principal axes of the sample covariance (`n − 1` denominator).
#[derive(Debug, Clone, PartialEq)]
pub struct Pca<T> {
    pub means: Vec<T>,
    /// Variances along the axes, descending.
    pub variances: Vec<T>,
    /// Row-major `p × p`; column `k` is the `k`-th axis.
    pub axes: Vec<T>,
}

impl<T: Real> Pca<T> {
    pub fn axis(&self, k: usize) -> Vec<T> {
        let p = self.means.len();
        (0..p).map(|r| self.axes[r * p + k]).collect()
    }
}

pub fn pca<T: Real>(x: &DataMatrix<T>) -> Pca<T> {
    let (n, p) = (x.nrows(), x.ncols());
    let nf = T::from_usize_lossy(n);
    let means: Vec<T> = (0..p).map(|j| x.column(j).into_iter().sum::<T>() / nf).collect();
    let mut cov = vec![T::zero(); p * p];
    for i in 0..n {
        let row = x.row(i);
        for a in 0..p {
            let da = row[a] - means[a];
            for b in a..p {
                cov[a * p + b] += da * (row[b] - means[b]);
            }
        }
    }
    for a in 0..p {
        for b in a..p {
            let v = cov[a * p + b] / (nf - T::one());
            cov[a * p + b] = v;
            cov[b * p + a] = v;
        }
    }
    let (variances, axes) = symmetric_eigen(&cov, p);
    Pca { means, variances, axes }
}

/// Projects onto the leading `keep` principal axes and scales each score to
/// unit variance. Axes with negligible variance are dropped with a warning.
pub fn sphere_pca<T: Real>(x: &DataMatrix<T>, keep: usize) -> Result<DataMatrix<T>> {
    let p = x.ncols();
    if keep < 2 || keep > p {
        return Err(Error::InvalidParameter(format!("keep must be in 2..={p}, got {keep}")));
    }
    let fit = pca(x);
    let top = fit.variances[0];
    let tol = top * T::lit(1e-10).max(T::from_usize_lossy(p) * T::epsilon());
    let usable = fit.variances.iter().take(keep).take_while(|&&v| v > tol).count();
    if usable < keep {
        log::warn!("covariance has rank {usable} among the first {keep} components; keeping {usable}");
    }
    if usable < 2 {
        return Err(Error::DegenerateColumn("fewer than two components with positive variance".into()));
    }
    let columns: Vec<Vec<T>> = (0..usable)
        .map(|k| {
            let axis = fit.axis(k);
            let sd = fit.variances[k].sqrt();
            (0..x.nrows())
                .map(|i| {
                    let row = x.row(i);
                    (0..p).map(|j| (row[j] - fit.means[j]) * axis[j]).sum::<T>() / sd
                })
                .collect()
        })
        .collect();
    let names = (1..=usable).map(|k| format!("pc{k}")).collect();
    DataMatrix::from_columns(&columns)?.with_names(names)
}
