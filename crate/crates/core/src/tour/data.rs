use crate::error::{Error, Result};
use crate::Real;

/// An `n × p` table of finite observations with one label per column.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix<T> {
    n: usize,
    p: usize,
    /// Row-major values.
    values: Vec<T>,
    names: Vec<String>,
}

impl<T: Real> DataMatrix<T> {
    /// Builds a matrix from row-major values.
    pub fn new(n: usize, p: usize, values: Vec<T>, names: Vec<String>) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewPoints { needed: 3, got: n });
        }
        if p < 2 {
            return Err(Error::Shape(format!("need at least 2 columns, got {p}")));
        }
        if values.len() != n * p {
            return Err(Error::Shape(format!(
                "{} values do not fill a {n}×{p} matrix",
                values.len()
            )));
        }
        if names.len() != p {
            return Err(Error::Shape(format!(
                "{} column names for {p} columns",
                names.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidData(format!(
                "non-finite value at row {}, column `{}`",
                pos / p,
                names[pos % p]
            )));
        }
        Ok(Self { n, p, values, names })
    }

    /// Builds a matrix from column vectors, naming columns `x1..xp`.
    pub fn from_columns(columns: &[Vec<T>]) -> Result<Self> {
        let p = columns.len();
        let n = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != n) {
            return Err(Error::Shape("columns have unequal lengths".into()));
        }
        let mut values = Vec::with_capacity(n * p);
        for i in 0..n {
            values.extend(columns.iter().map(|c| c[i]));
        }
        let names = (1..=p).map(|j| format!("x{j}")).collect();
        Self::new(n, p, values, names)
    }

    pub fn nrows(&self) -> usize {
        self.n
    }

    pub fn ncols(&self) -> usize {
        self.p
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.values[i * self.p..(i + 1) * self.p]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[i * self.p + j]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.p {
            return Err(Error::Shape(format!(
                "{} column names for {} columns",
                names.len(),
                self.p
            )));
        }
        self.names = names;
        Ok(self)
    }

    /// Keeps the listed columns, in the given order.
    pub fn select(&self, columns: &[usize]) -> Result<Self> {
        if let Some(&bad) = columns.iter().find(|&&j| j >= self.p) {
            return Err(Error::Shape(format!("column {bad} out of range")));
        }
        let mut values = Vec::with_capacity(self.n * columns.len());
        for i in 0..self.n {
            values.extend(columns.iter().map(|&j| self.get(i, j)));
        }
        let names = columns.iter().map(|&j| self.names[j].clone()).collect();
        Self::new(self.n, columns.len(), values, names)
    }

    /// Reorders rows; used by permutation-invariance checks.
    pub fn permute_rows(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.n {
            return Err(Error::Shape("row permutation has the wrong length".into()));
        }
        let mut values = Vec::with_capacity(self.values.len());
        for &i in order {
            values.extend_from_slice(self.row(i));
        }
        Self::new(self.n, self.p, values, self.names.clone())
    }

    /// The two columns `(a, b)` as a projection.
    pub fn pair(&self, a: usize, b: usize) -> ProjectedData<T> {
        ProjectedData::new(self.column(a), self.column(b)).expect("columns share a length")
    }
}

/// An `n × 2` projection, stored column-wise.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedData<T> {
    x: Vec<T>,
    y: Vec<T>,
}

impl<T: Real> ProjectedData<T> {
    pub fn new(x: Vec<T>, y: Vec<T>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::Shape(format!(
                "projected columns have lengths {} and {}",
                x.len(),
                y.len()
            )));
        }
        Ok(Self { x, y })
    }

    pub fn from_points(points: &[[T; 2]]) -> Self {
        Self {
            x: points.iter().map(|p| p[0]).collect(),
            y: points.iter().map(|p| p[1]).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn x(&self) -> &[T] {
        &self.x
    }

    pub fn y(&self) -> &[T] {
        &self.y
    }

    pub fn point(&self, i: usize) -> [T; 2] {
        [self.x[i], self.y[i]]
    }

    /// Swaps the two coordinates.
    pub fn transposed(&self) -> Self {
        Self {
            x: self.y.clone(),
            y: self.x.clone(),
        }
    }

    /// Rotates every point by `angle` radians about the origin.
    pub fn rotated(&self, angle: T) -> Self {
        let (s, c) = angle.sin_cos();
        let x = self
            .x
            .iter()
            .zip(&self.y)
            .map(|(&a, &b)| c * a - s * b)
            .collect();
        let y = self
            .x
            .iter()
            .zip(&self.y)
            .map(|(&a, &b)| s * a + c * b)
            .collect();
        Self { x, y }
    }

    /// `(x·a + c₁, y·b + c₂)`
    pub fn affine(&self, scale: [T; 2], shift: [T; 2]) -> Self {
        Self {
            x: self.x.iter().map(|&v| v * scale[0] + shift[0]).collect(),
            y: self.y.iter().map(|&v| v * scale[1] + shift[1]).collect(),
        }
    }

    pub fn permuted(&self, order: &[usize]) -> Self {
        Self {
            x: order.iter().map(|&i| self.x[i]).collect(),
            y: order.iter().map(|&i| self.y[i]).collect(),
        }
    }
}
