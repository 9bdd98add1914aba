use spade::{DelaunayTriangulation, HasPosition, Point2, Triangulation as _};

use crate::error::{Error, Result};
use crate::Real;

struct Site {
    pos: Point2<f64>,
    idx: usize,
}

impl HasPosition for Site {
    type Scalar = f64;

    fn position(&self) -> Point2<f64> {
        self.pos
    }
}

/// Delaunay triangles as index triples into the input point list.
#[derive(Debug, Clone, PartialEq)]
pub struct Triangulation {
    pub triangles: Vec<[usize; 3]>,
}

impl Triangulation {
    /// Triangulates with exact orientation and in-circle predicates.
    pub fn new<T: Real>(points: &[[T; 2]]) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::CollinearInput);
        }
        let sites = points
            .iter()
            .enumerate()
            .map(|(idx, p)| Site {
                pos: Point2::new(p[0].as_f64(), p[1].as_f64()),
                idx,
            })
            .collect();
        let dt = DelaunayTriangulation::<Site>::bulk_load(sites)
            .map_err(|e| Error::InvalidData(format!("triangulation failed: {e:?}")))?;
        let mut triangles: Vec<[usize; 3]> = dt
            .inner_faces()
            .map(|face| {
                let [a, b, c] = face.vertices();
                let mut t = [a.data().idx, b.data().idx, c.data().idx];
                t.sort_unstable();
                t
            })
            .collect();
        if triangles.is_empty() {
            return Err(Error::CollinearInput);
        }
        triangles.sort_unstable();
        Ok(Self { triangles })
    }

    /// Undirected edges `(i, j)` with `i < j`, sorted and unique.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<(usize, usize)> = self
            .triangles
            .iter()
            .flat_map(|&[a, b, c]| [(a, b), (a, c), (b, c)])
            .collect();
        edges.sort_unstable();
        edges.dedup();
        edges
    }
}

/// Delaunay triangulation of the binned locations.
pub fn delaunay<T: Real>(points: &[[T; 2]]) -> Result<Triangulation> {
    Triangulation::new(points)
}
