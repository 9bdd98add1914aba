//! Geometry behind the scagnostic indexes: binning, hulls, Delaunay
//! triangulation and the minimum spanning tree.

mod bin;
mod delaunay;
mod hull;
mod mst;

pub use bin::{bin_points, bin_points_limited, BinnedPoints, DEFAULT_BIN_CAP, DEFAULT_MAX_BINS};
pub use delaunay::{delaunay, Triangulation};
pub use hull::{alpha_hull, convex_hull, Hull};
pub use mst::{mst, mst_diameter, SpanningTree};

pub(crate) use hull::alpha_hull_from;
pub(crate) use mst::mst_from_triangulation;
