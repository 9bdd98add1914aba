//! Projection planes: frames, projections, plane distance and geodesic tours.

mod data;
mod frame;
mod geodesic;

pub use data::{DataMatrix, ProjectedData};
pub use frame::{
    frame_tol, orthonormalize, proj_dist, project, random_frame, rotate_in_plane, Frame, FRAME_TOL,
};
pub use geodesic::{geodesic_path, Geodesic};
