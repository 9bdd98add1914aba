//! Tour geometry checked against dense linear algebra from nalgebra.

use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tourpp::simdata::{generate, sphere_pca, Family, SimSpec};
use tourpp::tour::{geodesic_path, orthonormalize, proj_dist, project, random_frame, Frame, Geodesic};
use tourpp::{DataMatrix64, Frame64};

fn basis(f: &Frame64) -> DMatrix<f64> {
    DMatrix::from_fn(f.dim(), 2, |i, k| f.get(i, k))
}

fn projector(f: &Frame64) -> DMatrix<f64> {
    let b = basis(f);
    &b * b.transpose()
}

/// Principal angles from the singular values of `AᵀB`, ascending.
fn principal_angles(a: &Frame64, b: &Frame64) -> [f64; 2] {
    let m = basis(a).transpose() * basis(b);
    let s = m.svd(false, false).singular_values;
    let mut angles = [s[0].clamp(-1.0, 1.0).acos(), s[1].clamp(-1.0, 1.0).acos()];
    angles.sort_by(f64::total_cmp);
    angles
}

fn frames(seed: u64, p: usize) -> (Frame64, Frame64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (random_frame(p, &mut rng).unwrap(), random_frame(p, &mut rng).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn plane_distance_is_the_projector_difference_norm(seed in any::<u64>(), p in 2usize..9) {
        let (a, b) = frames(seed, p);
        let want = (projector(&a) - projector(&b)).norm();
        prop_assert!((proj_dist(&a, &b).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn random_frames_are_orthonormal(seed in any::<u64>(), p in 2usize..12) {
        let (a, _) = frames(seed, p);
        let g = basis(&a).transpose() * basis(&a);
        prop_assert!((g - DMatrix::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn geodesic_angles_match_svd(seed in any::<u64>(), p in 3usize..9) {
        let (a, b) = frames(seed, p);
        let geo = Geodesic::between(&a, &b).unwrap();
        let want = principal_angles(&a, &b);
        let got = geo.angles();
        prop_assert!((got[0] - want[0]).abs() < 1e-7, "{got:?} {want:?}");
        prop_assert!((got[1] - want[1]).abs() < 1e-7, "{got:?} {want:?}");
    }

    #[test]
    fn path_frames_sit_at_proportional_angles(seed in any::<u64>(), p in 3usize..8) {
        let (a, b) = frames(seed, p);
        let total = principal_angles(&a, &b);
        let path = geodesic_path(&a, &b, 11).unwrap();
        for (k, f) in path.iter().enumerate() {
            let t = k as f64 / 10.0;
            let got = principal_angles(&a, f);
            prop_assert!((got[0] - t * total[0]).abs() < 1e-6);
            prop_assert!((got[1] - t * total[1]).abs() < 1e-6);
        }
    }

    #[test]
    fn projection_is_matrix_product(seed in any::<u64>()) {
        let x: DataMatrix64 = generate(&SimSpec::new(Family::Spiral, 40, 5, seed)).unwrap();
        let (f, _) = frames(seed, 5);
        let y = project(&x, &f).unwrap();
        let xm = DMatrix::from_row_slice(x.nrows(), x.ncols(), x.values());
        let want = xm * basis(&f);
        for i in 0..x.nrows() {
            prop_assert!((y.x()[i] - want[(i, 0)]).abs() < 1e-12);
            prop_assert!((y.y()[i] - want[(i, 1)]).abs() < 1e-12);
        }
    }
}

#[test]
fn orthonormalize_spans_the_input_columns() {
    let m1 = vec![1.0, 2.0, 0.0, -1.0];
    let m2 = vec![0.5, 0.0, 3.0, 1.0];
    let f = orthonormalize(&m1, &m2).unwrap();
    // Both inputs lie in the span: projecting them changes nothing.
    let p = projector(&f);
    for m in [&m1, &m2] {
        let v = DMatrix::from_column_slice(4, 1, m);
        assert!((&p * &v - &v).norm() < 1e-12);
    }
}

#[test]
fn sphering_whitens_the_kept_components() {
    let x: DataMatrix64 = generate(&SimSpec::new(Family::Pipe, 500, 6, 3)).unwrap();
    let s = sphere_pca(&x, 4).unwrap();
    let n = s.nrows();
    let m = DMatrix::from_row_slice(n, s.ncols(), s.values());
    let means = m.row_mean();
    let centred = DMatrix::from_fn(n, s.ncols(), |i, j| m[(i, j)] - means[j]);
    let cov = centred.transpose() * &centred / (n as f64 - 1.0);
    assert!((cov - DMatrix::identity(4, 4)).norm() < 1e-8);
}

#[test]
fn single_precision_frames_stay_orthonormal() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let a: Frame<f32> = random_frame(6, &mut rng).unwrap();
    let b: Frame<f32> = random_frame(6, &mut rng).unwrap();
    for f in geodesic_path(&a, &b, 15).unwrap() {
        assert!(f.orthonormality_error() < 1e-5);
    }
}
