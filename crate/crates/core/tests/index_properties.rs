//! Properties every index must satisfy on generated projections.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tourpp::index::{IndexDescriptor, IndexKind};
use tourpp::optimizer::{guided_tour, Method, OptimizerConfig};
use tourpp::simdata::{generate, Family, SimSpec};
use tourpp::tour::{proj_dist, DataMatrix, Frame, ProjectedData};

fn cloud(seed: u64, n: usize) -> ProjectedData<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let y: Vec<f64> = x.iter().map(|v| v * v + 0.3 * rng.gen_range(-1.0..1.0)).collect();
    ProjectedData::new(x, y).unwrap()
}

fn prepared(kind: IndexKind, n: usize) -> IndexDescriptor {
    IndexDescriptor::new(kind).prepared(n).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn values_lie_in_the_unit_interval(seed in any::<u64>()) {
        let y = cloud(seed, 150);
        for kind in IndexKind::ALL {
            let v = prepared(kind, 150).evaluate(&y).unwrap();
            prop_assert!((0.0..=1.0).contains(&v), "{kind}: {v}");
        }
    }

    #[test]
    fn row_order_does_not_matter(seed in any::<u64>()) {
        let y = cloud(seed, 120);
        let mut order: Vec<usize> = (0..120).collect();
        order.reverse();
        order.swap(3, 70);
        let shuffled = y.permuted(&order);
        for kind in IndexKind::ALL {
            let d = prepared(kind, 120);
            let (a, b) = (d.evaluate(&y).unwrap(), d.evaluate(&shuffled).unwrap());
            prop_assert!((a - b).abs() < 1e-9, "{kind}: {a} vs {b}");
        }
    }

    #[test]
    fn holes_ignores_rotation_and_rescaling(seed in any::<u64>(), angle in 0.0f64..6.3, sx in 0.1f64..10.0, sy in 0.1f64..10.0) {
        let y = cloud(seed, 200);
        let d = prepared(IndexKind::Holes, 200);
        let base = d.evaluate(&y).unwrap();
        prop_assert!((d.evaluate(&y.rotated(angle)).unwrap() - base).abs() < 1e-9);
        prop_assert!((d.evaluate(&y.affine([sx, sy], [3.0, -2.0])).unwrap() - base).abs() < 1e-9);
    }

    #[test]
    fn dcor2d_ignores_coordinate_scaling(seed in any::<u64>(), sx in 0.1f64..10.0, sy in 0.1f64..10.0) {
        let y = cloud(seed, 100);
        let d = prepared(IndexKind::Dcor2d, 100);
        let base = d.evaluate(&y).unwrap();
        prop_assert!((d.evaluate(&y.affine([sx, sy], [1.0, 5.0])).unwrap() - base).abs() < 1e-9);
    }
}

#[test]
fn same_seed_same_dataset() {
    for family in Family::ALL {
        let a: DataMatrix<f64> = generate(&SimSpec::new(family, 200, 5, 8)).unwrap();
        let b: DataMatrix<f64> = generate(&SimSpec::new(family, 200, 5, 8)).unwrap();
        let c: DataMatrix<f64> = generate(&SimSpec::new(family, 200, 5, 9)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}

#[test]
fn structured_pair_beats_noise_pair_for_every_sensitive_index() {
    let checks = [
        (Family::Pipe, IndexKind::Holes),
        (Family::Sine, IndexKind::Splines2d),
        (Family::Sine, IndexKind::Dcor2d),
        (Family::Spiral, IndexKind::Skinny),
        (Family::Sine, IndexKind::Stringy),
        (Family::Sine, IndexKind::Mic),
        (Family::Pipe, IndexKind::Tic),
        (Family::Sine, IndexKind::Convex1m),
    ];
    for (family, kind) in checks {
        let x: DataMatrix<f64> = generate(&SimSpec::new(family, 500, 6, 1)).unwrap();
        let d = prepared(kind, 500);
        let noise = d.evaluate(&x.pair(0, 1)).unwrap();
        let structure = d.evaluate(&x.pair(4, 5)).unwrap();
        assert!(structure > noise, "{kind} on {family}: {structure} <= {noise}");
    }
}

#[test]
fn optimizers_are_deterministic_and_monotone() {
    let x: DataMatrix<f64> = generate(&SimSpec::new(Family::Sine, 300, 5, 2)).unwrap();
    let desc = IndexDescriptor::new(IndexKind::Splines2d);
    for method in Method::ALL {
        let cfg = OptimizerConfig {
            method,
            max_tries: 150,
            seed: 6,
            ..OptimizerConfig::default()
        };
        let a = guided_tour(&x, &desc, &cfg, &[]).unwrap();
        let b = guided_tour(&x, &desc, &cfg, &[]).unwrap();
        assert_eq!(a.frames, b.frames, "{method}");
        assert_eq!(a.values, b.values, "{method}");
        a.check_invariants().unwrap();
        let start = proj_dist(&a.frames[0], &Frame::axes(5, 3, 4).unwrap()).unwrap();
        let end = proj_dist(a.last_anchor().unwrap().0, &Frame::axes(5, 3, 4).unwrap()).unwrap();
        assert!(a.anchor_values().last() >= a.anchor_values().first(), "{method}");
        assert!(end.is_finite() && start.is_finite());
    }
}
