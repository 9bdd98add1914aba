//! End-to-end acceptance suite. Each test checks one criterion, prints a
//! single `criterion N: PASS|FAIL ...` line and then asserts it.
//!
//! The whole suite takes roughly half an hour on one core, so every test is
//! ignored by default. Run it with
//! `cargo test -p tourpp-cli --test acceptance -- --ignored --nocapture --test-threads=1`.

use std::path::Path;
use std::process::Command as Process;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tourpp::diagnostics::{
    pairwise_distances, percentile_table, rotation_scan, trace_nuisance, trace_squint, PercentileStudy,
    PercentileTable, Role,
};
use tourpp::index::{dcor2, idx_dcor2d, idx_mi_grid, IndexDescriptor, IndexKind};
use tourpp::optimizer::{guided_tour, scout_then_refine, Method, OptimizerConfig, TourHistory, WindowMetric};
use tourpp::scag::{alpha_hull, convex_hull, delaunay, mst};
use tourpp::simdata::{generate, Family, SimSpec};
use tourpp::stats::{mean, spearman};
use tourpp::tour::{geodesic_path, proj_dist, random_frame, DataMatrix, Frame, ProjectedData};

fn report(n: usize, pass: bool, detail: &str) {
    println!("criterion {n}: {} {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {n} failed: {detail}");
}

fn data(family: Family, n: usize, p: usize, seed: u64) -> DataMatrix<f64> {
    generate(&SimSpec::new(family, n, p, seed)).unwrap()
}

fn structured_plane(p: usize) -> Frame<f64> {
    Frame::axes(p, p - 2, p - 1).unwrap()
}

fn scout_config(seed: u64) -> OptimizerConfig {
    OptimizerConfig {
        method: Method::Better,
        window: WindowMetric::Blend,
        alpha: 0.5,
        cooling: 1.0,
        max_tries: 5000,
        seed,
        ..OptimizerConfig::default()
    }
}

fn refine_config(seed: u64) -> OptimizerConfig {
    OptimizerConfig {
        seed: seed + 1000,
        ..OptimizerConfig::default()
    }
}

/// Anchor values never decrease and every frame is orthonormal.
fn history_is_sound(h: &TourHistory<f64>) -> bool {
    h.check_invariants().is_ok() && h.frames.iter().all(|f| f.orthonormality_error() <= 1e-10)
}

struct TableRun {
    table: PercentileTable,
    elapsed: Duration,
}

fn table() -> &'static TableRun {
    static TABLE: OnceLock<TableRun> = OnceLock::new();
    TABLE.get_or_init(|| {
        let indexes: Vec<IndexDescriptor> = IndexKind::ALL.into_iter().map(IndexDescriptor::new).collect();
        let study = PercentileStudy {
            n: 1000,
            p: 6,
            n_reps: 100,
            master_seed: 0,
        };
        let t0 = Instant::now();
        let table = percentile_table(&Family::ALL, &indexes, &study).unwrap();
        TableRun {
            table,
            elapsed: t0.elapsed(),
        }
    })
}

#[test]
#[ignore = "acceptance suite"]
fn criterion_01_percentile_anchor_cells() {
    let run = table();
    let cells: [(&str, Family, Role, [f64; 2], f64); 9] = [
        ("splines2d", Family::Sine, Role::Structure, [1.00, 1.00], 0.1),
        ("dcor2d", Family::Sine, Role::Structure, [0.96, 0.98], 0.1),
        ("mic", Family::Sine, Role::Structure, [0.98, 1.00], 0.1),
        ("skinny", Family::Spiral, Role::Structure, [0.84, 0.90], 0.1),
        ("stringy", Family::Sine, Role::Structure, [1.00, 1.00], 0.1),
        ("holes", Family::Pipe, Role::Structure, [0.98, 0.99], 0.12),
        ("tic", Family::Pipe, Role::Noise, [0.02, 0.02], 0.05),
        ("tic", Family::Sine, Role::Noise, [0.02, 0.02], 0.05),
        ("tic", Family::Spiral, Role::Noise, [0.02, 0.02], 0.05),
    ];
    let mut misses = Vec::new();
    let mut shown = Vec::new();
    for (index, family, role, [lo, hi], tol) in cells {
        let r = run.table.get(index, family, role).unwrap();
        shown.push(format!("{index}/{family}/{}=[{:.3},{:.3}]", role.name(), r.p5, r.p95));
        if (r.p5 - lo).abs() > tol || (r.p95 - hi).abs() > tol {
            misses.push(format!("{index}/{family}"));
        }
    }
    let fast = run.elapsed <= Duration::from_secs(15 * 60);
    report(
        1,
        misses.is_empty() && fast,
        &format!("{} misses {misses:?}, table built in {:.0?}; {}", misses.len(), run.elapsed, shown.join(" ")),
    );
}

#[test]
#[ignore = "acceptance suite"]
fn criterion_02_structure_separates_from_noise() {
    let t = &table().table;
    let all = [Family::Pipe, Family::Sine, Family::Spiral];
    let sensitive: [(&str, &[Family]); 8] = [
        ("holes", &[Family::Pipe]),
        ("convex1m", &all),
        ("skinny", &all),
        ("stringy", &all),
        ("dcor2d", &[Family::Sine]),
        ("splines2d", &[Family::Sine]),
        ("mic", &all),
        ("tic", &all),
    ];
    let mut violations = Vec::new();
    let mut checked = 0;
    for (index, families) in sensitive {
        for &family in families {
            let s = t.get(index, family, Role::Structure).unwrap();
            let n = t.get(index, family, Role::Noise).unwrap();
            checked += 1;
            if s.p5 <= n.p95 {
                violations.push(format!("{index}/{family}: structure p5 {:.3} <= noise p95 {:.3}", s.p5, n.p95));
            }
        }
    }
    report(
        2,
        violations.is_empty(),
        &format!("{} violations out of {checked} pairs {violations:?}", violations.len()),
    );
}

#[test]
#[ignore = "acceptance suite"]
fn criterion_03_nuisance_trace_smoothness() {
    let names = ["skinny", "splines2d", "stringy", "dcor2d"];
    let idx: Vec<IndexDescriptor> = names.iter().map(|n| IndexDescriptor::from_name(n).unwrap()).collect();
    let mut acc = [0.0; 4];
    for seed in 0..10 {
        let t = trace_nuisance(&data(Family::Sine, 1000, 6, seed), &idx, 41).unwrap();
        assert_eq!(t.path.len(), 41);
        for (k, n) in names.iter().enumerate() {
            acc[k] += t.masd(n).unwrap() / 10.0;
        }
    }
    let pass = acc[0] >= 2.0 * acc[1] && acc[2] >= 2.0 * acc[3];
    report(
        3,
        pass,
        &format!(
            "MASD skinny {:.5} vs splines2d {:.5}, stringy {:.5} vs dcor2d {:.5}",
            acc[0], acc[1], acc[2], acc[3]
        ),
    );
}

#[test]
#[ignore = "acceptance suite"]
fn criterion_04_squint_traces() {
    let idx: Vec<IndexDescriptor> = ["splines2d", "dcor2d"].iter().map(|n| IndexDescriptor::from_name(n).unwrap()).collect();
    let mut ok = true;
    let mut detail = Vec::new();
    for seed in 0..5 {
        let t = trace_squint(&data(Family::Sine, 1000, 6, seed), &idx, 30).unwrap();
        assert_eq!(t.path.len(), 59);
        let m = t.leg_markers[0];
        for name in ["splines2d", "dcor2d"] {
            let v = t.valid_series(name).unwrap();
            let last = &v[m..];
            let pos: Vec<f64> = (0..last.len()).map(|i| i as f64).collect();
            let rho = spearman(&pos, last);
            let end = *v.last().unwrap();
            ok &= rho >= 0.8 && end >= 0.9;
            detail.push(format!("s{seed} {name} rho {rho:.3} end {end:.3}"));
        }
    }
    let holes = [IndexDescriptor::new(IndexKind::Holes)];
    for seed in 0..5 {
        let t = trace_squint(&data(Family::Pipe, 1000, 6, seed), &holes, 30).unwrap();
        let v = t.valid_series("holes").unwrap();
        let m = t.leg_markers[0];
        let around: Vec<f64> = (m - 5..m).chain(m + 1..=m + 5).map(|i| v[i]).collect();
        let lift = v[m] - mean(&around);
        ok &= lift > 0.0;
        detail.push(format!("s{seed} holes lift {lift:.4}"));
    }
    report(4, ok, &detail.join(", "));
}

#[test]
#[ignore = "acceptance suite"]
fn criterion_05_sine_geodesic_optimization() {
    let t0 = Instant::now();
    let desc = IndexDescriptor::new(IndexKind::Splines2d);
    let mut hits = 0;
    let mut sound = true;
    let mut dists = Vec::new();
    for seed in 0..10 {
        let x = data(Family::Sine, 1000, 6, seed);
        let cfg = OptimizerConfig {
            method: Method::Geodesic,
            seed,
            ..OptimizerConfig::default()
        };
        let h = guided_tour(&x, &desc, &cfg, &[]).unwrap();
        sound &= history_is_sound(&h);
        let d = proj_dist(h.last_anchor().unwrap().0, &structured_plane(6)).unwrap();
        hits += usize::from(d <= 0.15);
        dists.push(format!("{d:.3}"));
    }
    let elapsed = t0.elapsed();
    report(
        5,
        hits >= 8 && sound && elapsed <= Duration::from_secs(120),
        &format!("{hits}/10 within 0.15 in {elapsed:.0?}, distances {dists:?}"),
    );
}

#[test]
#[ignore = "acceptance suite"]
fn criterion_06_pipe_scout_and_refine() {
    let desc = IndexDescriptor::new(IndexKind::Tic);
    let mut hits = 0;
    let mut sound = true;
    let mut detail = Vec::new();
    for seed in 0..10 {
        let x = data(Family::Pipe, 1000, 6, seed);
        let h = scout_then_refine(&x, &desc, &scout_config(seed), &refine_config(seed), &[]).unwrap();
        sound &= history_is_sound(&h);
        let last_scout = *h.anchors.iter().filter(|&&i| h.stages[i] == "scout").last().unwrap();
        let scout_dist = proj_dist(&h.frames[last_scout], &structured_plane(6)).unwrap();
        let scout_value = h.values[last_scout][0];
        let final_value = h.last_anchor().unwrap().1;
        let ok = scout_dist <= 0.5 && final_value > scout_value;
        hits += usize::from(ok);
        detail.push(format!("s{seed} scout {scout_dist:.3} {scout_value:.3}->{final_value:.3}"));
    }
    report(6, hits >= 7 && sound, &format!("{hits}/10 seeds; {}", detail.join(", ")));
}

#[test]
#[ignore = "acceptance suite"]
fn criterion_07_spiral_dimension_effect() {
    let desc = IndexDescriptor::new(IndexKind::Skinny);
    let mut converged_p4 = 0;
    let mut spreads = Vec::new();
    let mut sound = true;
    for p in [4, 5, 6] {
        let mut means = Vec::new();
        for seed in 0..10 {
            let x = data(Family::Spiral, 1000, p, seed);
            let h = scout_then_refine(&x, &desc, &scout_config(seed), &refine_config(seed), &[]).unwrap();
            sound &= history_is_sound(&h);
            if p == 4 {
                let d = proj_dist(h.last_anchor().unwrap().0, &structured_plane(p)).unwrap();
                converged_p4 += usize::from(d <= 0.3);
            }
            means.push(mean(&pairwise_distances(&h.anchor_frames()).unwrap()));
        }
        spreads.push(mean(&means));
    }
    let monotone = spreads[0] < spreads[1] && spreads[1] < spreads[2];
    report(
        7,
        converged_p4 >= 7 && monotone && sound,
        &format!(
            "p=4 converged {converged_p4}/10; mean pairwise anchor distance p4 {:.3} p5 {:.3} p6 {:.3}",
            spreads[0], spreads[1], spreads[2]
        ),
    );
}

#[test]
#[ignore = "acceptance suite"]
fn criterion_08_rotation_dependence() {
    let names = ["holes", "convex1m", "mic", "splines2d", "skinny"];
    let idx: Vec<IndexDescriptor> = names.iter().map(|n| IndexDescriptor::from_name(n).unwrap()).collect();
    let mut ok = true;
    let mut detail = Vec::new();
    for seed in 0..3 {
        let x = data(Family::Sine, 1000, 6, seed);
        let scan = rotation_scan(&x.pair(4, 5), &idx, 36).unwrap();
        for name in names {
            let s = scan.spread(name).unwrap();
            let pass = match name {
                "splines2d" => s >= 0.2,
                "skinny" => (0.02..=0.2).contains(&s),
                _ => s <= 0.05,
            };
            ok &= pass;
            detail.push(format!("s{seed} {name} {s:.3}{}", if pass { "" } else { " (out of bound)" }));
        }
    }
    report(8, ok, &detail.join(", "));
}

fn prim_edges(pts: &[[f64; 2]]) -> Vec<(usize, usize)> {
    let n = pts.len();
    let d = |a: usize, b: usize| (pts[a][0] - pts[b][0]).hypot(pts[a][1] - pts[b][1]);
    let mut in_tree = vec![false; n];
    let mut best = vec![(f64::INFINITY, 0usize); n];
    in_tree[0] = true;
    for j in 1..n {
        best[j] = (d(0, j), 0);
    }
    let mut edges = Vec::new();
    for _ in 1..n {
        let j = (0..n)
            .filter(|&j| !in_tree[j])
            .min_by(|&a, &b| best[a].0.total_cmp(&best[b].0))
            .unwrap();
        in_tree[j] = true;
        let i = best[j].1;
        edges.push((i.min(j), i.max(j)));
        for k in 0..n {
            if !in_tree[k] && d(j, k) < best[k].0 {
                best[k] = (d(j, k), j);
            }
        }
    }
    edges.sort_unstable();
    edges
}

/// Positive when `d` lies inside the circumcircle of the counter-clockwise triangle `a, b, c`.
fn in_circle(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> f64 {
    let row = |p: [f64; 2]| {
        let (x, y) = (p[0] - d[0], p[1] - d[1]);
        [x, y, x * x + y * y]
    };
    let (r1, r2, r3) = (row(a), row(b), row(c));
    r1[0] * (r2[1] * r3[2] - r2[2] * r3[1]) - r1[1] * (r2[0] * r3[2] - r2[2] * r3[0])
        + r1[2] * (r2[0] * r3[1] - r2[1] * r3[0])
}

fn textbook_dcor2(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let centred = |v: &[f64]| {
        let d: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| (v[i] - v[j]).abs()).collect()).collect();
        let row: Vec<f64> = d.iter().map(|r| r.iter().sum::<f64>() / n as f64).collect();
        let grand = row.iter().sum::<f64>() / n as f64;
        (0..n)
            .map(|i| (0..n).map(|j| d[i][j] - row[i] - row[j] + grand).collect::<Vec<_>>())
            .collect::<Vec<_>>()
    };
    let (a, b) = (centred(x), centred(y));
    let dot = |u: &Vec<Vec<f64>>, v: &Vec<Vec<f64>>| {
        u.iter().zip(v).map(|(r, s)| r.iter().zip(s).map(|(p, q)| p * q).sum::<f64>()).sum::<f64>() / (n * n) as f64
    };
    let (vxy, vx, vy) = (dot(&a, &b), dot(&a, &a), dot(&b, &b));
    vxy / (vx * vy).sqrt()
}

/// Mutual information of the best split of `x` into at most two columns,
/// with `y` split at its median, divided by ln 2.
fn exhaustive_mi_2x2(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let mut ys = y.to_vec();
    ys.sort_by(f64::total_cmp);
    let row: Vec<usize> = y.iter().map(|v| usize::from(*v >= ys[n / 2])).collect();
    let mut xs = x.to_vec();
    xs.sort_by(f64::total_cmp);
    let mut best: f64 = 0.0;
    for cut in 1..n {
        let mut c = [[0.0f64; 2]; 2];
        for i in 0..n {
            c[usize::from(x[i] >= xs[cut])][row[i]] += 1.0;
        }
        let nf = n as f64;
        let mut mi = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                let pab = c[a][b] / nf;
                if pab > 0.0 {
                    let pa = (c[a][0] + c[a][1]) / nf;
                    let pb = (c[0][b] + c[1][b]) / nf;
                    mi += pab * (pab / (pa * pb)).ln();
                }
            }
        }
        best = best.max(mi);
    }
    best / 2f64.ln()
}

#[test]
#[ignore = "acceptance suite"]
fn criterion_09_geometry_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut unit = |k: usize| -> Vec<[f64; 2]> { (0..k).map(|_| [rng.gen::<f64>(), rng.gen::<f64>()]).collect() };

    let mut mst_mismatch = 0;
    for _ in 0..1000 {
        let pts = unit(8);
        let mut got: Vec<(usize, usize)> = mst(&pts).unwrap().edges.iter().map(|e| (e.0, e.1)).collect();
        got.sort_unstable();
        mst_mismatch += usize::from(got != prim_edges(&pts));
    }

    let mut worst_incircle: f64 = f64::NEG_INFINITY;
    let mut worst_hull: f64 = 0.0;
    for k in [10, 50, 200] {
        for _ in 0..20 {
            let pts = unit(k);
            for t in delaunay(&pts).unwrap().triangles {
                let [mut a, b, mut c] = t.map(|i| pts[i]);
                if (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]) < 0.0 {
                    std::mem::swap(&mut a, &mut c);
                }
                for (i, &d) in pts.iter().enumerate() {
                    if !t.contains(&i) {
                        worst_incircle = worst_incircle.max(in_circle(a, b, c, d));
                    }
                }
            }
            let ah = alpha_hull(&pts, f64::INFINITY).unwrap();
            let ch = convex_hull(&pts).unwrap();
            worst_hull = worst_hull.max((ah.area - ch.area).abs());
        }
    }

    let mut worst_dcor: f64 = 0.0;
    for _ in 0..20 {
        let x: Vec<f64> = (0..50).map(|_| rng.gen::<f64>()).collect();
        let y: Vec<f64> = x.iter().map(|v| (6.0 * v).sin() + 0.3 * rng.gen::<f64>()).collect();
        let truth = textbook_dcor2(&x, &y);
        let y2 = ProjectedData::new(x.clone(), y.clone()).unwrap();
        worst_dcor = worst_dcor
            .max((dcor2(&x, &y) - truth).abs())
            .max((idx_dcor2d(&y2).value - truth).abs());
    }

    let mut mi_mismatch = 0;
    for _ in 0..200 {
        let x: Vec<f64> = (0..20).map(|_| rng.gen::<f64>()).collect();
        let y: Vec<f64> = x.iter().map(|v| v + 0.5 * rng.gen::<f64>()).collect();
        let got: f64 = idx_mi_grid(&ProjectedData::new(x.clone(), y.clone()).unwrap(), 2, 2).unwrap();
        let want = exhaustive_mi_2x2(&x, &y);
        mi_mismatch += usize::from((got - want).abs() > 1e-12);
    }

    let pass = mst_mismatch == 0 && worst_incircle <= 1e-9 && worst_hull <= 1e-9 && worst_dcor <= 1e-9 && mi_mismatch == 0;
    report(
        9,
        pass,
        &format!(
            "mst mismatches {mst_mismatch}/1000, max in-circle {worst_incircle:.2e}, alpha-vs-convex area {worst_hull:.2e}, dcor2d error {worst_dcor:.2e}, mi grid mismatches {mi_mismatch}/200"
        ),
    );
}

#[test]
#[ignore = "acceptance suite"]
fn criterion_10_tour_math() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst_ortho: f64 = 0.0;
    let mut worst_end: f64 = 0.0;
    let mut worst_spacing: f64 = 0.0;
    for p in [3, 4, 6, 10] {
        for _ in 0..50 {
            let a: Frame<f64> = random_frame(p, &mut rng).unwrap();
            let b: Frame<f64> = random_frame(p, &mut rng).unwrap();
            let path = geodesic_path(&a, &b, 25).unwrap();
            for f in &path {
                worst_ortho = worst_ortho.max(f.orthonormality_error());
            }
            worst_end = worst_end
                .max(proj_dist(&path[0], &a).unwrap())
                .max(proj_dist(path.last().unwrap(), &b).unwrap());
            let steps: Vec<f64> = path.windows(2).map(|w| proj_dist(&w[0], &w[1]).unwrap()).collect();
            let lo = steps.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = steps.iter().copied().fold(0.0, f64::max);
            if hi > 1e-12 {
                worst_spacing = worst_spacing.max((hi - lo) / hi);
            }
        }
    }

    let mut metric_failures = 0;
    for _ in 0..1000 {
        let p = rng.gen_range(3..9);
        let f: Vec<Frame<f64>> = (0..3).map(|_| random_frame(p, &mut rng).unwrap()).collect();
        let d = |i: usize, j: usize| proj_dist(&f[i], &f[j]).unwrap();
        let ok = d(0, 0) <= 1e-12
            && (d(0, 1) - d(1, 0)).abs() <= 1e-12
            && d(0, 1) >= 0.0
            && d(0, 2) <= d(0, 1) + d(1, 2) + 1e-12
            && d(0, 1) <= d(0, 2) + d(2, 1) + 1e-12
            && d(1, 2) <= d(1, 0) + d(0, 2) + 1e-12;
        metric_failures += usize::from(!ok);
    }

    // Every optimizer variant on small problems: anchors must be monotone.
    let mut histories = 0;
    let mut unsound = 0;
    for seed in 0..3 {
        let x = data(Family::Sine, 300, 5, seed);
        let desc = IndexDescriptor::new(IndexKind::Splines2d);
        for method in Method::ALL {
            let cfg = OptimizerConfig {
                method,
                max_tries: 200,
                seed,
                ..OptimizerConfig::default()
            };
            let h = guided_tour(&x, &desc, &cfg, &[IndexDescriptor::new(IndexKind::Dcor2d)]).unwrap();
            histories += 1;
            unsound += usize::from(!history_is_sound(&h));
        }
        let pipe = data(Family::Pipe, 300, 5, seed);
        let mut scout = scout_config(seed);
        scout.max_tries = 300;
        let h = scout_then_refine(&pipe, &IndexDescriptor::new(IndexKind::Holes), &scout, &refine_config(seed), &[]).unwrap();
        histories += 1;
        unsound += usize::from(!history_is_sound(&h));
    }

    let pass = worst_ortho <= 1e-10 && worst_end <= 1e-8 && worst_spacing <= 1e-6 && metric_failures == 0 && unsound == 0;
    report(
        10,
        pass,
        &format!(
            "orthonormality {worst_ortho:.2e}, endpoints {worst_end:.2e}, spacing {worst_spacing:.2e}, metric failures {metric_failures}/1000, unsound histories {unsound}/{histories}"
        ),
    );
}

fn tourpp(args: &[&str]) -> std::process::Output {
    Process::new(env!("CARGO_BIN_EXE_tourpp")).args(args).output().unwrap()
}

/// Every file that should be byte-identical across runs. Timing output is
/// wall-clock time, so only its non-timing columns are compared.
fn artifacts(dir: &Path) -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| matches!(p.extension().and_then(|e| e.to_str()), Some("csv" | "svg")))
        .map(|p| {
            let name = p.file_name().unwrap().to_string_lossy().to_string();
            let mut text = std::fs::read_to_string(&p).unwrap();
            if name == "timing.csv" {
                text = text.lines().map(|l| l.rsplit_once(',').unwrap().0.to_string() + "\n").collect();
            }
            (name, text)
        })
        .collect();
    out.sort();
    out
}

#[test]
#[ignore = "acceptance suite"]
fn criterion_11_cli_reproducibility() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path();
    let data_block = "[data]\n[data.simulate]\nfamily = \"sine\"\nn = 300\np = 5\n";
    let configs: Vec<(&str, &str, String)> = vec![
        ("simulate", "sim", data_block.to_string()),
        (
            "evaluate",
            "eval",
            format!("{data_block}[[indexes]]\nname = \"splines2d\"\n[[indexes]]\nname = \"skinny\"\n[evaluate]\npairs = [[1, 2], [4, 5]]\n"),
        ),
        (
            "trace",
            "trace",
            format!("{data_block}[[indexes]]\nname = \"dcor2d\"\n[[indexes]]\nname = \"holes\"\n[trace]\nkind = \"squint\"\n"),
        ),
        (
            "optimize",
            "opt",
            format!("{data_block}[[indexes]]\nname = \"splines2d\"\n[optimize]\nverify = {{ columns = [4, 5], max_dist = 2.0 }}\n[optimize.search]\nmax_tries = 200\n"),
        ),
        (
            "diagnose",
            "pct",
            "[[indexes]]\nname = \"dcor2d\"\n[diagnose]\nkind = \"percentile\"\nn = 100\np = 4\nn_reps = 20\n".to_string(),
        ),
        (
            "diagnose",
            "rot",
            format!("{data_block}[[indexes]]\nname = \"skinny\"\n[diagnose]\nkind = \"rotation\"\nn_angles = 12\n"),
        ),
        (
            "diagnose",
            "time",
            "[[indexes]]\nname = \"dcor2d\"\n[diagnose]\nkind = \"timing\"\nsizes = [50]\nn_reps = 3\n".to_string(),
        ),
        (
            "diagnose",
            "sweep",
            format!("{data_block}[[indexes]]\nname = \"stringy\"\n[diagnose]\nkind = \"sweep\"\nparam = \"bin_cap\"\nvalues = [20, 40]\n"),
        ),
        (
            "diagnose",
            "squint",
            format!("{data_block}[[indexes]]\nname = \"splines2d\"\n[diagnose]\nkind = \"squint\"\nn_dirs = 4\n"),
        ),
        ("plot", "tplot", "[plot]\nkind = \"trace\"\ninput = \"trace/traces.csv\"\nmarkers = \"trace/markers.csv\"\n".to_string()),
        (
            "plot",
            "splot",
            format!("{data_block}[plot]\nkind = \"scatter\"\nframes = \"opt/frames.csv\"\n"),
        ),
    ];
    let mut covered = std::collections::BTreeSet::new();
    let mut differing = Vec::new();
    let mut failed = Vec::new();
    for (cmd, name, body) in &configs {
        let cfg_path = base.join(format!("{name}.toml"));
        std::fs::write(&cfg_path, format!("seed = 21\noutput_dir = \"{name}\"\n{body}")).unwrap();
        let mut runs = Vec::new();
        for round in 0..2 {
            let out = base.join(format!("{name}_{round}"));
            let status = tourpp(&[cmd, "--config", cfg_path.to_str().unwrap(), "--out", out.to_str().unwrap()]);
            if !status.status.success() {
                failed.push(format!("{name}: {}", String::from_utf8_lossy(&status.stderr).trim()));
            }
            runs.push(artifacts(&out));
        }
        // Later configs read the first run's outputs under the configured name.
        std::fs::rename(base.join(format!("{name}_0")), base.join(name)).unwrap();
        if runs[0].is_empty() || runs[0] != runs[1] {
            differing.push(name.to_string());
        }
        covered.insert(*cmd);
    }
    report(
        11,
        failed.is_empty() && differing.is_empty() && covered.len() == 6,
        &format!(
            "{} runs over {} commands; differing {differing:?}; failures {failed:?}",
            configs.len() * 2,
            covered.len()
        ),
    );
}
