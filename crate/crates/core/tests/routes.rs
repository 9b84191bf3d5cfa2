//! Quantities with two independent implementations, and the harness plumbing
//! around them.

use ffr_core::error::Error;
use ffr_core::estimates::{
    additive_energy, energy_by_transform, energy_chain_check, extension_ratio, orthogonal_triples,
    restriction_l2_zero_sphere, spectral_counts, weak_l4_nonzero_sphere, zero_distance_pairs, Route, TestFunction,
    ZeroSphereKernel,
};
use ffr_core::exec::Execution;
use ffr_core::field::{Fe, FiniteField};
use ffr_core::grid::{lp_norm, lp_norm_with, Exponent, ExponentPair, GridFunction, Measure, Space};
use ffr_core::harness::{run_suite, ExperimentConfig, GridPoint, OutputFormat};
use ffr_core::variety::{
    radial_profile, sphere_affine_subspace, surface_extension, QuadraticVariety, VarietyKind,
};
use num_complex::Complex64;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn space(q: u32, d: usize) -> Space {
    Space::new(FiniteField::with_order(q).unwrap(), d).unwrap()
}

fn sphere(s: &Space, j: u32) -> QuadraticVariety {
    QuadraticVariety::enumerate(VarietyKind::Sphere(Fe(j)), s).unwrap()
}

fn subset(v: &QuadraticVariety, k: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<usize> = index::sample(&mut rng, v.size(), k).iter().map(|i| v.indices()[i] as usize).collect();
    out.sort_unstable();
    out
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

#[test]
fn radial_and_dense_agree_for_f_equal_one() {
    for (q, d, j) in [(3, 4, 0), (5, 3, 2), (3, 6, 0), (7, 4, 1), (9, 3, 0)] {
        let s = space(q, d);
        let v = sphere(&s, j);
        for (p, r) in [(2.0, 8.0 / 3.0), (1.6, 4.0), (1.0, 2.0)] {
            let pair = ExponentPair::new(p, r).unwrap();
            let dense = extension_ratio(&TestFunction::One, &v, pair, Route::Dense, "one").unwrap();
            let radial = extension_ratio(&TestFunction::One, &v, pair, Route::Radial, "one").unwrap();
            assert!(rel(dense.ratio, radial.ratio) < 1e-9, "q={q} d={d} j={j}");
        }
        let profile = radial_profile(&v).unwrap();
        let ext = surface_extension(&GridFunction::constant(&s, Complex64::new(1.0, 0.0)), &v).unwrap();
        for m in s.points().skip(1) {
            let c = s.norm(&m).index();
            assert!((profile.values[c].unwrap() - ext.at(&m)).norm() < 1e-12);
        }
    }
}

#[test]
fn surface_extension_is_inverse_of_density() {
    let s = space(5, 3);
    let v = sphere(&s, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let f = GridFunction::from_fn(&s, |x| {
        if v.contains(x) {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let density = f.scaled(s.size() as f64 / v.size() as f64);
    let a = surface_extension(&f, &v).unwrap();
    assert!(a.max_distance(&density.fourier_inverse()).unwrap() < 1e-12);
}

#[test]
fn spectral_counts_match_direct_counts() {
    let s = space(5, 4);
    let v = sphere(&s, 2);
    let s_hat = GridFunction::indicator(&s, v.indices().iter().map(|&i| i as usize)).fourier_forward();
    let s0_hat = GridFunction::indicator(&s, sphere(&s, 0).indices().iter().map(|&i| i as usize)).fourier_forward();
    for (k, seed) in [(1, 0), (7, 1), (40, 2), (90, 3)] {
        let idx = subset(&v, k, seed);
        let pts: Vec<Vec<Fe>> = idx.iter().map(|&i| s.point(i)).collect();
        let c = spectral_counts(&s, &idx, &s_hat, &s0_hat).unwrap();
        assert_eq!(c.energy, additive_energy(&s, &pts));
        assert_eq!(c.triples, orthogonal_triples(&s, Fe(2), &pts).unwrap().membership);
        assert_eq!(c.zero_distance_pairs, zero_distance_pairs(&s, Fe(2), &pts).unwrap());
        assert!(rel(energy_by_transform(&s, &pts), c.energy as f64) < 1e-9);
    }
}

#[test]
fn weak_l2_both_routes_agree_with_a_fresh_transform() {
    let s = space(3, 6);
    let ctx = ZeroSphereKernel::new(&s).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut methods = Vec::new();
    for k in [1, 5, 30, 200, 729] {
        let mut g = index::sample(&mut rng, s.size(), k).into_vec();
        g.sort_unstable();
        let r = restriction_l2_zero_sphere(&ctx, &g).unwrap();
        let hat = GridFunction::indicator(&s, g.iter().copied()).fourier_forward();
        let direct: f64 = ctx.sphere.indices().iter().map(|&i| hat.get(i as usize).norm_sqr()).sum();
        assert!(rel(r.lhs, direct) < 1e-9, "k={k}");
        assert!(r.hypothesis && r.holds);
        methods.push(r.method);
    }
    assert!(methods.contains(&"pairs") && methods.contains(&"dense"));
    let single = restriction_l2_zero_sphere(&ctx, &[17]).unwrap();
    assert!((single.lhs - ctx.sphere.size() as f64).abs() < 1e-9);
    assert_eq!(single.rhs, 243.0 + 9.0);
    assert_eq!(restriction_l2_zero_sphere(&ctx, &[]).unwrap().lhs, 0.0);
}

#[test]
fn weak_l4_identity_and_single_point() {
    let s = space(7, 4);
    let v = sphere(&s, 1);
    for (k, seed) in [(1, 0), (12, 1), (150, 2)] {
        let a: Vec<Vec<Fe>> = subset(&v, k, seed).iter().map(|&i| s.point(i)).collect();
        let r = weak_l4_nonzero_sphere(&v, &a).unwrap();
        assert!(r.relative_gap < 1e-9);
        if k == 1 {
            assert_eq!(r.energy, 1);
            assert!(rel(r.direct, 7f64 / v.size() as f64) < 1e-12);
        }
    }
    let h = sphere_affine_subspace(&s, Fe::ONE).unwrap().points();
    assert_eq!(weak_l4_nonzero_sphere(&v, &h).unwrap().energy, 7u64.pow(3));
}

#[test]
fn chain_bookkeeping_is_consistent() {
    let s = space(5, 3);
    let v = sphere(&s, 1);
    for (k, seed) in [(3, 0), (10, 1), (25, 2)] {
        let a: Vec<Vec<Fe>> = subset(&v, k, seed).iter().map(|&i| s.point(i)).collect();
        let c = energy_chain_check(&s, Fe::ONE, &a).unwrap();
        assert!(c.consistent && c.dilation_holds);
        assert_eq!(c.isotropic_case + c.regular_case, c.total);
        assert_eq!(c.total, orthogonal_triples(&s, Fe::ONE, &a).unwrap().membership);
    }
}

#[test]
fn sequential_and_parallel_agree_bitwise() {
    let s = space(5, 5);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let f = GridFunction::from_fn(&s, |_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let a = f.fourier_forward_with(Execution::Sequential);
    let b = f.fourier_forward_with(Execution::Parallel);
    assert_eq!(a.values(), b.values());
    for r in [Exponent::Finite(1.0), Exponent::Finite(8.0 / 3.0), Exponent::Infinite] {
        let x = lp_norm_with(&f, r, Measure::Counting, Execution::Sequential).unwrap();
        let y = lp_norm_with(&f, r, Measure::Counting, Execution::Parallel).unwrap();
        assert_eq!(x.to_bits(), y.to_bits());
    }
    let kind = VarietyKind::Sphere(Fe::ZERO);
    let u = QuadraticVariety::enumerate_with(kind, &s, usize::MAX, Execution::Sequential).unwrap();
    let w = QuadraticVariety::enumerate_with(kind, &s, usize::MAX, Execution::Parallel).unwrap();
    assert_eq!(u.indices(), w.indices());
    assert_eq!(lp_norm(&f, Exponent::Finite(2.0), Measure::Counting).unwrap().to_bits(), {
        lp_norm_with(&f, Exponent::Finite(2.0), Measure::Counting, Execution::Sequential).unwrap().to_bits()
    });
}

fn strip_timings(mut v: serde_json::Value) -> serde_json::Value {
    v.as_object_mut().unwrap().remove("timings");
    v
}

#[test]
fn reports_are_deterministic_given_the_seed() {
    for suite in ["weak-l4", "lines", "paraboloid-pairs"] {
        let mut cfg = ExperimentConfig::for_suite(suite).unwrap();
        cfg.samples = cfg.samples.min(9);
        let a = serde_json::to_value(run_suite(suite, &cfg).unwrap()).unwrap();
        let b = serde_json::to_value(run_suite(suite, &cfg).unwrap()).unwrap();
        assert_eq!(strip_timings(a.clone()), strip_timings(b));
        assert_eq!(a["config"]["seed"], serde_json::json!(cfg.seed));
    }
}

#[test]
fn reports_are_written_in_both_formats() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::for_suite("gauss").unwrap();
    cfg.out = Some(dir.path().join("gauss.json"));
    cfg.format = OutputFormat::Json;
    let report = run_suite("gauss", &cfg).unwrap();
    assert!(report.pass);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("gauss.json")).unwrap()).unwrap();
    assert_eq!(json["suite"], "gauss");
    assert_eq!(json["cases"].as_array().unwrap().len(), cfg.q_list.len());
    let csv = std::fs::read_to_string(dir.path().join("gauss.csv")).unwrap();
    assert_eq!(csv.lines().count(), cfg.q_list.len() + 1);
}

#[test]
fn over_budget_points_are_skipped_with_a_notice() {
    let mut cfg = ExperimentConfig::for_suite("decay").unwrap();
    cfg.grid = vec![GridPoint { d: 4, q: 3 }, GridPoint { d: 8, q: 11 }];
    cfg.budget = 1_000_000;
    let report = run_suite("decay", &cfg).unwrap();
    assert!(report.notices.iter().any(|n| n.contains("q = 11")));
    assert_eq!(report.cases.len(), 1);
}

#[test]
fn unknown_suites_and_bad_configs_are_errors() {
    let cfg = ExperimentConfig::for_suite("gauss").unwrap();
    assert!(matches!(run_suite("nope", &cfg), Err(Error::UnknownSuite(_))));
    assert!(ExperimentConfig::for_suite("nope").is_err());
    let mut bad = cfg.clone();
    bad.q_list = vec![4];
    assert!(run_suite("gauss", &bad).is_err());
    let text = cfg.to_json().unwrap();
    assert_eq!(ExperimentConfig::from_json(&text).unwrap(), cfg);
}
