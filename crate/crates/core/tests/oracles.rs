//! Frozen values and independent brute-force oracles. Prime fields are
//! re-implemented here with plain `mod p` integers so the checks do not lean
//! on the library's own arithmetic.

use std::f64::consts::PI;

use ffr_core::estimates::{
    additive_energy, extension_ratio, incidence_count, necessary_exponents, orthogonal_triples,
    paraboloid_pair_count, subspace_ratio_closed_form, witness_exponent_prediction, zero_distance_pairs, Route,
    TestFunction,
};
use ffr_core::field::{gauss_sum_direct, gauss_sum_explicit, Fe, FiniteField};
use ffr_core::grid::{lp_norm, Exponent, ExponentPair, GridFunction, Measure, Space};
use ffr_core::variety::{
    decay_profile, orthogonal_vectors_witness, sphere_affine_subspace, sphere_fourier_brute, sphere_fourier_explicit,
    witt_isotropic_subspace, QuadraticVariety, SphereBranch, VarietyKind,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn space(q: u32, d: usize) -> Space {
    Space::new(FiniteField::with_order(q).unwrap(), d).unwrap()
}

fn ints(x: &[Fe]) -> Vec<i64> {
    x.iter().map(|e| e.0 as i64).collect()
}

fn dot_mod(x: &[i64], y: &[i64], p: i64) -> i64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum::<i64>().rem_euclid(p)
}

fn chi(t: i64, p: i64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * t.rem_euclid(p) as f64 / p as f64)
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

fn random_function(s: &Space, seed: u64) -> GridFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    GridFunction::from_fn(s, |_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

#[test]
fn gauss_sums_frozen() {
    let s3 = 3f64.sqrt();
    let cases = [
        (3, Complex64::new(0.0, s3)),
        (5, Complex64::new(5f64.sqrt(), 0.0)),
        (7, Complex64::new(0.0, 7f64.sqrt())),
        (9, Complex64::new(3.0, 0.0)),
        (25, Complex64::new(-5.0, 0.0)),
        (27, Complex64::new(0.0, -3.0 * s3)),
    ];
    for (q, expected) in cases {
        let f = FiniteField::with_order(q).unwrap();
        assert!(close(gauss_sum_direct(&f), expected, 1e-12), "direct q={q}");
        assert!(close(gauss_sum_explicit(&f), expected, 1e-12), "explicit q={q}");
    }
}

#[test]
fn gauss_sum_against_integer_oracle() {
    // Σ_{s≠0} η(s) χ(s) with η from the set of squares mod p.
    for p in [3i64, 5, 7, 11, 13, 17, 19, 23] {
        let squares: Vec<i64> = (1..p).map(|s| s * s % p).collect();
        let oracle: Complex64 = (1..p).map(|s| if squares.contains(&s) { chi(s, p) } else { -chi(s, p) }).sum();
        let f = FiniteField::with_order(p as u32).unwrap();
        assert!(close(gauss_sum_direct(&f), oracle, 1e-12), "p={p}");
        assert!((oracle.norm_sqr() - p as f64).abs() < 1e-9);
    }
}

#[test]
fn field_examples() {
    let f9 = FiniteField::with_order(9).unwrap();
    // Smallest monic irreducible quadratic over F_3: x^2 + 1 has no root.
    assert_eq!(f9.modulus(), &[1, 0, 1]);
    assert_eq!(f9.trace(Fe::ONE), 2);
    let a = f9.from_coefficients(&[0, 1]).unwrap();
    let by_sum = f9.add(a, f9.pow(a, 3));
    assert_eq!(f9.trace(a) as usize, f9.coefficients(by_sum)[0] as usize);
    assert!(f9.coefficients(by_sum)[1..].iter().all(|&c| c == 0));
    let total: Complex64 = f9.elements().map(|x| f9.additive_character(x)).sum();
    assert!(total.norm() < 1e-12);
    let squares: Vec<Fe> = f9.nonzero().map(|x| f9.square(x)).collect();
    for x in f9.nonzero() {
        assert_eq!(f9.quadratic_character(x) == 1, squares.contains(&x));
    }
    assert!(FiniteField::new(2, 1).is_err());
    let f5 = FiniteField::with_order(5).unwrap();
    assert!(close(f5.additive_character(Fe::ONE), chi(1, 5), 1e-15));
}

#[test]
fn forward_transform_matches_naive_double_loop() {
    for (q, d) in [(3u32, 2usize), (5, 2), (3, 3), (7, 2)] {
        let s = space(q, d);
        let p = q as i64;
        let g = random_function(&s, q as u64 * 10 + d as u64);
        let fast = g.fourier_forward();
        let pts: Vec<Vec<i64>> = s.points().map(|x| ints(&x)).collect();
        for (i, x) in pts.iter().enumerate() {
            let naive: Complex64 = pts.iter().enumerate().map(|(k, m)| g.get(k) * chi(-dot_mod(x, m, p), p)).sum();
            assert!(close(fast.get(i), naive, 1e-9), "q={q} d={d} x={x:?}");
        }
    }
}

#[test]
fn inverse_transform_matches_naive_and_round_trips() {
    let s = space(5, 2);
    let f = random_function(&s, 77);
    let inv = f.fourier_inverse();
    let pts: Vec<Vec<i64>> = s.points().map(|x| ints(&x)).collect();
    for (i, m) in pts.iter().enumerate() {
        let naive: Complex64 =
            pts.iter().enumerate().map(|(k, x)| f.get(k) * chi(dot_mod(m, x, 5), 5)).sum::<Complex64>() / 25.0;
        assert!(close(inv.get(i), naive, 1e-12));
    }
    assert!(inv.fourier_forward().max_distance(&f).unwrap() < 1e-9);
}

#[test]
fn transform_over_f9_matches_direct_sum() {
    let s = space(9, 2);
    let field = s.field().clone();
    let g = random_function(&s, 9);
    let fast = g.fourier_forward();
    for (i, x) in s.points().enumerate() {
        let naive: Complex64 = s
            .points()
            .enumerate()
            .map(|(k, m)| g.get(k) * field.additive_character(field.neg(s.dot(&x, &m))))
            .sum();
        assert!(close(fast.get(i), naive, 1e-9));
    }
}

#[test]
fn plancherel_on_f3_cubed() {
    let s = space(3, 3);
    for seed in 0..20 {
        let g = random_function(&s, seed);
        let lhs = lp_norm(&g.fourier_forward(), Exponent::Finite(2.0), Measure::Normalized).unwrap();
        let rhs = lp_norm(&g, Exponent::Finite(2.0), Measure::Counting).unwrap();
        assert!((lhs - rhs).abs() < 1e-9 * rhs);
    }
}

fn brute_sphere(q: i64, d: usize, j: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let total = (q as usize).pow(d as u32);
    for mut n in 0..total {
        let mut x = vec![0i64; d];
        for c in x.iter_mut().rev() {
            *c = (n % q as usize) as i64;
            n /= q as usize;
        }
        if x.iter().map(|c| c * c).sum::<i64>().rem_euclid(q) == j {
            out.push(x);
        }
    }
    out
}

#[test]
fn sphere_sizes_from_brute_force() {
    assert_eq!(brute_sphere(3, 2, 1).len(), 4);
    assert_eq!(brute_sphere(3, 2, 0).len(), 1);
    assert_eq!(brute_sphere(3, 6, 0).len(), 225);
    for (q, d) in [(3u32, 2usize), (5, 3), (3, 6), (7, 3), (5, 4)] {
        let s = space(q, d);
        for j in 0..q {
            let v = QuadraticVariety::enumerate(VarietyKind::Sphere(Fe(j)), &s).unwrap();
            let oracle = brute_sphere(q as i64, d, j as i64);
            assert_eq!(v.size(), oracle.len(), "q={q} d={d} j={j}");
            let ours: Vec<Vec<i64>> = v.points().map(|x| ints(&x)).collect();
            assert_eq!(ours, oracle);
        }
    }
    // |S_0| = q^{d−1} − (q−1) q^{(d−2)/2} at d = 6, q = 3.
    assert_eq!(3usize.pow(5) - 2 * 3usize.pow(2), 225);
}

#[test]
fn sphere_transform_examples() {
    let s = space(5, 2);
    let v = QuadraticVariety::enumerate(VarietyKind::Sphere(Fe::ONE), &s).unwrap();
    let brute = sphere_fourier_brute(&v);
    let pts: Vec<Vec<i64>> = brute_sphere(5, 2, 1);
    for (i, alpha) in s.points().enumerate() {
        let a = ints(&alpha);
        let naive: Complex64 = pts.iter().map(|x| chi(dot_mod(&a, x, 5), 5)).sum::<Complex64>() / 25.0;
        assert!(close(brute.get(i), naive, 1e-12));
        let formula = sphere_fourier_explicit(&s, Fe::ONE, &alpha, SphereBranch::General).unwrap();
        assert!(close(formula, naive, 1e-9));
    }

    // j = 0, d = 6, q = 3: q^{-4} at every α with ‖α‖ ≠ 0.
    let s6 = space(3, 6);
    let alpha = vec![Fe::ONE, Fe::ZERO, Fe::ZERO, Fe::ZERO, Fe::ZERO, Fe::ZERO];
    for branch in [SphereBranch::General, SphereBranch::ZeroRadius] {
        let z = sphere_fourier_explicit(&s6, Fe::ZERO, &alpha, branch).unwrap();
        assert!(close(z, Complex64::new(3f64.powi(-4), 0.0), 1e-12));
    }
    let origin = s6.origin();
    let z = sphere_fourier_explicit(&s6, Fe::ZERO, &origin, SphereBranch::ZeroRadius).unwrap();
    assert!(close(z * 729.0, Complex64::new(225.0, 0.0), 1e-9));
    assert!(sphere_fourier_explicit(&space(5, 6), Fe::ZERO, &alpha, SphereBranch::ZeroRadius).is_err());
}

#[test]
fn decay_examples() {
    let p = decay_profile(&QuadraticVariety::enumerate(VarietyKind::Sphere(Fe::ZERO), &space(3, 6)).unwrap()).unwrap();
    assert!((p.bound - 1.0 / 9.0).abs() < 1e-15);
    let s = space(3, 6);
    let pts = brute_sphere(3, 6, 0);
    let mut best: f64 = 0.0;
    for m in s.points().skip(1) {
        let m = ints(&m);
        let v: Complex64 = pts.iter().map(|x| chi(dot_mod(&m, x, 3), 3)).sum::<Complex64>() / pts.len() as f64;
        best = best.max(v.norm());
    }
    assert!((p.max - best).abs() < 1e-12);

    let p = decay_profile(&QuadraticVariety::enumerate(VarietyKind::Sphere(Fe::ZERO), &space(7, 3)).unwrap()).unwrap();
    assert!((p.bound - 1.0 / 7.0).abs() < 1e-15);
    // Odd d: every m with ‖m‖ ≠ 0 has modulus exactly q^{−(d−1)/2}.
    assert!((p.ratio - 1.0).abs() < 1e-9);

    let degenerate = QuadraticVariety::enumerate(VarietyKind::Sphere(Fe::ZERO), &space(3, 2)).unwrap();
    assert!(degenerate.is_degenerate());
}

#[test]
fn witness_sizes() {
    for (d, q, dim) in [(6, 3, 2), (4, 3, 2), (3, 5, 1)] {
        let h = witt_isotropic_subspace(&space(q, d)).unwrap();
        assert_eq!((h.dim(), h.size()), (dim, (q as usize).pow(dim as u32)));
        assert!(h.lies_on(VarietyKind::Sphere(Fe::ZERO)));
    }
    let a = sphere_affine_subspace(&space(5, 4), Fe::ONE).unwrap();
    assert_eq!(a.size(), 5);
    assert!(a.points().iter().all(|x| brute_sphere(5, 4, 1).contains(&ints(x))));
    let a = sphere_affine_subspace(&space(3, 6), Fe::ONE).unwrap();
    assert_eq!(a.size(), 9);
    assert!(VarietyKind::Sphere(Fe::ONE).contains(a.space(), a.offset()));
}

/// Additive energy by the quadruple loop.
fn energy_oracle(a: &[Vec<i64>], p: i64) -> u64 {
    let add = |x: &[i64], y: &[i64]| -> Vec<i64> { x.iter().zip(y).map(|(u, v)| (u + v) % p).collect() };
    let mut n = 0;
    for x in a {
        for y in a {
            let s = add(x, y);
            for z in a {
                for w in a {
                    n += (add(z, w) == s) as u64;
                }
            }
        }
    }
    n
}

fn random_subset(v: &QuadraticVariety, k: usize, seed: u64) -> Vec<Vec<Fe>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rand::seq::index::sample(&mut rng, v.size(), k).iter().map(|i| v.space().point(v.indices()[i] as usize)).collect()
}

#[test]
fn energy_and_pairs_against_loops() {
    let s = space(5, 4);
    let v = QuadraticVariety::enumerate(VarietyKind::Sphere(Fe::ONE), &s).unwrap();
    for seed in 0..3 {
        let a = random_subset(&v, 20, seed);
        let ai: Vec<Vec<i64>> = a.iter().map(|x| ints(x)).collect();
        assert_eq!(additive_energy(&s, &a), energy_oracle(&ai, 5));
        let t = orthogonal_triples(&s, Fe::ONE, &a).unwrap();
        assert_eq!(Some(t.membership), t.orthogonal);
        let mut triples = 0;
        for x in &ai {
            for y in &ai {
                for z in &ai {
                    let w: Vec<i64> = (0..4).map(|k| (x[k] + y[k] - z[k]).rem_euclid(5)).collect();
                    triples += (w.iter().map(|c| c * c).sum::<i64>() % 5 == 1) as u64;
                }
            }
        }
        assert_eq!(t.membership, triples);
        assert!(additive_energy(&s, &a) <= t.membership);
    }
    assert_eq!(additive_energy(&s, &a_single(&v)), 1);

    let s7 = space(7, 4);
    let v7 = QuadraticVariety::enumerate(VarietyKind::Sphere(Fe::ONE), &s7).unwrap();
    let a = random_subset(&v7, 40, 5);
    let ai: Vec<Vec<i64>> = a.iter().map(|x| ints(x)).collect();
    let oracle = ai.iter().flat_map(|x| ai.iter().map(move |y| dot_mod(x, y, 7))).filter(|&t| t == 1).count();
    assert_eq!(zero_distance_pairs(&s7, Fe::ONE, &a).unwrap(), oracle as u64);
    assert_eq!(zero_distance_pairs(&s7, Fe::ONE, &a[..1]).unwrap(), 1);
}

fn a_single(v: &QuadraticVariety) -> Vec<Vec<Fe>> {
    vec![v.points().next().unwrap()]
}

#[test]
fn subspace_energy_is_cubic() {
    let s = space(5, 4);
    let a = sphere_affine_subspace(&s, Fe::ONE).unwrap().points();
    assert_eq!(additive_energy(&s, &a), 125);
    assert_eq!(orthogonal_triples(&s, Fe::ONE, &a).unwrap().membership, 125);
}

#[test]
fn orthogonal_witness_pairs_d6_q3() {
    let s = space(3, 6);
    for j in [1, 2] {
        let a = orthogonal_vectors_witness(&s, Fe(j)).unwrap().points();
        assert_eq!(a.len(), 9);
        assert_eq!(zero_distance_pairs(&s, Fe(j), &a).unwrap(), 81);
    }
}

#[test]
fn paraboloid_and_incidences_against_loops() {
    let up = space(5, 3);
    let p: Vec<Vec<Fe>> = QuadraticVariety::enumerate(VarietyKind::Paraboloid, &up).unwrap().points().collect();
    let origin = up.origin();
    assert_eq!(paraboloid_pair_count(&up, std::slice::from_ref(&origin), std::slice::from_ref(&origin)).unwrap().count, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a: Vec<Vec<Fe>> = vec![p[rng.gen_range(0..p.len())].clone()];
    let b: Vec<Vec<Fe>> = (0..15).map(|_| p[rng.gen_range(0..p.len())].clone()).collect();
    let on_p = |x: &[i64]| (x[0] * x[0] + x[1] * x[1] - x[2]).rem_euclid(5) == 0;
    let oracle = a
        .iter()
        .flat_map(|x| b.iter().map(move |y| (ints(x), ints(y))))
        .filter(|(x, y)| on_p(&[(x[0] + y[0]) % 5, (x[1] + y[1]) % 5, (x[2] + y[2]) % 5]))
        .count();
    assert_eq!(paraboloid_pair_count(&up, &a, &b).unwrap().count, oracle as u64);

    let s = space(7, 4);
    let pts: Vec<Vec<Fe>> = (0..50).map(|_| s.point(rng.gen_range(0..s.size()))).collect();
    let mut normals: Vec<Vec<Fe>> = Vec::new();
    while normals.len() < 50 {
        let h = s.point(rng.gen_range(1..s.size()));
        let lead = *h.iter().find(|c| !c.is_zero()).unwrap();
        let h = s.scale(s.field().inv(lead).unwrap(), &h);
        if !normals.contains(&h) {
            normals.push(h);
        }
    }
    let oracle =
        pts.iter().flat_map(|x| normals.iter().map(move |h| dot_mod(&ints(x), &ints(h), 7))).filter(|&t| t == 0).count();
    let r = incidence_count(&s, &pts, &normals).unwrap();
    assert_eq!(r.count, oracle as u64);
    let e1 = vec![Fe::ONE, Fe::ZERO, Fe::ZERO, Fe::ZERO];
    assert_eq!(incidence_count(&s, std::slice::from_ref(&e1), std::slice::from_ref(&e1)).unwrap().count, 0);
}

#[test]
fn exponent_arithmetic() {
    let r = necessary_exponents(6, 2, Exponent::Finite(2.0)).unwrap();
    assert!((r.value() - 8.0 / 3.0).abs() < 1e-12);
    let r = necessary_exponents(4, 1, Exponent::Finite(1.6)).unwrap();
    assert!((r.value() - 4.0).abs() < 1e-12);
    let r = necessary_exponents(3, 1, Exponent::Finite(2.0)).unwrap();
    assert!((r.value() - 4.0).abs() < 1e-12);
    assert_eq!(necessary_exponents(6, 2, Exponent::Finite(1.0)).unwrap(), Exponent::Infinite);
    let pair = |p, r| ExponentPair::new(p, r).unwrap();
    assert!(witness_exponent_prediction(6, 2, pair(2.0, 8.0 / 3.0)).unwrap().abs() < 1e-12);
    assert!(witness_exponent_prediction(4, 1, pair(1.6, 4.0)).unwrap().abs() < 1e-12);
    assert!(witness_exponent_prediction(6, 2, pair(2.0, 2.4)).unwrap() > 0.0);
}

#[test]
fn isotropic_witness_ratio_by_character_sums() {
    // (1_H dσ)^∨(m) = |H|/|S_0| on H^⊥ and 0 elsewhere.
    let s = space(3, 6);
    let v = QuadraticVariety::enumerate(VarietyKind::Sphere(Fe::ZERO), &s).unwrap();
    let h = witt_isotropic_subspace(&s).unwrap();
    let hp: Vec<Vec<i64>> = h.points().iter().map(|x| ints(x)).collect();
    let pair = ExponentPair::new(2.0, 8.0 / 3.0).unwrap();
    let mut sum = 0.0;
    for m in s.points() {
        let m = ints(&m);
        let val: Complex64 = hp.iter().map(|x| chi(dot_mod(&m, x, 3), 3)).sum::<Complex64>() / v.size() as f64;
        sum += val.norm().powf(8.0 / 3.0);
    }
    let numerator = sum.powf(3.0 / 8.0);
    let denominator = (h.size() as f64 / v.size() as f64).sqrt();
    let ratio = numerator / denominator;
    assert!((ratio - subspace_ratio_closed_form(3, 6, 2, v.size(), pair)).abs() < 1e-9);
    for route in [Route::Dense, Route::Sparse] {
        let s = extension_ratio(&TestFunction::indicator(h.indices()), &v, pair, route, "H").unwrap();
        assert!((s.ratio - ratio).abs() < 1e-9 * ratio);
    }
    // f ≡ 1: the numerator is at least (dσ)^∨(0) = 1.
    let one = extension_ratio(&TestFunction::One, &v, pair, Route::Dense, "one").unwrap();
    assert!(one.numerator >= 1.0 && one.denominator == 1.0);
    // A point mass has constant modulus 1/|V|.
    let pm = extension_ratio(&TestFunction::point_mass(v.indices()[3] as usize), &v, pair, Route::Dense, "pm").unwrap();
    let expected = (729.0f64).powf(3.0 / 8.0) / v.size() as f64;
    assert!((pm.numerator - expected).abs() < 1e-12 * expected);
}
