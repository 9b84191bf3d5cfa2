use std::time::Instant;

use serde_json::json;

use super::{sorted_q, space_for};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::field::{gauss_sum_direct, gauss_sum_explicit, Fe, FiniteField};
use crate::harness::config::ExperimentConfig;
use crate::harness::fit::constant_fit;
use crate::harness::report::{CaseRecord, Timing, VerificationReport};
use crate::variety::{
    decay_profile, equivalence_transform, expected_isotropic_dim, larger_isotropic_exists, orthogonal_vectors_witness,
    radial_profile, sphere_affine_subspace, sphere_fourier_brute, sphere_fourier_explicit, witt_isotropic_subspace,
    AffineSubspace, QuadraticVariety, SphereBranch, VarietyKind,
};
use crate::estimates::{collinear_triple_check, max_line_intersection};

const EXACT: f64 = 1e-9;

pub(super) fn gauss(cfg: &ExperimentConfig, rep: &mut VerificationReport) -> Result<()> {
    let mut worst_gap: f64 = 0.0;
    let mut worst_modulus: f64 = 0.0;
    for q in sorted_q(cfg.cases().iter().map(|p| p.q as usize)) {
        let field = FiniteField::with_order(q as u32)?;
        let direct = gauss_sum_direct(&field);
        let explicit = gauss_sum_explicit(&field);
        let gap = (direct - explicit).norm() / explicit.norm();
        let modulus = (direct.norm_sqr() - q as f64).abs() / q as f64;
        worst_gap = worst_gap.max(gap);
        worst_modulus = worst_modulus.max(modulus);
        rep.cases.push(CaseRecord::new("gauss", 1, q, format!("F_{q}"), gap).details(json!({
            "direct": [direct.re, direct.im],
            "explicit": [explicit.re, explicit.im],
            "modulus_squared": direct.norm_sqr(),
        })));
    }
    rep.check("direct-equals-explicit", worst_gap <= EXACT, format!("largest relative gap {worst_gap:.3e}"));
    rep.check("modulus-squared-is-q", worst_modulus <= EXACT, format!("largest relative gap {worst_modulus:.3e}"));
    Ok(())
}

/// Largest pointwise gap between a closed form and the dense `(1_{S_j})^∨`.
fn formula_gap(v: &QuadraticVariety, brute: &crate::grid::GridFunction, branch: SphereBranch) -> Result<f64> {
    let space = v.space();
    let VarietyKind::Sphere(j) = v.kind() else { unreachable!("spheres only") };
    // Surface the first error, if any, before taking the maximum.
    sphere_fourier_explicit(space, j, &space.origin(), branch)?;
    Ok(Execution::default().max_by(space.size(), |k| {
        let alpha = space.point(k);
        let value = sphere_fourier_explicit(space, j, &alpha, branch).expect("checked at the origin");
        (value - brute.get(k)).norm()
    }))
}

pub(super) fn sphere_fourier(cfg: &ExperimentConfig, rep: &mut VerificationReport) -> Result<()> {
    let mut general_worst: f64 = 0.0;
    let mut sizes_agree = true;
    let mut s0_225 = None;
    for p in cfg.cases() {
        let Some(space) = space_for(rep, p, cfg.budget)? else { continue };
        let field = space.field().clone();
        let start = Instant::now();
        let mut sweep = 0.0;
        for j in field.elements() {
            let t = Instant::now();
            let v = QuadraticVariety::enumerate_with(VarietyKind::Sphere(j), &space, cfg.budget, Execution::default())?;
            let brute = sphere_fourier_brute(&v);
            sweep += t.elapsed().as_secs_f64();
            let gap = formula_gap(&v, &brute, SphereBranch::General)?;
            general_worst = general_worst.max(gap);
            let from_formula =
                space.size() as f64 * sphere_fourier_explicit(&space, j, &space.origin(), SphereBranch::General)?.re;
            sizes_agree &= (from_formula - v.size() as f64).abs() < 1e-6;
            if (p.d, p.q, j) == (6, 3, Fe::ZERO) {
                s0_225 = Some((v.size(), from_formula.round() as usize));
            }
            rep.cases.push(
                CaseRecord::new("general-formula", p.d, p.q as usize, format!("S_{}", j.0), gap)
                    .j(j.0)
                    .size(v.size())
                    .details(json!({ "size_from_formula": from_formula })),
            );
        }
        rep.timings.push(Timing { label: format!("transform-sweep-d{}-q{}", p.d, p.q), seconds: sweep });
        rep.timings.push(Timing { label: format!("case-d{}-q{}", p.d, p.q), seconds: start.elapsed().as_secs_f64() });
    }
    rep.check("general-formula-matches-dense", general_worst <= EXACT, format!("largest gap {general_worst:.3e}"));
    rep.check("sphere-sizes-from-formula", sizes_agree, "q^d (1_{S_j})^v(0) = |S_j| at every grid point");
    if let Some((enumerated, formula)) = s0_225 {
        rep.check(
            "s0-size-d6-q3",
            enumerated == 225 && formula == 225,
            format!("enumeration {enumerated}, formula {formula}"),
        );
    }

    let mut zero_worst: f64 = 0.0;
    let mut zero_ran = false;
    for &p in &cfg.secondary_grid {
        let Some(space) = space_for(rep, p, cfg.budget)? else { continue };
        let v = QuadraticVariety::enumerate_with(VarietyKind::Sphere(Fe::ZERO), &space, cfg.budget, Execution::default())?;
        let brute = sphere_fourier_brute(&v);
        match formula_gap(&v, &brute, SphereBranch::ZeroRadius) {
            Ok(gap) => {
                zero_ran = true;
                zero_worst = zero_worst.max(gap);
                rep.cases.push(
                    CaseRecord::new("zero-radius-formula", p.d, p.q as usize, "S_0", gap).j(0).size(v.size()),
                );
            }
            Err(Error::BranchUnavailable(msg)) => rep.notice(msg),
            Err(e) => return Err(e),
        }
    }
    if zero_ran {
        rep.check("zero-radius-formula-matches-dense", zero_worst <= EXACT, format!("largest gap {zero_worst:.3e}"));
    }
    Ok(())
}

pub(super) fn lines(cfg: &ExperimentConfig, rep: &mut VerificationReport) -> Result<()> {
    let mut violations = 0;
    let mut max_on_line = 0;
    for p in cfg.cases() {
        let Some(space) = space_for(rep, p, cfg.budget)? else { continue };
        for &j in &cfg.j_list {
            let j = space.field().element(j)?;
            if j.is_zero() {
                rep.notice("j = 0 skipped: isotropic lines lie inside S_0");
                continue;
            }
            let v = QuadraticVariety::enumerate(VarietyKind::Sphere(j), &space)?;
            let bad = collinear_triple_check(&v)?;
            let on_line = max_line_intersection(&v);
            violations += bad.len();
            max_on_line = max_on_line.max(on_line);
            rep.cases.push(
                CaseRecord::new("collinear-triples", p.d, p.q as usize, format!("S_{}", j.0), bad.len() as f64)
                    .j(j.0)
                    .size(v.size())
                    .details(json!({ "max_points_on_line": on_line, "examples": bad.iter().take(3).collect::<Vec<_>>() })),
            );
        }
    }
    rep.check("no-collinear-triples", violations == 0, format!("{violations} violating triples"));
    rep.check("at-most-two-per-line", max_on_line <= 2, format!("largest intersection {max_on_line}"));
    Ok(())
}

fn subspace_details(h: &AffineSubspace, j: Option<Fe>) -> serde_json::Value {
    serde_json::to_value(h.export(j)).unwrap_or_default()
}

pub(super) fn subspaces(cfg: &ExperimentConfig, rep: &mut VerificationReport) -> Result<()> {
    let mut dims_ok = true;
    let mut members_ok = true;
    let mut affine_ok = true;
    let mut transforms_ok = true;
    let mut round_trips = true;
    for p in cfg.cases() {
        let Some(space) = space_for(rep, p, cfg.budget)? else { continue };
        let h = witt_isotropic_subspace(&space)?;
        let expected = expected_isotropic_dim(p.d, p.q as usize);
        let on = h.lies_on(VarietyKind::Sphere(Fe::ZERO)) && h.is_closed();
        dims_ok &= h.dim() == expected;
        members_ok &= on;
        round_trips &= AffineSubspace::from_export(&h.export(Some(Fe::ZERO)))? == h;
        rep.witness(format!("isotropic subspace of F_{}^{}", p.q, p.d));
        rep.cases.push(
            CaseRecord::new("isotropic", p.d, p.q as usize, "witt", h.dim() as f64)
                .j(0)
                .size(h.size())
                .bound(expected as f64)
                .details(json!({ "on_sphere": on, "subspace": subspace_details(&h, Some(Fe::ZERO)) })),
        );
        if p.d >= 4 && p.d % 2 == 0 {
            let t = equivalence_transform(&space)?;
            let exhaustive = space.size() <= 1 << 20;
            if exhaustive {
                transforms_ok &= t.check_exhaustive(&space);
            }
            for j in space.field().nonzero() {
                let a = sphere_affine_subspace(&space, j)?;
                let on = a.lies_on(VarietyKind::Sphere(j));
                affine_ok &= on && a.dim() == (p.d - 2) / 2;
                round_trips &= AffineSubspace::from_export(&a.export(Some(j)))? == a;
                rep.cases.push(
                    CaseRecord::new("affine", p.d, p.q as usize, format!("S_{}", j.0), a.dim() as f64)
                        .j(j.0)
                        .size(a.size())
                        .bound(((p.d - 2) / 2) as f64)
                        .details(json!({ "on_sphere": on, "subspace": subspace_details(&a, Some(j)) })),
                );
                match orthogonal_vectors_witness(&space, j) {
                    Ok(w) => {
                        affine_ok &= w.lies_on(VarietyKind::Sphere(j));
                        rep.cases.push(
                            CaseRecord::new("orthogonal-vectors", p.d, p.q as usize, format!("S_{}", j.0), w.dim() as f64)
                                .j(j.0)
                                .size(w.size()),
                        );
                    }
                    Err(Error::BranchUnavailable(msg)) => rep.notice(msg),
                    Err(e) => return Err(e),
                }
            }
            rep.witness(format!("affine subspaces on S_j of F_{}^{}", p.q, p.d));
        }
    }
    rep.check("isotropic-dimension", dims_ok, "dimension equals the Witt index at every grid point");
    rep.check("isotropic-membership", members_ok, "every point of every subspace has norm 0");
    rep.check("affine-membership", affine_ok, "every affine witness lies on its sphere");
    rep.check("normal-form-transform", transforms_ok, "change of variables verified at every point");
    rep.check("export-round-trip", round_trips, "subspaces survive JSON export and import");

    let mut maximal = true;
    for &p in &cfg.secondary_grid {
        let Some(space) = space_for(rep, p, cfg.budget)? else { continue };
        let dim = witt_isotropic_subspace(&space)?.dim();
        let larger = larger_isotropic_exists(&space, dim);
        maximal &= !larger;
        rep.cases.push(
            CaseRecord::new("maximality", p.d, p.q as usize, format!("dim {}", dim + 1), larger as u8 as f64)
                .details(json!({ "searched_dimension": dim + 1, "found": larger })),
        );
    }
    if !cfg.secondary_grid.is_empty() {
        rep.check("isotropic-maximal", maximal, "exhaustive search finds no larger isotropic subspace");
    }
    Ok(())
}

pub(super) fn decay(cfg: &ExperimentConfig, rep: &mut VerificationReport) -> Result<()> {
    let mut by_d: std::collections::BTreeMap<usize, Vec<(usize, f64)>> = Default::default();
    let mut routes_agree = true;
    for p in cfg.cases() {
        let Some(space) = space_for(rep, p, cfg.budget)? else { continue };
        let v = QuadraticVariety::enumerate_with(VarietyKind::Sphere(Fe::ZERO), &space, cfg.budget, Execution::default())?;
        if v.is_degenerate() {
            rep.notice(format!("S_0 = {{0}} at d = {}, q = {}", p.d, p.q));
            continue;
        }
        let profile = decay_profile(&v)?;
        if profile.method == "dense" {
            let radial = radial_profile(&v)?.max_nonzero().map_or(0.0, |m| m.0);
            routes_agree &= (radial - profile.max).abs() <= 1e-9 * profile.max.max(1e-300);
        }
        by_d.entry(p.d).or_default().push((p.q as usize, profile.ratio));
        rep.cases.push(
            CaseRecord::new("decay", p.d, p.q as usize, "S_0", profile.max)
                .j(0)
                .size(v.size())
                .bound(profile.bound)
                .details(&profile),
        );
    }
    let mut worst: f64 = 0.0;
    for (d, recs) in by_d {
        let fit = constant_fit(&recs)?;
        worst = worst.max(fit.global_max);
        rep.constants.insert(format!("decay-d{d}"), fit);
    }
    rep.check("radial-agrees-with-dense", routes_agree, "norm-class maximum equals the dense maximum");
    rep.check("decay-constant-at-most-one", worst <= 1.0 + EXACT, format!("largest ratio {worst:.6}"));
    Ok(())
}
