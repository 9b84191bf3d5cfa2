use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::seq::index;
use rand::Rng;
use serde_json::json;

use super::{non_increasing_from, space_for};
use crate::error::Result;
use crate::estimates::{
    alternating_extremals, extension_ratio, pairing_identity, restriction_ratio, subspace_ratio_closed_form,
    witness_exponent_prediction, Route, TestFunction,
};
use crate::field::Fe;
use crate::grid::{dual_norm, dyadic_decompose, lp_norm, Exponent, ExponentPair, GridFunction, Measure, Space};
use crate::harness::config::ExperimentConfig;
use crate::harness::fit::constant_fit;
use crate::harness::report::{CaseRecord, VerificationReport};
use crate::harness::sampling::{name_tag, task_rng};
use crate::variety::{sphere_affine_subspace, witt_isotropic_subspace, AffineSubspace, QuadraticVariety, VarietyKind};

/// Slope tolerance for the log–log fits of witness ratios.
const SLOPE_TOLERANCE: f64 = 0.05;

fn pair_label(pair: ExponentPair) -> String {
    let short = |e: Exponent| match e {
        Exponent::Infinite => "inf".to_string(),
        Exponent::Finite(x) => format!("{x:.4}").trim_end_matches('0').trim_end_matches('.').to_string(),
    };
    format!("p={},r={}", short(pair.p), short(pair.r))
}

fn random_phase<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
}

/// A random function on `V` with 1 to 4 support points; an indicator or
/// unit-modulus phases with equal odds.
fn random_sparse<R: Rng>(v: &QuadraticVariety, rng: &mut R) -> (String, TestFunction) {
    let k = rng.gen_range(1..=4usize).min(v.size());
    let support = index::sample(rng, v.size(), k);
    if rng.gen_bool(0.5) {
        let f = TestFunction::indicator(support.iter().map(|i| v.indices()[i] as usize));
        (format!("indicator-k{k}"), f)
    } else {
        let entries = support.iter().map(|i| (v.indices()[i] as usize, random_phase(rng))).collect();
        (format!("phases-k{k}"), TestFunction::Sparse(entries))
    }
}

struct Family {
    witness: Vec<(usize, f64)>,
    all: Vec<(usize, f64)>,
    closed_form_gap: f64,
}

/// Extension ratios on `V` for the subspace witness `h`, `f ≡ 1`, point masses
/// and `samples` random sparse functions.
#[allow(clippy::too_many_arguments)]
fn extension_family(
    rep: &mut VerificationReport,
    cfg: &ExperimentConfig,
    suite: &str,
    v: &QuadraticVariety,
    h: &AffineSubspace,
    j: u32,
    pair: ExponentPair,
    family: &mut Family,
) -> Result<()> {
    let space = v.space();
    let (d, q) = (space.dim(), space.q());
    let record = |rep: &mut VerificationReport, s: &crate::estimates::RatioSample| {
        rep.cases.push(
            CaseRecord::new(suite, d, q, s.descriptor.clone(), s.numerator)
                .j(j)
                .ratio(s.ratio)
                .details(json!({ "pair": pair_label(pair), "denominator": s.denominator, "route": s.route })),
        );
    };

    let w = extension_ratio(&TestFunction::indicator(h.indices()), v, pair, Route::Auto, "witness")?;
    let closed = subspace_ratio_closed_form(q, d, h.dim(), v.size(), pair);
    family.closed_form_gap = family.closed_form_gap.max((w.ratio - closed).abs() / closed);
    family.witness.push((q, w.ratio));
    family.all.push((q, w.ratio));
    record(rep, &w);

    let one = extension_ratio(&TestFunction::One, v, pair, Route::Auto, "one")?;
    family.all.push((q, one.ratio));
    record(rep, &one);

    let mut rng = task_rng(cfg.seed, &[name_tag(suite), q as u64, d as u64, j as u64, name_tag(&pair_label(pair))]);
    for k in 0..3.min(v.size()) {
        let i = v.indices()[rng.gen_range(0..v.size())] as usize;
        let s = extension_ratio(&TestFunction::point_mass(i), v, pair, Route::Auto, &format!("point-mass-{k}"))?;
        family.all.push((q, s.ratio));
        record(rep, &s);
    }
    let draws: Vec<(String, TestFunction)> = (0..cfg.samples).map(|_| random_sparse(v, &mut rng)).collect();
    let results: Vec<Result<_>> = draws
        .iter()
        .enumerate()
        .map(|(k, (label, f))| extension_ratio(f, v, pair, Route::Auto, &format!("random-{k}-{label}")))
        .collect();
    let mut random_max: f64 = 0.0;
    for s in results {
        let s = s?;
        random_max = random_max.max(s.ratio);
        family.all.push((q, s.ratio));
    }
    rep.cases.push(
        CaseRecord::new(suite, d, q, "random-max", random_max)
            .j(j)
            .ratio(random_max)
            .details(json!({ "pair": pair_label(pair), "count": cfg.samples })),
    );
    Ok(())
}

/// Slope assertions shared by both extension suites.
/// `label` names the pair, plus the radius when several are swept.
fn slope_checks(rep: &mut VerificationReport, pair: ExponentPair, label: &str, d: usize, ell: usize, family: &Family) -> Result<bool> {
    let e = witness_exponent_prediction(d, ell, pair)?;
    let fit = constant_fit(&family.witness)?;
    let slope = fit.slope.unwrap_or(f64::NAN);
    rep.constants.insert(format!("witness-{label}"), fit);
    rep.constants.insert(format!("family-{label}"), constant_fit(&family.all)?);
    rep.check(
        &format!("witness-matches-closed-form-{label}"),
        family.closed_form_gap <= 1e-9,
        format!("largest relative gap {:.3e}", family.closed_form_gap),
    );
    let sharp = e.abs() < 1e-12;
    if sharp {
        rep.check(
            &format!("witness-slope-flat-{label}"),
            slope.abs() <= SLOPE_TOLERANCE,
            format!("fitted slope {slope:.4}, predicted 0"),
        );
    } else {
        rep.check(
            &format!("witness-slope-matches-prediction-{label}"),
            slope > 0.0 && (slope - e).abs() <= SLOPE_TOLERANCE,
            format!("fitted slope {slope:.4}, predicted {e:.4}"),
        );
    }
    Ok(sharp)
}

pub(super) fn main_zero(cfg: &ExperimentConfig, rep: &mut VerificationReport) -> Result<()> {
    for &pair in &cfg.pairs {
        let mut family = Family { witness: Vec::new(), all: Vec::new(), closed_form_gap: 0.0 };
        let mut ell = None;
        let mut d_used = 0;
        for p in cfg.cases() {
            let Some(space) = space_for(rep, p, cfg.budget)? else { continue };
            let v = QuadraticVariety::enumerate(VarietyKind::Sphere(Fe::ZERO), &space)?;
            let h = witt_isotropic_subspace(&space)?;
            rep.witness("maximal isotropic subspace H of S_0, f ≡ 1, point masses");
            if ell.is_some_and(|l| l != h.dim()) || (d_used != 0 && d_used != p.d) {
                rep.notice(format!("d = {}, q = {}: witness dimension differs; fit mixes shapes", p.d, p.q));
            }
            ell = Some(h.dim());
            d_used = p.d;
            extension_family(rep, cfg, "main-zero", &v, &h, 0, pair, &mut family)?;
        }
        let Some(ell) = ell else { continue };
        let sharp = slope_checks(rep, pair, &pair_label(pair), d_used, ell, &family)?;
        if sharp {
            let fam = constant_fit(&family.all)?;
            rep.check(
                &format!("family-max-non-increasing-from-q7-{}", pair_label(pair)),
                non_increasing_from(&fam.per_q, 7, 1e-9),
                format!("per-q maxima {:?}", fam.per_q),
            );
        }
    }
    Ok(())
}

pub(super) fn main_nonzero(cfg: &ExperimentConfig, rep: &mut VerificationReport) -> Result<()> {
    for &pair in &cfg.pairs {
        for &jj in &cfg.j_list {
            let mut family = Family { witness: Vec::new(), all: Vec::new(), closed_form_gap: 0.0 };
            let mut ell = None;
            let mut d_used = 0;
            for p in cfg.cases() {
                let Some(space) = space_for(rep, p, cfg.budget)? else { continue };
                let j = space.field().element(jj)?;
                if j.is_zero() {
                    rep.notice("j = 0 skipped: this suite is for nonzero radii");
                    continue;
                }
                let v = QuadraticVariety::enumerate(VarietyKind::Sphere(j), &space)?;
                let h = sphere_affine_subspace(&space, j)?;
                rep.witness("affine subspace of S_j, f ≡ 1, point masses");
                ell = Some(h.dim());
                d_used = p.d;
                extension_family(rep, cfg, "main-nonzero", &v, &h, jj, pair, &mut family)?;
            }
            let Some(ell) = ell else { continue };
            let label = format!("{},j={jj}", pair_label(pair));
            slope_checks(rep, pair, &label, d_used, ell, &family)?;
            let fam = constant_fit(&family.all)?;
            rep.observe(
                &format!("family-max-non-increasing-{label}"),
                non_increasing_from(&fam.per_q, 0, 1e-9),
                format!("per-q maxima {:?}", fam.per_q),
            );
        }
    }
    Ok(())
}

fn random_function<R: Rng>(space: &Space, rng: &mut R, on: Option<&QuadraticVariety>) -> GridFunction {
    GridFunction::from_fn(space, |x| {
        if on.is_some_and(|v| !v.contains(x)) {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        }
    })
}

/// `g` with each modulus rounded down to its dyadic level value, phases kept.
fn dyadic_model(g: &GridFunction) -> Result<GridFunction> {
    let dec = dyadic_decompose(g)?;
    let levels = dec.reconstruction(g.len());
    let values = (0..g.len())
        .map(|i| {
            let a = g.get(i);
            if levels[i] == 0.0 { Complex64::new(0.0, 0.0) } else { a / a.norm() * (levels[i] * dec.scale) }
        })
        .collect();
    GridFunction::from_values(g.space(), values)
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

pub(super) fn duality(cfg: &ExperimentConfig, rep: &mut VerificationReport) -> Result<()> {
    let exponents: Vec<Exponent> =
        [1.0, 1.5, 2.0, 4.0].iter().map(|&p| Exponent::Finite(p)).chain([Exponent::Infinite]).collect();
    let mut norm_gap: f64 = 0.0;
    let mut unit_gap: f64 = 0.0;
    let mut pairing_gap: f64 = 0.0;
    let mut all_monotone = true;
    let mut ratios: BTreeMap<String, (f64, f64)> = BTreeMap::new();
    let mut loss_range = (f64::INFINITY, 0.0f64);
    for p in cfg.cases() {
        let Some(space) = space_for(rep, p, cfg.budget)? else { continue };
        let v = QuadraticVariety::enumerate(VarietyKind::Sphere(Fe::ZERO), &space)?;
        let mut rng = task_rng(cfg.seed, &[name_tag("duality"), p.q as u64, p.d as u64]);

        for _ in 0..cfg.samples {
            let f = random_function(&space, &mut rng, None);
            let on_v = random_function(&space, &mut rng, Some(&v));
            for &e in &exponents {
                for (mu, g) in [(Measure::Counting, &f), (Measure::Normalized, &f), (Measure::Surface(&v), &on_v)] {
                    let (value, extremal) = dual_norm(g, e, mu)?;
                    norm_gap = norm_gap.max(relative(value, lp_norm(g, e, mu)?));
                    unit_gap = unit_gap.max((lp_norm(&extremal, e.conjugate(), mu)? - 1.0).abs());
                }
            }
        }
        for k in 0..cfg.samples {
            let f = random_function(&space, &mut rng, Some(&v));
            let g = random_function(&space, &mut rng, None);
            let c = pairing_identity(&f, &g, &v)?;
            pairing_gap = pairing_gap.max(c.relative_gap);
            if k < 3 {
                rep.cases.push(CaseRecord::new("pairing", p.d, p.q as usize, format!("random-{k}"), c.relative_gap).details(c));
            }
        }

        for &pair in &cfg.pairs {
            let label = pair_label(pair);
            let h = witt_isotropic_subspace(&space)?;
            let mut starts = vec![
                ("isotropic".to_string(), GridFunction::indicator(&space, h.indices())),
                ("one".to_string(), GridFunction::indicator(&space, v.indices().iter().map(|&i| i as usize))),
                ("point-mass".to_string(), GridFunction::indicator(&space, [v.indices()[1] as usize])),
            ];
            for k in 0..4 {
                starts.push((format!("random-{k}"), random_function(&space, &mut rng, Some(&v))));
            }
            rep.witness("alternating extremal iteration from H, f ≡ 1, a point mass and random functions");
            let (mut ext_max, mut res_max) = (0.0f64, 0.0f64);
            for (name, f0) in &starts {
                let run = alternating_extremals(f0, &v, pair, 200, 1e-9)?;
                all_monotone &= run.monotone;
                let e = run.extension.iter().copied().fold(0.0, f64::max);
                let r = run.restriction.iter().copied().fold(0.0, f64::max);
                ext_max = ext_max.max(e);
                res_max = res_max.max(r);
                rep.cases.push(
                    CaseRecord::new("alternating", p.d, p.q as usize, name.clone(), e)
                        .ratio(e)
                        .details(json!({ "pair": label, "steps": run.restriction.len(), "restriction_max": r, "start": run.extension[0] })),
                );
            }
            for k in 0..cfg.samples {
                let g = random_function(&space, &mut rng, None);
                let res = restriction_ratio(&g, &v, pair)?;
                res_max = res_max.max(res);
                let model = dyadic_model(&g)?;
                let loss = res / restriction_ratio(&model, &v, pair)?;
                loss_range = (loss_range.0.min(loss), loss_range.1.max(loss));
                let f = random_function(&space, &mut rng, Some(&v));
                ext_max = ext_max.max(extension_ratio(&TestFunction::Dense(f), &v, pair, Route::Dense, &format!("random-{k}"))?.ratio);
            }
            ratios.insert(format!("d{}-q{}-{label}", p.d, p.q), (ext_max, res_max));
        }
    }
    rep.check("dual-norm-equals-lp-norm", norm_gap <= 1e-9, format!("largest relative gap {norm_gap:.3e}"));
    rep.check("extremal-has-unit-norm", unit_gap <= 1e-9, format!("largest deviation {unit_gap:.3e}"));
    rep.check("pairing-identity", pairing_gap <= 1e-9, format!("largest relative gap {pairing_gap:.3e}"));
    rep.check("alternating-monotone", all_monotone, "ext(f_k) <= res(g_k) <= ext(f_k+1) on every run");
    if loss_range.1 > 0.0 {
        rep.observe(
            "dyadic-reduction-loss-at-most-2",
            loss_range.1 <= 2.0,
            format!("restriction ratio of g over that of its dyadic model: {:.4} to {:.4}", loss_range.0, loss_range.1),
        );
    }
    let agree = ratios.values().all(|&(e, r)| relative(e, r) <= 0.05);
    rep.check(
        "family-maxima-agree",
        !ratios.is_empty() && agree,
        ratios.iter().map(|(k, (e, r))| format!("{k}: extension {e:.6}, restriction {r:.6}")).collect::<Vec<_>>().join("; "),
    );
    Ok(())
}
