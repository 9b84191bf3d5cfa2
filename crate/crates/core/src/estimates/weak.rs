use serde::Serialize;

use super::energy::{additive_energy, check_on_sphere};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::field::Fe;
use crate::grid::{lp_norm, Exponent, GridFunction, Measure, Space};
use crate::variety::{sphere_fourier_brute, surface_extension, QuadraticVariety, VarietyKind};

/// One row of a size-regime case table.
#[derive(Debug, Clone, Serialize)]
pub struct RegimeBound {
    pub regime: &'static str,
    pub set_size: usize,
    /// Size interval of the regime; boundary sizes belong to the lower one.
    pub interval: (f64, f64),
    pub bound: f64,
    pub measured: f64,
    pub ratio: f64,
}

/// Pick the regime of `size` given increasing upper thresholds.
fn classify(size: usize, table: &[(&'static str, f64, f64)]) -> (&'static str, f64, f64) {
    let n = size as f64;
    table.iter().copied().find(|&(_, _, hi)| n <= hi * (1.0 + 1e-12)).unwrap_or(*table.last().unwrap())
}

/// Cost of one kernel lookup in units of one transform term, measured on
/// the d = 6 grids.
const PAIR_WEIGHT: f64 = 16.0;

/// Precomputed `(1_{S_0})^∨` for repeated weak-type L² checks on one grid.
#[derive(Debug, Clone)]
pub struct ZeroSphereKernel {
    pub sphere: QuadraticVariety,
    pub kernel: GridFunction,
}

impl ZeroSphereKernel {
    pub fn new(space: &Space) -> Result<Self> {
        let sphere = QuadraticVariety::enumerate(VarietyKind::Sphere(Fe::ZERO), space)?;
        let kernel = sphere_fourier_brute(&sphere);
        Ok(ZeroSphereKernel { sphere, kernel })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct L2Report {
    /// `Σ_{x∈S_0} |1̂_G(x)|²`.
    pub lhs: f64,
    /// `q^{d−1}|G| + q^{(d−2)/2}|G|²`.
    pub rhs: f64,
    /// `lhs ≤ rhs` up to relative rounding `1e−9`.
    pub holds: bool,
    /// Whether `d ≡ 2 (mod 4)` and `q ≡ 3 (mod 4)`.
    pub hypothesis: bool,
    pub regime: RegimeBound,
    pub method: &'static str,
}

/// Weak-type L² restriction to `S_0` for `1_G`.
///
/// The left side is exact up to rounding: either `q^d Σ_{m,m'∈G} (1_{S_0})^∨(m' − m)`
/// or a dense forward transform of `1_G`, whichever is cheaper.
pub fn restriction_l2_zero_sphere(ctx: &ZeroSphereKernel, g: &[usize]) -> Result<L2Report> {
    let space = ctx.sphere.space();
    let (q, d) = (space.q() as f64, space.dim() as f64);
    let n = g.len() as f64;
    let s0 = ctx.sphere.size() as f64;
    let pair_cost = PAIR_WEIGHT * n * n;
    let dense_cost = d * q.powf(d + 1.0);
    let (lhs, method) = if g.is_empty() {
        (0.0, "empty")
    } else if pair_cost <= dense_cost {
        let pts: Vec<Vec<Fe>> = g.iter().map(|&i| space.point(i)).collect();
        let kernel = ctx.kernel.values();
        let sum = Execution::default().sum_complex_by(g.len(), |a| {
            let mut row = crate::Complex64::new(0.0, 0.0);
            for b in &pts {
                row += kernel[space.index(&space.sub(b, &pts[a]))];
            }
            row
        });
        (sum.re * space.size() as f64, "pairs")
    } else {
        let hat = GridFunction::indicator(space, g.iter().copied()).fourier_forward();
        let idx = ctx.sphere.indices();
        (Execution::default().sum_by(idx.len(), |k| hat.get(idx[k] as usize).norm_sqr()), "dense")
    };
    let rhs = q.powf(d - 1.0) * n + q.powf((d - 2.0) / 2.0) * n * n;
    let hypothesis = space.dim() % 4 == 2 && space.q() % 4 == 3;
    let measured = (lhs / s0).max(0.0).sqrt();
    let (regime, lo, hi) = classify(
        g.len(),
        &[("small", 1.0, q.powf(d / 2.0)), ("middle", q.powf(d / 2.0), q.powf((d + 2.0) / 2.0)), ("large", q.powf((d + 2.0) / 2.0), q.powf(d))],
    );
    let bound = match regime {
        "small" => n.sqrt(),
        "middle" => q.powf(-d / 4.0) * n,
        _ => q.sqrt() * n.sqrt(),
    };
    Ok(L2Report {
        lhs,
        rhs,
        holds: lhs <= rhs * (1.0 + 1e-9) + 1e-9,
        hypothesis,
        regime: RegimeBound { regime, set_size: g.len(), interval: (lo, hi), bound, measured, ratio: measured / bound },
        method,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct WeakL4Report {
    pub energy: u64,
    /// `‖(1_A dσ)^∨‖_{L⁴(dm)}` from the dense transform.
    pub direct: f64,
    /// `q^{d/4} |S_j|^{−1} E(A)^{1/4}`.
    pub identity: f64,
    pub relative_gap: f64,
    pub regime: RegimeBound,
}

/// Weak-type L⁴ extension from `S_j`, `j ≠ 0`, for `1_A`.
pub fn weak_l4_nonzero_sphere(v: &QuadraticVariety, a: &[Vec<Fe>]) -> Result<WeakL4Report> {
    let VarietyKind::Sphere(j) = v.kind() else {
        return Err(Error::Precondition("weak L⁴ is stated on spheres".into()));
    };
    if j.is_zero() {
        return Err(Error::Precondition("radius must be nonzero".into()));
    }
    let space = v.space();
    check_on_sphere(space, j, a)?;
    let (q, d) = (space.q() as f64, space.dim() as f64);
    let f = GridFunction::indicator(space, a.iter().map(|x| space.index(x)));
    let ext = surface_extension(&f, v)?;
    let direct = lp_norm(&ext, Exponent::Finite(4.0), Measure::Counting)?;
    let energy = additive_energy(space, a);
    let identity = q.powf(d / 4.0) / v.size() as f64 * (energy as f64).powf(0.25);
    let n = a.len() as f64;
    let (regime, lo, hi) = classify(
        a.len(),
        &[
            ("small", 1.0, q.powf((d - 2.0) / 2.0)),
            ("middle", q.powf((d - 2.0) / 2.0), q.powf(d / 2.0)),
            ("large", q.powf(d / 2.0), q.powf(d - 1.0)),
        ],
    );
    let bound = match regime {
        "small" => q.powf((-3.0 * d + 4.0) / 4.0) * n.powf(0.75),
        "middle" => q.powf((-5.0 * d + 6.0) / 8.0) * n.sqrt(),
        _ => q.powf((-3.0 * d + 3.0) / 4.0) * n.powf(0.75),
    };
    Ok(WeakL4Report {
        energy,
        direct,
        identity,
        relative_gap: if identity > 0.0 { (direct - identity).abs() / identity } else { direct },
        regime: RegimeBound { regime, set_size: a.len(), interval: (lo, hi), bound, measured: direct, ratio: direct / bound },
    })
}
