use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{dual_norm, inner_product, lp_norm, ExponentPair, GridFunction, Measure};
use crate::variety::{surface_extension, QuadraticVariety};

/// `‖ĝ‖_{L^{p'}(V,dσ)} / ‖g‖_{L^{r'}(dm)}` for the restriction operator dual to `R*(p → r)`.
pub fn restriction_ratio(g: &GridFunction, v: &QuadraticVariety, pair: ExponentPair) -> Result<f64> {
    let den = lp_norm(g, pair.r.conjugate(), Measure::Counting)?;
    if den == 0.0 {
        return Err(Error::ZeroFunction);
    }
    Ok(lp_norm(&g.fourier_forward(), pair.p.conjugate(), Measure::Surface(v))? / den)
}

/// `‖(f dσ)^∨‖_{L^r(dm)} / ‖f‖_{L^p(V,dσ)}` for a dense `f`.
pub fn dense_extension_ratio(f: &GridFunction, v: &QuadraticVariety, pair: ExponentPair) -> Result<f64> {
    let den = lp_norm(f, pair.p, Measure::Surface(v))?;
    if den == 0.0 {
        return Err(Error::ZeroFunction);
    }
    Ok(lp_norm(&surface_extension(f, v)?, pair.r, Measure::Counting)? / den)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PairingCheck {
    /// `⟨f, ĝ⟩_{(V,dσ)}`.
    pub restriction_side: Complex64,
    /// `⟨(f dσ)^∨, g⟩_{dm}`.
    pub extension_side: Complex64,
    pub relative_gap: f64,
}

/// Both sides of `⟨f, ĝ⟩_{(V,dσ)} = ⟨(f dσ)^∨, g⟩_{dm}`.
pub fn pairing_identity(f: &GridFunction, g: &GridFunction, v: &QuadraticVariety) -> Result<PairingCheck> {
    let lhs = inner_product(f, &g.fourier_forward(), Measure::Surface(v))?;
    let rhs = inner_product(&surface_extension(f, v)?, g, Measure::Counting)?;
    let scale = lhs.norm().max(rhs.norm()).max(f64::MIN_POSITIVE);
    Ok(PairingCheck { restriction_side: lhs, extension_side: rhs, relative_gap: (lhs - rhs).norm() / scale })
}

#[derive(Debug, Clone, Serialize)]
pub struct AlternatingRun {
    /// Extension ratios of `f_0, f_1, …`; one more entry than `restriction`.
    pub extension: Vec<f64>,
    /// Restriction ratios of `g_0, g_1, …`, with `g_k` built from `f_k`.
    pub restriction: Vec<f64>,
    /// Every step was non-decreasing up to rounding.
    pub monotone: bool,
}

/// Alternate between extremals: `g_k` realises `‖(f_k dσ)^∨‖_r` as a pairing
/// in `L^{r'}(dm)`, and `f_{k+1}` realises `‖ĝ_k‖_{p'}` in `L^p(V,dσ)`.
///
/// Each half-step can only raise the ratio, so the two sequences interleave:
/// `ext(f_k) ≤ res(g_k) ≤ ext(f_{k+1})`.
pub fn alternating_extremals(
    f0: &GridFunction,
    v: &QuadraticVariety,
    pair: ExponentPair,
    max_steps: usize,
    tolerance: f64,
) -> Result<AlternatingRun> {
    let mut f = f0.clone();
    let mut extension = Vec::new();
    let mut restriction = Vec::new();
    let mut monotone = true;
    let slack = 1e-9;
    let mut ext = dense_extension_ratio(&f, v, pair)?;
    for _ in 0..max_steps.max(1) {
        if let Some(&prev) = restriction.last() {
            monotone &= ext >= prev * (1.0 - slack);
        }
        extension.push(ext);
        let big_f = surface_extension(&f, v)?;
        let (_, g) = dual_norm(&big_f, pair.r, Measure::Counting)?;
        let res = restriction_ratio(&g, v, pair)?;
        monotone &= res >= ext * (1.0 - slack);
        restriction.push(res);
        let (_, next) = dual_norm(&g.fourier_forward(), pair.p.conjugate(), Measure::Surface(v))?;
        f = next;
        ext = dense_extension_ratio(&f, v, pair)?;
        if (ext - res).abs() <= tolerance * ext {
            break;
        }
    }
    monotone &= ext >= restriction.last().copied().unwrap_or(0.0) * (1.0 - slack);
    extension.push(ext);
    Ok(AlternatingRun { extension, restriction, monotone })
}
