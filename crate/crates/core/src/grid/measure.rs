use num_complex::Complex64;

use super::exponent::Exponent;
use super::function::GridFunction;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::variety::QuadraticVariety;

/// The three measures used on `F_q^d`.
#[derive(Debug, Clone, Copy)]
pub enum Measure<'a> {
    /// `dm`: weight 1 at every point.
    Counting,
    /// `dx`: weight `q^{−d}` at every point.
    Normalized,
    /// `dσ`: weight `|V|^{−1}` on `V`, zero elsewhere.
    Surface(&'a QuadraticVariety),
}

impl Measure<'_> {
    /// Weight of a point in the support.
    pub fn weight(&self, f: &GridFunction) -> f64 {
        match self {
            Measure::Counting => 1.0,
            Measure::Normalized => (f.space().size() as f64).recip(),
            Measure::Surface(v) => (v.size() as f64).recip(),
        }
    }

    fn support<'b>(&'b self, f: &GridFunction) -> Result<Support<'b>> {
        match self {
            Measure::Surface(v) => {
                if v.space() != f.space() {
                    return Err(Error::Mismatch("surface measure lives on another space".into()));
                }
                if v.is_empty() {
                    return Err(Error::EmptyVariety);
                }
                Ok(Support::Points(v.indices()))
            }
            _ => Ok(Support::All(f.len())),
        }
    }
}

enum Support<'a> {
    All(usize),
    Points(&'a [u32]),
}

impl Support<'_> {
    fn len(&self) -> usize {
        match self {
            Support::All(n) => *n,
            Support::Points(p) => p.len(),
        }
    }

    #[inline]
    fn get(&self, k: usize) -> usize {
        match self {
            Support::All(_) => k,
            Support::Points(p) => p[k] as usize,
        }
    }
}

/// `|z|^r` with `0^r = 0`.
#[inline]
pub(crate) fn abs_pow(z: Complex64, r: f64) -> f64 {
    let a = z.norm();
    if a == 0.0 {
        0.0
    } else if r == 2.0 {
        a * a
    } else {
        (r * a.ln()).exp()
    }
}

/// `(Σ w |f|^r)^{1/r}`, or the supremum over the support when `r = ∞`.
pub fn lp_norm(f: &GridFunction, r: Exponent, mu: Measure<'_>) -> Result<f64> {
    lp_norm_with(f, r, mu, Execution::default())
}

pub fn lp_norm_with(f: &GridFunction, r: Exponent, mu: Measure<'_>, exec: Execution) -> Result<f64> {
    let support = mu.support(f)?;
    let values = f.values();
    match r {
        Exponent::Infinite => Ok(exec.max_by(support.len(), |k| values[support.get(k)].norm())),
        Exponent::Finite(r) => {
            let w = mu.weight(f);
            let s = exec.sum_by(support.len(), |k| abs_pow(values[support.get(k)], r));
            Ok((w * s).powf(1.0 / r))
        }
    }
}

/// `⟨f₁, f₂⟩_μ = Σ w f₁ conj(f₂)`.
pub fn inner_product(f1: &GridFunction, f2: &GridFunction, mu: Measure<'_>) -> Result<Complex64> {
    f1.same_domain(f2)?;
    let support = mu.support(f1)?;
    let (a, b) = (f1.values(), f2.values());
    let w = mu.weight(f1);
    let s = Execution::default().sum_complex_by(support.len(), |k| {
        let i = support.get(k);
        a[i] * b[i].conj()
    });
    Ok(s * w)
}

/// `sup_{‖g‖_{p'} ≤ 1} |⟨f, g⟩_μ|` with a maximiser `g`.
///
/// The value is computed as `|⟨f, g⟩_μ|` for the constructed `g`, so it can
/// be compared against [`lp_norm`] as an independent route.
pub fn dual_norm(f: &GridFunction, p: Exponent, mu: Measure<'_>) -> Result<(f64, GridFunction)> {
    let support = mu.support(f)?;
    let values = f.values();
    let mut g = GridFunction::zeros(f.space());
    let nonzero = (0..support.len()).any(|k| values[support.get(k)].norm() > 0.0);
    if !nonzero {
        return Ok((0.0, g));
    }
    let out = g.values_mut();
    match p {
        Exponent::Finite(1.0) => {
            for k in 0..support.len() {
                let i = support.get(k);
                let a = values[i].norm();
                if a > 0.0 {
                    out[i] = values[i] / a;
                }
            }
        }
        Exponent::Finite(p) => {
            let norm = lp_norm(f, Exponent::Finite(p), mu)?;
            let scale = norm.powf(p - 1.0).recip();
            for k in 0..support.len() {
                let i = support.get(k);
                let a = values[i].norm();
                if a > 0.0 {
                    out[i] = values[i] * (a.powf(p - 2.0) * scale);
                }
            }
        }
        Exponent::Infinite => {
            let mut best = (0usize, -1.0f64);
            for k in 0..support.len() {
                let i = support.get(k);
                let a = values[i].norm();
                if a > best.1 {
                    best = (i, a);
                }
            }
            let (i, a) = best;
            out[i] = values[i] / a * mu.weight(f).recip();
        }
    }
    let value = inner_product(f, &g, mu)?.norm();
    Ok((value, g))
}
