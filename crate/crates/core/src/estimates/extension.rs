use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::field::Fe;
use crate::grid::{abs_pow, lp_norm, Exponent, ExponentPair, GridFunction, Measure, Space};
use crate::variety::linalg::{coordinates, independent_subset};
use crate::variety::{radial_profile, surface_extension, QuadraticVariety, VarietyKind};

/// Largest `k·q^s` the sparse route will take on.
pub const SPARSE_COST_LIMIT: f64 = 5.0e7;

/// A function on a variety `V`.
#[derive(Debug, Clone)]
pub enum TestFunction {
    /// Values on the whole grid; must vanish off `V`.
    Dense(GridFunction),
    /// `(canonical index, value)` pairs, each index on `V`.
    Sparse(Vec<(usize, Complex64)>),
    /// `f ≡ 1` on `V`.
    One,
}

impl TestFunction {
    pub fn indicator(indices: impl IntoIterator<Item = usize>) -> Self {
        TestFunction::Sparse(indices.into_iter().map(|i| (i, Complex64::new(1.0, 0.0))).collect())
    }

    pub fn point_mass(index: usize) -> Self {
        Self::indicator([index])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Dense transform over the whole grid.
    Dense,
    /// Linear image of the support; cost `k·q^s` for `k` points spanning rank `s`.
    Sparse,
    /// Norm classes of `(dσ)^∨`; `f ≡ 1` on spheres only.
    Radial,
    Auto,
}

#[derive(Debug, Clone, Serialize)]
pub struct RatioSample {
    pub descriptor: String,
    pub p: Exponent,
    pub r: Exponent,
    pub q: usize,
    pub d: usize,
    /// `‖(f dσ)^∨‖_{L^r(dm)}`.
    pub numerator: f64,
    /// `‖f‖_{L^p(V, dσ)}`.
    pub denominator: f64,
    pub ratio: f64,
    pub route: Route,
}

/// Support points and values on `V`; repeated indices add up, zeros drop out.
fn sparse_support(v: &QuadraticVariety, entries: &[(usize, Complex64)]) -> Result<Vec<(usize, Complex64)>> {
    let mut merged: BTreeMap<usize, Complex64> = BTreeMap::new();
    for &(i, c) in entries {
        if i >= v.space().size() || !v.contains_index(i) {
            return Err(Error::Precondition(format!("support point {i} is not on {}", v.kind().label())));
        }
        *merged.entry(i).or_default() += c;
    }
    Ok(merged.into_iter().filter(|(_, c)| c.norm() > 0.0).collect())
}

/// `‖f‖_{L^p(V,dσ)}` for the listed support.
fn surface_norm(v: &QuadraticVariety, values: &[Complex64], p: Exponent) -> f64 {
    match p {
        Exponent::Infinite => values.iter().fold(0.0, |m, c| m.max(c.norm())),
        Exponent::Finite(p) => {
            let s: f64 = values.iter().map(|&c| abs_pow(c, p)).sum();
            (s / v.size() as f64).powf(1.0 / p)
        }
    }
}

/// Rank of the support and the cost of the sparse route.
fn sparse_cost(space: &Space, points: &[Vec<Fe>]) -> (usize, f64) {
    let s = independent_subset(space.field(), points).len();
    (s, points.len() as f64 * (space.q() as f64).powi(s as i32))
}

/// `‖(f dσ)^∨‖_{L^r(dm)}` for `f = Σ c_i δ_{x_i}`.
///
/// `m ↦ (m·x_i)_i` is linear onto a rank-`s` subspace of `F_q^k`, each image
/// point having `q^{d−s}` preimages; the image is parametrised by the dot
/// products with an independent subset of the `x_i`.
fn sparse_numerator(v: &QuadraticVariety, points: &[Vec<Fe>], values: &[Complex64], r: Exponent) -> f64 {
    let space = v.space();
    let field = space.field();
    let basis = independent_subset(field, points);
    let s = basis.len();
    let lambdas: Vec<Vec<Fe>> =
        points.iter().map(|x| coordinates(field, &basis, x).expect("support point lies in its own span")).collect();
    let scale = (v.size() as f64).recip();
    if s == 0 {
        // Only the origin: the transform is constant.
        let c = values.iter().sum::<Complex64>() * scale;
        return match r {
            Exponent::Infinite => c.norm(),
            Exponent::Finite(r) => (space.size() as f64 * abs_pow(c, r)).powf(1.0 / r),
        };
    }
    let image = space.with_dim(s).expect("rank is at most d");
    let value_at = |t: usize| {
        let t = image.point(t);
        let mut sum = Complex64::new(0.0, 0.0);
        for (lam, &c) in lambdas.iter().zip(values) {
            let mut u = Fe::ZERO;
            for (&l, &tb) in lam.iter().zip(&t) {
                u = field.add(u, field.mul(l, tb));
            }
            sum += c * field.additive_character(u);
        }
        sum * scale
    };
    let exec = Execution::default();
    match r {
        Exponent::Infinite => exec.max_by(image.size(), |t| value_at(t).norm()),
        Exponent::Finite(r) => {
            let total = exec.sum_by(image.size(), |t| abs_pow(value_at(t), r));
            let fibre = (space.q() as f64).powi((space.dim() - s) as i32);
            (fibre * total).powf(1.0 / r)
        }
    }
}

fn radial_numerator(v: &QuadraticVariety, r: Exponent) -> Result<f64> {
    let profile = radial_profile(v)?;
    Ok(match r {
        Exponent::Infinite => profile.max_nonzero().map_or(1.0, |(m, _)| m.max(1.0)),
        Exponent::Finite(r) => profile.power_sum(r).powf(1.0 / r),
    })
}

/// `‖(f dσ)^∨‖_{L^r(dm)} / ‖f‖_{L^p(V,dσ)}`, a lower bound for the operator norm.
pub fn extension_ratio(
    f: &TestFunction,
    v: &QuadraticVariety,
    pair: ExponentPair,
    route: Route,
    descriptor: &str,
) -> Result<RatioSample> {
    if v.is_empty() {
        return Err(Error::EmptyVariety);
    }
    let space = v.space();
    let ExponentPair { p, r } = pair;
    let dense_cost = space.dim() as f64 * (space.q() as f64).powi(space.dim() as i32 + 1);
    let (numerator, denominator, used) = match f {
        TestFunction::One => {
            let sphere = matches!(v.kind(), VarietyKind::Sphere(_));
            let used = match route {
                Route::Auto if sphere && space.size() > 1 << 22 => Route::Radial,
                Route::Auto => Route::Dense,
                Route::Sparse => return Err(Error::InvalidArgument("f ≡ 1 has no sparse route".into())),
                other => other,
            };
            let num = if used == Route::Radial {
                radial_numerator(v, r)?
            } else {
                let one = GridFunction::constant(space, Complex64::new(1.0, 0.0));
                lp_norm(&surface_extension(&one, v)?, r, Measure::Counting)?
            };
            (num, 1.0, used)
        }
        TestFunction::Sparse(entries) => {
            let support = sparse_support(v, entries)?;
            if support.is_empty() {
                return Err(Error::ZeroFunction);
            }
            let points: Vec<Vec<Fe>> = support.iter().map(|&(i, _)| space.point(i)).collect();
            let values: Vec<Complex64> = support.iter().map(|&(_, c)| c).collect();
            let den = surface_norm(v, &values, p);
            let used = match route {
                Route::Auto => {
                    let (_, cost) = sparse_cost(space, &points);
                    if cost <= dense_cost.min(SPARSE_COST_LIMIT) {
                        Route::Sparse
                    } else {
                        Route::Dense
                    }
                }
                Route::Radial => return Err(Error::InvalidArgument("radial route needs f ≡ 1".into())),
                other => other,
            };
            let num = if used == Route::Sparse {
                sparse_numerator(v, &points, &values, r)
            } else {
                let g = GridFunction::from_values(space, {
                    let mut vals = vec![Complex64::new(0.0, 0.0); space.size()];
                    for &(i, c) in &support {
                        vals[i] += c;
                    }
                    vals
                })?;
                lp_norm(&surface_extension(&g, v)?, r, Measure::Counting)?
            };
            (num, den, used)
        }
        TestFunction::Dense(g) => {
            if g.space() != space {
                return Err(Error::Mismatch("function and variety live on different spaces".into()));
            }
            if let Some(i) = (0..g.len()).find(|&i| g.get(i).norm() > 0.0 && !v.contains_index(i)) {
                return Err(Error::Precondition(format!("value at {i} is off {}", v.kind().label())));
            }
            let den = lp_norm(g, p, Measure::Surface(v))?;
            if den == 0.0 {
                return Err(Error::ZeroFunction);
            }
            if matches!(route, Route::Sparse | Route::Radial) {
                return Err(Error::InvalidArgument("dense functions use the dense route".into()));
            }
            (lp_norm(&surface_extension(g, v)?, r, Measure::Counting)?, den, Route::Dense)
        }
    };
    Ok(RatioSample {
        descriptor: descriptor.to_string(),
        p,
        r,
        q: space.q(),
        d: space.dim(),
        numerator,
        denominator,
        ratio: numerator / denominator,
        route: used,
    })
}

/// Ratio for the indicator of an `ℓ`-dimensional affine subspace of `V`:
/// `(q^ℓ/|V|)^{1−1/p} q^{(d−ℓ)/r}`.
pub fn subspace_ratio_closed_form(q: usize, d: usize, ell: usize, variety_size: usize, pair: ExponentPair) -> f64 {
    let h = (q as f64).powi(ell as i32);
    (h / variety_size as f64).powf(1.0 - pair.p.reciprocal()) * (q as f64).powf((d - ell) as f64 * pair.r.reciprocal())
}

/// Smallest `r` allowed for `R*(p → r)` by a `k`-dimensional subspace:
/// `max(2d/(d−1), p(d−k)/((p−1)(d−1−k)))`. Infinite at `p = 1`.
pub fn necessary_exponents(d: usize, k: usize, p: Exponent) -> Result<Exponent> {
    if d < 2 || k + 2 > d {
        return Err(Error::InvalidArgument(format!("need 0 ≤ k ≤ d − 2, got d = {d}, k = {k}")));
    }
    let (d, k) = (d as f64, k as f64);
    let base = 2.0 * d / (d - 1.0);
    let conj_ratio = match p {
        Exponent::Infinite => 1.0,
        Exponent::Finite(p) if p < 1.0 => return Err(Error::InvalidArgument(format!("p = {p} < 1"))),
        Exponent::Finite(1.0) => return Ok(Exponent::Infinite),
        Exponent::Finite(p) => p / (p - 1.0),
    };
    Ok(Exponent::Finite(base.max(conj_ratio * (d - k) / (d - 1.0 - k))))
}

/// Growth exponent in `q` of the subspace ratio:
/// `e = (ℓ − d + 1)(1 − 1/p) + (d − ℓ)/r`.
pub fn witness_exponent_prediction(d: usize, ell: usize, pair: ExponentPair) -> Result<f64> {
    if ell + 1 >= d {
        return Err(Error::InvalidArgument(format!("need ℓ < d − 1, got d = {d}, ℓ = {ell}")));
    }
    let (d, ell) = (d as f64, ell as f64);
    Ok((ell - d + 1.0) * (1.0 - pair.p.reciprocal()) + (d - ell) * pair.r.reciprocal())
}
