use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Fe;
use crate::grid::Space;
use crate::variety::{QuadraticVariety, VarietyKind};

#[derive(Debug, Clone, Serialize)]
pub struct PairCountReport {
    pub count: u64,
    /// `|𝒜||ℬ|/q + q^{(d−1)/2} (|𝒜||ℬ|)^{1/2}` with `d` the base dimension.
    pub bound: f64,
    pub ratio: f64,
    /// Every counted pair has orthogonal base parts.
    pub bases_orthogonal: bool,
}

/// Whether `x = λ y` for some `λ ∉ {0, 1}`.
fn proportional(space: &Space, x: &[Fe], y: &[Fe]) -> bool {
    let field = space.field();
    let Some(k) = y.iter().position(|c| !c.is_zero()) else {
        return false;
    };
    let lambda = field.div(x[k], y[k]).expect("nonzero");
    !lambda.is_zero() && lambda != Fe::ONE && x.iter().zip(y).all(|(&a, &b)| a == field.mul(lambda, b))
}

/// Pairs `(α, β) ∈ 𝒜 × ℬ` with `α + β` on the paraboloid of `F_q^{d+1}`.
///
/// `space` is the ambient `F_q^{d+1}`. No two points of `𝒜` may have base
/// parts related by `x' = λ y'` with `λ ∉ {0, 1}`.
pub fn paraboloid_pair_count(space: &Space, a: &[Vec<Fe>], b: &[Vec<Fe>]) -> Result<PairCountReport> {
    let kind = VarietyKind::Paraboloid;
    let base_dim = space.dim() - 1;
    let base = space.with_dim(base_dim)?;
    if let Some(x) = a.iter().chain(b).find(|x| x.len() != space.dim() || !kind.contains(space, x)) {
        return Err(Error::Precondition(format!("{x:?} is not on the paraboloid")));
    }
    for (i, x) in a.iter().enumerate() {
        for y in &a[i + 1..] {
            let (xb, yb) = (&x[..base_dim], &y[..base_dim]);
            if proportional(&base, xb, yb) || proportional(&base, yb, xb) {
                return Err(Error::Precondition(format!("base parts of {x:?} and {y:?} are proportional")));
            }
        }
    }
    let mut count = 0u64;
    let mut bases_orthogonal = true;
    for x in a {
        for y in b {
            if kind.contains(space, &space.add(x, y)) {
                count += 1;
                bases_orthogonal &= base.dot(&x[..base_dim], &y[..base_dim]).is_zero();
            }
        }
    }
    let q = space.q() as f64;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let bound = na * nb / q + q.powf((base_dim as f64 - 1.0) / 2.0) * (na * nb).sqrt();
    Ok(PairCountReport { count, bound, ratio: if bound > 0.0 { count as f64 / bound } else { 0.0 }, bases_orthogonal })
}

#[derive(Debug, Clone, Serialize)]
pub struct IncidenceReport {
    pub count: u64,
    /// `|P||H|/q + q^{(d−1)/2} (|P||H|)^{1/2}`.
    pub bound: f64,
    pub ratio: f64,
}

/// Incidences between points and the hyperplanes `{x : h·x = 0}`.
pub fn incidence_count(space: &Space, points: &[Vec<Fe>], normals: &[Vec<Fe>]) -> Result<IncidenceReport> {
    if normals.iter().any(|h| h.iter().all(|c| c.is_zero())) {
        return Err(Error::InvalidArgument("hyperplane normal is zero".into()));
    }
    let field = space.field();
    for (i, h) in normals.iter().enumerate() {
        for g in &normals[i + 1..] {
            let k = g.iter().position(|c| !c.is_zero()).unwrap();
            let lambda = field.div(h[k], g[k]).unwrap();
            if h.iter().zip(g).all(|(&a, &b)| a == field.mul(lambda, b)) {
                return Err(Error::Precondition(format!("normals {h:?} and {g:?} define the same hyperplane")));
            }
        }
    }
    let count = points.iter().map(|b| normals.iter().filter(|h| space.dot(b, h).is_zero()).count() as u64).sum();
    let q = space.q() as f64;
    let (np, nh) = (points.len() as f64, normals.len() as f64);
    let bound = np * nh / q + q.powf((space.dim() as f64 - 1.0) / 2.0) * (np * nh).sqrt();
    Ok(IncidenceReport { count, bound, ratio: if bound > 0.0 { count as f64 / bound } else { 0.0 } })
}

/// Distinct `x, y, z ∈ S_j` with `x − z = λ(y − z)`, `λ ∉ {0, 1}`, `‖y − z‖ ≠ 0`,
/// by exhaustive triple scan. Should be empty for `j ≠ 0`.
pub fn collinear_triple_check(v: &QuadraticVariety) -> Result<Vec<[Vec<Fe>; 3]>> {
    let VarietyKind::Sphere(j) = v.kind() else {
        return Err(Error::Precondition("collinear triples are checked on spheres".into()));
    };
    if j.is_zero() {
        return Err(Error::Precondition("radius must be nonzero".into()));
    }
    let space = v.space();
    let pts: Vec<Vec<Fe>> = v.points().collect();
    let mut out = Vec::new();
    for (zi, z) in pts.iter().enumerate() {
        for (yi, y) in pts.iter().enumerate() {
            if yi == zi {
                continue;
            }
            let yz = space.sub(y, z);
            if space.norm(&yz).is_zero() {
                continue;
            }
            for (xi, x) in pts.iter().enumerate() {
                if xi == zi || xi == yi {
                    continue;
                }
                if proportional(space, &space.sub(x, z), &yz) {
                    out.push([x.clone(), y.clone(), z.clone()]);
                }
            }
        }
    }
    Ok(out)
}

/// Most points of `S_j` on one line with non-isotropic direction.
pub fn max_line_intersection(v: &QuadraticVariety) -> usize {
    let space = v.space();
    let field = space.field();
    let pts: Vec<Vec<Fe>> = v.points().collect();
    let mut best = 0;
    for z in &pts {
        for y in &pts {
            let dir = space.sub(y, z);
            if dir.iter().all(|c| c.is_zero()) || space.norm(&dir).is_zero() {
                continue;
            }
            let on = field.elements().filter(|&t| v.contains(&space.add(z, &space.scale(t, &dir)))).count();
            best = best.max(on);
        }
    }
    best
}
