use std::collections::HashMap;

use num_complex::Complex64;
use serde::Serialize;

use super::incidence::{paraboloid_pair_count, PairCountReport};
use crate::error::{Error, Result};
use crate::field::Fe;
use crate::grid::{GridFunction, Space};

/// Above this grid size pair-sum tallies use a hash map.
const DENSE_TALLY_LIMIT: usize = 1 << 26;

/// Sets up to this size get the direct triple loop.
pub const DIRECT_TRIPLE_LIMIT: usize = 160;

/// Grid size up to which the transform route for triples is allowed.
pub const TRANSFORM_TRIPLE_LIMIT: usize = 1 << 21;

pub(crate) fn check_on_sphere(space: &Space, j: Fe, a: &[Vec<Fe>]) -> Result<()> {
    match a.iter().find(|x| x.len() != space.dim() || space.norm(x) != j) {
        None => Ok(()),
        Some(x) => Err(Error::Precondition(format!("{x:?} is not on S_{}", j.0))),
    }
}

/// `r_A(m)` for every `m` hit by a pairwise sum, keyed by canonical index.
fn sum_tally(space: &Space, a: &[Vec<Fe>]) -> Vec<u64> {
    let field = space.field();
    let q = space.q();
    let idx = |x: &[Fe], y: &[Fe]| -> usize {
        x.iter().zip(y).fold(0usize, |acc, (&s, &t)| acc * q + field.add(s, t).index())
    };
    if space.size() <= DENSE_TALLY_LIMIT {
        let mut counts = vec![0u32; space.size()];
        for x in a {
            for y in a {
                counts[idx(x, y)] += 1;
            }
        }
        counts.into_iter().filter(|&c| c > 0).map(u64::from).collect()
    } else {
        let mut counts: HashMap<usize, u64> = HashMap::new();
        for x in a {
            for y in a {
                *counts.entry(idx(x, y)).or_default() += 1;
            }
        }
        counts.into_values().collect()
    }
}

/// `E(A) = #{(x, y, z, w) ∈ A⁴ : x + y = z + w} = Σ_m r_A(m)²`.
pub fn additive_energy(space: &Space, a: &[Vec<Fe>]) -> u64 {
    sum_tally(space, a).iter().map(|c| c * c).sum()
}

/// Ordered pairs `(x, y) ∈ A²` with `x·y = j`, for `A ⊆ S_j`.
pub fn zero_distance_pairs(space: &Space, j: Fe, a: &[Vec<Fe>]) -> Result<u64> {
    check_on_sphere(space, j, a)?;
    Ok(a.iter().map(|x| a.iter().filter(|y| space.dot(x, y) == j).count() as u64).sum())
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TripleCount {
    /// `#{(x, y, z) ∈ A³ : x + y − z ∈ S_j}`.
    pub membership: u64,
    /// `#{(x, y, z) ∈ A³ : (x − z)·(y − z) = 0}`, when counted.
    pub orthogonal: Option<u64>,
    pub method: &'static str,
}

/// Triples in `A ⊆ S_j` whose fourth parallelogram vertex stays on `S_j`.
///
/// Small sets are counted directly, both by membership and by the dot
/// product condition. Larger sets use
/// `q^{−d} Σ_ξ 1̂_A(ξ)² conj(1̂_A(ξ)) conj(1̂_{S_j}(ξ))`.
pub fn orthogonal_triples(space: &Space, j: Fe, a: &[Vec<Fe>]) -> Result<TripleCount> {
    check_on_sphere(space, j, a)?;
    if a.len() <= DIRECT_TRIPLE_LIMIT {
        return Ok(direct_triples(space, j, a));
    }
    space.check_budget(TRANSFORM_TRIPLE_LIMIT)?;
    let sphere = crate::variety::QuadraticVariety::enumerate(crate::variety::VarietyKind::Sphere(j), space)?;
    let s_hat = GridFunction::indicator(space, sphere.indices().iter().map(|&i| i as usize)).fourier_forward();
    let membership = transform_triples(space, a, &s_hat)?;
    Ok(TripleCount { membership, orthogonal: None, method: "transform" })
}

fn direct_triples(space: &Space, j: Fe, a: &[Vec<Fe>]) -> TripleCount {
    let field = space.field();
    let mut membership = 0u64;
    let mut orthogonal = 0u64;
    let diffs: Vec<Vec<Vec<Fe>>> = a.iter().map(|z| a.iter().map(|x| space.sub(x, z)).collect()).collect();
    for (zi, z) in a.iter().enumerate() {
        for (xi, x) in a.iter().enumerate() {
            let xz = &diffs[zi][xi];
            for (yi, y) in a.iter().enumerate() {
                let w: Vec<Fe> = x.iter().zip(y).zip(z).map(|((&s, &t), &u)| field.sub(field.add(s, t), u)).collect();
                if space.norm(&w) == j {
                    membership += 1;
                }
                if space.dot(xz, &diffs[zi][yi]).is_zero() {
                    orthogonal += 1;
                }
            }
        }
    }
    TripleCount { membership, orthogonal: Some(orthogonal), method: "direct" }
}

/// Exact integer from the transform identity; `s_hat` is `1̂_{S_j}`.
pub(crate) fn transform_triples(space: &Space, a: &[Vec<Fe>], s_hat: &GridFunction) -> Result<u64> {
    let a_hat = GridFunction::indicator(space, a.iter().map(|x| space.index(x))).fourier_forward();
    let n = space.size();
    let sum: Complex64 = crate::exec::Execution::default().sum_complex_by(n, |k| {
        let v = a_hat.get(k);
        v * v * v.conj() * s_hat.get(k).conj()
    });
    let value = sum.re / n as f64;
    let rounded = value.round();
    if (value - rounded).abs() > 0.25 || sum.im.abs() / n as f64 > 0.25 {
        return Err(Error::Construction(format!("triple count {value} is not near an integer")));
    }
    Ok(rounded as u64)
}

/// `E(A)` through `q^{−d} Σ |1̂_A|⁴`, rounded.
pub fn energy_by_transform(space: &Space, a: &[Vec<Fe>]) -> f64 {
    let a_hat = GridFunction::indicator(space, a.iter().map(|x| space.index(x))).fourier_forward();
    let n = space.size();
    crate::exec::Execution::default().sum_by(n, |k| a_hat.get(k).norm_sqr().powi(2)) / n as f64
}

/// Counts for `A ⊆ S_j` read off one transform of `1_A`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpectralCounts {
    /// `q^{−d} Σ |1̂_A|⁴`.
    pub energy: u64,
    /// `q^{−d} Σ 1̂_A² conj(1̂_A) conj(1̂_{S_j})`.
    pub triples: u64,
    /// `q^{−d} Σ 1̂_{S_0} |1̂_A|²`, the pairs with `‖x − y‖ = 0`.
    pub zero_distance_pairs: u64,
}

fn round_count(value: Complex64, what: &str) -> Result<u64> {
    let rounded = value.re.round();
    if (value.re - rounded).abs() > 0.25 || value.im.abs() > 0.25 || rounded < 0.0 {
        return Err(Error::Construction(format!("{what} {value} is not near a nonnegative integer")));
    }
    Ok(rounded as u64)
}

/// Energy, triples and zero-distance pairs from `1̂_A`, given `1̂_{S_j}` and `1̂_{S_0}`.
pub fn spectral_counts(space: &Space, a: &[usize], s_hat: &GridFunction, s0_hat: &GridFunction) -> Result<SpectralCounts> {
    let a_hat = GridFunction::indicator(space, a.iter().copied()).fourier_forward();
    let n = space.size();
    let exec = crate::exec::Execution::default();
    let inv = (n as f64).recip();
    let energy = exec.sum_by(n, |k| a_hat.get(k).norm_sqr().powi(2)) * inv;
    let triples = exec.sum_complex_by(n, |k| {
        let v = a_hat.get(k);
        v * v * v.conj() * s_hat.get(k).conj()
    }) * inv;
    let pairs = exec.sum_complex_by(n, |k| s0_hat.get(k) * a_hat.get(k).norm_sqr()) * inv;
    Ok(SpectralCounts {
        energy: round_count(Complex64::new(energy, 0.0), "energy")?,
        triples: round_count(triples, "triple count")?,
        zero_distance_pairs: round_count(pairs, "pair count")?,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct EnergyReport {
    pub size: usize,
    pub energy: u64,
    /// `|A|³/q`.
    pub cubic_term: f64,
    /// `q^{(d−2)/2} |A|²`.
    pub quadratic_term: f64,
    /// `E / (cubic + quadratic)`.
    pub ratio: f64,
    /// `2|A|² − |A| ≤ E ≤ |A|³`.
    pub trivial_bounds_hold: bool,
}

pub fn energy_report(space: &Space, a: &[Vec<Fe>]) -> EnergyReport {
    let n = a.len() as f64;
    let q = space.q() as f64;
    let d = space.dim() as f64;
    let energy = additive_energy(space, a);
    let cubic_term = n.powi(3) / q;
    let quadratic_term = q.powf((d - 2.0) / 2.0) * n * n;
    let size = a.len() as u64;
    EnergyReport {
        size: a.len(),
        energy,
        cubic_term,
        quadratic_term,
        ratio: energy as f64 / (cubic_term + quadratic_term),
        trivial_bounds_hold: energy + size >= 2 * size * size && energy <= size.pow(3),
    }
}

/// Bookkeeping of the two-case split in the energy bound for one set.
#[derive(Debug, Clone, Serialize)]
pub struct ChainReport {
    /// Triples with `(x − z)·(y − z) = 0`.
    pub total: u64,
    /// Those with `‖x − z‖ = 0` or `‖y − z‖ = 0`.
    pub isotropic_case: u64,
    /// Those with both legs non-isotropic.
    pub regular_case: u64,
    /// `Σ_z T(X_z, Y_z)` from paraboloid pair counts of the lifted sets.
    pub lifted_pairs: u64,
    /// `T(X, Y') = (q − 2) T(X, Y)` and `|Y'| = (q − 2)|Y|` for every `z`.
    pub dilation_holds: bool,
    /// Largest incidence-bound ratio among the per-`z` pair counts.
    pub max_pair_ratio: f64,
    pub consistent: bool,
}

/// Lifts `x − z` to `(x − z, ‖x − z‖)` on the paraboloid in `F_q^{d+1}`.
fn lift(space: &Space, v: &[Fe]) -> Vec<Fe> {
    let mut out = v.to_vec();
    out.push(space.norm(v));
    out
}

/// Replays the case split behind the energy bound on a small set.
pub fn energy_chain_check(space: &Space, j: Fe, a: &[Vec<Fe>]) -> Result<ChainReport> {
    check_on_sphere(space, j, a)?;
    let field = space.field();
    let up = space.with_dim(space.dim() + 1)?;
    let mut total = 0;
    let mut isotropic_case = 0;
    let mut regular_case = 0;
    let mut lifted_pairs = 0;
    let mut dilation_holds = true;
    let mut max_pair_ratio: f64 = 0.0;
    for z in a {
        let diffs: Vec<Vec<Fe>> = a.iter().map(|x| space.sub(x, z)).collect();
        for u in &diffs {
            for v in &diffs {
                if !space.dot(u, v).is_zero() {
                    continue;
                }
                total += 1;
                if space.norm(u).is_zero() || space.norm(v).is_zero() {
                    isotropic_case += 1;
                } else {
                    regular_case += 1;
                }
            }
        }
        let x_set: Vec<Vec<Fe>> =
            diffs.iter().filter(|u| !space.norm(u).is_zero()).map(|u| lift(space, u)).collect();
        if x_set.is_empty() {
            continue;
        }
        let t: PairCountReport = paraboloid_pair_count(&up, &x_set, &x_set)?;
        lifted_pairs += t.count;
        max_pair_ratio = max_pair_ratio.max(t.ratio);
        let y_dilated: Vec<Vec<Fe>> = x_set
            .iter()
            .flat_map(|y| {
                let base = &y[..space.dim()];
                field
                    .nonzero()
                    .filter(|&l| l != Fe::ONE)
                    .map(move |l| lift(space, &space.scale(l, base)))
                    .collect::<Vec<_>>()
            })
            .collect();
        let distinct: std::collections::HashSet<usize> = y_dilated.iter().map(|y| up.index(y)).collect();
        let t_dilated = paraboloid_pair_count(&up, &x_set, &y_dilated)?;
        let factor = space.q() as u64 - 2;
        dilation_holds &= distinct.len() as u64 == factor * x_set.len() as u64 && t_dilated.count == factor * t.count;
    }
    let consistent = total == isotropic_case + regular_case && regular_case == lifted_pairs && dilation_holds;
    Ok(ChainReport { total, isotropic_case, regular_case, lifted_pairs, dilation_holds, max_pair_ratio, consistent })
}
