use num_complex::Complex64;
use serde::Serialize;

use super::{norm_distribution, QuadraticVariety, VarietyKind};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::field::{gauss_sum_explicit, Fe};
use crate::grid::{GridFunction, Space};

/// Largest grid on which [`decay_profile`] runs a dense transform.
const DENSE_DECAY_LIMIT: usize = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SphereBranch {
    /// Valid for every `j` and `d`.
    General,
    /// Simplified form for `j = 0`, `d ≡ 2 (mod 4)`, `q ≡ 3 (mod 4)`.
    ZeroRadius,
}

/// Closed form for `(1_{S_j})^∨(α)`.
pub fn sphere_fourier_explicit(space: &Space, j: Fe, alpha: &[Fe], branch: SphereBranch) -> Result<Complex64> {
    let field = space.field();
    let q = space.q() as f64;
    let d = space.dim();
    if alpha.len() != d {
        return Err(Error::Mismatch(format!("α has {} coordinates, expected {d}", alpha.len())));
    }
    let delta = if alpha.iter().all(|a| a.is_zero()) { 1.0 / q } else { 0.0 };
    let norm = space.norm(alpha);
    let exec = Execution::Sequential;
    match branch {
        SphereBranch::General => {
            let four = field.from_int(4);
            let eta_minus_one = field.quadratic_character(field.neg(Fe::ONE)) as f64;
            let g = gauss_sum_explicit(field);
            let sum = exec.sum_complex_by(field.q() - 1, |k| {
                let r = Fe(k as u32 + 1);
                let eta = (field.quadratic_character(r) as f64).powi(d as i32);
                let inv = field.inv(field.mul(four, r)).expect("4r ≠ 0 in odd characteristic");
                let arg = field.add(field.mul(j, r), field.mul(norm, inv));
                field.additive_character(arg) * eta
            });
            let coeff = g.powu(d as u32) * (eta_minus_one.powi(d as i32) * q.powi(-(d as i32) - 1));
            Ok(coeff * sum + delta)
        }
        SphereBranch::ZeroRadius => {
            if !j.is_zero() || d % 4 != 2 || space.q() % 4 != 3 {
                return Err(Error::BranchUnavailable(format!(
                    "zero-radius form needs j = 0, d ≡ 2 (mod 4), q ≡ 3 (mod 4); got j = {j}, d = {d}, q = {}",
                    space.q()
                )));
            }
            let sum = exec.sum_complex_by(field.q() - 1, |k| field.additive_character(field.mul(Fe(k as u32 + 1), norm)));
            Ok(Complex64::new(delta, 0.0) - sum * q.powf(-(d as f64 + 2.0) / 2.0))
        }
    }
}

/// `(1_V)^∨(α) = q^{−d} Σ_{y∈V} χ(α·y)` by direct summation over `V`.
pub fn sphere_fourier_at(v: &QuadraticVariety, alpha: &[Fe]) -> Complex64 {
    let space = v.space();
    let field = space.field();
    let idx = v.indices();
    let sum = Execution::default().sum_complex_by(idx.len(), |k| {
        let y = space.point(idx[k] as usize);
        field.additive_character(space.dot(alpha, &y))
    });
    sum / space.size() as f64
}

/// `(1_V)^∨` on the whole grid by the dense transform.
pub fn sphere_fourier_brute(v: &QuadraticVariety) -> GridFunction {
    GridFunction::indicator(v.space(), v.indices().iter().map(|&i| i as usize)).fourier_inverse()
}

/// `(f dσ)^∨(m) = |V|^{−1} Σ_{x∈V} f(x) χ(m·x)`; values of `f` off `V` are ignored.
pub fn surface_extension(f: &GridFunction, v: &QuadraticVariety) -> Result<GridFunction> {
    if f.space() != v.space() {
        return Err(Error::Mismatch("function and variety live on different spaces".into()));
    }
    if v.is_empty() {
        return Err(Error::EmptyVariety);
    }
    let mut g = GridFunction::zeros(f.space());
    for &i in v.indices() {
        g.values_mut()[i as usize] = f.get(i as usize);
    }
    let scale = f.space().size() as f64 / v.size() as f64;
    Ok(g.fourier_inverse().scaled(scale))
}

/// `(dσ)^∨` on a sphere, one value per norm class.
///
/// Orthogonal maps preserve the sphere and act transitively on nonzero
/// vectors of a fixed norm, so `(dσ)^∨(α)` for `α ≠ 0` depends only on `‖α‖`.
#[derive(Debug, Clone, Serialize)]
pub struct RadialProfile {
    /// Value at a representative `α ≠ 0` of each norm class, if the class is nonempty.
    pub values: Vec<Option<Complex64>>,
    /// `#{α ≠ 0 : ‖α‖ = c}`.
    pub counts: Vec<u64>,
    /// The representatives themselves.
    pub representatives: Vec<Option<Vec<Fe>>>,
}

impl RadialProfile {
    /// `Σ_m |(dσ)^∨(m)|^r` over the whole grid.
    pub fn power_sum(&self, r: f64) -> f64 {
        let tail: f64 = self
            .values
            .iter()
            .zip(&self.counts)
            .filter_map(|(v, &n)| v.map(|v| n as f64 * crate::grid::abs_pow(v, r)))
            .sum();
        1.0 + tail
    }

    /// `max_{m≠0} |(dσ)^∨(m)|` with its class.
    pub fn max_nonzero(&self) -> Option<(f64, usize)> {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(c, v)| v.map(|v| (v.norm(), c)))
            .fold(None, |best, cur| match best {
                Some(b) if b.0 >= cur.0 => Some(b),
                _ => Some(cur),
            })
    }
}

/// Smallest nonzero `α` (in canonical order, supported on the first three
/// coordinates) with `‖α‖ = c`.
fn representative(space: &Space, c: Fe) -> Option<Vec<Fe>> {
    let d = space.dim();
    let k = d.min(3);
    let small = space.with_dim(k).ok()?;
    (1..small.size()).map(|i| small.point(i)).find(|x| small.norm(x) == c).map(|x| {
        let mut full = vec![Fe::ZERO; d - k];
        full.extend(x);
        full
    })
}

pub fn radial_profile(v: &QuadraticVariety) -> Result<RadialProfile> {
    if !matches!(v.kind(), VarietyKind::Sphere(_)) {
        return Err(Error::Precondition("radial profile is defined for spheres".into()));
    }
    if v.is_empty() {
        return Err(Error::EmptyVariety);
    }
    let space = v.space();
    let mut counts = norm_distribution(space);
    counts[0] -= 1;
    let representatives: Vec<Option<Vec<Fe>>> =
        space.field().elements().map(|c| representative(space, c)).collect();
    let scale = space.size() as f64 / v.size() as f64;
    let values = representatives.iter().map(|r| r.as_ref().map(|a| sphere_fourier_at(v, a) * scale)).collect();
    Ok(RadialProfile { values, counts, representatives })
}

#[derive(Debug, Clone, Serialize)]
pub struct DecayProfile {
    pub q: usize,
    pub d: usize,
    /// `max_{m≠0} |(dσ)^∨(m)|`.
    pub max: f64,
    pub argmax: Vec<u32>,
    /// `q^{−(d−2)/2}` for even `d`, `q^{−(d−1)/2}` for odd `d`.
    pub bound: f64,
    pub ratio: f64,
    /// `S_0 = {0}`, so `(dσ)^∨ ≡ 1`.
    pub degenerate: bool,
    pub method: &'static str,
}

/// Fourier decay of the surface measure on `S_0`.
pub fn decay_profile(v: &QuadraticVariety) -> Result<DecayProfile> {
    if v.kind() != VarietyKind::Sphere(Fe::ZERO) {
        return Err(Error::Precondition("decay profile is measured on S_0".into()));
    }
    let space = v.space();
    let (q, d) = (space.q(), space.dim());
    let exponent = if d % 2 == 0 { (d as f64 - 2.0) / 2.0 } else { (d as f64 - 1.0) / 2.0 };
    let bound = (q as f64).powf(-exponent);
    let (max, argmax, method) = if space.size() <= DENSE_DECAY_LIMIT {
        let one = GridFunction::constant(space, Complex64::new(1.0, 0.0));
        let ext = surface_extension(&one, v)?;
        let (i, m) = ext.values()[1..]
            .iter()
            .enumerate()
            .fold((0, -1.0), |best, (i, z)| if z.norm() > best.1 { (i + 1, z.norm()) } else { best });
        (m, space.point(i), "dense")
    } else {
        let profile = radial_profile(v)?;
        let (m, c) = profile.max_nonzero().ok_or(Error::EmptyVariety)?;
        (m, profile.representatives[c].clone().unwrap_or_default(), "radial")
    };
    Ok(DecayProfile {
        q,
        d,
        max,
        argmax: argmax.iter().map(|x| x.0).collect(),
        bound,
        ratio: max / bound,
        degenerate: v.is_degenerate(),
        method,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FiniteField;

    fn space(q: u32, d: usize) -> Space {
        Space::new(FiniteField::with_order(q).unwrap(), d).unwrap()
    }

    #[test]
    fn value_at_origin_is_density() {
        let s = space(5, 3);
        for j in s.field().elements() {
            let v = QuadraticVariety::enumerate(VarietyKind::Sphere(j), &s).unwrap();
            let z = sphere_fourier_explicit(&s, j, &s.origin(), SphereBranch::General).unwrap();
            assert!((z - Complex64::new(v.size() as f64 / 125.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn general_branch_matches_brute_force_plane() {
        let s = space(5, 2);
        let v = QuadraticVariety::enumerate(VarietyKind::Sphere(Fe(1)), &s).unwrap();
        let brute = sphere_fourier_brute(&v);
        for (i, a) in s.points().enumerate() {
            let z = sphere_fourier_explicit(&s, Fe(1), &a, SphereBranch::General).unwrap();
            assert!((z - brute.get(i)).norm() < 1e-9);
        }
    }

    #[test]
    fn zero_radius_branch_hypothesis() {
        let s = space(5, 6);
        let err = sphere_fourier_explicit(&s, Fe::ZERO, &s.origin(), SphereBranch::ZeroRadius);
        assert!(matches!(err, Err(Error::BranchUnavailable(_))));
        let s = space(3, 6);
        let mut a = s.origin();
        a[0] = Fe(1);
        let z = sphere_fourier_explicit(&s, Fe::ZERO, &a, SphereBranch::ZeroRadius).unwrap();
        assert!((z - Complex64::new(3f64.powi(-4), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn radial_profile_matches_dense() {
        let s = space(5, 3);
        let v = QuadraticVariety::enumerate(VarietyKind::Sphere(Fe(0)), &s).unwrap();
        let profile = radial_profile(&v).unwrap();
        let ext = surface_extension(&GridFunction::constant(&s, Complex64::new(1.0, 0.0)), &v).unwrap();
        for (i, m) in s.points().enumerate().skip(1) {
            let expected = profile.values[s.norm(&m).index()].unwrap();
            assert!((ext.get(i) - expected).norm() < 1e-9);
        }
        let dense: f64 = ext.values().iter().map(|z| z.norm().powf(3.0)).sum();
        assert!((profile.power_sum(3.0) - dense).abs() < 1e-9 * dense);
    }

    #[test]
    fn degenerate_decay() {
        let s = space(3, 2);
        let v = QuadraticVariety::enumerate(VarietyKind::Sphere(Fe(0)), &s).unwrap();
        let p = decay_profile(&v).unwrap();
        assert!(p.degenerate);
        assert!((p.max - 1.0).abs() < 1e-12);
    }

    #[test]
    fn extension_of_one_is_one_at_origin() {
        let s = space(7, 2);
        let v = QuadraticVariety::enumerate(VarietyKind::Sphere(Fe(3)), &s).unwrap();
        let ext = surface_extension(&GridFunction::constant(&s, Complex64::new(1.0, 0.0)), &v).unwrap();
        assert!((ext.get(0) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }
}
