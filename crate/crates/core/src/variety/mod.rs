//! Spheres `S_j`, the paraboloid, their Fourier transforms, and subspaces
//! lying on them.

mod fourier;
pub mod linalg;
mod subspace;
mod witt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::field::{Fe, FiniteField};
use crate::grid::{Space, DEFAULT_BUDGET};

pub use fourier::{
    decay_profile, radial_profile, sphere_fourier_at, sphere_fourier_brute, sphere_fourier_explicit,
    surface_extension, DecayProfile, RadialProfile, SphereBranch,
};
pub use subspace::{AffineSubspace, FieldExport, SubspaceExport};
pub use witt::{
    equivalence_transform, expected_isotropic_dim, larger_isotropic_exists, orthogonal_vectors_witness,
    sphere_affine_subspace, witt_isotropic_subspace, EquivalenceTransform,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VarietyKind {
    /// `x_1² + ... + x_d² = j`.
    Sphere(Fe),
    /// `x_1² + ... + x_{d−1}² = x_d`.
    Paraboloid,
}

impl VarietyKind {
    pub fn contains(&self, space: &Space, x: &[Fe]) -> bool {
        match *self {
            VarietyKind::Sphere(j) => space.norm(x) == j,
            VarietyKind::Paraboloid => {
                let (base, last) = x.split_at(x.len() - 1);
                space.norm(base) == last[0]
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            VarietyKind::Sphere(j) => format!("S_{}", j.0),
            VarietyKind::Paraboloid => "P".into(),
        }
    }
}

/// `‖x‖ = Σ x_i²`.
pub fn norm_map(field: &FiniteField, x: &[Fe]) -> Fe {
    x.iter().fold(Fe::ZERO, |acc, &c| field.add(acc, field.square(c)))
}

/// `roots[v]` lists every `y` with `y² = v`, ascending.
pub(crate) fn square_roots(field: &FiniteField) -> Vec<Vec<Fe>> {
    let mut roots = vec![Vec::new(); field.q()];
    for y in field.elements() {
        roots[field.square(y).index()].push(y);
    }
    roots
}

/// `counts[c] = #{x ∈ F_q^d : ‖x‖ = c}`, by repeated convolution.
pub fn norm_distribution(space: &Space) -> Vec<u64> {
    let field = space.field();
    let q = field.q();
    let mut squares = vec![0u64; q];
    for y in field.elements() {
        squares[field.square(y).index()] += 1;
    }
    let mut counts = vec![0u64; q];
    counts[0] = 1;
    for _ in 0..space.dim() {
        let mut next = vec![0u64; q];
        for (a, &ca) in counts.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            for (b, &cb) in squares.iter().enumerate() {
                next[field.add(Fe(a as u32), Fe(b as u32)).index()] += ca * cb;
            }
        }
        counts = next;
    }
    counts
}

/// A sphere or paraboloid together with its points in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticVariety {
    kind: VarietyKind,
    space: Space,
    indices: Vec<u32>,
}

impl QuadraticVariety {
    pub fn enumerate(kind: VarietyKind, space: &Space) -> Result<Self> {
        Self::enumerate_with(kind, space, DEFAULT_BUDGET, Execution::default())
    }

    /// Fiberwise enumeration: for each prefix of `d − 1` coordinates the last
    /// coordinate is solved for directly.
    pub fn enumerate_with(kind: VarietyKind, space: &Space, budget: usize, exec: Execution) -> Result<Self> {
        space.check_budget(budget)?;
        if kind == VarietyKind::Paraboloid && space.dim() < 2 {
            return Err(Error::InvalidArgument("the paraboloid needs d ≥ 2".into()));
        }
        let field = space.field();
        let q = space.q();
        let d = space.dim();
        let roots = square_roots(field);
        let prefixes = space.size() / q;
        let (tasks, per_task) = if d >= 2 { (q, prefixes / q) } else { (1, 1) };
        let chunks = exec.map_range(tasks, |t| {
            let mut out = Vec::new();
            let mut x = vec![Fe::ZERO; d - 1];
            let prefix_space = (d >= 2).then(|| space.with_dim(d - 1).expect("smaller space"));
            for prefix in t * per_task..(t + 1) * per_task {
                if let Some(ps) = &prefix_space {
                    ps.decode_into(prefix, &mut x);
                }
                let s = norm_map(field, &x);
                let base = (prefix * q) as u32;
                match kind {
                    VarietyKind::Sphere(j) => {
                        for y in &roots[field.sub(j, s).index()] {
                            out.push(base + y.0);
                        }
                    }
                    VarietyKind::Paraboloid => out.push(base + s.0),
                }
            }
            out
        });
        Ok(QuadraticVariety { kind, space: space.clone(), indices: chunks.concat() })
    }

    /// Membership test at every point of the grid; the reference for
    /// [`QuadraticVariety::enumerate`].
    pub fn full_scan(kind: VarietyKind, space: &Space, budget: usize) -> Result<Self> {
        space.check_budget(budget)?;
        let mut x = space.origin();
        let indices = (0..space.size())
            .filter(|&i| {
                space.decode_into(i, &mut x);
                kind.contains(space, &x)
            })
            .map(|i| i as u32)
            .collect();
        Ok(QuadraticVariety { kind, space: space.clone(), indices })
    }

    pub fn kind(&self) -> VarietyKind {
        self.kind
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn field(&self) -> &FiniteField {
        self.space.field()
    }

    pub fn size(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// A single-point variety, such as `S_0 = {0}` in the plane when `q ≡ 3 (mod 4)`.
    pub fn is_degenerate(&self) -> bool {
        self.indices.len() == 1
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn points(&self) -> impl Iterator<Item = Vec<Fe>> + '_ {
        self.indices.iter().map(move |&i| self.space.point(i as usize))
    }

    pub fn contains_index(&self, index: usize) -> bool {
        self.indices.binary_search(&(index as u32)).is_ok()
    }

    pub fn contains(&self, x: &[Fe]) -> bool {
        self.kind.contains(&self.space, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(q: u32, d: usize) -> Space {
        Space::new(FiniteField::with_order(q).unwrap(), d).unwrap()
    }

    #[test]
    fn small_spheres() {
        let s = space(3, 2);
        let s1 = QuadraticVariety::enumerate(VarietyKind::Sphere(Fe(1)), &s).unwrap();
        assert_eq!(s1.size(), 4);
        let s0 = QuadraticVariety::enumerate(VarietyKind::Sphere(Fe(0)), &s).unwrap();
        assert_eq!(s0.size(), 1);
        assert!(s0.is_degenerate());
    }

    #[test]
    fn fiberwise_matches_full_scan() {
        for (q, d) in [(3, 1), (3, 3), (5, 2), (5, 3), (7, 3), (9, 2), (3, 5)] {
            let s = space(q, d);
            for j in s.field().elements() {
                let kind = VarietyKind::Sphere(j);
                let a = QuadraticVariety::enumerate(kind, &s).unwrap();
                let b = QuadraticVariety::full_scan(kind, &s, DEFAULT_BUDGET).unwrap();
                assert_eq!(a, b, "q={q} d={d} j={j}");
            }
            if d >= 2 {
                let a = QuadraticVariety::enumerate(VarietyKind::Paraboloid, &s).unwrap();
                let b = QuadraticVariety::full_scan(VarietyKind::Paraboloid, &s, DEFAULT_BUDGET).unwrap();
                assert_eq!(a, b);
                assert_eq!(a.size(), s.size() / s.q());
            }
        }
    }

    #[test]
    fn norm_distribution_matches_enumeration() {
        let s = space(5, 4);
        let counts = norm_distribution(&s);
        for j in s.field().elements() {
            let v = QuadraticVariety::enumerate(VarietyKind::Sphere(j), &s).unwrap();
            assert_eq!(counts[j.index()], v.size() as u64);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let s = space(7, 4);
        assert!(QuadraticVariety::enumerate_with(VarietyKind::Paraboloid, &s, 100, Execution::Sequential).is_err());
    }

    #[test]
    fn norm_map_scaling_and_polarization() {
        let s = space(7, 3);
        let f = s.field();
        let x = [Fe(1), Fe(5), Fe(3)];
        let y = [Fe(6), Fe(2), Fe(0)];
        let lam = Fe(4);
        assert_eq!(norm_map(f, &s.scale(lam, &x)), f.mul(f.square(lam), norm_map(f, &x)));
        let two_dot = f.add(s.dot(&x, &y), s.dot(&x, &y));
        let rhs = f.sub(f.add(norm_map(f, &x), norm_map(f, &y)), two_dot);
        assert_eq!(norm_map(f, &s.sub(&x, &y)), rhs);
    }
}
