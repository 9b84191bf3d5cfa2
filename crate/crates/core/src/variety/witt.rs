//! Isotropic subspaces of the sum-of-squares form and the affine witnesses
//! built from them.

use super::linalg::{self, Matrix};
use super::subspace::AffineSubspace;
use super::VarietyKind;
use crate::error::{Error, Result};
use crate::field::{Fe, FiniteField};
use crate::grid::Space;

/// Witt index of `x_1² + ... + x_d²` over `F_q`.
pub fn expected_isotropic_dim(d: usize, q: usize) -> usize {
    if d % 2 == 1 {
        (d - 1) / 2
    } else if d % 4 == 2 && q % 4 == 3 {
        (d - 2) / 2
    } else {
        d / 2
    }
}

fn standard_basis(d: usize) -> Vec<Vec<Fe>> {
    (0..d)
        .map(|i| {
            let mut e = vec![Fe::ZERO; d];
            e[i] = Fe::ONE;
            e
        })
        .collect()
}

fn combine(field: &FiniteField, coeffs: &[Fe], vectors: &[Vec<Fe>], d: usize) -> Vec<Fe> {
    let mut x = vec![Fe::ZERO; d];
    for (c, v) in coeffs.iter().zip(vectors) {
        if c.is_zero() {
            continue;
        }
        for (xi, &vi) in x.iter_mut().zip(v) {
            *xi = field.add(*xi, field.mul(*c, vi));
        }
    }
    x
}

/// First nonzero vector of `span(vectors)` (coefficients in canonical order)
/// satisfying `pred`.
fn scan_span<P: Fn(&[Fe]) -> bool>(space: &Space, vectors: &[Vec<Fe>], pred: P) -> Option<Vec<Fe>> {
    if vectors.is_empty() {
        return None;
    }
    let coeffs = space.with_dim(vectors.len()).ok()?;
    (1..coeffs.size()).find_map(|n| {
        let x = combine(space.field(), &coeffs.point(n), vectors, space.dim());
        pred(&x).then_some(x)
    })
}

fn axpy(field: &FiniteField, x: &[Fe], c: Fe, y: &[Fe]) -> Vec<Fe> {
    x.iter().zip(y).map(|(&a, &b)| field.add(a, field.mul(c, b))).collect()
}

/// A maximal totally isotropic linear subspace of `F_q^d`, built by peeling
/// off hyperbolic pairs.
///
/// Each round finds an isotropic `u` in the current nondegenerate subform
/// (any three-dimensional subform has one), pairs it with `v` normalised to
/// `u·v = 1` and `‖v‖ = 0`, and recurses on the orthogonal complement of the
/// pair.
pub fn witt_isotropic_subspace(space: &Space) -> Result<AffineSubspace> {
    if space.dim() < 2 {
        return Err(Error::InvalidArgument("isotropic subspaces need d ≥ 2".into()));
    }
    let field = space.field();
    let mut w = standard_basis(space.dim());
    let mut isotropic = Vec::new();
    loop {
        let head = &w[..w.len().min(3)];
        let Some(u) = scan_span(space, head, |x| space.norm(x).is_zero()) else {
            break;
        };
        let v = w
            .iter()
            .find(|b| !space.dot(&u, b).is_zero())
            .ok_or_else(|| Error::Construction("form degenerate on complement".into()))?;
        let v = space.scale(field.inv(space.dot(&u, v)).unwrap(), v);
        let half = field.inv(field.from_int(2)).unwrap();
        let c = field.mul(space.norm(&v), half);
        let v = axpy(field, &v, field.neg(c), &u);
        debug_assert!(space.norm(&v).is_zero() && space.dot(&u, &v) == Fe::ONE);
        let projected: Vec<Vec<Fe>> = w
            .iter()
            .map(|b| {
                let x = axpy(field, b, field.neg(space.dot(b, &v)), &u);
                axpy(field, &x, field.neg(space.dot(b, &u)), &v)
            })
            .collect();
        w = linalg::independent_subset(field, &projected);
        isotropic.push(u);
    }
    let h = AffineSubspace::linear(space, isotropic)?;
    h.check_on(VarietyKind::Sphere(Fe::ZERO))?;
    Ok(h)
}

/// Whether a totally isotropic subspace of dimension `dim + 1` exists, by
/// exhaustive search over mutually orthogonal isotropic lines.
pub fn larger_isotropic_exists(space: &Space, dim: usize) -> bool {
    let field = space.field();
    let reps: Vec<Vec<Fe>> = space
        .points()
        .skip(1)
        .filter(|x| x.iter().find(|c| !c.is_zero()) == Some(&Fe::ONE) && space.norm(x).is_zero())
        .collect();
    let n = reps.len();
    let orth: Vec<Vec<bool>> =
        (0..n).map(|i| (0..n).map(|j| space.dot(&reps[i], &reps[j]).is_zero()).collect()).collect();

    fn extend(
        chosen: &mut Vec<usize>,
        start: usize,
        target: usize,
        reps: &[Vec<Fe>],
        orth: &[Vec<bool>],
        field: &FiniteField,
    ) -> bool {
        if chosen.len() == target {
            return true;
        }
        for c in start..reps.len() {
            if !chosen.iter().all(|&k| orth[k][c]) {
                continue;
            }
            chosen.push(c);
            let vecs: Vec<Vec<Fe>> = chosen.iter().map(|&k| reps[k].clone()).collect();
            if linalg::rank(field, &vecs) == chosen.len() && extend(chosen, c + 1, target, reps, orth, field) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    extend(&mut Vec::new(), 0, dim + 1, &reps, &orth, field)
}

/// A change of variables taking the sum of squares to the split normal form.
#[derive(Debug, Clone)]
pub struct EquivalenceTransform {
    /// `‖M y‖ = y_1² − y_2² + ... + y_{d−1}² − α y_d²`.
    pub matrix: Matrix,
    /// `1`, or the smallest nonsquare when `(−1)^{d/2}` is a nonsquare.
    pub alpha: Fe,
}

impl EquivalenceTransform {
    /// Coefficient of `y_i²` in the normal form.
    pub fn diagonal(&self, field: &FiniteField) -> Vec<Fe> {
        let n = self.matrix.n;
        (0..n)
            .map(|i| match i {
                _ if i == n - 1 => field.neg(self.alpha),
                _ if i % 2 == 0 => Fe::ONE,
                _ => field.neg(Fe::ONE),
            })
            .collect()
    }

    /// The normal form at `y`.
    pub fn normal_form(&self, field: &FiniteField, y: &[Fe]) -> Fe {
        self.diagonal(field)
            .iter()
            .zip(y)
            .fold(Fe::ZERO, |acc, (&c, &yi)| field.add(acc, field.mul(c, field.square(yi))))
    }

    /// `‖M y‖` equals the normal form at every `y ∈ F_q^d`.
    pub fn check_exhaustive(&self, space: &Space) -> bool {
        let field = space.field();
        space.points().all(|y| space.norm(&self.matrix.apply(field, &y)) == self.normal_form(field, &y))
    }
}

pub fn equivalence_transform(space: &Space) -> Result<EquivalenceTransform> {
    let d = space.dim();
    if !d.is_multiple_of(2) || d == 0 {
        return Err(Error::InvalidArgument(format!("normal form needs even d, got {d}")));
    }
    let field = space.field();
    let sign = field.pow(field.neg(Fe::ONE), (d / 2) as u64);
    let alpha = if field.quadratic_character(sign) == 1 { Fe::ONE } else { field.smallest_nonsquare() };
    let mut t = EquivalenceTransform { matrix: Matrix { n: d, entries: Vec::new() }, alpha };
    let targets = t.diagonal(field);

    let mut complement = standard_basis(d);
    let mut columns: Vec<Vec<Fe>> = Vec::with_capacity(d);
    for &target in &targets[..d - 1] {
        let v = scan_span(space, &complement, |x| space.norm(x) == target)
            .ok_or_else(|| Error::Construction(format!("no vector of norm {target} in complement")))?;
        let qv_inv = field.inv(space.norm(&v)).unwrap();
        let projected: Vec<Vec<Fe>> = complement
            .iter()
            .map(|b| axpy(field, b, field.neg(field.mul(space.dot(b, &v), qv_inv)), &v))
            .collect();
        complement = linalg::independent_subset(field, &projected);
        columns.push(v);
    }
    let w = complement.first().ok_or_else(|| Error::Construction("complement collapsed".into()))?;
    let ratio = field.div(targets[d - 1], space.norm(w)).ok_or_else(|| Error::Construction("isotropic remainder".into()))?;
    let lambda = field
        .sqrt(ratio)
        .ok_or_else(|| Error::Construction("last coefficient in the wrong square class".into()))?;
    columns.push(space.scale(lambda, w));
    t.matrix = Matrix::from_columns(&columns);
    if t.matrix.determinant(field).is_zero() {
        return Err(Error::Construction("singular transform".into()));
    }
    Ok(t)
}

/// First `(a, b)` in canonical order with `a² + c·b² = j`.
fn binary_solution(field: &FiniteField, c: Fe, j: Fe) -> Option<(Fe, Fe)> {
    field
        .elements()
        .flat_map(|a| field.elements().map(move |b| (a, b)))
        .find(|&(a, b)| field.add(field.square(a), field.mul(c, field.square(b))) == j)
}

/// A `(d−2)/2`-dimensional affine subspace lying on `S_j`, `j ≠ 0`.
///
/// In normal-form coordinates it is `{(t_1, t_1, ..., t_k, t_k, a, b)}` with
/// `a² − α b² = j`; the equivalence transform carries it onto the sphere.
pub fn sphere_affine_subspace(space: &Space, j: Fe) -> Result<AffineSubspace> {
    let d = space.dim();
    if j.is_zero() || d < 4 || !d.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("needs j ≠ 0 and even d ≥ 4, got j = {j}, d = {d}")));
    }
    let field = space.field();
    let t = equivalence_transform(space)?;
    let (a, b) = binary_solution(field, field.neg(t.alpha), j)
        .ok_or_else(|| Error::Construction(format!("a² − αb² = {j} has no solution")))?;
    let mut y0 = vec![Fe::ZERO; d];
    y0[d - 2] = a;
    y0[d - 1] = b;
    let offset = t.matrix.apply(field, &y0);
    let basis = (0..(d - 2) / 2)
        .map(|i| {
            let mut e = vec![Fe::ZERO; d];
            e[2 * i] = Fe::ONE;
            e[2 * i + 1] = Fe::ONE;
            t.matrix.apply(field, &e)
        })
        .collect();
    let h = AffineSubspace::new(space, offset, basis)?;
    h.check_on(VarietyKind::Sphere(j))?;
    Ok(h)
}

/// `{(h, a, b) : h ∈ H}` for a totally isotropic `H ⊂ F_q^{d−2}` of dimension
/// `(d−2)/2` and `a² + b² = j`; every pair `x, y` in it has `x·y = j`.
///
/// Requires the Witt index of `F_q^{d−2}` to be `(d−2)/2`.
pub fn orthogonal_vectors_witness(space: &Space, j: Fe) -> Result<AffineSubspace> {
    let d = space.dim();
    if j.is_zero() || d < 4 || !d.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("needs j ≠ 0 and even d ≥ 4, got j = {j}, d = {d}")));
    }
    let field = space.field();
    let inner = space.with_dim(d - 2)?;
    let h = witt_isotropic_subspace(&inner)?;
    if h.dim() != (d - 2) / 2 {
        return Err(Error::BranchUnavailable(format!(
            "F_{}^{} has no isotropic subspace of dimension {}",
            space.q(),
            d - 2,
            (d - 2) / 2
        )));
    }
    let (a, b) = binary_solution(field, Fe::ONE, j).ok_or_else(|| Error::Construction("a² + b² = j unsolvable".into()))?;
    let pad = |v: &[Fe], tail: [Fe; 2]| -> Vec<Fe> { v.iter().copied().chain(tail).collect() };
    let offset = pad(&inner.origin(), [a, b]);
    let basis = h.basis().iter().map(|v| pad(v, [Fe::ZERO, Fe::ZERO])).collect();
    let w = AffineSubspace::new(space, offset, basis)?;
    w.check_on(VarietyKind::Sphere(j))?;
    Ok(w)
}
