use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::linalg;
use super::VarietyKind;
use crate::error::{Error, Result};
use crate::field::{Fe, FiniteField};
use crate::grid::Space;

/// `offset + span(basis)` inside `F_q^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSubspace {
    space: Space,
    offset: Vec<Fe>,
    basis: Vec<Vec<Fe>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldExport {
    pub p: u32,
    pub ell: u32,
    pub modulus: Vec<u32>,
}

/// Interchange form of a witness subspace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceExport {
    pub field: FieldExport,
    pub d: usize,
    /// Radius of the sphere the subspace lies on.
    pub j: Option<u32>,
    pub offset: Vec<u32>,
    pub basis: Vec<Vec<u32>>,
}

impl AffineSubspace {
    pub fn new(space: &Space, offset: Vec<Fe>, basis: Vec<Vec<Fe>>) -> Result<Self> {
        let d = space.dim();
        if offset.len() != d || basis.iter().any(|b| b.len() != d) {
            return Err(Error::Mismatch(format!("vectors must have {d} coordinates")));
        }
        if linalg::rank(space.field(), &basis) != basis.len() {
            return Err(Error::Construction("basis vectors are linearly dependent".into()));
        }
        Ok(AffineSubspace { space: space.clone(), offset, basis })
    }

    pub fn linear(space: &Space, basis: Vec<Vec<Fe>>) -> Result<Self> {
        Self::new(space, space.origin(), basis)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn field(&self) -> &FiniteField {
        self.space.field()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `q^{dim}`.
    pub fn size(&self) -> usize {
        self.space.q().pow(self.dim() as u32)
    }

    pub fn offset(&self) -> &[Fe] {
        &self.offset
    }

    pub fn basis(&self) -> &[Vec<Fe>] {
        &self.basis
    }

    pub fn is_linear(&self) -> bool {
        self.offset.iter().all(|c| c.is_zero())
    }

    /// `offset + Σ t_i b_i` for coefficient vectors `t` in canonical order.
    pub fn points(&self) -> Vec<Vec<Fe>> {
        let field = self.field();
        let k = self.dim();
        let coeffs = Space::new(field.clone(), k.max(1)).expect("small space");
        (0..self.size())
            .map(|n| {
                let t = if k == 0 { Vec::new() } else { coeffs.point(n) };
                let mut x = self.offset.clone();
                for (ti, b) in t.iter().zip(&self.basis) {
                    for (xc, &bc) in x.iter_mut().zip(b) {
                        *xc = field.add(*xc, field.mul(*ti, bc));
                    }
                }
                x
            })
            .collect()
    }

    pub fn indices(&self) -> Vec<usize> {
        self.points().iter().map(|x| self.space.index(x)).collect()
    }

    pub fn lies_on(&self, kind: VarietyKind) -> bool {
        self.points().iter().all(|x| kind.contains(&self.space, x))
    }

    /// Errors with the first point off the variety.
    pub fn check_on(&self, kind: VarietyKind) -> Result<()> {
        match self.points().into_iter().find(|x| !kind.contains(&self.space, x)) {
            None => Ok(()),
            Some(x) => Err(Error::Construction(format!("point {x:?} is not on {}", kind.label()))),
        }
    }

    /// Closure of the point set under addition and scaling (for linear subspaces).
    pub fn is_closed(&self) -> bool {
        let pts = self.points();
        let set: HashSet<usize> = pts.iter().map(|x| self.space.index(x)).collect();
        let field = self.field();
        pts.iter().all(|x| {
            pts.iter().all(|y| set.contains(&self.space.index(&self.space.add(x, y))))
                && field.elements().all(|c| set.contains(&self.space.index(&self.space.scale(c, x))))
        })
    }

    pub fn export(&self, j: Option<Fe>) -> SubspaceExport {
        let field = self.field();
        SubspaceExport {
            field: FieldExport { p: field.characteristic(), ell: field.degree(), modulus: field.modulus().to_vec() },
            d: self.space.dim(),
            j: j.map(|j| j.0),
            offset: self.offset.iter().map(|c| c.0).collect(),
            basis: self.basis.iter().map(|b| b.iter().map(|c| c.0).collect()).collect(),
        }
    }

    pub fn to_json(&self, j: Option<Fe>) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.export(j))?)
    }

    /// Rebuilds the subspace, checking the recorded modulus.
    pub fn from_export(e: &SubspaceExport) -> Result<Self> {
        let field = FiniteField::new(e.field.p, e.field.ell)?;
        if field.modulus() != e.field.modulus.as_slice() {
            return Err(Error::Mismatch(format!("modulus {:?} differs from {:?}", e.field.modulus, field.modulus())));
        }
        let space = Space::new(field.clone(), e.d)?;
        let conv = |v: &[u32]| -> Result<Vec<Fe>> { v.iter().map(|&c| field.element(c)).collect() };
        let basis = e.basis.iter().map(|b| conv(b)).collect::<Result<Vec<_>>>()?;
        Self::new(&space, conv(&e.offset)?, basis)
    }
}
