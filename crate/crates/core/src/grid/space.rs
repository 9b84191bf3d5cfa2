use crate::error::{Error, Result};
use crate::field::{Fe, FiniteField};

/// Default cap on the number of points a dense enumeration may touch.
pub const DEFAULT_BUDGET: usize = 50_000_000;

/// The coordinate space `F_q^d`.
///
/// Points are indexed by `Σ x_i q^{d-1-i}`, so canonical order is
/// lexicographic with the first coordinate most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Space {
    field: FiniteField,
    d: usize,
    size: usize,
}

impl Space {
    pub fn new(field: FiniteField, d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument("dimension must be ≥ 1".into()));
        }
        let size = (field.q() as u128).pow(d as u32);
        if size > u32::MAX as u128 {
            return Err(Error::BudgetExceeded { size, budget: u32::MAX as usize });
        }
        Ok(Space { field, d, size: size as usize })
    }

    /// Errors when `q^d` exceeds `budget`.
    pub fn check_budget(&self, budget: usize) -> Result<()> {
        if self.size > budget {
            Err(Error::BudgetExceeded { size: self.size as u128, budget })
        } else {
            Ok(())
        }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn q(&self) -> usize {
        self.field.q()
    }

    /// `q^d`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn index(&self, x: &[Fe]) -> usize {
        debug_assert_eq!(x.len(), self.d);
        let q = self.q();
        x.iter().fold(0usize, |acc, c| acc * q + c.index())
    }

    pub fn checked_index(&self, x: &[Fe]) -> Result<usize> {
        if x.len() != self.d || x.iter().any(|c| c.index() >= self.q()) {
            return Err(Error::Mismatch(format!("point of length {} is not in F_{}^{}", x.len(), self.q(), self.d)));
        }
        Ok(self.index(x))
    }

    pub fn decode_into(&self, mut index: usize, out: &mut [Fe]) {
        let q = self.q();
        for slot in out.iter_mut().rev() {
            *slot = Fe((index % q) as u32);
            index /= q;
        }
    }

    pub fn point(&self, index: usize) -> Vec<Fe> {
        let mut out = vec![Fe::ZERO; self.d];
        self.decode_into(index, &mut out);
        out
    }

    pub fn origin(&self) -> Vec<Fe> {
        vec![Fe::ZERO; self.d]
    }

    /// All points in canonical order.
    pub fn points(&self) -> impl Iterator<Item = Vec<Fe>> + '_ {
        (0..self.size).map(move |i| self.point(i))
    }

    pub fn dot(&self, x: &[Fe], y: &[Fe]) -> Fe {
        let f = &self.field;
        x.iter().zip(y).fold(Fe::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
    }

    /// `‖x‖ = x_1² + ... + x_d²`.
    pub fn norm(&self, x: &[Fe]) -> Fe {
        self.dot(x, x)
    }

    pub fn add(&self, x: &[Fe], y: &[Fe]) -> Vec<Fe> {
        x.iter().zip(y).map(|(&a, &b)| self.field.add(a, b)).collect()
    }

    pub fn sub(&self, x: &[Fe], y: &[Fe]) -> Vec<Fe> {
        x.iter().zip(y).map(|(&a, &b)| self.field.sub(a, b)).collect()
    }

    pub fn scale(&self, c: Fe, x: &[Fe]) -> Vec<Fe> {
        x.iter().map(|&a| self.field.mul(c, a)).collect()
    }

    pub fn neg(&self, x: &[Fe]) -> Vec<Fe> {
        x.iter().map(|&a| self.field.neg(a)).collect()
    }

    /// The same field in another dimension.
    pub fn with_dim(&self, d: usize) -> Result<Space> {
        Space::new(self.field.clone(), d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip() {
        let s = Space::new(FiniteField::with_order(5).unwrap(), 3).unwrap();
        for i in 0..s.size() {
            assert_eq!(s.index(&s.point(i)), i);
        }
        assert_eq!(s.point(1), vec![Fe(0), Fe(0), Fe(1)]);
        assert_eq!(s.point(5), vec![Fe(0), Fe(1), Fe(0)]);
    }

    #[test]
    fn norm_examples() {
        let s = Space::new(FiniteField::with_order(3).unwrap(), 2).unwrap();
        assert_eq!(s.norm(&[Fe(0), Fe(0)]), Fe(0));
        assert_eq!(s.norm(&[Fe(1), Fe(1)]), Fe(2));
    }

    #[test]
    fn budget() {
        let s = Space::new(FiniteField::with_order(19).unwrap(), 6).unwrap();
        assert!(s.check_budget(DEFAULT_BUDGET).is_ok());
        assert!(matches!(s.check_budget(1000), Err(Error::BudgetExceeded { .. })));
        assert!(Space::new(FiniteField::with_order(3).unwrap(), 0).is_err());
    }
}
