//! Dense linear algebra over `F_q`.

use crate::field::{Fe, FiniteField};

/// Row echelon form in place; returns the pivot columns.
fn echelon(field: &FiniteField, rows: &mut [Vec<Fe>]) -> Vec<usize> {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..cols {
        let Some(p) = (top..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(top, p);
        let inv = field.inv(rows[top][col]).expect("pivot is nonzero");
        for c in rows[top].iter_mut() {
            *c = field.mul(*c, inv);
        }
        let pivot_row = rows[top].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != top && !row[col].is_zero() {
                let factor = row[col];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = field.sub(*x, field.mul(factor, y));
                }
            }
        }
        pivots.push(col);
        top += 1;
        if top == rows.len() {
            break;
        }
    }
    pivots
}

pub fn rank(field: &FiniteField, vectors: &[Vec<Fe>]) -> usize {
    let mut rows = vectors.to_vec();
    echelon(field, &mut rows).len()
}

/// A maximal linearly independent subsequence, greedily from the front.
pub fn independent_subset(field: &FiniteField, vectors: &[Vec<Fe>]) -> Vec<Vec<Fe>> {
    let mut kept: Vec<Vec<Fe>> = Vec::new();
    for v in vectors {
        kept.push(v.clone());
        if rank(field, &kept) < kept.len() {
            kept.pop();
        }
    }
    kept
}

/// Coefficients `a` with `Σ a_i basis_i = x`, if `x` is in the span.
/// `basis` must be linearly independent.
pub fn coordinates(field: &FiniteField, basis: &[Vec<Fe>], x: &[Fe]) -> Option<Vec<Fe>> {
    let k = basis.len();
    let n = x.len();
    // Rows are the coordinates of the system `B a = x`, augmented.
    let mut rows: Vec<Vec<Fe>> = (0..n)
        .map(|i| {
            let mut row: Vec<Fe> = basis.iter().map(|b| b[i]).collect();
            row.push(x[i]);
            row
        })
        .collect();
    let pivots = echelon(field, &mut rows);
    if pivots.contains(&k) {
        return None;
    }
    let mut a = vec![Fe::ZERO; k];
    for (r, &col) in pivots.iter().enumerate() {
        a[col] = rows[r][k];
    }
    Some(a)
}

/// A square matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub n: usize,
    pub entries: Vec<Fe>,
}

impl Matrix {
    pub fn from_columns(columns: &[Vec<Fe>]) -> Self {
        let n = columns.len();
        let mut entries = vec![Fe::ZERO; n * n];
        for (j, col) in columns.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                entries[i * n + j] = v;
            }
        }
        Matrix { n, entries }
    }

    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.entries[i * self.n + j]
    }

    pub fn column(&self, j: usize) -> Vec<Fe> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn rows(&self) -> Vec<Vec<Fe>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn apply(&self, field: &FiniteField, x: &[Fe]) -> Vec<Fe> {
        (0..self.n)
            .map(|i| {
                (0..self.n).fold(Fe::ZERO, |acc, j| field.add(acc, field.mul(self.get(i, j), x[j])))
            })
            .collect()
    }

    pub fn determinant(&self, field: &FiniteField) -> Fe {
        let mut rows = self.rows();
        let mut det = Fe::ONE;
        for col in 0..self.n {
            let Some(p) = (col..self.n).find(|&r| !rows[r][col].is_zero()) else {
                return Fe::ZERO;
            };
            if p != col {
                rows.swap(p, col);
                det = field.neg(det);
            }
            let pivot = rows[col][col];
            det = field.mul(det, pivot);
            let inv = field.inv(pivot).expect("pivot is nonzero");
            let (top, below) = rows.split_at_mut(col + 1);
            let pivot_row = &top[col];
            for row in below {
                let factor = field.mul(row[col], inv);
                if factor.is_zero() {
                    continue;
                }
                for (x, &y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x = field.sub(*x, field.mul(factor, y));
                }
            }
        }
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[u32]) -> Vec<Fe> {
        xs.iter().map(|&x| Fe(x)).collect()
    }

    #[test]
    fn rank_and_subset() {
        let f = FiniteField::with_order(5).unwrap();
        let vs = vec![v(&[1, 2, 0]), v(&[2, 4, 0]), v(&[0, 0, 1]), v(&[1, 2, 1])];
        assert_eq!(rank(&f, &vs), 2);
        assert_eq!(independent_subset(&f, &vs), vec![v(&[1, 2, 0]), v(&[0, 0, 1])]);
    }

    #[test]
    fn solve_coordinates() {
        let f = FiniteField::with_order(7).unwrap();
        let basis = vec![v(&[1, 0, 3]), v(&[0, 1, 5])];
        // 2·b0 + 4·b1 = (2, 4, 6 + 20 = 26 ≡ 5)
        assert_eq!(coordinates(&f, &basis, &v(&[2, 4, 5])), Some(v(&[2, 4])));
        assert_eq!(coordinates(&f, &basis, &v(&[2, 4, 6])), None);
    }

    #[test]
    fn determinant() {
        let f = FiniteField::with_order(3).unwrap();
        let m = Matrix::from_columns(&[v(&[1, 1]), v(&[1, 2])]);
        // det [[1,1],[1,2]] = 1
        assert_eq!(m.determinant(&f), Fe(1));
        let singular = Matrix::from_columns(&[v(&[1, 2]), v(&[2, 1])]);
        assert_eq!(singular.determinant(&f), Fe(0));
        let swapped = Matrix::from_columns(&[v(&[0, 1]), v(&[1, 0])]);
        assert_eq!(swapped.determinant(&f), Fe(2));
    }
}
