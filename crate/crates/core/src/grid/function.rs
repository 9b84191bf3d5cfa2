use num_complex::Complex64;

use super::space::Space;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::field::Fe;

/// A complex-valued function on `F_q^d`, stored densely in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    space: Space,
    values: Vec<Complex64>,
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Target chunk length for one parallel task in an axis pass.
const TASK_LEN: usize = 4096;

impl GridFunction {
    pub fn zeros(space: &Space) -> Self {
        GridFunction { space: space.clone(), values: vec![ZERO; space.size()] }
    }

    pub fn constant(space: &Space, c: Complex64) -> Self {
        GridFunction { space: space.clone(), values: vec![c; space.size()] }
    }

    pub fn from_values(space: &Space, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != space.size() {
            return Err(Error::Mismatch(format!("{} values for a grid of {} points", values.len(), space.size())));
        }
        Ok(GridFunction { space: space.clone(), values })
    }

    pub fn from_fn<F: FnMut(&[Fe]) -> Complex64>(space: &Space, mut f: F) -> Self {
        let mut x = space.origin();
        let values = (0..space.size())
            .map(|i| {
                space.decode_into(i, &mut x);
                f(&x)
            })
            .collect();
        GridFunction { space: space.clone(), values }
    }

    /// Indicator of a set of canonical indices.
    pub fn indicator<I: IntoIterator<Item = usize>>(space: &Space, indices: I) -> Self {
        let mut g = Self::zeros(space);
        for i in indices {
            g.values[i] = ONE;
        }
        g
    }

    pub fn point_mass(space: &Space, x: &[Fe]) -> Self {
        Self::indicator(space, [space.index(x)])
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, index: usize) -> Complex64 {
        self.values[index]
    }

    pub fn at(&self, x: &[Fe]) -> Complex64 {
        self.values[self.space.index(x)]
    }

    pub fn set(&mut self, x: &[Fe], v: Complex64) {
        let i = self.space.index(x);
        self.values[i] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == ZERO)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Self {
        GridFunction { space: self.space.clone(), values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn scaled(&self, c: f64) -> Self {
        self.map(|v| v * c)
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    pub fn mul(&self, other: &GridFunction) -> Result<Self> {
        self.same_domain(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Ok(GridFunction { space: self.space.clone(), values })
    }

    pub fn same_domain(&self, other: &GridFunction) -> Result<()> {
        if self.space != other.space {
            return Err(Error::Mismatch(format!(
                "F_{}^{} vs F_{}^{}",
                self.space.q(),
                self.space.dim(),
                other.space.q(),
                other.space.dim()
            )));
        }
        Ok(())
    }

    /// Largest pointwise distance to `other`.
    pub fn max_distance(&self, other: &GridFunction) -> Result<f64> {
        self.same_domain(other)?;
        Ok(self.values.iter().zip(&other.values).fold(0.0, |m, (a, b)| m.max((a - b).norm())))
    }

    /// `ĝ(x) = Σ_m g(m) χ(−x·m)`.
    pub fn fourier_forward(&self) -> Self {
        self.fourier_forward_with(Execution::default())
    }

    pub fn fourier_forward_with(&self, exec: Execution) -> Self {
        self.transform(true, exec)
    }

    /// `f^∨(m) = q^{−d} Σ_x f(x) χ(m·x)`.
    pub fn fourier_inverse(&self) -> Self {
        self.fourier_inverse_with(Execution::default())
    }

    pub fn fourier_inverse_with(&self, exec: Execution) -> Self {
        let mut out = self.transform(false, exec);
        let scale = (self.space.size() as f64).recip();
        for v in out.values.iter_mut() {
            *v *= scale;
        }
        out
    }

    /// Unnormalised character transform, one axis at a time.
    fn transform(&self, negate: bool, exec: Execution) -> Self {
        let field = self.space.field();
        let q = field.q();
        let d = self.space.dim();
        let mut kernel = field.product_character_table();
        if negate {
            kernel.iter_mut().for_each(|k| *k = k.conj());
        }

        let n = self.values.len();
        let mut src = self.values.clone();
        let mut dst = vec![ZERO; n];
        for axis in 0..d {
            let stride = q.pow((d - 1 - axis) as u32);
            // Output rows are `stride`-long runs sharing every coordinate but
            // this axis; group whole rows so tasks are not too small.
            let mut rows_per_task = 1usize;
            while stride * rows_per_task < TASK_LEN && (n / stride).is_multiple_of(rows_per_task * q) {
                rows_per_task *= q;
            }
            let chunk = stride * rows_per_task;
            let src_ref = &src;
            let kernel = &kernel;
            exec.for_each_chunk_mut(&mut dst, chunk, |task, out| {
                let first_row = task * rows_per_task;
                for (k, row) in out.chunks_mut(stride).enumerate() {
                    let r = first_row + k;
                    let a = r % q;
                    let block = (r / q) * q * stride;
                    row.fill(ZERO);
                    let krow = &kernel[a * q..(a + 1) * q];
                    for (b, &kab) in krow.iter().enumerate() {
                        let input = &src_ref[block + b * stride..block + (b + 1) * stride];
                        for (o, &v) in row.iter_mut().zip(input) {
                            *o += kab * v;
                        }
                    }
                }
            });
            std::mem::swap(&mut src, &mut dst);
        }
        GridFunction { space: self.space.clone(), values: src }
    }
}
