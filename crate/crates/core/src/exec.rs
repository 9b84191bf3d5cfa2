//! Execution strategy for the data-parallel inner loops.
//!
//! Every helper here has the same observable result under both strategies:
//! maps preserve order and sums follow one fixed pairwise tree, so a report
//! computed on eight workers matches a sequential run bit for bit.

use num_complex::Complex64;

/// Leaf length of the pairwise summation tree.
const LEAF: usize = 256;

/// Below this many leaves a subtree is summed on the current thread.
#[cfg(feature = "parallel")]
const PAR_LEAVES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Uses rayon when the `parallel` feature is enabled, otherwise falls
    /// back to [`Execution::Sequential`].
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// Calls `f(chunk_index, chunk)` for consecutive `chunk`-sized pieces.
    pub fn for_each_chunk_mut<T, F>(self, data: &mut [T], chunk: usize, f: F)
    where
        T: Send,
        F: Fn(usize, &mut [T]) + Sync + Send,
    {
        let chunk = chunk.max(1);
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            data.par_chunks_mut(chunk)
                .enumerate()
                .for_each(|(i, c)| f(i, c));
            return;
        }
        for (i, c) in data.chunks_mut(chunk).enumerate() {
            f(i, c);
        }
    }

    /// Order-preserving map over `0..n`.
    pub fn map_range<R, F>(self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    /// Order-preserving map over a slice.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        self.map_range(items.len(), |i| f(&items[i]))
    }

    /// Pairwise sum of `term(i)` for `i` in `0..n`.
    pub fn sum_by<F>(self, n: usize, term: F) -> f64
    where
        F: Fn(usize) -> f64 + Sync + Send,
    {
        self.tree(0, n, &term, 0.0, |a, b| a + b)
    }

    /// Pairwise complex sum of `term(i)` for `i` in `0..n`.
    pub fn sum_complex_by<F>(self, n: usize, term: F) -> Complex64
    where
        F: Fn(usize) -> Complex64 + Sync + Send,
    {
        self.tree(0, n, &term, Complex64::new(0.0, 0.0), |a, b| a + b)
    }

    /// Maximum of `term(i)` over `0..n` (0 for an empty range).
    pub fn max_by<F>(self, n: usize, term: F) -> f64
    where
        F: Fn(usize) -> f64 + Sync + Send,
    {
        self.tree(0, n, &term, 0.0, f64::max)
    }

    fn tree<T, F, C>(self, lo: usize, hi: usize, term: &F, zero: T, combine: C) -> T
    where
        T: Copy + Send + Sync,
        F: Fn(usize) -> T + Sync + Send,
        C: Fn(T, T) -> T + Copy + Sync + Send,
    {
        if hi - lo <= LEAF {
            let mut acc = zero;
            for i in lo..hi {
                acc = combine(acc, term(i));
            }
            return acc;
        }
        let mid = lo + (hi - lo) / 2;
        #[cfg(feature = "parallel")]
        if self.is_parallel() && hi - lo > PAR_LEAVES * LEAF {
            let (a, b) = rayon::join(
                || self.tree(lo, mid, term, zero, combine),
                || self.tree(mid, hi, term, zero, combine),
            );
            return combine(a, b);
        }
        let a = self.tree(lo, mid, term, zero, combine);
        let b = self.tree(mid, hi, term, zero, combine);
        combine(a, b)
    }
}

/// Pairwise sum of a slice.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    Execution::Sequential.sum_by(values.len(), |i| values[i])
}

/// Pairwise sum of a complex slice.
pub fn pairwise_sum_complex(values: &[Complex64]) -> Complex64 {
    Execution::Sequential.sum_complex_by(values.len(), |i| values[i])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree_bitwise() {
        let n = 1_000_003;
        let term = |i: usize| ((i as f64) * 0.37).sin() / (1.0 + i as f64);
        let a = Execution::Sequential.sum_by(n, term);
        let b = Execution::Parallel.sum_by(n, term);
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn pairwise_is_accurate() {
        let v = vec![0.1; 1 << 20];
        let s = pairwise_sum(&v);
        assert!((s - 104857.6).abs() < 1e-8);
    }

    #[test]
    fn map_preserves_order() {
        let out = Execution::Parallel.map_range(1000, |i| i * i);
        assert!(out.iter().enumerate().all(|(i, &v)| v == i * i));
    }

    #[test]
    fn empty_reductions() {
        assert_eq!(Execution::Parallel.sum_by(0, |_| 1.0), 0.0);
        assert_eq!(Execution::Parallel.max_by(0, |_| 1.0), 0.0);
    }
}
