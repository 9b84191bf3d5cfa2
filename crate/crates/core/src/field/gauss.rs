use num_complex::Complex64;

use super::FiniteField;
use crate::exec::Execution;

/// `G(η, χ) = Σ_{s≠0} η(s) χ(s)` by direct summation.
pub fn gauss_sum_direct(field: &FiniteField) -> Complex64 {
    Execution::Sequential.sum_complex_by(field.q() - 1, |i| {
        let s = super::Fe(i as u32 + 1);
        field.additive_character(s) * field.quadratic_character(s) as f64
    })
}

/// Closed form of the quadratic Gauss sum: `(−1)^{ℓ−1} √q` when `p ≡ 1 (mod 4)`
/// and `(−1)^{ℓ−1} i^ℓ √q` when `p ≡ 3 (mod 4)`.
pub fn gauss_sum_explicit(field: &FiniteField) -> Complex64 {
    let ell = field.degree();
    let sign = if ell % 2 == 1 { 1.0 } else { -1.0 };
    let root = (field.order() as f64).sqrt();
    let unit = if field.characteristic() % 4 == 1 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::i().powu(ell)
    };
    unit * (sign * root)
}
