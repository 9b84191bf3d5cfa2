//! Finite fields `F_q`, `q = p^ℓ` odd, with their canonical characters.
//!
//! Elements are stored as table indices. The index of
//! `c_0 + c_1 x + ... + c_{ℓ-1} x^{ℓ-1}` is `Σ c_i p^i`, so index order is the
//! lexicographic order on the coefficient vector read from the top degree
//! down. Every enumeration in the crate uses this order. The prime subfield
//! is exactly the indices `0..p`.

mod gauss;
pub mod poly;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use gauss::{gauss_sum_direct, gauss_sum_explicit};

/// Largest field order for which arithmetic tables are built.
pub const MAX_FIELD_ORDER: u32 = 1024;

/// A field element, as its canonical index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Fe(pub u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    p: u32,
    ell: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    trace: Vec<u32>,
    eta: Vec<i8>,
    chi: Vec<Complex64>,
}

/// Shared handle to the arithmetic tables of one field.
#[derive(Clone)]
pub struct FiniteField {
    t: Arc<Tables>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteField")
            .field("p", &self.t.p)
            .field("ell", &self.t.ell)
            .field("modulus", &self.t.modulus)
            .finish()
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.t, &other.t)
            || (self.t.p == other.t.p && self.t.ell == other.t.ell && self.t.modulus == other.t.modulus)
    }
}

impl Eq for FiniteField {}

impl FiniteField {
    /// Builds `F_{p^ℓ}` with the lexicographically smallest monic irreducible
    /// modulus of degree `ℓ`.
    pub fn new(p: u32, ell: u32) -> Result<Self> {
        if ell < 1 {
            return Err(Error::InvalidArgument(format!("extension degree must be ≥ 1, got {ell}")));
        }
        if p == 2 {
            return Err(Error::InvalidField("characteristic 2 is not supported".into()));
        }
        if !poly::is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        let q = (p as u64).checked_pow(ell).filter(|&q| q <= MAX_FIELD_ORDER as u64).ok_or_else(|| {
            Error::BudgetExceeded { size: (p as u128).pow(ell), budget: MAX_FIELD_ORDER as usize }
        })? as u32;
        let modulus = poly::smallest_irreducible(p, ell);
        Ok(Self::build(p, ell, q, modulus))
    }

    /// Builds the field of order `q`, which must be an odd prime power.
    pub fn with_order(q: u32) -> Result<Self> {
        let (p, ell) = poly::prime_power(q)
            .ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        Self::new(p, ell)
    }

    fn build(p: u32, ell: u32, q: u32, modulus: Vec<u32>) -> Self {
        let n = q as usize;
        let len = ell as usize;
        let coeffs: Vec<Vec<u32>> = (0..q).map(|i| poly::digits(i, p, len)).collect();
        let encode = |c: &[u32]| -> u32 {
            c.iter().rev().fold(0u32, |acc, &x| acc * p + x)
        };

        let mut add = vec![0u32; n * n];
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            for b in a..n {
                let s: Vec<u32> = coeffs[a].iter().zip(&coeffs[b]).map(|(x, y)| (x + y) % p).collect();
                let s = encode(&s);
                let m = if len == 1 {
                    ((a as u64 * b as u64) % p as u64) as u32
                } else {
                    let mut r = poly::mul_mod(&coeffs[a], &coeffs[b], &modulus, p);
                    r.resize(len, 0);
                    encode(&r)
                };
                add[a * n + b] = s;
                add[b * n + a] = s;
                mul[a * n + b] = m;
                mul[b * n + a] = m;
            }
        }
        let neg: Vec<u32> = (0..n).map(|a| (0..n).find(|&b| add[a * n + b] == 0).unwrap() as u32).collect();
        let mut inv = vec![0u32; n];
        for a in 1..n {
            inv[a] = (1..n).find(|&b| mul[a * n + b] == 1).expect("nonzero elements are invertible") as u32;
        }

        let pow = |mut base: u32, mut e: u64| -> u32 {
            let mut acc = 1u32;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mul[acc as usize * n + base as usize];
                }
                base = mul[base as usize * n + base as usize];
                e >>= 1;
            }
            acc
        };

        let mut trace = vec![0u32; n];
        for (x, tr) in trace.iter_mut().enumerate() {
            let mut acc = 0u32;
            let mut term = x as u32;
            for _ in 0..ell {
                acc = add[acc as usize * n + term as usize];
                term = pow(term, p as u64);
            }
            debug_assert!(acc < p, "trace must land in the prime field");
            *tr = acc;
        }

        let minus_one = neg[1];
        let half = (q as u64 - 1) / 2;
        let eta: Vec<i8> = (0..n)
            .map(|x| match x {
                0 => 0,
                _ => {
                    let e = pow(x as u32, half);
                    if e == 1 {
                        1
                    } else {
                        debug_assert_eq!(e, minus_one);
                        -1
                    }
                }
            })
            .collect();

        let roots: Vec<Complex64> =
            (0..p).map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / p as f64)).collect();
        let chi = trace.iter().map(|&t| roots[t as usize]).collect();

        FiniteField {
            t: Arc::new(Tables { p, ell, q, modulus, add, mul, neg, inv, trace, eta, chi }),
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.t.p
    }

    pub fn degree(&self) -> u32 {
        self.t.ell
    }

    pub fn order(&self) -> u32 {
        self.t.q
    }

    /// Size as `usize`, for indexing.
    #[inline]
    pub fn q(&self) -> usize {
        self.t.q as usize
    }

    /// Monic modulus, coefficients low degree first (leading 1 included).
    pub fn modulus(&self) -> &[u32] {
        &self.t.modulus
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + Clone {
        (0..self.t.q).map(Fe)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Fe> + Clone {
        (1..self.t.q).map(Fe)
    }

    /// Element with the given canonical index.
    pub fn element(&self, index: u32) -> Result<Fe> {
        if index < self.t.q {
            Ok(Fe(index))
        } else {
            Err(Error::InvalidArgument(format!("index {index} outside F_{}", self.t.q)))
        }
    }

    /// Embeds an integer through the prime subfield.
    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.t.p as i64) as u32)
    }

    /// Coefficients `c_0..c_{ℓ-1}` of the polynomial representative.
    pub fn coefficients(&self, x: Fe) -> Vec<u32> {
        poly::digits(x.0, self.t.p, self.t.ell as usize)
    }

    pub fn from_coefficients(&self, c: &[u32]) -> Result<Fe> {
        if c.len() != self.t.ell as usize || c.iter().any(|&v| v >= self.t.p) {
            return Err(Error::InvalidArgument(format!("bad coefficient vector {c:?}")));
        }
        Ok(Fe(c.iter().rev().fold(0, |acc, &v| acc * self.t.p + v)))
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.t.add[a.index() * self.q() + b.index()])
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        Fe(self.t.neg[a.index()])
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        Fe(self.t.mul[a.index() * self.q() + b.index()])
    }

    #[inline]
    pub fn square(&self, a: Fe) -> Fe {
        self.mul(a, a)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Fe) -> Option<Fe> {
        (!a.is_zero()).then(|| Fe(self.t.inv[a.index()]))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Option<Fe> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    pub fn pow(&self, mut base: Fe, mut e: u64) -> Fe {
        let mut acc = Fe::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Absolute trace `x + x^p + ... + x^{p^{ℓ-1}}`, as a residue mod `p`.
    #[inline]
    pub fn trace(&self, x: Fe) -> u32 {
        self.t.trace[x.index()]
    }

    /// Canonical additive character `exp(2πi Tr(x) / p)`.
    #[inline]
    pub fn additive_character(&self, x: Fe) -> Complex64 {
        self.t.chi[x.index()]
    }

    /// Quadratic character: 0 at zero, +1 on nonzero squares, −1 otherwise.
    #[inline]
    pub fn quadratic_character(&self, x: Fe) -> i8 {
        self.t.eta[x.index()]
    }

    pub fn is_square(&self, x: Fe) -> bool {
        self.quadratic_character(x) >= 0
    }

    /// Some square root of `x`, scanning in canonical order.
    pub fn sqrt(&self, x: Fe) -> Option<Fe> {
        self.elements().find(|&y| self.square(y) == x)
    }

    /// The first nonsquare in canonical order.
    pub fn smallest_nonsquare(&self) -> Fe {
        self.nonzero().find(|&x| self.quadratic_character(x) < 0).expect("odd fields have nonsquares")
    }

    /// `χ(a·b)` for all pairs, row-major: the one-dimensional transform kernel.
    pub fn product_character_table(&self) -> Vec<Complex64> {
        let n = self.q();
        let mut out = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                out.push(self.t.chi[self.t.mul[a * n + b] as usize]);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::pairwise_sum_complex;
    use proptest::prelude::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn creation_errors() {
        assert!(matches!(FiniteField::new(2, 1), Err(Error::InvalidField(_))));
        assert!(matches!(FiniteField::new(9, 1), Err(Error::InvalidField(_))));
        assert!(matches!(FiniteField::new(3, 0), Err(Error::InvalidArgument(_))));
        assert!(matches!(FiniteField::new(3, 9), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn prime_field_f3() {
        let f = FiniteField::new(3, 1).unwrap();
        assert_eq!(f.elements().collect::<Vec<_>>(), vec![Fe(0), Fe(1), Fe(2)]);
        assert_eq!(f.trace(Fe(2)), 2);
        assert!(close(f.additive_character(Fe(0)), Complex64::new(1.0, 0.0)));
        assert_eq!(f.quadratic_character(Fe(1)), 1);
        assert_eq!(f.quadratic_character(Fe(2)), -1);
    }

    #[test]
    fn f5_character_at_one() {
        let f = FiniteField::new(5, 1).unwrap();
        let expected = Complex64::from_polar(1.0, 2.0 * PI / 5.0);
        assert!(close(f.additive_character(Fe(1)), expected));
    }

    #[test]
    fn f9_structure() {
        let f = FiniteField::new(3, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        assert_eq!(f.trace(Fe::ONE), 2);
        // x is a root of x^2 + 1; Tr(x) = x + x^3 = x - x = 0.
        let x = f.from_coefficients(&[0, 1]).unwrap();
        let direct = f.add(x, f.pow(x, 3));
        assert_eq!(direct, Fe::ZERO);
        assert_eq!(f.trace(x), 0);
        let total = pairwise_sum_complex(&f.elements().map(|e| f.additive_character(e)).collect::<Vec<_>>());
        assert!(total.norm() < 1e-12);
    }

    #[test]
    fn eta_matches_square_enumeration() {
        for q in [3, 5, 7, 9, 25, 27, 49] {
            let f = FiniteField::with_order(q).unwrap();
            let squares: std::collections::HashSet<Fe> = f.nonzero().map(|x| f.square(x)).collect();
            for x in f.nonzero() {
                let expected = if squares.contains(&x) { 1 } else { -1 };
                assert_eq!(f.quadratic_character(x), expected, "q={q}, x={x}");
                let power = f.pow(x, (q as u64 - 1) / 2);
                assert_eq!(power == Fe::ONE, expected == 1);
            }
        }
    }

    #[test]
    fn every_nonzero_element_invertible() {
        let f = FiniteField::with_order(27).unwrap();
        for x in f.nonzero() {
            assert_eq!(f.mul(x, f.inv(x).unwrap()), Fe::ONE);
        }
        assert_eq!(f.inv(Fe::ZERO), None);
    }

    fn field_strategy() -> impl Strategy<Value = FiniteField> {
        prop::sample::select(vec![3u32, 5, 7, 9, 11, 25, 27]).prop_map(|q| FiniteField::with_order(q).unwrap())
    }

    proptest! {
        #[test]
        fn trace_and_character_are_additive(f in field_strategy(), a in 0u32..1000, b in 0u32..1000) {
            let (x, y) = (Fe(a % f.order()), Fe(b % f.order()));
            let p = f.characteristic();
            prop_assert_eq!(f.trace(f.add(x, y)), (f.trace(x) + f.trace(y)) % p);
            prop_assert!(close(f.additive_character(f.add(x, y)), f.additive_character(x) * f.additive_character(y)));
            prop_assert!((f.additive_character(x).norm() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn eta_is_multiplicative(f in field_strategy(), a in 1u32..1000, b in 1u32..1000) {
            let x = Fe(1 + a % (f.order() - 1));
            let y = Fe(1 + b % (f.order() - 1));
            prop_assert_eq!(f.quadratic_character(f.mul(x, y)), f.quadratic_character(x) * f.quadratic_character(y));
        }

        #[test]
        fn field_axioms(f in field_strategy(), a in 0u32..1000, b in 0u32..1000, c in 0u32..1000) {
            let (x, y, z) = (Fe(a % f.order()), Fe(b % f.order()), Fe(c % f.order()));
            prop_assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
            prop_assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
            prop_assert_eq!(f.sub(f.add(x, y), y), x);
        }
    }
}
