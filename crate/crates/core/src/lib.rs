//! Numerical laboratory for Fourier restriction and extension estimates over
//! finite fields.
//!
//! The crate is organised bottom-up:
//!
//! - [`field`]: arithmetic in `F_q` for odd `q = p^ℓ`, the canonical additive
//!   character, the quadratic character and Gauss sums.
//! - [`grid`]: complex functions on `F_q^d`, axis-factorised Fourier
//!   transforms, `L^p` norms against the three standard measures, dual norms
//!   and dyadic level-set decompositions.
//! - [`variety`]: spheres and paraboloids, their surface measures, explicit
//!   sphere transforms and subspace constructions (isotropic subspaces,
//!   affine subspaces on non-zero spheres).
//! - [`estimates`]: the counting quantities (additive energy, zero-distance
//!   pairs, incidences, ...) and the inequality checks built on them.
//! - [`harness`]: seeded samplers, experiment configuration, the named
//!   verification suites and their JSON/CSV reports.
//!
//! Heavy loops go through [`exec`], which dispatches to rayon when the
//! `parallel` feature is enabled and runs sequentially otherwise. All big
//! reductions use a fixed pairwise summation tree, so both paths produce
//! bit-identical results.

pub mod error;
pub mod estimates;
pub mod exec;
pub mod field;
pub mod grid;
pub mod harness;
pub mod variety;

pub use error::{Error, Result};
pub use exec::Execution;
pub use field::{Fe, FiniteField};
pub use grid::{Exponent, ExponentPair, GridFunction, Measure, Space};
pub use variety::{AffineSubspace, QuadraticVariety, VarietyKind};

pub use num_complex::Complex64;
