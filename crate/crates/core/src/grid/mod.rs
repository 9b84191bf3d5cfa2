//! Functions on `F_q^d`: indexing, character transforms, measures and norms.

mod dyadic;
mod exponent;
mod function;
pub mod io;
mod measure;
mod space;

pub use dyadic::{dyadic_decompose, DyadicDecomposition};
pub use exponent::{Exponent, ExponentPair};
pub use function::GridFunction;
pub use measure::{dual_norm, inner_product, lp_norm, lp_norm_with, Measure};
pub(crate) use measure::abs_pow;
pub use space::{Space, DEFAULT_BUDGET};
