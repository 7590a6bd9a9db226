//! Special-function engine for bilinear generating functions of classical and
//! basic hypergeometric orthogonal polynomials.

// Coefficient tables keep their printed digits; `!(x < y)` forms are NaN checks.
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod dd;
pub mod error;
pub mod exact;
pub mod hyper;
pub mod identities;
pub mod kernels;
pub mod polys;
pub mod quadrature;
pub mod real;
pub mod series_core;

pub use dd::Dd;
pub use error::{QklError, Result};
pub use real::{ComplexValue, CxExt, PrecisionMode, Real};
