//! Classical, free and Boolean max-convolutions of distribution functions,
//! their homomorphisms and semigroups, extreme-value families, and a small
//! numerical laboratory for the associated limit theorems.

// `!(x > 0.0)` style guards deliberately reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod distfn;
pub mod error;
pub mod expr;
pub mod families;
pub mod limit_lab;
pub mod scalar;
pub mod scenarios;
pub mod tails;
pub mod transforms;

pub use distfn::{DistFn, DomainClass, EvalGrid, MaxConvolution, Transport};
pub use error::{Error, Result};
pub use scalar::UnitValue;
