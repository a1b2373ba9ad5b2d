//! Rearrangements, Luxemburg norms and maximal-operator conditions for
//! variable-exponent Lebesgue spaces, evaluated on piecewise-constant grids.

pub mod error;
pub mod conditions;
pub mod exponent;
pub mod families;
pub mod geometry;
mod quad;
pub mod norms;
pub mod operators;
pub mod rearrange;

pub use error::{Error, Result};
pub use exponent::{ExponentField, ExponentKind, ExponentSpec, PhiFamily};
pub use geometry::{Cube, CubeFamily, GridFunction};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    pub mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/exponents.md")]
    pub mod exponents {}
    #[doc = include_str!("../../../book/src/rearrangements.md")]
    pub mod rearrangements {}
    #[doc = include_str!("../../../book/src/norms.md")]
    pub mod norms {}
    #[doc = include_str!("../../../book/src/conditions.md")]
    pub mod conditions {}
    #[doc = include_str!("../../../book/src/operators.md")]
    pub mod operators {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
