//! Exact-arithmetic workbench for the dynamics of birational polynomial maps
//! of the affine plane.

pub mod algebra;
pub mod batch;
pub mod arith;
pub mod degrees;
pub mod dml;
pub mod error;
pub mod heights;
pub mod hirzebruch;
pub mod curves;
pub mod intersection;
pub mod metrics;

pub use algebra::{AffinePoint, PolyMap, Poly2, Rat, RatFunc, UPoly};
pub use error::{Error, Result};
