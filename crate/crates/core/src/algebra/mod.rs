//! Exact polynomial algebra over Q.

pub mod bivar;
pub mod factor;
pub mod map;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod upoly;

/// Exact rational numbers.
pub type Rat = num_rational::BigRational;

pub use map::{compose_map, verify_inverse, AffinePoint, PolyMap, RationalMap};
pub use parse::{parse_poly, parse_rat, parse_ratfunc};
pub use poly::{MPoly, Poly2, Poly4, DEFAULT_DEGREE_CAP};
pub use ratfunc::RatFunc;
pub use upoly::UPoly;
