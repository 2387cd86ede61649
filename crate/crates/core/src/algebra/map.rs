//! Points, polynomial maps of the plane and their rational inverses.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::parse::{parse_poly, parse_ratfunc};
use super::poly::{fmt_rat, Poly2, DEFAULT_DEGREE_CAP};
use super::ratfunc::{homogenized_substitution, RatFunc};
use super::Rat;
use crate::error::{Error, Result};

#[derive(Clone, Eq, PartialOrd, Ord)]
pub struct AffinePoint {
    pub x: Rat,
    pub y: Rat,
}

// `Rat` values are kept in lowest terms, so comparing raw numerators and
// denominators agrees with `Ratio`'s own `Eq` and is much cheaper than its
// continued-fraction `Hash`.
impl PartialEq for AffinePoint {
    fn eq(&self, other: &Self) -> bool {
        self.x.numer() == other.x.numer()
            && self.x.denom() == other.x.denom()
            && self.y.numer() == other.y.numer()
            && self.y.denom() == other.y.denom()
    }
}

impl std::hash::Hash for AffinePoint {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        for r in [&self.x, &self.y] {
            r.numer().hash(state);
            r.denom().hash(state);
        }
    }
}

impl AffinePoint {
    pub fn new(x: Rat, y: Rat) -> Self {
        AffinePoint { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        AffinePoint {
            x: Rat::from_integer(x.into()),
            y: Rat::from_integer(y.into()),
        }
    }

    pub fn origin() -> Self {
        Self::from_ints(0, 0)
    }

    /// Parses `"3/2, 5"`.
    pub fn parse(text: &str) -> Result<Self> {
        let v = super::parse::parse_rat_list(text)?;
        match <[Rat; 2]>::try_from(v) {
            Ok([x, y]) => Ok(AffinePoint { x, y }),
            Err(_) => Err(Error::Invalid(format!("'{text}' is not an affine point x,y"))),
        }
    }

    pub fn coords(&self) -> [Rat; 2] {
        [self.x.clone(), self.y.clone()]
    }

    /// Largest bit size among numerators and denominators.
    pub fn bits(&self) -> u64 {
        [&self.x, &self.y]
            .iter()
            .map(|c| c.numer().bits().max(c.denom().bits()))
            .max()
            .unwrap()
    }
}

impl fmt::Display for AffinePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", fmt_rat(&self.x), fmt_rat(&self.y))
    }
}

impl fmt::Debug for AffinePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl Serialize for AffinePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [fmt_rat(&self.x), fmt_rat(&self.y)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for AffinePoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = <[String; 2]>::deserialize(d)?;
        AffinePoint::parse(&format!("{},{}", v[0], v[1])).map_err(serde::de::Error::custom)
    }
}

/// A rational map of the plane `(g1, g2)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalMap {
    pub g1: RatFunc,
    pub g2: RatFunc,
}

impl RationalMap {
    pub fn new(g1: RatFunc, g2: RatFunc) -> Self {
        RationalMap { g1, g2 }
    }

    pub fn identity() -> Self {
        RationalMap {
            g1: RatFunc::from_poly(Poly2::x()),
            g2: RatFunc::from_poly(Poly2::y()),
        }
    }

    pub fn parse(g1: &str, g2: &str) -> Result<Self> {
        Ok(RationalMap {
            g1: parse_ratfunc(g1)?,
            g2: parse_ratfunc(g2)?,
        })
    }

    pub fn apply(&self, p: &AffinePoint) -> Option<AffinePoint> {
        Some(AffinePoint {
            x: self.g1.eval(&p.x, &p.y)?,
            y: self.g2.eval(&p.x, &p.y)?,
        })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &RationalMap, cap: u32) -> Result<RationalMap> {
        Ok(RationalMap {
            g1: self.g1.substitute(&other.g1, &other.g2, cap)?,
            g2: self.g2.substitute(&other.g1, &other.g2, cap)?,
        })
    }

    /// A point where some component has numerator and denominator vanishing.
    pub fn is_indeterminate_at(&self, p: &AffinePoint) -> bool {
        self.g1.is_indeterminate_at(&p.x, &p.y) || self.g2.is_indeterminate_at(&p.x, &p.y)
    }

    /// The denominators, whose zero sets carry the exceptional factors.
    pub fn denominators(&self) -> [&Poly2; 2] {
        [self.g1.den(), self.g2.den()]
    }
}

/// A polynomial map `(f1, f2)` of the affine plane, optionally carrying a
/// verified rational inverse.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMap {
    pub f1: Poly2,
    pub f2: Poly2,
    inverse: Option<RationalMap>,
}

impl PolyMap {
    pub fn new(f1: Poly2, f2: Poly2) -> Self {
        PolyMap {
            f1,
            f2,
            inverse: None,
        }
    }

    /// Attaches `inverse` after checking it with [`verify_inverse`].
    pub fn with_inverse(f1: Poly2, f2: Poly2, inverse: RationalMap) -> Result<Self> {
        let m = PolyMap::new(f1, f2);
        if !verify_inverse(&m, &inverse) {
            return Err(Error::InverseMismatch);
        }
        Ok(PolyMap {
            inverse: Some(inverse),
            ..m
        })
    }

    pub fn identity() -> Self {
        PolyMap {
            f1: Poly2::x(),
            f2: Poly2::y(),
            inverse: Some(RationalMap::identity()),
        }
    }

    pub fn parse(f1: &str, f2: &str) -> Result<Self> {
        Ok(PolyMap::new(parse_poly(f1)?, parse_poly(f2)?))
    }

    pub fn parse_with_inverse(f1: &str, f2: &str, g1: &str, g2: &str) -> Result<Self> {
        PolyMap::with_inverse(parse_poly(f1)?, parse_poly(f2)?, RationalMap::parse(g1, g2)?)
    }

    pub fn inverse(&self) -> Option<&RationalMap> {
        self.inverse.as_ref()
    }

    pub fn components(&self) -> [&Poly2; 2] {
        [&self.f1, &self.f2]
    }

    pub fn apply(&self, p: &AffinePoint) -> AffinePoint {
        apply_map(self, p)
    }

    /// Components of `self ∘ g`, without touching inverses.
    pub fn compose_components(&self, g: &PolyMap, cap: u32) -> Result<PolyMap> {
        let vals = [g.f1.clone(), g.f2.clone()];
        Ok(PolyMap::new(
            self.f1.substitute(&vals, cap)?,
            self.f2.substitute(&vals, cap)?,
        ))
    }

    /// `self^n` (components only); `n = 0` gives the identity.
    pub fn iterate(&self, n: u32, cap: u32) -> Result<PolyMap> {
        let mut acc = PolyMap::new(Poly2::x(), Poly2::y());
        for _ in 0..n {
            acc = self.compose_components(&acc, cap)?;
        }
        Ok(acc)
    }

    /// As a rational map with trivial denominators.
    pub fn as_rational(&self) -> RationalMap {
        RationalMap {
            g1: RatFunc::from_poly(self.f1.clone()),
            g2: RatFunc::from_poly(self.f2.clone()),
        }
    }

    /// The Jacobian determinant.
    pub fn jacobian(&self) -> Poly2 {
        &(&self.f1.derivative(0) * &self.f2.derivative(1))
            - &(&self.f1.derivative(1) * &self.f2.derivative(0))
    }

    pub fn to_def(&self) -> MapDef {
        MapDef {
            f1: self.f1.to_string(),
            f2: self.f2.to_string(),
            inverse: self.inverse.as_ref().map(|g| InverseDef {
                g1: g.g1.to_string(),
                g2: g.g2.to_string(),
            }),
        }
    }

    pub fn from_def(def: &MapDef) -> Result<Self> {
        let f1 = parse_poly(&def.f1)?;
        let f2 = parse_poly(&def.f2)?;
        match &def.inverse {
            None => Ok(PolyMap::new(f1, f2)),
            Some(inv) => PolyMap::with_inverse(f1, f2, RationalMap::parse(&inv.g1, &inv.g2)?),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let def: MapDef =
            serde_json::from_str(text).map_err(|e| Error::Invalid(format!("map JSON: {e}")))?;
        PolyMap::from_def(&def)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_def()).expect("map definition serializes")
    }
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.f1, self.f2)
    }
}

/// On-disk form of a map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDef {
    pub f1: String,
    pub f2: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse: Option<InverseDef>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InverseDef {
    pub g1: String,
    pub g2: String,
}

/// `f ∘ g`. The inverse of the result is `g⁻¹ ∘ f⁻¹` when both are known.
pub fn compose_map(f: &PolyMap, g: &PolyMap) -> Result<PolyMap> {
    compose_map_capped(f, g, DEFAULT_DEGREE_CAP)
}

pub fn compose_map_capped(f: &PolyMap, g: &PolyMap, cap: u32) -> Result<PolyMap> {
    let mut out = f.compose_components(g, cap)?;
    if let (Some(fi), Some(gi)) = (&f.inverse, &g.inverse) {
        out.inverse = Some(gi.compose(fi, cap)?);
    }
    Ok(out)
}

pub fn apply_map(f: &PolyMap, p: &AffinePoint) -> AffinePoint {
    let c = p.coords();
    AffinePoint {
        x: f.f1.eval(&c),
        y: f.f2.eval(&c),
    }
}

/// True iff `f ∘ g` and `g ∘ f` are both the identity as rational maps.
///
/// Both checks are done by cross-multiplication: `P(g) = N/D` is the
/// coordinate function `t` iff `N = t·D`.
pub fn verify_inverse(f: &PolyMap, g: &RationalMap) -> bool {
    verify_inverse_inner(f, g).unwrap_or(false)
}

fn verify_inverse_inner(f: &PolyMap, g: &RationalMap) -> Result<bool> {
    let cap = DEFAULT_DEGREE_CAP;
    let coords = [Poly2::x(), Poly2::y()];
    // f ∘ g
    for (fi, t) in [&f.f1, &f.f2].into_iter().zip(&coords) {
        let ax = fi.degree_in(0).unwrap_or(0);
        let ay = fi.degree_in(1).unwrap_or(0);
        let num = homogenized_substitution(fi, &g.g1, &g.g2, ax, ay, cap)?;
        let den = homogenized_substitution(&Poly2::one(), &g.g1, &g.g2, ax, ay, cap)?;
        if num != t * &den {
            return Ok(false);
        }
    }
    // g ∘ f
    let vals = [f.f1.clone(), f.f2.clone()];
    for (gi, t) in [&g.g1, &g.g2].into_iter().zip(&coords) {
        let n = gi.num().substitute(&vals, cap)?;
        let d = gi.den().substitute(&vals, cap)?;
        if d.is_zero() || n != t * &d {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Convenience constructor for rationals `n/d`.
pub fn rat(n: i64, d: i64) -> Rat {
    assert!(d != 0);
    Rat::new(n.into(), d.into())
}

impl PolyMap {
    /// True when `p` is fixed by the map.
    pub fn fixes(&self, p: &AffinePoint) -> bool {
        &apply_map(self, p) == p
    }

    /// Both components constant.
    pub fn is_constant(&self) -> bool {
        self.f1.is_constant() && self.f2.is_constant()
    }
}

impl AffinePoint {
    pub fn is_origin(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: &str, b: &str) -> PolyMap {
        PolyMap::parse(a, b).unwrap()
    }

    #[test]
    fn compose_with_identity() {
        let f = m("2*x", "x^3*y + x^5");
        assert_eq!(compose_map(&f, &PolyMap::identity()).unwrap().components(), f.components());
        assert_eq!(compose_map(&PolyMap::identity(), &f).unwrap().components(), f.components());
    }

    #[test]
    fn henon_square() {
        let h = m("y", "y^2 - x");
        let h2 = compose_map(&h, &h).unwrap();
        assert_eq!(h2.f1, parse_poly("y^2 - x").unwrap());
        assert_eq!(h2.f2, parse_poly("(y^2 - x)^2 - y").unwrap());
        assert_eq!(h2.f2.total_degree(), Some(4));
    }

    #[test]
    fn triangular_square() {
        let f = m("2*x", "x^3*y + x^5");
        let f2 = compose_map(&f, &f).unwrap();
        assert_eq!(f2.f1, parse_poly("4*x").unwrap());
        assert_eq!(f2.f2, parse_poly("8*x^6*y + 8*x^8 + 32*x^5").unwrap());
    }

    #[test]
    fn apply_examples() {
        let p = AffinePoint::new(rat(3, 2), rat(7, 1));
        assert_eq!(apply_map(&PolyMap::identity(), &p), p);
        assert_eq!(
            apply_map(&m("y", "y^2 - x"), &AffinePoint::origin()),
            AffinePoint::origin()
        );
        assert_eq!(
            apply_map(&m("x + 1", "-y"), &AffinePoint::from_ints(0, 1)),
            AffinePoint::from_ints(1, -1)
        );
    }

    #[test]
    fn verify_inverse_examples() {
        let shear = m("x", "y + x^2");
        assert!(verify_inverse(&shear, &RationalMap::parse("x", "y - x^2").unwrap()));
        let f = m("2*x", "x^3*y + x^5");
        let g = RationalMap::parse("x/2", "(y - (x/2)^5)/(x/2)^3").unwrap();
        assert!(verify_inverse(&f, &g));
        let sq = m("x", "y^2");
        assert!(!verify_inverse(&sq, &RationalMap::identity()));
        assert!(!verify_inverse(&sq, &RationalMap::parse("x", "y/2").unwrap()));
        assert!(!verify_inverse(&sq, &RationalMap::parse("x", "y^2").unwrap()));
    }

    #[test]
    fn mismatched_inverse_rejected() {
        assert_eq!(
            PolyMap::parse_with_inverse("x", "y + x^2", "x", "y + x^2"),
            Err(Error::InverseMismatch)
        );
    }

    #[test]
    fn composed_inverse_is_verified() {
        let f = PolyMap::parse_with_inverse("x", "y + x^2", "x", "y - x^2").unwrap();
        let g = PolyMap::parse_with_inverse("2*x", "x^3*y + x^5", "x/2", "(y - (x/2)^5)/(x/2)^3").unwrap();
        let fg = compose_map(&f, &g).unwrap();
        assert!(verify_inverse(&fg, fg.inverse().unwrap()));
    }

    #[test]
    fn json_roundtrip() {
        let f = PolyMap::parse_with_inverse("2*x", "x^3*y + x^5", "x/2", "(y - (x/2)^5)/(x/2)^3").unwrap();
        let back = PolyMap::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
        let plain = PolyMap::from_json(r#"{"f1": "y", "f2": "y^2 - x"}"#).unwrap();
        assert!(plain.inverse().is_none());
        assert!(PolyMap::from_json(r#"{"f1": "y"}"#).is_err());
    }

    #[test]
    fn point_parsing() {
        assert_eq!(AffinePoint::parse("3/2, 5").unwrap(), AffinePoint::new(rat(3, 2), rat(5, 1)));
        assert!(AffinePoint::parse("1,2,3").is_err());
        assert_eq!(AffinePoint::from_ints(1, -2).to_string(), "1,-2");
    }
}
