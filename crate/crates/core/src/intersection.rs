//! Local intersection multiplicities of plane curves at rational points,
//! by Fulton's recursive algorithm, and rational intersection points.

use std::fmt;

use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::algebra::bivar;
use crate::algebra::{AffinePoint, Poly2, Rat, UPoly};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Multiplicity {
    Finite(u64),
    Infinite,
}

impl Multiplicity {
    pub fn finite(&self) -> Option<u64> {
        match self {
            Multiplicity::Finite(k) => Some(*k),
            Multiplicity::Infinite => None,
        }
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Finite(k) => write!(f, "{k}"),
            Multiplicity::Infinite => write!(f, "infinity"),
        }
    }
}

impl Serialize for Multiplicity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Multiplicity::Finite(k) => s.serialize_u64(*k),
            Multiplicity::Infinite => s.serialize_str("infinity"),
        }
    }
}

/// `I_p(F, G)`. Infinite exactly when `F` and `G` share a component
/// through `p`.
pub fn intersection_multiplicity(f: &Poly2, g: &Poly2, p: &AffinePoint) -> Multiplicity {
    let f0 = f.translate(&p.x, &p.y);
    let g0 = g.translate(&p.x, &p.y);
    multiplicity_at_origin(&f0, &g0)
}

pub fn multiplicity_at_origin(f: &Poly2, g: &Poly2) -> Multiplicity {
    if f.is_zero() || g.is_zero() {
        return Multiplicity::Infinite;
    }
    if !f.constant_term().is_zero() || !g.constant_term().is_zero() {
        return Multiplicity::Finite(0);
    }
    let h = bivar::gcd(f, g);
    if !h.is_constant() {
        if h.constant_term().is_zero() {
            return Multiplicity::Infinite;
        }
        // A common factor not through the origin is a unit in the local ring.
        let f1 = bivar::exact_div(f, &h).expect("gcd divides");
        let g1 = bivar::exact_div(g, &h).expect("gcd divides");
        return Multiplicity::Finite(fulton(f1, g1));
    }
    Multiplicity::Finite(fulton(f.clone(), g.clone()))
}

fn on_x_axis(p: &Poly2) -> UPoly {
    UPoly::from_poly2(&p.specialize(1, &Rat::zero()), 0).expect("y was eliminated")
}

/// Fulton's algorithm for `F`, `G` without a common component through 0.
fn fulton(mut f: Poly2, mut g: Poly2) -> u64 {
    let mut total = 0u64;
    loop {
        if !f.constant_term().is_zero() || !g.constant_term().is_zero() {
            return total;
        }
        let mut fx = on_x_axis(&f);
        let mut gx = on_x_axis(&g);
        if fx.is_zero() {
            std::mem::swap(&mut f, &mut g);
            std::mem::swap(&mut fx, &mut gx);
        }
        assert!(!fx.is_zero(), "common factor y survived gcd removal");
        if gx.is_zero() {
            // G = y H: I(F, G) = I(F, y) + I(F, H), with I(F, y) = ord_0 F(x, 0).
            let ord = fx.coeffs().iter().position(|c| !c.is_zero()).unwrap() as u64;
            total += ord;
            g = g.unshift(&[0, 1]);
            continue;
        }
        let (mut r, mut s) = (fx.degree().unwrap(), gx.degree().unwrap());
        if r > s {
            std::mem::swap(&mut f, &mut g);
            std::mem::swap(&mut fx, &mut gx);
            std::mem::swap(&mut r, &mut s);
        }
        // Lower deg G(x, 0) below s.
        let lead = Poly2::monomial([(s - r) as u32, 0], gx.lc());
        g = &g.scale(&fx.lc()) - &(&lead * &f);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntersectionPoint {
    pub point: AffinePoint,
    pub multiplicity: Multiplicity,
    /// One of the curves is singular at the point.
    pub singular: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntersectionSummary {
    pub points: Vec<IntersectionPoint>,
    /// Some intersection may lie at a point with irrational coordinates.
    pub non_rational: bool,
}

pub fn is_singular_at(f: &Poly2, p: &AffinePoint) -> bool {
    f.eval_at(&p.x, &p.y).is_zero()
        && f.derivative(0).eval_at(&p.x, &p.y).is_zero()
        && f.derivative(1).eval_at(&p.x, &p.y).is_zero()
}

/// All rational points of `F = G = 0` in the affine plane with their
/// multiplicities. Fails when the curves share a component.
pub fn intersection_points(f: &Poly2, g: &Poly2) -> Result<IntersectionSummary> {
    if f.is_constant() || g.is_constant() {
        return Ok(IntersectionSummary {
            points: Vec::new(),
            non_rational: false,
        });
    }
    if !bivar::gcd(f, g).is_constant() {
        return Err(Error::Invalid("curves share a component".into()));
    }
    let res = bivar::resultant_y(f, g);
    let mut non_rational = false;
    let factors = crate::algebra::factor::factor_univariate(&res);
    let mut xs = Vec::new();
    for (h, _) in &factors {
        if h.degree() == Some(1) {
            xs.push(-h.coeff(0));
        } else {
            non_rational = true;
        }
    }
    xs.sort();
    let fy = bivar::to_ypoly(f);
    let gy = bivar::to_ypoly(g);
    let mut points = Vec::new();
    for x0 in xs {
        let a = UPoly::from_coeffs(fy.iter().map(|c| c.eval(&x0)).collect());
        let b = UPoly::from_coeffs(gy.iter().map(|c| c.eval(&x0)).collect());
        let common = a.gcd(&b);
        if common.degree().unwrap_or(0) == 0 {
            continue;
        }
        let roots = common.rational_roots();
        if roots.len() < common.squarefree_part().degree().unwrap_or(0) {
            non_rational = true;
        }
        for y0 in roots {
            let p = AffinePoint::new(x0.clone(), y0);
            points.push(IntersectionPoint {
                multiplicity: intersection_multiplicity(f, g, &p),
                singular: is_singular_at(f, &p) || is_singular_at(g, &p),
                point: p,
            });
        }
    }
    Ok(IntersectionSummary { points, non_rational })
}
