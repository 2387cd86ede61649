//! Triangular maps `(ax + b, A(x)y + B(x))` and their extensions to the
//! Hirzebruch surfaces `F_n`.
//!
//! A point of `F_n` is a class `[x1, x2, x3, x4]` under
//! `(x1, x2, x3, x4) ~ (λx1, λx2, μx3, μλ^(-n)x4)`, excluding
//! `x1 = x2 = 0` and `x3 = x4 = 0`. The affine plane sits inside as
//! `(x, y) -> [x, 1, y, 1]`; the fiber at infinity is `F_∞ = {x2 = 0}`.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::bivar::to_ypoly;
use crate::algebra::map::rat;
use crate::algebra::poly::fmt_rat;
use crate::algebra::{AffinePoint, Poly2, Poly4, PolyMap, Rat, RatFunc, RationalMap, UPoly};
use crate::error::{Error, Result};

/// `f(x, y) = (ax + b, A(x)y + B(x))` with `a != 0` and `deg A >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangularMap {
    pub a: Rat,
    pub b: Rat,
    pub a_poly: UPoly,
    pub b_poly: UPoly,
}

impl TriangularMap {
    pub fn new(a: Rat, b: Rat, a_poly: UPoly, b_poly: UPoly) -> Result<Self> {
        if a.is_zero() || a_poly.degree().unwrap_or(0) == 0 {
            return Err(Error::NotTriangular);
        }
        Ok(TriangularMap { a, b, a_poly, b_poly })
    }

    /// Reads off `(a, b, A, B)` from a polynomial map.
    pub fn from_map(f: &PolyMap) -> Result<Self> {
        if f.f1.degree_in(1).unwrap_or(0) > 0 || f.f1.total_degree().unwrap_or(0) > 1 {
            return Err(Error::NotTriangular);
        }
        if f.f2.degree_in(1) != Some(1) {
            return Err(Error::NotTriangular);
        }
        let cols = to_ypoly(&f.f2);
        TriangularMap::new(
            f.f1.coeff(&[1, 0]),
            f.f1.constant_term(),
            cols[1].clone(),
            cols[0].clone(),
        )
    }

    /// The map with its inverse
    /// `((x - b)/a, (y - B((x - b)/a)) / A((x - b)/a))` attached.
    pub fn to_map(&self) -> PolyMap {
        let f1 = Poly2::from_terms([([1, 0], self.a.clone()), ([0, 0], self.b.clone())]);
        let f2 = &(&self.a_poly.to_poly2(0) * &Poly2::y()) + &self.b_poly.to_poly2(0);
        PolyMap::with_inverse(f1, f2, self.inverse()).expect("triangular inverse verifies")
    }

    pub fn inverse(&self) -> RationalMap {
        let inv_a = self.a.recip();
        let shift = -(&self.b * &inv_a);
        let g1 = UPoly::from_coeffs(vec![shift.clone(), inv_a.clone()]).to_poly2(0);
        let a_at = self.a_poly.compose_linear(&inv_a, &shift).to_poly2(0);
        let b_at = self.b_poly.compose_linear(&inv_a, &shift).to_poly2(0);
        RationalMap::new(
            RatFunc::from_poly(g1),
            RatFunc::new(&Poly2::y() - &b_at, a_at).expect("A is nonzero"),
        )
    }

    pub fn deg_a(&self) -> u32 {
        self.a_poly.degree().unwrap_or(0) as u32
    }

    /// Degree of `B`, `None` when `B = 0`.
    pub fn deg_b(&self) -> Option<u32> {
        self.b_poly.degree().map(|d| d as u32)
    }

    pub fn stability_threshold(&self) -> u32 {
        stability_threshold(&self.a_poly, &self.b_poly)
    }

    pub fn apply(&self, p: &AffinePoint) -> AffinePoint {
        AffinePoint::new(
            &self.a * &p.x + &self.b,
            self.a_poly.eval(&p.x) * &p.y + self.b_poly.eval(&p.x),
        )
    }
}

/// `max(0, deg B - deg A + 1)`; a zero `B` gives 0.
pub fn stability_threshold(a_poly: &UPoly, b_poly: &UPoly) -> u32 {
    let da = a_poly.degree().unwrap_or(0) as i64;
    match b_poly.degree() {
        None => 0,
        Some(db) => (db as i64 - da + 1).max(0) as u32,
    }
}

/// Canonical representative of a point of `F_n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FnPoint {
    pub n: u32,
    pub coords: [Rat; 4],
}

impl FnPoint {
    /// `[1, 0, 1, 0]`, the point to which `F_∞` is contracted.
    pub fn q(n: u32) -> Self {
        FnPoint {
            n,
            coords: [Rat::one(), Rat::zero(), Rat::one(), Rat::zero()],
        }
    }

    pub fn from_ints(raw: [i64; 4], n: u32) -> Result<Self> {
        normalize_fn_point(raw.map(|c| rat(c, 1)), n)
    }

    /// The affine point `(x1/x2, x3/(x2^n x4))` when `x2, x4 != 0`.
    pub fn to_affine(&self) -> Option<AffinePoint> {
        let [x1, x2, x3, x4] = &self.coords;
        if x2.is_zero() || x4.is_zero() {
            return None;
        }
        let x2n = pow_rat(x2, self.n);
        Some(AffinePoint::new(x1 / x2, x3 / (x2n * x4)))
    }
}

impl fmt::Display for FnPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(fmt_rat).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl fmt::Debug for FnPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}{}", self.n, self)
    }
}

impl Serialize for FnPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coords: Vec<String> = self.coords.iter().map(fmt_rat).collect();
        (self.n, coords).serialize(s)
    }
}

fn pow_rat(x: &Rat, e: u32) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// Scales `λ` so the first nonzero of `(x1, x2)` is 1 (twisting `x4` by
/// `λ^(-n)`), then `μ` so the first nonzero of `(x3, x4)` is 1.
pub fn normalize_fn_point(raw: [Rat; 4], n: u32) -> Result<FnPoint> {
    let [x1, x2, x3, x4] = raw;
    if (x1.is_zero() && x2.is_zero()) || (x3.is_zero() && x4.is_zero()) {
        return Err(Error::ExcludedLocus(format!(
            "[{},{},{},{}]",
            fmt_rat(&x1),
            fmt_rat(&x2),
            fmt_rat(&x3),
            fmt_rat(&x4)
        )));
    }
    let c = if x1.is_zero() { x2.clone() } else { x1.clone() };
    let (y1, y2, y3, y4) = (&x1 / &c, &x2 / &c, x3, x4 * pow_rat(&c, n));
    let e = if y3.is_zero() { y4.clone() } else { y3.clone() };
    Ok(FnPoint {
        n,
        coords: [y1, y2, &y3 / &e, &y4 / &e],
    })
}

/// `[x, 1, y, 1]`, canonicalized.
pub fn embed_a2(p: &AffinePoint, n: u32) -> FnPoint {
    normalize_fn_point([p.x.clone(), Rat::one(), p.y.clone(), Rat::one()], n)
        .expect("affine points avoid the excluded locus")
}

/// `u = x2/x1`, `w = x1^n x4 / x3`: coordinates centered at `[1,0,1,0]`.
pub fn chart_around_q(p: &FnPoint) -> Result<(Rat, Rat)> {
    let [x1, x2, x3, x4] = &p.coords;
    if x1.is_zero() || x3.is_zero() {
        return Err(Error::ChartDomain(p.to_string()));
    }
    Ok((x2 / x1, pow_rat(x1, p.n) * x4 / x3))
}

fn var4(i: usize) -> Poly4 {
    Poly4::var(i)
}

/// The extension `f_n` of a triangular map, stored as four polynomials in
/// `(x1, x2, x3, x4)`:
/// `[a x1 + b x2, x2, A(x1/x2) x2^d x3 + B(x1/x2) x2^(d+n) x4, x2^d x4]`
/// with `d = max(deg A, deg B - n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FnModel {
    pub map: TriangularMap,
    pub n: u32,
    pub d: u32,
    pub components: [Poly4; 4],
}

pub fn extend_to_fn(t: &TriangularMap, n: u32) -> FnModel {
    let da = t.deg_a();
    let d = match t.deg_b() {
        Some(db) if db > n => da.max(db - n),
        _ => da,
    };
    let c1 = &var4(0).scale(&t.a) + &var4(1).scale(&t.b);
    let c2 = var4(1);
    let mut c3 = Poly4::zero();
    for (i, c) in t.a_poly.coeffs().iter().enumerate() {
        let i = i as u32;
        c3.add_term([i, d - i, 1, 0], c.clone());
    }
    for (i, c) in t.b_poly.coeffs().iter().enumerate() {
        let i = i as u32;
        c3.add_term([i, d + n - i, 0, 1], c.clone());
    }
    let c4 = Poly4::monomial([0, d, 0, 1], Rat::one());
    FnModel {
        map: t.clone(),
        n,
        d,
        components: [c1, c2, c3, c4],
    }
}

impl FnModel {
    pub fn threshold(&self) -> u32 {
        self.map.stability_threshold()
    }

    /// At or above the stability threshold.
    pub fn is_stable(&self) -> bool {
        self.n >= self.threshold()
    }

    fn raw_image(&self, p: &FnPoint) -> [Rat; 4] {
        let c = &p.coords;
        [0, 1, 2, 3].map(|i| self.components[i].eval(c))
    }

    /// True when `f_n` is undefined at `p`: both coordinate pairs of the
    /// image vanish.
    pub fn is_indeterminate(&self, p: &FnPoint) -> bool {
        let [c1, c2, c3, c4] = self.raw_image(p);
        (c1.is_zero() && c2.is_zero()) || (c3.is_zero() && c4.is_zero())
    }

    pub fn apply(&self, p: &FnPoint) -> Result<FnPoint> {
        apply_fn(self, p)
    }
}

pub fn apply_fn(m: &FnModel, p: &FnPoint) -> Result<FnPoint> {
    if p.n != m.n {
        return Err(Error::Invalid(format!(
            "point lives on F_{} but the model is on F_{}",
            p.n, m.n
        )));
    }
    let img = m.raw_image(p);
    normalize_fn_point(img, m.n).map_err(|_| Error::Indeterminate(p.to_string()))
}

/// Membership in the locus `{x2 = x3 = 0}`, i.e. the point `[1,0,0,1]`.
pub fn in_locus_formula(p: &FnPoint) -> bool {
    p.coords[1].is_zero() && p.coords[2].is_zero()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndeterminacyReport {
    pub locus: String,
    /// False below the stability threshold, where the formula is not claimed.
    pub asserted: bool,
    /// On the fiber `x2 = 0`, the image vanishes exactly where `x3 = 0`.
    pub fiber_check: bool,
    /// Points `[r,1,1,0]` with `A(r) = 0`: the fibers over roots of `A` are
    /// contracted, so their points at infinity are indeterminate as well.
    pub fiber_points: Vec<FnPoint>,
    /// `A` has roots that are not rational.
    pub irrational_fiber_points: bool,
}

pub fn indeterminacy_fn(m: &FnModel) -> IndeterminacyReport {
    // Restrict to x1 = 1, x2 = 0: c3 = α x3 + β x4, c4 = [d = 0] x4.
    let [_, _, c3, c4] = &m.components;
    let alpha = c3.coeff(&[m.d, 0, 1, 0]);
    let beta = c3.coeff(&[m.d + m.n, 0, 0, 1]);
    let c4_on_fiber = c4.specialize(1, &Rat::zero());
    let fiber_check = !alpha.is_zero() && beta.is_zero() && c4_on_fiber.is_zero();
    let roots = m.map.a_poly.rational_roots();
    let rational_degree: usize = roots
        .iter()
        .map(|r| m.map.a_poly.root_multiplicity(r).unwrap_or(0) as usize)
        .sum();
    let fiber_points = roots
        .iter()
        .map(|r| normalize_fn_point([r.clone(), Rat::one(), Rat::one(), Rat::zero()], m.n).unwrap())
        .collect();
    IndeterminacyReport {
        locus: "x2 = x3 = 0".into(),
        asserted: m.is_stable(),
        fiber_check,
        fiber_points,
        irrational_fiber_points: rational_degree < m.map.deg_a() as usize,
    }
}

/// Checks that the generic point `[x1, 0, x3, x4]` of `F_∞` maps to
/// `[1,0,1,0]` and that `[1,0,1,0]` is fixed.
pub fn contracted_image_check(m: &FnModel) -> bool {
    let zero = Rat::zero();
    let on_fiber: Vec<Poly4> = m.components.iter().map(|c| c.specialize(1, &zero)).collect();
    let pair1_ok = !on_fiber[0].is_zero() && on_fiber[0].num_terms() == 1 && on_fiber[1].is_zero();
    let c3 = &on_fiber[2];
    let pair2_ok = on_fiber[3].is_zero()
        && c3.num_terms() == 1
        && c3.terms().all(|(e, _)| e[2] >= 1 && e[3] == 0);
    let q = FnPoint::q(m.n);
    pair1_ok && pair2_ok && apply_fn(m, &q).map(|img| img == q).unwrap_or(false)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilityProbe {
    pub iterations: usize,
    /// `(curve, k)`: the `k`-th image of the named curve is undefined.
    pub failure: Option<(String, usize)>,
}

impl StabilityProbe {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

fn monomial_content(polys: &[&Poly4]) -> [u32; 4] {
    let mut out = [u32::MAX; 4];
    let mut any = false;
    for p in polys {
        if p.is_zero() {
            continue;
        }
        any = true;
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = (*slot).min(p.min_degree_in(i));
        }
    }
    if any {
        out
    } else {
        [0; 4]
    }
}

/// Iterates `f_n` symbolically on the generic point of `F_n`, of `F_∞` and
/// of the section `{x4 = 0}`, and reports the first iterate that sends one
/// of them into the indeterminacy locus.
pub fn stability_probe(m: &FnModel, iterations: usize) -> Result<StabilityProbe> {
    let generic = [var4(0), var4(1), var4(2), var4(3)];
    let fiber = [var4(0), Poly4::zero(), var4(2), var4(3)];
    let section = [var4(0), var4(1), var4(2), Poly4::zero()];
    for (name, start) in [("generic", generic), ("fiber_at_infinity", fiber), ("section_at_infinity", section)] {
        let mut cur = start;
        for k in 1..=iterations {
            let mut next: Vec<Poly4> = m
                .components
                .iter()
                .map(|c| c.substitute(&cur, crate::algebra::DEFAULT_DEGREE_CAP))
                .collect::<Result<_>>()?;
            if (next[0].is_zero() && next[1].is_zero()) || (next[2].is_zero() && next[3].is_zero()) {
                return Ok(StabilityProbe {
                    iterations,
                    failure: Some((name.to_string(), k)),
                });
            }
            // λ: divide (c1, c2) by their monomial content g, twist c4 by g^n.
            let g = monomial_content(&[&next[0], &next[1]]);
            next[0] = next[0].unshift(&g);
            next[1] = next[1].unshift(&g);
            next[3] = next[3].shift(&g.map(|e| e * m.n));
            // μ: divide (c3, c4) by their monomial content.
            let h = monomial_content(&[&next[2], &next[3]]);
            next[2] = next[2].unshift(&h);
            next[3] = next[3].unshift(&h);
            cur = next.try_into().expect("four components");
        }
    }
    Ok(StabilityProbe {
        iterations,
        failure: None,
    })
}

/// Summary of a model, as written by the `fn-model` command.
#[derive(Debug, Clone, Serialize)]
pub struct ModelReport {
    pub n: u32,
    pub d: u32,
    pub threshold: u32,
    pub stable: bool,
    pub components: [String; 4],
    pub indeterminacy: IndeterminacyReport,
    pub contracted_image_check: bool,
    pub stability_probe: StabilityProbe,
}

pub fn model_report(m: &FnModel) -> Result<ModelReport> {
    Ok(ModelReport {
        n: m.n,
        d: m.d,
        threshold: m.threshold(),
        stable: m.is_stable(),
        components: m.components.clone().map(|c| c.to_string()),
        indeterminacy: indeterminacy_fn(m),
        contracted_image_check: contracted_image_check(m),
        stability_probe: stability_probe(m, 5)?,
    })
}
