//! Plane curves: fixedness and periodicity under a polynomial map, strict
//! transforms, closures in `F_n`, and probes of the behavior of curves near
//! the indeterminacy point and the attracting point `[1,0,1,0]`.

use std::fmt;

use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::algebra::bivar;
use crate::algebra::factor;
use crate::algebra::ratfunc::homogenized_substitution;
use crate::algebra::{
    parse_poly, AffinePoint, Poly2, Poly4, PolyMap, Rat, RationalMap, UPoly, DEFAULT_DEGREE_CAP,
};
use crate::error::{Error, Result};
use crate::hirzebruch::FnModel;
use crate::intersection::{multiplicity_at_origin, Multiplicity};

/// A reduced plane curve with its irreducible components over Q.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Curve {
    equation: Poly2,
    factors: Vec<Poly2>,
}

impl Curve {
    /// Takes the square-free part of `p` and factors it.
    pub fn new(p: &Poly2) -> Result<Self> {
        if p.is_constant() {
            return Err(Error::Invalid("a curve needs a nonconstant equation".into()));
        }
        let factors = factor::irreducible_factors(p);
        let equation = bivar::squarefree_part(p);
        Ok(Curve { equation, factors })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Curve::new(&parse_poly(text)?)
    }

    pub fn equation(&self) -> &Poly2 {
        &self.equation
    }

    pub fn factors(&self) -> &[Poly2] {
        &self.factors
    }

    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1
    }

    pub fn degree(&self) -> u32 {
        self.equation.total_degree().unwrap_or(0)
    }

    pub fn contains(&self, p: &AffinePoint) -> bool {
        self.equation.vanishes_at(&p.coords())
    }

    /// Same zero set.
    pub fn same_as(&self, other: &Curve) -> bool {
        self.equation == other.equation
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.equation)
    }
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Curve({})", self.equation)
    }
}

impl Serialize for Curve {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.equation.to_string())
    }
}

fn pull(p: &Poly2, f: &PolyMap, cap: u32) -> Result<Poly2> {
    p.substitute(&[f.f1.clone(), f.f2.clone()], cap)
}

/// `C` divides `C ∘ f`, i.e. `f(C) ⊆ C`.
pub fn is_fixed_curve(c: &Curve, f: &PolyMap) -> Result<bool> {
    let pulled = pull(c.equation(), f, DEFAULT_DEGREE_CAP)?;
    Ok(bivar::divides(c.equation(), &pulled))
}

/// Least `k <= max_period` with `C | C ∘ f^k`.
pub fn is_periodic_curve(c: &Curve, f: &PolyMap, max_period: u32) -> Result<Option<u32>> {
    is_periodic_curve_capped(c, f, max_period, DEFAULT_DEGREE_CAP)
}

pub fn is_periodic_curve_capped(
    c: &Curve,
    f: &PolyMap,
    max_period: u32,
    cap: u32,
) -> Result<Option<u32>> {
    let mut cur = c.equation().clone();
    for k in 1..=max_period {
        cur = pull(&cur, f, cap)?;
        if bivar::divides(c.equation(), &cur) {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// The image of `C` under the birational map whose inverse is `g`:
/// substitute `g`, clear denominators and drop every factor shared with a
/// denominator of `g`.
pub fn strict_transform_inverse(c: &Curve, g: &RationalMap) -> Result<Curve> {
    let eq = c.equation();
    let ax = eq.degree_in(0).unwrap_or(0);
    let ay = eq.degree_in(1).unwrap_or(0);
    let num = homogenized_substitution(eq, &g.g1, &g.g2, ax, ay, DEFAULT_DEGREE_CAP)?;
    if num.is_zero() {
        return Err(Error::Contracted);
    }
    let [d1, d2] = g.denominators();
    let stripped = bivar::strip_common_factors(&num, &(d1 * d2));
    if stripped.is_constant() {
        return Err(Error::Contracted);
    }
    Curve::new(&stripped)
}

pub fn push_forward_curve(c: &Curve, f: &PolyMap) -> Result<Curve> {
    let g = f.inverse().ok_or(Error::MissingInverse)?;
    strict_transform_inverse(c, g)
}

/// True when the irreducible curve `F = 0` is mapped to a point by `f`:
/// both components are constant along `F`.
pub fn is_contracted_by(factor: &Poly2, f: &PolyMap) -> bool {
    let fx = factor.derivative(0);
    let fy = factor.derivative(1);
    [&f.f1, &f.f2].iter().all(|fi| {
        let tangential = &(&fi.derivative(0) * &fy) - &(&fi.derivative(1) * &fx);
        bivar::divides(factor, &tangential)
    })
}

/// `f^(-1)(C)` without the curves that `f` contracts.
pub fn strict_pullback(c: &Curve, f: &PolyMap) -> Result<Curve> {
    let pulled = pull(c.equation(), f, DEFAULT_DEGREE_CAP)?;
    if pulled.is_constant() {
        return Err(Error::Contracted);
    }
    let kept: Vec<Poly2> = factor::irreducible_factors(&pulled)
        .into_iter()
        .filter(|h| !is_contracted_by(h, f))
        .collect();
    if kept.is_empty() {
        return Err(Error::Contracted);
    }
    let prod = kept.iter().fold(Poly2::one(), |acc, h| &acc * h);
    Curve::new(&prod)
}

/// Exponent data of the closure in `F_n`: `M = max(i + n j)`, `J = max j`.
fn closure_exponents(eq: &Poly2, n: u32) -> (u32, u32) {
    let m = eq.terms().map(|(e, _)| e[0] + n * e[1]).max().unwrap_or(0);
    let j = eq.degree_in(1).unwrap_or(0);
    (m, j)
}

/// Closure of `C` in `F_n`: `Σ c_ij x1^i x3^j x2^(M-i-nj) x4^(J-j)`.
pub fn fn_closure(c: &Curve, n: u32) -> Poly4 {
    let eq = c.equation();
    let (m, jmax) = closure_exponents(eq, n);
    Poly4::from_terms(
        eq.terms()
            .map(|(e, v)| ([e[0], m - e[0] - n * e[1], e[1], jmax - e[1]], v.clone())),
    )
}

/// The closure in the chart `(u, w)` around `[1,0,1,0]`:
/// `Σ c_ij u^(M-i-nj) w^(J-j)`.
pub fn chart_equation(c: &Curve, n: u32) -> Poly2 {
    let eq = c.equation();
    let (m, jmax) = closure_exponents(eq, n);
    Poly2::from_terms(
        eq.terms()
            .map(|(e, v)| ([m - e[0] - n * e[1], jmax - e[1]], v.clone())),
    )
}

/// `[1,0,1,0]` lies on the closure of `C` in `F_n`.
pub fn closure_contains_q(c: &Curve, n: u32) -> bool {
    chart_equation(c, n).constant_term().is_zero()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IndeterminacyContact {
    /// The closure passes through `[1,0,0,1]`, the point `{x2 = x3 = 0}`.
    pub locus_point: bool,
    /// The closure passes through `[r,1,1,0]` for some root `r` of `A`.
    pub fiber_point: bool,
}

impl IndeterminacyContact {
    pub fn meets(&self) -> bool {
        self.locus_point || self.fiber_point
    }
}

pub fn indeterminacy_contact(c: &Curve, m: &FnModel) -> IndeterminacyContact {
    let eq = c.equation();
    let (mm, jmax) = closure_exponents(eq, m.n);
    let locus_point = eq.coeff(&[mm, 0]).is_zero();
    let lead_y = UPoly::from_coeffs(
        (0..=eq.degree_in(0).unwrap_or(0))
            .map(|i| eq.coeff(&[i, jmax]))
            .collect(),
    );
    let fiber_point = lead_y.gcd(&m.map.a_poly).degree().unwrap_or(0) > 0;
    IndeterminacyContact {
        locus_point,
        fiber_point,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveStep {
    pub n: usize,
    pub curve: Curve,
    pub degree: u32,
    pub contact: IndeterminacyContact,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum PeriodicityVerdict {
    /// Every computed image met the indeterminacy locus and the curve is
    /// periodic with the given period.
    PeriodicConsistent { period: u32 },
    /// The `n`-th image misses the indeterminacy locus; nothing is claimed.
    HypothesisFailsAt { n: usize },
    /// The `n`-th push-forward contracts the curve.
    ContractedAt { n: usize },
    /// Every image met the locus but no period up to `K` was found.
    Violation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodicityReport {
    pub n_model: u32,
    pub steps: Vec<CurveStep>,
    pub verdict: PeriodicityVerdict,
}

/// Pushes `C` forward `N` times on the model and checks whether every image
/// meets the indeterminacy locus; if so the curve must be periodic.
pub fn indeterminacy_periodicity_probe(
    m: &FnModel,
    c: &Curve,
    horizon: usize,
    max_period: u32,
) -> Result<PeriodicityReport> {
    if !m.is_stable() {
        return Err(Error::Precondition(format!(
            "model F_{} is below the stability threshold {}",
            m.n,
            m.threshold()
        )));
    }
    let f = m.map.to_map();
    let mut steps = Vec::new();
    let mut cur = c.clone();
    for n in 0..=horizon {
        let contact = indeterminacy_contact(&cur, m);
        steps.push(CurveStep {
            n,
            degree: cur.degree(),
            curve: cur.clone(),
            contact,
        });
        if !contact.meets() {
            return Ok(PeriodicityReport {
                n_model: m.n,
                steps,
                verdict: PeriodicityVerdict::HypothesisFailsAt { n },
            });
        }
        if n == horizon {
            break;
        }
        cur = match push_forward_curve(&cur, &f) {
            Ok(next) => next,
            Err(Error::Contracted) => {
                return Ok(PeriodicityReport {
                    n_model: m.n,
                    steps,
                    verdict: PeriodicityVerdict::ContractedAt { n: n + 1 },
                })
            }
            Err(e) => return Err(e),
        };
    }
    let verdict = match is_periodic_curve(c, &f, max_period)? {
        Some(period) => PeriodicityVerdict::PeriodicConsistent { period },
        None => PeriodicityVerdict::Violation,
    };
    Ok(PeriodicityReport {
        n_model: m.n,
        steps,
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum DecreasingOutcome {
    /// All requested terms were computed.
    Completed,
    /// The `m`-th pullback misses `[1,0,1,0]`.
    PullbackMissesQ { m: usize },
    /// Consecutive pullbacks share a component through `[1,0,1,0]`.
    CommonComponent { m: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecreasingReport {
    pub pullbacks: Vec<Curve>,
    /// `a_m = (f^-m(C) · f^-(m+1)(C))` at `[1,0,1,0]`.
    pub sequence: Vec<u64>,
    pub outcome: DecreasingOutcome,
    /// `a_(m+1) <= a_m - 1` held for every consecutive pair.
    pub strictly_decreasing: bool,
}

/// Local intersection at `[1,0,1,0]` of successive strict pullbacks of `C`,
/// for `m = 0..=M` while the pullbacks keep passing through that point.
pub fn decreasing_intersection_experiment(
    m: &FnModel,
    c: &Curve,
    max_m: usize,
) -> Result<DecreasingReport> {
    let f = m.map.to_map();
    if !closure_contains_q(c, m.n) {
        return Err(Error::Precondition("the closure of C misses [1,0,1,0]".into()));
    }
    if is_fixed_curve(c, &f)? {
        return Err(Error::Precondition("C is fixed".into()));
    }
    let mut pullbacks = vec![c.clone()];
    let mut sequence = Vec::new();
    let mut outcome = DecreasingOutcome::Completed;
    for k in 0..=max_m {
        let next = strict_pullback(&pullbacks[k], &f)?;
        if !closure_contains_q(&next, m.n) {
            pullbacks.push(next);
            outcome = DecreasingOutcome::PullbackMissesQ { m: k + 1 };
            break;
        }
        let a = multiplicity_at_origin(&chart_equation(&pullbacks[k], m.n), &chart_equation(&next, m.n));
        pullbacks.push(next);
        match a {
            Multiplicity::Finite(v) => sequence.push(v),
            Multiplicity::Infinite => {
                outcome = DecreasingOutcome::CommonComponent { m: k };
                break;
            }
        }
    }
    let strictly_decreasing = sequence.windows(2).all(|w| w[1] < w[0]);
    Ok(DecreasingReport {
        pullbacks,
        sequence,
        outcome,
        strictly_decreasing,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodicThroughQ {
    /// The curve passes through `[1,0,1,0]` on a stable model.
    pub applicable: bool,
    pub period: Option<u32>,
    /// A period of at least 2 was found for a curve through `[1,0,1,0]`.
    pub flag: bool,
}

/// Periodic curves through `[1,0,1,0]` on a stable model must be fixed;
/// raises `flag` on a counterexample.
pub fn periodic_through_q_check(m: &FnModel, c: &Curve, max_period: u32) -> Result<PeriodicThroughQ> {
    let applicable = m.is_stable() && closure_contains_q(c, m.n);
    if !applicable {
        return Ok(PeriodicThroughQ {
            applicable,
            period: None,
            flag: false,
        });
    }
    let period = is_periodic_curve(c, &m.map.to_map(), max_period)?;
    Ok(PeriodicThroughQ {
        applicable,
        period,
        flag: period.is_some_and(|k| k >= 2),
    })
}

/// Value `C(p)`.
pub fn eval_curve(c: &Curve, p: &AffinePoint) -> Rat {
    c.equation().eval_at(&p.x, &p.y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hirzebruch::{extend_to_fn, TriangularMap};

    fn cv(s: &str) -> Curve {
        Curve::parse(s).unwrap()
    }

    fn m(a: &str, b: &str) -> PolyMap {
        PolyMap::parse(a, b).unwrap()
    }

    fn model(a: &str, b: &str, n: u32) -> FnModel {
        extend_to_fn(&TriangularMap::from_map(&m(a, b)).unwrap(), n)
    }

    #[test]
    fn curve_construction() {
        let c = cv("(y - x^2)^2*(x + 1)");
        assert_eq!(c.factors().len(), 2);
        assert_eq!(c.degree(), 3);
        assert!(Curve::parse("3").is_err());
    }

    #[test]
    fn fixed_curves() {
        assert!(is_fixed_curve(&cv("y"), &m("x + 1", "x*y")).unwrap());
        assert!(!is_fixed_curve(&cv("y - 1"), &m("x", "-y")).unwrap());
        assert!(is_fixed_curve(&cv("x^2 + y^2 - 1"), &m("-y", "x")).unwrap());
    }

    #[test]
    fn periods() {
        assert_eq!(is_periodic_curve(&cv("y - 1"), &m("x + 1", "-y"), 12).unwrap(), Some(2));
        assert_eq!(is_periodic_curve(&cv("y"), &m("x + 1", "x*y"), 12).unwrap(), Some(1));
        assert_eq!(is_periodic_curve(&cv("y - x"), &m("x + 1", "y"), 10).unwrap(), None);
    }

    #[test]
    fn strict_transforms() {
        let shear_inv = RationalMap::parse("x", "y - x^2").unwrap();
        let img = strict_transform_inverse(&cv("y - x^2"), &shear_inv).unwrap();
        assert!(img.same_as(&cv("y - 2*x^2")));
        assert!(strict_transform_inverse(&cv("y"), &RationalMap::identity())
            .unwrap()
            .same_as(&cv("y")));
        let shear = PolyMap::parse_with_inverse("x", "y + x^2", "x", "y - x^2").unwrap();
        assert!(push_forward_curve(&cv("y - x^2"), &shear).unwrap().same_as(&cv("y - 2*x^2")));
    }

    #[test]
    fn push_forward_through_triangular_inverse() {
        let t = TriangularMap::from_map(&m("2*x", "x^3*y + x^5")).unwrap();
        let f = t.to_map();
        assert!(push_forward_curve(&cv("x - 1"), &f).unwrap().same_as(&cv("x - 2")));
        // The fiber x = 0 is contracted to the origin.
        assert_eq!(push_forward_curve(&cv("x"), &f), Err(Error::Contracted));
        let fy = PolyMap::parse_with_inverse("x + 1", "x*y", "x - 1", "y/(x - 1)").unwrap();
        assert!(push_forward_curve(&cv("y"), &fy).unwrap().same_as(&cv("y")));
        assert_eq!(push_forward_curve(&cv("y"), &m("x", "y")), Err(Error::MissingInverse));
    }

    #[test]
    fn pullbacks_drop_contracted_fibers() {
        let f = m("2*x", "x^3*y + x^5");
        assert!(is_contracted_by(&Poly2::x(), &f));
        assert!(!is_contracted_by(&Poly2::y(), &f));
        let c1 = strict_pullback(&cv("y - x^10"), &f).unwrap();
        assert!(c1.same_as(&cv("y + x^2 - 1024*x^7")));
    }

    #[test]
    fn closures() {
        assert!(!closure_contains_q(&cv("y"), 3));
        assert!(closure_contains_q(&cv("y - x^10"), 3));
        // y - x^10 on F_3: M = 10, J = 1, chart form u^7 - w up to sign.
        assert_eq!(chart_equation(&cv("y - x^10"), 3), parse_poly("y - x^7").unwrap());
        let c = fn_closure(&cv("y - x^2"), 1);
        assert_eq!(c.num_terms(), 2);
        // The stored equation is x^2 - y.
        assert_eq!(c.coeff(&[0, 1, 1, 0]), Rat::from_integer((-1).into()));
        assert_eq!(c.coeff(&[2, 0, 0, 1]), Rat::from_integer(1.into()));
    }

    #[test]
    fn periodicity_probe_examples() {
        let mod3 = model("2*x", "x*y + 4*x^2 - x^3", 3);
        let r = indeterminacy_periodicity_probe(&mod3, &cv("y - x^2"), 4, 12).unwrap();
        assert_eq!(r.verdict, PeriodicityVerdict::PeriodicConsistent { period: 1 });
        let mod4 = model("2*x", "x*y + 4*x^2 - x^3", 4);
        let r = indeterminacy_periodicity_probe(&mod4, &cv("y"), 4, 12).unwrap();
        assert_eq!(r.verdict, PeriodicityVerdict::HypothesisFailsAt { n: 2 });
        assert_eq!(r.steps[1].degree, 3);
        assert_eq!(r.steps[2].degree, 4);
        let r = indeterminacy_periodicity_probe(&mod3, &cv("x"), 3, 12).unwrap();
        assert_eq!(r.verdict, PeriodicityVerdict::ContractedAt { n: 1 });
    }

    #[test]
    fn decreasing_intersections() {
        let mod3 = model("2*x", "x^3*y + x^5", 3);
        let r = decreasing_intersection_experiment(&mod3, &cv("y - x^10"), 4).unwrap();
        assert_eq!(r.sequence, vec![4, 1]);
        assert_eq!(r.outcome, DecreasingOutcome::PullbackMissesQ { m: 3 });
        assert!(r.strictly_decreasing);
    }

    #[test]
    fn periodic_through_q() {
        let mod3 = model("2*x", "x*y + 4*x^2 - x^3", 3);
        let chk = periodic_through_q_check(&mod3, &cv("y - x^2"), 6).unwrap();
        assert!(!chk.applicable && !chk.flag);
        let mod3 = model("2*x", "x^3*y + x^5", 3);
        let chk = periodic_through_q_check(&mod3, &cv("y - x^10"), 6).unwrap();
        assert!(chk.applicable);
        assert_eq!(chk.period, None);
        assert!(!chk.flag);
    }
}
