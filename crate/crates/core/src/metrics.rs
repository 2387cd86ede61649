//! The projective metric `d_v` at every place, iteration toward an
//! attracting fixed point, and the local probe that pairs a basin of
//! attraction with a curve.

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::algebra::{AffinePoint, PolyMap, Rat};
use crate::curves::{is_fixed_curve, Curve};
use crate::dml::{orbit_guarded, visit_set_from_orbit, DEFAULT_MAX_BITS};
use crate::error::{Error, Result};
use crate::heights::{abs_value, Place, ProjPoint};
use crate::hirzebruch::{chart_around_q, embed_a2, FnModel, FnPoint};

/// `max |x_i y_j - x_j y_i|_v / (max |x_i|_v · max |y_j|_v)` on raw
/// coordinates, which need not be canonical.
pub fn metric_dv_raw(p: &[Rat], q: &[Rat], v: Place) -> Result<Rat> {
    if p.len() != q.len() {
        return Err(Error::Invalid("points of different dimension".into()));
    }
    let norm = |c: &[Rat]| {
        c.iter()
            .map(|x| abs_value(x, v))
            .max()
            .unwrap_or_else(Rat::zero)
    };
    let (np, nq) = (norm(p), norm(q));
    if np.is_zero() || nq.is_zero() {
        return Err(Error::Invalid("all coordinates are zero".into()));
    }
    let mut num = Rat::zero();
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            let cross = abs_value(&(&p[i] * &q[j] - &p[j] * &q[i]), v);
            if cross > num {
                num = cross;
            }
        }
    }
    Ok(num / (np * nq))
}

pub fn metric_dv(p: &ProjPoint, q: &ProjPoint, v: Place) -> Result<Rat> {
    metric_dv_raw(&p.as_rats(), &q.as_rats(), v)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricSample {
    pub n: usize,
    /// `None` when the iterate is outside the chart around the target.
    #[serde(serialize_with = "opt_rat")]
    pub distance: Option<Rat>,
    pub below_epsilon: bool,
}

impl MetricSample {
    pub fn distance_f64(&self) -> Option<f64> {
        self.distance.as_ref().and_then(rat_to_f64)
    }
}

fn rat_to_f64(r: &Rat) -> Option<f64> {
    r.to_f64()
}

fn opt_rat<S: Serializer>(v: &Option<Rat>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        None => s.serialize_none(),
        Some(r) => s.serialize_str(&crate::algebra::poly::fmt_rat(r)),
    }
}

/// Number of trailing strictly decreasing samples below `eps` that
/// certify convergence.
pub const CONVERGENCE_WINDOW: usize = 5;

/// `2^-20`.
pub fn default_eps() -> Rat {
    Rat::new(One::one(), num_bigint::BigInt::one() << 20)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "n")]
pub enum BasinVerdict {
    ConvergedAt(usize),
    NotConverged,
    HitIndeterminacy(usize),
    ReachedQ(usize),
}

#[derive(Debug, Clone)]
pub enum BasinModel {
    Affine(PolyMap),
    Fn(FnModel),
}

#[derive(Debug, Clone, PartialEq)]
pub enum BasinPoint {
    Affine(AffinePoint),
    Fn(FnPoint),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasinParams {
    pub horizon: usize,
    pub eps: Rat,
    pub max_bits: u64,
}

impl Default for BasinParams {
    fn default() -> Self {
        BasinParams {
            horizon: 50,
            eps: default_eps(),
            max_bits: DEFAULT_MAX_BITS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BasinReport {
    pub place: Place,
    pub samples: Vec<MetricSample>,
    pub verdict: BasinVerdict,
    /// Set when the coefficient guard cut the run short.
    pub guard: Option<String>,
}

fn affine_distance(p: &AffinePoint, q: &AffinePoint, v: Place) -> Rat {
    let one = Rat::one();
    metric_dv_raw(
        &[one.clone(), p.x.clone(), p.y.clone()],
        &[one, q.x.clone(), q.y.clone()],
        v,
    )
    .expect("affine points have a nonzero coordinate")
}

/// `max(|u|_v, |w|_v)` in the chart centered at `[1,0,1,0]`.
fn chart_distance(p: &FnPoint, v: Place) -> Option<Rat> {
    let (u, w) = chart_around_q(p).ok()?;
    Some(abs_value(&u, v).max(abs_value(&w, v)))
}

fn fn_point_bits(p: &FnPoint) -> u64 {
    p.coords
        .iter()
        .map(|c| c.numer().bits().max(c.denom().bits()))
        .max()
        .unwrap_or(0)
}

fn certified(samples: &[MetricSample]) -> bool {
    if samples.len() < CONVERGENCE_WINDOW {
        return false;
    }
    let tail = &samples[samples.len() - CONVERGENCE_WINDOW..];
    tail.iter().all(|s| s.below_epsilon)
        && tail
            .windows(2)
            .all(|w| matches!((&w[0].distance, &w[1].distance), (Some(a), Some(b)) if b < a))
}

/// Iterates `p` under the model and measures the distance to the fixed
/// point `q` at the place `v`. Affine models use `d_v` on `[1:x:y]`; models
/// on `F_n` support `q = [1,0,1,0]` and use the chart around it.
pub fn basin_probe(
    model: &BasinModel,
    p: &BasinPoint,
    q: &BasinPoint,
    v: Place,
    params: &BasinParams,
) -> Result<BasinReport> {
    match (model, p, q) {
        (BasinModel::Affine(f), BasinPoint::Affine(p), BasinPoint::Affine(q)) => {
            basin_probe_affine(f, p, q, v, params)
        }
        (BasinModel::Fn(m), start, BasinPoint::Fn(q)) => {
            let start = match start {
                BasinPoint::Affine(a) => embed_a2(a, m.n),
                BasinPoint::Fn(pt) => pt.clone(),
            };
            basin_probe_fn(m, &start, q, v, params)
        }
        _ => Err(Error::Invalid(
            "model and points must all be affine or all on F_n".into(),
        )),
    }
}

pub fn basin_probe_affine(
    f: &PolyMap,
    p: &AffinePoint,
    q: &AffinePoint,
    v: Place,
    params: &BasinParams,
) -> Result<BasinReport> {
    if f.apply(q) != *q {
        return Err(Error::Precondition(format!("{q} is not fixed by the map")));
    }
    let mut samples: Vec<MetricSample> = Vec::new();
    let mut cur = p.clone();
    for n in 0..=params.horizon {
        if cur == *q {
            samples.push(MetricSample {
                n,
                distance: Some(Rat::zero()),
                below_epsilon: true,
            });
            return Ok(report(v, samples, BasinVerdict::ReachedQ(n), None));
        }
        if cur.bits() > params.max_bits {
            let g = format!("coefficients exceed {} bits at n = {n}", params.max_bits);
            return Ok(report(v, samples, BasinVerdict::NotConverged, Some(g)));
        }
        let d = affine_distance(&cur, q, v);
        samples.push(MetricSample {
            n,
            below_epsilon: d < params.eps,
            distance: Some(d),
        });
        if certified(&samples) {
            return Ok(report(v, samples, BasinVerdict::ConvergedAt(n), None));
        }
        cur = f.apply(&cur);
    }
    Ok(report(v, samples, BasinVerdict::NotConverged, None))
}

pub fn basin_probe_fn(
    m: &FnModel,
    p: &FnPoint,
    q: &FnPoint,
    v: Place,
    params: &BasinParams,
) -> Result<BasinReport> {
    if *q != FnPoint::q(m.n) {
        return Err(Error::Precondition(
            "only [1,0,1,0] is supported as a target on F_n".into(),
        ));
    }
    if m.apply(q).ok().as_ref() != Some(q) {
        return Err(Error::Precondition(format!("{q} is not fixed by the model")));
    }
    let mut samples: Vec<MetricSample> = Vec::new();
    let mut cur = p.clone();
    for n in 0..=params.horizon {
        if cur == *q {
            samples.push(MetricSample {
                n,
                distance: Some(Rat::zero()),
                below_epsilon: true,
            });
            return Ok(report(v, samples, BasinVerdict::ReachedQ(n), None));
        }
        if fn_point_bits(&cur) > params.max_bits {
            let g = format!("coefficients exceed {} bits at n = {n}", params.max_bits);
            return Ok(report(v, samples, BasinVerdict::NotConverged, Some(g)));
        }
        let d = chart_distance(&cur, v);
        samples.push(MetricSample {
            n,
            below_epsilon: d.as_ref().is_some_and(|d| *d < params.eps),
            distance: d,
        });
        if certified(&samples) {
            return Ok(report(v, samples, BasinVerdict::ConvergedAt(n), None));
        }
        if m.is_indeterminate(&cur) {
            return Ok(report(v, samples, BasinVerdict::HitIndeterminacy(n), None));
        }
        cur = m.apply(&cur)?;
    }
    Ok(report(v, samples, BasinVerdict::NotConverged, None))
}

fn report(
    place: Place,
    samples: Vec<MetricSample>,
    verdict: BasinVerdict,
    guard: Option<String>,
) -> BasinReport {
    BasinReport {
        place,
        samples,
        verdict,
        guard,
    }
}

/// Whether `Q` lies in the indeterminacy locus of `f^-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QHypothesis {
    Verified,
    Failed,
    /// No inverse is attached to the map.
    Unverified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalDmlVerdict {
    CurveFixedConfirmed,
    OrbitHitsQ,
    HypothesesNotMet,
    #[serde(rename = "VIOLATION")]
    Violation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalDmlReport {
    pub basin: BasinReport,
    pub visit_set: Vec<usize>,
    pub q_hypothesis: QHypothesis,
    pub curve_fixed: Option<bool>,
    pub verdict: LocalDmlVerdict,
}

/// Visits needed before a convergent orbit counts as lying on `C`
/// infinitely often.
pub const DEFAULT_MIN_VISITS: usize = 5;

/// Runs the basin probe and the visit set together. A convergent orbit
/// visiting `C` at least `min_visits` times must either land on `q` or `C`
/// must be fixed.
pub fn local_dml_probe(
    f: &PolyMap,
    c: &Curve,
    p: &AffinePoint,
    q: &AffinePoint,
    v: Place,
    params: &BasinParams,
    min_visits: usize,
) -> Result<LocalDmlReport> {
    let basin = basin_probe_affine(f, p, q, v, params)?;
    let o = orbit_guarded(f, p, params.horizon, params.max_bits);
    let (visit_set, _) = visit_set_from_orbit(&o, c, params.horizon);
    let q_hypothesis = match f.inverse() {
        None => QHypothesis::Unverified,
        Some(g) if g.is_indeterminate_at(q) => QHypothesis::Verified,
        Some(_) => QHypothesis::Failed,
    };
    let mut curve_fixed = None;
    let verdict = match basin.verdict {
        BasinVerdict::ReachedQ(_) => LocalDmlVerdict::OrbitHitsQ,
        BasinVerdict::ConvergedAt(_)
            if visit_set.len() >= min_visits && q_hypothesis != QHypothesis::Failed =>
        {
            let fixed = is_fixed_curve(c, f)?;
            curve_fixed = Some(fixed);
            if fixed {
                LocalDmlVerdict::CurveFixedConfirmed
            } else {
                LocalDmlVerdict::Violation
            }
        }
        _ => LocalDmlVerdict::HypothesesNotMet,
    };
    Ok(LocalDmlReport {
        basin,
        visit_set,
        q_hypothesis,
        curve_fixed,
        verdict,
    })
}

/// `d_v` as a float, for summaries.
pub fn approx(r: &Rat) -> f64 {
    if r.is_negative() {
        -rat_to_f64(&-r).unwrap_or(f64::INFINITY)
    } else {
        rat_to_f64(r).unwrap_or(f64::INFINITY)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::map::rat;
    use crate::hirzebruch::{extend_to_fn, TriangularMap};

    fn pp(c: &[i64]) -> ProjPoint {
        ProjPoint::from_ints(c).unwrap()
    }

    #[test]
    fn metric_examples() {
        let p = pp(&[1, 1]);
        assert!(metric_dv(&p, &p, Place::Archimedean).unwrap().is_zero());
        assert_eq!(metric_dv(&pp(&[1, 0]), &pp(&[0, 1]), Place::Archimedean).unwrap(), rat(1, 1));
        let two = Place::finite(2).unwrap();
        assert_eq!(metric_dv(&pp(&[1, 1]), &pp(&[1, 3]), two).unwrap(), rat(1, 2));
        assert_eq!(
            metric_dv_raw(&[rat(2, 1), rat(2, 1)], &[rat(1, 1), rat(3, 1)], two).unwrap(),
            rat(1, 2)
        );
    }

    #[test]
    fn triangular_basin_on_f3() {
        let t = TriangularMap::from_map(&PolyMap::parse("2*x", "x^3*y + x^5").unwrap()).unwrap();
        let m = extend_to_fn(&t, 3);
        let r = basin_probe(
            &BasinModel::Fn(m.clone()),
            &BasinPoint::Affine(AffinePoint::from_ints(1, 1)),
            &BasinPoint::Fn(FnPoint::q(3)),
            Place::Archimedean,
            &BasinParams::default(),
        )
        .unwrap();
        assert_eq!(r.verdict, BasinVerdict::ConvergedAt(25));
        let mut cur = embed_a2(&AffinePoint::from_ints(1, 1), 3);
        for n in 0..=25 {
            let (u, _) = chart_around_q(&cur).unwrap();
            assert_eq!(u, Rat::new(1.into(), num_bigint::BigInt::one() << n));
            cur = m.apply(&cur).unwrap();
        }
    }

    #[test]
    fn squaring_basin_two_adic() {
        let f = PolyMap::parse("x^2", "y^2").unwrap();
        let two = Place::finite(2).unwrap();
        let r = basin_probe_affine(&f, &AffinePoint::from_ints(2, 2), &AffinePoint::origin(), two, &BasinParams::default()).unwrap();
        assert!(matches!(r.verdict, BasinVerdict::ConvergedAt(_)));
        assert_eq!(r.samples[3].distance, Some(rat(1, 256)));
        let r = basin_probe_affine(&f, &AffinePoint::origin(), &AffinePoint::origin(), two, &BasinParams::default()).unwrap();
        assert_eq!(r.verdict, BasinVerdict::ReachedQ(0));
        assert!(basin_probe_affine(&f, &AffinePoint::origin(), &AffinePoint::from_ints(2, 0), two, &BasinParams::default()).is_err());
    }

    #[test]
    fn local_dml_verdicts() {
        let f = PolyMap::parse_with_inverse("2*x", "x^3*y", "x/2", "8*y/x^3").unwrap();
        let two = Place::finite(2).unwrap();
        let params = BasinParams::default();
        let q = AffinePoint::origin();
        let r = local_dml_probe(&f, &Curve::parse("y").unwrap(), &AffinePoint::from_ints(1, 0), &q, two, &params, 5).unwrap();
        assert_eq!(r.verdict, LocalDmlVerdict::CurveFixedConfirmed);
        assert_eq!(r.q_hypothesis, QHypothesis::Verified);
        let r = local_dml_probe(&f, &Curve::parse("y").unwrap(), &AffinePoint::from_ints(0, 5), &q, two, &params, 5).unwrap();
        assert_eq!(r.verdict, LocalDmlVerdict::OrbitHitsQ);
        let r = local_dml_probe(&f, &Curve::parse("x - 1").unwrap(), &AffinePoint::from_ints(1, 0), &q, two, &params, 5).unwrap();
        assert_eq!(r.verdict, LocalDmlVerdict::HypothesesNotMet);
    }
}
