//! Orbits with exact cycle detection, visit sets `{n : f^n(p) ∈ C}`, their
//! decomposition into arithmetic progressions, and the classifier that
//! matches infinite visits with a preperiodic point or a periodic curve.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{AffinePoint, PolyMap};
use crate::curves::{is_periodic_curve, Curve};
use crate::error::{Error, Result};
use crate::heights::height_affine;

pub const DEFAULT_HORIZON: usize = 200;
pub const DEFAULT_MAX_PERIOD: u32 = 12;
pub const DEFAULT_MAX_BITS: u64 = 1_000_000;

/// `f^tail(p) = f^(tail+period)(p)` with both minimal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cycle {
    pub tail: usize,
    pub period: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    /// `f^0(p), f^1(p), ...`, up to the horizon, the first repetition or the
    /// guard, whichever comes first.
    pub points: Vec<AffinePoint>,
    pub cycle: Option<Cycle>,
    /// Index at which the coefficient guard stopped the iteration.
    pub truncated_at: Option<usize>,
}

impl Orbit {
    /// `f^n(p)` when it is known exactly, including through the cycle.
    pub fn point(&self, n: usize) -> Option<&AffinePoint> {
        match self.cycle {
            Some(Cycle { tail, period }) if n >= tail => {
                Some(&self.points[tail + (n - tail) % period])
            }
            _ => self.points.get(n),
        }
    }

    /// Every `n <= horizon` is covered by exact data.
    pub fn covers(&self, horizon: usize) -> bool {
        self.cycle.is_some() || self.points.len() > horizon
    }
}

pub fn orbit(f: &PolyMap, p: &AffinePoint, horizon: usize) -> Orbit {
    orbit_guarded(f, p, horizon, DEFAULT_MAX_BITS)
}

/// Iterates until `horizon`, an exact repetition, or a point whose
/// coordinates need more than `max_bits` bits.
pub fn orbit_guarded(f: &PolyMap, p: &AffinePoint, horizon: usize, max_bits: u64) -> Orbit {
    let mut seen: HashMap<AffinePoint, usize> = HashMap::new();
    let mut points = Vec::new();
    let mut cur = p.clone();
    for n in 0..=horizon {
        if let Some(&first) = seen.get(&cur) {
            return Orbit {
                points,
                cycle: Some(Cycle {
                    tail: first,
                    period: n - first,
                }),
                truncated_at: None,
            };
        }
        if cur.bits() > max_bits {
            return Orbit {
                points,
                cycle: None,
                truncated_at: Some(n),
            };
        }
        seen.insert(cur.clone(), n);
        points.push(cur.clone());
        if n < horizon {
            cur = f.apply(&cur);
        }
    }
    // The horizon point may close a cycle one step later; check it.
    let next = f.apply(points.last().unwrap());
    let cycle = seen.get(&next).map(|&first| Cycle {
        tail: first,
        period: horizon + 1 - first,
    });
    Orbit {
        points,
        cycle,
        truncated_at: None,
    }
}

/// Visit set over `[0, horizon]`, plus the first `n` for which no exact data
/// was available.
pub fn visit_set_from_orbit(o: &Orbit, c: &Curve, horizon: usize) -> (Vec<usize>, Option<usize>) {
    let on_curve: Vec<bool> = o.points.iter().map(|q| c.contains(q)).collect();
    let mut out = Vec::new();
    for n in 0..=horizon {
        let idx = match o.cycle {
            Some(Cycle { tail, period }) if n >= tail => tail + (n - tail) % period,
            _ if n < on_curve.len() => n,
            _ => return (out, Some(n)),
        };
        if on_curve[idx] {
            out.push(n);
        }
    }
    (out, None)
}

/// `{n <= N : f^n(p) ∈ C}`.
pub fn visit_set(f: &PolyMap, p: &AffinePoint, c: &Curve, horizon: usize) -> Result<Vec<usize>> {
    let o = orbit(f, p, horizon);
    match visit_set_from_orbit(&o, c, horizon) {
        (v, None) => Ok(v),
        (_, Some(n)) => Err(Error::Guard(format!(
            "orbit coefficients exceed {DEFAULT_MAX_BITS} bits at n = {n}"
        ))),
    }
}

/// `{a k + b : k >= 0}` with `a >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Progression {
    pub a: usize,
    pub b: usize,
}

impl Progression {
    pub fn contains(&self, n: usize) -> bool {
        n >= self.b && (n - self.b) % self.a == 0
    }
}

/// A subset of `[0, horizon]` as progressions plus finitely many exceptions.
///
/// Each progression starts at its first member inside the periodic tail, so
/// `b >= tail_start`; progressions with `a = 0` are never emitted, their
/// members are listed as exceptional instead.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApSet {
    pub progressions: Vec<Progression>,
    pub exceptional: Vec<usize>,
    pub horizon: usize,
    /// Start of the certified periodic window, if one was found.
    pub tail_start: Option<usize>,
    /// Period of the certified window.
    pub tail_period: Option<usize>,
}

impl ApSet {
    pub fn contains(&self, n: usize) -> bool {
        n <= self.horizon
            && (self.exceptional.binary_search(&n).is_ok()
                || self.progressions.iter().any(|p| p.contains(n)))
    }

    /// The set this decomposition describes, clipped to `[0, horizon]`.
    pub fn reconstruct(&self) -> Vec<usize> {
        (0..=self.horizon).filter(|&n| self.contains(n)).collect()
    }

    /// A periodic tail was certified and it is not empty.
    pub fn has_infinite_part(&self) -> bool {
        !self.progressions.is_empty()
    }
}

/// Least period `a <= N/4` and least cut `n0` making membership periodic on
/// `[n0, N]` over a window of at least `3a`.
pub fn ap_decompose(set: &[usize], horizon: usize) -> ApSet {
    let mut mem = vec![false; horizon + 1];
    for &n in set {
        if n <= horizon {
            mem[n] = true;
        }
    }
    let members = || (0..=horizon).filter(|&n| mem[n]);
    for a in 1..=horizon / 4 {
        let n0 = (0..=horizon - a)
            .rev()
            .find(|&n| mem[n] != mem[n + a])
            .map_or(0, |n| n + 1);
        if horizon + 1 - n0 < 3 * a {
            continue;
        }
        let mut firsts: Vec<Option<usize>> = vec![None; a];
        for n in (n0..=horizon).filter(|&n| mem[n]) {
            firsts[n % a].get_or_insert(n);
        }
        let mut progressions: Vec<Progression> =
            firsts.into_iter().flatten().map(|b| Progression { a, b }).collect();
        progressions.sort_by_key(|p| p.b);
        return ApSet {
            progressions,
            exceptional: members().filter(|&n| n < n0).collect(),
            horizon,
            tail_start: Some(n0),
            tail_period: Some(a),
        };
    }
    ApSet {
        progressions: Vec::new(),
        exceptional: members().collect(),
        horizon,
        tail_start: None,
        tail_period: None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DmlVerdict {
    FiniteVisits,
    DichotomyConfirmedPreperiodic,
    DichotomyConfirmedCurvePeriodic,
    Undetermined,
    #[serde(rename = "VIOLATION")]
    Violation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DmlParams {
    pub horizon: usize,
    pub max_period: u32,
    pub max_bits: u64,
}

impl Default for DmlParams {
    fn default() -> Self {
        DmlParams {
            horizon: DEFAULT_HORIZON,
            max_period: DEFAULT_MAX_PERIOD,
            max_bits: DEFAULT_MAX_BITS,
        }
    }
}

pub const INFINITE_VISITS_NOTE: &str =
    "infinitely many visits are read off a certified periodic tail of length at least 3a";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DmlReport {
    pub visit_set: Vec<usize>,
    pub ap: ApSet,
    pub preperiodic_witness: Option<Cycle>,
    pub curve_period_witness: Option<u32>,
    /// Heights of the visiting points that were computed exactly.
    #[serde(with = "bigint_vec")]
    pub height_trace: Vec<BigInt>,
    pub verdict: DmlVerdict,
    /// Guard truncations and failed searches, in the order they happened.
    pub guards: Vec<String>,
    pub note: String,
}

/// Computes the visit set and, when it has a periodic tail, looks for an
/// exact orbit cycle or a period of `C`.
pub fn dml_classify(f: &PolyMap, c: &Curve, p: &AffinePoint, params: &DmlParams) -> DmlReport {
    let o = orbit_guarded(f, p, params.horizon, params.max_bits);
    let mut guards = Vec::new();
    let (visits, missing) = visit_set_from_orbit(&o, c, params.horizon);
    let effective = match missing {
        Some(n) => {
            guards.push(format!(
                "orbit coefficients exceed {} bits at n = {n}; visits known on [0, {}]",
                params.max_bits,
                n - 1
            ));
            n - 1
        }
        None => params.horizon,
    };
    let ap = ap_decompose(&visits, effective);
    let height_trace = visits
        .iter()
        .filter_map(|&n| o.point(n).map(height_affine))
        .collect();
    let preperiodic_witness = o.cycle;
    let mut curve_period_witness = None;
    let verdict = if !ap.has_infinite_part() {
        if guards.is_empty() {
            DmlVerdict::FiniteVisits
        } else {
            DmlVerdict::Undetermined
        }
    } else if preperiodic_witness.is_some() {
        DmlVerdict::DichotomyConfirmedPreperiodic
    } else {
        match is_periodic_curve(c, f, params.max_period) {
            Ok(Some(k)) => {
                curve_period_witness = Some(k);
                DmlVerdict::DichotomyConfirmedCurvePeriodic
            }
            Ok(None) if guards.is_empty() => DmlVerdict::Violation,
            Ok(None) => DmlVerdict::Undetermined,
            Err(e) => {
                guards.push(format!("curve period search: {e}"));
                DmlVerdict::Undetermined
            }
        }
    };
    DmlReport {
        visit_set: visits,
        ap,
        preperiodic_witness,
        curve_period_witness,
        height_trace,
        verdict,
        guards,
        note: INFINITE_VISITS_NOTE.into(),
    }
}

mod bigint_vec {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|b| b.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Visit set of `f^m` from `f^i(p)` for `i < m`, merged back into the visit
/// set of `f`: `{n : f^n(p) ∈ C} = ∪_i {m k + i : f^(mk)(f^i(p)) ∈ C}`.
pub fn visit_set_via_iterate(
    f: &PolyMap,
    p: &AffinePoint,
    c: &Curve,
    m: u32,
    horizon: usize,
) -> Result<Vec<usize>> {
    if m == 0 {
        return Err(Error::Precondition("iterate index must be positive".into()));
    }
    let fm = f.iterate(m, crate::algebra::DEFAULT_DEGREE_CAP)?;
    let m = m as usize;
    let mut out = Vec::new();
    let mut start = p.clone();
    for i in 0..m.min(horizon + 1) {
        let sub = visit_set(&fm, &start, c, (horizon - i) / m)?;
        out.extend(sub.into_iter().map(|k| m * k + i));
        start = f.apply(&start);
    }
    out.sort_unstable();
    Ok(out)
}

/// `C(f^n(p))` vanishes for every `n` in the visit set; a cheap recheck.
pub fn check_visits(f: &PolyMap, p: &AffinePoint, c: &Curve, visits: &[usize]) -> bool {
    let mut cur = p.clone();
    let mut n = 0;
    for &v in visits {
        while n < v {
            cur = f.apply(&cur);
            n += 1;
        }
        if !c.equation().eval_at(&cur.x, &cur.y).is_zero() {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: &str, b: &str) -> PolyMap {
        PolyMap::parse(a, b).unwrap()
    }

    fn cv(s: &str) -> Curve {
        Curve::parse(s).unwrap()
    }

    #[test]
    fn orbits() {
        let o = orbit(&m("-x", "-y"), &AffinePoint::from_ints(1, 1), 10);
        assert_eq!(o.cycle, Some(Cycle { tail: 0, period: 2 }));
        assert_eq!(o.points.len(), 2);
        let o = orbit(&m("y", "y^2 - x"), &AffinePoint::origin(), 10);
        assert_eq!(o.cycle, Some(Cycle { tail: 0, period: 1 }));
        let o = orbit(&m("x + 1", "y"), &AffinePoint::origin(), 30);
        assert_eq!(o.cycle, None);
        assert_eq!(o.points.len(), 31);
        // Cycle closing exactly after the horizon.
        let o = orbit(&m("-x", "y"), &AffinePoint::from_ints(1, 0), 1);
        assert_eq!(o.cycle, Some(Cycle { tail: 0, period: 2 }));
        let o = orbit(&m("x^2", "y"), &AffinePoint::from_ints(3, 0), 100);
        assert!(o.truncated_at.is_some_and(|n| n < 30));
    }

    #[test]
    fn visit_sets() {
        let v = visit_set(&m("x + 1", "-y"), &AffinePoint::from_ints(0, 1), &cv("y - 1"), 10).unwrap();
        assert_eq!(v, vec![0, 2, 4, 6, 8, 10]);
        let v = visit_set(&m("-x", "-y"), &AffinePoint::from_ints(1, 1), &cv("x - 1"), 9).unwrap();
        assert_eq!(v, vec![0, 2, 4, 6, 8]);
        let v = visit_set(&m("x + 1", "2*y"), &AffinePoint::from_ints(0, 1), &cv("y - 2*x"), 20).unwrap();
        assert_eq!(v, vec![1, 2]);
    }

    #[test]
    fn ap_examples() {
        let n = 40;
        let evens: Vec<usize> = (0..=n).step_by(2).collect();
        let ap = ap_decompose(&evens, n);
        assert_eq!(ap.progressions, vec![Progression { a: 2, b: 0 }]);
        assert!(ap.exceptional.is_empty());

        let n = 41;
        let mut s = vec![0];
        s.extend((1..=n).step_by(2));
        let ap = ap_decompose(&s, n);
        assert_eq!(ap.progressions, vec![Progression { a: 2, b: 1 }]);
        assert_eq!(ap.exceptional, vec![0]);

        let ap = ap_decompose(&[0, 1, 4, 9], 100);
        assert!(ap.progressions.is_empty());
        assert_eq!(ap.exceptional, vec![0, 1, 4, 9]);
    }

    #[test]
    fn ap_reconstructs() {
        let s: Vec<usize> = (0..=60).filter(|n| n % 3 == 1 || *n == 2 || (n % 5 == 0 && *n < 20)).collect();
        let ap = ap_decompose(&s, 60);
        assert_eq!(ap.reconstruct(), s);
        assert_eq!(ap.tail_period, Some(3));
    }

    #[test]
    fn classifier_examples() {
        let p = DmlParams::default();
        let r = dml_classify(&m("x + 1", "-y"), &cv("y - 1"), &AffinePoint::from_ints(0, 1), &p);
        assert_eq!(r.ap.progressions, vec![Progression { a: 2, b: 0 }]);
        assert_eq!(r.preperiodic_witness, None);
        assert_eq!(r.curve_period_witness, Some(2));
        assert_eq!(r.verdict, DmlVerdict::DichotomyConfirmedCurvePeriodic);

        let r = dml_classify(&m("-x", "-y"), &cv("x - 1"), &AffinePoint::from_ints(1, 1), &p);
        assert_eq!(r.ap.progressions, vec![Progression { a: 2, b: 0 }]);
        assert_eq!(r.preperiodic_witness, Some(Cycle { tail: 0, period: 2 }));
        assert_eq!(r.verdict, DmlVerdict::DichotomyConfirmedPreperiodic);

        let r = dml_classify(&m("x + 1", "2*y"), &cv("y - 2*x"), &AffinePoint::from_ints(0, 1), &p);
        assert_eq!(r.visit_set, vec![1, 2]);
        assert_eq!(r.verdict, DmlVerdict::FiniteVisits);
        assert_eq!(r.height_trace, vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn guard_yields_undetermined() {
        let p = DmlParams {
            horizon: 50,
            max_period: 4,
            max_bits: 64,
        };
        let r = dml_classify(&m("x^2", "y"), &cv("y"), &AffinePoint::from_ints(3, 0), &p);
        assert!(!r.guards.is_empty());
        assert_ne!(r.verdict, DmlVerdict::Violation);
    }

    #[test]
    fn iterate_decomposition_agrees() {
        let f = m("x + 1", "-y");
        let p = AffinePoint::from_ints(0, 1);
        let c = cv("y - 1");
        let direct = visit_set(&f, &p, &c, 30).unwrap();
        for k in 2..=3 {
            assert_eq!(visit_set_via_iterate(&f, &p, &c, k, 30).unwrap(), direct);
        }
        assert!(check_visits(&f, &p, &c, &direct));
    }
}
