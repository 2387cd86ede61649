//! Degree sequences `deg f^n`, dynamical degree estimates and the degree
//! criterion for algebraic stability on the projective plane.

use serde::{Deserialize, Serialize};

use crate::algebra::{PolyMap, DEFAULT_DEGREE_CAP};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthClass {
    Bounded,
    Linear,
    Exponential,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeProfile {
    /// `degrees[k]` is `deg f^(k+1)`.
    pub degrees: Vec<u32>,
    pub lambda_estimate: f64,
    pub growth_class: GrowthClass,
}

impl DegreeProfile {
    pub fn horizon(&self) -> usize {
        self.degrees.len()
    }

    /// `deg f^n` for `1 <= n <= N`.
    pub fn degree(&self, n: usize) -> u32 {
        self.degrees[n - 1]
    }

    /// Checks `deg f^(n+m) <= deg f^n * deg f^m` for every pair in range.
    pub fn is_submultiplicative(&self) -> bool {
        let n = self.degrees.len();
        (1..=n).all(|i| {
            (1..=n - i).all(|j| {
                self.degree(i + j) as u64 <= self.degree(i) as u64 * self.degree(j) as u64
            })
        })
    }
}

/// `max(deg f1, deg f2)`; zero for a constant map.
pub fn algebraic_degree(f: &PolyMap) -> u32 {
    f.f1.total_degree()
        .unwrap_or(0)
        .max(f.f2.total_degree().unwrap_or(0))
}

/// Expands `f^n` for `n = 1..=N` and records the degrees.
pub fn degree_sequence(f: &PolyMap, horizon: usize) -> Result<DegreeProfile> {
    degree_sequence_capped(f, horizon, DEFAULT_DEGREE_CAP)
}

pub fn degree_sequence_capped(f: &PolyMap, horizon: usize, cap: u32) -> Result<DegreeProfile> {
    if horizon == 0 {
        return Err(Error::Precondition("horizon must be at least 1".into()));
    }
    if f.is_constant() {
        return Err(Error::Precondition("constant map has no degree sequence".into()));
    }
    let mut degrees = Vec::with_capacity(horizon);
    let mut acc = f.clone();
    degrees.push(algebraic_degree(&acc));
    for _ in 1..horizon {
        acc = f.compose_components(&acc, cap)?;
        degrees.push(algebraic_degree(&acc));
    }
    Ok(profile_from_degrees(degrees))
}

pub fn profile_from_degrees(degrees: Vec<u32>) -> DegreeProfile {
    let n = degrees.len();
    DegreeProfile {
        lambda_estimate: nth_root(degrees[n - 1] as u64, n as u32),
        growth_class: growth_class(&degrees),
        degrees,
    }
}

/// `d^(1/n)`, exact when `d` is a perfect `n`-th power.
fn nth_root(d: u64, n: u32) -> f64 {
    let approx = (d as f64).powf(1.0 / n as f64);
    let r = approx.round() as u64;
    if r > 0 && r.checked_pow(n) == Some(d) {
        r as f64
    } else {
        approx
    }
}

/// Finite-horizon growth label computed on the last `max(ceil(N/2), min(3, N))`
/// entries.
pub fn growth_class(degrees: &[u32]) -> GrowthClass {
    let n = degrees.len();
    let w = n.div_ceil(2).max(n.min(3));
    let tail = &degrees[n - w..];
    if tail.windows(2).all(|p| p[0] == p[1]) {
        return GrowthClass::Bounded;
    }
    if tail.len() >= 3
        && tail
            .windows(3)
            .all(|t| t[2] as i64 - 2 * t[1] as i64 + t[0] as i64 == 0)
    {
        return GrowthClass::Linear;
    }
    // last ratio >= 1 + 1/N  <=>  N * d_N >= (N + 1) * d_{N-1}
    if tail.len() >= 2 {
        let last = tail[tail.len() - 1] as u128;
        let prev = tail[tail.len() - 2] as u128;
        let big_enough = n as u128 * last >= (n as u128 + 1) * prev;
        // d1/d0 <= d2/d1  <=>  d1^2 <= d0 d2
        let nondecreasing = tail
            .windows(3)
            .all(|t| (t[1] as u128).pow(2) <= t[0] as u128 * t[2] as u128);
        if big_enough && nondecreasing {
            return GrowthClass::Exponential;
        }
    }
    GrowthClass::Undetermined
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DynamicalDegreeEstimate {
    /// `deg(f^N)^(1/N)`.
    pub estimate: f64,
    /// `deg(f^N) / deg(f^(N-1))`.
    pub last_ratio: f64,
}

pub fn dynamical_degree_estimate(f: &PolyMap, horizon: usize) -> Result<DynamicalDegreeEstimate> {
    if horizon < 2 {
        return Err(Error::Precondition("horizon must be at least 2".into()));
    }
    let prof = degree_sequence(f, horizon)?;
    Ok(DynamicalDegreeEstimate {
        estimate: prof.lambda_estimate,
        last_ratio: prof.degree(horizon) as f64 / prof.degree(horizon - 1) as f64,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict", content = "n")]
pub enum StabilityVerdict {
    StableUpToN(usize),
    UnstableAt(usize),
}

/// Least `n <= N` with `deg f^n < (deg f)^n`, else stable up to `N`.
pub fn is_algebraically_stable_p2(f: &PolyMap, horizon: usize) -> Result<StabilityVerdict> {
    if horizon < 2 {
        return Err(Error::Precondition("horizon must be at least 2".into()));
    }
    let prof = degree_sequence(f, horizon)?;
    Ok(stability_from_profile(&prof))
}

pub fn stability_from_profile(prof: &DegreeProfile) -> StabilityVerdict {
    let d = prof.degree(1) as u128;
    let mut power: u128 = 1;
    for n in 1..=prof.horizon() {
        power = power.saturating_mul(d);
        if (prof.degree(n) as u128) < power {
            return StabilityVerdict::UnstableAt(n);
        }
    }
    StabilityVerdict::StableUpToN(prof.horizon())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: &str, b: &str) -> PolyMap {
        PolyMap::parse(a, b).unwrap()
    }

    #[test]
    fn algebraic_degrees() {
        assert_eq!(algebraic_degree(&m("y", "y^2 - x")), 2);
        assert_eq!(algebraic_degree(&m("2*x", "x^3*y + x^5")), 5);
        assert_eq!(algebraic_degree(&PolyMap::identity()), 1);
    }

    #[test]
    fn henon_sequence() {
        let p = degree_sequence(&m("y", "y^2 - x"), 4).unwrap();
        assert_eq!(p.degrees, vec![2, 4, 8, 16]);
        assert_eq!(p.growth_class, GrowthClass::Exponential);
        assert_eq!(p.lambda_estimate, 2.0);
    }

    #[test]
    fn triangular_sequence_is_linear() {
        let p = degree_sequence(&m("2*x", "x^3*y + x^5"), 3).unwrap();
        assert_eq!(p.degrees, vec![5, 8, 11]);
        assert_eq!(p.growth_class, GrowthClass::Linear);
    }

    #[test]
    fn translation_is_bounded() {
        let p = degree_sequence(&m("x + 1", "y - 2"), 6).unwrap();
        assert_eq!(p.degrees, vec![1; 6]);
        assert_eq!(p.growth_class, GrowthClass::Bounded);
        assert_eq!(p.lambda_estimate, 1.0);
    }

    #[test]
    fn stability_verdicts() {
        assert_eq!(
            is_algebraically_stable_p2(&m("y", "y^2 - x"), 6).unwrap(),
            StabilityVerdict::StableUpToN(6)
        );
        assert_eq!(
            is_algebraically_stable_p2(&m("2*x", "x^3*y + x^5"), 2).unwrap(),
            StabilityVerdict::UnstableAt(2)
        );
        assert_eq!(
            is_algebraically_stable_p2(&m("2*x + 3*y", "x - y"), 5).unwrap(),
            StabilityVerdict::StableUpToN(5)
        );
    }

    #[test]
    fn estimate_trends_down_for_triangular() {
        let e = dynamical_degree_estimate(&m("2*x", "x^3*y + x^5"), 8).unwrap();
        assert!((e.estimate - 26f64.powf(1.0 / 8.0)).abs() < 1e-12);
        assert!(e.estimate < 1.51);
        assert_eq!(dynamical_degree_estimate(&PolyMap::identity(), 3).unwrap().estimate, 1.0);
    }

    #[test]
    fn growth_class_edge_cases() {
        assert_eq!(growth_class(&[3]), GrowthClass::Bounded);
        assert_eq!(growth_class(&[2, 3]), GrowthClass::Exponential);
        assert_eq!(growth_class(&[2, 4, 5, 7, 8]), GrowthClass::Undetermined);
    }
}
