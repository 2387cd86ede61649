//! Places of Q, absolute values, the product formula and heights of
//! rational points.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{AffinePoint, PolyMap, Rat};
use crate::arith;
use crate::error::{Error, Result};

/// A place of Q: the archimedean place or a finite prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Archimedean,
    Finite(u64),
}

impl Place {
    pub fn finite(p: u64) -> Result<Self> {
        if arith::is_prime_u64(p) {
            Ok(Place::Finite(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn is_archimedean(&self) -> bool {
        matches!(self, Place::Archimedean)
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Archimedean => write!(f, "inf"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;

    /// `inf`, `infinity`, `∞` or a prime such as `2`, `p7`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" | "archimedean" => Ok(Place::Archimedean),
            other => {
                let digits = other.strip_prefix('p').unwrap_or(other);
                let p: u64 = digits
                    .parse()
                    .map_err(|_| Error::Invalid(format!("place '{t}'")))?;
                Place::finite(p)
            }
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `ord_p(x)`, `None` for zero.
pub fn ord_p(x: &Rat, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let bp = BigInt::from(p);
    let up = arith::valuation(x.numer(), &bp) as i64;
    let down = arith::valuation(x.denom(), &bp) as i64;
    Some(up - down)
}

fn rat_pow(p: u64, e: i64) -> Rat {
    let base = BigInt::from(p).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        Rat::from_integer(base)
    } else {
        Rat::new(BigInt::one(), base)
    }
}

/// `|x|_v`, exact at every place. `|x|_p = p^(-ord_p x)`.
pub fn abs_value(x: &Rat, v: Place) -> Rat {
    match v {
        Place::Archimedean => x.abs(),
        Place::Finite(p) => match ord_p(x, p) {
            None => Rat::zero(),
            Some(k) => rat_pow(p, -k),
        },
    }
}

/// Primes dividing the numerator or the denominator of `x`.
pub fn support(x: &Rat) -> Vec<u64> {
    let mut ps: Vec<u64> = Vec::new();
    for part in [x.numer(), x.denom()] {
        let m = part.magnitude();
        if m.is_zero() || m.is_one() {
            continue;
        }
        for (p, _) in arith::factor(m) {
            ps.push(p.to_u64().expect("prime fits in u64 for supported inputs"));
        }
    }
    ps.sort_unstable();
    ps.dedup();
    ps
}

/// The product of `|x|_v` over the archimedean place and every prime in the
/// support of `x`.
pub fn place_product(x: &Rat) -> Result<Rat> {
    if x.is_zero() {
        return Err(Error::ZeroValue);
    }
    let mut acc = abs_value(x, Place::Archimedean);
    for p in support(x) {
        acc *= abs_value(x, Place::Finite(p));
    }
    Ok(acc)
}

pub fn product_formula_check(x: &Rat) -> Result<bool> {
    Ok(place_product(x)?.is_one())
}

/// A point of projective space in coprime integer coordinates whose first
/// nonzero coordinate is positive.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: Vec<BigInt>,
}

impl ProjPoint {
    /// Canonicalizes raw integer coordinates.
    pub fn new(raw: Vec<BigInt>) -> Result<Self> {
        if raw.is_empty() || raw.iter().all(|c| c.is_zero()) {
            return Err(Error::Invalid("projective point with all coordinates zero".into()));
        }
        let mut g = BigInt::zero();
        for c in &raw {
            g = g.gcd(c);
        }
        if raw.iter().find(|c| !c.is_zero()).unwrap().is_negative() {
            g = -g;
        }
        Ok(ProjPoint {
            coords: raw.into_iter().map(|c| c / &g).collect(),
        })
    }

    pub fn from_ints(raw: &[i64]) -> Result<Self> {
        ProjPoint::new(raw.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Canonical representative of `[r_0 : ... : r_n]` for rationals.
    pub fn from_rats(raw: &[Rat]) -> Result<Self> {
        let mut den = BigInt::one();
        for c in raw {
            den = den.lcm(c.denom());
        }
        ProjPoint::new(raw.iter().map(|c| c.numer() * (&den / c.denom())).collect())
    }

    /// `[1 : x : y]`.
    pub fn from_affine(p: &AffinePoint) -> Self {
        ProjPoint::from_rats(&[Rat::one(), p.x.clone(), p.y.clone()]).expect("first coordinate is 1")
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn as_rats(&self) -> Vec<Rat> {
        self.coords.iter().map(|c| Rat::from_integer(c.clone())).collect()
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(":"))
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProjPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<String>::deserialize(d)?;
        let coords = parts
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        ProjPoint::new(coords).map_err(serde::de::Error::custom)
    }
}

/// Height of a canonical projective point: the largest absolute coordinate.
pub fn height_proj(p: &ProjPoint) -> BigInt {
    p.coords.iter().map(|c| c.abs()).max().expect("nonempty")
}

/// Height of `[1 : x : y]`.
pub fn height_affine(p: &AffinePoint) -> BigInt {
    height_proj(&ProjPoint::from_affine(p))
}

/// Natural logarithm of a positive integer of any size.
pub fn ln_big(n: &BigInt) -> f64 {
    debug_assert!(n.is_positive());
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top: BigInt = n >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Largest number of raw coordinate tuples `northcott_enumerate` scans.
pub const NORTHCOTT_DEFAULT_CAP: u64 = 5_000_000;

/// Every canonical point of `P^dim(Q)` with height at most `bound`, sorted.
pub fn northcott_enumerate(bound: u64, dim: usize) -> Result<Vec<ProjPoint>> {
    northcott_enumerate_capped(bound, dim, NORTHCOTT_DEFAULT_CAP)
}

pub fn northcott_enumerate_capped(bound: u64, dim: usize, cap: u64) -> Result<Vec<ProjPoint>> {
    if !(1..=2).contains(&dim) {
        return Err(Error::Precondition(format!("dimension {dim} not in {{1, 2}}")));
    }
    let side = 2 * bound as u128 + 1;
    let tuples = side.pow(dim as u32 + 1);
    if tuples > cap as u128 {
        return Err(Error::Guard(format!(
            "northcott enumeration would scan {tuples} tuples, cap is {cap}"
        )));
    }
    let b = bound as i64;
    let mut out = Vec::new();
    let mut cur = vec![-b; dim + 1];
    if bound == 0 {
        return Ok(out);
    }
    loop {
        if is_canonical(&cur) {
            out.push(ProjPoint {
                coords: cur.iter().map(|&c| BigInt::from(c)).collect(),
            });
        }
        let mut i = dim + 1;
        loop {
            if i == 0 {
                out.sort();
                return Ok(out);
            }
            i -= 1;
            if cur[i] < b {
                cur[i] += 1;
                for c in cur.iter_mut().skip(i + 1) {
                    *c = -b;
                }
                break;
            }
        }
    }
}

fn is_canonical(c: &[i64]) -> bool {
    match c.iter().find(|&&v| v != 0) {
        None => false,
        Some(&first) => first > 0 && c.iter().fold(0i64, |g, &v| g.gcd(&v)) == 1,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeightSample {
    pub n: usize,
    #[serde(with = "bigint_string")]
    pub height: BigInt,
    /// `log H(f^n p) / log H(f^(n-1) p)`, absent when either height is 1.
    pub log_ratio: Option<f64>,
}

/// Heights along the orbit `p, f(p), ..., f^N(p)` with successive log ratios.
/// Stops early if a height exceeds `max_bits`.
pub fn height_growth_probe(
    f: &PolyMap,
    p: &AffinePoint,
    horizon: usize,
    max_bits: u64,
) -> Vec<HeightSample> {
    let mut out: Vec<HeightSample> = Vec::with_capacity(horizon + 1);
    let mut cur = p.clone();
    for n in 0..=horizon {
        let h = height_affine(&cur);
        let log_ratio = out.last().and_then(|prev| {
            if prev.height.is_one() || h.is_one() {
                None
            } else {
                Some(ln_big(&h) / ln_big(&prev.height))
            }
        });
        let too_big = h.bits() > max_bits;
        out.push(HeightSample { n, height: h, log_ratio });
        if too_big || n == horizon {
            break;
        }
        cur = f.apply(&cur);
    }
    out
}

pub(crate) mod bigint_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
