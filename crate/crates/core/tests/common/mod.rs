//! Random generators and independent oracles shared by the integration
//! tests. The oracles use only ring arithmetic from the library, never the
//! algorithm under test.
#![allow(dead_code)]

use dmlwb::algebra::{AffinePoint, Poly2, PolyMap, Rat, UPoly};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn r(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

pub fn rand_rat(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Rat {
    r(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

pub fn rand_nonzero_rat(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Rat {
    loop {
        let x = rand_rat(rng, num, den);
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn rand_point(rng: &mut ChaCha8Rng, num: i64, den: i64) -> AffinePoint {
    AffinePoint::new(rand_rat(rng, num, den), rand_rat(rng, num, den))
}

/// Random polynomial of total degree at most `deg` with `terms` terms.
pub fn rand_poly2(rng: &mut ChaCha8Rng, deg: u32, terms: usize, coeff: i64) -> Poly2 {
    let mut p = Poly2::zero();
    for _ in 0..terms {
        let i = rng.gen_range(0..=deg);
        let j = rng.gen_range(0..=deg - i);
        p.add_term([i, j], r(rng.gen_range(-coeff..=coeff), 1));
    }
    p
}

pub fn rand_upoly(rng: &mut ChaCha8Rng, deg: usize, coeff: i64) -> UPoly {
    let mut c: Vec<Rat> = (0..=deg).map(|_| r(rng.gen_range(-coeff..=coeff), 1)).collect();
    if c[deg].is_zero() {
        c[deg] = r(1, 1);
    }
    UPoly::from_coeffs(c)
}

/// Determinant of a square matrix over `Q[x]` by fraction-free elimination.
pub fn det_qx(mut m: Vec<Vec<UPoly>>) -> UPoly {
    let n = m.len();
    if n == 0 {
        return UPoly::one();
    }
    let mut sign = UPoly::one();
    let mut prev = UPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -&sign;
                }
                None => return UPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.exact_div(&prev).expect("fraction-free step is exact");
            }
        }
        prev = m[k][k].clone();
    }
    &sign * &m[n - 1][n - 1]
}

/// Coefficients of `p` in `y`, lowest first, as polynomials in `x`.
pub fn y_coeffs(p: &Poly2) -> Vec<UPoly> {
    let dy = p.degree_in(1).unwrap_or(0) as usize;
    let dx = p.degree_in(0).unwrap_or(0);
    (0..=dy)
        .map(|j| UPoly::from_coeffs((0..=dx).map(|i| p.coeff(&[i, j as u32])).collect()))
        .collect()
}

/// `Res_y(f, g)` from the Sylvester matrix.
pub fn oracle_resultant_y(f: &Poly2, g: &Poly2) -> UPoly {
    let a = y_coeffs(f);
    let b = y_coeffs(g);
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    if size == 0 {
        return UPoly::one();
    }
    let mut rows = vec![vec![UPoly::zero(); size]; size];
    for i in 0..n {
        for (k, c) in a.iter().rev().enumerate() {
            rows[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in b.iter().rev().enumerate() {
            rows[n + i][i + k] = c.clone();
        }
    }
    det_qx(rows)
}

/// Multiplicity of `x = a` as a root of `p` (`None` for `p = 0`).
pub fn root_order(p: &UPoly, a: &Rat) -> Option<u64> {
    if p.is_zero() {
        return None;
    }
    let lin = UPoly::from_coeffs(vec![-a.clone(), Rat::one()]);
    let mut k = 0;
    let mut cur = p.clone();
    while let Some(q) = cur.exact_div(&lin) {
        cur = q;
        k += 1;
    }
    Some(k)
}

/// `F(X + cY, Y)`.
pub fn shear(p: &Poly2, c: &Rat) -> Poly2 {
    let x = &Poly2::x() + &Poly2::y().scale(c);
    p.substitute(&[x, Poly2::y()], 64).unwrap()
}

fn monic_in_y(p: &Poly2) -> bool {
    let d = p.total_degree().unwrap_or(0);
    p.degree_in(1) == Some(d) && !p.coeff(&[0, d]).is_zero()
}

/// `I_p(F, G)` as the order at `p` of a resultant after a shear that makes
/// both curves monic in `y`. Points on the same vertical line add up, so the
/// least value over several shears is taken.
pub fn oracle_multiplicity(f: &Poly2, g: &Poly2, p: &AffinePoint) -> Option<u64> {
    let mut best: Option<u64> = None;
    let mut used = 0;
    for c in [1i64, 2, -1, 3, -2, 5, 7, -3, 11, 13, -5, 17] {
        let c = r(c, 1);
        let (fs, gs) = (shear(f, &c), shear(g, &c));
        if !monic_in_y(&fs) || !monic_in_y(&gs) {
            continue;
        }
        let a = &p.x - &c * &p.y;
        let ord = root_order(&oracle_resultant_y(&fs, &gs), &a)?;
        best = Some(best.map_or(ord, |b: u64| b.min(ord)));
        used += 1;
        if used == 6 {
            break;
        }
    }
    best
}

/// `|x|_p` by repeated division.
pub fn oracle_abs_p(x: &Rat, p: u64) -> Rat {
    if x.is_zero() {
        return Rat::zero();
    }
    let pb = BigInt::from(p);
    let mut k: i64 = 0;
    let (mut n, mut d) = (x.numer().abs(), x.denom().abs());
    while (&n % &pb).is_zero() {
        n /= &pb;
        k += 1;
    }
    while (&d % &pb).is_zero() {
        d /= &pb;
        k -= 1;
    }
    let base = Rat::from_integer(pb);
    if k >= 0 {
        Rat::one() / num_traits::pow(base, k as usize)
    } else {
        num_traits::pow(base, (-k) as usize)
    }
}

/// Prime divisors by trial division.
pub fn trial_primes(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = 2u64;
    while BigInt::from(p) * BigInt::from(p) <= n {
        if (&n % p).is_zero() {
            out.push(p);
            while (&n % p).is_zero() {
                n /= p;
            }
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push(n.try_into().expect("small test inputs"));
    }
    out
}

/// `f^0(p), ..., f^N(p)` by plain iteration.
pub fn brute_orbit(f: &PolyMap, p: &AffinePoint, horizon: usize) -> Vec<AffinePoint> {
    let mut out = vec![p.clone()];
    for _ in 0..horizon {
        let next = f.apply(out.last().unwrap());
        out.push(next);
    }
    out
}

/// Triangular map `(a x + b, A(x) y + B(x))` with small random data.
pub fn rand_triangular(rng: &mut ChaCha8Rng) -> PolyMap {
    let a = rand_nonzero_rat(rng, 3, 2);
    let b = rand_rat(rng, 3, 1);
    let (da, db) = (rng.gen_range(1..=3), rng.gen_range(0..=5));
    let amap = rand_upoly(rng, da, 3);
    let bmap = rand_upoly(rng, db, 3);
    let f1 = &Poly2::x().scale(&a) + &Poly2::constant(b);
    let f2 = &(&amap.to_poly2(0) * &Poly2::y()) + &bmap.to_poly2(0);
    PolyMap::new(f1, f2)
}
