//! Irreducible factorization over Q of univariate and bivariate polynomials.
//!
//! Univariate: square-free decomposition, then Zassenhaus (Cantor-Zassenhaus
//! modulo a small prime, linear Hensel lifting past a Mignotte bound, and
//! subset recombination).
//!
//! Bivariate: content extraction, a shift `x -> x + a` making `F(a, y)`
//! square-free, factorization of `F(a, y)`, `x`-adic Hensel lifting to
//! precision `deg_x F + 1` and recombination with trial division.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::bivar::{self, from_ypoly, to_ypoly, YPoly};
use super::poly::Poly2;
use super::upoly::UPoly;
use super::Rat;

// ---------------------------------------------------------------------------
// Polynomials over F_p, coefficients ascending.

type Fp = Vec<u64>;

fn fp_trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    acc
}

fn fp_sub(a: &Fp, b: &Fp, p: u64) -> Fp {
    let n = a.len().max(b.len());
    fp_trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect(),
    )
}

fn fp_mul(a: &Fp, b: &Fp, p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = ((out[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
        }
    }
    fp_trim(out)
}

fn fp_div_rem(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp) {
    let db = b.len() - 1;
    if a.len() <= db {
        return (Vec::new(), a.clone());
    }
    let inv = inv_mod(b[db], p);
    let mut r = a.clone();
    let mut q = vec![0u64; a.len() - db];
    for k in (db..r.len()).rev() {
        if r[k] == 0 {
            continue;
        }
        let f = (r[k] as u128 * inv as u128 % p as u128) as u64;
        q[k - db] = f;
        for (j, &c) in b.iter().enumerate() {
            let idx = k - db + j;
            r[idx] = ((r[idx] as u128 + (p - f) as u128 * c as u128) % p as u128) as u64;
        }
    }
    r.truncate(db);
    (fp_trim(q), fp_trim(r))
}

fn fp_monic(a: &Fp, p: u64) -> Fp {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = inv_mod(l, p);
            a.iter().map(|&c| (c as u128 * inv as u128 % p as u128) as u64).collect()
        }
    }
}

fn fp_gcd(a: &Fp, b: &Fp, p: u64) -> Fp {
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_empty() {
        let r = fp_div_rem(&x, &y, p).1;
        x = y;
        y = r;
    }
    fp_monic(&x, p)
}

/// `(g, s, t)` with `s*a + t*b = g`, `g` monic.
fn fp_ext_gcd(a: &Fp, b: &Fp, p: u64) -> (Fp, Fp, Fp) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = fp_div_rem(&r0, &r1, p);
        let s = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        let t = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    let inv = inv_mod(*r0.last().unwrap(), p);
    let sc = |v: &Fp| -> Fp { fp_trim(v.iter().map(|&c| (c as u128 * inv as u128 % p as u128) as u64).collect()) };
    (sc(&r0), sc(&s0), sc(&t0))
}

fn fp_derivative(a: &Fp, p: u64) -> Fp {
    fp_trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| ((k as u64 % p) as u128 * c as u128 % p as u128) as u64)
            .collect(),
    )
}

fn fp_powmod(base: &Fp, e: &BigUint, m: &Fp, p: u64) -> Fp {
    let mut acc = vec![1u64];
    let b = fp_div_rem(base, m, p).1;
    for i in (0..e.bits()).rev() {
        acc = fp_div_rem(&fp_mul(&acc, &acc, p), m, p).1;
        if e.bit(i) {
            acc = fp_div_rem(&fp_mul(&acc, &b, p), m, p).1;
        }
    }
    acc
}

fn reduce_mod_p(f: &[BigInt], p: u64) -> Fp {
    let bp = BigInt::from(p);
    fp_trim(
        f.iter()
            .map(|c| c.mod_floor(&bp).to_u64().unwrap())
            .collect(),
    )
}

/// Distinct-degree then equal-degree (Cantor-Zassenhaus) factorization of a
/// monic square-free polynomial modulo an odd prime.
fn fp_factor(f: &Fp, p: u64) -> Vec<Fp> {
    let x: Fp = vec![0, 1];
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut d = 0usize;
    let mut by_degree: Vec<(Fp, usize)> = Vec::new();
    let pb = BigUint::from(p);
    while rest.len() - 1 >= 2 * (d + 1) {
        d += 1;
        h = fp_powmod(&h, &pb, &rest, p);
        let g = fp_gcd(&fp_sub(&h, &x, p), &rest, p);
        if g.len() > 1 {
            by_degree.push((g.clone(), d));
            rest = fp_div_rem(&rest, &g, p).0;
            h = fp_div_rem(&h, &rest, p).1;
        }
    }
    if rest.len() > 1 {
        let deg = rest.len() - 1;
        by_degree.push((rest, deg));
    }
    let mut out = Vec::new();
    let mut seed: u64 = 0x9e37_79b9_7f4a_7c15;
    for (g, d) in by_degree {
        equal_degree_split(&g, d, p, &mut seed, &mut out);
    }
    out
}

fn equal_degree_split(g: &Fp, d: usize, p: u64, seed: &mut u64, out: &mut Vec<Fp>) {
    let n = g.len() - 1;
    if n == d {
        out.push(fp_monic(g, p));
        return;
    }
    let e = (BigUint::from(p).pow(d as u32) - 1u32) >> 1;
    loop {
        let a: Fp = fp_trim(
            (0..n)
                .map(|_| {
                    *seed = seed
                        .wrapping_mul(6364136223846793005)
                        .wrapping_add(1442695040888963407);
                    (*seed >> 33) % p
                })
                .collect(),
        );
        if a.len() < 2 {
            continue;
        }
        let b = fp_sub(&fp_powmod(&a, &e, g, p), &vec![1u64], p);
        let c = fp_gcd(&b, g, p);
        let dc = c.len().saturating_sub(1);
        if dc > 0 && dc < n {
            let other = fp_div_rem(g, &c, p).0;
            equal_degree_split(&c, d, p, seed, out);
            equal_degree_split(&other, d, p, seed, out);
            return;
        }
    }
}

// ---------------------------------------------------------------------------
// Integer polynomials.

type ZPoly = Vec<BigInt>;

fn z_trim(mut a: ZPoly) -> ZPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn z_mul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    z_trim(out)
}

fn z_primitive(a: &ZPoly) -> ZPoly {
    let mut g = BigInt::zero();
    for c in a {
        g = g.gcd(c);
    }
    if g.is_zero() {
        return a.clone();
    }
    if a.last().unwrap().is_negative() {
        g = -g;
    }
    a.iter().map(|c| c / &g).collect()
}

/// Exact division over Z, `None` if `b` does not divide `a` in `Z[t]`.
fn z_exact_div(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
    let db = b.len() - 1;
    if a.len() <= db {
        return if a.is_empty() { Some(Vec::new()) } else { None };
    }
    let lb = &b[db];
    let mut r = a.clone();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for k in (db..r.len()).rev() {
        if r[k].is_zero() {
            continue;
        }
        let (f, rem) = r[k].div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        for (j, c) in b.iter().enumerate() {
            let idx = k - db + j;
            r[idx] -= &f * c;
        }
        q[k - db] = f;
    }
    if r.iter().any(|c| !c.is_zero()) {
        return None;
    }
    Some(z_trim(q))
}

fn symmetric_mod(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    let half: BigInt = m >> 1;
    if r > half {
        r - m
    } else {
        r
    }
}

const PRIMES: [u64; 30] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127,
];

/// Factors a primitive, square-free integer polynomial of positive degree
/// into primitive irreducibles.
fn factor_squarefree_z(f: &ZPoly) -> Vec<ZPoly> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![z_primitive(f)];
    }
    if f[0].is_zero() {
        let rest: ZPoly = f[1..].to_vec();
        let mut out = vec![vec![BigInt::zero(), BigInt::one()]];
        if rest.len() > 1 {
            out.extend(factor_squarefree_z(&rest));
        }
        return out;
    }
    let lc = f[n].clone();

    // Choose the good prime with the fewest modular factors among a few.
    let mut best: Option<(u64, Vec<Fp>)> = None;
    let mut tried = 0;
    for &p in PRIMES.iter().chain(std::iter::once(&131)) {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = reduce_mod_p(f, p);
        if fp.len() != n + 1 {
            continue;
        }
        if fp_gcd(&fp, &fp_derivative(&fp, p), p).len() > 1 {
            continue;
        }
        let facs = fp_factor(&fp_monic(&fp, p), p);
        if facs.len() == 1 {
            return vec![z_primitive(f)];
        }
        if best.as_ref().map_or(true, |(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried >= 5 {
            break;
        }
    }
    let (p, modular) = match best {
        Some(b) => b,
        None => return factor_squarefree_z_large_prime(f),
    };
    lift_and_recombine(f, p, modular)
}

/// Fallback when every small prime divides the leading coefficient or the
/// discriminant: search larger primes.
fn factor_squarefree_z_large_prime(f: &ZPoly) -> Vec<ZPoly> {
    let n = f.len() - 1;
    let lc = f[n].clone();
    let mut p = 131u64;
    loop {
        p += 2;
        if !crate::arith::is_prime_u64(p) || (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = reduce_mod_p(f, p);
        if fp.len() != n + 1 || fp_gcd(&fp, &fp_derivative(&fp, p), p).len() > 1 {
            continue;
        }
        let facs = fp_factor(&fp_monic(&fp, p), p);
        if facs.len() == 1 {
            return vec![z_primitive(f)];
        }
        return lift_and_recombine(f, p, facs);
    }
}

fn lift_and_recombine(f: &ZPoly, p: u64, modular: Vec<Fp>) -> Vec<ZPoly> {
    let n = f.len() - 1;
    let lc = f[n].clone();
    // Mignotte-style bound on coefficients of lc * (any factor).
    let maxc = f.iter().map(|c| c.abs()).max().unwrap();
    let bound: BigInt = BigInt::from(2) * lc.abs() * (BigInt::one() << n) * BigInt::from(n + 1) * maxc;

    let r = modular.len();
    // Bezout multipliers s_i with Σ s_i Π_{l≠i} g_l = 1 mod p.
    let mut bez = Vec::with_capacity(r);
    for i in 0..r {
        let mut others: Fp = vec![1];
        for (l, g) in modular.iter().enumerate() {
            if l != i {
                others = fp_mul(&others, g, p);
            }
        }
        let (_, s, _) = fp_ext_gcd(&others, &modular[i], p);
        bez.push(s);
    }
    let lc_inv = inv_mod(lc.mod_floor(&BigInt::from(p)).to_u64().unwrap(), p);

    let mut g: Vec<ZPoly> = modular
        .iter()
        .map(|v| v.iter().map(|&c| BigInt::from(c)).collect())
        .collect();
    let bp = BigInt::from(p);
    let mut pk = bp.clone();
    while pk <= bound {
        let mut prod: ZPoly = vec![lc.clone()];
        for gi in &g {
            prod = z_mul(&prod, gi);
        }
        let diff: ZPoly = (0..=n)
            .map(|k| f.get(k).cloned().unwrap_or_default() - prod.get(k).cloned().unwrap_or_default())
            .collect();
        let e: ZPoly = diff
            .iter()
            .map(|c| {
                let (q, rem) = c.div_rem(&pk);
                debug_assert!(rem.is_zero());
                q
            })
            .collect();
        let e_p = reduce_mod_p(&e, p);
        if !e_p.is_empty() {
            for i in 0..r {
                let t = fp_mul(&fp_mul(&e_p, &bez[i], p), &vec![lc_inv], p);
                let delta = fp_div_rem(&t, &modular[i], p).1;
                for (k, &c) in delta.iter().enumerate() {
                    g[i][k] += &pk * BigInt::from(c);
                }
            }
        }
        pk *= &bp;
    }

    // Recombination.
    let mut remaining: Vec<ZPoly> = g
        .into_iter()
        .map(|v| v.iter().map(|c| c.mod_floor(&pk)).collect())
        .collect();
    let mut current = f.clone();
    let mut out = Vec::new();
    let mut size = 1;
    while 2 * size <= remaining.len() {
        let mut found = None;
        for subset in combinations(remaining.len(), size) {
            let lcc = current.last().unwrap().clone();
            let mut cand: ZPoly = vec![lcc];
            for &i in &subset {
                cand = z_mul(&cand, &remaining[i]);
            }
            let cand: ZPoly = z_trim(cand.iter().map(|c| symmetric_mod(c, &pk)).collect());
            let cand = z_primitive(&cand);
            if !cand.is_empty() && !current[0].is_zero() && !(&current[0] % &cand[0]).is_zero() {
                continue;
            }
            if let Some(q) = z_exact_div(&current, &cand) {
                found = Some((subset, cand, q));
                break;
            }
        }
        match found {
            Some((subset, cand, q)) => {
                out.push(cand);
                current = q;
                remaining = remaining
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, v)| v)
                    .collect();
            }
            None => size += 1,
        }
    }
    out.push(z_primitive(&current));
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 && idx[0] == n - k {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Monic irreducible factors over Q with multiplicities, ordered by degree
/// and then coefficients. Constants yield an empty list.
pub fn factor_univariate(p: &UPoly) -> Vec<(UPoly, u32)> {
    let mut out = Vec::new();
    for (part, mult) in p.squarefree_decomposition() {
        let z = part.primitive_integer();
        for fz in factor_squarefree_z(&z) {
            out.push((UPoly::from_integer_coeffs(&fz).monic(), mult));
        }
    }
    out.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| a.0.coeffs().cmp(b.0.coeffs()))
    });
    out
}

pub fn is_irreducible_univariate(p: &UPoly) -> bool {
    let f = factor_univariate(p);
    f.len() == 1 && f[0].1 == 1
}

// ---------------------------------------------------------------------------
// Bivariate.

/// Truncated product of two `y`-polynomials with power-series coefficients.
fn mul_trunc(a: &YPoly, b: &YPoly, prec: usize) -> YPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![UPoly::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            out[i + j] = &out[i + j] + &(x * y).truncate(prec);
        }
    }
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

/// Inverse of a power series with nonzero constant term, modulo `t^prec`.
fn series_inverse(a: &UPoly, prec: usize) -> UPoly {
    let a0 = a.coeff(0);
    assert!(!a0.is_zero());
    let inv0 = a0.recip();
    let mut out = vec![Rat::zero(); prec];
    out[0] = inv0.clone();
    for k in 1..prec {
        let mut s = Rat::zero();
        for j in 1..=k {
            s += a.coeff(j) * &out[k - j];
        }
        out[k] = -(s * &inv0);
    }
    UPoly::from_coeffs(out)
}

fn shift_x(p: &Poly2, a: &Rat) -> Poly2 {
    p.translate(a, &Rat::zero())
}

fn y_univariate(f: &YPoly, at: &Rat) -> UPoly {
    UPoly::from_coeffs(f.iter().map(|c| c.eval(at)).collect())
}

/// Irreducible factors over Q of a bivariate polynomial, each normalized by
/// [`Poly2::monic`], sorted, without multiplicities. Constants give `[]`.
pub fn irreducible_factors(f: &Poly2) -> Vec<Poly2> {
    let mut out = Vec::new();
    if f.is_zero() || f.is_constant() {
        return out;
    }
    let sf = bivar::squarefree_part(f);
    factor_squarefree_bivariate(&sf, &mut out);
    let mut out: Vec<Poly2> = out.into_iter().map(|p| p.monic()).collect();
    out.sort_by(|a, b| {
        a.total_degree()
            .cmp(&b.total_degree())
            .then_with(|| a.to_string().cmp(&b.to_string()))
    });
    out.dedup();
    out
}

/// Irreducible factors with multiplicities.
pub fn factor_with_multiplicity(f: &Poly2) -> Vec<(Poly2, u32)> {
    irreducible_factors(f)
        .into_iter()
        .map(|g| {
            let mut k = 0;
            let mut rest = f.clone();
            while let Some(q) = bivar::exact_div(&rest, &g) {
                rest = q;
                k += 1;
            }
            (g, k)
        })
        .collect()
}

pub fn is_irreducible(f: &Poly2) -> bool {
    !f.is_constant() && irreducible_factors(f).len() == 1 && bivar::is_squarefree(f)
}

fn factor_squarefree_bivariate(f: &Poly2, out: &mut Vec<Poly2>) {
    if f.degree_in(1).unwrap_or(0) == 0 {
        let u = UPoly::from_poly2(f, 0).unwrap();
        out.extend(factor_univariate(&u).into_iter().map(|(g, _)| g.to_poly2(0)));
        return;
    }
    let fy = to_ypoly(f);
    let content = bivar::content_in_x(&fy);
    if !content.is_constant() {
        out.extend(factor_univariate(&content).into_iter().map(|(g, _)| g.to_poly2(0)));
    }
    let prim: YPoly = fy
        .iter()
        .map(|c| c.exact_div(&content).expect("content divides"))
        .collect();
    let prim_poly = from_ypoly(&prim);
    if prim_poly.degree_in(0).unwrap_or(0) == 0 {
        let u = UPoly::from_poly2(&prim_poly, 1).unwrap();
        out.extend(factor_univariate(&u).into_iter().map(|(g, _)| g.to_poly2(1)));
        return;
    }

    // Shift so that F(0, y) is square-free of full degree.
    let lcy = prim.last().unwrap().clone();
    let mut shift = Rat::zero();
    for k in 0i64.. {
        let a = Rat::from_integer(BigInt::from(if k % 2 == 0 { k / 2 } else { -(k + 1) / 2 }));
        if lcy.eval(&a).is_zero() {
            continue;
        }
        if y_univariate(&prim, &a).is_squarefree() {
            shift = a;
            break;
        }
    }
    let g = shift_x(&prim_poly, &shift);
    let back = -shift.clone();
    let factors = factor_primitive_shifted(&g);
    out.extend(factors.into_iter().map(|h| shift_x(&h, &back)));
}

/// `g` is primitive in `y` over `Q[x]`, square-free, with `g(0, y)`
/// square-free of full `y`-degree.
fn factor_primitive_shifted(g: &Poly2) -> Vec<Poly2> {
    let gy = to_ypoly(g);
    let u0 = y_univariate(&gy, &Rat::zero());
    let local: Vec<UPoly> = factor_univariate(&u0).into_iter().map(|(h, _)| h).collect();
    if local.len() <= 1 {
        return vec![g.clone()];
    }
    let dx = g.degree_in(0).unwrap_or(0) as usize;
    let prec = dx + 1;
    let n = gy.len() - 1;
    let lc = gy[n].clone();
    let lc_inv = series_inverse(&lc, prec);
    let monic: YPoly = gy.iter().map(|c| (c * &lc_inv).truncate(prec)).collect();

    let r = local.len();
    let mut bez = Vec::with_capacity(r);
    for i in 0..r {
        let mut others = UPoly::one();
        for (l, h) in local.iter().enumerate() {
            if l != i {
                others = &others * h;
            }
        }
        let (_, s, _) = others.ext_gcd(&local[i]);
        bez.push(s);
    }

    // Lifted factors, monic in y: factors[i][j] is the coefficient of y^j.
    let mut lifted: Vec<YPoly> = local
        .iter()
        .map(|h| h.coeffs().iter().map(|c| UPoly::constant(c.clone())).collect())
        .collect();
    for step in 1..prec {
        let mut prod: YPoly = vec![UPoly::one()];
        for gi in &lifted {
            prod = mul_trunc(&prod, gi, step + 1);
        }
        // x^step coefficient of (monic - prod), as a polynomial in y.
        let len = monic.len().max(prod.len());
        let e = UPoly::from_coeffs(
            (0..len)
                .map(|j| {
                    let a = monic.get(j).map(|c| c.coeff(step)).unwrap_or_else(Rat::zero);
                    let b = prod.get(j).map(|c| c.coeff(step)).unwrap_or_else(Rat::zero);
                    a - b
                })
                .collect(),
        );
        if e.is_zero() {
            continue;
        }
        for i in 0..r {
            let delta = (&e * &bez[i]).rem(&local[i]);
            for (j, c) in delta.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let term = UPoly::constant(c.clone()).shift(step);
                lifted[i][j] = &lifted[i][j] + &term;
            }
        }
    }

    let mut remaining = lifted;
    let mut current = g.clone();
    let mut out = Vec::new();
    let mut size = 1;
    while 2 * size <= remaining.len() {
        let mut found = None;
        let cur_y = to_ypoly(&current);
        let cur_lc = cur_y.last().unwrap().clone();
        for subset in combinations(remaining.len(), size) {
            let mut cand: YPoly = vec![cur_lc.clone()];
            for &i in &subset {
                cand = mul_trunc(&cand, &remaining[i], prec);
            }
            let content = bivar::content_in_x(&cand);
            let cand: YPoly = cand
                .iter()
                .map(|c| c.exact_div(&content).expect("content divides"))
                .collect();
            let cand_poly = from_ypoly(&cand);
            if let Some(q) = bivar::exact_div(&current, &cand_poly) {
                found = Some((subset, cand_poly, q));
                break;
            }
        }
        match found {
            Some((subset, cand, q)) => {
                out.push(cand);
                current = q;
                remaining = remaining
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, v)| v)
                    .collect();
            }
            None => size += 1,
        }
    }
    if !current.is_constant() {
        out.push(current);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;

    fn u(c: &[i64]) -> UPoly {
        UPoly::from_ints(c)
    }

    #[test]
    fn combinations_enumerate() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(combinations(5, 1).len(), 5);
    }

    #[test]
    fn univariate_known_factorizations() {
        // x^4 + 4 = (x^2 - 2x + 2)(x^2 + 2x + 2)
        let f = factor_univariate(&u(&[4, 0, 0, 0, 1]));
        assert_eq!(f, vec![(u(&[2, -2, 1]), 1), (u(&[2, 2, 1]), 1)]);
        // x^4 + 1 is irreducible over Q but splits modulo every prime.
        assert!(is_irreducible_univariate(&u(&[1, 0, 0, 0, 1])));
        // Swinnerton-Dyer-like: (x^2-2)(x^2-3)
        let f = factor_univariate(&u(&[6, 0, -5, 0, 1]));
        assert_eq!(f.len(), 2);
    }

    #[test]
    fn univariate_with_multiplicity_and_rational_roots() {
        // 4 (x - 1/2)^2 (x + 3) (x^2 + 1)
        let a = &u(&[-1, 2]) * &u(&[-1, 2]);
        let b = &u(&[3, 1]) * &u(&[1, 0, 1]);
        let f = factor_univariate(&(&a * &b));
        assert_eq!(f.len(), 3);
        assert!(f.contains(&(UPoly::from_coeffs(vec![Rat::new((-1).into(), 2.into()), Rat::one()]), 2)));
        assert!(f.contains(&(u(&[3, 1]), 1)));
        assert!(f.contains(&(u(&[1, 0, 1]), 1)));
    }

    #[test]
    fn cyclotomic_product() {
        // x^12 - 1 factors into 6 cyclotomic polynomials.
        let mut c = vec![0i64; 13];
        c[0] = -1;
        c[12] = 1;
        let f = factor_univariate(&u(&c));
        assert_eq!(f.len(), 6);
        let prod = f.iter().fold(UPoly::one(), |acc, (g, _)| &acc * g);
        assert_eq!(prod, u(&c));
    }

    fn p(s: &str) -> Poly2 {
        parse_poly(s).unwrap()
    }

    #[test]
    fn bivariate_factors() {
        let f = p("(y - x^2)*(x*y - 1)*(x + y + 1)");
        let facs = irreducible_factors(&f);
        assert_eq!(facs.len(), 3);
        for g in [p("y - x^2"), p("x*y - 1"), p("x + y + 1")] {
            assert!(facs.contains(&g.monic()), "missing {g}");
        }
    }

    #[test]
    fn bivariate_with_contents() {
        let f = p("x*(x - 1)*y*(y^2 - 2)*(x^2 + y^2 + 1)");
        let facs = irreducible_factors(&f);
        assert_eq!(facs.len(), 5);
    }

    #[test]
    fn bivariate_irreducible() {
        assert!(is_irreducible(&p("y^2 - x^3 - x")));
        assert!(is_irreducible(&p("x^2 + y^2 - 1")));
        assert!(!is_irreducible(&p("x^2 - y^2")));
        assert!(is_irreducible(&p("y^2 - 2*x^2")));
    }

    #[test]
    fn bivariate_needing_shift() {
        // F(0, y) = y^2 is not square-free.
        let f = p("(y - x)*(y + x - x^2)");
        assert_eq!(irreducible_factors(&f).len(), 2);
    }

    #[test]
    fn multiplicities() {
        let f = p("(y - x)^3*(x + 1)");
        let m = factor_with_multiplicity(&f);
        assert!(m.contains(&(p("y - x").monic(), 3)));
        assert!(m.contains(&(p("x + 1"), 1)));
    }
}
