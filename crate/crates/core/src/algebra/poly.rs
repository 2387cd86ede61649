//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors, so iteration order
//! (and therefore every serialized form) is deterministic. Zero coefficients
//! are never stored.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rat;
use crate::error::{Error, Result};

/// Default cap on the total degree of any polynomial produced by a
/// composition or power.
pub const DEFAULT_DEGREE_CAP: u32 = 4096;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MPoly<const N: usize> {
    terms: BTreeMap<[u32; N], Rat>,
}

/// Polynomials in `x`, `y`.
pub type Poly2 = MPoly<2>;
/// Polynomials in `x1, x2, x3, x4` (quotient coordinates of a Hirzebruch surface).
pub type Poly4 = MPoly<4>;

fn add_exps<const N: usize>(a: &[u32; N], b: &[u32; N]) -> [u32; N] {
    let mut out = [0u32; N];
    for i in 0..N {
        out[i] = a[i] + b[i];
    }
    out
}

fn power_table(base: &BigInt, max: usize) -> Vec<BigInt> {
    let mut pw = Vec::with_capacity(max + 1);
    pw.push(BigInt::one());
    for k in 1..=max {
        let next = &pw[k - 1] * base;
        pw.push(next);
    }
    pw
}

/// `num / den` in lowest terms; the gcd runs on operands no larger than `den`.
pub(crate) fn reduce_fraction(num: BigInt, den: BigInt) -> Rat {
    if den.is_one() || num.is_zero() {
        return Rat::from_integer(num / den);
    }
    let g = crate::arith::gcd(&(&num % &den), &den);
    let (mut n, mut d) = (num / &g, den / g);
    if d.is_negative() {
        n = -n;
        d = -d;
    }
    Rat::new_raw(n, d)
}

fn exps_degree<const N: usize>(e: &[u32; N]) -> u32 {
    e.iter().sum()
}

impl<const N: usize> MPoly<N> {
    pub fn zero() -> Self {
        MPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial([0; N], c)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Rat::from_integer(c.into()))
    }

    /// The variable with index `i`.
    pub fn var(i: usize) -> Self {
        assert!(i < N, "variable index {i} out of range");
        let mut e = [0; N];
        e[i] = 1;
        Self::monomial(e, Rat::one())
    }

    pub fn monomial(exps: [u32; N], c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        MPoly { terms }
    }

    /// Builds a polynomial from possibly repeated, possibly zero terms.
    pub fn from_terms<I: IntoIterator<Item = ([u32; N], Rat)>>(iter: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in iter {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: [u32; N], c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&[0; N])
    }

    pub fn coeff(&self, e: &[u32; N]) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; N], &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; `None` stands for the degree of the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(exps_degree).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    /// Smallest exponent of `var` over all terms (0 for the zero polynomial).
    pub fn min_degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).min().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Multiplies by the monomial with exponent vector `e`.
    pub fn shift(&self, e: &[u32; N]) -> Self {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (add_exps(k, e), v.clone()))
                .collect(),
        }
    }

    /// Divides every term by the monomial `e`, which must divide each term.
    pub fn unshift(&self, e: &[u32; N]) -> Self {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| {
                    let mut out = *k;
                    for i in 0..N {
                        out[i] = k[i].checked_sub(e[i]).expect("monomial does not divide term");
                    }
                    (out, v.clone())
                })
                .collect(),
        }
    }

    /// Exact value at `point`. Works over a common denominator and reduces
    /// once, so large integer orbits avoid per-step gcds.
    pub fn eval(&self, point: &[Rat; N]) -> Rat {
        if self.terms.is_empty() {
            return Rat::zero();
        }
        let (num, den) = self.eval_unreduced(point);
        reduce_fraction(num, den)
    }

    /// True iff the value at `point` is zero; skips the final reduction.
    pub fn vanishes_at(&self, point: &[Rat; N]) -> bool {
        self.terms.is_empty() || self.eval_unreduced(point).0.is_zero()
    }

    fn eval_unreduced(&self, point: &[Rat; N]) -> (BigInt, BigInt) {
        let mut nums: Vec<Vec<BigInt>> = Vec::with_capacity(N);
        let mut dens: Vec<Vec<BigInt>> = Vec::with_capacity(N);
        let mut maxes = [0usize; N];
        for (i, base) in point.iter().enumerate() {
            let max = self.degree_in(i).unwrap_or(0) as usize;
            maxes[i] = max;
            nums.push(power_table(base.numer(), max));
            dens.push(power_table(base.denom(), max));
        }
        let lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.numer() * (&lcm / c.denom());
            for i in 0..N {
                let k = e[i] as usize;
                if k > 0 {
                    t *= &nums[i][k];
                }
                if maxes[i] > k {
                    t *= &dens[i][maxes[i] - k];
                }
            }
            acc += t;
        }
        let mut den = lcm;
        for i in 0..N {
            den *= &dens[i][maxes[i]];
        }
        (acc, den)
    }

    /// Sets variable `var` to the value `c` (the variable then no longer occurs).
    pub fn specialize(&self, var: usize, c: &Rat) -> Self {
        let max = self.degree_in(var).unwrap_or(0) as usize;
        let mut pw = vec![Rat::one()];
        for k in 1..=max {
            let next = &pw[k - 1] * c;
            pw.push(next);
        }
        let mut out = Self::zero();
        for (e, v) in &self.terms {
            let mut k = *e;
            let p = &pw[k[var] as usize];
            k[var] = 0;
            out.add_term(k, v * p);
        }
        out
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut k = *e;
                k[var] -= 1;
                out.add_term(k, c * Rat::from_integer(BigInt::from(e[var])));
            }
        }
        out
    }

    /// Leading term in graded lexicographic order (highest total degree,
    /// ties broken lexicographically on exponents).
    pub fn leading_term(&self) -> Option<([u32; N], &Rat)> {
        self.terms
            .iter()
            .max_by(|a, b| graded_cmp(a.0, b.0))
            .map(|(e, c)| (*e, c))
    }

    /// Scales so that the graded-lex leading coefficient is 1.
    pub fn monic(&self) -> Self {
        match self.leading_term() {
            None => Self::zero(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }

    /// Integer numerators over a common denominator: `self = Σ num_i m_i / den`.
    pub fn integerize(&self) -> (Vec<([u32; N], BigInt)>, BigInt) {
        let mut den = BigInt::one();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (*e, c.numer() * (&den / c.denom())))
            .collect();
        (terms, den)
    }

    /// Rescales to integer coefficients with gcd 1 and positive graded-lex
    /// leading coefficient.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let (terms, _) = self.integerize();
        let mut g = BigInt::zero();
        for (_, c) in &terms {
            g = g.gcd(c);
        }
        let lead = self.leading_term().map(|(_, c)| c.is_negative()).unwrap_or(false);
        if lead {
            g = -g;
        }
        MPoly {
            terms: terms
                .into_iter()
                .map(|(e, c)| (e, Rat::from_integer(c / &g)))
                .collect(),
        }
    }

    /// Largest coefficient bit size (numerator or denominator).
    pub fn max_coeff_bits(&self) -> u64 {
        self.terms
            .values()
            .map(|c| c.numer().bits().max(c.denom().bits()))
            .max()
            .unwrap_or(0)
    }

    pub fn pow(&self, e: u32, cap: u32) -> Result<Self> {
        let deg = self.total_degree().unwrap_or(0) as u64 * e as u64;
        if deg > cap as u64 {
            return Err(Error::DegreeCap { degree: deg, cap });
        }
        Ok(self.pow_unchecked(e))
    }

    fn pow_unchecked(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Upper bound on the total degree of `self(vals)`.
    pub fn substitution_degree_bound<const M: usize>(&self, vals: &[MPoly<M>; N]) -> u64 {
        let degs: Vec<u64> = vals
            .iter()
            .map(|v| v.total_degree().unwrap_or(0) as u64)
            .collect();
        self.terms
            .keys()
            .map(|e| e.iter().zip(&degs).map(|(&k, d)| k as u64 * d).sum::<u64>())
            .max()
            .unwrap_or(0)
    }

    /// Substitutes `vals[i]` for variable `i` and expands.
    pub fn substitute<const M: usize>(&self, vals: &[MPoly<M>; N], cap: u32) -> Result<MPoly<M>> {
        let bound = self.substitution_degree_bound(vals);
        if bound > cap as u64 {
            return Err(Error::DegreeCap { degree: bound, cap });
        }
        let mut powers: Vec<Vec<MPoly<M>>> = Vec::with_capacity(N);
        for (i, v) in vals.iter().enumerate() {
            let max = self.degree_in(i).unwrap_or(0) as usize;
            let mut pw = Vec::with_capacity(max + 1);
            pw.push(MPoly::<M>::one());
            for k in 1..=max {
                let next = &pw[k - 1] * v;
                pw.push(next);
            }
            powers.push(pw);
        }
        let mut out = MPoly::<M>::zero();
        for (e, c) in &self.terms {
            let mut t = MPoly::<M>::constant(c.clone());
            for i in 0..N {
                if e[i] > 0 {
                    t = &t * &powers[i][e[i] as usize];
                }
            }
            out += t;
        }
        Ok(out)
    }

    /// Embeds into a polynomial ring with more variables; variable `i` goes to `map[i]`.
    pub fn embed<const M: usize>(&self, map: [usize; N]) -> MPoly<M> {
        MPoly::from_terms(self.terms.iter().map(|(e, c)| {
            let mut k = [0u32; M];
            for i in 0..N {
                k[map[i]] += e[i];
            }
            (k, c.clone())
        }))
    }
}

/// Graded lexicographic comparison of exponent vectors.
pub fn graded_cmp<const N: usize>(a: &[u32; N], b: &[u32; N]) -> std::cmp::Ordering {
    exps_degree(a).cmp(&exps_degree(b)).then_with(|| a.cmp(b))
}

fn mul_polys<const N: usize>(a: &MPoly<N>, b: &MPoly<N>) -> MPoly<N> {
    if a.is_zero() || b.is_zero() {
        return MPoly::zero();
    }
    if a.terms.len() == 1 || b.terms.len() == 1 {
        let (single, other) = if a.terms.len() == 1 { (a, b) } else { (b, a) };
        let (e, c) = single.terms.iter().next().unwrap();
        return MPoly {
            terms: other
                .terms
                .iter()
                .map(|(k, v)| (add_exps(k, e), v * c))
                .collect(),
        };
    }
    // Multiply integer numerators and divide by the product of common
    // denominators once at the end; this avoids a gcd per coefficient product.
    let (ta, da) = a.integerize();
    let (tb, db) = b.integerize();
    let mut acc: HashMap<[u32; N], BigInt> = HashMap::with_capacity(ta.len() * tb.len() / 2 + 1);
    for (ea, ca) in &ta {
        for (eb, cb) in &tb {
            let prod = ca * cb;
            match acc.entry(add_exps(ea, eb)) {
                std::collections::hash_map::Entry::Vacant(v) => {
                    v.insert(prod);
                }
                std::collections::hash_map::Entry::Occupied(mut o) => {
                    *o.get_mut() += prod;
                }
            }
        }
    }
    let den = da * db;
    let one = den.is_one();
    MPoly {
        terms: acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| {
                let r = if one {
                    Rat::from_integer(c)
                } else {
                    Rat::new(c, den.clone())
                };
                (e, r)
            })
            .collect(),
    }
}

impl<const N: usize> AddAssign<MPoly<N>> for MPoly<N> {
    fn add_assign(&mut self, rhs: MPoly<N>) {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
    }
}

impl<const N: usize> AddAssign<&MPoly<N>> for MPoly<N> {
    fn add_assign(&mut self, rhs: &MPoly<N>) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl<const N: usize> Add<&MPoly<N>> for &MPoly<N> {
    type Output = MPoly<N>;
    fn add(self, rhs: &MPoly<N>) -> MPoly<N> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<const N: usize> Add for MPoly<N> {
    type Output = MPoly<N>;
    fn add(mut self, rhs: MPoly<N>) -> MPoly<N> {
        self += rhs;
        self
    }
}

impl<const N: usize> Neg for &MPoly<N> {
    type Output = MPoly<N>;
    fn neg(self) -> MPoly<N> {
        MPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl<const N: usize> Neg for MPoly<N> {
    type Output = MPoly<N>;
    fn neg(self) -> MPoly<N> {
        -&self
    }
}

impl<const N: usize> Sub<&MPoly<N>> for &MPoly<N> {
    type Output = MPoly<N>;
    fn sub(self, rhs: &MPoly<N>) -> MPoly<N> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl<const N: usize> Sub for MPoly<N> {
    type Output = MPoly<N>;
    fn sub(self, rhs: MPoly<N>) -> MPoly<N> {
        &self - &rhs
    }
}

impl<const N: usize> Mul<&MPoly<N>> for &MPoly<N> {
    type Output = MPoly<N>;
    fn mul(self, rhs: &MPoly<N>) -> MPoly<N> {
        mul_polys(self, rhs)
    }
}

impl<const N: usize> Mul for MPoly<N> {
    type Output = MPoly<N>;
    fn mul(self, rhs: MPoly<N>) -> MPoly<N> {
        mul_polys(&self, &rhs)
    }
}

fn var_names(n: usize) -> Vec<String> {
    match n {
        1 => vec!["x".into()],
        2 => vec!["x".into(), "y".into()],
        _ => (1..=n).map(|i| format!("x{i}")).collect(),
    }
}

/// Formats a rational the way the parser reads it back.
pub fn fmt_rat(c: &Rat) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl<const N: usize> fmt::Display for MPoly<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = var_names(N);
        let mut keys: Vec<&[u32; N]> = self.terms.keys().collect();
        keys.sort_by(|a, b| graded_cmp(b, a));
        for (idx, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors = Vec::new();
            let is_const = e.iter().all(|&k| k == 0);
            if is_const || !abs.is_one() {
                factors.push(fmt_rat(&abs));
            }
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(names[i].clone()),
                    _ => factors.push(format!("{}^{}", names[i], k)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl<const N: usize> fmt::Debug for MPoly<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({self})")
    }
}

impl Poly2 {
    pub fn x() -> Self {
        Self::var(0)
    }

    pub fn y() -> Self {
        Self::var(1)
    }

    pub fn eval_at(&self, x: &Rat, y: &Rat) -> Rat {
        self.eval(&[x.clone(), y.clone()])
    }

    /// Substitutes `(x, y) -> (x + a, y + b)`.
    pub fn translate(&self, a: &Rat, b: &Rat) -> Self {
        let xs = &Poly2::x() + &Poly2::constant(a.clone());
        let ys = &Poly2::y() + &Poly2::constant(b.clone());
        self.substitute(&[xs, ys], u32::MAX)
            .expect("translation preserves degree")
    }

    /// Swaps the roles of `x` and `y`.
    pub fn swap_xy(&self) -> Self {
        MPoly::from_terms(self.terms.iter().map(|(e, c)| ([e[1], e[0]], c.clone())))
    }
}
