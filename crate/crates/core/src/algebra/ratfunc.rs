use std::fmt;

use num_traits::{One, Zero};

use super::bivar;
use super::poly::{Poly2, DEFAULT_DEGREE_CAP};
use super::Rat;
use crate::error::{Error, Result};

/// A bivariate rational function `num / den` kept in lowest terms with a
/// monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly2,
    den: Poly2,
}

impl RatFunc {
    pub fn new(num: Poly2, den: Poly2) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RatFunc {
                num,
                den: Poly2::one(),
            });
        }
        let g = bivar::gcd(&num, &den);
        let (mut n, mut d) = if g.is_constant() {
            (num, den)
        } else {
            (
                bivar::exact_div(&num, &g).expect("gcd divides"),
                bivar::exact_div(&den, &g).expect("gcd divides"),
            )
        };
        let lc = d.leading_term().map(|(_, c)| c.clone()).unwrap();
        if !lc.is_one() {
            let inv = lc.recip();
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        Ok(RatFunc { num: n, den: d })
    }

    pub fn from_poly(p: Poly2) -> Self {
        RatFunc {
            num: p,
            den: Poly2::one(),
        }
    }

    pub fn num(&self) -> &Poly2 {
        &self.num
    }

    pub fn den(&self) -> &Poly2 {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn into_poly(self) -> Option<Poly2> {
        if self.den.is_constant() {
            let c = self.den.constant_term();
            Some(self.num.scale(&c.recip()))
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RatFunc) -> Result<RatFunc> {
        RatFunc::new(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }

    pub fn sub(&self, o: &RatFunc) -> Result<RatFunc> {
        RatFunc::new(
            &(&self.num * &o.den) - &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }

    pub fn mul(&self, o: &RatFunc) -> Result<RatFunc> {
        RatFunc::new(&self.num * &o.num, &self.den * &o.den)
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc> {
        if o.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        RatFunc::new(&self.num * &o.den, &self.den * &o.num)
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, e: u32, cap: u32) -> Result<RatFunc> {
        // Powers of a reduced fraction stay reduced.
        Ok(RatFunc {
            num: self.num.pow(e, cap)?,
            den: self.den.pow(e, cap)?,
        })
    }

    /// Value at a point, `None` where the denominator vanishes.
    pub fn eval(&self, x: &Rat, y: &Rat) -> Option<Rat> {
        let d = self.den.eval_at(x, y);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval_at(x, y) / d)
    }

    /// True when both numerator and denominator vanish at the point, i.e. the
    /// point is an indeterminacy point of the fraction.
    pub fn is_indeterminate_at(&self, x: &Rat, y: &Rat) -> bool {
        self.den.eval_at(x, y).is_zero() && self.num.eval_at(x, y).is_zero()
    }

    /// `self(u, v)` for rational functions `u`, `v`.
    pub fn substitute(&self, u: &RatFunc, v: &RatFunc, cap: u32) -> Result<RatFunc> {
        let (num, den) = substitute_pair(&self.num, &self.den, u, v, cap)?;
        RatFunc::new(num, den)
    }
}

/// Substitutes `(u, v)` into the fraction `n/d` and returns an unreduced
/// numerator and denominator.
pub(crate) fn substitute_pair(
    n: &Poly2,
    d: &Poly2,
    u: &RatFunc,
    v: &RatFunc,
    cap: u32,
) -> Result<(Poly2, Poly2)> {
    let ax = n.degree_in(0).unwrap_or(0).max(d.degree_in(0).unwrap_or(0));
    let ay = n.degree_in(1).unwrap_or(0).max(d.degree_in(1).unwrap_or(0));
    let num = homogenized_substitution(n, u, v, ax, ay, cap)?;
    let den = homogenized_substitution(d, u, v, ax, ay, cap)?;
    Ok((num, den))
}

/// `P(u, v) * den(u)^ax * den(v)^ay` expanded as a polynomial.
pub(crate) fn homogenized_substitution(
    p: &Poly2,
    u: &RatFunc,
    v: &RatFunc,
    ax: u32,
    ay: u32,
    cap: u32,
) -> Result<Poly2> {
    let bound = {
        let du = u.num.total_degree().unwrap_or(0).max(u.den.total_degree().unwrap_or(0)) as u64;
        let dv = v.num.total_degree().unwrap_or(0).max(v.den.total_degree().unwrap_or(0)) as u64;
        ax as u64 * du + ay as u64 * dv
    };
    if bound > cap as u64 {
        return Err(Error::DegreeCap { degree: bound, cap });
    }
    let pow_table = |base: &Poly2, k: u32| -> Vec<Poly2> {
        let mut t = vec![Poly2::one()];
        for i in 1..=k as usize {
            let next = &t[i - 1] * base;
            t.push(next);
        }
        t
    };
    let un = pow_table(&u.num, ax);
    let ud = pow_table(&u.den, ax);
    let vn = pow_table(&v.num, ay);
    let vd = pow_table(&v.den, ay);
    let mut out = Poly2::zero();
    for (e, c) in p.terms() {
        let (i, j) = (e[0], e[1]);
        let a = &un[i as usize] * &ud[(ax - i) as usize];
        let b = &vn[j as usize] * &vd[(ay - j) as usize];
        out += (&a * &b).scale(c);
    }
    Ok(out)
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::from_poly(Poly2::zero())
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            let c = self.den.constant_term();
            write!(f, "{}", self.num.scale(&c.recip()))
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

/// Convenience: substitution with the default degree cap.
pub fn compose_ratfunc(p: &RatFunc, u: &RatFunc, v: &RatFunc) -> Result<RatFunc> {
    p.substitute(u, v, DEFAULT_DEGREE_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_ratfunc;

    #[test]
    fn reduces_to_lowest_terms() {
        let r = parse_ratfunc("(x^2 - y^2)/(2*x + 2*y)").unwrap();
        assert!(r.is_polynomial());
        assert_eq!(r.into_poly().unwrap(), crate::algebra::parse::parse_poly("1/2*x - 1/2*y").unwrap());
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(
            RatFunc::new(Poly2::one(), Poly2::zero()),
            Err(Error::ZeroDenominator)
        );
    }

    #[test]
    fn indeterminacy_of_y_over_x() {
        let r = parse_ratfunc("y/x").unwrap();
        assert!(r.is_indeterminate_at(&Rat::zero(), &Rat::zero()));
        assert!(!r.is_indeterminate_at(&Rat::zero(), &Rat::one()));
    }
}
