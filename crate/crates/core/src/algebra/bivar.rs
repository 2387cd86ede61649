//! Bivariate algorithms over Q, working in `Q[x][y]`: gcd, exact division,
//! square-free parts and resultants.

use num_traits::{One, Zero};

use super::poly::Poly2;
use super::upoly::UPoly;
use super::Rat;

/// `F = Σ_j coeffs[j](x) y^j`.
pub type YPoly = Vec<UPoly>;

pub fn to_ypoly(p: &Poly2) -> YPoly {
    let dy = match p.degree_in(1) {
        None => return Vec::new(),
        Some(d) => d as usize,
    };
    let dx = p.degree_in(0).unwrap_or(0) as usize;
    let mut rows = vec![vec![Rat::zero(); dx + 1]; dy + 1];
    for (e, c) in p.terms() {
        rows[e[1] as usize][e[0] as usize] = c.clone();
    }
    let mut out: YPoly = rows.into_iter().map(UPoly::from_coeffs).collect();
    trim(&mut out);
    out
}

pub fn from_ypoly(f: &[UPoly]) -> Poly2 {
    Poly2::from_terms(f.iter().enumerate().flat_map(|(j, c)| {
        c.coeffs()
            .iter()
            .enumerate()
            .map(move |(i, v)| ([i as u32, j as u32], v.clone()))
    }))
}

fn trim(f: &mut YPoly) {
    while f.last().is_some_and(|c| c.is_zero()) {
        f.pop();
    }
}

fn ydeg(f: &YPoly) -> Option<usize> {
    f.len().checked_sub(1)
}

/// Gcd over `Q[x]` of the `y`-coefficients (monic; zero for zero input).
pub fn content_in_x(f: &YPoly) -> UPoly {
    let mut g = UPoly::zero();
    for c in f {
        g = g.gcd(c);
        if g.is_constant() && !g.is_zero() {
            return UPoly::one();
        }
    }
    g
}

fn div_content(f: &YPoly, c: &UPoly) -> YPoly {
    f.iter().map(|v| v.exact_div(c).expect("content divides")).collect()
}

fn primitive_part(f: &YPoly) -> YPoly {
    if f.is_empty() {
        return Vec::new();
    }
    let c = content_in_x(f);
    div_content(f, &c)
}

/// `lc(B)^k * A mod B` in `y`, computed step by step to stay in `Q[x][y]`.
fn pseudo_rem(a: &YPoly, b: &YPoly) -> YPoly {
    let n = ydeg(b).expect("nonzero divisor");
    let lb = b[n].clone();
    let mut r = a.clone();
    while let Some(m) = ydeg(&r) {
        if m < n {
            break;
        }
        let lr = r[m].clone();
        let mut next: YPoly = r.iter().map(|c| c * &lb).collect();
        for (j, bc) in b.iter().enumerate() {
            let idx = m - n + j;
            next[idx] = &next[idx] - &(&lr * bc);
        }
        trim(&mut next);
        r = primitive_part(&next);
    }
    r
}

/// Gcd of two bivariate polynomials, normalized by [`Poly2::monic`].
/// Zero only when both inputs are zero.
pub fn gcd(a: &Poly2, b: &Poly2) -> Poly2 {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let fa = to_ypoly(a);
    let fb = to_ypoly(b);
    let ca = content_in_x(&fa);
    let cb = content_in_x(&fb);
    let c = ca.gcd(&cb);
    let mut pa = div_content(&fa, &ca);
    let mut pb = div_content(&fb, &cb);
    if ydeg(&pa) < ydeg(&pb) {
        std::mem::swap(&mut pa, &mut pb);
    }
    let g = loop {
        if ydeg(&pb) == Some(0) {
            break vec![UPoly::one()];
        }
        let r = pseudo_rem(&pa, &pb);
        if r.is_empty() {
            break pb;
        }
        pa = pb;
        pb = primitive_part(&r);
    };
    let g = primitive_part(&g);
    let res: YPoly = g.iter().map(|v| v * &c).collect();
    from_ypoly(&res).monic()
}

/// Exact quotient `a / d`, or `None` if `d` does not divide `a`.
pub fn exact_div(a: &Poly2, d: &Poly2) -> Option<Poly2> {
    assert!(!d.is_zero(), "division by zero polynomial");
    if a.is_zero() {
        return Some(Poly2::zero());
    }
    let fd = to_ypoly(d);
    let n = ydeg(&fd).unwrap();
    let ld = &fd[n];
    let mut r = to_ypoly(a);
    let mut q: YPoly = vec![UPoly::zero(); r.len().saturating_sub(n).max(1)];
    while let Some(m) = ydeg(&r) {
        if m < n {
            return None;
        }
        let t = r[m].exact_div(ld)?;
        for (j, dc) in fd.iter().enumerate() {
            let idx = m - n + j;
            r[idx] = &r[idx] - &(&t * dc);
        }
        q[m - n] = &q[m - n] + &t;
        trim(&mut r);
    }
    Some(from_ypoly(&q))
}

pub fn divides(d: &Poly2, a: &Poly2) -> bool {
    exact_div(a, d).is_some()
}

/// Square-free part `F / gcd(F, F_x, F_y)`, normalized by [`Poly2::monic`].
pub fn squarefree_part(f: &Poly2) -> Poly2 {
    if f.is_zero() || f.is_constant() {
        return f.monic();
    }
    let g = gcd(&gcd(f, &f.derivative(0)), &f.derivative(1));
    exact_div(f, &g).expect("gcd divides").monic()
}

pub fn is_squarefree(f: &Poly2) -> bool {
    let g = gcd(&gcd(f, &f.derivative(0)), &f.derivative(1));
    g.is_constant()
}

/// Removes from `f` every factor it shares with `d` (with multiplicity).
pub fn strip_common_factors(f: &Poly2, d: &Poly2) -> Poly2 {
    let mut f = f.clone();
    if d.is_constant() {
        return f;
    }
    loop {
        let g = gcd(&f, d);
        if g.is_constant() {
            return f;
        }
        f = exact_div(&f, &g).expect("gcd divides");
    }
}

fn det(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    let mut acc = Rat::one();
    for col in 0..n {
        let pivot = match (col..n).find(|&r| !m[r][col].is_zero()) {
            None => return Rat::zero(),
            Some(p) => p,
        };
        if pivot != col {
            m.swap(pivot, col);
            acc = -acc;
        }
        let pv = m[col][col].clone();
        acc *= &pv;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &pv;
            for c in col..n {
                let delta = &f * &m[col][c];
                m[r][c] -= delta;
            }
        }
    }
    acc
}

/// Determinant of the Sylvester matrix of two univariate polynomials given
/// by coefficient lists of formal degrees `m = a.len()-1`, `n = b.len()-1`.
pub fn sylvester_resultant(a: &[Rat], b: &[Rat]) -> Rat {
    let m = a.len() - 1;
    let n = b.len() - 1;
    if m == 0 && n == 0 {
        return Rat::one();
    }
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![Rat::zero(); size];
        for (k, c) in a.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![Rat::zero(); size];
        for (k, c) in b.iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        rows.push(row);
    }
    det(rows)
}

/// Newton interpolation through `(xs[i], ys[i])`.
fn interpolate(xs: &[Rat], ys: &[Rat]) -> UPoly {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    let mut acc = UPoly::zero();
    for i in (0..n).rev() {
        acc = &(&acc * &UPoly::linear_root(&xs[i])) + &UPoly::constant(dd[i].clone());
    }
    acc
}

/// `Res_y(F, G)` as a polynomial in `x`, by evaluation at integer points
/// and interpolation. Both inputs must be nonzero.
pub fn resultant_y(f: &Poly2, g: &Poly2) -> UPoly {
    assert!(!f.is_zero() && !g.is_zero());
    let ff = to_ypoly(f);
    let gg = to_ypoly(g);
    let m = ff.len() - 1;
    let n = gg.len() - 1;
    let dfx = f.degree_in(0).unwrap_or(0) as usize;
    let dgx = g.degree_in(0).unwrap_or(0) as usize;
    let bound = m * dgx + n * dfx;
    let xs: Vec<Rat> = (0..=bound as i64).map(|v| Rat::from_integer(v.into())).collect();
    let ys: Vec<Rat> = xs
        .iter()
        .map(|x0| {
            let a: Vec<Rat> = ff.iter().map(|c| c.eval(x0)).collect();
            let b: Vec<Rat> = gg.iter().map(|c| c.eval(x0)).collect();
            sylvester_resultant(&a, &b)
        })
        .collect();
    interpolate(&xs, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;

    fn p(s: &str) -> Poly2 {
        parse_poly(s).unwrap()
    }

    #[test]
    fn gcd_finds_common_factor() {
        let a = p("(x*y - 1)*(x + y)");
        let b = p("(x*y - 1)*(x - y^2)");
        assert_eq!(gcd(&a, &b), p("x*y - 1"));
    }

    #[test]
    fn gcd_with_x_content() {
        let a = p("x^2*(y - 1)");
        let b = p("x*(y + 1)");
        assert_eq!(gcd(&a, &b), p("x"));
    }

    #[test]
    fn coprime_gcd_is_one() {
        assert_eq!(gcd(&p("y - x^2"), &p("y")), Poly2::one());
    }

    #[test]
    fn exact_division() {
        let a = p("(x + y)^3*(x - 2*y)");
        assert_eq!(exact_div(&a, &p("(x+y)^2")).unwrap(), p("(x+y)*(x-2*y)"));
        assert!(exact_div(&a, &p("x - y")).is_none());
    }

    #[test]
    fn squarefree() {
        let a = p("(x + y)^3*(x - 2)^2*y");
        assert_eq!(squarefree_part(&a), p("(x + y)*(x - 2)*y").monic());
    }

    #[test]
    fn resultant_of_parabola_and_axis() {
        // Res_y(y, y - x^2) = -x^2 up to sign.
        let r = resultant_y(&p("y"), &p("y - x^2"));
        assert_eq!(r.root_multiplicity(&Rat::zero()), Some(2));
        assert_eq!(r.degree(), Some(2));
    }
}
