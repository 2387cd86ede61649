//! Exact polynomial arithmetic: parsing, factoring, gcds and maps with
//! explicit inverses.

use dmlwb::algebra::{bivar, factor, parse_poly, verify_inverse, AffinePoint, PolyMap, RationalMap};

fn main() -> dmlwb::Result<()> {
    let p = parse_poly("x^4*y - x^2*y^3 + x^3 - x*y^2")?;
    println!("p = {p}");
    for (f, k) in factor::factor_with_multiplicity(&p) {
        println!("  factor {f}  (multiplicity {k})");
    }

    let q = parse_poly("x^2 - y^2")?;
    println!("gcd(p, {q}) = {}", bivar::gcd(&p, &q));

    let f = PolyMap::parse("2*x", "x^3*y + x^5")?;
    let g = RationalMap::parse("x/2", "(8*y - x^5/4)/x^3")?;
    println!("f = {f}");
    println!("candidate inverse verified: {}", verify_inverse(&f, &g));

    let pt = AffinePoint::parse("1/3, -2")?;
    let image = f.apply(&pt);
    println!("f({pt}) = {image}, back: {:?}", g.apply(&image).map(|b| b.to_string()));

    let f3 = f.iterate(3, dmlwb::algebra::DEFAULT_DEGREE_CAP)?;
    println!("f^3 second component: {}", f3.f2);
    Ok(())
}
