//! Local intersection multiplicities of plane curves at rational points.

use dmlwb::algebra::parse_poly;
use dmlwb::intersection::{intersection_multiplicity, intersection_points};
use dmlwb::AffinePoint;

fn main() -> dmlwb::Result<()> {
    let o = AffinePoint::origin();
    for (a, b) in [("y", "y - x^2"), ("y^2 - x^3", "x^2 - y^3"), ("y^2 - x^3", "y^2 - x^3 + x*y")] {
        let (f, g) = (parse_poly(a)?, parse_poly(b)?);
        println!("I_0({a}, {b}) = {}", intersection_multiplicity(&f, &g, &o));
    }

    let f = parse_poly("y - x^3 + x")?;
    let g = parse_poly("y")?;
    let s = intersection_points(&f, &g)?;
    for ip in &s.points {
        println!("  {} meets at {} with multiplicity {}", f, ip.point, ip.multiplicity);
    }
    println!("  irrational points possible: {}", s.non_rational);
    Ok(())
}
