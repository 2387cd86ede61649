//! Fixed and periodic curves, strict transforms, and how curves behave near
//! the indeterminacy locus and the attracting point of a stable model.

use dmlwb::curves::{
    decreasing_intersection_experiment, indeterminacy_periodicity_probe, is_periodic_curve,
    push_forward_curve, strict_pullback, Curve,
};
use dmlwb::hirzebruch::{extend_to_fn, TriangularMap};
use dmlwb::PolyMap;

fn main() -> dmlwb::Result<()> {
    let f = PolyMap::parse("x + 1", "-y")?;
    for c in ["y - 1", "y", "x"] {
        let c = Curve::parse(c)?;
        println!("{c}: period {:?}", is_periodic_curve(&c, &f, 6)?);
    }

    let g = PolyMap::parse_with_inverse("2*x", "x^3*y + x^5", "x/2", "(8*y - x^5/4)/x^3")?;
    let c = Curve::parse("y - x^2")?;
    println!("image of {c}: {:?}", push_forward_curve(&c, &g).map(|c| c.to_string()));
    println!("strict pullback of {c}: {}", strict_pullback(&c, &g)?);

    let t = TriangularMap::from_map(&g)?;
    let m = extend_to_fn(&t, 3);
    let rep = indeterminacy_periodicity_probe(&m, &c, 4, 6)?;
    println!("periodicity probe on F_3: {:?}", rep.verdict);

    let through_q = Curve::parse("y - x^10")?;
    let dec = decreasing_intersection_experiment(&m, &through_q, 5)?;
    println!("local intersections at [1,0,1,0]: {:?} ({:?})", dec.sequence, dec.outcome);
    Ok(())
}
