//! Degree sequences of iterates and algebraic stability on the projective plane.

use dmlwb::degrees::{degree_sequence, dynamical_degree_estimate, stability_from_profile};
use dmlwb::PolyMap;

fn main() -> dmlwb::Result<()> {
    let maps = [
        ("Henon", PolyMap::parse("y", "y^2 - x")?),
        ("triangular", PolyMap::parse("2*x", "x^3*y + x^5")?),
        ("shear", PolyMap::parse("x + y^2", "y")?),
    ];
    for (name, f) in &maps {
        let prof = degree_sequence(f, 6)?;
        let est = dynamical_degree_estimate(f, 6)?;
        println!(
            "{name:>10}: degrees {:?}  growth {:?}  lambda ~ {:.3}  {:?}",
            prof.degrees,
            prof.growth_class,
            est.estimate,
            stability_from_profile(&prof)
        );
    }
    Ok(())
}
