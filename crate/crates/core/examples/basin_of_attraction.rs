//! Orbits converging to the attracting point `[1,0,1,0]` of a stable model,
//! measured with the chordal metric at the archimedean place.

use dmlwb::hirzebruch::{extend_to_fn, FnPoint, TriangularMap};
use dmlwb::heights::{Place, ProjPoint};
use dmlwb::metrics::{basin_probe, metric_dv, BasinModel, BasinParams, BasinPoint};
use dmlwb::{AffinePoint, PolyMap};

fn main() -> dmlwb::Result<()> {
    let a = ProjPoint::from_ints(&[1, 1])?;
    let b = ProjPoint::from_ints(&[1, 3])?;
    for v in [Place::Archimedean, Place::finite(2)?, Place::finite(3)?] {
        println!("d_{v}({a}, {b}) = {}", metric_dv(&a, &b, v)?);
    }

    let f = PolyMap::parse("2*x", "x^3*y + x^5")?;
    let t = TriangularMap::from_map(&f)?;
    let m = extend_to_fn(&t, t.stability_threshold());
    let rep = basin_probe(
        &BasinModel::Fn(m.clone()),
        &BasinPoint::Affine(AffinePoint::from_ints(1, 1)),
        &BasinPoint::Fn(FnPoint::q(m.n)),
        Place::Archimedean,
        &BasinParams::default(),
    )?;
    for s in rep.samples.iter().step_by(5) {
        println!("  n = {:>2}  distance ~ {:?}", s.n, s.distance_f64());
    }
    println!("verdict: {:?}", rep.verdict);
    Ok(())
}
