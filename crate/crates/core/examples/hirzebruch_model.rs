//! Extending a triangular map to the Hirzebruch surface `F_n` and checking
//! its stability, indeterminacy and contracted curve.

use dmlwb::hirzebruch::{embed_a2, extend_to_fn, model_report, TriangularMap};
use dmlwb::{AffinePoint, PolyMap};

fn main() -> dmlwb::Result<()> {
    let f = PolyMap::parse("2*x", "x^3*y + x^5")?;
    let t = TriangularMap::from_map(&f)?;
    println!("deg A = {}, deg B = {:?}, threshold n = {}", t.deg_a(), t.deg_b(), t.stability_threshold());

    for n in [1, t.stability_threshold()] {
        let m = extend_to_fn(&t, n);
        let rep = model_report(&m)?;
        println!("F_{n}: stable {}  components {:?}", rep.stable, rep.components);
        println!("  indeterminacy {}  fiber points {:?}", rep.indeterminacy.locus, rep.indeterminacy.fiber_points);
        println!("  boundary contracted to [1,0,1,0]: {}", rep.contracted_image_check);
        let p = AffinePoint::from_ints(1, 1);
        println!("  f_n(embed({p})) = {}", m.apply(&embed_a2(&p, n))?);
    }
    Ok(())
}
