//! Absolute values at every place, the product formula, Weil heights along
//! an orbit and Northcott counts.

use dmlwb::algebra::parse_rat;
use dmlwb::heights::{
    abs_value, height_affine, height_growth_probe, northcott_enumerate, place_product, support, Place,
};
use dmlwb::{AffinePoint, PolyMap};

fn main() -> dmlwb::Result<()> {
    let x = parse_rat("-360/49")?;
    println!("x = {x}, support {:?}", support(&x));
    println!("  |x|_inf = {}", abs_value(&x, Place::Archimedean));
    for p in support(&x) {
        println!("  |x|_{p} = {}", abs_value(&x, Place::finite(p)?));
    }
    println!("  product over all places = {}", place_product(&x)?);

    let p = AffinePoint::parse("3/2, 5")?;
    println!("H({p}) = {}", height_affine(&p));

    let f = PolyMap::parse("y", "y^2 - x")?;
    for s in height_growth_probe(&f, &AffinePoint::from_ints(1, 2), 6, 1 << 20) {
        println!("  n = {}  H = {}  log ratio {:?}", s.n, s.height, s.log_ratio);
    }

    for b in 1..=4 {
        println!("points of P^1 with height <= {b}: {}", northcott_enumerate(b, 1)?.len());
    }
    Ok(())
}
