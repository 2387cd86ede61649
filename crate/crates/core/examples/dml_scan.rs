//! Which iterates of a point land on a curve, written as arithmetic
//! progressions plus finitely many exceptions, and the reason why.

use dmlwb::curves::Curve;
use dmlwb::dml::{dml_classify, DmlParams};
use dmlwb::{AffinePoint, PolyMap};

fn main() -> dmlwb::Result<()> {
    let cases = [
        ("x + 1", "-y", "y - 1", (0, 1)),
        ("-x", "-y", "x - 1", (1, 1)),
        ("x + 1", "2*y", "y - 2*x", (0, 1)),
        ("y", "y^2 - x", "y", (0, 0)),
    ];
    let params = DmlParams { horizon: 40, ..DmlParams::default() };
    for (f1, f2, c, (x, y)) in cases {
        let f = PolyMap::parse(f1, f2)?;
        let rep = dml_classify(&f, &Curve::parse(c)?, &AffinePoint::from_ints(x, y), &params);
        let progs: Vec<String> = rep.ap.progressions.iter().map(|p| format!("{}k+{}", p.a, p.b)).collect();
        println!(
            "({f1}, {f2}) on {c} from ({x},{y}): {:?}  progressions {progs:?}  exceptions {:?}",
            rep.verdict, rep.ap.exceptional
        );
    }
    Ok(())
}
