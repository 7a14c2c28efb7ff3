// Sphere sizes by formula and by enumeration, and a perpendicular bisector.
use std::sync::Arc;

use fqconfig::geom::{bisector_enum, sphere_enum, sphere_size_formula};
use fqconfig::{Fq, Point};

fn main() -> fqconfig::Result<()> {
    let f = Arc::new(Fq::new(5)?);
    for d in [2, 3] {
        for t in f.elements() {
            let formula = sphere_size_formula(&f, d, t)?;
            let listed = sphere_enum(&f, d, &Point::zero(d), t)?.len();
            println!("d={d} t={t}: |S(0,t)| = {formula} (enumerated {listed})");
        }
    }
    let circle = sphere_enum(&f, 2, &Point(vec![1, 1]), 1)?;
    println!("S((1,1), 1) in F_5^2: {:?}", circle.points());

    let (u, w) = (Point(vec![0, 0, 0]), Point(vec![1, 2, 0]));
    let b = bisector_enum(&f, 3, &u, &w)?;
    println!("bisector of {u:?} and {w:?} in F_5^3 has {} points", b.len());
    Ok(())
}
