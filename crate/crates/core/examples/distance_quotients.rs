// Distance and quotient sets, and the size thresholds that force Δ/Δ.
use std::sync::Arc;

use fqconfig::bounds::quotient_threshold_check;
use fqconfig::geom::{distance_set, quotient_set};
use fqconfig::{Fq, PointSet};

fn main() -> fqconfig::Result<()> {
    let f = Arc::new(Fq::new(7)?);
    let e = PointSet::from_coords(f.clone(), 2, &[&[0, 0], &[1, 0], &[0, 3], &[2, 5]])?;
    let ds = distance_set(&e, true);
    println!("Δ(E) = {ds:?}");
    println!("Δ/Δ = {:?}", quotient_set(&ds, &f));
    let rep = quotient_threshold_check(&e);
    println!("{}: {:?}", rep.theorem, rep.verdict);

    let full = PointSet::full_space(Arc::new(Fq::new(3)?), 4)?;
    let rep = quotient_threshold_check(&full);
    println!("E = F_3^4: Δ/Δ = {:?}, {:?}", rep.quotient_set, rep.verdict);
    Ok(())
}
