// Star and path tuple counts, and their degenerate decompositions.
use std::sync::Arc;

use fqconfig::configs::{count_path_tuples, count_star_tuples, path4_decomposition, star_decomposition, DEFAULT_BUDGET};
use fqconfig::{Fq, PointSet};

fn main() -> fqconfig::Result<()> {
    let f = Arc::new(Fq::new(5)?);
    let e = PointSet::from_coords(f, 2, &[&[0, 0], &[1, 0], &[0, 1], &[2, 3], &[4, 4]])?;
    let r = 4;
    for k in 1..=3 {
        println!("|S_{k}| = {}   |P_{k}| = {}", count_star_tuples(&e, r, k)?, count_path_tuples(&e, r, k as usize)?);
    }
    for k in [2, 3] {
        let rep = star_decomposition(&e, r, k, DEFAULT_BUDGET)?;
        println!("star:{k}: total {} = |B| {} + degenerate {}", rep.total, rep.nondegenerate, rep.union);
        for c in &rep.classes {
            print!("{} = {}  ", c.label, c.count);
        }
        println!();
    }
    let rep = path4_decomposition(&e, r, DEFAULT_BUDGET)?;
    let split = rep.split.expect("path split");
    println!(
        "path:4: total {} = |C| {} + degenerate {}; I = {}, II = {}, III = {}",
        rep.total, rep.nondegenerate, rep.union, split.i, split.ii, split.iii
    );
    Ok(())
}
