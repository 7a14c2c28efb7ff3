// Degrees and walk counts of the auxiliary graph on E × E.
use std::sync::Arc;

use fqconfig::auxgraph::verify_walk_inequalities;
use fqconfig::{AuxGraph, Fq, PointSet};

fn main() -> fqconfig::Result<()> {
    let plane = PointSet::full_space(Arc::new(Fq::new(3)?), 2)?;
    let g = AuxGraph::new(&plane, 1)?;
    println!("F_3^2, r = 1: {} vertices, deg(0,0) = {}", g.vertex_count(), g.degree(0, 0));
    let w = g.walk_counts(4);
    println!("w_0..w_4 = {:?}", w.iter().map(|x| x.to_string()).collect::<Vec<_>>());
    let rep = verify_walk_inequalities(&w, 4);
    let tight = rep.checks.iter().filter(|c| c.equality).count();
    println!("{} inequalities checked, {} violated, {} tight", rep.checks.len(), rep.violations, tight);

    let f = Arc::new(Fq::new(7)?);
    let e = PointSet::from_coords(f, 2, &[&[0, 0], &[1, 2], &[3, 3], &[5, 1], &[6, 6]])?;
    for r in [1, 3] {
        let g = AuxGraph::new(&e, r)?;
        let s: Vec<String> = (1..=3).map(|k| g.degree_power_sum(k).to_string()).collect();
        println!("|E| = 5, r = {r}: Σ deg^k for k = 1..3 = {s:?}");
    }
    Ok(())
}
