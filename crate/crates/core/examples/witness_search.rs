// Searching for a pair of configurations with a given ratio.
use std::sync::Arc;

use fqconfig::configs::{count_witnesses, find_witness, DEFAULT_BUDGET};
use fqconfig::{Fq, PatternGraph, PointSet, SearchOptions};

fn main() -> fqconfig::Result<()> {
    let f = Arc::new(Fq::new(7)?);
    let plane = PointSet::full_space(f.clone(), 2)?;
    for spec in ["star:3", "path:4", "cycle:4", "edges:4:1-2,2-3,3-1,3-4"] {
        let pattern: PatternGraph = spec.parse()?;
        let opts = SearchOptions { require_distinct_tuples: true, parallel: true, ..Default::default() };
        let out = find_witness(&plane, 3, &pattern, opts)?;
        match out.witness {
            Some(w) => println!("{pattern}, r = 3: x = {:?}, y = {:?} ({} nodes)", w.xs, w.ys, out.nodes_visited),
            None => println!("{pattern}, r = 3: none"),
        }
    }
    let small = PointSet::from_coords(f, 2, &[&[0, 0], &[1, 0], &[0, 1], &[3, 3]])?;
    let pattern: PatternGraph = "path:2".parse()?;
    for r in 1..7 {
        println!("4-point set, path:2, r = {r}: {} pairs", count_witnesses(&small, r, &pattern, DEFAULT_BUDGET)?);
    }
    Ok(())
}
