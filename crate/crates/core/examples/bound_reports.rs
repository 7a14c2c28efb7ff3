// Lower bounds against exact counts, and the existence thresholds.
use std::sync::Arc;

use fqconfig::bounds::{
    path4_threshold, path_c_report, small_pattern_threshold, s1_report, star_b_reports, star_pair_threshold, SmallPattern,
};
use fqconfig::configs::{count_witnesses, DEFAULT_BUDGET};
use fqconfig::{AuxGraph, Fq, PatternGraph, PointSet};

fn main() -> fqconfig::Result<()> {
    let f = Arc::new(Fq::new(5)?);
    let e = PointSet::from_coords(f.clone(), 2, &[&[0, 0], &[1, 0], &[0, 1], &[2, 3], &[4, 4], &[3, 1]])?;
    let n = e.len() as u64;
    let r = 2;
    let g = AuxGraph::new(&e, r)?;
    let s1 = g.degree_power_sum(1);
    let rep = s1_report(&f, 2, n, r, &s1)?;
    println!("{}: exact {s1}, bound {}, {:?}", rep.name, rep.bound, rep.verdict);
    for k in [2, 3] {
        let b = count_witnesses(&e, r, &PatternGraph::star(k)?, DEFAULT_BUDGET)?;
        for rep in star_b_reports(n, k, &s1, &g.degree_power_sum(k as u32 - 1), b) {
            println!("{}: exact {b}, bound {}, {:?}", rep.name, rep.bound, rep.verdict);
        }
    }
    let w = g.walk_counts(4);
    let c = count_witnesses(&e, r, &PatternGraph::path(4)?, DEFAULT_BUDGET)?;
    let rep = path_c_report(n, 5, 2, [&w[1], &w[2], &w[3], &w[4]], c);
    println!("{}: exact {c}, bound {}, {:?}", rep.name, rep.bound, rep.verdict);

    for (q, d) in [(5, 2), (7, 3), (9, 3), (5, 6)] {
        let star = star_pair_threshold(q, d, 2)?;
        let path = path4_threshold(q, d)?;
        println!("q={q} d={d}: {} ≈ {:.1}, {} ≈ {:.1} (|F_q^d| = {})", star.name, star.value.approx(), path.name, path.value.approx(), q.pow(d as u32));
    }
    let t = small_pattern_threshold(7, SmallPattern::Cycle4)?;
    println!("4-cycle threshold at p = 7: [{}, {}]", t.lower(), t.upper());
    Ok(())
}
