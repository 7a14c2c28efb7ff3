//! Acceptance criteria, one line each. Runs without the libtest harness so
//! that every line is printed; exits nonzero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use common::{aux_adjacency, dist_table, path_edges, scan_pattern, star_edges, walks_dense, Mix, RefField};
use fqconfig::auxgraph::{verify_walk_inequalities, SimpleGraph};
use fqconfig::bounds::{self, RDomain, Verdict};
use fqconfig::configs::{self, PatternGraph, SearchOptions};
use fqconfig::geom;
use fqconfig::{brute, AuxGraph, Fq, Point, PointSet};
use num_bigint::BigUint;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

const BUDGET: u64 = 1 << 40;

fn field(q: u64) -> Arc<Fq> {
    Arc::new(Fq::new(q).unwrap())
}

fn sphere_formula() -> Outcome {
    let mut cases = 0;
    for q in [3, 5, 7, 9, 11, 13] {
        let f = field(q);
        let rf = RefField::like(&f);
        let sq: Vec<u64> = (0..q).map(|c| rf.mul(c, c)).collect();
        for d in 2..=4 {
            // one pass over F_q^d, bucketing by norm
            let mut counts = vec![0u64; q as usize];
            let mut digits = vec![0u64; d];
            loop {
                let norm = digits.iter().fold(0, |acc, &c| rf.add(acc, sq[c as usize]));
                counts[norm as usize] += 1;
                let mut i = 0;
                while i < d {
                    digits[i] += 1;
                    if digits[i] < q {
                        break;
                    }
                    digits[i] = 0;
                    i += 1;
                }
                if i == d {
                    break;
                }
            }
            let mut sum = BigUint::from(0u32);
            for t in f.elements() {
                let formula = geom::sphere_size_formula(&f, d, t).map_err(|e| e.to_string())?;
                ensure!(formula == BigUint::from(counts[t as usize]), "q={q} d={d} t={t}: formula {formula} vs scan {}", counts[t as usize]);
                sum += formula;
                cases += 1;
            }
            ensure!(sum == BigUint::from(q).pow(d as u32), "q={q} d={d}: Σ_t = {sum}");
        }
    }
    Ok(format!("{cases} (q, d, t) cases exact, Σ_t = q^d"))
}

fn star_identity() -> Outcome {
    let mut mix = Mix(2);
    let mut cases = 0;
    for i in 0..20 {
        let q = if i % 2 == 0 { 3 } else { 5 };
        let f = field(q);
        let size = 2 + (mix.below(5) as usize);
        let set = mix.point_set(&f, 2, size);
        for r in f.nonzero() {
            for k in 1..=3 {
                let fast = configs::count_star_tuples(&set, r, k as u32).map_err(|e| e.to_string())?;
                let slow = scan_pattern(&set, r, k + 1, &star_edges(k), &[]).total;
                ensure!(fast == BigUint::from(slow), "q={q} |E|={size} r={r} k={k}: {fast} vs {slow}");
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} (E, r, k) cases equal to the E^(2k+2) scan"))
}

fn path_identity() -> Outcome {
    let mut mix = Mix(3);
    for i in 0..20 {
        let q = [3, 5, 7, 9][i % 4];
        let f = field(q);
        let size = 2 + (mix.below(3) as usize);
        let set = mix.point_set(&f, 2, size);
        let r = 1 + mix.below(q - 1) as u32;
        let fast = AuxGraph::new(&set, r).map_err(|e| e.to_string())?.walk_counts(4);
        for k in 1..=4 {
            let slow = scan_pattern(&set, r, k + 1, &path_edges(k), &[]).total;
            ensure!(fast[k] == BigUint::from(slow), "case {i}: w_{k} = {} vs scan {slow}", fast[k]);
        }
        let dense = walks_dense(&aux_adjacency(&set, r), 4);
        ensure!(fast.iter().zip(&dense).all(|(a, b)| *a == BigUint::from(*b)), "case {i}: dense matrix disagrees");
    }
    Ok("20 cases, k = 1..4, equal to walk scan and dense A^k".into())
}

fn decomposition_closure() -> Outcome {
    let mut mix = Mix(4);
    let (mut stars, mut paths) = (0, 0);
    for q in [3, 5] {
        let f = field(q);
        for size in 2..=5 {
            for _ in 0..2 {
                let set = mix.point_set(&f, 2, size);
                for r in f.nonzero() {
                    for k in [2, 3] {
                        let rep = configs::star_decomposition(&set, r, k, BUDGET).map_err(|e| e.to_string())?;
                        ensure!(rep.closed() && rep.all_checks_hold(), "star k={k} q={q} |E|={size} r={r}");
                        let inj = scan_pattern(&set, r, k + 1, &star_edges(k), &[]).injective;
                        ensure!(rep.nondegenerate == inj, "star k={k}: |B| = {} vs scan {inj}", rep.nondegenerate);
                        stars += 1;
                    }
                    let rep = configs::path4_decomposition(&set, r, BUDGET).map_err(|e| e.to_string())?;
                    let split = rep.split.ok_or("missing split")?;
                    ensure!(rep.closed() && rep.all_checks_hold(), "path4 q={q} |E|={size} r={r}");
                    ensure!(split.i + split.ii + split.iii == rep.class_unions[5].count, "path split does not close");
                    let inj = scan_pattern(&set, r, 5, &path_edges(4), &[]).injective;
                    ensure!(rep.nondegenerate == inj, "path4: |C| = {} vs scan {inj}", rep.nondegenerate);
                    paths += 1;
                }
            }
        }
    }
    Ok(format!("{stars} star and {paths} path-4 instances closed"))
}

fn bound_validity() -> Outcome {
    let mut mix = Mix(5);
    let (mut s1_cases, mut bc_cases, mut positive) = (0, 0, 0);
    let mut seen_parity = BTreeSet::new();
    for (q, d) in [(3u64, 2usize), (5, 2), (7, 2), (3, 3)] {
        let f = field(q);
        let qd = q.pow(d as u32);
        let n0 = (1..).find(|n: &u64| n * n >= qd).unwrap() as usize;
        for size in n0..n0 + 4 {
            for _ in 0..5 {
                let set = mix.point_set(&f, d, size);
                let n = size as u64;
                for r in f.nonzero() {
                    let g = AuxGraph::new(&set, r).map_err(|e| e.to_string())?;
                    let s: Vec<BigUint> = (1..=3).map(|k| g.degree_power_sum(k)).collect();
                    let s1 = bounds::s1_report(&f, d, n, r, &s[0]).map_err(|e| e.to_string())?;
                    ensure!(!s1.violated(), "S_1 q={q} d={d} n={n} r={r}: {:?} < {}", s1.exact, s1.bound);
                    if s1.hypothesis_ok {
                        s1_cases += 1;
                        seen_parity.insert(d % 2);
                        positive += (s1.verdict == Verdict::Holds) as usize;
                    } else {
                        continue;
                    }
                    for k in [2usize, 3] {
                        let b = configs::count_witnesses(&set, r, &PatternGraph::star(k).unwrap(), BUDGET).map_err(|e| e.to_string())?;
                        for rep in bounds::star_b_reports(n, k, &s[0], &s[k - 2], b) {
                            ensure!(!rep.violated(), "{} q={q} d={d} n={n} r={r}: |B| = {b} < {}", rep.name, rep.bound);
                            positive += (rep.verdict == Verdict::Holds) as usize;
                        }
                    }
                    let w = g.walk_counts(4);
                    let c = configs::count_witnesses(&set, r, &PatternGraph::path(4).unwrap(), BUDGET).map_err(|e| e.to_string())?;
                    let rep = bounds::path_c_report(n, q, d, [&w[1], &w[2], &w[3], &w[4]], c);
                    ensure!(!rep.violated(), "C q={q} d={d} n={n} r={r}: |C| = {c} < {}", rep.bound);
                    positive += (rep.verdict == Verdict::Holds) as usize;
                    bc_cases += 1;
                }
            }
        }
    }
    ensure!(s1_cases >= 200, "only {s1_cases} hypothesis-met cases");
    ensure!(seen_parity.len() == 2, "both parities of d must be exercised");
    Ok(format!("{s1_cases} (E, r) cases, {bc_cases} with B and C checked, 0 violations ({positive} non-vacuous)"))
}

fn inequality_suite() -> Outcome {
    let mut mix = Mix(6);
    let mut graphs = 0;
    let mut sets = Vec::new();
    for q in [3, 5, 7, 9] {
        let f = field(q);
        for d in [2, 3] {
            for size in [2, 4, 6, 9] {
                sets.push(mix.point_set(&f, d, size));
            }
        }
    }
    sets.push(PointSet::full_space(field(3), 2).unwrap());
    sets.push(PointSet::full_space(field(5), 2).unwrap());
    for set in &sets {
        let n = set.len() as u64;
        for r in set.field().nonzero() {
            let g = AuxGraph::new(set, r).map_err(|e| e.to_string())?;
            let w = g.walk_counts(6);
            ensure!(verify_walk_inequalities(&w, 6).all_hold(), "walk inequality fails, |E|={n} r={r}");
            let p = [w[1].clone(), w[2].clone(), w[3].clone(), w[4].clone()];
            for c in bounds::path_chain_checks(n, &p) {
                ensure!(c.holds, "{} fails, |E|={n} r={r}", c.name);
            }
            let s: Vec<BigUint> = (1..=4).map(|k| g.degree_power_sum(k)).collect();
            for c in bounds::star_holder_checks(n, &s) {
                ensure!(c.holds, "{} fails, |E|={n} r={r}", c.name);
            }
            graphs += 1;
        }
    }
    let mut mix = Mix(66);
    for i in 0..100 {
        let v = 1 + mix.below(12) as usize;
        let edges: Vec<(usize, usize)> = (0..v).flat_map(|a| ((a + 1)..v).map(move |b| (a, b))).filter(|_| mix.next() & 1 == 1).collect();
        let g = SimpleGraph::new(v, &edges).unwrap();
        ensure!(verify_walk_inequalities(&g.walk_counts(8), 8).all_hold(), "random graph {i} fails");
    }
    let w = AuxGraph::new(&PointSet::full_space(field(3), 2).unwrap(), 1).unwrap().walk_counts(2);
    ensure!(w == [81u32, 2592, 82944].map(BigUint::from), "F_3^2 walks {w:?}");
    ensure!(&w[1] * &w[1] == &w[0] * &w[2], "no equality in the regular case");
    Ok(format!("{graphs} auxiliary graphs + 100 random graphs, 0 violations; 2592² = 81·82944"))
}

fn ref_quotients(set: &PointSet) -> BTreeSet<u64> {
    let (f, tbl) = dist_table(set);
    let ds: BTreeSet<u64> = tbl.into_iter().collect();
    let mut out = BTreeSet::new();
    for &a in &ds {
        for &b in ds.iter().filter(|&&b| b != 0) {
            out.insert((0..f.q).find(|&c| f.mul(b, c) == a).unwrap());
        }
    }
    out
}

fn quotient_theorems() -> Outcome {
    let e = PointSet::full_space(field(3), 4).unwrap();
    let rep = bounds::quotient_threshold_check(&e);
    ensure!(rep.hypothesis_ok && rep.verdict == Verdict::Holds, "F_3^4: {:?}", rep.verdict);
    ensure!(rep.quotient_set == [0, 1, 2] && ref_quotients(&e) == BTreeSet::from([0, 1, 2]), "F_3^4 quotients {:?}", rep.quotient_set);
    let e = PointSet::full_space(field(5), 3).unwrap();
    let rep = bounds::quotient_threshold_check(&e);
    ensure!(rep.hypothesis_ok && rep.verdict == Verdict::Holds, "F_5^3: {:?}", rep.verdict);
    let reference = ref_quotients(&e);
    ensure!([0, 1, 4].iter().all(|x| reference.contains(x)), "F_5^3 quotients {reference:?}");
    Ok(format!("F_3^4 → {:?}; F_5^3 → {:?}", [0, 1, 2], rep.quotient_set))
}

fn existence_consistency() -> Outcome {
    let mut found = 0;
    for q in [3, 5, 7] {
        let f = field(q);
        let e = PointSet::full_space(f.clone(), 2).unwrap();
        let patterns: Vec<PatternGraph> = (1..=3).map(|k| PatternGraph::star(k).unwrap()).chain([PatternGraph::path(4).unwrap()]).collect();
        for r in RDomain::Nonzero.elements(&f) {
            for pat in &patterns {
                let out = configs::find_witness(&e, r, pat, SearchOptions::default()).map_err(|e| e.to_string())?;
                let w = out.witness.ok_or_else(|| format!("no {pat} witness in F_{q}^2 for r={r}"))?;
                w.validate(&e, r, pat, false).map_err(|e| e.to_string())?;
                found += 1;
            }
        }
    }
    Ok(format!("{found} witnesses found and re-validated"))
}

fn bisector() -> Outcome {
    let mut mix = Mix(9);
    let grid: Vec<(u64, usize)> = [3, 5, 7, 9].iter().flat_map(|&q| [2, 3].map(|d| (q, d))).collect();
    let mut tested = 0;
    while tested < 100 {
        let (q, d) = grid[tested % grid.len()];
        let f = field(q);
        let pt = |mix: &mut Mix| Point((0..d).map(|_| mix.below(q) as u32).collect());
        let (u, w) = (pt(&mut mix), pt(&mut mix));
        if u == w {
            continue;
        }
        let b = geom::bisector_enum(&f, d, &u, &w).map_err(|e| e.to_string())?;
        ensure!(b.len() as u64 == q.pow(d as u32 - 1), "q={q} d={d}: |bisector| = {}", b.len());
        let rf = RefField::like(&f);
        ensure!(b.points().iter().all(|v| rf.dist(&v.0, &u.0) == rf.dist(&v.0, &w.0)), "non-equidistant point");
        tested += 1;
    }
    Ok("100 pairs, |bisector| = q^(d-1)".into())
}

fn performance_floor() -> Outcome {
    // |E| = 100 does not fit in F_7^2 (49 points); run it in F_7^3 instead
    let f = field(7);
    let mut mix = Mix(10);
    let set = mix.point_set(&f, 3, 100);
    let start = Instant::now();
    let p4 = configs::count_path_tuples(&set, 3, 4).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    ensure!(brute::path_tuples(&set, 3, 4).is_none(), "oracle unexpectedly feasible");
    let full = PointSet::full_space(f.clone(), 2).unwrap();
    let t2 = Instant::now();
    let p4_plane = configs::count_path_tuples(&full, 3, 4).map_err(|e| e.to_string())?;
    Ok(format!(
        "|E|=100 in F_7^3: P_4 = {p4} in {:.2?} (oracle would scan 100^10); full F_7^2: P_4 = {p4_plane} in {:.2?}",
        elapsed,
        t2.elapsed()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Option<u64>); 10] = [
        ("sphere formula vs enumeration", sphere_formula, Some(60)),
        ("S_k degree identity vs E^(2k+2) scan", star_identity, Some(120)),
        ("P_k walk counts vs walk enumeration", path_identity, None),
        ("decomposition closure", decomposition_closure, None),
        ("bound validity", bound_validity, None),
        ("walk and chain inequalities", inequality_suite, None),
        ("quotient theorems at F_3^4 and F_5^3", quotient_theorems, None),
        ("existence in the full plane, q = 3, 5, 7", existence_consistency, Some(300)),
        ("bisector size", bisector, None),
        ("performance floor for P_4", performance_floor, None),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut out = run();
        let secs = start.elapsed().as_secs_f64();
        if let (Ok(_), Some(limit)) = (&out, limit) {
            if secs > *limit as f64 {
                out = Err(format!("exceeded {limit} s"));
            }
        }
        match out {
            Ok(detail) => println!("acceptance {:>2} PASS  {name}: {detail} [{secs:.2} s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("acceptance {:>2} FAIL  {name}: {detail} [{secs:.2} s]", i + 1)
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
