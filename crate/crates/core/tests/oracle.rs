mod common;

use std::sync::Arc;

use common::{aux_adjacency, degrees_dense, path_edges, scan_pattern, sphere_scan, star_edges, walks_dense, Mix, RefField};
use fqconfig::configs::{self, PatternGraph, SearchOptions, PATH4_CLASSES};
use fqconfig::geom;
use fqconfig::{AuxGraph, Fq, Point, PointSet};
use num_bigint::BigUint;

const BUDGET: u64 = 1 << 40;

#[test]
fn field_tables_match_reference() {
    for q in [3, 5, 7, 9, 25, 27] {
        let f = Fq::new(q).unwrap();
        let rf = RefField::like(&f);
        for a in f.elements() {
            assert_eq!(f.quad_char(a) as i64, rf.chi(a as u64), "q={q} a={a}");
            for b in f.elements() {
                assert_eq!(f.mul(a, b) as u64, rf.mul(a as u64, b as u64), "q={q} {a}*{b}");
                assert_eq!(f.add(a, b) as u64, rf.add(a as u64, b as u64), "q={q} {a}+{b}");
            }
        }
    }
}

#[test]
fn sphere_sizes_match_scan() {
    for q in [3, 5, 7, 9] {
        let f = Arc::new(Fq::new(q).unwrap());
        let rf = RefField::like(&f);
        for d in 2..=3 {
            for t in f.elements() {
                let expect = sphere_scan(&rf, d, t as u64);
                assert_eq!(geom::sphere_size_formula(&f, d, t).unwrap(), BigUint::from(expect), "q={q} d={d} t={t}");
                assert_eq!(geom::sphere_enum(&f, d, &Point::zero(d), t).unwrap().len() as u64, expect);
            }
        }
    }
}

#[test]
fn degrees_and_walks_match_dense_matrix() {
    let mut mix = Mix(11);
    for q in [3, 5, 9] {
        let f = Arc::new(Fq::new(q).unwrap());
        for trial in 0..6 {
            let set = mix.point_set(&f, 2, 2 + trial % 4);
            for r in f.nonzero() {
                let a = aux_adjacency(&set, r);
                let g = AuxGraph::new(&set, r).unwrap();
                let degs: Vec<u128> = g.degrees().iter().map(|&x| x as u128).collect();
                assert_eq!(degs, degrees_dense(&a));
                let w: Vec<BigUint> = walks_dense(&a, 5).into_iter().map(BigUint::from).collect();
                assert_eq!(g.walk_counts(5), w, "q={q} r={r} |E|={}", set.len());
            }
        }
    }
}

#[test]
fn tuple_counts_match_scan() {
    let mut mix = Mix(12);
    let f = Arc::new(Fq::new(5).unwrap());
    for _ in 0..4 {
        let set = mix.point_set(&f, 2, 4);
        for r in f.nonzero() {
            for k in 1..=3 {
                let star = scan_pattern(&set, r, k + 1, &star_edges(k), &[]);
                assert_eq!(configs::count_star_tuples(&set, r, k as u32).unwrap(), BigUint::from(star.total));
                let path = scan_pattern(&set, r, k + 1, &path_edges(k), &[]);
                assert_eq!(configs::count_path_tuples(&set, r, k).unwrap(), BigUint::from(path.total));
            }
        }
    }
}

#[test]
fn star_decomposition_matches_scan() {
    let mut mix = Mix(13);
    for q in [3, 5] {
        let f = Arc::new(Fq::new(q).unwrap());
        for size in [3, 4, 5] {
            let set = mix.point_set(&f, 2, size);
            for r in f.nonzero() {
                for k in [2, 3] {
                    let pairs: Vec<(usize, usize)> = (1..=k).flat_map(|i| ((i + 1)..=k).map(move |j| (i, j))).collect();
                    let scan = scan_pattern(&set, r, k + 1, &star_edges(k), &pairs);
                    let rep = configs::star_decomposition(&set, r, k, BUDGET).unwrap();
                    assert_eq!(rep.total, scan.total);
                    assert_eq!(rep.nondegenerate, scan.injective);
                    assert!(rep.closed() && rep.all_checks_hold());
                    for (&((i, j), cx), &(_, cy)) in scan.x_equal.iter().zip(&scan.y_equal) {
                        assert_eq!(rep.class(&format!("A_{}{}", i + 1, j + 1)), Some(cx));
                        assert_eq!(rep.class(&format!("A'_{}{}", i + 1, j + 1)), Some(cy));
                    }
                    let pat = PatternGraph::star(k).unwrap();
                    assert_eq!(configs::count_witnesses(&set, r, &pat, BUDGET).unwrap(), scan.injective);
                }
            }
        }
    }
}

#[test]
fn path_decomposition_matches_scan() {
    let mut mix = Mix(14);
    let f = Arc::new(Fq::new(3).unwrap());
    for size in [3, 4, 5] {
        let set = mix.point_set(&f, 2, size);
        for r in f.nonzero() {
            let scan = scan_pattern(&set, r, 5, &path_edges(4), &PATH4_CLASSES);
            let rep = configs::path4_decomposition(&set, r, BUDGET).unwrap();
            assert_eq!(rep.total, scan.total);
            assert_eq!(rep.nondegenerate, scan.injective);
            for (c, (&(_, cx), &(_, cy))) in scan.x_equal.iter().zip(&scan.y_equal).enumerate() {
                assert_eq!(rep.class(&format!("A_{}", c + 1)), Some(cx));
                assert_eq!(rep.class(&format!("A'_{}", c + 1)), Some(cy));
            }
            let split = rep.split.unwrap();
            assert_eq!(split.i + split.ii + split.iii, rep.class_unions[5].count);
        }
    }
}

#[test]
fn search_agrees_with_existence_by_scan() {
    let mut mix = Mix(15);
    let f = Arc::new(Fq::new(5).unwrap());
    for size in [2, 3, 4] {
        for _ in 0..3 {
            let set = mix.point_set(&f, 2, size);
            for r in f.nonzero() {
                for k in [1, 2] {
                    let exists = scan_pattern(&set, r, k + 1, &star_edges(k), &[]).injective > 0;
                    let pat = PatternGraph::star(k).unwrap();
                    let out = configs::find_witness(&set, r, &pat, SearchOptions::default()).unwrap();
                    assert_eq!(out.witness.is_some(), exists);
                }
            }
        }
    }
}

#[test]
fn distance_and_quotient_sets_by_hand() {
    let f = Arc::new(Fq::new(5).unwrap());
    let e = PointSet::from_coords(f.clone(), 2, &[&[0, 0], &[1, 0], &[0, 2]]).unwrap();
    // distances 1, 4, 1 + 4 = 0
    assert_eq!(geom::distance_set(&e, true).into_iter().collect::<Vec<_>>(), vec![0, 1, 4]);
    let quot = geom::quotient_set(&geom::distance_set(&e, true), &f);
    assert_eq!(quot.into_iter().collect::<Vec<_>>(), vec![0, 1, 4]);
}
