//! Direct-definition counters used by the verification grid.
//!
//! Nothing here goes through distance profiles or the auxiliary-graph
//! convolution; every count is a plain scan over tuples of `E`.

use num_bigint::BigUint;

use crate::auxgraph::SimpleGraph;
use crate::ffield::Fq;
use crate::geom::{dist, point_from_index, space_size, PointSet};

/// Feasibility limit for tuple scans.
pub const ORACLE_LIMIT: u128 = 100_000_000;

fn related(field: &Fq, set: &PointSet, r: u32, x: (usize, usize), y: (usize, usize)) -> bool {
    let p = set.points();
    let dx = dist(field, p[x.0].coords(), p[x.1].coords());
    dx != 0 && dist(field, p[y.0].coords(), p[y.1].coords()) == field.mul(r, dx)
}

fn odometer(idx: &mut [usize], base: usize) -> bool {
    for slot in idx.iter_mut() {
        *slot += 1;
        if *slot < base {
            return true;
        }
        *slot = 0;
    }
    false
}

/// `|S_k(r)|` by scanning `E^{2k+2}`; `None` when the scan exceeds [`ORACLE_LIMIT`].
pub fn star_tuples(set: &PointSet, r: u32, k: usize) -> Option<u64> {
    let n = set.len();
    if (n as u128).checked_pow(2 * k as u32 + 2)? > ORACLE_LIMIT {
        return None;
    }
    if n == 0 {
        return Some(0);
    }
    let field = set.field();
    // idx = (x_1, y_1, x_2, y_2, …)
    let mut idx = vec![0usize; 2 * k + 2];
    let mut count = 0;
    loop {
        let ok = (1..=k).all(|i| related(field, set, r, (idx[0], idx[2 * i]), (idx[1], idx[2 * i + 1])));
        count += ok as u64;
        if !odometer(&mut idx, n) {
            return Some(count);
        }
    }
}

/// `|P_k(r)|` by scanning `E^{2k+2}`.
pub fn path_tuples(set: &PointSet, r: u32, k: usize) -> Option<u64> {
    let n = set.len();
    if (n as u128).checked_pow(2 * k as u32 + 2)? > ORACLE_LIMIT {
        return None;
    }
    if n == 0 {
        return Some(0);
    }
    let field = set.field();
    let mut idx = vec![0usize; 2 * k + 2];
    let mut count = 0;
    loop {
        let ok = (0..k).all(|i| related(field, set, r, (idx[2 * i], idx[2 * i + 2]), (idx[2 * i + 1], idx[2 * i + 3])));
        count += ok as u64;
        if !odometer(&mut idx, n) {
            return Some(count);
        }
    }
}

/// The auxiliary graph as an explicit graph on `|E|²` vertices.
pub fn explicit_aux_graph(set: &PointSet, r: u32) -> SimpleGraph {
    let n = set.len();
    let field = set.field();
    let mut edges = Vec::new();
    for a in 0..n * n {
        for b in (a + 1)..n * n {
            if related(field, set, r, (a / n, b / n), (a % n, b % n)) {
                edges.push((a, b));
            }
        }
    }
    SimpleGraph::new(n * n, &edges).expect("loop-free by construction")
}

/// Walk counts by enumerating every vertex sequence of length `k + 1`.
pub fn walks_by_enumeration(graph: &SimpleGraph, kmax: usize) -> Option<Vec<BigUint>> {
    let v = graph.vertex_count();
    if (v as u128).checked_pow(kmax as u32 + 1)? > ORACLE_LIMIT {
        return None;
    }
    let adjacent = |a: usize, b: usize| graph.neighbors(a).contains(&b);
    let mut out = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        if v == 0 {
            out.push(BigUint::from(0u32));
            continue;
        }
        let mut seq = vec![0usize; k + 1];
        let mut count = 0u64;
        loop {
            count += seq.windows(2).all(|w| adjacent(w[0], w[1])) as u64;
            if !odometer(&mut seq, v) {
                break;
            }
        }
        out.push(BigUint::from(count));
    }
    Some(out)
}

/// `|S(center, t)|` by scanning all of `F_q^d`.
pub fn sphere_scan(field: &Fq, d: usize, center: &[u32], t: u32) -> Option<u64> {
    let total = space_size(field.q(), d)?;
    if total > ORACLE_LIMIT {
        return None;
    }
    Some((0..total).filter(|&i| dist(field, point_from_index(field.q(), d, i).coords(), center) == t).count() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    #[test]
    fn small_counts() {
        let f = Arc::new(Fq::new(3).unwrap());
        let e = PointSet::from_coords(f.clone(), 2, &[&[0, 0], &[1, 0], &[0, 1]]).unwrap();
        assert_eq!(star_tuples(&e, 1, 1), Some(20));
        let two = PointSet::from_coords(f.clone(), 2, &[&[0, 0], &[1, 0]]).unwrap();
        assert_eq!(path_tuples(&two, 1, 2), Some(4));
        let g = explicit_aux_graph(&two, 1);
        assert_eq!(walks_by_enumeration(&g, 2).unwrap(), vec![4u32.into(), 4u32.into(), 4u32.into()]);
        assert_eq!(sphere_scan(&f, 2, &[0, 0], 1), Some(4));
    }
}
