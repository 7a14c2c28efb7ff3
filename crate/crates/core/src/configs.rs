//! Pairs of similar configurations: tuple counts, degenerate decompositions
//! and witness search.
//!
//! All tuples are ordered. A pair of a pattern graph `G` on `n` vertices with
//! dilation ratio `r` is a pair of injective placements `x, y : [n] → E` with
//! `‖y_i − y_j‖ = r‖x_i − x_j‖ ≠ 0` on every edge `{i, j}`.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::auxgraph::AuxGraph;
use crate::error::{Error, Result};
use crate::geom::{dist, Point, PointSet};
use crate::io::big;

/// Default enumeration budget in visited nodes.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "FQCONFIG_BUDGET";

pub fn default_budget() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// A pattern graph on vertices `0..n` (displayed 1-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    kind: PatternKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PatternKind {
    Star(usize),
    Path(usize),
    Cycle(usize),
    Custom,
}

impl PatternGraph {
    /// Builds a graph from 1-based edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::InvalidPattern("edge set is empty".into()));
        }
        let mut out = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a == b || a == 0 || b == 0 || a > n || b > n {
                return Err(Error::InvalidPattern(format!("edge {{{a}, {b}}} is not a pair of distinct vertices in [1, {n}]")));
            }
            let e = (a.min(b) - 1, a.max(b) - 1);
            if !out.contains(&e) {
                out.push(e);
            }
        }
        Ok(PatternGraph { n, edges: out, kind: PatternKind::Custom })
    }

    /// `k`-star: center 1 joined to `2, …, k+1`.
    pub fn star(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidPattern("a star needs k >= 1".into()));
        }
        let edges: Vec<_> = (2..=k + 1).map(|i| (1, i)).collect();
        Ok(PatternGraph { kind: PatternKind::Star(k), ..Self::from_edges(k + 1, &edges)? })
    }

    /// `k`-path: `1 – 2 – … – k+1`.
    pub fn path(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidPattern("a path needs k >= 1".into()));
        }
        let edges: Vec<_> = (1..=k).map(|i| (i, i + 1)).collect();
        Ok(PatternGraph { kind: PatternKind::Path(k), ..Self::from_edges(k + 1, &edges)? })
    }

    /// `k`-cycle on `k ≥ 3` vertices.
    pub fn cycle(k: usize) -> Result<Self> {
        if k < 3 {
            return Err(Error::InvalidPattern("a cycle needs k >= 3".into()));
        }
        let mut edges: Vec<_> = (1..k).map(|i| (i, i + 1)).collect();
        edges.push((k, 1));
        Ok(PatternGraph { kind: PatternKind::Cycle(k), ..Self::from_edges(k, &edges)? })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// 0-based edges.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// For each vertex, its neighbors with a smaller index.
    fn earlier_neighbors(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            out[b].push(a);
        }
        out
    }
}

impl fmt::Display for PatternGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            PatternKind::Star(k) => write!(f, "star:{k}"),
            PatternKind::Path(k) => write!(f, "path:{k}"),
            PatternKind::Cycle(k) => write!(f, "cycle:{k}"),
            PatternKind::Custom => {
                let edges: Vec<String> = self.edges.iter().map(|(a, b)| format!("{}-{}", a + 1, b + 1)).collect();
                write!(f, "edges:{}:{}", self.n, edges.join(","))
            }
        }
    }
}

impl FromStr for PatternGraph {
    type Err = Error;

    /// `star:K`, `path:K`, `cycle:K` or `edges:N:1-2,2-3,…`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidPattern(format!("cannot parse pattern {s:?}"));
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "star" | "path" | "cycle" => {
                let k: usize = rest.parse().map_err(|_| bad())?;
                match kind {
                    "star" => Self::star(k),
                    "path" => Self::path(k),
                    _ => Self::cycle(k),
                }
            }
            "edges" => {
                let (n, list) = rest.split_once(':').ok_or_else(bad)?;
                let n: usize = n.parse().map_err(|_| bad())?;
                let edges = list
                    .split(',')
                    .map(|e| {
                        let (a, b) = e.split_once('-').ok_or_else(bad)?;
                        Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
                    })
                    .collect::<Result<Vec<(usize, usize)>>>()?;
                Self::from_edges(n, &edges)
            }
            _ => Err(bad()),
        }
    }
}

/// Two placements of a pattern graph realizing a pair with ratio `r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub xs: Vec<Point>,
    pub ys: Vec<Point>,
}

impl Witness {
    /// Re-checks every defining condition from coordinates.
    pub fn validate(&self, set: &PointSet, r: u32, pattern: &PatternGraph, require_distinct_tuples: bool) -> Result<()> {
        let field = set.field();
        let fail = |msg: String| Err(Error::SelfCheck(msg));
        let n = pattern.vertex_count();
        if self.xs.len() != n || self.ys.len() != n {
            return fail(format!("witness has {} / {} points for {n} vertices", self.xs.len(), self.ys.len()));
        }
        for tuple in [&self.xs, &self.ys] {
            for (i, p) in tuple.iter().enumerate() {
                if !set.contains(p) {
                    return fail(format!("{p:?} is not in E"));
                }
                if tuple[..i].contains(p) {
                    return fail(format!("{p:?} repeated"));
                }
            }
        }
        for &(a, b) in pattern.edges() {
            let dx = dist(field, self.xs[a].coords(), self.xs[b].coords());
            let dy = dist(field, self.ys[a].coords(), self.ys[b].coords());
            if dx == 0 || dy != field.mul(r, dx) {
                return fail(format!("edge {{{}, {}}}: ‖Δy‖ = {dy}, r‖Δx‖ = {}", a + 1, b + 1, field.mul(r, dx)));
            }
        }
        if require_distinct_tuples && self.xs == self.ys {
            return fail("x and y tuples coincide".into());
        }
        Ok(())
    }

    /// The same pair read with the roles of `x` and `y` exchanged (ratio `r⁻¹`).
    pub fn swapped(&self) -> Witness {
        Witness { xs: self.ys.clone(), ys: self.xs.clone() }
    }
}

fn check_ratio(set: &PointSet, r: u32) -> Result<()> {
    if r == 0 {
        return Err(Error::ZeroRatio);
    }
    set.field().check(r).map(|_| ())
}

/// `|S_k(r)|` through the degree identity `Σ_v deg(v)^k`.
pub fn count_star_tuples(set: &PointSet, r: u32, k: u32) -> Result<BigUint> {
    check_ratio(set, r)?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    Ok(AuxGraph::new(set, r)?.degree_power_sum(k))
}

/// `|P_k(r)| = w_k` of the auxiliary graph.
pub fn count_path_tuples(set: &PointSet, r: u32, k: usize) -> Result<BigUint> {
    check_ratio(set, r)?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    Ok(AuxGraph::new(set, r)?.walk_counts(k).swap_remove(k))
}

struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    fn new(limit: u64) -> Self {
        Budget { limit, used: 0 }
    }

    #[inline]
    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            Err(Error::BudgetExceeded { budget: self.limit })
        } else {
            Ok(())
        }
    }
}

/// Neighbor lists of the auxiliary graph, vertices encoded as `x * n + y`.
fn aux_neighbors(set: &PointSet, r: u32, budget: &mut Budget) -> Result<Vec<Vec<usize>>> {
    let n = set.len();
    let dm = set.distance_matrix();
    let field = set.field();
    let mut out = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let mut nb = Vec::new();
            for x2 in 0..n {
                let t = dm[x * n + x2];
                if t == 0 {
                    continue;
                }
                let s = field.mul(r, t);
                for y2 in 0..n {
                    budget.tick()?;
                    if dm[y * n + y2] == s {
                        nb.push(x2 * n + y2);
                    }
                }
            }
            out.push(nb);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassCount {
    pub label: String,
    pub count: u64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PathSplit {
    /// `x_2 = x_4` and `y_2 ≠ y_4`.
    pub i: u64,
    /// `x_2 ≠ x_4` and `y_2 = y_4`.
    pub ii: u64,
    /// `x_2 = x_4` and `y_2 = y_4`.
    pub iii: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct NamedCheck {
    pub name: String,
    pub holds: bool,
}

/// Exact split of `S_k(r)` or `P_4(r)` into degenerate classes and the
/// nondegenerate remainder (`B` or `C`).
#[derive(Debug, Clone, Serialize)]
pub struct DecompositionReport {
    pub pattern: String,
    pub total: u64,
    pub classes: Vec<ClassCount>,
    /// `|A_i ∪ A′_i|` for each class index (paths) or pair (stars).
    pub class_unions: Vec<ClassCount>,
    pub union: u64,
    pub nondegenerate: u64,
    pub split: Option<PathSplit>,
    pub checks: Vec<NamedCheck>,
    pub nodes_visited: u64,
}

impl DecompositionReport {
    pub fn closed(&self) -> bool {
        self.nondegenerate + self.union == self.total
    }

    pub fn all_checks_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn class(&self, label: &str) -> Option<u64> {
        self.classes.iter().find(|c| c.label == label).map(|c| c.count)
    }
}

/// Enumerates `S_k(r)` and counts `A_ij`, `A′_ij` (`2 ≤ i < j ≤ k+1`) and `B`.
pub fn star_decomposition(set: &PointSet, r: u32, k: usize, budget: u64) -> Result<DecompositionReport> {
    check_ratio(set, r)?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let n = set.len();
    let mut budget = Budget::new(budget);
    let nbrs = aux_neighbors(set, r, &mut budget)?;
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|a| ((a + 1)..k).map(move |b| (a, b))).collect();
    let mut ax = vec![0u64; pairs.len()];
    let mut ay = vec![0u64; pairs.len()];
    let mut axy = vec![0u64; pairs.len()];
    let (mut total, mut union, mut nondegenerate) = (0u64, 0u64, 0u64);
    let mut leaves = vec![0usize; k];
    for center in 0..n * n {
        let nb = &nbrs[center];
        if nb.is_empty() {
            continue;
        }
        // odometer over nb^k
        let mut idx = vec![0usize; k];
        loop {
            budget.tick()?;
            for (slot, &i) in leaves.iter_mut().zip(&idx) {
                *slot = nb[i];
            }
            total += 1;
            let mut any = false;
            for (c, &(a, b)) in pairs.iter().enumerate() {
                let same_x = leaves[a] / n == leaves[b] / n;
                let same_y = leaves[a] % n == leaves[b] % n;
                ax[c] += same_x as u64;
                ay[c] += same_y as u64;
                axy[c] += (same_x || same_y) as u64;
                any |= same_x || same_y;
            }
            union += any as u64;
            // B checked directly: all x distinct and all y distinct
            let (cx, cy) = (center / n, center % n);
            let mut xs: Vec<usize> = leaves.iter().map(|v| v / n).chain([cx]).collect();
            let mut ys: Vec<usize> = leaves.iter().map(|v| v % n).chain([cy]).collect();
            xs.sort_unstable();
            ys.sort_unstable();
            xs.dedup();
            ys.dedup();
            nondegenerate += (xs.len() == k + 1 && ys.len() == k + 1) as u64;
            // advance
            let mut pos = 0;
            while pos < k {
                idx[pos] += 1;
                if idx[pos] < nb.len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == k {
                break;
            }
        }
    }
    let label = |(a, b): (usize, usize)| (a + 2, b + 2);
    let mut classes = Vec::new();
    let mut class_unions = Vec::new();
    for (c, &p) in pairs.iter().enumerate() {
        let (i, j) = label(p);
        classes.push(ClassCount { label: format!("A_{i}{j}"), count: ax[c] });
        classes.push(ClassCount { label: format!("A'_{i}{j}"), count: ay[c] });
        class_unions.push(ClassCount { label: format!("A_{i}{j} ∪ A'_{i}{j}"), count: axy[c] });
    }
    let graph = AuxGraph::new(set, r)?;
    let identity = graph.degree_power_sum(k as u32) == BigUint::from(total);
    let mut checks = vec![
        NamedCheck { name: "|B| + |union| = |S_k|".into(), holds: nondegenerate + union == total },
        NamedCheck { name: "|S_k| = sum deg^k".into(), holds: identity },
    ];
    if k >= 2 {
        let last = pairs.len() - 1; // the pair (k, k+1)
        let s_prev = graph.degree_power_sum(k as u32 - 1);
        let cap = BigUint::from(n) * &s_prev;
        checks.push(NamedCheck { name: format!("|A_{k}{}| <= |E| |S_{}|", k + 1, k - 1), holds: BigUint::from(ax[last]) <= cap });
        checks.push(NamedCheck { name: format!("|A'_{k}{}| <= |E| |S_{}|", k + 1, k - 1), holds: BigUint::from(ay[last]) <= cap });
        let both = ax[last] + ay[last] - axy[last];
        checks.push(NamedCheck { name: format!("|A_{k}{} ∩ A'_{k}{}| = |S_{}|", k + 1, k + 1, k - 1), holds: BigUint::from(both) == s_prev });
    }
    Ok(DecompositionReport {
        pattern: format!("star:{k}"),
        total,
        classes,
        class_unions,
        union,
        nondegenerate,
        split: None,
        checks,
        nodes_visited: budget.used,
    })
}

/// Coincidences defining `A_1 … A_6` on a 4-path `(v_1, …, v_5)`, 0-based.
pub const PATH4_CLASSES: [(usize, usize); 6] = [(0, 2), (0, 3), (0, 4), (2, 4), (1, 4), (1, 3)];

/// Enumerates `P_4(r)` and counts the twelve `A`-classes, `I`, `II`, `III` and `C`.
pub fn path4_decomposition(set: &PointSet, r: u32, budget: u64) -> Result<DecompositionReport> {
    check_ratio(set, r)?;
    let n = set.len();
    let mut budget = Budget::new(budget);
    let nbrs = aux_neighbors(set, r, &mut budget)?;
    let mut ax = [0u64; 6];
    let mut ay = [0u64; 6];
    let mut axy = [0u64; 6];
    let mut split = PathSplit { i: 0, ii: 0, iii: 0 };
    let (mut total, mut union, mut nondegenerate) = (0u64, 0u64, 0u64);
    let mut walk = [0usize; 5];
    for v1 in 0..n * n {
        walk[0] = v1;
        for &v2 in &nbrs[v1] {
            walk[1] = v2;
            for &v3 in &nbrs[v2] {
                walk[2] = v3;
                for &v4 in &nbrs[v3] {
                    walk[3] = v4;
                    for &v5 in &nbrs[v4] {
                        budget.tick()?;
                        walk[4] = v5;
                        total += 1;
                        let mut any = false;
                        for (c, &(a, b)) in PATH4_CLASSES.iter().enumerate() {
                            let same_x = walk[a] / n == walk[b] / n;
                            let same_y = walk[a] % n == walk[b] % n;
                            ax[c] += same_x as u64;
                            ay[c] += same_y as u64;
                            axy[c] += (same_x || same_y) as u64;
                            any |= same_x || same_y;
                            if c == 5 {
                                match (same_x, same_y) {
                                    (true, false) => split.i += 1,
                                    (false, true) => split.ii += 1,
                                    (true, true) => split.iii += 1,
                                    _ => {}
                                }
                            }
                        }
                        union += any as u64;
                        let distinct = |f: &dyn Fn(usize) -> usize| {
                            (0..5).all(|a| ((a + 1)..5).all(|b| f(walk[a]) != f(walk[b])))
                        };
                        nondegenerate += (distinct(&|v| v / n) && distinct(&|v| v % n)) as u64;
                    }
                }
            }
        }
    }
    let mut classes = Vec::new();
    let mut class_unions = Vec::new();
    for c in 0..6 {
        classes.push(ClassCount { label: format!("A_{}", c + 1), count: ax[c] });
        classes.push(ClassCount { label: format!("A'_{}", c + 1), count: ay[c] });
        class_unions.push(ClassCount { label: format!("A_{0} ∪ A'_{0}", c + 1), count: axy[c] });
    }
    let sum_unions: u64 = axy.iter().sum();
    let w4 = AuxGraph::new(set, r)?.walk_counts(4).swap_remove(4);
    let checks = vec![
        NamedCheck { name: "|C| + |union| = |P_4|".into(), holds: nondegenerate + union == total },
        NamedCheck { name: "I + II + III = |A_6 ∪ A'_6|".into(), holds: split.i + split.ii + split.iii == axy[5] },
        NamedCheck {
            name: "|C| >= |P_4| - sum |A_i ∪ A'_i|".into(),
            holds: nondegenerate as i128 >= total as i128 - sum_unions as i128,
        },
        NamedCheck { name: "|P_4| = w_4".into(), holds: w4 == BigUint::from(total) },
    ];
    Ok(DecompositionReport {
        pattern: "path:4".into(),
        total,
        classes,
        class_unions,
        union,
        nondegenerate,
        split: Some(split),
        checks,
        nodes_visited: budget.used,
    })
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SearchOptions {
    /// Reject witnesses whose `x` and `y` tuples are identical.
    pub require_distinct_tuples: bool,
    /// Node budget; `None` searches without limit.
    pub budget: Option<u64>,
    /// Split the search over the choice of `x_1` across worker threads.
    pub parallel: bool,
}


#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    pub witness: Option<Witness>,
    pub nodes_visited: u64,
}

/// Backtracking state shared by search and counting. Vertices are placed
/// in index order: all of `x` first, then all of `y`, candidates in point order.
struct Embedder<'a> {
    set: &'a PointSet,
    n: usize,
    dm: Vec<u32>,
    r: u32,
    earlier: Vec<Vec<usize>>,
    /// Nonzero values realized as a distance between two points of `E`.
    realized: Vec<bool>,
    require_distinct_tuples: bool,
    limit: u64,
    nodes: &'a AtomicU64,
}

impl<'a> Embedder<'a> {
    fn new(set: &'a PointSet, r: u32, pattern: &PatternGraph, require_distinct_tuples: bool, limit: u64, nodes: &'a AtomicU64) -> Self {
        let n = set.len();
        let dm = set.distance_matrix();
        let mut realized = vec![false; set.field().q() as usize];
        for &t in &dm {
            realized[t as usize] = t != 0;
        }
        Embedder { set, n, dm, r, earlier: pattern.earlier_neighbors(), realized, require_distinct_tuples, limit, nodes }
    }

    #[inline]
    fn tick(&self) -> Result<()> {
        if self.nodes.fetch_add(1, Ordering::Relaxed) + 1 > self.limit {
            Err(Error::BudgetExceeded { budget: self.limit })
        } else {
            Ok(())
        }
    }

    fn x_fits(&self, i: usize, cand: usize, xs: &[usize]) -> bool {
        !xs.contains(&cand)
            && self.earlier[i].iter().all(|&j| {
                let t = self.dm[cand * self.n + xs[j]];
                t != 0 && self.realized[self.set.field().mul(self.r, t) as usize]
            })
    }

    fn y_fits(&self, i: usize, cand: usize, xs: &[usize], ys: &[usize]) -> bool {
        !ys.contains(&cand)
            && self.earlier[i].iter().all(|&j| {
                self.dm[cand * self.n + ys[j]] == self.set.field().mul(self.r, self.dm[xs[i] * self.n + xs[j]])
            })
    }

    fn find_y(&self, xs: &[usize], ys: &mut Vec<usize>) -> Result<bool> {
        let i = ys.len();
        if i == xs.len() {
            return Ok(!(self.require_distinct_tuples && xs == ys.as_slice()));
        }
        for cand in 0..self.n {
            self.tick()?;
            if self.y_fits(i, cand, xs, ys) {
                ys.push(cand);
                if self.find_y(xs, ys)? {
                    return Ok(true);
                }
                ys.pop();
            }
        }
        Ok(false)
    }

    fn find_x(&self, m: usize, xs: &mut Vec<usize>, ys: &mut Vec<usize>) -> Result<bool> {
        let i = xs.len();
        if i == m {
            return self.find_y(xs, ys);
        }
        for cand in 0..self.n {
            self.tick()?;
            if self.x_fits(i, cand, xs) {
                xs.push(cand);
                if self.find_x(m, xs, ys)? {
                    return Ok(true);
                }
                xs.pop();
            }
        }
        Ok(false)
    }

    fn count_y(&self, xs: &[usize], ys: &mut Vec<usize>) -> Result<u64> {
        let i = ys.len();
        if i == xs.len() {
            return Ok(1);
        }
        let mut total = 0;
        for cand in 0..self.n {
            self.tick()?;
            if self.y_fits(i, cand, xs, ys) {
                ys.push(cand);
                total += self.count_y(xs, ys)?;
                ys.pop();
            }
        }
        Ok(total)
    }

    fn count_x(&self, m: usize, xs: &mut Vec<usize>) -> Result<u64> {
        let i = xs.len();
        if i == m {
            return self.count_y(xs, &mut Vec::with_capacity(m));
        }
        let mut total = 0;
        for cand in 0..self.n {
            self.tick()?;
            if self.x_fits(i, cand, xs) {
                xs.push(cand);
                total += self.count_x(m, xs)?;
                xs.pop();
            }
        }
        Ok(total)
    }

    fn witness(&self, xs: &[usize], ys: &[usize]) -> Witness {
        Witness {
            xs: xs.iter().map(|&i| self.set.point(i).clone()).collect(),
            ys: ys.iter().map(|&i| self.set.point(i).clone()).collect(),
        }
    }
}

/// First witness in lexicographic order of `(x indices, y indices)`, or `None`.
pub fn find_witness(set: &PointSet, r: u32, pattern: &PatternGraph, opts: SearchOptions) -> Result<SearchOutcome> {
    check_ratio(set, r)?;
    let m = pattern.vertex_count();
    let nodes = AtomicU64::new(0);
    if m > set.len() {
        return Ok(SearchOutcome { witness: None, nodes_visited: 0 });
    }
    let limit = opts.budget.unwrap_or(u64::MAX);
    let emb = Embedder::new(set, r, pattern, opts.require_distinct_tuples, limit, &nodes);
    let found = if opts.parallel {
        let branches: Vec<Result<Option<(Vec<usize>, Vec<usize>)>>> = (0..set.len())
            .into_par_iter()
            .map(|first| {
                let (mut xs, mut ys) = (vec![first], Vec::with_capacity(m));
                Ok(emb.find_x(m, &mut xs, &mut ys)?.then_some((xs, ys)))
            })
            .collect();
        let mut first = None;
        for b in branches {
            if let Some(hit) = b? {
                first = Some(hit);
                break;
            }
        }
        first
    } else {
        let (mut xs, mut ys) = (Vec::with_capacity(m), Vec::with_capacity(m));
        emb.find_x(m, &mut xs, &mut ys)?.then_some((xs, ys))
    };
    let witness = found.map(|(xs, ys)| emb.witness(&xs, &ys));
    if let Some(w) = &witness {
        w.validate(set, r, pattern, opts.require_distinct_tuples)?;
    }
    Ok(SearchOutcome { witness, nodes_visited: nodes.load(Ordering::Relaxed) })
}

/// Number of ordered witness pairs (equals `|B|` for stars and `|C|` for 4-paths).
pub fn count_witnesses(set: &PointSet, r: u32, pattern: &PatternGraph, budget: u64) -> Result<u64> {
    check_ratio(set, r)?;
    let m = pattern.vertex_count();
    if m > set.len() {
        return Ok(0);
    }
    let nodes = AtomicU64::new(0);
    let emb = Embedder::new(set, r, pattern, false, budget, &nodes);
    emb.count_x(m, &mut Vec::with_capacity(m))
}

#[derive(Debug, Clone, Serialize)]
pub struct TupleCounts {
    pub pattern: String,
    pub r: u32,
    #[serde(serialize_with = "big")]
    pub count: BigUint,
}
