//! The auxiliary graph on `E × E` for a dilation ratio `r`.
//!
//! Vertices are pairs `(x, y)` of points of `E`; `(x, y) ~ (x′, y′)` iff
//! `‖y′ − y‖ = r‖x′ − x‖ ≠ 0`. The graph is never materialized. Degrees and
//! walk counts are computed from the per-point distance profiles `N_x(t)`.

use num_bigint::BigUint;
use num_traits::{One, Pow, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ffield::Fq;
use crate::geom::{dist, Point, PointSet};
use crate::io::{big, big_vec};

/// `N_x(t) = #{x′ ∈ E : ‖x′ − x‖ = t}` for every point `x` of `E`.
#[derive(Debug, Clone)]
pub struct DistProfile {
    n: usize,
    dist: Vec<u32>,
    /// Sorted `(t, N_x(t))` pairs with `N_x(t) > 0`, one list per point.
    rows: Vec<Vec<(u32, u32)>>,
}

impl DistProfile {
    pub fn build(set: &PointSet) -> Self {
        let n = set.len();
        let dist = set.distance_matrix();
        let rows = (0..n)
            .into_par_iter()
            .map(|x| {
                let mut ts: Vec<u32> = dist[x * n..(x + 1) * n].to_vec();
                ts.sort_unstable();
                let mut row: Vec<(u32, u32)> = Vec::new();
                for t in ts {
                    match row.last_mut() {
                        Some((last, c)) if *last == t => *c += 1,
                        _ => row.push((t, 1)),
                    }
                }
                row
            })
            .collect();
        DistProfile { n, dist, rows }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `N_x(t)`.
    pub fn count(&self, x: usize, t: u32) -> u32 {
        let row = &self.rows[x];
        row.binary_search_by_key(&t, |&(v, _)| v).map(|i| row[i].1).unwrap_or(0)
    }

    pub fn row(&self, x: usize) -> &[(u32, u32)] {
        &self.rows[x]
    }

    /// `‖x_i − x_j‖`.
    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> u32 {
        self.dist[i * self.n + j]
    }
}

/// Adjacency in the auxiliary graph, evaluated directly from coordinates.
pub fn adjacent(field: &Fq, v: (&Point, &Point), w: (&Point, &Point), r: u32) -> Result<bool> {
    if r == 0 {
        return Err(Error::ZeroRatio);
    }
    let dx = dist(field, &v.0 .0, &w.0 .0);
    let dy = dist(field, &v.1 .0, &w.1 .0);
    Ok(dx != 0 && dy == field.mul(r, dx))
}

/// Degrees and walk counts of the auxiliary graph for one `(E, r)`.
#[derive(Debug, Clone)]
pub struct AuxGraph {
    set: PointSet,
    r: u32,
    profile: DistProfile,
    degrees: Vec<u64>,
}

impl AuxGraph {
    pub fn new(set: &PointSet, r: u32) -> Result<Self> {
        if r == 0 {
            return Err(Error::ZeroRatio);
        }
        set.field().check(r)?;
        let profile = DistProfile::build(set);
        let field = set.field();
        let n = set.len();
        let degrees = (0..n * n)
            .into_par_iter()
            .map(|v| {
                let (x, y) = (v / n, v % n);
                profile
                    .row(x)
                    .iter()
                    .filter(|&&(t, _)| t != 0)
                    .map(|&(t, c)| c as u64 * profile.count(y, field.mul(r, t)) as u64)
                    .sum()
            })
            .collect();
        Ok(AuxGraph { set: set.clone(), r, profile, degrees })
    }

    pub fn set(&self) -> &PointSet {
        &self.set
    }

    pub fn ratio(&self) -> u32 {
        self.r
    }

    pub fn profile(&self) -> &DistProfile {
        &self.profile
    }

    /// Number of vertices, `|E|²`.
    pub fn vertex_count(&self) -> usize {
        self.degrees.len()
    }

    /// `deg(x, y) = Σ_{t≠0} N_x(t)·N_y(r t)` for point indices `x`, `y`.
    pub fn degree(&self, x: usize, y: usize) -> u64 {
        self.degrees[x * self.set.len() + y]
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn adjacent(&self, v: (usize, usize), w: (usize, usize)) -> bool {
        let dx = self.profile.dist(v.0, w.0);
        dx != 0 && self.profile.dist(v.1, w.1) == self.set.field().mul(self.r, dx)
    }

    /// `Σ_v deg(v)^k`, which equals the star-tuple count `|S_k(r)|`.
    pub fn degree_power_sum(&self, k: u32) -> BigUint {
        self.degrees
            .par_iter()
            .map(|&d| Pow::pow(BigUint::from(d), k))
            .reduce(BigUint::zero, |a, b| a + b)
    }

    /// Walk counts `w_0 … w_kmax`.
    ///
    /// `c_{k+1}(x, y) = Σ_{x′} [t = ‖x′ − x‖ ≠ 0] Σ_{y′ : ‖y′ − y‖ = r t} c_k(x′, y′)`.
    /// The inner sum is grouped by the distance class of `y′` around `y`
    /// first, so each step costs `O(|E|³)` big-integer additions.
    pub fn walk_counts(&self, kmax: usize) -> Vec<BigUint> {
        let n = self.set.len();
        let mut c: Vec<BigUint> = vec![BigUint::one(); n * n];
        let mut walks = vec![BigUint::from(n * n)];
        if kmax == 0 || n == 0 {
            walks.resize(kmax + 1, BigUint::zero());
            walks[0] = BigUint::from(n * n);
            return walks;
        }
        // class[y * n + y'] indexes row(y), the distance classes around y
        let class: Vec<usize> = (0..n * n)
            .map(|v| {
                let (y, y2) = (v / n, v % n);
                let t = self.profile.dist(y, y2);
                self.profile.row(y).binary_search_by_key(&t, |&(s, _)| s).unwrap()
            })
            .collect();
        let field = self.set.field();
        for _ in 0..kmax {
            // grouped[x'][y][cls] = Σ_{y' in class cls of y} c(x', y')
            let grouped: Vec<Vec<Vec<BigUint>>> = (0..n)
                .into_par_iter()
                .map(|x2| {
                    (0..n)
                        .map(|y| {
                            let mut acc = vec![BigUint::zero(); self.profile.row(y).len()];
                            for y2 in 0..n {
                                let val = &c[x2 * n + y2];
                                if !val.is_zero() {
                                    acc[class[y * n + y2]] += val;
                                }
                            }
                            acc
                        })
                        .collect()
                })
                .collect();
            let next: Vec<BigUint> = (0..n * n)
                .into_par_iter()
                .map(|v| {
                    let (x, y) = (v / n, v % n);
                    let row = self.profile.row(y);
                    let mut acc = BigUint::zero();
                    for x2 in 0..n {
                        let t = self.profile.dist(x, x2);
                        if t == 0 {
                            continue;
                        }
                        let s = field.mul(self.r, t);
                        if let Ok(cls) = row.binary_search_by_key(&s, |&(u, _)| u) {
                            acc += &grouped[x2][y][cls];
                        }
                    }
                    acc
                })
                .collect();
            walks.push(next.iter().sum());
            c = next;
        }
        walks
    }
}

/// A plain undirected loop-free graph, for walk checks on explicit graphs.
#[derive(Debug, Clone)]
pub struct SimpleGraph {
    adj: Vec<Vec<usize>>,
}

impl SimpleGraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a == b || a >= n || b >= n {
                return Err(Error::InvalidPattern(format!("bad edge ({a}, {b}) for {n} vertices")));
            }
            if !adj[a].contains(&b) {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        Ok(SimpleGraph { adj })
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn walk_counts(&self, kmax: usize) -> Vec<BigUint> {
        let n = self.adj.len();
        let mut c = vec![BigUint::one(); n];
        let mut out = vec![BigUint::from(n)];
        for _ in 0..kmax {
            let next: Vec<BigUint> = (0..n).map(|v| self.adj[v].iter().map(|&u| &c[u]).sum()).collect();
            out.push(next.iter().sum());
            c = next;
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WalkCheck {
    /// `"w1^k <= w0^(k-1) w_k"` or `"w_(2a+b) w_b <= w0 w_(2(a+b))"`.
    pub family: &'static str,
    pub k: Option<usize>,
    pub a: Option<usize>,
    pub b: Option<usize>,
    #[serde(serialize_with = "big")]
    pub lhs: BigUint,
    #[serde(serialize_with = "big")]
    pub rhs: BigUint,
    pub holds: bool,
    pub equality: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct WalkReport {
    #[serde(serialize_with = "big_vec")]
    pub walks: Vec<BigUint>,
    pub checks: Vec<WalkCheck>,
    pub violations: usize,
}

impl WalkReport {
    pub fn all_hold(&self) -> bool {
        self.violations == 0
    }
}

/// Checks `w_1^k ≤ w_0^{k−1} w_k` for `1 ≤ k ≤ kmax` and
/// `w_{2a+b} w_b ≤ w_0 w_{2(a+b)}` for all `a, b ≥ 0` with `2(a+b) ≤ kmax`.
pub fn verify_walk_inequalities(walks: &[BigUint], kmax: usize) -> WalkReport {
    let kmax = kmax.min(walks.len().saturating_sub(1));
    let mut checks = Vec::new();
    if walks.is_empty() {
        return WalkReport { walks: Vec::new(), checks, violations: 0 };
    }
    let w0 = &walks[0];
    for k in 1..=kmax {
        let lhs: BigUint = Pow::pow(&walks[1], k);
        let rhs: BigUint = Pow::pow(w0, k - 1) * &walks[k];
        checks.push(WalkCheck {
            family: "w1^k <= w0^(k-1) w_k",
            k: Some(k),
            a: None,
            b: None,
            holds: lhs <= rhs,
            equality: lhs == rhs,
            lhs,
            rhs,
        });
    }
    for a in 0..=kmax / 2 {
        for b in 0..=(kmax / 2 - a) {
            let lhs = &walks[2 * a + b] * &walks[b];
            let rhs = w0 * &walks[2 * (a + b)];
            checks.push(WalkCheck {
                family: "w_(2a+b) w_b <= w0 w_(2(a+b))",
                k: None,
                a: Some(a),
                b: Some(b),
                holds: lhs <= rhs,
                equality: lhs == rhs,
                lhs,
                rhs,
            });
        }
    }
    let violations = checks.iter().filter(|c| !c.holds).count();
    WalkReport { walks: walks[..=kmax].to_vec(), checks, violations }
}
