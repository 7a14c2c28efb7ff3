//! Reference implementations for the integration tests.
//!
//! Field arithmetic here is schoolbook polynomial multiplication modulo the
//! library's modulus (only the modulus is shared); counts come from plain
//! scans and dense adjacency-matrix powers.

#![allow(dead_code)]

use fqconfig::{Fq, PointSet};

pub struct RefField {
    pub p: u64,
    pub e: usize,
    pub q: u64,
    /// Monic, low degree first.
    modulus: Vec<u64>,
}

impl RefField {
    pub fn like(f: &Fq) -> Self {
        RefField {
            p: f.p() as u64,
            e: f.e() as usize,
            q: f.q() as u64,
            modulus: f.modulus().iter().map(|&c| c as u64).collect(),
        }
    }

    fn digits(&self, mut a: u64) -> Vec<u64> {
        (0..self.e)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    fn code(&self, digits: &[u64]) -> u64 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let (x, y) = (self.digits(a), self.digits(b));
        self.code(&x.iter().zip(&y).map(|(s, t)| (s + t) % self.p).collect::<Vec<_>>())
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        let (x, y) = (self.digits(a), self.digits(b));
        self.code(&x.iter().zip(&y).map(|(s, t)| (s + self.p - t) % self.p).collect::<Vec<_>>())
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let (x, y) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * self.e];
        for (i, s) in x.iter().enumerate() {
            for (j, t) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + s * t) % self.p;
            }
        }
        for deg in (self.e..prod.len()).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            for (k, m) in self.modulus.iter().enumerate() {
                let idx = deg - self.e + k;
                prod[idx] = (prod[idx] + self.p * self.p - c * m % self.p) % self.p;
            }
        }
        self.code(&prod[..self.e])
    }

    pub fn dist(&self, x: &[u32], y: &[u32]) -> u64 {
        x.iter().zip(y).fold(0, |acc, (&a, &b)| {
            let t = self.sub(a as u64, b as u64);
            self.add(acc, self.mul(t, t))
        })
    }

    /// Quadratic character by listing squares.
    pub fn chi(&self, a: u64) -> i64 {
        if a == 0 {
            0
        } else if (1..self.q).any(|x| self.mul(x, x) == a) {
            1
        } else {
            -1
        }
    }
}

/// Distances between all pairs of points, row-major.
pub fn dist_table(set: &PointSet) -> (RefField, Vec<u64>) {
    let f = RefField::like(set.field());
    let pts = set.points();
    let n = pts.len();
    let mut t = vec![0; n * n];
    for i in 0..n {
        for j in 0..n {
            t[i * n + j] = f.dist(pts[i].coords(), pts[j].coords());
        }
    }
    (f, t)
}

pub fn sphere_scan(f: &RefField, d: usize, t: u64) -> u64 {
    let total = f.q.pow(d as u32);
    let mut count = 0;
    for idx in 0..total {
        let mut rest = idx;
        let mut acc = 0;
        for _ in 0..d {
            let c = rest % f.q;
            rest /= f.q;
            acc = f.add(acc, f.mul(c, c));
        }
        count += (acc == t) as u64;
    }
    count
}

fn rel(f: &RefField, tbl: &[u64], n: usize, r: u64, xa: usize, xb: usize, ya: usize, yb: usize) -> bool {
    let dx = tbl[xa * n + xb];
    dx != 0 && tbl[ya * n + yb] == f.mul(r, dx)
}

/// Tuples `(x, y) ∈ E^m × E^m` with every pattern edge realized. With
/// `injective` only tuples of distinct points count. Also returns, for each
/// vertex pair `(i, j)`, how many realizing tuples have `x_i = x_j` and how
/// many have `y_i = y_j`.
pub struct TupleScan {
    pub total: u64,
    pub injective: u64,
    pub x_equal: Vec<((usize, usize), u64)>,
    pub y_equal: Vec<((usize, usize), u64)>,
}

pub fn scan_pattern(set: &PointSet, r: u32, m: usize, edges: &[(usize, usize)], pairs: &[(usize, usize)]) -> TupleScan {
    let (f, tbl) = dist_table(set);
    let n = set.len();
    let target: Vec<u64> = tbl.iter().map(|&t| f.mul(r as u64, t)).collect();
    let mut out = TupleScan {
        total: 0,
        injective: 0,
        x_equal: pairs.iter().map(|&p| (p, 0)).collect(),
        y_equal: pairs.iter().map(|&p| (p, 0)).collect(),
    };
    if n == 0 {
        return out;
    }
    let mut xs = vec![0usize; m];
    loop {
        if edges.iter().all(|&(a, b)| tbl[xs[a] * n + xs[b]] != 0) {
            let mut ys = vec![0usize; m];
            loop {
                if edges.iter().all(|&(a, b)| tbl[ys[a] * n + ys[b]] == target[xs[a] * n + xs[b]]) {
                    out.total += 1;
                    let inj = |v: &[usize]| (0..m).all(|i| (0..i).all(|j| v[i] != v[j]));
                    out.injective += (inj(&xs) && inj(&ys)) as u64;
                    for (k, &(i, j)) in pairs.iter().enumerate() {
                        out.x_equal[k].1 += (xs[i] == xs[j]) as u64;
                        out.y_equal[k].1 += (ys[i] == ys[j]) as u64;
                    }
                }
                if !bump(&mut ys, n) {
                    break;
                }
            }
        }
        if !bump(&mut xs, n) {
            return out;
        }
    }
}

fn bump(v: &mut [usize], base: usize) -> bool {
    for s in v.iter_mut() {
        *s += 1;
        if *s < base {
            return true;
        }
        *s = 0;
    }
    false
}

pub fn star_edges(k: usize) -> Vec<(usize, usize)> {
    (1..=k).map(|i| (0, i)).collect()
}

pub fn path_edges(k: usize) -> Vec<(usize, usize)> {
    (0..k).map(|i| (i, i + 1)).collect()
}

/// Dense adjacency of the auxiliary graph on `E × E`, vertex `(x, y) ↦ x·n + y`.
pub fn aux_adjacency(set: &PointSet, r: u32) -> Vec<Vec<u128>> {
    let (f, tbl) = dist_table(set);
    let n = set.len();
    let v = n * n;
    let mut a = vec![vec![0u128; v]; v];
    for s in 0..v {
        for t in 0..v {
            let (x, y, x2, y2) = (s / n, s % n, t / n, t % n);
            a[s][t] = rel(&f, &tbl, n, r as u64, x, x2, y, y2) as u128;
        }
    }
    a
}

/// `w_0..=w_kmax` as `1ᵀ Aᵏ 1` by repeated matrix-vector products.
pub fn walks_dense(a: &[Vec<u128>], kmax: usize) -> Vec<u128> {
    let mut vec = vec![1u128; a.len()];
    let mut out = vec![vec.iter().sum()];
    for _ in 0..kmax {
        vec = a.iter().map(|row| row.iter().zip(&vec).map(|(x, y)| x * y).sum()).collect();
        out.push(vec.iter().sum());
    }
    out
}

pub fn degrees_dense(a: &[Vec<u128>]) -> Vec<u128> {
    a.iter().map(|row| row.iter().sum()).collect()
}

/// Small deterministic generator for picking test sets (splitmix64).
pub struct Mix(pub u64);

impl Mix {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, m: u64) -> u64 {
        self.next() % m
    }

    /// `k` distinct points of `F_q^d`.
    pub fn point_set(&mut self, field: &std::sync::Arc<Fq>, d: usize, k: usize) -> PointSet {
        let q = field.q() as u64;
        let mut pts: Vec<Vec<u32>> = Vec::new();
        while pts.len() < k {
            let p: Vec<u32> = (0..d).map(|_| self.below(q) as u32).collect();
            if !pts.contains(&p) {
                pts.push(p);
            }
        }
        let refs: Vec<&[u32]> = pts.iter().map(|p| p.as_slice()).collect();
        PointSet::from_coords(field.clone(), d, &refs).unwrap()
    }
}
