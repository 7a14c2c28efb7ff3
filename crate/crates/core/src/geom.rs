//! Quadratic distance geometry over `F_q^d`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{Pow, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::Fq;

/// A vector of `d` field-element codes.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point(pub Vec<u32>);

impl Point {
    pub fn zero(d: usize) -> Self {
        Point(vec![0; d])
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn sub(&self, field: &Fq, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(&a, &b)| field.sub(a, b)).collect())
    }

    pub fn add(&self, field: &Fq, other: &Point) -> Point {
        Point(self.0.iter().zip(&other.0).map(|(&a, &b)| field.add(a, b)).collect())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<Vec<u32>> for Point {
    fn from(v: Vec<u32>) -> Self {
        Point(v)
    }
}

/// `‖x‖ = x_1² + … + x_d²`.
#[inline]
pub fn norm(field: &Fq, x: &[u32]) -> u32 {
    x.iter().fold(0, |acc, &c| field.add(acc, field.square(c)))
}

/// `‖x − y‖`.
#[inline]
pub fn dist(field: &Fq, x: &[u32], y: &[u32]) -> u32 {
    x.iter()
        .zip(y)
        .fold(0, |acc, (&a, &b)| field.add(acc, field.square(field.sub(a, b))))
}

/// Number of points of `F_q^d`, if it fits in 128 bits.
pub fn space_size(q: u32, d: usize) -> Option<u128> {
    (q as u128).checked_pow(d as u32)
}

/// The `idx`-th point of `F_q^d` in lexicographic order (first coordinate most significant).
pub fn point_from_index(q: u32, d: usize, mut idx: u128) -> Point {
    let mut coords = vec![0u32; d];
    for c in coords.iter_mut().rev() {
        *c = (idx % q as u128) as u32;
        idx /= q as u128;
    }
    Point(coords)
}

pub fn point_index(q: u32, p: &Point) -> u128 {
    p.0.iter().fold(0u128, |acc, &c| acc * q as u128 + c as u128)
}

/// A set of pairwise distinct points of `F_q^d`, kept in insertion order.
#[derive(Clone)]
pub struct PointSet {
    field: Arc<Fq>,
    d: usize,
    points: Vec<Point>,
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PointSet")
            .field("q", &self.field.q())
            .field("d", &self.d)
            .field("points", &self.points)
            .finish()
    }
}

impl PointSet {
    pub fn new(field: Arc<Fq>, d: usize, points: Vec<Point>) -> Result<Self> {
        if d < 2 {
            return Err(Error::DimensionTooSmall(d));
        }
        let mut seen = HashSet::with_capacity(points.len());
        for p in &points {
            if p.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, got: p.dim() });
            }
            for &c in p.coords() {
                field.check(c)?;
            }
            if !seen.insert(p) {
                return Err(Error::DuplicatePoint(p.0.clone()));
            }
        }
        Ok(PointSet { field, d, points })
    }

    pub fn from_coords(field: Arc<Fq>, d: usize, coords: &[&[u32]]) -> Result<Self> {
        Self::new(field, d, coords.iter().map(|c| Point(c.to_vec())).collect())
    }

    pub fn empty(field: Arc<Fq>, d: usize) -> Result<Self> {
        Self::new(field, d, Vec::new())
    }

    /// All of `F_q^d` in lexicographic order.
    pub fn full_space(field: Arc<Fq>, d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::DimensionTooSmall(d));
        }
        let q = field.q();
        let n = space_size(q, d)
            .filter(|&n| n <= 1 << 32)
            .ok_or(Error::SizeTooLarge { requested: u128::MAX, available: 1 << 32 })?;
        let points = (0..n).map(|i| point_from_index(q, d, i)).collect();
        Ok(PointSet { field, d, points })
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<Fq> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.points.contains(p)
    }

    pub fn index_of(&self, p: &Point) -> Option<usize> {
        self.points.iter().position(|x| x == p)
    }

    /// A copy with `p` appended.
    pub fn with_point(&self, p: Point) -> Result<Self> {
        let mut points = self.points.clone();
        points.push(p);
        Self::new(self.field.clone(), self.d, points)
    }

    /// `‖x_i − x_j‖` for indices into the set.
    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> u32 {
        dist(&self.field, self.points[i].coords(), self.points[j].coords())
    }

    /// Row-major `n × n` table of pairwise distances.
    pub fn distance_matrix(&self) -> Vec<u32> {
        let n = self.len();
        let mut out = vec![0u32; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let t = self.dist(i, j);
                out[i * n + j] = t;
                out[j * n + i] = t;
            }
        }
        out
    }
}

/// Exact `|S(x, t)|` in `F_q^d` from the quadratic-character formula.
pub fn sphere_size_formula(field: &Fq, d: usize, t: u32) -> Result<BigUint> {
    sphere_size_with_mu(field, d, t, field.mu(t))
}

/// Sphere formula with an explicit `μ(t)`; lets the verification grid inject faults.
pub fn sphere_size_with_mu(field: &Fq, d: usize, t: u32, mu: i64) -> Result<BigUint> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    field.check(t)?;
    let q = BigInt::from(field.q());
    let minus_one = field.neg(1);
    let lead: BigInt = Pow::pow(&q, d - 1);
    let size = if d % 2 == 0 {
        let sign = field.quad_char(field.pow(minus_one, (d / 2) as u64));
        lead + BigInt::from(mu) * Pow::pow(&q, (d - 2) / 2) * sign
    } else {
        let arg = field.mul(field.pow(minus_one, ((d - 1) / 2) as u64), t);
        lead + Pow::pow(&q, (d - 1) / 2) * field.quad_char(arg)
    };
    size.to_biguint()
        .ok_or_else(|| Error::Hypothesis(format!("negative sphere size for d={d}, t={t}")))
}

/// `suffix[j][s]`: number of `(v_j, …, v_{d-1})` with `Σ v_i² = s`.
fn suffix_counts(field: &Fq, d: usize) -> Vec<Vec<u128>> {
    let q = field.q() as usize;
    let mut roots = vec![0u128; q];
    for v in field.elements() {
        roots[field.square(v) as usize] += 1;
    }
    let mut table = vec![vec![0u128; q]; d + 1];
    table[d][0] = 1;
    for j in (0..d).rev() {
        for s in 0..q {
            let mut acc = 0u128;
            for (c, &r) in roots.iter().enumerate() {
                if r > 0 {
                    acc += r * table[j + 1][field.sub(s as u32, c as u32) as usize];
                }
            }
            table[j][s] = acc;
        }
    }
    table
}

/// Sphere cardinality by counting solutions coordinate by coordinate.
pub fn sphere_count(field: &Fq, d: usize, t: u32) -> Result<u128> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    field.check(t)?;
    if space_size(field.q(), d).is_none() {
        return Err(Error::SizeTooLarge { requested: u128::MAX, available: u128::MAX });
    }
    Ok(suffix_counts(field, d)[0][t as usize])
}

/// Members of `S(center, t)`, sorted lexicographically.
///
/// Each coordinate is fixed only when the remaining coordinates can still
/// reach the residual radius, so the work is proportional to the output.
pub fn sphere_enum(field: &Arc<Fq>, d: usize, center: &Point, t: u32) -> Result<PointSet> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    if center.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, got: center.dim() });
    }
    field.check(t)?;
    let table = suffix_counts(field, d);
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(d);
    enum_rec(field, &table, t, &mut prefix, &mut out);
    let mut points: Vec<Point> = out.into_iter().map(|v| v.add(field, center)).collect();
    points.sort();
    Ok(PointSet { field: field.clone(), d, points })
}

fn enum_rec(field: &Fq, table: &[Vec<u128>], residual: u32, prefix: &mut Vec<u32>, out: &mut Vec<Point>) {
    let j = prefix.len();
    if j + 1 == table.len() {
        if residual == 0 {
            out.push(Point(prefix.clone()));
        }
        return;
    }
    for v in field.elements() {
        let rest = field.sub(residual, field.square(v));
        if table[j + 1][rest as usize] > 0 {
            prefix.push(v);
            enum_rec(field, table, rest, prefix, out);
            prefix.pop();
        }
    }
}

/// The hyperplane `{v : ‖v − u‖ = ‖v − w‖}`, which has exactly `q^{d−1}` points.
pub fn bisector_enum(field: &Arc<Fq>, d: usize, u: &Point, w: &Point) -> Result<PointSet> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    for p in [u, w] {
        if p.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, got: p.dim() });
        }
    }
    let pivot = (0..d).find(|&i| u.0[i] != w.0[i]).ok_or(Error::DegenerateBisector)?;
    // 2(w_i − u_i) v_i summed = ‖w‖ − ‖u‖
    let two = field.from_int(2);
    let coeffs: Vec<u32> = (0..d).map(|i| field.mul(two, field.sub(w.0[i], u.0[i]))).collect();
    let rhs = field.sub(norm(field, &w.0), norm(field, &u.0));
    let pivot_inv = field.inv(coeffs[pivot])?;
    let q = field.q();
    let count = space_size(q, d - 1)
        .filter(|&n| n <= 1 << 32)
        .ok_or(Error::SizeTooLarge { requested: u128::MAX, available: 1 << 32 })?;
    let mut points = Vec::with_capacity(count as usize);
    for idx in 0..count {
        let free = point_from_index(q, d - 1, idx);
        let mut v = Vec::with_capacity(d);
        v.extend_from_slice(&free.0[..pivot]);
        v.push(0);
        v.extend_from_slice(&free.0[pivot..]);
        let partial = (0..d)
            .filter(|&i| i != pivot)
            .fold(0, |acc, i| field.add(acc, field.mul(coeffs[i], v[i])));
        v[pivot] = field.mul(field.sub(rhs, partial), pivot_inv);
        points.push(Point(v));
    }
    points.sort();
    Ok(PointSet { field: field.clone(), d, points })
}

/// `Δ(E) = {‖x − y‖ : x, y ∈ E}`. The diagonal `x = y` contributes 0 unless excluded.
pub fn distance_set(set: &PointSet, exclude_diagonal: bool) -> BTreeSet<u32> {
    let n = set.len();
    let mut out = BTreeSet::new();
    if n > 0 && !exclude_diagonal {
        out.insert(0);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            out.insert(set.dist(i, j));
        }
    }
    out
}

/// `S / S = {a / b : a ∈ S, b ∈ S ∖ {0}}`.
pub fn quotient_set(values: &BTreeSet<u32>, field: &Fq) -> BTreeSet<u32> {
    let mut out = BTreeSet::new();
    for &b in values.iter().filter(|&&b| b != 0) {
        let inv = field.inv(b).expect("nonzero denominator");
        for &a in values {
            out.insert(field.mul(a, inv));
        }
    }
    out
}

/// Converts a big count to `u128` when it fits.
pub fn small(n: &BigUint) -> Option<u128> {
    n.to_u128()
}
