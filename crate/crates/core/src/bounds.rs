//! Exact evaluation of the lower bounds and size thresholds for star and
//! path pairs, and comparison against exact counts.
//!
//! Bounds are exact rationals. Thresholds containing `√3` or a fractional
//! power of `q` are given as rational intervals; hypotheses are tested
//! against the upper end so a reported "met" is always sound.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ffield::Fq;
use crate::geom::{distance_set, quotient_set, PointSet};
use crate::io::{big, big_opt};

/// Rational lower enclosure of `√3`.
pub fn sqrt3_lower() -> BigRational {
    BigRational::new(989.into(), 571.into())
}

/// Rational upper enclosure of `√3`.
pub fn sqrt3_upper() -> BigRational {
    BigRational::new(1351.into(), 780.into())
}

/// Denominator used when enclosing fractional powers.
const ROOT_SCALE: u64 = 1_000_000;

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn pow_int(q: u64, e: usize) -> BigInt {
    Pow::pow(BigInt::from(q), e)
}

fn binom2(k: usize) -> u64 {
    (k * k.saturating_sub(1) / 2) as u64
}

/// An exact rational or a rational enclosure `[lower, upper]` of an irrational value.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundValue {
    Exact(BigRational),
    Interval { lower: BigRational, upper: BigRational },
}

impl BoundValue {
    pub fn lower(&self) -> &BigRational {
        match self {
            BoundValue::Exact(v) => v,
            BoundValue::Interval { lower, .. } => lower,
        }
    }

    pub fn upper(&self) -> &BigRational {
        match self {
            BoundValue::Exact(v) => v,
            BoundValue::Interval { upper, .. } => upper,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, BoundValue::Exact(_))
    }

    /// Product of two nonnegative enclosures.
    fn mul(&self, other: &BoundValue) -> BoundValue {
        match (self, other) {
            (BoundValue::Exact(a), BoundValue::Exact(b)) => BoundValue::Exact(a * b),
            _ => BoundValue::Interval { lower: self.lower() * other.lower(), upper: self.upper() * other.upper() },
        }
    }

    fn add(&self, other: &BoundValue) -> BoundValue {
        match (self, other) {
            (BoundValue::Exact(a), BoundValue::Exact(b)) => BoundValue::Exact(a + b),
            _ => BoundValue::Interval { lower: self.lower() + other.lower(), upper: self.upper() + other.upper() },
        }
    }

    /// True iff an integer size `n` is certainly at least this value.
    pub fn met_by(&self, n: u64) -> bool {
        rat(n) >= *self.upper()
    }

    pub fn approx(&self) -> f64 {
        to_f64(self.upper())
    }
}

fn to_f64(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

fn rat_str(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl Serialize for BoundValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(None)?;
        match self {
            BoundValue::Exact(v) => {
                m.serialize_entry("exact", &rat_str(v))?;
            }
            BoundValue::Interval { lower, upper } => {
                m.serialize_entry("lower", &rat_str(lower))?;
                m.serialize_entry("upper", &rat_str(upper))?;
            }
        }
        m.serialize_entry("approx", &self.approx())?;
        m.end()
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Exact(v) => write!(f, "{}", rat_str(v)),
            BoundValue::Interval { upper, .. } => write!(f, "<= {:.4}", to_f64(upper)),
        }
    }
}

/// Encloses `base^(num/den)`; exact when the root is an integer.
pub fn power_enclosure(base: u64, num: u32, den: u32) -> BoundValue {
    let x: BigUint = Pow::pow(BigUint::from(base), num);
    let root = x.nth_root(den);
    if Pow::pow(&root, den) == x {
        return BoundValue::Exact(rat(BigInt::from(root)));
    }
    let scale: BigUint = Pow::pow(BigUint::from(ROOT_SCALE), den);
    let scaled = &x * scale;
    let lo = scaled.nth_root(den);
    let hi = if Pow::pow(&lo, den) == scaled { lo.clone() } else { &lo + 1u32 };
    let d = BigInt::from(ROOT_SCALE);
    BoundValue::Interval {
        lower: BigRational::new(BigInt::from(lo), d.clone()),
        upper: BigRational::new(BigInt::from(hi), d),
    }
}

fn sqrt3() -> BoundValue {
    BoundValue::Interval { lower: sqrt3_lower(), upper: sqrt3_upper() }
}

/// Admissible dilation ratios for a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RDomain {
    /// `F_q^*`
    #[serde(rename = "F_q^*")]
    Nonzero,
    /// `F_q^+`, the nonzero squares
    #[serde(rename = "F_q^+")]
    Squares,
}

impl RDomain {
    pub fn contains(&self, field: &Fq, r: u32) -> bool {
        match self {
            RDomain::Nonzero => r != 0,
            RDomain::Squares => field.quad_char(r) == 1,
        }
    }

    pub fn elements(&self, field: &Fq) -> Vec<u32> {
        match self {
            RDomain::Nonzero => field.nonzero().collect(),
            RDomain::Squares => field.qr_set(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Violated,
    /// Hypothesis unmet or bound nonpositive.
    Vacuous,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub hypothesis_ok: bool,
    pub bound: BoundValue,
    #[serde(serialize_with = "big_opt")]
    pub exact: Option<BigInt>,
    pub verdict: Verdict,
}

impl BoundReport {
    /// Compares an exact count with a lower bound.
    pub fn lower_bound(name: impl Into<String>, hypothesis_ok: bool, bound: BigRational, exact: BigInt) -> Self {
        let verdict = if !hypothesis_ok {
            Verdict::Vacuous
        } else if rat(exact.clone()) < bound {
            Verdict::Violated
        } else if !bound.is_positive() {
            Verdict::Vacuous
        } else {
            Verdict::Holds
        };
        BoundReport { name: name.into(), hypothesis_ok, bound: BoundValue::Exact(bound), exact: Some(exact), verdict }
    }

    pub fn violated(&self) -> bool {
        self.verdict == Verdict::Violated
    }
}

/// Lower bound for `|S_1(r)|` valid when `|E| ≥ q^{d/2}`.
#[derive(Debug, Clone, Serialize)]
pub struct S1Bound {
    pub hypothesis_ok: bool,
    pub value: BoundValue,
    pub r_domain: RDomain,
}

pub fn s1_lower_bound(q: u64, d: usize, n: u64) -> Result<S1Bound> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    let nn = BigInt::from(n);
    let n2: BigInt = Pow::pow(&nn, 2u32);
    let n3: BigInt = Pow::pow(&nn, 3u32);
    let n4: BigInt = Pow::pow(&nn, 4u32);
    let qq = BigInt::from(q);
    let base = BigRational::new(n4.clone(), qq.clone()) - rat(2 * &n3);
    let (value, r_domain) = if d % 2 == 0 {
        let v = base
            - rat(pow_int(q, d - 1) * &n2)
            - BigRational::new(4 * &n4, &qq * &qq)
            - rat(4 * pow_int(q, (d - 2) / 2) * &n3);
        (v, RDomain::Nonzero)
    } else {
        let v = base
            - rat(2 * pow_int(q, d - 1) * &n2)
            - BigRational::new(n4, &qq * &qq)
            - rat(2 * pow_int(q, (d - 3) / 2) * &n3);
        (v, RDomain::Squares)
    };
    Ok(S1Bound { hypothesis_ok: n2 >= pow_int(q, d), value: BoundValue::Exact(value), r_domain })
}

/// Compares an exact `|S_1(r)|` with its lower bound.
pub fn s1_report(field: &Fq, d: usize, n: u64, r: u32, s1: &BigUint) -> Result<BoundReport> {
    let b = s1_lower_bound(field.q() as u64, d, n)?;
    let ok = b.hypothesis_ok && b.r_domain.contains(field, r);
    let parity = if d % 2 == 0 { "even" } else { "odd" };
    Ok(BoundReport::lower_bound(format!("s1_lower_bound[{parity}]"), ok, b.value.lower().clone(), BigInt::from(s1.clone())))
}

/// A sufficient size for the existence of a pair, and the ratios it covers.
#[derive(Debug, Clone, Serialize)]
pub struct Threshold {
    pub name: String,
    pub value: BoundValue,
    pub r_domain: RDomain,
}

/// Size threshold for a pair of `k`-stars.
pub fn star_pair_threshold(q: u64, d: usize, k: usize) -> Result<Threshold> {
    if k < 2 {
        return Err(Error::Hypothesis("star threshold requires k >= 2".into()));
    }
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    let c = binom2(k);
    if d % 2 == 0 {
        if q < 5 {
            return Err(Error::Hypothesis("theorem requires q ≥ 5 in even dimension".into()));
        }
        let v = rat(31 + 10 * c) * rat(pow_int(q, d / 2));
        Ok(Threshold { name: format!("star:{k} even d"), value: BoundValue::Exact(v), r_domain: RDomain::Nonzero })
    } else {
        let coeff = BoundValue::Exact(rat(4u32)).add(&sqrt3().mul(&BoundValue::Exact(rat(c))));
        let v = coeff.mul(&power_enclosure(q, d as u32, 2));
        Ok(Threshold { name: format!("star:{k} odd d"), value: v, r_domain: RDomain::Squares })
    }
}

/// Size threshold for a pair of 4-paths.
pub fn path4_threshold(q: u64, d: usize) -> Result<Threshold> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    let exact = |c: u64| BoundValue::Exact(rat(c));
    let (name, value, r_domain) = match d {
        2 | 4 => {
            if q < 5 {
                return Err(Error::Hypothesis(format!("4-path threshold for even d = {d} requires q ≥ 5")));
            }
            ("36 q^((2d+1)/3)", exact(36).mul(&power_enclosure(q, 2 * d as u32 + 1, 3)), RDomain::Nonzero)
        }
        3 => ("9 q^((2d+1)/3)", exact(9).mul(&power_enclosure(q, 7, 3)), RDomain::Squares),
        5 => ("12 q^3", exact(12).mul(&power_enclosure(q, 3, 1)), RDomain::Squares),
        d if d % 2 == 0 => {
            if q < 5 {
                return Err(Error::Hypothesis(format!("4-path threshold for even d = {d} requires q ≥ 5")));
            }
            ("313 q^(d/2)", exact(313).mul(&power_enclosure(q, d as u32, 2)), RDomain::Nonzero)
        }
        _ => ("313 q^(d/2)", exact(313).mul(&power_enclosure(q, d as u32, 2)), RDomain::Squares),
    };
    Ok(Threshold { name: name.into(), value, r_domain })
}

/// `|E|^{-2} |S_{k−1}| (|S_1| − 2 C(k,2) |E|³ + C(k,2) |E|²)`, a lower bound for `|B|`.
pub fn star_b_lower_bound(n: u64, k: usize, s1: &BigUint, s_prev: &BigUint) -> BigRational {
    let c = BigInt::from(binom2(k));
    let nn = BigInt::from(n);
    let inner = BigInt::from(s1.clone()) - 2 * &c * Pow::pow(&nn, 3u32) + &c * Pow::pow(&nn, 2u32);
    if n == 0 {
        return BigRational::zero();
    }
    BigRational::new(BigInt::from(s_prev.clone()) * inner, Pow::pow(nn, 2u32))
}

/// Bound report for `|B|`, plus the positivity trigger `|S_1| ≥ 2 C(k,2) |E|³ ⇒ |B| > 0`.
pub fn star_b_reports(n: u64, k: usize, s1: &BigUint, s_prev: &BigUint, b: u64) -> Vec<BoundReport> {
    let bound = star_b_lower_bound(n, k, s1, s_prev);
    let mut out = vec![BoundReport::lower_bound(format!("star_B_lower_bound[k={k}]"), true, bound, BigInt::from(b))];
    let trigger = BigInt::from(s1.clone()) >= BigInt::from(2 * binom2(k)) * Pow::pow(BigInt::from(n), 3u32);
    let positive = !s1.is_zero() && trigger;
    // B > 0 is asserted as B >= 1 under the trigger
    out.push(BoundReport::lower_bound(format!("star_B_positive[k={k}]"), positive, BigRational::one(), BigInt::from(b)));
    out
}

/// Lower bound for `|C|` from the 4-path decomposition (regime by `d`).
pub fn path_c_lower_bound(n: u64, q: u64, d: usize, p: [&BigUint; 4]) -> BigRational {
    let nn = BigInt::from(n);
    let [p1, p2, p3, p4] = p.map(|v| BigInt::from(v.clone()));
    let middle = if d <= 4 {
        3 * Pow::pow(&nn, 3u32) * pow_int(q, 2 * d - 2) * &p1
    } else {
        2 * Pow::pow(&nn, 5u32) * &p1
    };
    rat(p4 - 10 * &nn * p3 - middle - Pow::pow(&nn, 2u32) * p2)
}

pub fn path_c_report(n: u64, q: u64, d: usize, p: [&BigUint; 4], c: u64) -> BoundReport {
    let regime = if d <= 4 { "2<=d<=4" } else { "d>=5" };
    BoundReport::lower_bound(format!("path_C_lower_bound[{regime}]"), true, path_c_lower_bound(n, q, d, p), BigInt::from(c))
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainCheck {
    pub name: String,
    #[serde(serialize_with = "big")]
    pub lhs: BigUint,
    #[serde(serialize_with = "big")]
    pub rhs: BigUint,
    pub holds: bool,
    pub equality: bool,
}

fn chain(name: &str, lhs: BigUint, rhs: BigUint) -> ChainCheck {
    ChainCheck { name: name.into(), holds: lhs >= rhs, equality: lhs == rhs, lhs, rhs }
}

/// The walk-count consequences for 4-paths, with denominators cleared.
/// `p[k-1] = |P_k|` for `k = 1..=4`.
pub fn path_chain_checks(n: u64, p: &[BigUint; 4]) -> Vec<ChainCheck> {
    let n2: BigUint = Pow::pow(BigUint::from(n), 2u32);
    let n6: BigUint = Pow::pow(BigUint::from(n), 6u32);
    let [p1, p2, p3, p4] = p;
    vec![
        chain("P4 n^6 >= P1^4", p4 * &n6, Pow::pow(p1, 4u32)),
        chain("P2 n^2 >= P1^2", p2 * &n2, Pow::pow(p1, 2u32)),
        chain("P4 n^2 >= P3 P1", p4 * &n2, p3 * p1),
        chain("P4 n^2 >= P2^2", p4 * &n2, Pow::pow(p2, 2u32)),
    ]
}

/// Hölder consequences `S_k^{k−1} n² ≥ S_{k−1}^k`; `s[k-1] = |S_k|`.
pub fn star_holder_checks(n: u64, s: &[BigUint]) -> Vec<ChainCheck> {
    let n2: BigUint = Pow::pow(BigUint::from(n), 2u32);
    (2..=s.len())
        .map(|k| {
            chain(
                &format!("S{k}^{} n^2 >= S{}^{k}", k - 1, k - 1),
                Pow::pow(&s[k - 1], (k - 1) as u32) * &n2,
                Pow::pow(&s[k - 2], k as u32),
            )
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SmallPattern {
    Path2,
    Cycle4,
}

/// Size thresholds for 2-paths and 4-cycles in `F_p^2`, `p ≡ 3 (mod 4)`.
pub fn small_pattern_threshold(p: u64, pattern: SmallPattern) -> Result<BoundValue> {
    if crate::ffield::prime_power(p).map(|(_, e)| e) != Some(1) {
        return Err(Error::Hypothesis(format!("{p} is not prime")));
    }
    if p % 4 != 3 {
        return Err(Error::Hypothesis(format!("threshold requires p ≡ 3 (mod 4), got p = {p}")));
    }
    Ok(match pattern {
        SmallPattern::Path2 => sqrt3().add(&BoundValue::Exact(rat(1u32))).mul(&BoundValue::Exact(rat(p))),
        SmallPattern::Cycle4 => BoundValue::Exact(rat(4u32)).mul(&sqrt3()).mul(&power_enclosure(p, 3, 2)),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct QuotientReport {
    pub theorem: &'static str,
    pub hypothesis_ok: bool,
    pub quotient_set: Vec<u32>,
    pub required: Vec<u32>,
    pub verdict: Verdict,
}

/// Checks the quotient-set conclusions when `|E|` meets their size hypotheses.
pub fn quotient_threshold_check(set: &PointSet) -> QuotientReport {
    let field = set.field();
    let q = field.q() as u64;
    let d = set.dim();
    let n2 = BigInt::from(set.len() as u64).pow(2u32);
    let qd = pow_int(q, d);
    let quotients = quotient_set(&distance_set(set, false), field);
    let (theorem, hypothesis_ok, required): (_, _, BTreeSet<u32>) = if d % 2 == 0 {
        ("|E| >= 9 q^(d/2) => Δ/Δ = F_q", n2 >= 81 * qd, field.elements().collect())
    } else {
        ("|E| >= 6 q^(d/2) => Δ/Δ ⊇ F_q^+ ∪ {0}", n2 >= 36 * qd, field.qr_set().into_iter().chain([0]).collect())
    };
    let verdict = if !hypothesis_ok {
        Verdict::Vacuous
    } else if required.is_subset(&quotients) {
        Verdict::Holds
    } else {
        Verdict::Violated
    };
    QuotientReport {
        theorem,
        hypothesis_ok,
        quotient_set: quotients.into_iter().collect(),
        required: required.into_iter().collect(),
        verdict,
    }
}
