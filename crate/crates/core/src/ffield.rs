//! Odd-order finite fields `F_q`, `q = p^e`.
//!
//! Elements are integer codes `0..q`. A code is read as base-`p` digits, the
//! digit of weight `p^i` being the coefficient of `x^i` in the polynomial basis
//! modulo a fixed monic irreducible of degree `e`. Addition works digit-wise;
//! multiplication for `e > 1` goes through exp/log tables over a generator.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest supported field order. Every downstream table is O(q).
pub const MAX_Q: u64 = 1 << 20;

/// Value of the quadratic character: `-1`, `0` or `+1`.
pub type Character = i8;

#[derive(Clone)]
pub struct Fq {
    p: u32,
    e: u32,
    q: u32,
    /// Monic modulus, low degree first, length `e + 1`.
    modulus: Vec<u32>,
    /// `exp[i] = g^i` for `i in 0..q-1`; empty for prime fields.
    exp: Vec<u32>,
    /// `log[a]` for `a != 0`; empty for prime fields.
    log: Vec<u32>,
    squares: Vec<u32>,
    chars: Vec<Character>,
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Fq")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.modulus == other.modulus
    }
}

impl Eq for Fq {}

/// Serializable summary of a field.
#[derive(Debug, Clone, Serialize)]
pub struct FieldInfo {
    pub q: u32,
    pub p: u32,
    pub e: u32,
    pub modulus: Vec<u32>,
    pub quadratic_residues: Vec<u32>,
    pub minus_one_is_square: bool,
}

/// Splits `q` into `(p, e)` with `q = p^e`, `p` prime.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            out.push(f);
            while n % f == 0 {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// ---- dense polynomials over F_p, low degree first ----

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let p64 = p as u64;
    while r.len() > dm {
        let lead = *r.last().unwrap() as u64;
        let shift = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            let sub = lead * c as u64 % p64;
            let slot = &mut r[shift + i];
            *slot = ((*slot as u64 + p64 - sub) % p64) as u32;
        }
        r = trim(r);
    }
    r
}

fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    if deg == 0 || m[deg] != 1 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    // Trial division by every monic polynomial of degree 1..=deg/2.
    for dd in 1..=deg / 2 {
        let count = (p as u64).pow(dd as u32);
        for n in 0..count {
            let mut div = Vec::with_capacity(dd + 1);
            let mut rest = n;
            for _ in 0..dd {
                div.push((rest % p as u64) as u32);
                rest /= p as u64;
            }
            div.push(1);
            if poly_rem(m, &div, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree `e`, comparing
/// coefficient tuples from the constant term upward.
fn smallest_irreducible(p: u32, e: u32) -> Vec<u32> {
    let count = (p as u64).pow(e);
    for n in 0..count {
        // constant term is the most significant digit of n
        let mut coeffs = vec![0u32; e as usize + 1];
        let mut rest = n;
        for i in (0..e as usize).rev() {
            coeffs[i] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        coeffs[e as usize] = 1;
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Fq {
    /// Builds `F_q` with the lexicographically smallest monic irreducible modulus.
    pub fn new(q: u64) -> Result<Self> {
        let (p, e) = Self::check_order(q)?;
        let modulus = if e == 1 {
            vec![0, 1]
        } else {
            smallest_irreducible(p as u32, e)
        };
        Self::build(p as u32, e, modulus)
    }

    /// Builds `F_q` with an explicit modulus (monic, low degree first).
    pub fn with_modulus(q: u64, modulus: Vec<u32>) -> Result<Self> {
        let (p, e) = Self::check_order(q)?;
        if e == 1 {
            if modulus.is_empty() || modulus == [0, 1] {
                return Self::build(p as u32, 1, vec![0, 1]);
            }
            return Err(Error::BadModulus(modulus));
        }
        if modulus.len() != e as usize + 1
            || modulus.iter().any(|&c| c >= p as u32)
            || !is_irreducible(&modulus, p as u32)
        {
            return Err(Error::BadModulus(modulus));
        }
        Self::build(p as u32, e, modulus)
    }

    fn check_order(q: u64) -> Result<(u64, u32)> {
        if q < 3 {
            return Err(Error::FieldTooSmall(q));
        }
        if q % 2 == 0 {
            return Err(Error::EvenCharacteristic(q));
        }
        if q > MAX_Q {
            return Err(Error::FieldTooLarge { q, max: MAX_Q });
        }
        prime_power(q).ok_or(Error::NotPrimePower(q))
    }

    fn build(p: u32, e: u32, modulus: Vec<u32>) -> Result<Self> {
        let q = p.pow(e);
        let mut field = Fq {
            p,
            e,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            squares: Vec::new(),
            chars: Vec::new(),
        };
        if e > 1 {
            field.build_log_tables();
        }
        field.squares = (0..q).map(|a| field.mul(a, a)).collect();
        let mut chars = vec![-1 as Character; q as usize];
        chars[0] = 0;
        for a in 1..q {
            chars[field.squares[a as usize] as usize] = 1;
        }
        field.chars = chars;
        Ok(field)
    }

    fn digits(&self, a: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.e as usize);
        let mut rest = a;
        for _ in 0..self.e {
            out.push(rest % self.p);
            rest /= self.p;
        }
        out
    }

    fn from_digits(&self, digits: &[u32]) -> u32 {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    /// Schoolbook product reduced by the modulus; used only while building tables.
    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(a), self.digits(b));
        let p = self.p as u64;
        let mut prod = vec![0u32; da.len() + db.len()];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p) as u32;
            }
        }
        let mut r = poly_rem(&prod, &self.modulus, self.p);
        r.resize(self.e as usize, 0);
        self.from_digits(&r)
    }

    fn slow_pow(&self, a: u32, mut n: u64) -> u32 {
        let (mut base, mut acc) = (a, 1);
        while n > 0 {
            if n & 1 == 1 {
                acc = self.slow_mul(acc, base);
            }
            base = self.slow_mul(base, base);
            n >>= 1;
        }
        acc
    }

    fn build_log_tables(&mut self) {
        let order = (self.q - 1) as u64;
        let factors = prime_factors(order);
        let g = (2..self.q)
            .find(|&g| factors.iter().all(|&l| self.slow_pow(g, order / l) != 1))
            .expect("multiplicative group of a finite field is cyclic");
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![0u32; self.q as usize];
        let mut cur = 1;
        for i in 0..order as u32 {
            exp.push(cur);
            log[cur as usize] = i;
            cur = self.slow_mul(cur, g);
        }
        debug_assert_eq!(cur, 1);
        self.exp = exp;
        self.log = log;
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Monic modulus, low degree first (`[0, 1]` for prime fields).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn contains(&self, a: u32) -> bool {
        a < self.q
    }

    pub fn check(&self, a: u32) -> Result<u32> {
        if a < self.q {
            Ok(a)
        } else {
            Err(Error::ElementOutOfRange { code: a, q: self.q })
        }
    }

    pub fn elements(&self) -> std::ops::Range<u32> {
        0..self.q
    }

    /// Nonzero elements `F_q^*`.
    pub fn nonzero(&self) -> std::ops::Range<u32> {
        1..self.q
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            let s = a + b;
            return if s >= self.q { s - self.q } else { s };
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut weight) = (0, 1);
        for _ in 0..self.e {
            let s = (a % self.p + b % self.p) % self.p;
            out += s * weight;
            weight *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if self.e == 1 {
            return if a == 0 { 0 } else { self.q - a };
        }
        let mut a = a;
        let (mut out, mut weight) = (0, 1);
        for _ in 0..self.e {
            let d = a % self.p;
            out += ((self.p - d) % self.p) * weight;
            weight *= self.p;
            a /= self.p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            return if a >= b { a - b } else { a + self.q - b };
        }
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if self.e == 1 {
            return (a as u64 * b as u64 % self.q as u64) as u32;
        }
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q - 1;
        let s = self.log[a as usize] + self.log[b as usize];
        self.exp[(if s >= n { s - n } else { s }) as usize]
    }

    #[inline]
    pub fn square(&self, a: u32) -> u32 {
        self.squares[a as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        if self.e == 1 {
            return Ok(self.pow(a, (self.q - 2) as u64));
        }
        let n = self.q - 1;
        Ok(self.exp[((n - self.log[a as usize]) % n) as usize])
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u32, mut n: u64) -> u32 {
        let (mut base, mut acc) = (a, 1);
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// Embeds an integer via its residue mod `p` (prime-subfield element).
    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    /// Quadratic character: 0 at 0, +1 on nonzero squares, −1 otherwise.
    #[inline]
    pub fn quad_char(&self, a: u32) -> Character {
        self.chars[a as usize]
    }

    pub fn char_table(&self) -> &[Character] {
        &self.chars
    }

    /// `F_q^+`: the nonzero squares, ascending.
    pub fn qr_set(&self) -> Vec<u32> {
        self.nonzero().filter(|&a| self.chars[a as usize] == 1).collect()
    }

    /// `μ(t) = q − 1` for `t = 0`, `−1` otherwise.
    pub fn mu(&self, t: u32) -> i64 {
        if t == 0 {
            self.q as i64 - 1
        } else {
            -1
        }
    }

    pub fn info(&self) -> FieldInfo {
        FieldInfo {
            q: self.q,
            p: self.p,
            e: self.e,
            modulus: self.modulus.clone(),
            quadratic_residues: self.qr_set(),
            minus_one_is_square: self.quad_char(self.neg(1)) == 1,
        }
    }
}

/// Arithmetic selector used by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Inv,
    Neg,
}

pub fn arith(field: &Fq, a: u32, b: u32, op: ArithOp) -> Result<u32> {
    field.check(a)?;
    field.check(b)?;
    Ok(match op {
        ArithOp::Add => field.add(a, b),
        ArithOp::Sub => field.sub(a, b),
        ArithOp::Mul => field.mul(a, b),
        ArithOp::Inv => field.inv(a)?,
        ArithOp::Neg => field.neg(a),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const ORDERS: [u64; 11] = [3, 5, 7, 9, 11, 13, 25, 27, 31, 37, 49];

    #[test]
    fn prime_fields() {
        let f = Fq::new(3).unwrap();
        assert_eq!((f.p(), f.e(), f.q()), (3, 1, 3));
        assert_eq!(f.add(2, 2), 1);
        let f5 = Fq::new(5).unwrap();
        assert_eq!(f5.inv(2).unwrap(), 3);
    }

    #[test]
    fn f9_modulus_is_x2_plus_1() {
        let f = Fq::new(9).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        // x * x = -1 = 2
        assert_eq!(f.mul(3, 3), 2);
    }

    #[test]
    fn rejects_bad_orders() {
        assert!(matches!(Fq::new(8), Err(Error::EvenCharacteristic(8))));
        assert!(matches!(Fq::new(15), Err(Error::NotPrimePower(15))));
        assert!(matches!(Fq::new(2), Err(Error::FieldTooSmall(2))));
        assert!(matches!(Fq::new(3u64.pow(13)), Err(Error::FieldTooLarge { .. })));
    }

    #[test]
    fn inverse_of_zero() {
        let f = Fq::new(7).unwrap();
        assert!(matches!(f.inv(0), Err(Error::DivisionByZero)));
        assert!(matches!(arith(&f, 0, 1, ArithOp::Inv), Err(Error::DivisionByZero)));
    }

    #[test]
    fn explicit_modulus() {
        // x^2 + x + 2 is irreducible over F_3
        let f = Fq::with_modulus(9, vec![2, 1, 1]).unwrap();
        assert_eq!(f.modulus(), &[2, 1, 1]);
        // x^2 + 2 = (x+1)(x+2) is not
        assert!(Fq::with_modulus(9, vec![2, 0, 1]).is_err());
        assert!(Fq::with_modulus(9, vec![1, 0, 2]).is_err());
    }

    #[test]
    fn character_values() {
        let f3 = Fq::new(3).unwrap();
        assert_eq!([f3.quad_char(0), f3.quad_char(1), f3.quad_char(2)], [0, 1, -1]);
        let f5 = Fq::new(5).unwrap();
        assert_eq!(f5.quad_char(4), 1);
        assert_eq!(f3.qr_set(), vec![1]);
        assert_eq!(f5.qr_set(), vec![1, 4]);
        assert_eq!(Fq::new(7).unwrap().qr_set(), vec![1, 2, 4]);
    }

    #[test]
    fn mu_values() {
        let f5 = Fq::new(5).unwrap();
        assert_eq!((f5.mu(0), f5.mu(3)), (4, -1));
        assert_eq!(Fq::new(3).unwrap().mu(0), 2);
    }

    #[test]
    fn field_axioms_exhaustive() {
        for &q in &ORDERS {
            let f = Fq::new(q).unwrap();
            let chars: i64 = f.elements().map(|a| f.quad_char(a) as i64).sum();
            assert_eq!(chars, 0, "character sum q={q}");
            assert_eq!(f.qr_set().len() as u64, (q - 1) / 2);
            for a in f.elements() {
                assert_eq!(f.pow(a, q), a, "Frobenius q={q} a={a}");
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                for b in f.elements() {
                    assert_eq!(
                        f.quad_char(f.mul(a, b)),
                        f.quad_char(a) * f.quad_char(b),
                        "multiplicativity q={q}"
                    );
                    assert_eq!(f.sub(f.add(a, b), b), a);
                    assert_eq!(f.mul(a, b), f.slow_mul(a, b));
                }
            }
        }
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(81), Some((3, 4)));
        assert_eq!(prime_power(13), Some((13, 1)));
        assert_eq!(prime_power(45), None);
    }
}
