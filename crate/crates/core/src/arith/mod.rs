//! Integer kernels: primitive projective points, heights, gcd/CRT helpers,
//! small-prime utilities and integer roots.

pub mod linalg;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A rational point of projective space stored as a primitive integer vector
/// whose first nonzero coordinate is positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: Vec<BigInt>,
}

impl ProjPoint {
    pub fn new(v: &[BigInt]) -> Result<Self> {
        normalize_primitive(v)
    }

    pub fn from_i64(v: &[i64]) -> Result<Self> {
        let v: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        normalize_primitive(&v)
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    /// N for a point of P^N.
    pub fn dim_ambient(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn height(&self) -> BigInt {
        height(self)
    }

    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.coords.iter().map(|c| c.to_i64()).collect()
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProjPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        let v = v
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        normalize_primitive(&v).map_err(serde::de::Error::custom)
    }
}

/// Divides by the content and fixes the sign so the first nonzero entry is positive.
pub fn normalize_primitive(v: &[BigInt]) -> Result<ProjPoint> {
    let g = content(v);
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    let first = v.iter().find(|c| !c.is_zero()).expect("nonzero entry");
    let g = if first.is_negative() { -g } else { g };
    Ok(ProjPoint {
        coords: v.iter().map(|c| c / &g).collect(),
    })
}

pub fn height(x: &ProjPoint) -> BigInt {
    x.coords.iter().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero)
}

/// Nonnegative gcd of all entries; zero for the zero vector.
pub fn content(v: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in v {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Returns (g, d) with a·d − b·g = 1.
pub fn unimodular_complete(a: &BigInt, b: &BigInt) -> Result<(BigInt, BigInt)> {
    let e = a.extended_gcd(b);
    // a·x + b·y = ±1
    if !e.gcd.is_one() {
        return Err(Error::NotCoprime);
    }
    let (mut d, mut g) = (e.x, -e.y);
    if !b.is_zero() {
        // Shift along (b, a) so d lands in [0, |b|).
        let m = b.abs();
        let t = d.div_floor(&m);
        let t = if b.is_negative() { -t } else { t };
        d -= &t * b;
        g -= &t * a;
    }
    debug_assert!((a * &d - b * &g).is_one());
    Ok((g, d))
}

/// Solves a·x ≡ b (mod m) for m ≥ 1; returns (x0, m') with the solution set x ≡ x0 mod m'.
pub fn solve_linear_congruence(a: &BigInt, b: &BigInt, m: &BigInt) -> Option<(BigInt, BigInt)> {
    let a = a.mod_floor(m);
    let b = b.mod_floor(m);
    let e = a.extended_gcd(m);
    let g = e.gcd;
    if g.is_zero() {
        return if b.is_zero() { Some((BigInt::zero(), BigInt::one())) } else { None };
    }
    if !(&b % &g).is_zero() {
        return None;
    }
    let m2 = m / &g;
    let x = ((&b / &g) * e.x).mod_floor(&m2);
    Some((x, m2))
}

/// Merges x ≡ r1 (mod m1) and x ≡ r2 (mod m2) for arbitrary moduli.
pub fn crt_merge(r1: &BigInt, m1: &BigInt, r2: &BigInt, m2: &BigInt) -> Option<(BigInt, BigInt)> {
    // r1 + m1·u ≡ r2 (mod m2)
    let (u, m2g) = solve_linear_congruence(m1, &(r2 - r1), m2)?;
    let m = m1 * &m2g;
    let r = (r1 + m1 * u).mod_floor(&m);
    Some((r, m))
}

/// p-adic valuation; None stands for +∞ (n = 0).
pub fn valuation(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut i = 17u64;
    while i.saturating_mul(i) <= n {
        if n % i == 0 {
            return false;
        }
        i += 2;
    }
    true
}

/// All primes in [lo, hi].
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(2)..=hi).filter(|&n| is_prime(n)).collect()
}

/// Positive divisors in increasing order (trial division).
pub fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    assert!(!n.is_zero(), "divisors of zero");
    let mut ds = vec![BigInt::one()];
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let mut e = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            let base = ds.clone();
            let mut pk = BigInt::one();
            for _ in 0..e {
                pk *= &p;
                ds.extend(base.iter().map(|d| d * &pk));
            }
        }
        p += 1;
    }
    if !n.is_one() {
        let base = ds.clone();
        ds.extend(base.iter().map(|d| d * &n));
    }
    ds.sort();
    ds
}

/// Floor of the k-th root of a nonnegative integer.
pub fn nth_root_floor(n: &BigInt, k: u32) -> BigInt {
    assert!(!n.is_negative());
    n.nth_root(k)
}

/// Exact integer k-th root of n (sign-aware for odd k).
pub fn exact_nth_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_negative() {
        if k % 2 == 0 {
            return None;
        }
        return exact_nth_root(&-n, k).map(|r| -r);
    }
    let r = n.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Natural log of |n| for n ≠ 0, robust for huge integers.
pub fn ln_abs(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.abs().to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (n.abs() >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

#[cfg(test)]
pub(crate) fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

#[cfg(test)]
pub(crate) fn bigs(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
