//! Fraction-free linear algebra over Z and small prime fields.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::content;

/// Determinant by Bareiss elimination with row pivoting.
pub fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    assert!(m.iter().all(|r| r.len() == n), "square matrix required");
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if piv != k {
            a.swap(piv, k);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Fraction-free row echelon form; returns the pivot columns.
fn echelon(a: &mut Vec<Vec<BigInt>>) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        for i in r + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let (f, g) = (a[r][c].clone(), a[i][c].clone());
            for j in c..cols {
                let v = &a[i][j] * &f - &a[r][j] * &g;
                a[i][j] = v;
            }
            let ct = content(&a[i]);
            if !ct.is_zero() && !ct.is_one() {
                for x in a[i].iter_mut() {
                    *x /= &ct;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<BigInt>]) -> usize {
    let mut a = m.to_vec();
    echelon(&mut a).len()
}

/// Basis of the rational right nullspace, as primitive integer vectors whose
/// first nonzero entry is positive, one per free column in increasing order.
pub fn nullspace(m: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    if !a[r][j].is_zero() {
                        let v = &a[r][j] * &f;
                        a[i][j] -= v;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigRational::zero(); cols];
        v[free] = BigRational::one();
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = -a[i][free].clone();
        }
        basis.push(primitive_integer(&v));
    }
    basis
}

/// Clears denominators and content; canonical sign.
pub fn primitive_integer(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let w: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    canonical_primitive(&w)
}

/// Divides by the content and makes the first nonzero entry positive.
pub fn canonical_primitive(w: &[BigInt]) -> Vec<BigInt> {
    let g = content(w);
    if g.is_zero() {
        return w.to_vec();
    }
    let neg = w.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    let g = if neg { -g } else { g };
    w.iter().map(|x| x / &g).collect()
}

/// Rank over F_p of a matrix with entries in [0, p).
pub fn rank_mod_p(m: &[Vec<u64>], p: u64) -> usize {
    let mut a = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| a[i][c] % p != 0) else {
            continue;
        };
        a.swap(piv, r);
        let inv = inv_mod(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..cols {
                    let s = mul_mod(a[r][j], f, p);
                    a[i][j] = (a[i][j] + p - s) % p;
                }
            }
        }
        r += 1;
    }
    r
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse modulo a prime p of a nonzero residue.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "inverse of zero");
    pow_mod(a, p - 2, p)
}

/// Reduces an integer into [0, p).
pub fn reduce(x: &BigInt, p: u64) -> u64 {
    use num_traits::ToPrimitive;
    x.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

/// Incremental sparse fraction-free echelon form. Rows are maps from column
/// index to nonzero coefficient; a row's pivot is its smallest column.
#[derive(Default, Debug, Clone)]
pub struct SparseEchelon {
    rows: BTreeMap<usize, BTreeMap<usize, BigInt>>,
}

impl SparseEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reduces `row` against the stored pivots and stores it if nonzero.
    /// Returns the new pivot column, if any.
    pub fn insert(&mut self, mut row: BTreeMap<usize, BigInt>) -> Option<usize> {
        row.retain(|_, v| !v.is_zero());
        loop {
            let (&c, lead) = row.iter().next()?;
            let Some(prow) = self.rows.get(&c) else {
                let lead = lead.clone();
                let mut ct = BigInt::zero();
                for v in row.values() {
                    ct = ct.gcd(v);
                }
                if lead.is_negative() {
                    ct = -ct;
                }
                for v in row.values_mut() {
                    *v /= &ct;
                }
                self.rows.insert(c, row);
                return Some(c);
            };
            let f = &prow[&c];
            let g = lead.clone();
            let (fa, ga) = {
                let gg = f.gcd(&g);
                (f / &gg, g / &gg)
            };
            if !fa.is_one() {
                for v in row.values_mut() {
                    *v *= &fa;
                }
            }
            for (&j, pv) in prow {
                let e = row.entry(j).or_insert_with(BigInt::zero);
                *e -= pv * &ga;
                if e.is_zero() {
                    row.remove(&j);
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.rows.contains_key(&c)
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }
}
