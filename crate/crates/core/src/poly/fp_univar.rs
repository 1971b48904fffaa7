//! Dense univariate arithmetic over F_p: coefficient vectors, lowest power first.

use crate::arith::linalg::{inv_mod, mul_mod};

pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    if a.is_empty() {
        a.push(0);
    }
    a
}

pub fn is_zero(a: &[u64]) -> bool {
    a.iter().all(|&c| c == 0)
}

/// Degree; None for zero.
pub fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn add(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let v = (0..n).map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p).collect();
    trim(v)
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let v = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0) % p) % p)
        .collect();
    trim(v)
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut v = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            v[i + j] = (v[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    trim(v)
}

/// Quotient and remainder; b must be nonzero.
pub fn divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let db = degree(b).expect("division by zero polynomial");
    let inv = inv_mod(b[db], p);
    let mut r = trim(a.to_vec());
    let Some(da) = degree(&r) else {
        return (vec![0], vec![0]);
    };
    if da < db {
        return (vec![0], r);
    }
    let mut q = vec![0u64; da - db + 1];
    for k in (0..=da - db).rev() {
        let c = mul_mod(r.get(k + db).copied().unwrap_or(0), inv, p);
        if c == 0 {
            continue;
        }
        q[k] = c;
        for (j, &bj) in b.iter().enumerate().take(db + 1) {
            let s = mul_mod(c, bj, p);
            r[k + j] = (r[k + j] + p - s) % p;
        }
    }
    (trim(q), trim(r))
}

pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    divmod(a, b, p).1
}

pub fn monic(a: &[u64], p: u64) -> Vec<u64> {
    match degree(a) {
        None => vec![0],
        Some(d) => {
            let inv = inv_mod(a[d], p);
            trim(a.iter().map(|&c| mul_mod(c, inv, p)).collect())
        }
    }
}

/// Monic gcd.
pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !is_zero(&b) {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(&a, p)
}

pub fn derivative(a: &[u64], p: u64) -> Vec<u64> {
    if a.len() <= 1 {
        return vec![0];
    }
    trim((1..a.len()).map(|i| mul_mod(a[i], i as u64 % p, p)).collect())
}

/// base^e mod m.
pub fn powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut r = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            r = rem(&mul(&r, &b, p), m, p);
        }
        b = rem(&mul(&b, &b, p), m, p);
        e >>= 1;
    }
    r
}

pub fn is_squarefree(a: &[u64], p: u64) -> bool {
    match degree(a) {
        None => false,
        Some(0) => true,
        Some(_) => {
            let d = derivative(a, p);
            !is_zero(&d) && degree(&gcd(a, &d, p)) == Some(0)
        }
    }
}

/// Degrees of the irreducible factors of a squarefree polynomial, ascending.
pub fn factor_degrees(a: &[u64], p: u64) -> Vec<usize> {
    let mut f = monic(a, p);
    let mut out = Vec::new();
    let x = vec![0, 1];
    let mut h = x.clone();
    let mut i = 1;
    while let Some(df) = degree(&f) {
        if df < 2 * i {
            if df > 0 {
                out.push(df);
            }
            break;
        }
        h = powmod(&h, p, &f, p);
        let g = gcd(&f, &sub(&h, &x, p), p);
        let dg = degree(&g).unwrap();
        if dg > 0 {
            out.extend(std::iter::repeat_n(i, dg / i));
            f = divmod(&f, &g, p).0;
            h = rem(&h, &f, p);
        }
        i += 1;
    }
    out
}

pub fn eval(a: &[u64], x: u64, p: u64) -> u64 {
    a.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, p) + c) % p)
}
