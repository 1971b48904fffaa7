//! Integer solutions of univariate polynomial (in)equalities on a range.
//!
//! A polynomial is cut into monotone runs using the runs of its forward
//! difference Δp(t) = p(t+1) − p(t), recursively; on each run the solution
//! set of L ≤ p(t) ≤ U is an interval found by binary search. Everything is
//! generic over the integer type so the same code runs on i128 (after a bound
//! check by the caller) and on BigInt.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{Signed, ToPrimitive};

pub trait Exact: Clone + Ord + Signed + Integer + Roots + ToPrimitive + From<i64> + Debug {}
impl<T: Clone + Ord + Signed + Integer + Roots + ToPrimitive + From<i64> + Debug> Exact for T {}

/// Drops trailing zero coefficients (keeps at least one entry).
pub fn trim<T: Exact>(c: &mut Vec<T>) {
    while c.len() > 1 && c.last().unwrap().is_zero() {
        c.pop();
    }
}

pub fn eval<T: Exact>(c: &[T], t: i64) -> T {
    let t = T::from(t);
    let mut acc = T::zero();
    for a in c.iter().rev() {
        acc = acc * t.clone() + a.clone();
    }
    acc
}

/// Coefficients of p(t+1) − p(t).
pub fn forward_difference<T: Exact>(c: &[T]) -> Vec<T> {
    let n = c.len();
    if n <= 1 {
        return vec![T::zero()];
    }
    let mut out = vec![T::zero(); n - 1];
    for (j, cj) in c.iter().enumerate().skip(1) {
        if cj.is_zero() {
            continue;
        }
        let mut binom: i64 = 1;
        for (k, o) in out.iter_mut().enumerate().take(j) {
            *o = o.clone() + cj.clone() * T::from(binom);
            binom = binom * (j - k) as i64 / (k + 1) as i64;
        }
    }
    out
}

/// First t in [lo, hi] with pred(t), assuming pred is monotone false→true.
fn first_true(lo: i64, hi: i64, pred: impl Fn(i64) -> bool) -> Option<i64> {
    if lo > hi || !pred(hi) {
        return None;
    }
    let (mut a, mut b) = (lo, hi);
    while a < b {
        let m = a + (b - a) / 2;
        if pred(m) {
            b = m;
        } else {
            a = m + 1;
        }
    }
    Some(a)
}

/// Sorted points lo = b_0 < … < b_m = hi with p monotone on each [b_i, b_{i+1}].
pub fn monotone_breakpoints<T: Exact>(c: &[T], lo: i64, hi: i64) -> Vec<i64> {
    let deg = c.iter().rposition(|x| !x.is_zero()).unwrap_or(0);
    if deg <= 1 || hi - lo <= 1 {
        return if lo == hi { vec![lo] } else { vec![lo, hi] };
    }
    let d = forward_difference(&c[..=deg]);
    let inner = monotone_breakpoints(&d, lo, hi - 1);
    let mut out = inner.clone();
    for w in inner.windows(2) {
        let (u, v) = (w[0], w[1]);
        let (du, dv) = (eval(&d, u), eval(&d, v));
        let t = if du.is_negative() && dv.is_positive() {
            first_true(u, v, |t| !eval(&d, t).is_negative())
        } else if du.is_positive() && dv.is_negative() {
            first_true(u, v, |t| !eval(&d, t).is_positive())
        } else {
            None
        };
        out.extend(t);
    }
    out.push(hi);
    out.sort_unstable();
    out.dedup();
    out
}

/// Maximal intervals of t ∈ [lo, hi] with lower ≤ p(t) ≤ upper.
pub fn value_window<T: Exact>(c: &[T], lo: i64, hi: i64, lower: &T, upper: &T) -> Vec<(i64, i64)> {
    if lo > hi {
        return Vec::new();
    }
    let bps = monotone_breakpoints(c, lo, hi);
    let mut found: Vec<(i64, i64)> = Vec::new();
    let segs: Vec<(i64, i64)> = if bps.len() == 1 { vec![(lo, lo)] } else { bps.windows(2).map(|w| (w[0], w[1])).collect() };
    for (a, b) in segs {
        let (pa, pb) = (eval(c, a), eval(c, b));
        let iv = if pa <= pb {
            if &pb < lower || &pa > upper {
                None
            } else {
                let x = first_true(a, b, |t| &eval(c, t) >= lower);
                let y = first_true(a, b, |t| &eval(c, t) > upper).map_or(Some(b), |t| (t > a).then(|| t - 1));
                x.zip(y)
            }
        } else if &pa < lower || &pb > upper {
            None
        } else {
            let x = first_true(a, b, |t| &eval(c, t) <= upper);
            let y = first_true(a, b, |t| &eval(c, t) < lower).map_or(Some(b), |t| (t > a).then(|| t - 1));
            x.zip(y)
        };
        if let Some((x, y)) = iv {
            if x <= y {
                match found.last_mut() {
                    Some(last) if x <= last.1 + 1 => last.1 = last.1.max(y),
                    _ => found.push((x, y)),
                }
            }
        }
    }
    found
}

fn push_root<T: Exact>(num: &T, den: &T, lo: i64, hi: i64, out: &mut Vec<i64>) {
    if den.is_zero() {
        return;
    }
    let (q, r) = num.div_rem(den);
    if r.is_zero() {
        if let Some(t) = q.to_i64() {
            if lo <= t && t <= hi {
                out.push(t);
            }
        }
    }
}

/// Exact integer k-th root for k ≥ 1 (sign-aware for odd k).
fn exact_root<T: Exact>(n: &T, k: u32) -> Option<T> {
    if n.is_negative() {
        if k % 2 == 0 {
            return None;
        }
        return exact_root(&-n.clone(), k).map(|r| -r);
    }
    let r = n.nth_root(k);
    let mut p = T::one();
    for _ in 0..k {
        p = p * r.clone();
    }
    (p == *n).then_some(r)
}

/// Appends the integer roots of p in [lo, hi], ascending. p must be nonzero.
pub fn integer_roots<T: Exact>(c: &[T], lo: i64, hi: i64, out: &mut Vec<i64>) {
    let start = out.len();
    let Some(mut deg) = c.iter().rposition(|x| !x.is_zero()) else {
        panic!("integer_roots of the zero polynomial");
    };
    let mut shift = 0;
    while c[shift].is_zero() {
        shift += 1;
    }
    let c = &c[shift..=deg];
    deg -= shift;
    let zero_root = shift > 0 && lo <= 0 && 0 <= hi;
    match deg {
        0 => {}
        1 => push_root(&-c[0].clone(), &c[1], lo, hi, out),
        2 => {
            let disc = c[1].clone() * c[1].clone() - T::from(4) * c[2].clone() * c[0].clone();
            if !disc.is_negative() {
                let s = disc.sqrt();
                if s.clone() * s.clone() == disc {
                    let den = T::from(2) * c[2].clone();
                    push_root(&(-c[1].clone() - s.clone()), &den, lo, hi, out);
                    if !s.is_zero() {
                        push_root(&(-c[1].clone() + s), &den, lo, hi, out);
                    }
                }
            }
        }
        _ if c[1..deg].iter().all(|x| x.is_zero()) => {
            let (q, r) = (-c[0].clone()).div_rem(&c[deg]);
            if r.is_zero() {
                if let Some(t) = exact_root(&q, deg as u32) {
                    if let Some(t) = t.to_i64() {
                        if lo <= t && t <= hi {
                            out.push(t);
                        }
                    }
                    if deg % 2 == 0 && !t.is_zero() {
                        if let Some(t) = (-t).to_i64() {
                            if lo <= t && t <= hi {
                                out.push(t);
                            }
                        }
                    }
                }
            }
        }
        _ => {
            for (a, b) in value_window(c, lo, hi, &T::zero(), &T::zero()) {
                out.extend(a..=b);
            }
        }
    }
    if zero_root {
        out.push(0);
    }
    out[start..].sort_unstable();
}

/// Σ_j |c_j| (r+1+deg)^j + |extra| < 2^120, i.e. every value and forward
/// difference met while solving fits comfortably in i128.
pub fn fits_i128(c: &[BigInt], r: i64, extra: &BigInt) -> bool {
    let x = BigInt::from(r.unsigned_abs() as i128 + c.len() as i128 + 1);
    let mut s = extra.abs();
    let mut pw = BigInt::from(1);
    for a in c {
        s += a.abs() * &pw;
        pw *= &x;
    }
    s.bits() < 120
}

pub fn to_i128(c: &[BigInt]) -> Vec<i128> {
    c.iter().map(|x| x.to_i128().expect("checked by fits_i128")).collect()
}
