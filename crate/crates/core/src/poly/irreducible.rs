//! Sound, incomplete test for absolute irreducibility of forms.
//!
//! `No` needs a factor: a small linear factor, or dependence on at most two
//! linear forms (a binary form of degree ≥ 2 splits over the algebraic
//! closure). `Yes` needs a quadric of rank ≥ 3, or a plane section that stays
//! of full degree and is absolutely irreducible modulo a prime. The mod-p test
//! takes a smooth F_p-point P of the curve; the component through P is defined
//! over F_p, and on every line through P its residual intersection is a
//! subproduct of the F_p-factorisation of the line's residual binary form. The
//! admissible component degrees are intersected over many lines until only the
//! full degree remains.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::fp_univar as u;
use super::{monomials_of_degree, FpPoly, IntPoly};
use crate::arith::linalg::{canonical_primitive, rank};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Debug)]
pub struct IrreducibilityOptions {
    pub primes: Vec<u64>,
    /// Coefficient bound for the linear-factor search.
    pub linear_height: i64,
    /// Random plane sections tried for forms in four or more variables.
    pub plane_attempts: usize,
    pub max_lines: usize,
    pub seed: u64,
}

impl Default for IrreducibilityOptions {
    fn default() -> Self {
        IrreducibilityOptions {
            primes: crate::arith::primes_between(3, 97),
            linear_height: 1,
            plane_attempts: 12,
            max_lines: 200,
            seed: 0x5eed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IrreducibilityReport {
    pub verdict: Verdict,
    pub certificate: String,
}

fn report(verdict: Verdict, certificate: impl Into<String>) -> IrreducibilityReport {
    IrreducibilityReport { verdict, certificate: certificate.into() }
}

pub fn is_absolutely_irreducible(f: &IntPoly) -> Verdict {
    irreducibility_report(f, &IrreducibilityOptions::default()).verdict
}

pub fn irreducibility_report(f: &IntPoly, opts: &IrreducibilityOptions) -> IrreducibilityReport {
    let Some(d) = f.degree() else {
        return report(Verdict::Unknown, "zero polynomial");
    };
    if d == 0 {
        return report(Verdict::Unknown, "constant");
    }
    let g = if f.is_homogeneous() { f.clone() } else { f.homogenize(d).unwrap() };
    if d == 1 {
        return report(Verdict::Yes, "linear");
    }
    let r = essential_rank(&g, d);
    if r <= 2 {
        return report(Verdict::No, format!("form in {r} linear forms of degree {d} splits into linear factors"));
    }
    if d == 2 {
        return report(Verdict::Yes, format!("quadric of rank {r}"));
    }
    if let Some(l) = linear_factor(&g, opts.linear_height) {
        return report(Verdict::No, format!("linear factor {l}"));
    }
    let n = g.nvars();
    if n == 3 {
        if let Some(c) = plane_curve_certificate(&g, d, opts) {
            return report(Verdict::Yes, c);
        }
        return report(Verdict::Unknown, "no prime certified the plane curve");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.plane_attempts {
        let rows: Vec<Vec<BigInt>> = (0..n).map(|_| (0..3).map(|_| BigInt::from(rng.gen_range(-3i64..=3))).collect()).collect();
        if rank(&rows) < 3 {
            continue;
        }
        let s = g.linear_substitution(&rows);
        if s.is_zero() {
            continue;
        }
        if let Some(c) = plane_curve_certificate(&s, d, opts) {
            return report(Verdict::Yes, format!("plane section {rows:?}: {c}"));
        }
    }
    report(Verdict::Unknown, "no certificate found")
}

/// Dimension of the span of the (d−1)-th partial derivatives, i.e. the number
/// of linear forms the form genuinely depends on.
fn essential_rank(g: &IntPoly, d: u32) -> usize {
    let n = g.nvars();
    let mut rows = Vec::new();
    for m in monomials_of_degree(n, d - 1) {
        let mut h = g.clone();
        for (i, &e) in m.0.iter().enumerate() {
            for _ in 0..e {
                h = h.partial(i);
            }
        }
        let row: Vec<BigInt> = (0..n).map(|i| h.coeff(&super::Monomial::var(n, i))).collect();
        rows.push(row);
    }
    rank(&rows)
}

fn linear_factor(g: &IntPoly, h: i64) -> Option<IntPoly> {
    let n = g.nvars();
    let mut a = vec![-h; n];
    loop {
        let v: Vec<BigInt> = a.iter().map(|&x| BigInt::from(x)).collect();
        if a.iter().any(|&x| x != 0) && canonical_primitive(&v) == v {
            let l = IntPoly::linear(&v);
            if g.div_exact(&l).is_some() {
                return Some(l);
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return None;
            }
            if a[i] < h {
                a[i] += 1;
                break;
            }
            a[i] = -h;
            i += 1;
        }
    }
}

/// Points of P²(F_p) with canonical representatives.
fn plane_points(p: u64) -> impl Iterator<Item = [u64; 3]> {
    let affine = (0..p).flat_map(move |a| (0..p).map(move |b| [1, a, b]));
    let infinity = (0..p).map(|a| [0, 1, a]);
    affine.chain(infinity).chain(std::iter::once([0, 0, 1]))
}

fn dot(a: &[u64], b: &[u64], p: u64) -> u64 {
    a.iter().zip(b).fold(0, |s, (&x, &y)| (s + x * y) % p)
}

fn cross(a: &[u64; 3], b: &[u64; 3], p: u64) -> [u64; 3] {
    let m = |x: u64, y: u64| (x * y) % p;
    let s = |x: u64, y: u64| (x + p - y) % p;
    [s(m(a[1], b[2]), m(a[2], b[1])), s(m(a[2], b[0]), m(a[0], b[2])), s(m(a[0], b[1]), m(a[1], b[0]))]
}

fn projective_key(v: [u64; 3], p: u64) -> [u64; 3] {
    let i = v.iter().position(|&x| x != 0).unwrap();
    let inv = crate::arith::linalg::inv_mod(v[i], p);
    v.map(|x| (x * inv) % p)
}

fn plane_curve_certificate(g: &IntPoly, d: u32, opts: &IrreducibilityOptions) -> Option<String> {
    let d = d as usize;
    for &p in &opts.primes {
        let Ok(gb) = FpPoly::from_int(g, p) else { continue };
        if gb.degree() != Some(d as u32) {
            continue;
        }
        let grads: Vec<FpPoly> = (0..3).map(|i| gb.partial(i)).collect();
        let Some((pt, grad)) = plane_points(p).find_map(|q| {
            if gb.eval(&q) != 0 {
                return None;
            }
            let gr: Vec<u64> = grads.iter().map(|h| h.eval(&q)).collect();
            (gr.iter().any(|&x| x != 0)).then_some((q, gr))
        }) else {
            continue;
        };
        // admissible degrees of the component through pt, as a bitmask
        let mut allowed: u64 = ((1u64 << (d + 1)) - 1) & !1;
        let grad3 = [grad[0], grad[1], grad[2]];
        let other = plane_points(p).find(|q| dot(q, &grad3, p) == 0 && cross(&pt, q, p) != [0, 0, 0]);
        if let Some(r) = other {
            if !u::is_zero(&gb.along_line(&pt, &r)) {
                allowed &= !(1 << 1);
            }
        }
        let mut seen = std::collections::HashSet::new();
        let mut lines = 0;
        for q in plane_points(p) {
            if allowed == 1 << d || lines >= opts.max_lines {
                break;
            }
            if dot(&q, &grad3, p) == 0 {
                continue;
            }
            if !seen.insert(projective_key(cross(&pt, &q, p), p)) {
                continue;
            }
            lines += 1;
            let h = gb.along_line(&pt, &q);
            let Some(dh) = u::degree(&h) else { continue };
            let m_inf = d - dh;
            if m_inf >= 2 || h[1] == 0 {
                continue;
            }
            let h1 = h[1..].to_vec();
            if !u::is_squarefree(&h1, p) {
                continue;
            }
            let mut degs = u::factor_degrees(&h1, p);
            degs.extend(std::iter::repeat_n(1, m_inf));
            let mut sums: u64 = 1;
            for k in degs {
                sums |= sums << k;
            }
            allowed &= sums << 1;
        }
        if allowed == 1 << d {
            return Some(format!("mod {p}: component through smooth point {pt:?} has full degree {d} after {lines} lines"));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, parse_poly_in};

    fn v(s: &str) -> Verdict {
        is_absolutely_irreducible(&parse_poly(s).unwrap().poly)
    }

    #[test]
    fn spec_examples() {
        assert_eq!(v("x0*x3 - x1*x2"), Verdict::Yes);
        assert_eq!(v("x1^2 - x2^2"), Verdict::No);
        assert_eq!(is_absolutely_irreducible(&parse_poly_in("-t2^3", 2).unwrap().poly), Verdict::No);
    }

    #[test]
    fn certificates() {
        assert_eq!(v("x0^3 + x1^3 + x2^3 + x3^3"), Verdict::Yes);
        assert_eq!(v("x0^3 + x1^3 + x2^3"), Verdict::Yes);
        assert_eq!(v("x0*x2^2 - x1^3 - x0^2*x1"), Verdict::Yes);
        assert_eq!(v("x1*x2*x3 - x0^3"), Verdict::Yes);
        assert_eq!(v("x0^2 + x1^2"), Verdict::No);
        assert_eq!(v("(x0 + x1 - x2)*(x0^2 + x1*x2 + x3^2)"), Verdict::No);
        assert_eq!(v("x0^4 + x1^4 + x2^4 + x3^4"), Verdict::Yes);
        assert_eq!(v("t1 - t2^2"), Verdict::Yes);
        assert_eq!(v("x0"), Verdict::Yes);
        // product of two irreducible conics: never Yes
        assert_ne!(v("(x0*x2 - x1^2)*(x0^2 + x1^2 - 3*x2^2)"), Verdict::Yes);
    }
}
