//! Counting integer zeros in boxes: N(F;B), M(f;B), affine surface points
//! with residue filters, slicing, and bounded-value root counts.
//!
//! All counts iterate every variable but the last and solve for the last one
//! exactly; a residual that vanishes identically falls back to the full range.

pub mod roots;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{crt_merge, is_prime, ProjPoint};
use crate::poly::IntPoly;
use crate::{Error, Result};

/// Values lo ≤ t ≤ hi with t ≡ residue (mod modulus).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Axis {
    pub lo: i64,
    pub hi: i64,
    pub modulus: i64,
    pub residue: i64,
}

impl Axis {
    pub fn full(lo: i64, hi: i64) -> Self {
        Axis { lo, hi, modulus: 1, residue: 0 }
    }

    fn first(&self) -> i64 {
        self.lo + (self.residue - self.lo).rem_euclid(self.modulus)
    }

    pub fn values(&self) -> impl Iterator<Item = i64> {
        let (first, hi, step) = (self.first(), self.hi, self.modulus as usize);
        (first..=hi).step_by(step)
    }

    pub fn contains(&self, t: i64) -> bool {
        self.lo <= t && t <= self.hi && (t - self.residue).rem_euclid(self.modulus) == 0
    }

    pub fn count(&self) -> u64 {
        let f = self.first();
        if f > self.hi {
            0
        } else {
            ((self.hi - f) / self.modulus + 1) as u64
        }
    }

    fn radius(&self) -> i64 {
        self.lo.abs().max(self.hi.abs())
    }
}

/// Solutions in the last variable for one prefix.
pub(crate) enum Solutions<'a> {
    Listed(&'a [i64]),
    /// The residual polynomial vanishes identically.
    All(&'a Axis),
}

fn univariate_roots(c: &[BigInt], axis: &Axis, out: &mut Vec<i64>) -> bool {
    if c.iter().all(|x| x.is_zero()) {
        return false;
    }
    if roots::fits_i128(c, axis.radius(), &BigInt::zero()) {
        roots::integer_roots(&roots::to_i128(c), axis.lo, axis.hi, out);
    } else {
        roots::integer_roots(c, axis.lo, axis.hi, out);
    }
    if axis.modulus > 1 {
        out.retain(|&t| axis.contains(t));
    }
    true
}

/// Visits every prefix over all axes but the last together with its
/// solutions in the last variable, in lexicographic order.
fn scan_seq<A, F>(poly: &IntPoly, axes: &[Axis], prefix: &mut Vec<i64>, acc: &mut A, visit: &F)
where
    F: Fn(&mut A, &[i64], Solutions<'_>),
{
    match axes.len() {
        0 => unreachable!(),
        1 => {
            let c = poly.univariate_coeffs();
            let mut buf = Vec::new();
            if univariate_roots(&c, &axes[0], &mut buf) {
                visit(acc, prefix, Solutions::Listed(&buf));
            } else {
                visit(acc, prefix, Solutions::All(&axes[0]));
            }
        }
        2 => scan_bivariate(poly, axes, prefix, acc, visit),
        _ => {
            for v in axes[0].values() {
                let sub = poly.substitute(0, &BigInt::from(v));
                prefix.push(v);
                scan_seq(&sub, &axes[1..], prefix, acc, visit);
                prefix.pop();
            }
        }
    }
}

fn scan_bivariate<A, F>(poly: &IntPoly, axes: &[Axis], prefix: &mut Vec<i64>, acc: &mut A, visit: &F)
where
    F: Fn(&mut A, &[i64], Solutions<'_>),
{
    let (ay, at) = (&axes[0], &axes[1]);
    let dy = poly.degree_in(0) as usize;
    let dt = poly.degree_in(1) as usize;
    let mut table = vec![vec![BigInt::zero(); dt + 1]; dy + 1];
    for (m, c) in poly.terms() {
        table[m.0[0] as usize][m.0[1] as usize] = c.clone();
    }
    // bound on every specialised coefficient vector over the y-range
    let ry = BigInt::from(ay.radius());
    let row_bounds: Vec<BigInt> = (0..=dt)
        .map(|j| {
            let mut s = BigInt::zero();
            let mut pw = BigInt::from(1);
            for row in &table {
                s += row[j].abs() * &pw;
                pw *= &ry;
            }
            s
        })
        .collect();
    let mut buf = Vec::new();
    if roots::fits_i128(&row_bounds, at.radius(), &BigInt::zero()) {
        let t: Vec<Vec<i128>> = table.iter().map(|r| roots::to_i128(r)).collect();
        let mut c = vec![0i128; dt + 1];
        for y in ay.values() {
            let yv = y as i128;
            for (j, cj) in c.iter_mut().enumerate() {
                let mut acc_j = 0i128;
                for row in t.iter().rev() {
                    acc_j = acc_j * yv + row[j];
                }
                *cj = acc_j;
            }
            prefix.push(y);
            buf.clear();
            if c.iter().all(|&x| x == 0) {
                visit(acc, prefix, Solutions::All(at));
            } else {
                roots::integer_roots(&c, at.lo, at.hi, &mut buf);
                if at.modulus > 1 {
                    buf.retain(|&t| at.contains(t));
                }
                visit(acc, prefix, Solutions::Listed(&buf));
            }
            prefix.pop();
        }
    } else {
        for y in ay.values() {
            let yb = BigInt::from(y);
            let c: Vec<BigInt> = (0..=dt)
                .map(|j| table.iter().rev().fold(BigInt::zero(), |a, row| a * &yb + &row[j]))
                .collect();
            prefix.push(y);
            buf.clear();
            if univariate_roots(&c, at, &mut buf) {
                visit(acc, prefix, Solutions::Listed(&buf));
            } else {
                visit(acc, prefix, Solutions::All(at));
            }
            prefix.pop();
        }
    }
}

/// Parallel over the first axis; one accumulator per first-axis value, in order.
fn scan<A, M, F>(poly: &IntPoly, axes: &[Axis], make: M, visit: F) -> Vec<A>
where
    A: Send,
    M: Fn() -> A + Sync,
    F: Fn(&mut A, &[i64], Solutions<'_>) + Sync,
{
    assert_eq!(poly.nvars(), axes.len());
    if axes.len() == 1 {
        let mut acc = make();
        scan_seq(poly, axes, &mut Vec::new(), &mut acc, &visit);
        return vec![acc];
    }
    let firsts: Vec<i64> = axes[0].values().collect();
    firsts
        .par_iter()
        .map(|&v| {
            let mut acc = make();
            let sub = poly.substitute(0, &BigInt::from(v));
            let mut prefix = vec![v];
            scan_seq(&sub, &axes[1..], &mut prefix, &mut acc, &visit);
            acc
        })
        .collect()
}

fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectiveCount {
    pub count: u64,
    /// Zeros in lexicographic order (both x and −x), when requested.
    pub points: Option<Vec<Vec<i64>>>,
}

#[derive(Default)]
struct Acc {
    count: u64,
    points: Vec<Vec<i64>>,
}

type PointFilter<'a> = Option<&'a (dyn Fn(&[i64]) -> bool + Sync)>;

/// N(F;B): primitive integer zeros with |x| ≤ B, counting x and −x.
pub fn count_projective(f: &IntPoly, b: u64, want_points: bool) -> Result<ProjectiveCount> {
    if !f.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    projective_zeros(f, b as i64, want_points, None)
}

fn projective_zeros(f: &IntPoly, b: i64, want: bool, filter: PointFilter<'_>) -> Result<ProjectiveCount> {
    let n = f.nvars();
    if n == 0 {
        return Ok(ProjectiveCount { count: 0, points: want.then(Vec::new) });
    }
    // first coordinate positive, then mirror; first coordinate zero recursively
    let mut axes = vec![Axis::full(-b, b); n];
    axes[0] = Axis::full(1, b);
    let keep = |pt: &[i64]| filter.is_none_or(|h| h(pt));
    let pos: Vec<Acc> = if n == 1 {
        // F = c·X0^d
        let mut acc = Acc::default();
        if f.is_zero() && b >= 1 && keep(&[1]) {
            acc.count = 1;
            if want {
                acc.points.push(vec![1]);
            }
        }
        vec![acc]
    } else {
        scan(f, &axes, Acc::default, |acc, prefix, sols| {
            let g = gcd_all(prefix);
            let mut take = |t: i64| {
                if g.gcd(&t) == 1 {
                    let mut pt = prefix.to_vec();
                    pt.push(t);
                    if keep(&pt) {
                        acc.count += 1;
                        if want {
                            acc.points.push(pt);
                        }
                    }
                }
            };
            match sols {
                Solutions::Listed(ts) => ts.iter().for_each(|&t| take(t)),
                Solutions::All(ax) => {
                    if g == 1 && filter.is_none() && !want {
                        acc.count += ax.count();
                    } else {
                        ax.values().for_each(take);
                    }
                }
            }
        })
    };
    let zero_slice = f.substitute(0, &BigInt::zero());
    let zero_filter = filter.map(|h| {
        move |pt: &[i64]| {
            let mut full = Vec::with_capacity(pt.len() + 1);
            full.push(0);
            full.extend_from_slice(pt);
            h(&full)
        }
    });
    let zero = projective_zeros(&zero_slice, b, want, zero_filter.as_ref().map(|z| z as &(dyn Fn(&[i64]) -> bool + Sync)))?;
    let pos_count: u64 = pos.iter().map(|a| a.count).sum();
    let count = 2 * pos_count + zero.count;
    let points = want.then(|| {
        let mut pts: Vec<Vec<i64>> = Vec::with_capacity(count as usize);
        for a in &pos {
            for p in &a.points {
                pts.push(p.clone());
                pts.push(p.iter().map(|x| -x).collect());
            }
        }
        for p in zero.points.unwrap() {
            let mut full = vec![0];
            full.extend(p);
            pts.push(full);
        }
        pts.sort();
        pts
    });
    Ok(ProjectiveCount { count, points })
}

/// Brute-force N(F;B) over the whole box; an oracle for small B.
pub fn count_projective_full_loop(f: &IntPoly, b: u64) -> Result<u64> {
    if !f.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let ev = Evaluator::new(f, b as i64);
    let mut count = 0;
    for_each_box_point(f.nvars(), b as i64, |x| {
        if gcd_all(x) == 1 && ev.is_zero(x) {
            count += 1;
        }
    });
    Ok(count)
}

fn for_each_box_point(n: usize, b: i64, mut visit: impl FnMut(&[i64])) {
    if n == 0 {
        visit(&[]);
        return;
    }
    let mut x = vec![-b; n];
    loop {
        visit(&x);
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if x[i] < b {
                x[i] += 1;
                break;
            }
            x[i] = -b;
        }
    }
}

/// Evaluates a polynomial at small integer points, in i128 when safe.
struct Evaluator<'a> {
    poly: &'a IntPoly,
    small: Option<Vec<(i128, Vec<u32>)>>,
}

impl<'a> Evaluator<'a> {
    fn new(poly: &'a IntPoly, b: i64) -> Self {
        let r = BigInt::from(b.abs().max(1));
        let mut bound = BigInt::zero();
        for (m, c) in poly.terms() {
            bound += c.abs() * num_traits::pow(r.clone(), m.degree() as usize);
        }
        let small = (bound.bits() < 120).then(|| poly.terms().map(|(m, c)| (c.to_i128().unwrap(), m.0.clone())).collect());
        Evaluator { poly, small }
    }

    fn is_zero(&self, x: &[i64]) -> bool {
        match &self.small {
            Some(terms) => {
                let mut s = 0i128;
                for (c, e) in terms {
                    let mut t = *c;
                    for (xi, &k) in x.iter().zip(e) {
                        for _ in 0..k {
                            t *= *xi as i128;
                        }
                    }
                    s += t;
                }
                s == 0
            }
            None => self.poly.eval_i64(x).is_zero(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Strategy {
    /// Iterate all but the last variable, solve for the last.
    #[default]
    SolveLast,
    /// Evaluate at every point of the box.
    FullLoop,
}

/// M(f;B) = #{t ∈ Z^ν : f(t) = 0, |t| ≤ B}.
pub fn count_affine(f: &IntPoly, b: u64, strategy: Strategy) -> Result<u64> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let b = b as i64;
    let present: Vec<usize> = (0..f.nvars()).filter(|&i| f.involves(i)).collect();
    let side = (2 * b + 1) as u64;
    let mult = side.pow((f.nvars() - present.len()) as u32);
    if present.is_empty() {
        return Ok(0);
    }
    let g = f.restrict_vars(&present);
    let n = present.len();
    let count = match strategy {
        Strategy::SolveLast => {
            let axes = vec![Axis::full(-b, b); n];
            scan(&g, &axes, || 0u64, |acc, _, sols| {
                *acc += match sols {
                    Solutions::Listed(ts) => ts.len() as u64,
                    Solutions::All(ax) => ax.count(),
                }
            })
            .into_iter()
            .sum::<u64>()
        }
        Strategy::FullLoop => {
            let ev = Evaluator::new(&g, b);
            let mut c = 0u64;
            for_each_box_point(n, b, |x| {
                if ev.is_zero(x) {
                    c += 1;
                }
            });
            c
        }
    };
    Ok(count * mult)
}

/// Zeros of f in the box |t| ≤ B, in lexicographic order.
pub fn affine_points(f: &IntPoly, b: u64) -> Result<Vec<Vec<i64>>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = f.nvars();
    if n == 0 {
        return Ok(Vec::new());
    }
    let b = b as i64;
    let axes = vec![Axis::full(-b, b); n];
    let parts = scan(f, &axes, Vec::new, |acc: &mut Vec<Vec<i64>>, prefix, sols| {
        let mut push = |t: i64| {
            let mut x = prefix.to_vec();
            x.push(t);
            acc.push(x);
        };
        match sols {
            Solutions::Listed(ts) => ts.iter().for_each(|&t| push(t)),
            Solutions::All(ax) => ax.values().for_each(push),
        }
    });
    Ok(parts.into_iter().flatten().collect())
}

/// Prime p with residues (π1, π2, π3) for the affine coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueFilter {
    pub p: u64,
    pub residues: [u64; 3],
}

impl ResidueFilter {
    pub fn new(p: u64, residues: [u64; 3]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if residues.iter().any(|&r| r >= p) {
            return Err(Error::invalid("residues must lie in [0, p)"));
        }
        Ok(ResidueFilter { p, residues })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineCount {
    pub count: u64,
    /// Affine coordinates (x1, x2, x3) in lexicographic order.
    pub points: Vec<[i64; 3]>,
}

/// Points [1, x1, x2, x3] of height ≤ B on F = 0 satisfying every filter.
pub fn count_affine_surface(f: &IntPoly, b: u64, filters: &[ResidueFilter]) -> Result<AffineCount> {
    if !f.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    if f.nvars() != 4 {
        return Err(Error::invalid("surface form must have 4 variables"));
    }
    if f.degree().unwrap_or(0) < 1 {
        return Err(Error::invalid("surface form must have degree ≥ 1"));
    }
    let b = b as i64;
    let mut axes = [Axis::full(-b, b); 3];
    for (i, axis) in axes.iter_mut().enumerate() {
        let (mut r, mut m) = (BigInt::zero(), BigInt::from(1));
        for flt in filters {
            match crt_merge(&r, &m, &BigInt::from(flt.residues[i]), &BigInt::from(flt.p)) {
                Some((r2, m2)) => (r, m) = (r2, m2),
                None => return Ok(AffineCount::default()),
            }
        }
        // a modulus beyond the box leaves at most one value
        let big_box = BigInt::from(2 * b + 1);
        if m > big_box {
            let lo = BigInt::from(-b);
            let v = &lo + (&r - &lo).mod_floor(&m);
            if v > BigInt::from(b) {
                return Ok(AffineCount::default());
            }
            let v = v.to_i64().unwrap();
            *axis = Axis { lo: v, hi: v, modulus: 1, residue: 0 };
        } else {
            *axis = Axis { lo: -b, hi: b, modulus: m.to_i64().unwrap(), residue: r.to_i64().unwrap() };
        }
    }
    let g = f.dehomogenize();
    let parts = scan(&g, &axes, Vec::new, |acc: &mut Vec<[i64; 3]>, prefix, sols| match sols {
        Solutions::Listed(ts) => acc.extend(ts.iter().map(|&t| [prefix[0], prefix[1], t])),
        Solutions::All(ax) => acc.extend(ax.values().map(|t| [prefix[0], prefix[1], t])),
    });
    let points: Vec<[i64; 3]> = parts.into_iter().flatten().collect();
    Ok(AffineCount { count: points.len() as u64, points })
}

/// f_b(T1..Tn) = F(b, T1, ..., Tn).
pub fn slice(f: &IntPoly, b: i64) -> IntPoly {
    f.substitute(0, &BigInt::from(b))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlicingCheck {
    pub lhs: u64,
    pub rhs: u64,
    /// M(f_b;B) for b = −B..B.
    pub per_slice: Vec<u64>,
}

impl SlicingCheck {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

fn slice_count(f: &IntPoly, b: i64, bound: u64, strategy: Strategy) -> Result<u64> {
    let fb = slice(f, b);
    if fb.is_zero() {
        return Ok((2 * bound + 1).pow(fb.nvars() as u32));
    }
    count_affine(&fb, bound, strategy)
}

/// Both sides of N(F;B) ≤ Σ_{|b|≤B} M(f_b;B).
pub fn verify_slicing(f: &IntPoly, bound: u64) -> Result<SlicingCheck> {
    verify_slicing_with(f, bound, Strategy::SolveLast)
}

pub fn verify_slicing_with(f: &IntPoly, bound: u64, strategy: Strategy) -> Result<SlicingCheck> {
    let lhs = count_projective(f, bound, false)?.count;
    let b = bound as i64;
    let per_slice = (-b..=b).map(|s| slice_count(f, s, bound, strategy)).collect::<Result<Vec<_>>>()?;
    Ok(SlicingCheck { lhs, rhs: per_slice.iter().sum(), per_slice })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootCount {
    pub exact: u64,
    /// δ(3 + 2(T/|a_δ|)^{1/δ}).
    pub bound: f64,
}

/// #{t ∈ Z : |p(t)| ≤ T} with its certified bound.
pub fn count_roots_bounded(p: &IntPoly, t: u64) -> Result<RootCount> {
    if p.nvars() != 1 {
        return Err(Error::invalid("univariate polynomial expected"));
    }
    let c = p.univariate_coeffs();
    let deg = c.len() - 1;
    if deg == 0 || c[deg].is_zero() {
        return Err(Error::invalid("constant polynomial"));
    }
    let lead = c[deg].abs();
    let tail: BigInt = c[..deg].iter().map(|x| x.abs()).sum();
    let tb = BigInt::from(t);
    let r = ((&tb + tail) / &lead + 1u32).to_i64().ok_or_else(|| Error::invalid("search range too large"))?;
    let exact: u64 = roots::value_window(&c, -r, r, &-tb.clone(), &tb)
        .iter()
        .map(|(a, b)| (b - a + 1) as u64)
        .sum();
    let ratio = t as f64 / lead.to_f64().unwrap_or(f64::INFINITY);
    let bound = deg as f64 * (3.0 + 2.0 * ratio.powf(1.0 / deg as f64));
    Ok(RootCount { exact, bound })
}

/// Rational points of height ≤ B on the variety cut out by `gens`.
pub fn enumerate_variety(gens: &[IntPoly], b: u64) -> Result<Vec<ProjPoint>> {
    let n = gens.first().ok_or_else(|| Error::invalid("no generators"))?.nvars();
    if gens.iter().any(|g| g.nvars() != n) {
        return Err(Error::invalid("generators live in different rings"));
    }
    if gens.iter().any(|g| !g.is_homogeneous()) {
        return Err(Error::NotHomogeneous);
    }
    let nonzero: Vec<&IntPoly> = gens.iter().filter(|g| !g.is_zero()).collect();
    let Some(&main) = nonzero.iter().find(|g| g.involves(n - 1)).or(nonzero.first()) else {
        return Err(Error::ZeroPolynomial);
    };
    let others: Vec<&IntPoly> = nonzero.iter().copied().filter(|g| !std::ptr::eq(*g, main)).collect();
    let evals: Vec<Evaluator<'_>> = others.iter().map(|g| Evaluator::new(g, b as i64)).collect();
    let filter = |x: &[i64]| x.iter().find(|&&v| v != 0).is_some_and(|&v| v > 0) && evals.iter().all(|e| e.is_zero(x));
    let found = projective_zeros(main, b as i64, true, Some(&filter))?;
    let mut pts: Vec<ProjPoint> = found.points.unwrap().iter().map(|x| ProjPoint::from_i64(x).unwrap()).collect();
    pts.sort();
    pts.dedup();
    Ok(pts)
}

/// Monotone count series over a grid of bounds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountSeries {
    pub function: String,
    pub entries: Vec<(u64, u64)>,
}

impl CountSeries {
    pub fn is_valid(&self) -> bool {
        self.entries.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 <= w[1].1)
    }
}

/// Histogram helper used by reports: value → multiplicity.
pub fn histogram<I: IntoIterator<Item = usize>>(it: I) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for v in it {
        *h.entry(v).or_insert(0) += 1;
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, parse_poly_in};

    fn p(s: &str) -> IntPoly {
        parse_poly(s).unwrap().poly
    }

    #[test]
    fn projective_examples() {
        assert_eq!(count_projective(&p("x0^2 + x1^2 + x2^2"), 7, false).unwrap().count, 0);
        // brute force over {-1,0,1}^3: primitive (x0,x1,x2) with x0*x2 = x1^2
        let mut want = 0;
        for a in -1i64..=1 {
            for b in -1i64..=1 {
                for c in -1i64..=1 {
                    if (a, b, c) != (0, 0, 0) && a * c == b * b {
                        want += 1;
                    }
                }
            }
        }
        let f = p("x0*x2 - x1^2");
        assert_eq!(want, 8);
        assert_eq!(count_projective(&f, 1, false).unwrap().count, 8);
        for b in 1..=9 {
            let n = count_projective(&f, b, false).unwrap().count;
            assert_eq!(n % 2, 0);
            assert_eq!(n, count_projective_full_loop(&f, b).unwrap());
        }
        let pts = count_projective(&f, 2, true).unwrap().points.unwrap();
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(pts.len() as u64, count_projective(&f, 2, false).unwrap().count);
        assert_eq!(count_projective(&p("x0 + x1^2"), 3, false), Err(Error::NotHomogeneous));
    }

    #[test]
    fn projective_with_vanishing_residuals() {
        for s in ["x0*x1", "x0^2*x3 - x1*x2*x3", "x1^3 - x0*x2^2", "x0*x3 - x1*x2", "x2*x3 - x1^2"] {
            let f = p(s);
            for b in 1..=4 {
                assert_eq!(count_projective(&f, b, false).unwrap().count, count_projective_full_loop(&f, b).unwrap(), "{s} B={b}");
            }
        }
    }

    #[test]
    fn affine_examples() {
        let f = parse_poly("t1 - t2^2").unwrap().poly;
        assert_eq!(count_affine(&f, 4, Strategy::SolveLast).unwrap(), 5);
        assert_eq!(count_affine(&f, 4, Strategy::FullLoop).unwrap(), 5);
        assert_eq!(count_affine(&parse_poly("t1^2 + t2^2 + 1").unwrap().poly, 10, Strategy::SolveLast).unwrap(), 0);
        let f3 = parse_poly_in("t1 - t2^2", 3).unwrap().poly;
        assert_eq!(count_affine(&f3, 4, Strategy::SolveLast).unwrap(), 45);
        assert_eq!(count_affine(&f3, 4, Strategy::FullLoop).unwrap(), 45);
        assert_eq!(count_affine(&IntPoly::zero(2), 4, Strategy::SolveLast), Err(Error::ZeroPolynomial));
        let g = parse_poly("t1*t2 - t3^2 + 3*t3").unwrap().poly;
        assert_eq!(count_affine(&g, 6, Strategy::SolveLast).unwrap(), count_affine(&g, 6, Strategy::FullLoop).unwrap());
    }

    #[test]
    fn affine_surface_examples() {
        let f = p("x0*x3 - x1*x2");
        let r = count_affine_surface(&f, 1, &[]).unwrap();
        let mut want = Vec::new();
        for a in -1i64..=1 {
            for b in -1i64..=1 {
                want.push([a, b, a * b]);
            }
        }
        assert_eq!(r.points, want);
        let even = count_affine_surface(&f, 6, &[ResidueFilter::new(2, [0, 0, 0]).unwrap()]).unwrap();
        assert!(even.points.iter().all(|x| x.iter().all(|v| v % 2 == 0)));
        let all = count_affine_surface(&f, 6, &[]).unwrap();
        let want: Vec<_> = all.points.iter().filter(|x| x.iter().all(|v| v % 2 == 0)).cloned().collect();
        assert_eq!(even.points, want);
        let clash = [ResidueFilter::new(3, [0, 0, 0]).unwrap(), ResidueFilter::new(3, [1, 0, 0]).unwrap()];
        assert_eq!(count_affine_surface(&f, 6, &clash).unwrap().count, 0);
        let two = [ResidueFilter::new(3, [1, 2, 2]).unwrap(), ResidueFilter::new(5, [1, 2, 2]).unwrap()];
        let got = count_affine_surface(&f, 20, &two).unwrap();
        let want: Vec<_> = count_affine_surface(&f, 20, &[]).unwrap().points.into_iter()
            .filter(|x| x.iter().zip([1, 2, 2]).all(|(v, r)| v.rem_euclid(15) == r)).collect();
        assert_eq!(got.points, want);
        assert!(ResidueFilter::new(4, [0, 0, 0]).is_err());
    }

    #[test]
    fn slices() {
        assert_eq!(slice(&p("x0*x2 - x1^2"), 1), parse_poly("t2 - t1^2").unwrap().poly);
        assert_eq!(slice(&p("x0^3 + 0*x1"), 2), IntPoly::constant(1, 8.into()));
        let c = verify_slicing(&p("x0*x2 - x1^2"), 3).unwrap();
        assert!(c.holds());
        let c = verify_slicing(&p("x0^2 + x1^2 + x2^2"), 3).unwrap();
        assert_eq!((c.lhs, c.rhs), (0, 1));
    }

    #[test]
    fn slicing_identity_counts_all_box_zeros() {
        // Σ_b M(f_b;B) = 1 + Σ_{g=1}^{B} N(F; ⌊B/g⌋)
        for s in ["x0*x2 - x1^2", "x0^3 + x1^3 - 2*x2^3", "x0*x3 - x1*x2"] {
            let f = p(s);
            let b = 6;
            let rhs = verify_slicing(&f, b).unwrap().rhs;
            let sum: u64 = (1..=b).map(|g| count_projective(&f, b / g, false).unwrap().count).sum();
            assert_eq!(rhs, 1 + sum, "{s}");
        }
    }

    #[test]
    fn bounded_roots() {
        let r = count_roots_bounded(&parse_poly("t1^2").unwrap().poly, 100).unwrap();
        assert_eq!(r.exact, 21);
        let r = count_roots_bounded(&parse_poly("2*t1^3").unwrap().poly, 16).unwrap();
        assert_eq!(r.exact, 5);
        assert!(r.exact as f64 <= r.bound);
        assert!(count_roots_bounded(&parse_poly_in("7", 1).unwrap().poly, 5).is_err());
        let q = parse_poly("3*t1^4 - 20*t1^3 + t1 - 5").unwrap().poly;
        let r = count_roots_bounded(&q, 1000).unwrap();
        let want = (-200i64..=200).filter(|&t| q.eval_i64(&[t]).abs() <= BigInt::from(1000)).count();
        assert_eq!(r.exact, want as u64);
    }

    #[test]
    fn variety_points() {
        let gens = ["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"].map(|s| parse_poly_in(s, 4).unwrap().poly);
        let pts = enumerate_variety(&gens, 8).unwrap();
        // (s^3, s^2 t, s t^2, t^3) with max(|s|,|t|)^3 ≤ 8
        let mut want = Vec::new();
        for s in -2i64..=2 {
            for t in -2i64..=2 {
                if s.gcd(&t) == 1 {
                    want.push(ProjPoint::from_i64(&[s.pow(3), s * s * t, s * t * t, t.pow(3)]).unwrap());
                }
            }
        }
        want.sort();
        want.dedup();
        assert_eq!(pts, want);
    }
}
