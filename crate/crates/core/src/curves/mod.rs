//! Integral points on lines and on conics tangent to the plane at infinity.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::linalg::{canonical_primitive, det, rank};
use crate::arith::{content, crt_merge, divisors, ln_abs, solve_linear_congruence, unimodular_complete, ProjPoint};
use crate::enumerate::roots::{value_window, Exact};
use crate::poly::{IntPoly, Monomial};
use crate::{Error, Result};

fn bi(x: i64) -> BigInt {
    BigInt::from(x)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineParam {
    #[serde(serialize_with = "ser_big_vec")]
    pub base: Vec<BigInt>,
    #[serde(serialize_with = "ser_big_vec")]
    pub step: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum LineShape {
    Param(LineParam),
    AtMostOne,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinePoints {
    pub shape: LineShape,
    pub points: Vec<[i64; 3]>,
    pub count: u64,
    /// count ≤ constant·(1 + B/|s|)
    pub constant: f64,
    pub bound: f64,
}

pub(crate) fn ser_big_vec<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::Serialize;
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().serialize(s)
}

/// Range of integers n with |t + n·s| ≤ B, or None if empty.
fn bounded_range(t: &BigInt, s: &BigInt, b: &BigInt) -> Option<(BigInt, BigInt)> {
    if s.is_zero() {
        return (t.abs() <= *b).then(|| (BigInt::from(i64::MIN), BigInt::from(i64::MAX)));
    }
    let (lo, hi) = (-b - t, b - t);
    let (lo, hi) = if s.is_positive() { (lo, hi) } else { (-hi, -lo) };
    let sa = s.abs();
    let a = lo.div_ceil(&sa);
    let z = hi.div_floor(&sa);
    (a <= z).then_some((a, z))
}

/// Affine integral points of height ≤ B on the line through p1 and p2.
pub fn line_points(p1: &ProjPoint, p2: &ProjPoint, b: u64) -> Result<LinePoints> {
    if p1 == p2 {
        return Err(Error::SamePoints);
    }
    if p1.coords().len() != 4 || p2.coords().len() != 4 {
        return Err(Error::invalid("points of P^3 expected"));
    }
    let (u, v) = (p1.coords(), p2.coords());
    let none = |constant: f64| LinePoints { shape: LineShape::AtMostOne, points: Vec::new(), count: 0, constant, bound: constant };
    const C: f64 = 2.0;
    let d: Vec<BigInt> = (1..4).map(|i| &u[0] * &v[i] - &v[0] * &u[i]).collect();
    if d.iter().all(|x| x.is_zero()) {
        // both points at infinity
        return Ok(none(C));
    }
    let s = canonical_primitive(&d);
    let (base_pt, den) = if !u[0].is_zero() { (u, u[0].clone()) } else { (v, v[0].clone()) };
    // den·x = base + w·s for integral x; solve w·s_i ≡ −base_i (mod den)
    let den_abs = den.abs();
    let sign = if den.is_negative() { -BigInt::one() } else { BigInt::one() };
    let a: Vec<BigInt> = (1..4).map(|i| &base_pt[i] * &sign).collect();
    let (mut r, mut m) = (BigInt::zero(), BigInt::one());
    for i in 0..3 {
        let Some((ri, mi)) = solve_linear_congruence(&s[i], &-&a[i], &den_abs) else {
            return Ok(none(C));
        };
        match crt_merge(&r, &m, &ri, &mi) {
            Some((r2, m2)) => (r, m) = (r2, m2),
            None => return Ok(none(C)),
        }
    }
    let t: Vec<BigInt> = (0..3).map(|i| (&a[i] + &r * &s[i]) / &den_abs).collect();
    let bb = BigInt::from(b);
    let mut range: Option<(BigInt, BigInt)> = Some((BigInt::from(i64::MIN), BigInt::from(i64::MAX)));
    for i in 0..3 {
        range = match (range, bounded_range(&t[i], &s[i], &bb)) {
            (Some((l1, h1)), Some((l2, h2))) => {
                let (l, h) = (l1.max(l2), h1.min(h2));
                (l <= h).then_some((l, h))
            }
            _ => None,
        };
    }
    let mut points = Vec::new();
    if let Some((l, h)) = range {
        let (l, h) = (l.to_i64().unwrap(), h.to_i64().unwrap());
        for n in l..=h {
            let n = bi(n);
            points.push([0, 1, 2].map(|i| (&t[i] + &n * &s[i]).to_i64().unwrap()));
        }
    }
    let smax = s.iter().map(|x| x.abs()).max().unwrap().to_f64().unwrap();
    let count = points.len() as u64;
    let bound = C * (1.0 + b as f64 / smax);
    debug_assert!(count as f64 <= bound);
    let shape = if count >= 2 { LineShape::Param(LineParam { base: t, step: s }) } else { LineShape::AtMostOne };
    Ok(LinePoints { shape, points, count, constant: C, bound })
}

/// Plane a0·X0 = a1·X1 + a2·X2 + a3·X3 with one variable eliminated from a quadric.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlaneConicData {
    #[serde(serialize_with = "ser_big_vec")]
    pub plane: Vec<BigInt>,
    pub eliminated: usize,
    /// Original indices of the variables of `q`: 0 and the two surviving ones.
    pub kept: [usize; 3],
    #[serde(serialize_with = "ser_poly")]
    pub q: IntPoly,
    #[serde(serialize_with = "ser_poly")]
    pub quadric: IntPoly,
    #[serde(serialize_with = "ser_big")]
    pub gram_det: BigInt,
    pub nonsingular: bool,
}

pub(crate) fn ser_poly<S: serde::Serializer>(p: &IntPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

pub(crate) fn ser_big<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// Gram matrix of a quadratic form (twice the symmetric matrix).
pub fn gram_matrix(q: &IntPoly) -> Vec<Vec<BigInt>> {
    let n = q.nvars();
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for (mono, c) in q.terms() {
        let idx: Vec<usize> = mono.0.iter().enumerate().flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize)).collect();
        match idx.as_slice() {
            [i, j] if i == j => m[*i][*i] += c * 2,
            [i, j] => {
                m[*i][*j] += c;
                m[*j][*i] += c;
            }
            _ => {}
        }
    }
    m
}

impl PlaneConicData {
    /// Recovers the full affine point from (x_j, x_k) at X0 = 1.
    pub fn lift(&self, xj: &BigInt, xk: &BigInt) -> Option<[BigInt; 3]> {
        let [_, j, k] = self.kept;
        let i = self.eliminated;
        let a = &self.plane;
        let num = &a[0] - &a[j] * xj - &a[k] * xk;
        let (xi, r) = num.div_rem(&a[i]);
        if !r.is_zero() {
            return None;
        }
        let mut out = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
        out[i - 1] = xi;
        out[j - 1] = xj.clone();
        out[k - 1] = xk.clone();
        Some(out)
    }
}

pub fn plane_eliminate(plane: &[BigInt], quadric: &IntPoly) -> Result<PlaneConicData> {
    if plane.len() != 4 || quadric.nvars() != 4 {
        return Err(Error::invalid("plane and quadric must live in P^3"));
    }
    let Some(i) = (1..4).rev().find(|&i| !plane[i].is_zero()) else {
        return Err(Error::PlaneAtInfinity);
    };
    let g = content(plane);
    let a: Vec<BigInt> = plane.iter().map(|x| x / &g).collect();
    let kept: Vec<usize> = (0..4).filter(|&j| j != i).collect();
    // a_i·X_i = a0·X0 − Σ a_j X_j; substitute into a_i²·Q
    let mut subs: Vec<IntPoly> = Vec::new();
    for v in 0..4 {
        if v == i {
            let mut lin = vec![BigInt::zero(); 3];
            for (pos, &j) in kept.iter().enumerate() {
                lin[pos] = if j == 0 { a[0].clone() } else { -&a[j] };
            }
            subs.push(IntPoly::linear(&lin));
        } else {
            let pos = kept.iter().position(|&j| j == v).unwrap();
            subs.push(IntPoly::var(3, pos).scale(&a[i]));
        }
    }
    let q = quadric.compose(&subs);
    let g = q.content();
    let q = if g.is_zero() { q } else { q.map_coeffs(|c| c / &g) };
    let gram_det = det(&gram_matrix(&q));
    Ok(PlaneConicData {
        plane: a,
        eliminated: i,
        kept: [kept[0], kept[1], kept[2]],
        nonsingular: !gram_det.is_zero() && q.degree() == Some(2),
        q,
        quadric: quadric.clone(),
        gram_det,
    })
}

/// Rank of the binary form q(0, X1, X2).
pub fn tangency_rank(q: &IntPoly) -> usize {
    let at_inf = q.substitute_keep(0, &BigInt::zero()).component(2);
    let g = gram_matrix(&at_inf);
    rank(&[g[1][1..].to_vec(), g[2][1..].to_vec()])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConicClass {
    #[serde(serialize_with = "ser_big")]
    pub lambda: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub d_lambda: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub z_lambda: BigInt,
    /// 2·R_{i,λ}(t) for the affine coordinates i = 1, 2, 3.
    #[serde(serialize_with = "ser_polys")]
    pub r2: [IntPoly; 3],
}

fn ser_polys<S: serde::Serializer>(p: &[IntPoly; 3], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::Serialize;
    p.iter().map(|x| x.to_string_with(crate::poly::VarStyle::T)).collect::<Vec<_>>().serialize(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConicParam {
    #[serde(serialize_with = "ser_big_vec")]
    pub substitution: Vec<BigInt>,
    /// (a, e, f, d̂) of q' = aY1² + eY0Y1 + fY0Y2 + d̂Y0².
    #[serde(serialize_with = "ser_big_vec")]
    pub q_prime: Vec<BigInt>,
    #[serde(serialize_with = "ser_big")]
    pub base_y: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub denominator: BigInt,
    pub classes: Vec<ConicClass>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ConicOutcome {
    Param(ConicParam),
    /// No integral affine point at all.
    Empty,
}

type RatQuad = [BigRational; 3];

fn rat(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

fn eval_quad(q: &RatQuad, y: &BigRational) -> BigRational {
    &q[0] + &q[1] * y + &q[2] * y * y
}

/// Coefficients of q(y0 + k·t).
fn shift_quad(q: &RatQuad, y0: &BigRational, k: &BigRational) -> RatQuad {
    [eval_quad(q, y0), (&q[1] + &q[2] * y0 * BigRational::from_integer(bi(2))) * k, &q[2] * k * k]
}

/// Integral parameterisation of the affine integral points of a tangent conic.
pub fn conic_parameterize(data: &PlaneConicData) -> Result<ConicOutcome> {
    let q = &data.q;
    if !data.nonsingular {
        return Err(Error::DegenerateConic);
    }
    let r = tangency_rank(q);
    if r != 1 {
        return Err(Error::NotTangent(r));
    }
    let c = |e: [u32; 3]| q.coeff(&Monomial(e.to_vec()));
    let (c11, c12, c22) = (c([0, 2, 0]), c([0, 1, 1]), c([0, 0, 2]));
    let row = if !c11.is_zero() { vec![&c11 * 2, c12.clone()] } else { vec![c12.clone(), &c22 * 2] };
    let ab = canonical_primitive(&row);
    let (alpha, beta) = (ab[0].clone(), ab[1].clone());
    let (gamma, delta) = unimodular_complete(&alpha, &beta)?;
    // X1 = δY1 − βY2, X2 = αY2 − γY1
    let subs = [
        IntPoly::var(3, 0),
        IntPoly::linear(&[BigInt::zero(), delta.clone(), -&beta]),
        IntPoly::linear(&[BigInt::zero(), -&gamma, alpha.clone()]),
    ];
    let qp = q.compose(&subs);
    let cp = |e: [u32; 3]| qp.coeff(&Monomial(e.to_vec()));
    let (a, e, f, dh) = (cp([0, 2, 0]), cp([1, 1, 0]), cp([1, 0, 1]), cp([2, 0, 0]));
    debug_assert!(cp([0, 1, 1]).is_zero() && cp([0, 0, 2]).is_zero());
    if f.is_zero() {
        return Err(Error::DegenerateConic);
    }
    // Y2 = −(aY² + eY + d̂)/f at Y0 = 1
    let fr = rat(&f);
    let y2: RatQuad = [-rat(&dh) / &fr, -rat(&e) / &fr, -rat(&a) / &fr];
    let lin = |k1: &BigInt, k2: &BigInt| -> RatQuad {
        // k1·Y + k2·Y2(Y)
        [&y2[0] * rat(k2), &y2[1] * rat(k2) + rat(k1), &y2[2] * rat(k2)]
    };
    let qj = lin(&delta, &-&beta);
    let qk = lin(&-&gamma, &alpha);
    let [_, j, k] = data.kept;
    let i = data.eliminated;
    let pa = &data.plane;
    let ai = rat(&pa[i]);
    let qi: RatQuad = [
        (rat(&pa[0]) - &qj[0] * rat(&pa[j]) - &qk[0] * rat(&pa[k])) / &ai,
        -(&qj[1] * rat(&pa[j]) + &qk[1] * rat(&pa[k])) / &ai,
        -(&qj[2] * rat(&pa[j]) + &qk[2] * rat(&pa[k])) / &ai,
    ];
    let mut qs: [RatQuad; 3] = [qi.clone(), qi.clone(), qi];
    qs[j - 1] = qj;
    qs[k - 1] = qk;
    let den = qs.iter().flatten().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let period = den.to_i64().ok_or_else(|| Error::invalid("denominator too large to scan"))?;
    let integral = |y: &BigRational| qs.iter().all(|qq| eval_quad(qq, y).is_integer());
    let Some(ystar) = (0..period).map(|y| rat(&bi(y))).find(|y| integral(y)) else {
        return Ok(ConicOutcome::Empty);
    };
    let one = BigRational::one();
    let big_q: Vec<RatQuad> = qs.iter().map(|qq| shift_quad(qq, &ystar, &one)).collect();
    let d = big_q.iter().flatten().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let dr = rat(&d);
    let bc: Vec<(BigInt, BigInt)> = big_q.iter().map(|qq| ((&qq[1] * &dr).to_integer(), (&qq[2] * &dr).to_integer())).collect();
    let mut classes = Vec::new();
    for lambda in divisors(&d) {
        let mu = &d / &lambda;
        let (mut w, mut l) = (BigInt::zero(), BigInt::one());
        let mut ok = true;
        for (bi_, ci) in &bc {
            match solve_linear_congruence(&(ci * &lambda), &-bi_, &mu).and_then(|(wi, mi)| crt_merge(&w, &l, &wi, &mi)) {
                Some((w2, l2)) => (w, l) = (w2, l2),
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        // some W in the class must be coprime to μ for h.c.f.(Z, D) = λ
        let reps = (&mu / &l).to_u64().unwrap_or(u64::MAX);
        let coprime = (0..reps.max(1)).any(|s| (&w + &l * BigInt::from(s)).gcd(&mu).is_one());
        if !coprime {
            continue;
        }
        let z = &lambda * &w;
        let dl = &lambda * &l;
        let r2 = [0, 1, 2].map(|idx| {
            let rq = shift_quad(&big_q[idx], &rat(&z), &rat(&dl));
            let two = BigRational::from_integer(bi(2));
            let cs: Vec<BigInt> = rq.iter().map(|x| {
                let y = x * &two;
                assert!(y.is_integer(), "2R must have integer coefficients");
                y.to_integer()
            }).collect();
            IntPoly::from_univariate(&cs)
        });
        classes.push(ConicClass { lambda, d_lambda: dl, z_lambda: z, r2 });
    }
    Ok(ConicOutcome::Param(ConicParam {
        substitution: vec![alpha, beta, gamma, delta],
        q_prime: vec![a, e, f, dh],
        base_y: ystar.to_integer(),
        denominator: d,
        classes,
    }))
}

impl ConicParam {
    /// Empirical κ with D = B^κ.
    pub fn kappa(&self, b: u64) -> f64 {
        if self.denominator.is_one() {
            return 0.0;
        }
        ln_abs(&self.denominator) / (b as f64).ln()
    }

    /// Distinct affine points of height ≤ B over all classes, sorted.
    pub fn points(&self, b: u64) -> Vec<[i64; 3]> {
        let mut set = BTreeSet::new();
        for c in &self.classes {
            for t in class_parameters(c, b) {
                set.insert(class_point(c, t));
            }
        }
        set.into_iter().collect()
    }
}

fn class_point(c: &ConicClass, t: i64) -> [i64; 3] {
    let tv = [bi(t)];
    [0, 1, 2].map(|i| {
        let v: BigInt = c.r2[i].eval(&tv);
        (v / BigInt::from(2)).to_i64().unwrap()
    })
}

/// Parameters t with every |R_i(t)| ≤ B; None means every t (constant class).
fn class_parameters(c: &ConicClass, b: u64) -> Vec<i64> {
    let two_b = BigInt::from(2 * b);
    let coeffs: Vec<Vec<BigInt>> = c.r2.iter().map(|r| r.univariate_coeffs()).collect();
    let Some(lead) = coeffs.iter().filter(|v| v.len() > 1).max_by_key(|v| v.len()) else {
        let inside = coeffs.iter().all(|v| v[0].abs() <= two_b);
        return if inside { vec![0] } else { Vec::new() };
    };
    let deg = lead.len() - 1;
    let tail: BigInt = lead[..deg].iter().map(|x| x.abs()).sum();
    let r = ((&two_b + tail) / lead[deg].abs() + 1u32).to_i64().unwrap();
    let mut allowed: Vec<(i64, i64)> = vec![(-r, r)];
    for v in &coeffs {
        let w = window(v, -r, r, &two_b);
        allowed = intersect(&allowed, &w);
    }
    allowed.into_iter().flat_map(|(x, y)| x..=y).collect()
}

fn window<T: Exact>(c: &[T], lo: i64, hi: i64, b: &T) -> Vec<(i64, i64)> {
    value_window(c, lo, hi, &-b.clone(), b)
}

fn intersect(a: &[(i64, i64)], b: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for &(x1, y1) in a {
        for &(x2, y2) in b {
            let (x, y) = (x1.max(x2), y1.min(y2));
            if x <= y {
                out.push((x, y));
            }
        }
    }
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassCount {
    pub count: u64,
    /// Root-count bound for the quadratic with the largest leading coefficient.
    pub bound: f64,
}

/// Number of t with all |R_i(t)| ≤ B.
pub fn count_class_points(c: &ConicClass, b: u64) -> ClassCount {
    let count = class_parameters(c, b).len() as u64;
    let lead = c
        .r2
        .iter()
        .filter_map(|r| {
            let v = r.univariate_coeffs();
            (v.len() > 1).then(|| (v.len() - 1, v.last().unwrap().abs()))
        })
        .max();
    let bound = match lead {
        None => 1.0,
        Some((deg, l)) => {
            let l = l.to_f64().unwrap() / 2.0;
            deg as f64 * (3.0 + 2.0 * (b as f64 / l).powf(1.0 / deg as f64))
        }
    };
    ClassCount { count, bound }
}

/// Plane through three affine points (1, x), or None if they are collinear.
pub fn plane_through_points(pts: &[[i64; 3]; 3]) -> Option<Vec<BigInt>> {
    // rows (−1, x1, x2, x3)·(a0, a1, a2, a3) = 0
    let rows: Vec<Vec<BigInt>> = pts.iter().map(|p| vec![bi(-1), bi(p[0]), bi(p[1]), bi(p[2])]).collect();
    let ns = crate::arith::linalg::nullspace(&rows, 4);
    (ns.len() == 1).then(|| ns[0].clone())
}

/// Brute-force affine integral points of height ≤ B on plane ∩ quadric.
pub fn conic_points_brute_force(data: &PlaneConicData, b: u64) -> Result<Vec<[i64; 3]>> {
    let g = data.q.dehomogenize();
    let sols = crate::enumerate::affine_points(&g, b)?;
    let bb = BigInt::from(b);
    let mut out: Vec<[i64; 3]> = sols
        .iter()
        .filter_map(|s| data.lift(&bi(s[0]), &bi(s[1])))
        .filter(|x| x.iter().all(|v| v.abs() <= bb))
        .map(|x| x.map(|v| v.to_i64().unwrap()))
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}
