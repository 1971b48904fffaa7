//! Tangent-plane classification, small-height witness searches and linear
//! projections.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::linalg::{canonical_primitive, nullspace, rank, reduce};
use crate::arith::{normalize_primitive, ProjPoint};
use crate::enumerate::count_projective;
use crate::poly::{irreducibility_report, IntPoly, IrreducibilityOptions, Verdict};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PointClass {
    Singular,
    InU,
    NotInU,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentData {
    pub gradient: Vec<BigInt>,
    pub hessian: Vec<Vec<BigInt>>,
    pub y: [Vec<BigInt>; 6],
    /// y_iᵀ M y_i.
    pub two_q: [BigInt; 6],
    /// Hasse second-order form Q, integral even when 2 ∤ M.
    q: IntPoly,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn quad_form(m: &[Vec<BigInt>], y: &[BigInt]) -> BigInt {
    (0..y.len()).map(|i| &y[i] * dot(&m[i], y)).sum()
}

/// Tangent data of F at x (no check that F(x) = 0).
pub fn tangent_data(f: &IntPoly, x: &[BigInt]) -> Result<TangentData> {
    if f.nvars() != 4 || x.len() != 4 {
        return Err(Error::WrongDimension("surfaces in P^3 expected".into()));
    }
    let g: Vec<BigInt> = (0..4).map(|i| f.partial(i).eval(x)).collect();
    let hessian: Vec<Vec<BigInt>> =
        (0..4).map(|i| (0..4).map(|j| f.partial(i).partial(j).eval(x)).collect()).collect();
    let z = BigInt::zero;
    let y = [
        vec![g[1].clone(), -&g[0], z(), z()],
        vec![g[2].clone(), z(), -&g[0], z()],
        vec![g[3].clone(), z(), z(), -&g[0]],
        vec![z(), g[2].clone(), -&g[1], z()],
        vec![z(), g[3].clone(), z(), -&g[1]],
        vec![z(), z(), g[3].clone(), -&g[2]],
    ];
    let two_q = [0, 1, 2, 3, 4, 5].map(|i| quad_form(&hessian, &y[i]));
    let mut q = IntPoly::zero(4);
    for i in 0..4 {
        for j in i..4 {
            let mut d = f.partial(i).partial(j).eval(x);
            if i == j {
                d /= 2;
            }
            let mut e = vec![0u32; 4];
            e[i] += 1;
            e[j] += 1;
            q.add_term(crate::poly::Monomial(e), d);
        }
    }
    Ok(TangentData { gradient: g, hessian, y, two_q, q })
}

impl TangentData {
    /// Q(y_i) and the polar values Q(y_i + y_j) − Q(y_i) − Q(y_j); together they
    /// vanish iff Q vanishes on the tangent plane.
    pub fn witness_values(&self) -> Vec<BigInt> {
        let qv: Vec<BigInt> = self.y.iter().map(|y| self.q.eval(y)).collect();
        let mut out = qv.clone();
        for i in 0..6 {
            for j in i + 1..6 {
                let s: Vec<BigInt> = (0..4).map(|k| &self.y[i][k] + &self.y[j][k]).collect();
                out.push(self.q.eval(&s) - &qv[i] - &qv[j]);
            }
        }
        out
    }

    fn classify(&self, nonzero: impl Fn(&BigInt) -> bool) -> PointClass {
        if !self.gradient.iter().any(&nonzero) {
            PointClass::Singular
        } else if self.witness_values().iter().any(&nonzero) {
            PointClass::InU
        } else {
            PointClass::NotInU
        }
    }
}

pub fn classify_point(f: &IntPoly, x: &ProjPoint) -> Result<PointClass> {
    if !f.eval(x.coords()).is_zero() {
        return Err(Error::PointNotOnSurface);
    }
    Ok(tangent_data(f, x.coords())?.classify(|v| !v.is_zero()))
}

/// Classification over F_p of the point with residues x.
pub fn classify_point_mod_p(f: &IntPoly, x: &[u64], p: u64) -> Result<PointClass> {
    if !crate::arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let xs: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v % p)).collect();
    if xs.iter().all(|v| v.is_zero()) {
        return Err(Error::ZeroVector);
    }
    if reduce(&f.eval(&xs), p) != 0 {
        return Err(Error::PointNotOnSurface);
    }
    Ok(tangent_data(f, &xs)?.classify(|v| reduce(v, p) != 0))
}

/// Points of F = 0 with height ≤ cap, by height and then lexicographically.
fn small_points(f: &IntPoly, cap: u64) -> Result<Vec<ProjPoint>> {
    let pts = count_projective(f, cap, true)?.points.unwrap_or_default();
    let mut out: Vec<ProjPoint> = pts.iter().map(|v| ProjPoint::from_i64(v)).collect::<Result<_>>()?;
    out.sort_by(|a, b| a.height().cmp(&b.height()).then(a.cmp(b)));
    out.dedup();
    Ok(out)
}

pub fn find_u_point(f: &IntPoly, height_cap: u64) -> Result<ProjPoint> {
    match f.degree() {
        Some(d) if d >= 2 => {}
        other => return Err(Error::DegreeTooSmall { target: 2, degree: other.unwrap_or(0) }),
    }
    for x in small_points(f, height_cap)? {
        if classify_point(f, &x)? == PointClass::InU {
            return Ok(x);
        }
    }
    Err(Error::NotFound(format!("no point of U with height <= {height_cap}")))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralSection {
    pub direction: Vec<BigInt>,
    /// X_i = Σ_j change[i][j]·Y_j, with Y_n = a·X.
    pub change: Vec<Vec<BigInt>>,
    /// F restricted to Y_n = 0, in Y_0..Y_{n−1}.
    pub section: IntPoly,
    pub tried: usize,
}

/// Unimodular V with V·a = e_last.
fn unimodular_to_last(a: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let mut w = a.to_vec();
    let mut v: Vec<Vec<BigInt>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    loop {
        let Some(i) = (0..n).filter(|&i| !w[i].is_zero()).min_by_key(|&i| w[i].abs()) else { unreachable!() };
        let mut changed = false;
        for j in 0..n {
            if j != i && !w[j].is_zero() {
                let wi = w[i].clone();
                let q = w[j].div_floor(&wi);
                w[j] -= &q * &wi;
                let ri = v[i].clone();
                for (x, y) in v[j].iter_mut().zip(&ri) {
                    *x -= &q * y;
                }
                changed = true;
            }
        }
        if !changed {
            v.swap(i, n - 1);
            w.swap(i, n - 1);
            if w[n - 1].is_negative() {
                v[n - 1].iter_mut().for_each(|x| *x = -&*x);
            }
            return v;
        }
    }
}

/// Primitive vectors of sup-norm h with canonical sign, lexicographic.
fn directions_of_height(n: usize, h: i64) -> Vec<Vec<BigInt>> {
    let mut out = Vec::new();
    let mut cur = vec![-h; n];
    loop {
        let v: Vec<BigInt> = cur.iter().map(|&x| BigInt::from(x)).collect();
        if cur.iter().map(|x| x.abs()).max() == Some(h) && canonical_primitive(&v) == v {
            out.push(v);
        }
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if cur[k] < h {
                cur[k] += 1;
                break;
            }
            cur[k] = -h;
        }
    }
}

/// A hyperplane whose section is certified absolutely irreducible.
pub fn find_integral_section(f: &IntPoly, height_cap: u64) -> Result<IntegralSection> {
    match f.degree() {
        Some(d) if d >= 2 => {}
        other => return Err(Error::DegreeTooSmall { target: 2, degree: other.unwrap_or(0) }),
    }
    if !f.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let n = f.nvars();
    let opts = IrreducibilityOptions::default();
    let mut candidates: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect();
    for h in 1..=height_cap as i64 {
        for v in directions_of_height(n, h) {
            if !candidates.contains(&v) {
                candidates.push(v);
            }
        }
    }
    let mut unknown = 0;
    for (tried, a) in candidates.into_iter().enumerate() {
        let v = unimodular_to_last(&a);
        let change: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| v[j][i].clone()).collect()).collect();
        let section = f.linear_substitution(&change).substitute(n - 1, &BigInt::zero());
        if section.is_zero() {
            continue;
        }
        match irreducibility_report(&section, &opts).verdict {
            Verdict::Yes => return Ok(IntegralSection { direction: a, change, section, tried: tried + 1 }),
            Verdict::Unknown => unknown += 1,
            Verdict::No => {}
        }
    }
    Err(Error::NotFound(format!("no certified integral section up to height {height_cap} ({unknown} unknown verdicts)")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectionSetup {
    #[serde(serialize_with = "ser_mat")]
    pub h: Vec<Vec<BigInt>>,
    #[serde(serialize_with = "ser_mat")]
    pub g: Vec<Vec<BigInt>>,
    #[serde(serialize_with = "crate::curves::ser_big")]
    pub lambda: BigInt,
    #[serde(serialize_with = "crate::curves::ser_big_vec")]
    pub lambdas: Vec<BigInt>,
    #[serde(serialize_with = "crate::curves::ser_big")]
    pub c: BigInt,
}

fn ser_mat<S: serde::Serializer>(m: &[Vec<BigInt>], s: S) -> std::result::Result<S::Ok, S::Error> {
    m.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>().serialize(s)
}

fn vec_height(v: &[BigInt]) -> BigInt {
    normalize_primitive(v).map(|p| p.height()).unwrap_or_default()
}

/// Dual vectors g_i with g_i·h_j = 0 for i ≠ j and g_i·h_i ≠ 0.
pub fn projection_setup(h: &[Vec<BigInt>]) -> Result<ProjectionSetup> {
    let Some(width) = h.first().map(|r| r.len()) else {
        return Err(Error::invalid("empty centre"));
    };
    if h.iter().any(|r| r.len() != width) || rank(h) != h.len() || h.len() >= width - 1 {
        return Err(Error::invalid("centre points must be independent and span a proper subspace"));
    }
    let mut g = Vec::new();
    for (i, hi) in h.iter().enumerate() {
        let others: Vec<Vec<BigInt>> = h.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, r)| r.clone()).collect();
        let gi = nullspace(&others, width)
            .into_iter()
            .find(|v| !dot(v, hi).is_zero())
            .ok_or_else(|| Error::invalid("no dual vector"))?;
        g.push(gi);
    }
    let prods: Vec<BigInt> = g.iter().zip(h).map(|(a, b)| dot(a, b)).collect();
    let lambda: BigInt = prods.iter().product();
    let lambdas: Vec<BigInt> =
        (0..h.len()).map(|j| prods.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, x)| x).product()).collect();
    let mut c = lambda.abs();
    for i in 0..h.len() {
        c += BigInt::from(width) * lambdas[i].abs() * vec_height(&g[i]) * vec_height(&h[i]);
    }
    debug_assert_eq!(rank(&g), g.len());
    Ok(ProjectionSetup { h: h.to_vec(), g, lambda, lambdas, c })
}

impl ProjectionSetup {
    /// Whether x lies in the linear span Λ of the centre points.
    pub fn in_centre(&self, x: &ProjPoint) -> bool {
        let mut m = self.h.clone();
        m.push(x.coords().to_vec());
        rank(&m) == self.h.len()
    }
}

/// π_Λ(x) = λx − Σ λ_i (g_i·x) h_i.
pub fn project_point(setup: &ProjectionSetup, x: &ProjPoint) -> Result<ProjPoint> {
    let xs = x.coords();
    if xs.len() != setup.h[0].len() {
        return Err(Error::WrongDimension("point and centre differ in dimension".into()));
    }
    let mut v: Vec<BigInt> = xs.iter().map(|c| c * &setup.lambda).collect();
    for i in 0..setup.h.len() {
        let s = &setup.lambdas[i] * dot(&setup.g[i], xs);
        for (a, b) in v.iter_mut().zip(&setup.h[i]) {
            *a -= &s * b;
        }
    }
    let img = ProjPoint::new(&v).map_err(|_| Error::CenterOfProjection)?;
    debug_assert!(setup.g.iter().all(|g| dot(g, img.coords()).is_zero()));
    debug_assert!(img.height() <= &setup.c * x.height());
    Ok(img)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BirationalityReport {
    pub points: usize,
    /// fiber size → number of image points
    pub histogram: BTreeMap<usize, usize>,
    pub max_fiber: usize,
    pub oversized: Vec<(ProjPoint, Vec<ProjPoint>)>,
    pub centre_hits: Vec<ProjPoint>,
    pub height_violations: Vec<ProjPoint>,
    pub passed: bool,
}

/// Groups points by image; fibers of more than d points, or points inside Λ, fail.
pub fn sample_birationality_check(setup: &ProjectionSetup, points: &[ProjPoint], d: usize) -> BirationalityReport {
    let mut fibers: BTreeMap<ProjPoint, Vec<ProjPoint>> = BTreeMap::new();
    let mut centre_hits = Vec::new();
    let mut height_violations = Vec::new();
    for x in points {
        match project_point(setup, x) {
            Ok(y) => {
                if y.height() > &setup.c * x.height() {
                    height_violations.push(x.clone());
                }
                fibers.entry(y).or_default().push(x.clone());
            }
            Err(_) => centre_hits.push(x.clone()),
        }
    }
    let histogram = crate::enumerate::histogram(fibers.values().map(|f| f.len()));
    let max_fiber = fibers.values().map(|f| f.len()).max().unwrap_or(0);
    let oversized: Vec<_> = fibers.into_iter().filter(|(_, f)| f.len() > d).collect();
    let passed = oversized.is_empty() && centre_hits.is_empty() && height_violations.is_empty();
    BirationalityReport { points: points.len(), histogram, max_fiber, oversized, centre_hits, height_violations, passed }
}

/// Scans single-point centres by height for one that passes the sample check.
pub fn find_point_centre(points: &[ProjPoint], d: usize, height_cap: u64) -> Result<ProjectionSetup> {
    let Some(width) = points.first().map(|p| p.coords().len()) else {
        return Err(Error::invalid("empty point sample"));
    };
    for h in 1..=height_cap as i64 {
        for v in directions_of_height(width, h) {
            let Ok(setup) = projection_setup(std::slice::from_ref(&v)) else { continue };
            if sample_birationality_check(&setup, points, d).passed {
                return Ok(setup);
            }
        }
    }
    Err(Error::NotFound(format!("no point centre up to height {height_cap}")))
}

/// Linear forms vanishing on a point sample (nonempty iff the sample is degenerate).
pub fn linear_span_equations(points: &[ProjPoint]) -> Vec<Vec<BigInt>> {
    let Some(width) = points.first().map(|p| p.coords().len()) else {
        return Vec::new();
    };
    let rows: Vec<Vec<BigInt>> = points.iter().map(|p| p.coords().to_vec()).collect();
    nullspace(&rows, width)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly_in;

    fn p4(s: &str) -> IntPoly {
        parse_poly_in(s, 4).unwrap().poly
    }

    fn pt(v: &[i64]) -> ProjPoint {
        ProjPoint::from_i64(v).unwrap()
    }

    fn bv(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn classification_examples() {
        let f = p4("x0*x3 - x1*x2");
        assert_eq!(classify_point(&f, &pt(&[1, 0, 0, 0])), Ok(PointClass::InU));
        let td = tangent_data(&f, &bv(&[1, 0, 0, 0])).unwrap();
        assert_eq!(td.gradient, bv(&[0, 0, 0, 1]));
        // every single 2Q(y_i) vanishes here; only a polar value detects Q ≠ 0
        assert!(td.two_q.iter().all(|v| v.is_zero()));
        for y in &td.y {
            assert!(dot(&td.gradient, y).is_zero());
        }
        assert_eq!(classify_point(&p4("x1^2 + x2^2 - x3^2"), &pt(&[1, 0, 0, 0])), Ok(PointClass::Singular));
        assert_eq!(classify_point(&p4("x1*x2*x3 - x0^3"), &pt(&[0, 1, 1, 0])), Ok(PointClass::NotInU));
        assert_eq!(classify_point(&f, &pt(&[1, 1, 1, 0])), Err(Error::PointNotOnSurface));
    }

    #[test]
    fn field_agreement() {
        let f = p4("x0^3 + x1^3 + x2^3 + x3^3");
        for x in [[1, -1, 0, 0], [1, 0, -1, 0], [0, 1, 0, -1]] {
            let over_q = classify_point(&f, &pt(&x)).unwrap();
            let r: Vec<u64> = x.iter().map(|&v| v.rem_euclid(7) as u64).collect();
            assert_eq!(classify_point_mod_p(&f, &r, 7).unwrap(), over_q);
        }
        // the Hasse form keeps characteristic 2 meaningful
        let g = p4("x0*x3 - x1*x2");
        assert_eq!(classify_point_mod_p(&g, &[1, 0, 0, 0], 2), Ok(PointClass::InU));
        assert_eq!(classify_point_mod_p(&g, &[1, 1, 1, 0], 5), Err(Error::PointNotOnSurface));
    }

    #[test]
    fn u_points() {
        let f = p4("x0*x3 - x1*x2");
        let x = find_u_point(&f, 1).unwrap();
        assert_eq!(classify_point(&f, &x), Ok(PointClass::InU));
        assert_eq!(x, pt(&[0, 0, 0, 1]));
        let fermat = p4("x0^3 + x1^3 + x2^3 + x3^3");
        let x = find_u_point(&fermat, 1).unwrap();
        assert_eq!(classify_point(&fermat, &x), Ok(PointClass::InU));
        assert!(matches!(find_u_point(&p4("x0 + x1"), 3), Err(Error::DegreeTooSmall { .. })));
    }

    #[test]
    fn sections() {
        let f = p4("x0*x3 - x1*x2");
        let s = find_integral_section(&f, 2).unwrap();
        assert!(s.tried > 4);
        assert_eq!(is_yes(&s.section), true);
        // Y_3 = a·X
        let n = 4;
        for j in 0..n {
            let col: Vec<BigInt> = (0..n).map(|i| s.change[i][j].clone()).collect();
            assert_eq!(dot(&s.direction, &col), BigInt::from((j == n - 1) as i64));
        }
        let g = p4("x0^2 + x1^2 + x2^2 - 5*x3^2");
        let s = find_integral_section(&g, 1).unwrap();
        assert_eq!(s.tried, 1);
        assert!(find_integral_section(&p4("x0 - x3"), 1).is_err());
    }

    fn is_yes(f: &IntPoly) -> bool {
        crate::poly::is_absolutely_irreducible(f) == Verdict::Yes
    }

    #[test]
    fn unimodular_last_row() {
        for a in [bv(&[6, 10, 15]), bv(&[0, 0, -1]), bv(&[3, -7, 0, 2])] {
            let v = unimodular_to_last(&a);
            let va: Vec<BigInt> = v.iter().map(|r| dot(r, &a)).collect();
            let mut e = vec![BigInt::zero(); a.len()];
            *e.last_mut().unwrap() = BigInt::one();
            assert_eq!(va, e);
            assert_eq!(crate::arith::linalg::det(&v).abs(), BigInt::one());
        }
    }

    #[test]
    fn projection() {
        let s = projection_setup(&[bv(&[0, 0, 0, 1])]).unwrap();
        assert_eq!(s.g, vec![bv(&[0, 0, 0, 1])]);
        assert_eq!(s.c, BigInt::from(5));
        assert_eq!(project_point(&s, &pt(&[1, 2, 4, 8])).unwrap(), pt(&[1, 2, 4, 0]));
        assert_eq!(project_point(&s, &pt(&[3, 1, 2, 0])).unwrap(), pt(&[3, 1, 2, 0]));
        assert_eq!(project_point(&s, &pt(&[0, 0, 0, 1])), Err(Error::CenterOfProjection));
        let s = projection_setup(&[bv(&[1, 0, 0, 0, 1]), bv(&[0, 1, 2, 0, 0])]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(dot(&s.g[i], &s.h[j]).is_zero(), i != j);
            }
        }
        let mut m = s.h.clone();
        m.extend(s.g.iter().cloned());
        assert_eq!(rank(&m), 4);
        assert!(projection_setup(&[bv(&[1, 2, 3]), bv(&[2, 4, 6])]).is_err());
    }

    fn twisted_cubic(b: i64) -> Vec<ProjPoint> {
        let mut out = Vec::new();
        for u in -b..=b {
            for v in 0..=b {
                if num_integer::gcd(u, v) == 1 {
                    out.push(pt(&[v * v * v, u * v * v, u * u * v, u * u * u]));
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    #[test]
    fn birationality() {
        let s = projection_setup(&[bv(&[0, 0, 0, 1])]).unwrap();
        let pts = twisted_cubic(10);
        let r = sample_birationality_check(&s, &pts, 3);
        // [0,0,0,1] is the centre itself; every other fiber is a single point
        assert_eq!(r.centre_hits, vec![pt(&[0, 0, 0, 1])]);
        assert_eq!(r.histogram.keys().copied().collect::<Vec<_>>(), vec![1]);
        let off: Vec<ProjPoint> = pts.iter().filter(|p| **p != pt(&[0, 0, 0, 1])).cloned().collect();
        assert!(sample_birationality_check(&s, &off, 3).passed);
        // centre on the curve
        let r = sample_birationality_check(&projection_setup(&[bv(&[1, 0, 0, 0])]).unwrap(), &pts, 3);
        assert!(!r.passed);
        assert_eq!(r.centre_hits, vec![pt(&[1, 0, 0, 0])]);
        // a line projected from one of its points collapses
        let line: Vec<ProjPoint> = (-5..=5).map(|t| pt(&[1, t, 0, 0])).collect();
        let r = sample_birationality_check(&projection_setup(&[bv(&[1, 0, 0, 0])]).unwrap(), &line, 1);
        assert!(!r.oversized.is_empty());
        assert!(sample_birationality_check(&s, &[], 3).passed);
        let c = find_point_centre(&pts, 3, 1).unwrap();
        assert!(sample_birationality_check(&c, &pts, 3).passed);
        assert_eq!(linear_span_equations(&line), vec![bv(&[0, 0, 1, 0]), bv(&[0, 0, 0, 1])]);
    }
}
