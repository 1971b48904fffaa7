//! Determinant method: prime windows, monomial selection, exact determinants
//! with divisibility checks, and auxiliary forms.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::arith::linalg::{det, nullspace, rank, rank_mod_p, reduce, SparseEchelon};
use crate::arith::{binomial, factorial, is_prime, ln_abs, primes_between, valuation};
use crate::geometry::{classify_point_mod_p, PointClass};
use crate::poly::{graded_piece_basis, monomials_of_degree, IntPoly, Monomial};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrimeWindow {
    pub b: u64,
    pub exponent: f64,
    pub epsilon: f64,
    pub primes: Vec<u64>,
    pub lo: u64,
    pub hi: u64,
}

fn window(b: u64, exponent: f64, epsilon: f64, exclude: Option<u64>, min_count: usize) -> PrimeWindow {
    let mut start = (b as f64).powf(exponent);
    if (start - start.round()).abs() < 1e-9 * start.max(1.0) {
        start = start.round();
    }
    let lo = (start.ceil() as u64).max(2);
    let mut c = 2.0;
    loop {
        let hi = ((c * start).floor() as u64).max(lo + 1);
        let primes: Vec<u64> = primes_between(lo, hi).into_iter().filter(|&p| Some(p) != exclude).collect();
        if primes.len() >= min_count {
            return PrimeWindow { b, exponent, epsilon, primes, lo, hi };
        }
        c *= 2.0;
    }
}

/// Primes in [B^{1/√d+ε}, C·B^{1/√d+ε}], C doubling from 2.
pub fn prime_window(b: u64, d: u32, epsilon: f64, min_count: usize) -> PrimeWindow {
    window(b, 1.0 / (d as f64).sqrt() + epsilon, epsilon, None, min_count)
}

/// Window at exponent 1/e − 1/((e−1)√d), skipping the prime `exclude`.
pub fn second_prime_window(b: u64, d: u32, e: u32, exclude: u64, min_count: usize) -> Result<PrimeWindow> {
    if e <= 2 {
        return Err(Error::invalid("curve degree must be at least 3"));
    }
    let (e, d) = (e as f64, d as f64);
    let a = 1.0 / e - 1.0 / ((e - 1.0) * d.sqrt());
    Ok(window(b, a, 0.0, Some(exclude), min_count))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueClass {
    pub points: Vec<[i64; 3]>,
    /// Classification of [1, π] on X mod p; None if π is not on X_p.
    pub class: Option<PointClass>,
}

pub fn partition_by_residue(points: &[[i64; 3]], p: u64, f: &IntPoly) -> Result<BTreeMap<[u64; 3], ResidueClass>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut out: BTreeMap<[u64; 3], ResidueClass> = BTreeMap::new();
    for x in points {
        let key = x.map(|v| v.rem_euclid(p as i64) as u64);
        out.entry(key).or_insert_with(|| ResidueClass { points: Vec::new(), class: None }).points.push(*x);
    }
    for (k, c) in out.iter_mut() {
        c.class = classify_point_mod_p(f, &[1, k[0], k[1], k[2]], p).ok();
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonomialSelection {
    #[serde(skip)]
    pub ideal: Vec<IntPoly>,
    pub e: u32,
    pub k: usize,
    pub big_d: u32,
    pub delta0: u32,
    /// Exponents of m_i in X1, X2, X3.
    pub monomials: Vec<[u32; 3]>,
    pub degrees: Vec<u32>,
    pub degree_sum: u64,
    /// degree_sum ≤ k²/(2e) + c_sel·k
    pub c_sel: f64,
}

impl MonomialSelection {
    /// M_i = X0^{D−deg m_i}·m_i.
    pub fn full_monomials(&self) -> Vec<Monomial> {
        self.monomials
            .iter()
            .zip(&self.degrees)
            .map(|(m, &dg)| Monomial(vec![self.big_d - dg, m[0], m[1], m[2]]))
            .collect()
    }

    pub fn ratio(&self) -> f64 {
        self.degree_sum as f64 * 2.0 * self.e as f64 / (self.k * self.k) as f64
    }
}

fn x0(n: usize) -> IntPoly {
    IntPoly::var(n, 0)
}

/// e monomials per degree δ ≥ δ0 independent modulo ⟨J, X0⟩, up to the least D with n_D ≥ k.
pub fn select_monomials(j: &[IntPoly], e: u32, k: usize) -> Result<MonomialSelection> {
    if j.is_empty() || j.iter().any(|g| g.nvars() != 4) {
        return Err(Error::WrongDimension("ideal generators in 4 variables expected".into()));
    }
    if k == 0 || e == 0 {
        return Err(Error::invalid("k and e must be positive"));
    }
    let extra = [x0(4)];
    let mut delta0 = None;
    for dlt in 0..=e.max(1) + 1 {
        let h = graded_piece_basis(j, &extra, dlt as i64)?.dim;
        if h == e as usize {
            delta0 = Some(dlt);
            break;
        }
    }
    let Some(delta0) = delta0 else {
        return Err(Error::WrongDimension(format!("Hilbert function at infinity never reaches {e}")));
    };
    let mut monomials = Vec::new();
    let mut degrees = Vec::new();
    let mut dlt = delta0;
    while monomials.len() < k {
        let gb = graded_piece_basis(j, &extra, dlt as i64)?;
        if gb.dim != e as usize {
            return Err(Error::WrongDimension(format!("h({dlt}) = {} differs from e = {e}", gb.dim)));
        }
        for m in gb.basis.iter().take(k - monomials.len()) {
            monomials.push([m.0[1], m.0[2], m.0[3]]);
            degrees.push(dlt);
        }
        dlt += 1;
    }
    let big_d = dlt - 1;
    let degree_sum = degrees.iter().map(|&x| x as u64).sum();
    Ok(MonomialSelection { ideal: j.to_vec(), e, k, big_d, delta0, monomials, degrees, degree_sum, c_sel: delta0 as f64 })
}

/// Exact check that no nontrivial combination of the M_i lies in J_D.
pub fn verify_selection(sel: &MonomialSelection) -> bool {
    let cols: HashMap<Monomial, usize> =
        monomials_of_degree(4, sel.big_d).into_iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut ech = SparseEchelon::new();
    for g in &sel.ideal {
        let Some(dg) = g.degree() else { continue };
        if dg > sel.big_d {
            continue;
        }
        for m in monomials_of_degree(4, sel.big_d - dg) {
            let row: BTreeMap<usize, BigInt> = g.terms().map(|(t, c)| (cols[&t.mul(&m)], c.clone())).collect();
            ech.insert(row);
        }
    }
    let base = ech.rank();
    for m in sel.full_monomials() {
        ech.insert(BTreeMap::from([(cols[&m], BigInt::from(1))]));
    }
    ech.rank() == base + sel.k
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DetCertificate {
    pub points: Vec<[i64; 3]>,
    #[serde(serialize_with = "crate::curves::ser_big")]
    pub delta: BigInt,
    pub duplicate: bool,
    pub p: Option<u64>,
    pub q: Option<u64>,
    /// None = +∞ (Δ = 0); absent prime gives None as well.
    pub v_p: Option<u32>,
    pub v_q: Option<u32>,
    pub beta: u64,
    pub log_abs_delta: Option<f64>,
    /// k·log k + (k²/2e)·log B + c_d1·k·log B
    pub d1_bound: f64,
    pub c_d1: f64,
    /// Exact |Δ| ≤ k!·B^{Σ deg m_i}.
    pub d1_holds: bool,
}

pub fn build_determinant(points: &[[i64; 3]], sel: &MonomialSelection, b: u64, p: Option<u64>, q: Option<u64>) -> Result<DetCertificate> {
    let k = sel.k;
    if points.len() != k {
        return Err(Error::invalid(format!("need {k} points, got {}", points.len())));
    }
    let mut sorted = points.to_vec();
    sorted.sort();
    let duplicate = sorted.windows(2).any(|w| w[0] == w[1]);
    let xs: Vec<Vec<BigInt>> = points.iter().map(|x| x.iter().map(|&v| BigInt::from(v)).collect()).collect();
    let m: Vec<Vec<BigInt>> = sel
        .monomials
        .iter()
        .map(|mi| xs.iter().map(|x| Monomial(mi.to_vec()).eval(x)).collect())
        .collect();
    let delta = det(&m);
    let val = |r: Option<u64>| r.and_then(|r| valuation(&delta, r));
    let kf = k as f64;
    let lb = (b as f64).ln();
    let c_d1 = sel.c_sel;
    let d1_bound = kf * kf.ln() + kf * kf / (2.0 * sel.e as f64) * lb + c_d1 * kf * lb;
    let cap = factorial(k as u64) * num_traits::pow(BigInt::from(b), sel.degree_sum as usize);
    let log_abs_delta = (!delta.is_zero()).then(|| ln_abs(&delta));
    let d1_holds = delta.abs() <= cap && log_abs_delta.is_none_or(|l| l <= d1_bound + 1e-9);
    Ok(DetCertificate {
        points: points.to_vec(),
        v_p: val(p),
        v_q: val(q),
        p,
        q,
        duplicate,
        beta: (k * (k - 1) / 2) as u64,
        log_abs_delta,
        d1_bound,
        c_d1,
        d1_holds,
        delta,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Divisibility {
    Pass,
    Fail,
    /// ω singular on Y mod q; only v_q is reported.
    NotApplicable,
}

/// q^{k(k−1)/2} | Δ when every point reduces to the nonsingular point ω of Y mod q.
pub fn divisibility_check(cert: &DetCertificate, q: u64, j: &[IntPoly], omega: [i64; 3]) -> Result<Divisibility> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    let qi = q as i64;
    if cert.points.iter().any(|x| (0..3).any(|i| (x[i] - omega[i]).rem_euclid(qi) != 0)) {
        return Err(Error::invalid("points do not share the reduction omega"));
    }
    let w: Vec<BigInt> = [1, omega[0], omega[1], omega[2]].iter().map(|&v| BigInt::from(v)).collect();
    if j.iter().any(|g| reduce(&g.eval(&w), q) != 0) {
        return Err(Error::invalid("omega is not on the curve mod q"));
    }
    let jac: Vec<Vec<u64>> = j.iter().map(|g| (0..4).map(|i| reduce(&g.partial(i).eval(&w), q)).collect()).collect();
    if rank_mod_p(&jac, q) < 2 {
        return Ok(Divisibility::NotApplicable);
    }
    let v = if cert.delta.is_zero() { None } else { valuation(&cert.delta, q) };
    let ok = match v {
        None => true,
        Some(v) => v as u64 >= cert.beta,
    };
    Ok(if ok { Divisibility::Pass } else { Divisibility::Fail })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Vanishing {
    Zero,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VanishingParams {
    pub b: u64,
    pub p: u64,
    pub q: u64,
    pub e: u32,
    pub d: u32,
    pub c_alpha: f64,
    pub c_d1: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VanishingPrediction {
    pub k: usize,
    pub verdict: Vanishing,
    pub lower: f64,
    pub upper: f64,
}

impl Default for VanishingParams {
    fn default() -> Self {
        VanishingParams { b: 2, p: 2, q: 3, e: 3, d: 3, c_alpha: 0.0, c_d1: 0.0 }
    }
}

/// α_lb(k)·log p + β(k)·log q against the (D1) upper bound.
pub fn vanishing_test(params: &VanishingParams, k: usize) -> VanishingPrediction {
    let kf = k as f64;
    let e = params.e as f64;
    let alpha = if params.e > 1 { (kf * kf / (2.0 * (e - 1.0)) - params.c_alpha * kf).max(0.0) } else { 0.0 };
    let beta = kf * (kf - 1.0) / 2.0;
    let lower = alpha * (params.p as f64).ln() + beta * (params.q as f64).ln();
    let lb = (params.b as f64).ln();
    let upper = kf * kf.ln() + kf * kf / (2.0 * e) * lb + params.c_d1 * kf * lb;
    let verdict = if lower > upper { Vanishing::Zero } else { Vanishing::Unknown };
    VanishingPrediction { k, verdict, lower, upper }
}

/// Least k ≤ k_max from which every prediction up to k_max is Zero.
pub fn vanishing_threshold(params: &VanishingParams, k_max: usize) -> Option<usize> {
    let mut t = None;
    for k in (1..=k_max).rev() {
        if vanishing_test(params, k).verdict == Vanishing::Zero {
            t = Some(k);
        } else {
            break;
        }
    }
    t
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuxiliaryForm {
    pub class: Option<(u64, [u64; 3])>,
    #[serde(serialize_with = "crate::curves::ser_poly")]
    pub form: IntPoly,
    pub degree: u32,
    pub rank: usize,
    pub basis_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum AuxOutcome {
    Form(AuxiliaryForm),
    RankFull { rank: usize, basis_size: usize },
}

/// A degree-D form through all points and not divisible by F.
pub fn extract_auxiliary_form(points: &[Vec<BigInt>], big_d: u32, f: &IntPoly) -> Result<AuxOutcome> {
    if points.is_empty() {
        return Err(Error::invalid("empty point list"));
    }
    let n = f.nvars();
    if points.iter().any(|x| x.len() != n) {
        return Err(Error::WrongDimension("points and F differ in dimension".into()));
    }
    let basis = monomials_of_degree(n, big_d);
    let rows: Vec<Vec<BigInt>> = points.iter().map(|x| basis.iter().map(|m| m.eval(x)).collect()).collect();
    let r = rank(&rows);
    if r == basis.len() {
        return Ok(AuxOutcome::RankFull { rank: r, basis_size: basis.len() });
    }
    let fp = f.primitive_part();
    for v in nullspace(&rows, basis.len()) {
        let g = IntPoly::from_terms(n, basis.iter().zip(v).map(|(m, c)| (m.0.clone(), c)));
        let divisible = fp.degree().is_some_and(|df| df <= big_d) && g.div_exact(&fp).is_some();
        if !divisible {
            debug_assert!(points.iter().all(|x| g.eval(x).is_zero()));
            return Ok(AuxOutcome::Form(AuxiliaryForm { class: None, form: g, degree: big_d, rank: r, basis_size: basis.len() }));
        }
    }
    Err(Error::IncreaseDegree)
}

/// Smallest D ≤ d_max admitting an auxiliary form.
pub fn auxiliary_form_search(points: &[Vec<BigInt>], f: &IntPoly, d_max: u32) -> Result<AuxOutcome> {
    let mut last = Err(Error::invalid("d_max must be positive"));
    for dd in 1..=d_max {
        last = extract_auxiliary_form(points, dd, f);
        if let Ok(AuxOutcome::Form(_)) = last {
            return last;
        }
    }
    last
}

/// θ = d·C(d+n, n).
pub fn theta_exponent(d: u64, n: u64) -> BigInt {
    binomial(d + n, n) * d
}

pub fn bezout_bound(e: u64, deg_g: u64) -> u64 {
    e * deg_g
}

/// Logarithm of |Δ| as a fraction of log B, for reporting.
pub fn delta_exponent(cert: &DetCertificate, b: u64) -> Option<f64> {
    cert.log_abs_delta.map(|l| l / (b as f64).ln())
}
