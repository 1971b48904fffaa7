//! Sparse multivariate polynomials with integer coefficients.

mod fp;
pub mod fp_univar;
mod graded;
mod irreducible;
mod parse;

pub use fp::FpPoly;
pub use graded::{graded_piece_basis, monomials_of_degree, GradedPieceBasis};
pub use irreducible::{
    irreducibility_report, is_absolutely_irreducible, IrreducibilityOptions, IrreducibilityReport, Verdict,
};
pub use parse::{parse_poly, parse_poly_in, ParsedPoly};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Exponent vector. Ordered graded-lexicographically: lower total degree
/// first, and within a degree a higher power of an earlier variable first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn eval(&self, x: &[BigInt]) -> BigInt {
        let mut r = BigInt::one();
        for (xi, &e) in x.iter().zip(&self.0) {
            if e > 0 {
                r *= num_traits::pow(xi.clone(), e as usize);
            }
        }
        r
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Naming scheme used when printing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum VarStyle {
    /// `x0, x1, ...`
    #[default]
    X,
    /// `t1, t2, ...`
    T,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl IntPoly {
    pub fn zero(nvars: usize) -> Self {
        IntPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::var(nvars, i), BigInt::one());
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, BigInt)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length");
            p.add_term(Monomial(e), c);
        }
        p
    }

    /// Linear form Σ c_i X_i.
    pub fn linear(coeffs: &[BigInt]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(n, i), c.clone());
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; None for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.0[var] > 0)
    }

    pub fn is_constant(&self) -> bool {
        self.degree().is_none_or(|d| d == 0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys();
        match it.next() {
            None => true,
            Some(m) => {
                let d = m.degree();
                it.all(|m| m.degree() == d)
            }
        }
    }

    /// Max |coefficient|; zero for the zero polynomial.
    pub fn coeff_height(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_default()
    }

    pub fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content, making the leading coefficient positive.
    pub fn primitive_part(&self) -> IntPoly {
        let mut g = self.content();
        if g.is_zero() {
            return self.clone();
        }
        if self.terms.values().next_back().unwrap().is_negative() {
            g = -g;
        }
        self.map_coeffs(|c| c / &g)
    }

    pub fn map_coeffs(&self, f: impl Fn(&BigInt) -> BigInt) -> IntPoly {
        let mut p = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            p.add_term(m.clone(), f(c));
        }
        p
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        self.map_coeffs(|c| c * k)
    }

    pub fn pow(&self, e: u32) -> IntPoly {
        let mut r = IntPoly::constant(self.nvars, BigInt::one());
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    pub fn eval(&self, x: &[BigInt]) -> BigInt {
        assert_eq!(x.len(), self.nvars);
        let mut s = BigInt::zero();
        for (m, c) in &self.terms {
            s += c * m.eval(x);
        }
        s
    }

    pub fn eval_i64(&self, x: &[i64]) -> BigInt {
        let x: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        self.eval(&x)
    }

    /// Homogeneous component of degree d.
    pub fn component(&self, d: u32) -> IntPoly {
        let mut p = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            if m.degree() == d {
                p.terms.insert(m.clone(), c.clone());
            }
        }
        p
    }

    /// Homogeneous part of maximal degree.
    pub fn leading_form(&self) -> Result<IntPoly> {
        let d = self.degree().ok_or(Error::ZeroPolynomial)?;
        Ok(self.component(d))
    }

    /// X0^δ f(X1/X0, ..., Xν/X0), in ν+1 variables with X0 first.
    pub fn homogenize(&self, delta: u32) -> Result<IntPoly> {
        let d = self.degree().unwrap_or(0);
        if delta < d {
            return Err(Error::DegreeTooSmall { target: delta, degree: d });
        }
        let mut p = Self::zero(self.nvars + 1);
        for (m, c) in &self.terms {
            let mut e = Vec::with_capacity(self.nvars + 1);
            e.push(delta - m.degree());
            e.extend_from_slice(&m.0);
            p.terms.insert(Monomial(e), c.clone());
        }
        Ok(p)
    }

    /// Sets X0 = 1 and drops that variable.
    pub fn dehomogenize(&self) -> IntPoly {
        self.substitute(0, &BigInt::one())
    }

    /// Substitutes `var = value` and removes the variable.
    pub fn substitute(&self, var: usize, value: &BigInt) -> IntPoly {
        assert!(var < self.nvars);
        let maxe = self.degree_in(var) as usize;
        let mut pows = Vec::with_capacity(maxe + 1);
        pows.push(BigInt::one());
        for i in 0..maxe {
            let next = &pows[i] * value;
            pows.push(next);
        }
        let mut p = Self::zero(self.nvars - 1);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let k = e.remove(var) as usize;
            p.add_term(Monomial(e), c * &pows[k]);
        }
        p
    }

    /// Substitutes `var = value` keeping the variable count.
    pub fn substitute_keep(&self, var: usize, value: &BigInt) -> IntPoly {
        let mut p = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let k = std::mem::replace(&mut e[var], 0);
            p.add_term(Monomial(e), c * num_traits::pow(value.clone(), k as usize));
        }
        p
    }

    /// Replaces each variable X_i by `subs[i]`, a polynomial in `new_nvars` variables.
    pub fn compose(&self, subs: &[IntPoly]) -> IntPoly {
        assert_eq!(subs.len(), self.nvars);
        let new_n = subs.first().map_or(0, |s| s.nvars);
        let mut cache: Vec<Vec<IntPoly>> = subs.iter().map(|s| vec![IntPoly::constant(new_n, BigInt::one()), s.clone()]).collect();
        let mut r = IntPoly::zero(new_n);
        for (m, c) in &self.terms {
            let mut t = IntPoly::constant(new_n, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e as usize {
                    let next = &cache[i][cache[i].len() - 1] * &subs[i];
                    cache[i].push(next);
                }
                t = &t * &cache[i][e as usize];
            }
            r = &r + &t;
        }
        r
    }

    /// Linear change of variables X_i = Σ_j rows[i][j] Y_j.
    pub fn linear_substitution(&self, rows: &[Vec<BigInt>]) -> IntPoly {
        let subs: Vec<IntPoly> = rows.iter().map(|r| IntPoly::linear(r)).collect();
        self.compose(&subs)
    }

    /// Keeps only the listed variables (the others must not occur).
    pub fn restrict_vars(&self, keep: &[usize]) -> IntPoly {
        let mut p = Self::zero(keep.len());
        for (m, c) in &self.terms {
            debug_assert!((0..self.nvars).all(|i| keep.contains(&i) || m.0[i] == 0));
            p.terms.insert(Monomial(keep.iter().map(|&i| m.0[i]).collect()), c.clone());
        }
        p
    }

    pub fn partial(&self, var: usize) -> IntPoly {
        let mut p = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let k = m.0[var];
            if k > 0 {
                let mut e = m.0.clone();
                e[var] -= 1;
                p.add_term(Monomial(e), c * BigInt::from(k));
            }
        }
        p
    }

    /// Coefficients in `var`, lowest power first, each free of `var`.
    pub fn coefficients_in(&self, var: usize) -> Vec<IntPoly> {
        let d = self.degree_in(var) as usize;
        let mut out = vec![IntPoly::zero(self.nvars); d + 1];
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let k = std::mem::replace(&mut e[var], 0) as usize;
            out[k].terms.insert(Monomial(e), c.clone());
        }
        out
    }

    /// Dense coefficients of a polynomial in a single variable.
    pub fn univariate_coeffs(&self) -> Vec<BigInt> {
        assert_eq!(self.nvars, 1, "univariate polynomial expected");
        let d = self.degree().unwrap_or(0) as usize;
        let mut v = vec![BigInt::zero(); d + 1];
        for (m, c) in &self.terms {
            v[m.0[0] as usize] = c.clone();
        }
        v
    }

    pub fn from_univariate(coeffs: &[BigInt]) -> IntPoly {
        let mut p = Self::zero(1);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial(vec![i as u32]), c.clone());
        }
        p
    }

    /// Exact quotient self / d, or None if d does not divide self in Z[X].
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        let (lm, lc) = d.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut r = self.clone();
        let mut q = IntPoly::zero(self.nvars);
        while let Some((m, c)) = r.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            if !lm.divides(&m) {
                return None;
            }
            let (qc, rem) = c.div_rem(&lc);
            if !rem.is_zero() {
                return None;
            }
            let qm = Monomial(m.0.iter().zip(&lm.0).map(|(a, b)| a - b).collect());
            for (dm, dc) in &d.terms {
                r.add_term(qm.mul(dm), -(dc * &qc));
            }
            q.add_term(qm, qc);
        }
        Some(q)
    }

    pub fn to_string_with(&self, style: VarStyle) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        let mut ordered: Vec<_> = self.terms.iter().collect();
        ordered.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then_with(|| a.0.cmp(b.0)));
        for (i, (m, c)) in ordered.into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mut factors = Vec::new();
            if !a.is_one() || m.degree() == 0 {
                factors.push(a.to_string());
            }
            for (v, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let name = match style {
                    VarStyle::X => format!("x{v}"),
                    VarStyle::T => format!("t{}", v + 1),
                };
                factors.push(if e == 1 { name } else { format!("{name}^{e}") });
            }
            s.push_str(&factors.join("*"));
        }
        s
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(VarStyle::X))
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut p = self.clone();
        for (m, c) in &rhs.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut p = self.clone();
        for (m, c) in &rhs.terms {
            p.add_term(m.clone(), -c);
        }
        p
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut p = IntPoly::zero(self.nvars);
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                p.add_term(a.mul(b), ca * cb);
            }
        }
        p
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        self.map_coeffs(|c| -c)
    }
}

/// Reduction of F modulo a prime.
pub fn reduce_mod_p(f: &IntPoly, p: u64) -> Result<FpPoly> {
    FpPoly::from_int(f, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPoly {
        parse_poly(s).unwrap().poly
    }

    #[test]
    fn monomial_order_is_grlex() {
        let mut ms = vec![
            Monomial(vec![0, 2]),
            Monomial(vec![1, 0]),
            Monomial(vec![0, 0]),
            Monomial(vec![1, 1]),
            Monomial(vec![2, 0]),
            Monomial(vec![0, 1]),
        ];
        ms.sort();
        let want = [[0, 0], [1, 0], [0, 1], [2, 0], [1, 1], [0, 2]];
        assert_eq!(ms.iter().map(|m| m.0.clone()).collect::<Vec<_>>(), want.map(|a| a.to_vec()).to_vec());
    }

    #[test]
    fn homogenize_examples() {
        let f = parse_poly("t1^2 + t2*t3 - 1").unwrap().poly;
        assert_eq!(f.homogenize(2).unwrap(), p("x1^2 + x2*x3 - x0^2"));
        let f = parse_poly("t1 - t2^3").unwrap().poly;
        assert_eq!(f.homogenize(3).unwrap(), p("x0^2*x1 - x2^3"));
        let f = parse_poly_in("t1", 1).unwrap().poly;
        assert_eq!(f.homogenize(2).unwrap(), p("x0*x1"));
        assert!(matches!(f.homogenize(0), Err(Error::DegreeTooSmall { .. })));
        let f = parse_poly("3*t1*t2 + t1 + 5").unwrap().poly;
        assert_eq!(f.homogenize(4).unwrap().dehomogenize(), f);
    }

    #[test]
    fn leading_forms_and_heights() {
        let f = parse_poly("t1 - t2^3").unwrap().poly;
        assert_eq!(f.leading_form().unwrap(), parse_poly_in("-t2^3", 2).unwrap().poly);
        let g = p("x0^2 - 7*x1*x2");
        assert_eq!(g.leading_form().unwrap(), g);
        let f = parse_poly("3*t1*t2 + t1 + 5").unwrap().poly;
        assert_eq!(f.leading_form().unwrap(), parse_poly("3*t1*t2").unwrap().poly);
        assert_eq!(IntPoly::zero(2).leading_form(), Err(Error::ZeroPolynomial));
        assert_eq!(g.coeff_height(), BigInt::from(7));
        assert_eq!(p("12*x0^3").coeff_height(), BigInt::from(12));
        assert_eq!(p("6*x0 - 4*x1").primitive_part(), p("-3*x0 + 2*x1"));
    }

    #[test]
    fn arithmetic_and_division() {
        let a = p("x0 - x1");
        let b = p("x0 + x1");
        let c = &a * &b;
        assert_eq!(c, p("x0^2 - x1^2"));
        assert_eq!(c.div_exact(&a), Some(b.clone()));
        assert_eq!(p("x0^2 + x1^2").div_exact(&a), None);
        assert_eq!(p("2*x0").div_exact(&p("4*x0")), None);
        assert_eq!(c.eval_i64(&[3, 2]), BigInt::from(5));
        assert_eq!(p("x0^2*x1").partial(0), p("2*x0*x1"));
        let s = p("x0*x2 - x1^2").substitute(0, &BigInt::from(1));
        assert_eq!(s.to_string_with(VarStyle::T), "-t1^2 + t2");
        assert_eq!(p("x0^3 + 2*x1*x2^2 - x3^3").to_string(), "x0^3 + 2*x1*x2^2 - x3^3");
    }

    #[test]
    fn compose_linear() {
        let f = p("x0*x1");
        let g = f.linear_substitution(&[vec![1.into(), 1.into()], vec![1.into(), (-1).into()]]);
        assert_eq!(g, p("x0^2 - x1^2"));
    }
}
