use std::collections::BTreeMap;

use super::{IntPoly, Monomial};
use crate::arith::is_prime;
use crate::arith::linalg::{mul_mod, pow_mod, reduce};
use crate::{Error, Result};

/// Polynomial over the prime field F_p with coefficients in [0, p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPoly {
    p: u64,
    nvars: usize,
    terms: BTreeMap<Monomial, u64>,
}

impl FpPoly {
    pub fn from_int(f: &IntPoly, p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let mut terms = BTreeMap::new();
        for (m, c) in f.terms() {
            let r = reduce(c, p);
            if r != 0 {
                terms.insert(m.clone(), r);
            }
        }
        Ok(FpPoly { p, nvars: f.nvars(), terms })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    /// Lifts coefficients to [0, p).
    pub fn to_int(&self) -> IntPoly {
        IntPoly::from_terms(self.nvars, self.terms.iter().map(|(m, &c)| (m.0.clone(), c.into())))
    }

    pub fn eval(&self, x: &[u64]) -> u64 {
        let p = self.p;
        let mut s = 0u64;
        for (m, &c) in &self.terms {
            let mut t = c;
            for (xi, &e) in x.iter().zip(&m.0) {
                if e > 0 {
                    t = mul_mod(t, pow_mod(*xi, e as u64, p), p);
                }
            }
            s = (s + t) % p;
        }
        s
    }

    pub fn partial(&self, var: usize) -> FpPoly {
        let p = self.p;
        let mut terms = BTreeMap::new();
        for (m, &c) in &self.terms {
            let k = m.0[var] as u64;
            let v = mul_mod(c, k % p, p);
            if v != 0 {
                let mut e = m.0.clone();
                e[var] -= 1;
                terms.insert(Monomial(e), v);
            }
        }
        FpPoly { p, nvars: self.nvars, terms }
    }

    /// Dense coefficients of g(s) = F(P + s·Q), lowest power first.
    pub fn along_line(&self, pt: &[u64], dir: &[u64]) -> Vec<u64> {
        use super::fp_univar as u;
        let p = self.p;
        let lin: Vec<Vec<u64>> = pt.iter().zip(dir).map(|(&a, &b)| vec![a % p, b % p]).collect();
        let mut out = vec![0u64];
        for (m, &c) in &self.terms {
            let mut t = vec![c];
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = u::mul(&t, &lin[i], p);
                }
            }
            out = u::add(&out, &t, p);
        }
        u::trim(out)
    }
}
