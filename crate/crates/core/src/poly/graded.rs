//! Degree-δ pieces of S/I by sparse exact elimination.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::Zero;

use super::{IntPoly, Monomial};
use crate::arith::linalg::SparseEchelon;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPieceBasis {
    pub degree: u32,
    pub generators: Vec<IntPoly>,
    /// Standard monomials in increasing grlex order.
    pub basis: Vec<Monomial>,
    pub dim: usize,
}

/// All monomials of total degree d in increasing grlex order.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(Monomial(cur.clone()));
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial(vec![]));
        }
        return out;
    }
    rec(0, d, &mut vec![0; nvars], &mut out);
    out
}

/// Basis of the degree-δ piece of S/(ideal_gens + extra_gens).
pub fn graded_piece_basis(ideal_gens: &[IntPoly], extra_gens: &[IntPoly], delta: i64) -> Result<GradedPieceBasis> {
    if delta < 0 {
        return Err(Error::invalid("negative degree"));
    }
    let delta = delta as u32;
    let gens: Vec<IntPoly> = ideal_gens.iter().chain(extra_gens).cloned().collect();
    let nvars = gens.first().map_or(0, |g| g.nvars());
    if gens.iter().any(|g| g.nvars() != nvars) {
        return Err(Error::invalid("generators live in different rings"));
    }
    if gens.iter().any(|g| !g.is_homogeneous()) {
        return Err(Error::NotHomogeneous);
    }
    let basis = standard_monomials(&gens, nvars, delta);
    Ok(GradedPieceBasis { degree: delta, generators: gens, dim: basis.len(), basis })
}

/// Variables that are themselves (up to a unit-free scalar) generators, found
/// repeatedly after setting earlier ones to zero; plus the reduced generators.
fn split_variables(gens: &[IntPoly], nvars: usize) -> (Vec<bool>, Vec<IntPoly>) {
    let mut killed = vec![false; nvars];
    let mut gens: Vec<IntPoly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    loop {
        let mut changed = false;
        for g in &gens {
            if g.num_terms() == 1 && g.degree() == Some(1) {
                let (m, _) = g.terms().next().unwrap();
                let i = m.0.iter().position(|&e| e == 1).unwrap();
                if !killed[i] {
                    killed[i] = true;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
        gens = gens
            .iter()
            .map(|g| {
                let mut h = g.clone();
                for (i, &k) in killed.iter().enumerate() {
                    if k && h.involves(i) {
                        h = h.substitute_keep(i, &BigInt::zero());
                    }
                }
                h
            })
            .filter(|g| !g.is_zero())
            .collect();
    }
    (killed, gens)
}

pub(crate) fn standard_monomials(gens: &[IntPoly], nvars: usize, delta: u32) -> Vec<Monomial> {
    if gens.iter().any(|g| !g.is_zero() && g.degree() == Some(0)) {
        return Vec::new();
    }
    let (killed, gens) = split_variables(gens, nvars);
    let cols: Vec<Monomial> = monomials_of_degree(nvars, delta)
        .into_iter()
        .filter(|m| m.0.iter().zip(&killed).all(|(&e, &k)| e == 0 || !k))
        .collect();
    let free: Vec<usize> = (0..nvars).filter(|&i| !killed[i]).collect();
    let index: HashMap<&Monomial, usize> = cols.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut dead: HashSet<usize> = HashSet::new();
    let mut ech = SparseEchelon::new();
    let mut multi: Vec<&IntPoly> = Vec::new();
    for g in &gens {
        let dg = g.degree().unwrap();
        if dg > delta {
            continue;
        }
        if g.num_terms() == 1 {
            let (gm, _) = g.terms().next().unwrap();
            for m in multipliers(&free, nvars, delta - dg) {
                dead.insert(index[&m.mul(gm)]);
            }
        } else {
            multi.push(g);
        }
    }
    for g in multi {
        let dg = g.degree().unwrap();
        for m in multipliers(&free, nvars, delta - dg) {
            let row: BTreeMap<usize, BigInt> = g
                .terms()
                .map(|(gm, c)| (index[&m.mul(gm)], c.clone()))
                .filter(|(i, _)| !dead.contains(i))
                .collect();
            ech.insert(row);
        }
    }
    cols.into_iter()
        .enumerate()
        .filter(|(i, _)| !dead.contains(i) && !ech.is_pivot(*i))
        .map(|(_, m)| m)
        .collect()
}

/// Monomials of degree d supported on the `free` variables.
fn multipliers(free: &[usize], nvars: usize, d: u32) -> Vec<Monomial> {
    monomials_of_degree(free.len(), d)
        .into_iter()
        .map(|m| {
            let mut e = vec![0; nvars];
            for (j, &i) in free.iter().enumerate() {
                e[i] = m.0[j];
            }
            Monomial(e)
        })
        .collect()
}
