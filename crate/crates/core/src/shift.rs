//! Shift-polynomial lattices shared by the bivariate and trivariate solvers.
//!
//! Given `f` with nonzero constant term `a0`, a modulus `R` coprime to `a0`
//! and a set `S` of shift monomials, the lattice is spanned by the scaled
//! coefficient vectors of
//!
//! * `s * f' * prod X_j^(l_j - e_j(s))` for `s` in `S`, where
//!   `f' = a0^-1 * f mod R` and `l_j` is the largest exponent of `x_j` in `S`;
//! * `m * R` for each monomial `m` of `S*f` not in `S`.
//!
//! Every generator vanishes modulo `R` at a root of `f`, so a reduced vector
//! below the Howgrave-Graham bound gives a relation over the integers.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::mod_inverse;
use crate::error::{domain, Error, Result};
use crate::lattice::{default_delta, lll_reduce, Basis, ReductionReport};
use crate::poly::{Exponents, MPoly};

pub(crate) struct ShiftLattice {
    pub monomials: Vec<Exponents>,
    pub bounds: Vec<BigInt>,
    /// Every generator vanishes modulo this at the root.
    pub modulus: BigInt,
    pub basis: Basis,
}

pub(crate) struct Reduced {
    /// Polynomials passing the norm gate, shortest first.
    pub gated: Vec<MPoly>,
    pub report: ReductionReport,
    pub dim: usize,
}

fn bound_power(bounds: &[BigInt], e: &[u32]) -> BigInt {
    bounds
        .iter()
        .zip(e)
        .map(|(b, &d)| num_traits::pow(b.clone(), d as usize))
        .product()
}

/// Coefficients reduced into `(-R/2, R/2]`.
fn reduce_centered(f: &MPoly, r: &BigInt) -> MPoly {
    let half: BigInt = r >> 1;
    let mut out = MPoly::zero_with(f.vars().to_vec());
    for (e, c) in f.terms() {
        let mut v = c.mod_floor(r);
        if v > half {
            v -= r;
        }
        out.add_term(e.clone(), v);
    }
    out
}

pub(crate) fn build(
    f: &MPoly,
    modulus: &BigInt,
    shifts: &[Exponents],
    bounds: &[BigInt],
) -> Result<ShiftLattice> {
    let k = f.arity();
    if bounds.len() != k {
        return domain("one bound per variable is required");
    }
    let a0 = f.constant_term();
    if a0.is_zero() {
        return domain("shift lattice needs a nonzero constant term");
    }
    let inv = mod_inverse(&a0, modulus)
        .ok_or_else(|| Error::Precondition("constant term not invertible".into()))?;
    let fprime = reduce_centered(&f.scale(&inv), modulus);
    let l: Vec<u32> = (0..k)
        .map(|j| shifts.iter().map(|s| s[j]).max().unwrap_or(0))
        .collect();

    let shift_set: BTreeSet<Exponents> = shifts.iter().cloned().collect();
    let mut rows: Vec<(Exponents, MPoly)> = Vec::new();
    let mut all: BTreeSet<Exponents> = BTreeSet::new();
    for s in &shift_set {
        let scale: BigInt = bound_power(
            bounds,
            &l.iter().zip(s).map(|(a, b)| a - b).collect::<Vec<_>>(),
        );
        let g = fprime.mul_monomial(s, &scale);
        all.extend(g.terms().map(|(e, _)| e.clone()));
        rows.push((s.clone(), g));
    }
    for m in all.iter().filter(|m| !shift_set.contains(*m)) {
        let mut g = MPoly::zero_with(f.vars().to_vec());
        g.add_term(m.clone(), modulus.clone());
        rows.push((m.clone(), g));
    }
    // order columns and rows by graded order so the basis is triangular
    let mut monomials: Vec<Exponents> = all.into_iter().collect();
    let key = |e: &Exponents| (e.iter().sum::<u32>(), e.clone());
    monomials.sort_by_key(key);
    rows.sort_by_key(|(m, _)| key(m));
    let index: BTreeMap<&Exponents, usize> =
        monomials.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let scales: Vec<BigInt> = monomials.iter().map(|e| bound_power(bounds, e)).collect();
    let matrix: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|(_, g)| {
            let mut v = vec![BigInt::zero(); monomials.len()];
            for (e, c) in g.terms() {
                let i = index[e];
                v[i] = c * &scales[i];
            }
            v
        })
        .collect();
    let basis = Basis::new(matrix)?;
    Ok(ShiftLattice {
        monomials,
        bounds: bounds.to_vec(),
        modulus: modulus.clone(),
        basis,
    })
}

impl ShiftLattice {
    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    fn to_poly(&self, row: &[BigInt], vars: &[String]) -> MPoly {
        let mut p = MPoly::zero_with(vars.to_vec());
        for (e, c) in self.monomials.iter().zip(row) {
            if !c.is_zero() {
                let (q, r) = c.div_rem(&bound_power(&self.bounds, e));
                debug_assert!(r.is_zero());
                p.add_term(e.clone(), q);
            }
        }
        p
    }

    /// LLL-reduces and keeps the vectors `v` with `dim * ||v||^2 < modulus^2`.
    pub fn reduce(&self, vars: &[String]) -> Result<Reduced> {
        let (red, report) = lll_reduce(&self.basis, &default_delta())?;
        let limit = &self.modulus * &self.modulus;
        let dim = BigInt::from(self.dim());
        let mut rows: Vec<(BigInt, &Vec<BigInt>)> = red
            .rows()
            .iter()
            .map(|r| (r.iter().map(|v| v * v).sum::<BigInt>(), r))
            .collect();
        rows.sort_by(|a, b| a.0.cmp(&b.0));
        let gated = rows
            .into_iter()
            .filter(|(n, _)| &dim * n < limit)
            .map(|(_, r)| self.to_poly(r, vars))
            .collect();
        Ok(Reduced {
            gated,
            report,
            dim: self.dim(),
        })
    }
}

/// All exponent vectors `e` with `0 <= e_j <= maxes_j`.
pub(crate) fn box_monomials(maxes: &[u32]) -> Vec<Exponents> {
    let mut out = vec![Vec::new()];
    for &m in maxes {
        out = out
            .into_iter()
            .flat_map(|e: Vec<u32>| (0..=m).map(move |d| [e.clone(), vec![d]].concat()))
            .collect();
    }
    out
}

pub(crate) fn coprime_bound(mut b: BigInt, to: &BigInt) -> BigInt {
    if b < BigInt::one() {
        b = BigInt::one();
    }
    while !b.gcd(to).is_one() {
        b += 1u32;
    }
    b
}
