use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{ejm_bound_check, TrivariateInstance};
use crate::error::{Error, Result};
use crate::lattice::ReductionReport;
use crate::poly::{Exponents, MPoly};
use crate::shift;

#[derive(Clone, Debug)]
pub struct EjmReduction {
    pub f1: MPoly,
    pub f2: MPoly,
    /// Further gated vectors beyond the two shortest.
    pub extra: Vec<MPoly>,
    pub lattice_dim: usize,
    pub report: ReductionReport,
    /// Bounds after making them coprime to the constant term.
    pub bounds: [BigInt; 3],
}

#[derive(Clone, Debug)]
pub enum EjmOutcome {
    Reduced(EjmReduction),
    BoundInfeasible,
    NoShortVectors {
        lattice_dim: usize,
        report: Option<ReductionReport>,
    },
}

/// Shift monomials: the monomials of `f^(m-1)` times `y^j`, `0 <= j <= t`
/// with `t = round(tau * m)`.
fn shift_set(f: &MPoly, m: u32, tau: &BigRational) -> Result<Vec<Exponents>> {
    let t = (tau * BigRational::from_integer(BigInt::from(m)))
        .round()
        .to_integer()
        .to_u32()
        .filter(|&t| t <= 8)
        .ok_or_else(|| Error::Resource("shift depth above 8".into()))?;
    let base: BTreeSet<Exponents> = f.pow(m - 1).terms().map(|(e, _)| e.clone()).collect();
    let mut out = BTreeSet::new();
    for e in &base {
        for j in 0..=t {
            let mut s = e.clone();
            s[1] += j;
            out.insert(s);
        }
    }
    Ok(out.into_iter().collect())
}

/// Reduces the shift lattice of `f0` with multiplicity `m >= 1` and returns
/// the two shortest vectors that vanish at every root of `f0` in the box.
///
/// Refuses without building anything when the height inequality fails.
pub fn ejm_reduce(inst: &TrivariateInstance, m: u32) -> Result<EjmOutcome> {
    if m == 0 {
        return Err(Error::Domain("multiplicity must be at least 1".into()));
    }
    let w = inst.height();
    if w < BigInt::from(2)
        || !ejm_bound_check(
            &inst.x_bound,
            &inst.y_bound,
            &inst.z_bound,
            &w,
            &inst.tau,
            &inst.eps,
        )?
    {
        return Ok(EjmOutcome::BoundInfeasible);
    }
    let c4 = inst.f0.constant_term();
    if c4.is_zero() {
        return Ok(EjmOutcome::NoShortVectors {
            lattice_dim: 0,
            report: None,
        });
    }
    let a0 = c4.abs();
    let bounds: Vec<BigInt> = inst
        .bounds()
        .into_iter()
        .map(|b| shift::coprime_bound(b, &a0))
        .collect();
    let f = &inst.f0;
    let shifts = shift_set(f, m, &inst.tau)?;
    let w = f.height(&bounds)?;
    // W' = 1 (mod c4), so the modulus stays coprime to the constant term
    let w1: BigInt = &w + (BigInt::from(1) - &w).mod_floor(&a0);
    let l: Vec<u32> = (0..3)
        .map(|j| shifts.iter().map(|s| s[j]).max().unwrap_or(0))
        .collect();
    let modulus = bounds.iter().zip(&l).fold(w1, |acc, (b, &e)| {
        acc * num_traits::pow(b.clone(), e as usize)
    });
    let lattice = shift::build(f, &modulus, &shifts, &bounds)?;
    let reduced = lattice.reduce(f.vars())?;
    let mut gated = reduced.gated.into_iter();
    match (gated.next(), gated.next()) {
        (Some(f1), Some(f2)) => Ok(EjmOutcome::Reduced(EjmReduction {
            f1,
            f2,
            extra: gated.collect(),
            lattice_dim: reduced.dim,
            report: reduced.report,
            bounds: [bounds[0].clone(), bounds[1].clone(), bounds[2].clone()],
        })),
        _ => Ok(EjmOutcome::NoShortVectors {
            lattice_dim: reduced.dim,
            report: Some(reduced.report),
        }),
    }
}
