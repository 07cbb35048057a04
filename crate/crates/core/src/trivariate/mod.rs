//! The trivariate construction: `f0(x, y, z)` built from approximations
//! `p0, q0` of the factors, a shift-polynomial lattice for the shape
//! `c0 xy + c1 x + c2 y + c3 z + c4`, resultant diagnostics and elimination,
//! and the end-to-end experiment record.
//!
//! The root of `f0` is `(p - p0, q - q0, p + q)`.

mod ejm;
mod experiment;
mod system;

pub use ejm::{ejm_reduce, EjmOutcome, EjmReduction};
pub use experiment::{
    algorithm_one_parameters, run_algorithm_one, AlgorithmConfig, Certificate, ExperimentRecord,
    Outcome, Preset, SolvePath,
};
pub use system::{
    build_u_family, independence_diagnostics, solve_system, FirstLevel, IndependenceReport,
    ResultantStatus, SecondLevel, SolveOutcome,
};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::ceil_sqrt;
use crate::error::{domain, Error, Result};
use crate::poly::MPoly;

pub const XYZ: [&str; 3] = ["x", "y", "z"];

#[derive(Clone, Debug)]
pub struct TrivariateInstance {
    pub n: BigInt,
    pub p0: BigInt,
    pub q0: BigInt,
    pub m0: BigInt,
    pub r0: BigInt,
    pub x_bound: BigInt,
    pub y_bound: BigInt,
    pub z_bound: BigInt,
    pub tau: BigRational,
    pub beta: BigRational,
    pub eps: BigRational,
    pub f0: MPoly,
}

/// `f0 = m0 xy + (r0 + m0 q0) x + (r0 + m0 p0) y - r0 z + m0 p0 q0 + r0 (p0 + q0) - m0 N`.
pub fn build_f0(n: &BigInt, p0: &BigInt, q0: &BigInt, m0: &BigInt, r0: &BigInt) -> Result<MPoly> {
    if r0.is_zero() {
        return domain("r0 must be nonzero");
    }
    if !m0.gcd(r0).is_one() {
        return domain("gcd(m0, r0) must be 1");
    }
    Ok(MPoly::from_terms(
        &XYZ,
        [
            (vec![1, 1, 0], m0.clone()),
            (vec![1, 0, 0], r0 + m0 * q0),
            (vec![0, 1, 0], r0 + m0 * p0),
            (vec![0, 0, 1], -r0),
            (vec![0, 0, 0], m0 * p0 * q0 + r0 * (p0 + q0) - m0 * n),
        ],
    ))
}

/// `X = Y = ceil(sqrt N)`, `Z = 3 ceil(sqrt N)`.
pub fn paper_bounds(n: &BigInt) -> Result<[BigInt; 3]> {
    let s = ceil_sqrt(n)?;
    Ok([s.clone(), s.clone(), s * 3u32])
}

impl TrivariateInstance {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        n: BigInt,
        p0: BigInt,
        q0: BigInt,
        m0: BigInt,
        r0: BigInt,
        bounds: [BigInt; 3],
        tau: BigRational,
        beta: BigRational,
        eps: BigRational,
    ) -> Result<Self> {
        if !n.is_positive() {
            return domain("N must be positive");
        }
        if bounds.iter().any(|b| !b.is_positive()) {
            return domain("root bounds must be positive");
        }
        let f0 = build_f0(&n, &p0, &q0, &m0, &r0)?;
        let [x_bound, y_bound, z_bound] = bounds;
        Ok(TrivariateInstance {
            n,
            p0,
            q0,
            m0,
            r0,
            x_bound,
            y_bound,
            z_bound,
            tau,
            beta,
            eps,
            f0,
        })
    }

    pub fn bounds(&self) -> [BigInt; 3] {
        [
            self.x_bound.clone(),
            self.y_bound.clone(),
            self.z_bound.clone(),
        ]
    }

    /// `W = ||f0(xX, yY, zZ)||_inf` at the instance bounds.
    pub fn height(&self) -> BigInt {
        self.f0.height(&self.bounds()).expect("bounds are positive")
    }

    /// `||f0(xX, yY, zZ)||_inf >= |m0| N` at `X = Y = sqrt N`, `Z = 3 sqrt N`.
    pub fn paper_height_floor(&self) -> Result<bool> {
        let w = self.f0.height(&paper_bounds(&self.n)?)?;
        Ok(w >= self.m0.abs() * &self.n)
    }
}

/// `(3 tau^2 / 2 + 2 eps) / (2 + 3 tau - eps) < beta`, false when the
/// denominator is not positive.
pub fn parameter_feasibility(beta: &BigRational, tau: &BigRational, eps: &BigRational) -> bool {
    let r = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
    let den = r(2, 1) + r(3, 1) * tau - eps;
    if !den.is_positive() {
        return false;
    }
    let num = r(3, 2) * tau * tau + r(2, 1) * eps;
    num / den < *beta
}

/// `X^(3+3t) Y^(3+6t+3t^2) Z^(2+3t) < W^(2+3t-e)`, compared exactly after
/// raising both sides to the common denominator of the exponents.
pub fn ejm_bound_check(
    x: &BigInt,
    y: &BigInt,
    z: &BigInt,
    w: &BigInt,
    tau: &BigRational,
    eps: &BigRational,
) -> Result<bool> {
    if [x, y, z].iter().any(|b| *b < &BigInt::one()) {
        return domain("bounds must be at least 1");
    }
    if w < &BigInt::from(2) {
        return domain("height must be at least 2");
    }
    if tau.is_negative() || !eps.is_positive() {
        return domain("need tau >= 0 and eps > 0");
    }
    let r = |a: i64| BigRational::from_integer(BigInt::from(a));
    let exps = [
        r(3) + r(3) * tau,
        r(3) + r(6) * tau + r(3) * tau * tau,
        r(2) + r(3) * tau,
        r(2) + r(3) * tau - eps,
    ];
    let den = exps.iter().fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
    let ints: Vec<BigInt> = exps
        .iter()
        .map(|e| (e * BigRational::from_integer(den.clone())).to_integer())
        .collect();
    let bases = [x, y, z, w];
    let mut bits = 0u128;
    for (b, e) in bases.iter().zip(&ints) {
        let e =
            u128::try_from(e.abs()).map_err(|_| Error::Resource("exponent too large".into()))?;
        bits = bits.saturating_add(e.saturating_mul(b.bits() as u128));
    }
    if bits > 1 << 28 {
        return Err(Error::Resource(
            "bound check needs more than 2^28 bits".into(),
        ));
    }
    let pow = |b: &BigInt, e: &BigInt| -> BigInt {
        let e: usize = e.try_into().expect("checked above");
        num_traits::pow(b.clone(), e)
    };
    let lhs = pow(x, &ints[0]) * pow(y, &ints[1]) * pow(z, &ints[2]);
    if !ints[3].is_positive() {
        // right side is at most 1 and the left side at least 1
        return Ok(false);
    }
    Ok(lhs < pow(w, &ints[3]))
}
