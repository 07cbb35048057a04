use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::ejm::{ejm_reduce, EjmOutcome};
pub use super::system::SolvePath;
use super::system::{independence_diagnostics, solve_system, IndependenceReport, SolveOutcome};
use super::{build_f0, ejm_bound_check, paper_bounds, parameter_feasibility, TrivariateInstance};
use crate::arith::{self, isqrt};
use crate::error::{domain, Result};
use crate::poly::{not_multiple_certificate, MPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// Step 1.1 constants as printed, exponents read as decimals.
    PaperExact,
    /// Same centers with `m0 = 1682 N^2 + 1`.
    Scaled,
}

#[derive(Clone, Debug)]
pub struct AlgorithmConfig {
    pub preset: Preset,
    pub p0: Option<BigInt>,
    pub q0: Option<BigInt>,
    pub m0: Option<BigInt>,
    pub r0: Option<BigInt>,
    pub tau: BigRational,
    pub beta: BigRational,
    pub eps: BigRational,
    /// Defaults to `X = Y = ceil(sqrt N)`, `Z = 3 ceil(sqrt N)`.
    pub bounds: Option<[BigInt; 3]>,
    pub multiplicity: u32,
    /// Add `f3` with `(m1, r1)` next to `(m0, r0)`.
    pub with_f3: bool,
}

impl Default for AlgorithmConfig {
    fn default() -> Self {
        AlgorithmConfig {
            preset: Preset::PaperExact,
            p0: None,
            q0: None,
            m0: None,
            r0: None,
            tau: BigRational::zero(),
            beta: BigRational::one(),
            eps: BigRational::new(BigInt::one(), BigInt::from(100)),
            bounds: None,
            multiplicity: 1,
            with_f3: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    FactorsFound,
    DependentPolynomials,
    NoShortVectors,
    BoundInfeasible,
    /// The system was solved but no root in the box gives the factors.
    NoValidRoot,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub poly: String,
    pub against: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentRecord {
    #[serde(with = "arith::decimal")]
    pub n: BigInt,
    #[serde(with = "arith::decimal")]
    pub p0: BigInt,
    #[serde(with = "arith::decimal")]
    pub q0: BigInt,
    #[serde(with = "arith::decimal")]
    pub m0: BigInt,
    #[serde(with = "arith::decimal")]
    pub r0: BigInt,
    #[serde(with = "arith::rational_string")]
    pub tau: BigRational,
    #[serde(with = "arith::rational_string")]
    pub beta: BigRational,
    #[serde(with = "arith::rational_string")]
    pub eps: BigRational,
    pub preset: Preset,
    #[serde(with = "arith::decimal::vec")]
    pub bounds: Vec<BigInt>,
    #[serde(with = "arith::decimal")]
    pub height: BigInt,
    pub feasible: bool,
    pub bound_check: Option<bool>,
    pub lattice_dim: usize,
    /// Euclidean norms of the reduced vectors (floored), ascending.
    #[serde(with = "arith::decimal::vec")]
    pub norms: Vec<BigInt>,
    pub gated: usize,
    pub thm10_ok: Vec<bool>,
    pub diagnostics: Option<IndependenceReport>,
    pub certificates: Vec<Certificate>,
    pub solve_path: Option<SolvePath>,
    pub outcome: Outcome,
    #[serde(with = "arith::decimal::option")]
    pub p: Option<BigInt>,
    #[serde(with = "arith::decimal::option")]
    pub q: Option<BigInt>,
    #[serde(with = "arith::decimal::option")]
    pub m1: Option<BigInt>,
    #[serde(with = "arith::decimal::option")]
    pub r1: Option<BigInt>,
    pub seed: Option<u64>,
    pub wall_ms: u64,
}

/// `c * N^e` floored, through logarithms in double precision.
fn approx_power(n: &BigInt, c: f64, e: f64) -> BigInt {
    let bits = n.bits();
    let shift = bits.saturating_sub(60);
    let top = (n >> shift).to_f64().expect("fits");
    let ln = top.ln() + shift as f64 * std::f64::consts::LN_2;
    BigInt::from_f64((c.ln() + e * ln).exp().floor()).unwrap_or_default()
}

/// Default `(p0, q0, m0, r0)`: `p0 = 2[.492343 N^.378549] + 1`,
/// `q0 = 2[.649287 N^.487532] + 1`, `m0 = 2[841.013799 N^2] + 1` (or
/// `1682 N^2 + 1` scaled) and `r0 = 1`.
pub fn algorithm_one_parameters(n: &BigInt, preset: Preset) -> (BigInt, BigInt, BigInt, BigInt) {
    let p0 = approx_power(n, 0.492343, 0.378549) * 2u32 + 1u32;
    let q0 = approx_power(n, 0.649287, 0.487532) * 2u32 + 1u32;
    let n2 = n * n;
    let m0 = match preset {
        Preset::PaperExact => (n2 * 841_013_799u64 / 1_000_000u64) * 2u32 + 1u32,
        Preset::Scaled => n2 * 1682u32 + 1u32,
    };
    (p0, q0, m0, BigInt::one())
}

/// `m1 = m0 + 2` and `r1` stepped from `r0` until both `gcd(m1, r1)` and
/// `gcd(m0, m1, r0, r1)` are 1.
fn second_pair(m0: &BigInt, r0: &BigInt) -> (BigInt, BigInt) {
    let m1: BigInt = m0 + 2u32;
    let mut r1: BigInt = if r0.is_even() { r0 + 1u32 } else { r0 + 2u32 };
    loop {
        let g = m0.gcd(&m1).gcd(r0).gcd(&r1);
        if !r1.is_zero() && g.is_one() && m1.gcd(&r1).is_one() {
            return (m1, r1);
        }
        r1 += 1u32;
    }
}

/// Runs the trivariate factoring algorithm once. Only invalid parameters are errors; every
/// algorithmic outcome is a record, and factors are reported only after
/// `p q = N` is checked.
pub fn run_algorithm_one(n: &BigInt, config: &AlgorithmConfig) -> Result<ExperimentRecord> {
    let start = Instant::now();
    if n < &BigInt::from(9) || n.is_even() {
        return domain("N must be an odd composite");
    }
    let (dp0, dq0, dm0, dr0) = algorithm_one_parameters(n, config.preset);
    let p0 = config.p0.clone().unwrap_or(dp0);
    let q0 = config.q0.clone().unwrap_or(dq0);
    let m0 = config.m0.clone().unwrap_or(dm0);
    let r0 = config.r0.clone().unwrap_or(dr0);
    let bounds = match &config.bounds {
        Some(b) => b.clone(),
        None => paper_bounds(n)?,
    };
    let inst = TrivariateInstance::new(
        n.clone(),
        p0,
        q0,
        m0,
        r0,
        bounds,
        config.tau.clone(),
        config.beta.clone(),
        config.eps.clone(),
    )?;
    let feasible = parameter_feasibility(&inst.beta, &inst.tau, &inst.eps);
    let height = inst.height();
    let mut rec = ExperimentRecord {
        n: n.clone(),
        p0: inst.p0.clone(),
        q0: inst.q0.clone(),
        m0: inst.m0.clone(),
        r0: inst.r0.clone(),
        tau: inst.tau.clone(),
        beta: inst.beta.clone(),
        eps: inst.eps.clone(),
        preset: config.preset,
        bounds: inst.bounds().to_vec(),
        height: height.clone(),
        feasible,
        bound_check: None,
        lattice_dim: 0,
        norms: Vec::new(),
        gated: 0,
        thm10_ok: Vec::new(),
        diagnostics: None,
        certificates: Vec::new(),
        solve_path: None,
        outcome: Outcome::BoundInfeasible,
        p: None,
        q: None,
        m1: None,
        r1: None,
        seed: None,
        wall_ms: 0,
    };
    let finish = |mut rec: ExperimentRecord| {
        rec.wall_ms = start.elapsed().as_millis() as u64;
        Ok(rec)
    };
    if !feasible {
        return finish(rec);
    }
    if height >= BigInt::from(2) && inst.eps.is_positive() {
        rec.bound_check = Some(ejm_bound_check(
            &inst.x_bound,
            &inst.y_bound,
            &inst.z_bound,
            &height,
            &inst.tau,
            &inst.eps,
        )?);
    }
    let red = match ejm_reduce(&inst, config.multiplicity)? {
        EjmOutcome::BoundInfeasible => return finish(rec),
        EjmOutcome::NoShortVectors {
            lattice_dim,
            report,
        } => {
            rec.lattice_dim = lattice_dim;
            if let Some(r) = report {
                rec.norms = r
                    .vector_norms_squared
                    .iter()
                    .map(|s| isqrt(s).expect("nonnegative"))
                    .collect();
                rec.thm10_ok = r.thm10_bound_ok.clone();
            }
            rec.outcome = Outcome::NoShortVectors;
            return finish(rec);
        }
        EjmOutcome::Reduced(red) => red,
    };
    rec.lattice_dim = red.lattice_dim;
    rec.norms = red
        .report
        .vector_norms_squared
        .iter()
        .map(|s| isqrt(s).expect("nonnegative"))
        .collect();
    rec.thm10_ok = red.report.thm10_bound_ok.clone();
    rec.gated = 2 + red.extra.len();

    let mut system: Vec<MPoly> = vec![inst.f0.clone(), red.f1.clone(), red.f2.clone()];
    let mut reference = ("f0", inst.f0.clone());
    if config.with_f3 {
        let (m1, r1) = second_pair(&inst.m0, &inst.r0);
        let f3 = build_f0(n, &inst.p0, &inst.q0, &m1, &r1)?;
        rec.m1 = Some(m1);
        rec.r1 = Some(r1);
        system.push(f3.clone());
        reference = ("f3", f3);
    }
    rec.diagnostics = Some(independence_diagnostics(&system)?);
    for (name, f) in [("f1", &red.f1), ("f2", &red.f2)] {
        rec.certificates.push(Certificate {
            poly: name.into(),
            against: reference.0.into(),
            holds: not_multiple_certificate(f, &reference.1)?,
        });
    }

    let box_bounds = inst.bounds();
    let mut outcome = solve_system(&system, &box_bounds)?;
    if outcome == SolveOutcome::Dependent && !red.extra.is_empty() {
        system.extend(red.extra.iter().cloned());
        outcome = solve_system(&system, &box_bounds)?;
    }
    match outcome {
        SolveOutcome::Dependent => rec.outcome = Outcome::DependentPolynomials,
        SolveOutcome::Roots { roots, path } => {
            rec.solve_path = Some(path);
            rec.outcome = Outcome::NoValidRoot;
            for r in roots {
                let p = &inst.p0 + &r[0];
                let q = &inst.q0 + &r[1];
                let in_box = r[0].abs() <= inst.x_bound && r[1].abs() <= inst.y_bound;
                if in_box && p > BigInt::one() && q > BigInt::one() && &(&p * &q) == n {
                    rec.p = Some(p);
                    rec.q = Some(q);
                    rec.outcome = Outcome::FactorsFound;
                    break;
                }
            }
        }
    }
    finish(rec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_one_parameters() {
        let n: BigInt = BigInt::from(193_933_249u64);
        let (p0, q0, m0, r0) = algorithm_one_parameters(&n, Preset::PaperExact);
        assert!(p0.is_odd() && q0.is_odd() && m0.is_odd());
        assert_eq!(r0, BigInt::one());
        // .492343 * N^.378549 = 688.7..., .649287 * N^.487532 = 7555.6...
        let nf = 193_933_249f64;
        assert_eq!(
            p0,
            BigInt::from(2 * (0.492343 * nf.powf(0.378549)).floor() as i64 + 1)
        );
        assert_eq!(
            q0,
            BigInt::from(2 * (0.649287 * nf.powf(0.487532)).floor() as i64 + 1)
        );
        assert!(&m0 * 1000u32 > &n * &n * 1_682_027u32);
        let (_, _, s0, _) = algorithm_one_parameters(&n, Preset::Scaled);
        assert_eq!(s0, &n * &n * 1682u32 + 1u32);
    }

    #[test]
    fn second_pair_gcd() {
        for (m0, r0) in [(7, 1), (9, 2), (15, 4), (21, 3)] {
            let (m1, r1) = second_pair(&BigInt::from(m0), &BigInt::from(r0));
            assert_eq!(m1, BigInt::from(m0 + 2));
            assert!(m1.gcd(&r1).is_one());
        }
    }
}
