//! Small integer roots of bivariate polynomials and the factoring routines
//! built on them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{self, ceil_root, mod_inverse, round_sqrt};
use crate::error::{domain, Error, Result};
use crate::poly::{integer_roots_univariate, is_irreducible_bilinear, resultant, MPoly};
use crate::shift;

pub const XY: [&str; 2] = ["x", "y"];

#[derive(Clone, Debug)]
pub struct BivariateProblem {
    pub f: MPoly,
    pub x_bound: BigInt,
    pub y_bound: BigInt,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BivariateReport {
    #[serde(skip)]
    pub roots: Vec<(BigInt, BigInt)>,
    pub lattice_dim: usize,
    pub gated_vectors: usize,
    /// A reduced vector gave a nonzero resultant with `f`.
    pub independent: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    /// Shift depth `k`: shifts `x^i y^j` for `0 <= i, j <= k`.
    pub shift_depth: u32,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { shift_depth: 2 }
    }
}

impl BivariateProblem {
    /// `f` must be over exactly two variables; the first is `x`.
    pub fn new(f: MPoly, x_bound: BigInt, y_bound: BigInt) -> Result<Self> {
        if f.arity() != 2 {
            return domain("bivariate problem needs a polynomial in two variables");
        }
        if !x_bound.is_positive() || !y_bound.is_positive() {
            return domain("root bounds must be positive");
        }
        if f.degree_in(0) == 0 || f.degree_in(1) == 0 {
            return domain("both variables must occur");
        }
        Ok(BivariateProblem {
            f,
            x_bound,
            y_bound,
        })
    }

    /// `W = ||f(xX, yY)||_inf`.
    pub fn height(&self) -> BigInt {
        self.f
            .height(&[self.x_bound.clone(), self.y_bound.clone()])
            .expect("bounds are positive")
    }

    /// Either `(XY)^(3d) < W^2` with `d` the largest single-variable degree,
    /// or `(XY)^t < W` with `t` the total degree.
    pub fn bound_condition(&self) -> bool {
        let xy = &self.x_bound * &self.y_bound;
        let w = self.height();
        let d = self.f.max_degree() as usize;
        let t = self.f.total_degree() as usize;
        num_traits::pow(xy.clone(), 3 * d) < &w * &w || num_traits::pow(xy, t) < w
    }
}

/// All integer roots in the closed box `|x| <= X, |y| <= Y` found through one
/// reduced lattice vector that is independent of `f`.
pub fn solve_bivariate(
    problem: &BivariateProblem,
    opts: &SolverOptions,
) -> Result<BivariateReport> {
    if !problem.bound_condition() {
        return Err(Error::Precondition(format!(
            "XY = {} is too large for height {}",
            &problem.x_bound * &problem.y_bound,
            problem.height()
        )));
    }
    let f = &problem.f;
    let (sx, sy) = nonzero_constant_shift(f)?;
    let g = f.translate(&[sx.clone(), sy.clone()])?;
    let p00 = g.constant_term();
    let x_bound = shift::coprime_bound(&problem.x_bound + sx.abs(), &p00);
    let y_bound = shift::coprime_bound(&problem.y_bound + sy.abs(), &p00);
    let bounds = [x_bound.clone(), y_bound.clone()];
    let w = g.height(&bounds)?;
    let a = p00.abs();
    let u = &w + (BigInt::one() - &w).mod_floor(&a);
    let k = opts.shift_depth;
    let modulus = &u * num_traits::pow(&x_bound * &y_bound, k as usize);
    let shifts = shift::box_monomials(&[k, k]);
    let lat = shift::build(&g, &modulus, &shifts, &bounds)?;
    let reduced = lat.reduce(g.vars())?;
    let mut report = BivariateReport {
        lattice_dim: reduced.dim,
        gated_vectors: reduced.gated.len(),
        ..Default::default()
    };
    let (xv, yv) = (g.vars()[0].clone(), g.vars()[1].clone());
    for h in &reduced.gated {
        let r = resultant(&g, h, &yv)?;
        if r.is_zero() {
            continue;
        }
        report.independent = true;
        if r.is_constant() {
            break;
        }
        for x0 in integer_roots_univariate(&r, &x_bound)? {
            let mut fy = g.substitute(&xv, &x0)?;
            if fy.is_zero() {
                fy = h.substitute(&xv, &x0)?;
            }
            if fy.is_zero() || fy.is_constant() {
                continue;
            }
            for y0 in integer_roots_univariate(&fy, &y_bound)? {
                let (ox, oy) = (&x0 + &sx, &y0 + &sy);
                if ox.abs() <= problem.x_bound
                    && oy.abs() <= problem.y_bound
                    && f.evaluate(&[ox.clone(), oy.clone()])?.is_zero()
                {
                    report.roots.push((ox, oy));
                }
            }
        }
        break;
    }
    report.roots.sort();
    report.roots.dedup();
    Ok(report)
}

/// Small translation making the constant term nonzero.
fn nonzero_constant_shift(f: &MPoly) -> Result<(BigInt, BigInt)> {
    for r in 0i64..8 {
        for sx in -r..=r {
            for sy in -r..=r {
                if sx.abs().max(sy.abs()) != r {
                    continue;
                }
                let (a, b) = (BigInt::from(sx), BigInt::from(sy));
                if !f.evaluate(&[a.clone(), b.clone()])?.is_zero() {
                    return Ok((a, b));
                }
            }
        }
    }
    domain("polynomial vanishes on a neighbourhood of the origin")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Factors {
    #[serde(with = "arith::decimal")]
    pub p: BigInt,
    #[serde(with = "arith::decimal")]
    pub q: BigInt,
    #[serde(with = "arith::decimal")]
    pub x0: BigInt,
    #[serde(with = "arith::decimal")]
    pub y0: BigInt,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Recovery {
    Found {
        factors: Factors,
        lattice_calls: u32,
    },
    NotFound {
        lattice_calls: u32,
    },
}

impl Recovery {
    pub fn factors(&self) -> Option<&Factors> {
        match self {
            Recovery::Found { factors, .. } => Some(factors),
            Recovery::NotFound { .. } => None,
        }
    }

    pub fn lattice_calls(&self) -> u32 {
        match self {
            Recovery::Found { lattice_calls, .. } | Recovery::NotFound { lattice_calls } => {
                *lattice_calls
            }
        }
    }
}

fn check_modulus(n: &BigInt) -> Result<()> {
    if n < &BigInt::from(9) || n.is_even() {
        return domain("N must be an odd composite >= 9");
    }
    if arith::is_prime(n) {
        return domain("N is prime");
    }
    Ok(())
}

fn sorted_factors(n: &BigInt, a: BigInt, b: BigInt, x0: BigInt, y0: BigInt) -> Option<Factors> {
    if a <= BigInt::one() || b <= BigInt::one() || &(&a * &b) != n {
        return None;
    }
    let (p, q) = if a <= b { (a, b) } else { (b, a) };
    Some(Factors { p, q, x0, y0 })
}

/// The shifted-center polynomial `(a - x)(b - y) - N`, expanded as
/// `xy - b*x - a*y + (ab - N)`, with `a = round(sqrt(alpha N))` and
/// `b = round(sqrt(beta N))`.
pub fn shifted_center_polynomial(
    n: &BigInt,
    alpha: &BigRational,
    beta: &BigRational,
) -> Result<(MPoly, BigInt, BigInt)> {
    if !alpha.is_positive() || !beta.is_positive() {
        return domain("alpha and beta must be positive");
    }
    if alpha.is_one() || beta.is_one() {
        return domain("alpha = 1 or beta = 1 puts a center at sqrt(N); use the Fermat routines");
    }
    let nn = BigRational::from_integer(n.clone());
    let a = round_sqrt(&(alpha * &nn))?;
    let b = round_sqrt(&(beta * &nn))?;
    Ok((center_poly(n, &a, &b), a, b))
}

fn center_poly(n: &BigInt, a: &BigInt, b: &BigInt) -> MPoly {
    MPoly::from_terms(
        &XY,
        [
            (vec![1, 1], BigInt::one()),
            (vec![1, 0], -b),
            (vec![0, 1], -a),
            (vec![0, 0], a * b - n),
        ],
    )
}

/// Factors `N = pq` with `p` within `X` of `sqrt(alpha N)` and `q` within `Y`
/// of `sqrt(beta N)`.
///
/// The full box is tried first. If the lattice refuses or fails, the range
/// of `p` is split into `2^s` pieces for growing `s`, each with its own
/// centers and a correspondingly smaller box for `q`.
pub fn factor_shifted_center(
    n: &BigInt,
    alpha: &BigRational,
    beta: &BigRational,
    x_bound: &BigInt,
    y_bound: &BigInt,
) -> Result<Recovery> {
    check_modulus(n)?;
    let (f, a, b) = shifted_center_polynomial(n, alpha, beta)?;
    if !is_irreducible_bilinear(&f)? {
        return domain("shifted-center polynomial is reducible");
    }
    let opts = SolverOptions { shift_depth: 1 };
    let mut calls = 0;
    let xb = x_bound + 1u32;
    let yb = y_bound + 1u32;
    if let Ok(problem) = BivariateProblem::new(f, xb.clone(), yb) {
        if let Some(found) = attempt(n, &problem, &a, &b, &opts, &mut calls)? {
            return Ok(Recovery::Found {
                factors: found,
                lattice_calls: calls,
            });
        }
    }
    for s in 1..=MAX_SPLIT_BITS {
        let pieces = 1u64 << s;
        let width = (&xb * 2u32 + pieces - 1u32) / pieces;
        let half = (&width + 1u32) / 2u32;
        for i in 0..pieces {
            // piece i covers p in a - xb + [i*width, (i+1)*width]
            let lo = &a - &xb + &width * i;
            let center = &lo + &half;
            if !center.is_positive() || center <= half {
                continue;
            }
            let bc: BigInt = (n + (&center >> 1)) / &center;
            let q_hi: BigInt = n.div_ceil(&(&center - &half));
            let q_lo: BigInt = n / (&center + &half);
            let spread: BigInt = (&q_hi - &bc).max(&bc - &q_lo);
            let yb_i = spread + 1u32;
            let problem = BivariateProblem::new(center_poly(n, &center, &bc), &half + 1u32, yb_i)?;
            if let Some(found) = attempt(n, &problem, &center, &bc, &opts, &mut calls)? {
                return Ok(Recovery::Found {
                    factors: found,
                    lattice_calls: calls,
                });
            }
        }
    }
    Ok(Recovery::NotFound {
        lattice_calls: calls,
    })
}

const MAX_SPLIT_BITS: u32 = 12;

fn attempt(
    n: &BigInt,
    problem: &BivariateProblem,
    a: &BigInt,
    b: &BigInt,
    opts: &SolverOptions,
    calls: &mut u32,
) -> Result<Option<Factors>> {
    if !problem.bound_condition() {
        return Ok(None);
    }
    *calls += 1;
    let report = solve_bivariate(problem, opts)?;
    for (x0, y0) in report.roots {
        if let Some(f) = sorted_factors(n, a - &x0, b - &y0, x0, y0) {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

/// The bilinear polynomial for a known residue `p_low = p mod 2^t`:
/// `2^t xy + q_low x + p_low y + (p_low q_low - N) / 2^t`.
pub fn low_bits_polynomial(n: &BigInt, p_low: &BigInt, t: u32) -> Result<(MPoly, BigInt)> {
    if t == 0 {
        return domain("at least one known bit is required");
    }
    let m = BigInt::one() << t;
    if p_low.is_negative() || p_low >= &m {
        return domain("p_low must lie in [0, 2^t)");
    }
    let inv = mod_inverse(p_low, &m)
        .ok_or_else(|| Error::Domain("p_low is not invertible modulo 2^t".into()))?;
    let q_low = (n * inv).mod_floor(&m);
    let c0 = p_low * &q_low - n;
    debug_assert!(c0.is_multiple_of(&m));
    let f = MPoly::from_terms(
        &XY,
        [
            (vec![1, 1], m.clone()),
            (vec![1, 0], q_low.clone()),
            (vec![0, 1], p_low.clone()),
            (vec![0, 0], c0 / &m),
        ],
    );
    Ok((f, q_low))
}

/// Factors `N` given the `t` least significant bits of one factor.
pub fn factor_known_low_bits(n: &BigInt, p_low: &BigInt, t: u32) -> Result<Recovery> {
    check_modulus(n)?;
    let (f, q_low) = low_bits_polynomial(n, p_low, t)?;
    // both factors stay below 2 sqrt(N) when their ratio is under 4
    let bound = (arith::isqrt(&(n * 4u32))? >> t) + 1u32;
    let problem = BivariateProblem::new(f, bound.clone(), bound)?;
    let mut calls = 0;
    let m = BigInt::one() << t;
    for k in [1, 2, 3] {
        let opts = SolverOptions { shift_depth: k };
        calls += 1;
        let report = solve_bivariate(&problem, &opts)?;
        for (x0, y0) in report.roots {
            let p = p_low + &m * &x0;
            let q = &q_low + &m * &y0;
            if let Some(found) = sorted_factors(n, p, q, x0, y0) {
                return Ok(Recovery::Found {
                    factors: found,
                    lattice_calls: calls,
                });
            }
        }
    }
    Ok(Recovery::NotFound {
        lattice_calls: calls,
    })
}

/// `gamma^2` for the arithmetic-mean center `gamma = 3 sqrt(2) / 4`.
pub fn mean_center_gamma_squared() -> BigRational {
    BigRational::new(BigInt::from(9), BigInt::from(8))
}

#[derive(Clone, Debug)]
pub struct SixthSetup {
    pub f: MPoly,
    /// Working base `B = ceil(N^(1/6))`.
    pub base: BigInt,
    /// Center `c = round(gamma sqrt(N))`.
    pub center: BigInt,
    pub x0: BigInt,
    pub y0: BigInt,
}

/// Writes `p = c + x B + x0`, `q = c + y B + y0` with `0 <= x0, y0 < B`, derives
/// `y0` from `(c + x0)(c + y0) = N (mod B)` and returns the primitive part of
/// `B^2 xy + B Q x + B P y + (PQ - N)` where `P = c + x0`, `Q = c + y0`.
pub fn sixth_bits_setup(n: &BigInt, x0: &BigInt, gamma_sq: &BigRational) -> Result<SixthSetup> {
    if !gamma_sq.is_positive() {
        return domain("gamma^2 must be positive");
    }
    if gamma_sq.is_one() {
        return domain("gamma^2 - 1 must be nonzero");
    }
    let base = ceil_root(n, 6)?;
    if x0.is_negative() || x0 >= &base {
        return domain("x0 must be a base-B digit");
    }
    let center = round_sqrt(&(gamma_sq * BigRational::from_integer(n.clone())))?;
    let pp = &center + x0;
    let inv = mod_inverse(&pp, &base)
        .ok_or_else(|| Error::Domain("c + x0 shares a factor with the base".into()))?;
    let y0 = ((n * inv) - &center).mod_floor(&base);
    let qq = &center + &y0;
    let f = MPoly::from_terms(
        &XY,
        [
            (vec![1, 1], &base * &base),
            (vec![1, 0], &base * &qq),
            (vec![0, 1], &base * &pp),
            (vec![0, 0], &pp * &qq - n),
        ],
    );
    let f = f.primitive();
    Ok(SixthSetup {
        f,
        base,
        center,
        x0: x0.clone(),
        y0,
    })
}

/// Factors `N` from the low base-`B` digit of `p - c`. Bounds default to
/// `X = Y = ceil(N^(1/3))`; the solver refuses when the box is too large for
/// the height, which is reported as an error.
pub fn factor_known_bits_sixth(
    n: &BigInt,
    x0: &BigInt,
    gamma_sq: &BigRational,
    bounds: Option<(BigInt, BigInt)>,
) -> Result<Recovery> {
    check_modulus(n)?;
    let setup = sixth_bits_setup(n, x0, gamma_sq)?;
    let (xb, yb) = match bounds {
        Some(b) => b,
        None => {
            let c = ceil_root(n, 3)?;
            (c.clone(), c)
        }
    };
    let problem = BivariateProblem::new(setup.f.clone(), xb, yb)?;
    let report = solve_bivariate(&problem, &SolverOptions::default())?;
    for (x, y) in report.roots {
        let p = &setup.center + &x * &setup.base + &setup.x0;
        let q = &setup.center + &y * &setup.base + &setup.y0;
        if let Some(found) = sorted_factors(n, p, q, x, y) {
            return Ok(Recovery::Found {
                factors: found,
                lattice_calls: 1,
            });
        }
    }
    Ok(Recovery::NotFound { lattice_calls: 1 })
}
