use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{domain, Result};
use crate::poly::{integer_roots_univariate, resultant, MPoly};
use crate::smallroots::{solve_bivariate, BivariateProblem, SolverOptions};

pub const UVARS: [&str; 3] = ["X", "Y", "z"];

/// `u0 .. u8` over `(X, Y, z)`, all vanishing at `(p, q, p + q)` when `N = pq`.
pub fn build_u_family(n: &BigInt) -> Vec<MPoly> {
    let v = |name: &str| MPoly::var(&UVARS, name);
    let k = |c: &BigInt| MPoly::constant(&UVARS, c.clone());
    let (x, y, z) = (v("X"), v("Y"), v("z"));
    let nn = k(n);
    let n2 = k(&(n * n));
    // z^2 - 2N, z^3 - 3Nz, z^4 - 4N z^2 + 2N^2
    let s2 = &z.pow(2) - &(&nn * &k(&BigInt::from(2)));
    let s3 = &z.pow(3) - &(&(&nn * &k(&BigInt::from(3))) * &z);
    let s4 =
        &(&z.pow(4) - &(&(&nn * &k(&BigInt::from(4))) * &z.pow(2))) + &(&n2 * &k(&BigInt::from(2)));
    let pair = |w: &MPoly, s: &MPoly, e: u32| -> MPoly {
        let ne = k(&num_traits::pow(n.clone(), e as usize));
        &(&w.pow(2 * e) - &(s * &w.pow(e))) + &ne
    };
    vec![
        &(&x + &y) - &z,
        pair(&x, &z, 1),
        pair(&y, &z, 1),
        pair(&x, &s2, 2),
        pair(&y, &s2, 2),
        pair(&x, &s3, 3),
        pair(&y, &s3, 3),
        pair(&x, &s4, 4),
        pair(&y, &s4, 4),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResultantStatus {
    Zero,
    Nonzero,
    /// Both inputs are free of the variable.
    Undefined,
}

#[derive(Clone, Debug, Serialize)]
pub struct FirstLevel {
    pub i: usize,
    pub j: usize,
    pub var: String,
    pub status: ResultantStatus,
}

#[derive(Clone, Debug, Serialize)]
pub struct SecondLevel {
    /// Indices into `first_level` of the two inner resultants.
    pub a: usize,
    pub b: usize,
    pub var: String,
    pub status: ResultantStatus,
    /// The two inner resultants agree up to a constant factor.
    pub identical_inputs: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct IndependenceReport {
    pub first_level: Vec<FirstLevel>,
    pub second_level: Vec<SecondLevel>,
    pub first_level_vanishing: bool,
    pub second_level_vanishing: bool,
    pub structural_dependence: bool,
}

/// Equal up to a nonzero rational factor.
fn proportional(a: &MPoly, b: &MPoly) -> bool {
    let (pa, pb) = (a.primitive(), b.primitive());
    pa == pb || pa == -&pb
}

fn status(r: &Result<MPoly>) -> ResultantStatus {
    match r {
        Ok(p) if p.is_zero() => ResultantStatus::Zero,
        Ok(_) => ResultantStatus::Nonzero,
        Err(_) => ResultantStatus::Undefined,
    }
}

/// First-level resultants of every pair in every variable, and second-level
/// resultants of every pair of nonzero first-level resultants taken in the
/// same variable.
pub fn independence_diagnostics(polys: &[MPoly]) -> Result<IndependenceReport> {
    if !(2..=4).contains(&polys.len()) {
        return domain("diagnostics take 2 to 4 polynomials");
    }
    let vars = polys[0].vars().to_vec();
    if vars.len() != 3 || polys.iter().any(|p| p.vars() != vars.as_slice()) {
        return domain("diagnostics need trivariate polynomials over the same variables");
    }
    if polys.iter().any(MPoly::is_zero) {
        return domain("diagnostics of the zero polynomial");
    }
    let mut first = Vec::new();
    let mut first_polys: Vec<Option<MPoly>> = Vec::new();
    for v in &vars {
        for i in 0..polys.len() {
            for j in i + 1..polys.len() {
                let r = resultant(&polys[i], &polys[j], v);
                first.push(FirstLevel {
                    i,
                    j,
                    var: v.clone(),
                    status: status(&r),
                });
                first_polys.push(r.ok().filter(|p| !p.is_zero()));
            }
        }
    }
    let mut second = Vec::new();
    for a in 0..first.len() {
        for b in a + 1..first.len() {
            if first[a].var != first[b].var {
                continue;
            }
            let (Some(ra), Some(rb)) = (&first_polys[a], &first_polys[b]) else {
                continue;
            };
            let identical = proportional(ra, rb);
            for w in vars.iter().filter(|w| **w != first[a].var) {
                let r = resultant(ra, rb, w);
                second.push(SecondLevel {
                    a,
                    b,
                    var: w.clone(),
                    status: status(&r),
                    identical_inputs: identical,
                });
            }
        }
    }
    Ok(IndependenceReport {
        first_level_vanishing: first.iter().any(|f| f.status == ResultantStatus::Zero),
        second_level_vanishing: second.iter().any(|s| s.status == ResultantStatus::Zero),
        structural_dependence: second.iter().any(|s| s.identical_inputs),
        first_level: first,
        second_level: second,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolvePath {
    Elimination,
    /// Elimination left one bivariate relation, solved by the lattice
    /// bivariate solver.
    BivariateLattice,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    /// Every common root in the box, each checked on all inputs.
    Roots {
        roots: Vec<Vec<BigInt>>,
        path: SolvePath,
    },
    Dependent,
}

/// Pairs used per elimination step.
const MAX_PAIR_POLYS: usize = 4;

fn dedup(polys: Vec<MPoly>) -> Vec<MPoly> {
    let mut out: Vec<MPoly> = Vec::new();
    for p in polys {
        if !p.is_zero() && !out.iter().any(|q| proportional(q, &p)) {
            out.push(p);
        }
    }
    out.sort_by_key(|p| (p.total_degree(), p.num_terms()));
    out
}

fn roots_in(p: &MPoly, bound: &BigInt) -> Result<Vec<BigInt>> {
    integer_roots_univariate(p, bound)
}

/// `None` when the system does not cut the box down to finitely many points
/// along any elimination order.
fn solve_rec(polys: Vec<MPoly>, bounds: &[BigInt]) -> Result<Option<Vec<Vec<BigInt>>>> {
    let polys = dedup(polys);
    if polys.iter().any(MPoly::is_constant) {
        return Ok(Some(Vec::new()));
    }
    let Some(first) = polys.first() else {
        return Ok(if bounds.is_empty() {
            Some(vec![Vec::new()])
        } else {
            None
        });
    };
    let vars = first.vars().to_vec();
    if let Some(p) = polys.iter().find(|p| p.active_vars().len() == 1) {
        let v = p.active_vars().remove(0);
        let idx = p.var_index(&v).expect("active variable");
        let rest: Vec<BigInt> = bounds
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != idx)
            .map(|(_, b)| b.clone())
            .collect();
        let mut out = Vec::new();
        for r in roots_in(p, &bounds[idx])? {
            let sub = polys
                .iter()
                .map(|q| q.substitute(&v, &r))
                .collect::<Result<Vec<_>>>()?;
            let Some(partial) = solve_rec(sub, &rest)? else {
                return Ok(None);
            };
            for mut s in partial {
                s.insert(idx, r.clone());
                out.push(s);
            }
        }
        return Ok(Some(out));
    }
    // eliminate the last variable first
    for idx in (0..vars.len()).rev() {
        let v = &vars[idx];
        let (with, without): (Vec<MPoly>, Vec<MPoly>) =
            polys.iter().cloned().partition(|p| p.degree_in(idx) > 0);
        let mut next: Vec<MPoly> = without
            .iter()
            .map(|p| p.substitute(v, &BigInt::zero()))
            .collect::<Result<_>>()?;
        let pool = &with[..with.len().min(MAX_PAIR_POLYS)];
        for i in 0..pool.len() {
            for j in i + 1..pool.len() {
                next.push(resultant(&pool[i], &pool[j], v)?);
            }
        }
        let next = dedup(next);
        if next.is_empty() {
            continue;
        }
        let rest: Vec<BigInt> = bounds
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != idx)
            .map(|(_, b)| b.clone())
            .collect();
        let Some(partials) = solve_rec(next, &rest)? else {
            continue;
        };
        let mut out = Vec::new();
        let mut collapsed = false;
        for partial in partials {
            let mut point_vars = Vec::new();
            for (k, name) in vars.iter().enumerate() {
                if k != idx {
                    point_vars.push(name);
                }
            }
            let mut found_poly = false;
            for p in &with {
                let mut q = p.clone();
                for (name, val) in point_vars.iter().zip(&partial) {
                    q = q.substitute(name, val)?;
                }
                if q.is_zero() {
                    continue;
                }
                found_poly = true;
                for r in roots_in(&q, &bounds[idx])? {
                    let mut s = partial.clone();
                    s.insert(idx, r);
                    out.push(s);
                }
                break;
            }
            if !found_poly && !with.is_empty() {
                collapsed = true;
                break;
            }
        }
        if collapsed {
            continue;
        }
        return Ok(Some(out));
    }
    Ok(None)
}

fn verified(
    polys: &[MPoly],
    bounds: &[BigInt],
    cands: Vec<Vec<BigInt>>,
) -> Result<Vec<Vec<BigInt>>> {
    let mut out = Vec::new();
    for c in cands {
        if c.iter().zip(bounds).any(|(v, b)| v.abs() > *b) {
            continue;
        }
        let mut ok = true;
        for p in polys {
            if !p.evaluate(&c)?.is_zero() {
                ok = false;
                break;
            }
        }
        if ok && !out.contains(&c) {
            out.push(c);
        }
    }
    out.sort();
    Ok(out)
}

/// Solves a remaining bivariate relation with the lattice solver, then
/// recovers the third coordinate from the inputs.
fn bivariate_fallback(polys: &[MPoly], bounds: &[BigInt]) -> Result<Option<Vec<Vec<BigInt>>>> {
    let vars = polys[0].vars().to_vec();
    for idx in (0..vars.len()).rev() {
        let v = &vars[idx];
        let (with, without): (Vec<MPoly>, Vec<MPoly>) =
            polys.iter().cloned().partition(|p| p.degree_in(idx) > 0);
        let mut rel: Vec<MPoly> = without;
        let pool = &with[..with.len().min(MAX_PAIR_POLYS)];
        for i in 0..pool.len() {
            for j in i + 1..pool.len() {
                rel.push(resultant(&pool[i], &pool[j], v)?.embed(&vars)?);
            }
        }
        for g in dedup(rel) {
            let active = g.active_vars();
            if active.len() != 2 || active.contains(v) {
                continue;
            }
            let g2 = g.trim_vars();
            let idx2: Vec<usize> = g2
                .vars()
                .iter()
                .map(|n| vars.iter().position(|w| w == n).expect("subset"))
                .collect();
            let Ok(problem) = BivariateProblem::new(
                g2.primitive(),
                bounds[idx2[0]].clone(),
                bounds[idx2[1]].clone(),
            ) else {
                continue;
            };
            if !problem.bound_condition() {
                continue;
            }
            let report = solve_bivariate(&problem, &SolverOptions::default())?;
            let mut out = Vec::new();
            for (a, b) in report.roots {
                for p in &with {
                    let q = p
                        .substitute(&vars[idx2[1]], &b)?
                        .substitute(&vars[idx2[0]], &a)?;
                    if q.is_zero() {
                        continue;
                    }
                    for r in roots_in(&q, &bounds[idx])? {
                        let mut s = vec![BigInt::zero(); 3];
                        s[idx2[0]] = a.clone();
                        s[idx2[1]] = b.clone();
                        s[idx] = r;
                        out.push(s);
                    }
                    break;
                }
            }
            let out = verified(polys, bounds, out)?;
            if !out.is_empty() {
                return Ok(Some(out));
            }
        }
    }
    Ok(None)
}

/// Common integer roots within `|x_i| <= bounds_i` of at least three
/// polynomials over the same three variables. Eliminates by pairwise
/// resultants, last variable first, trying the other orders when one
/// collapses; every returned point is checked on every input.
pub fn solve_system(polys: &[MPoly], bounds: &[BigInt]) -> Result<SolveOutcome> {
    if polys.len() < 3 {
        return domain("solve_system needs at least three polynomials");
    }
    let vars = polys[0].vars().to_vec();
    if vars.len() != 3 || bounds.len() != 3 || polys.iter().any(|p| p.vars() != vars.as_slice()) {
        return domain(
            "solve_system needs polynomials over the same three variables and three bounds",
        );
    }
    if bounds.iter().any(|b| b.is_negative()) {
        return domain("bounds must be nonnegative");
    }
    let nonzero: Vec<MPoly> = polys.iter().filter(|p| !p.is_zero()).cloned().collect();
    if let Some(cands) = solve_rec(nonzero.clone(), bounds)? {
        let roots = verified(polys, bounds, cands)?;
        return Ok(SolveOutcome::Roots {
            roots,
            path: SolvePath::Elimination,
        });
    }
    if nonzero.len() >= 2 {
        if let Some(roots) = bivariate_fallback(&nonzero, bounds)? {
            return Ok(SolveOutcome::Roots {
                roots,
                path: SolvePath::BivariateLattice,
            });
        }
    }
    Ok(SolveOutcome::Dependent)
}
