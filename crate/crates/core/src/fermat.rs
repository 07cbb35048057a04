//! Difference-of-squares factoring: search for `4N = x^2 - y^2`.
//!
//! Every variant walks an increasing sequence of candidates `x` and tests
//! whether `x^2 - 4N` is a perfect square. `steps` counts candidates tested,
//! including the first one.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{ceil_sqrt, decimal, is_perfect_square, isqrt};
use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Fermat,
    Triangular,
    Shifted,
}

/// A solution of `4N = x^2 - y^2` with `x = p + q`, `y = q - p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorResult {
    #[serde(with = "decimal")]
    pub p: BigInt,
    #[serde(with = "decimal")]
    pub q: BigInt,
    pub steps: u64,
    pub method: Method,
    #[serde(with = "decimal")]
    pub x: BigInt,
    #[serde(with = "decimal")]
    pub y: BigInt,
    /// `p == 1`: the representation exists for every odd `N` and yields no factor.
    pub trivial: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(FactorResult),
    /// The step budget ran out before a representation was found.
    Exhausted {
        steps: u64,
    },
}

impl SearchOutcome {
    pub fn found(&self) -> Option<&FactorResult> {
        match self {
            SearchOutcome::Found(r) => Some(r),
            SearchOutcome::Exhausted { .. } => None,
        }
    }

    pub fn steps(&self) -> u64 {
        match self {
            SearchOutcome::Found(r) => r.steps,
            SearchOutcome::Exhausted { steps } => *steps,
        }
    }
}

fn check_input(n: &BigInt) -> Result<()> {
    if *n < BigInt::from(9) {
        return domain(format!(
            "difference-of-squares search needs N >= 9, got {n}"
        ));
    }
    if n.mod_floor(&BigInt::from(4)) == BigInt::from(2) {
        return Err(Error::NoRepresentation(n.clone()));
    }
    Ok(())
}

fn result_from(n: &BigInt, x: BigInt, y: BigInt, steps: u64, method: Method) -> FactorResult {
    let p: BigInt = (&x - &y) >> 1;
    let q: BigInt = (&x + &y) >> 1;
    debug_assert_eq!(&x * &x - &y * &y, n * 4);
    debug_assert_eq!(&p * &q, *n);
    let trivial = p.is_one();
    FactorResult {
        p,
        q,
        steps,
        method,
        x,
        y,
        trivial,
    }
}

/// Walks `x = start, start + 1, ...` for at most `max_steps` candidates.
fn linear_search(
    n: &BigInt,
    start: BigInt,
    max_steps: u64,
    method: Method,
) -> Result<SearchOutcome> {
    let four_n = n * 4;
    let mut x = start;
    // x^2 - 4N, updated incrementally
    let mut r: BigInt = &x * &x - &four_n;
    for step in 1..=max_steps {
        if !r.is_negative() {
            if let Some(y) = is_perfect_square(&r)? {
                return Ok(SearchOutcome::Found(result_from(n, x, y, step, method)));
            }
        }
        r += &x * 2 + 1;
        x += 1;
    }
    Ok(SearchOutcome::Exhausted { steps: max_steps })
}

/// Classic Fermat search from `ceil(sqrt(4N))`.
pub fn fermat_factor(n: &BigInt, max_steps: u64) -> Result<SearchOutcome> {
    check_input(n)?;
    let start = ceil_sqrt(&(n * 4))?;
    linear_search(n, start, max_steps, Method::Fermat)
}

/// Fermat search started at `max(ceil(sqrt(4N)), ceil(2*gamma*sqrt(N)))`.
pub fn shifted_fermat(n: &BigInt, gamma: &BigRational, max_steps: u64) -> Result<SearchOutcome> {
    check_input(n)?;
    if !gamma.is_positive() {
        return domain("shift factor gamma must be positive");
    }
    let base = ceil_sqrt(&(n * 4))?;
    // x >= 2*(a/b)*sqrt(N)  <=>  b*x >= sqrt(4 a^2 N)
    let (a, b) = (gamma.numer(), gamma.denom());
    let shifted = Integer::div_ceil(&ceil_sqrt(&(a * a * n * 4))?, b);
    linear_search(n, base.max(shifted), max_steps, Method::Shifted)
}

/// Triangular-sum acceleration: candidates are the triangular numbers
/// `x_k = T(m + k)`, with `x_k^2 = x_{k-1}^2 + (m + k)^3`.
///
/// `m` is the smallest index with `T(m) >= sqrt(4N)`, so only a representation
/// whose `p + q` is triangular can be found.
pub fn triangular_fermat(n: &BigInt, max_steps: u64) -> Result<SearchOutcome> {
    check_input(n)?;
    let m = triangular_start(n)?;
    let four_n = n * 4;
    let mut idx = m;
    let mut x2 = {
        let t: BigInt = (&idx * (&idx + 1u32)) >> 1;
        &t * &t
    };
    for step in 1..=max_steps {
        let r: BigInt = &x2 - &four_n;
        if !r.is_negative() {
            if let Some(y) = is_perfect_square(&r)? {
                let x = isqrt(&x2)?;
                return Ok(SearchOutcome::Found(result_from(
                    n,
                    x,
                    y,
                    step,
                    Method::Triangular,
                )));
            }
        }
        idx += 1;
        x2 += &idx * &idx * &idx;
    }
    Ok(SearchOutcome::Exhausted { steps: max_steps })
}

/// Smallest `m` with `m(m+1)/2 >= ceil(sqrt(4N))`.
pub fn triangular_start(n: &BigInt) -> Result<BigInt> {
    let target = ceil_sqrt(&(n * 4))?;
    // T(m) >= t  <=>  (2m+1)^2 >= 8t + 1
    let s = ceil_sqrt(&(&target * 8 + 1))?;
    let mut m: BigInt = (s - 1) >> 1;
    if m.is_negative() {
        m = BigInt::zero();
    }
    while ((&m * (&m + 1u32)) >> 1) < target {
        m += 1;
    }
    Ok(m)
}

/// Number of pairs `x > y >= 0` with `N = x^2 - y^2`.
///
/// Each representation is a factor pair `N = d*e`, `d <= e`, of equal parity.
pub fn count_representations(n: &BigInt) -> Result<u64> {
    if !n.is_positive() {
        return domain("representation count needs N >= 1");
    }
    if let Some(small) = n.to_u64() {
        let mut count = 0;
        let mut d = 1u64;
        while d * d <= small {
            if small % d == 0 && (d % 2 == (small / d) % 2) {
                count += 1;
            }
            d += 1;
        }
        return Ok(count);
    }
    let mut count = 0;
    let mut d = BigInt::one();
    let root = isqrt(n)?;
    while d <= root {
        let (e, rem) = n.div_rem(&d);
        if rem.is_zero() && d.is_even() == e.is_even() {
            count += 1;
        }
        d += 1;
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    const PAPER_N: i64 = 193933249;

    #[test]
    fn classic_fermat_on_example_one() {
        let r = fermat_factor(&big(PAPER_N), 10_000).unwrap();
        let r = r.found().unwrap();
        assert_eq!((r.p.clone(), r.q.clone()), (big(9521), big(20369)));
        assert_eq!(r.steps, 2039);
        assert_eq!(r.x, big(29890));
        assert_eq!(r.y, big(10848));
        assert!(!r.trivial);
    }

    #[test]
    fn fermat_small_cases() {
        let r = fermat_factor(&big(15), 10)
            .unwrap()
            .found()
            .cloned()
            .unwrap();
        assert_eq!(
            (r.x.clone(), r.y.clone(), r.p.clone(), r.q.clone(), r.steps),
            (big(8), big(2), big(3), big(5), 1)
        );
        let r = fermat_factor(&big(9), 10)
            .unwrap()
            .found()
            .cloned()
            .unwrap();
        assert_eq!(
            (r.p.clone(), r.q.clone(), r.x.clone(), r.y.clone(), r.steps),
            (big(3), big(3), big(6), big(0), 1)
        );
    }

    #[test]
    fn fermat_prime_yields_trivial_solution() {
        let r = fermat_factor(&big(13), 100)
            .unwrap()
            .found()
            .cloned()
            .unwrap();
        assert!(r.trivial);
        assert_eq!((r.p.clone(), r.q.clone()), (big(1), big(13)));
        assert_eq!((r.x.clone(), r.y.clone()), (big(14), big(12)));
    }

    #[test]
    fn fermat_rejects_bad_input() {
        assert!(matches!(
            fermat_factor(&big(18), 10),
            Err(Error::NoRepresentation(_))
        ));
        assert!(matches!(fermat_factor(&big(7), 10), Err(Error::Domain(_))));
        assert_eq!(
            fermat_factor(&big(PAPER_N), 5).unwrap(),
            SearchOutcome::Exhausted { steps: 5 }
        );
    }

    #[test]
    fn triangular_on_example_one() {
        let n = big(PAPER_N);
        let m = triangular_start(&n).unwrap();
        assert_eq!(m, big(236));
        let t = &m * (&m + 1) / 2;
        assert_eq!(&t * &t, big(782097156));
        let r = triangular_fermat(&n, 100)
            .unwrap()
            .found()
            .cloned()
            .unwrap();
        assert_eq!(r.steps, 9);
        assert_eq!(r.x, big(29890));
        assert_eq!(r.y, big(10848));
        assert_eq!(&r.x * &r.x, big(893412100));
        assert_eq!((r.p, r.q), (big(9521), big(20369)));
    }

    #[test]
    fn triangular_first_candidates_match_example_one() {
        // x_1^2 = 795409209 = 28203^2, y_1^2 = 19676213 is not a square
        let n = big(PAPER_N);
        let x0sq = big(782097156);
        let x1sq = &x0sq + big(237).pow(3);
        assert_eq!(x1sq, big(795409209));
        assert_eq!(&x1sq - &n * 4, big(19676213));
        assert_eq!(is_perfect_square(&(&x0sq - &n * 4)).unwrap(), None);
        assert_eq!(
            triangular_fermat(&n, 1).unwrap(),
            SearchOutcome::Exhausted { steps: 1 }
        );
    }

    #[test]
    fn triangular_fails_when_sum_is_not_triangular() {
        // 101 * 103: p + q = 204 is not triangular
        assert_eq!(
            triangular_fermat(&big(101 * 103), 5).unwrap(),
            SearchOutcome::Exhausted { steps: 5 }
        );
    }

    #[test]
    fn shifted_fermat_examples() {
        let n = big(PAPER_N);
        let classic = fermat_factor(&n, 10_000).unwrap().found().cloned().unwrap();
        let one = shifted_fermat(&n, &BigRational::one(), 10_000)
            .unwrap()
            .found()
            .cloned()
            .unwrap();
        assert_eq!(
            (one.p.clone(), one.q.clone(), one.steps),
            (classic.p.clone(), classic.q.clone(), classic.steps)
        );

        let g = BigRational::new(big(106), big(100));
        let shifted = shifted_fermat(&n, &g, 10_000)
            .unwrap()
            .found()
            .cloned()
            .unwrap();
        assert_eq!(
            (shifted.p.clone(), shifted.q.clone()),
            (big(9521), big(20369))
        );
        assert!(shifted.steps < classic.steps);
        // start = ceil(2 * 1.06 * sqrt(N)) = 29524 (2 * 1.06 * sqrt(N) = 29523.1...)
        assert_eq!(shifted.steps, 29890 - 29524 + 1);

        let g = BigRational::new(big(12), big(10));
        assert!(matches!(
            shifted_fermat(&n, &g, 10_000).unwrap(),
            SearchOutcome::Exhausted { .. }
        ));
        assert!(shifted_fermat(&n, &BigRational::zero(), 10).is_err());
    }

    fn brute_force_representations(n: u64) -> u64 {
        let mut count = 0;
        for x in 0..=(n + 1) / 2 {
            if x * x < n {
                continue;
            }
            let r = x * x - n;
            let y = (r as f64).sqrt() as u64;
            let y = (y.saturating_sub(2)..=y + 2).find(|y| y * y == r);
            if let Some(y) = y {
                if x > y {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn representation_examples() {
        assert_eq!(count_representations(&big(6)).unwrap(), 0);
        assert_eq!(count_representations(&big(13)).unwrap(), 1);
        assert_eq!(49 - 36, 13);
        assert_eq!(count_representations(&big(15)).unwrap(), 2);
        assert_eq!(brute_force_representations(15), 2);
        assert!(count_representations(&big(0)).is_err());
    }

    #[test]
    fn representation_count_matches_brute_force() {
        for n in 1..=2000u64 {
            assert_eq!(
                count_representations(&BigInt::from(n)).unwrap(),
                brute_force_representations(n),
                "n = {n}"
            );
        }
    }
}
