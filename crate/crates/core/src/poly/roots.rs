use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::MPoly;
use crate::error::{domain, Result};

fn eval(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn derivative(coeffs: &[BigInt]) -> Vec<BigInt> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect()
}

fn trim(coeffs: &[BigInt]) -> &[BigInt] {
    let len = coeffs
        .iter()
        .rposition(|c| !c.is_zero())
        .map_or(0, |i| i + 1);
    &coeffs[..len]
}

/// Sorted integer points in `[lo, hi]` such that `f` is monotone between
/// any two consecutive ones, including both endpoints.
fn monotone_breaks(f: &[BigInt], lo: &BigInt, hi: &BigInt) -> Vec<BigInt> {
    let mut pts = vec![lo.clone(), hi.clone()];
    if f.len() > 2 {
        pts.extend(sign_change_brackets(trim(&derivative(f)), lo, hi));
    }
    pts.sort();
    pts.dedup();
    pts
}

/// Integer points in `[lo, hi]` that either are zeros of `g` or bracket a
/// sign change of `g` between consecutive integers.
fn sign_change_brackets(g: &[BigInt], lo: &BigInt, hi: &BigInt) -> Vec<BigInt> {
    if g.len() < 2 {
        return Vec::new();
    }
    let pts = monotone_breaks(g, lo, hi);
    let vals: Vec<BigInt> = pts.iter().map(|p| eval(g, p)).collect();
    let mut out = Vec::new();
    for (p, v) in pts.iter().zip(&vals) {
        if v.is_zero() {
            out.push(p.clone());
        }
    }
    for w in 0..pts.len().saturating_sub(1) {
        let (a, b) = (&pts[w], &pts[w + 1]);
        let (va, vb) = (&vals[w], &vals[w + 1]);
        if va.is_zero() || vb.is_zero() || va.sign() == vb.sign() {
            continue;
        }
        let (mut l, mut h) = (a.clone(), b.clone());
        let sl = va.sign();
        while &h - &l > BigInt::from(1) {
            let mid: BigInt = (&l + &h).div_floor(&BigInt::from(2));
            let vm = eval(g, &mid);
            if vm.is_zero() {
                out.push(mid.clone());
                break;
            }
            if vm.sign() == sl {
                l = mid;
            } else {
                h = mid;
            }
        }
        out.push(l);
        out.push(h);
    }
    out
}

/// All integer roots in `[lo, hi]` of the dense polynomial `coeffs`
/// (constant term first), in ascending order.
///
/// Works by recursive isolation: the real roots of each derivative are
/// bracketed between consecutive integers, which splits the range into
/// pieces on which the polynomial is monotone, and each piece is bisected.
pub fn integer_roots_dense(coeffs: &[BigInt], lo: &BigInt, hi: &BigInt) -> Result<Vec<BigInt>> {
    let f = trim(coeffs);
    if f.is_empty() {
        return domain("integer roots of the zero polynomial");
    }
    if lo > hi {
        return Ok(Vec::new());
    }
    if f.len() == 1 {
        return Ok(Vec::new());
    }
    if f.len() == 2 {
        let (q, r) = (-&f[0]).div_rem(&f[1]);
        return Ok(if r.is_zero() && &q >= lo && &q <= hi {
            vec![q]
        } else {
            Vec::new()
        });
    }
    // A root of even multiplicity is an odd-multiplicity root of f', so it
    // is one of the break points.
    let mut roots: Vec<BigInt> = sign_change_brackets(f, lo, hi)
        .into_iter()
        .filter(|r| eval(f, r).is_zero())
        .collect();
    roots.sort();
    roots.dedup();
    Ok(roots)
}

/// Integer roots `r` with `|r| <= bound` of a polynomial in at most one
/// variable. Every returned root is checked by evaluation.
pub fn integer_roots_univariate(f: &MPoly, bound: &BigInt) -> Result<Vec<BigInt>> {
    if f.is_zero() {
        return domain("integer roots of the zero polynomial");
    }
    if bound.is_negative() {
        return domain("root bound must be nonnegative");
    }
    let Some(dense) = f.to_dense_univariate() else {
        return domain("polynomial is not univariate");
    };
    let roots = integer_roots_dense(&dense, &-bound, bound)?;
    debug_assert!(roots.iter().all(|r| eval(&dense, r).is_zero()));
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn poly_from_roots(roots: &[i64], lead: i64) -> Vec<BigInt> {
        let mut c = vec![big(lead)];
        for &r in roots {
            let mut next = vec![BigInt::zero(); c.len() + 1];
            for (i, a) in c.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * big(r);
            }
            c = next;
        }
        c
    }

    #[test]
    fn spec_examples() {
        let x = MPoly::var(&["x"], "x");
        let k = |v: i64| MPoly::constant(&["x"], v);
        let f = &(&(&x * &x) - &(&x * &k(5))) + &k(6);
        assert_eq!(
            integer_roots_univariate(&f, &big(10)).unwrap(),
            vec![big(2), big(3)]
        );
        let g = &(&x * &x) + &k(1);
        assert!(integer_roots_univariate(&g, &big(100)).unwrap().is_empty());
        let h = &(&x - &k(9521)) * &(&x + &k(4));
        assert_eq!(
            integer_roots_univariate(&h, &big(10_000)).unwrap(),
            vec![big(-4), big(9521)]
        );
        assert!(integer_roots_univariate(&MPoly::zero(&["x"]), &big(5)).is_err());
    }

    #[test]
    fn respects_bound_and_multiplicity() {
        let f = poly_from_roots(&[3, 3, -7, 50], 2);
        assert_eq!(
            integer_roots_dense(&f, &big(-10), &big(10)).unwrap(),
            vec![big(-7), big(3)]
        );
        let g = poly_from_roots(&[0, 0, 0, 0], 1);
        assert_eq!(
            integer_roots_dense(&g, &big(-5), &big(5)).unwrap(),
            vec![big(0)]
        );
        // irrational roots near integers: x^2 - 2
        let h = vec![big(-2), big(0), big(1)];
        assert!(integer_roots_dense(&h, &big(-10), &big(10))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn huge_roots() {
        let p: BigInt = "170141183460469231731687303715884105727".parse().unwrap();
        // (x - p)(x + p)(x + 3)
        let mut coeffs = vec![-&p * &p * big(3), -&p * &p, big(3), big(1)];
        let f = |x: &BigInt| eval(&coeffs, x);
        assert!(f(&p).is_zero() && f(&-&p).is_zero() && f(&big(-3)).is_zero());
        let roots = integer_roots_dense(&coeffs, &-(&p * big(2)), &(&p * big(2))).unwrap();
        assert_eq!(roots, vec![-&p, big(-3), p.clone()]);
        coeffs[0] += 1;
        assert!(
            integer_roots_dense(&coeffs, &-(&p * big(2)), &(&p * big(2)))
                .unwrap()
                .is_empty()
        );
    }

    proptest! {
        #[test]
        fn matches_brute_force(roots in proptest::collection::vec(-40i64..40, 1..5), lead in 1i64..4, extra in 0i64..3) {
            let mut f = poly_from_roots(&roots, lead);
            f[0] += big(extra);
            let got = integer_roots_dense(&f, &big(-50), &big(50)).unwrap();
            let want: Vec<BigInt> = (-50..=50).map(big).filter(|x| eval(&f, x).is_zero()).collect();
            prop_assert_eq!(got, want);
        }
    }
}
