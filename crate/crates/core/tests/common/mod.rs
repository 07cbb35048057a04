//! Independent reference implementations used as test oracles. Nothing here
//! calls into the library under test.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

/// Determinant by cofactor expansion along the first row.
pub fn cofactor_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = BigInt::zero();
    for c in 0..n {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != c)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][c] * cofactor_det(&minor);
        if c % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

pub fn gram(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|a| {
            rows.iter()
                .map(|b| a.iter().zip(b).map(|(x, y)| x * y).sum())
                .collect()
        })
        .collect()
}

/// Inverse of a square rational matrix by Gauss-Jordan elimination.
pub fn rational_inverse(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v /= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (v, pv) in a[r].iter_mut().zip(&pivot_row) {
                    *v -= &f * pv;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

fn rat_matmul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let m = b[0].len();
    a.iter()
        .map(|r| {
            (0..m)
                .map(|j| {
                    r.iter()
                        .zip(b)
                        .map(|(x, row)| x * &row[j])
                        .fold(BigRational::zero(), |s, t| s + t)
                })
                .collect()
        })
        .collect()
}

/// Returns the integer matrix `U` with `U * input = output` when it exists
/// and is unimodular.
pub fn unimodular_change(
    input: &[Vec<BigInt>],
    output: &[Vec<BigInt>],
) -> Option<Vec<Vec<BigInt>>> {
    let to_rat = |m: &[Vec<BigInt>]| -> Vec<Vec<BigRational>> {
        m.iter().map(|r| r.iter().map(rat).collect()).collect()
    };
    let bi = to_rat(input);
    let bo = to_rat(output);
    let bit: Vec<Vec<BigRational>> = (0..bi[0].len())
        .map(|j| bi.iter().map(|r| r[j].clone()).collect())
        .collect();
    let g_inv = rational_inverse(&rat_matmul(&bi, &bit))?;
    let u = rat_matmul(&rat_matmul(&bo, &bit), &g_inv);
    if u.iter().flatten().any(|v| !v.is_integer()) {
        return None;
    }
    let u: Vec<Vec<BigInt>> = u
        .into_iter()
        .map(|r| r.into_iter().map(|v| v.to_integer()).collect())
        .collect();
    let recon: Vec<Vec<BigInt>> = u
        .iter()
        .map(|r| {
            (0..input[0].len())
                .map(|j| r.iter().zip(input).map(|(c, row)| c * &row[j]).sum())
                .collect()
        })
        .collect();
    if recon != output {
        return None;
    }
    if cofactor_det(&u).abs() != BigInt::one() {
        return None;
    }
    Some(u)
}

/// Size reduction and the Lovász condition checked with exact rational
/// Gram-Schmidt.
pub fn is_lll_reduced(rows: &[Vec<BigInt>], delta: &BigRational) -> bool {
    let n = rows.len();
    let b: Vec<Vec<BigRational>> = rows.iter().map(|r| r.iter().map(rat).collect()).collect();
    let dotr = |x: &[BigRational], y: &[BigRational]| {
        x.iter()
            .zip(y)
            .map(|(a, c)| a * c)
            .fold(BigRational::zero(), |s, t| s + t)
    };
    let mut bstar: Vec<Vec<BigRational>> = Vec::new();
    let mut bnorm: Vec<BigRational> = Vec::new();
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        let mut v = b[i].clone();
        for j in 0..i {
            mu[i][j] = dotr(&b[i], &bstar[j]) / &bnorm[j];
            for (x, y) in v.iter_mut().zip(&bstar[j]) {
                *x -= &mu[i][j] * y;
            }
        }
        bnorm.push(dotr(&v, &v));
        bstar.push(v);
    }
    let half = BigRational::new(big(1), big(2));
    for i in 0..n {
        for j in 0..i {
            if mu[i][j].abs() > half {
                return false;
            }
        }
    }
    (1..n).all(|k| bnorm[k] >= (delta - &mu[k][k - 1] * &mu[k][k - 1]) * &bnorm[k - 1])
}

/// Smallest nonzero squared norm over integer combinations with
/// coefficients in `[-r, r]`.
pub fn brute_force_shortest(rows: &[Vec<BigInt>], r: i64) -> BigInt {
    let n = rows.len();
    let m = rows[0].len();
    let mut coeffs = vec![-r; n];
    let mut best: Option<BigInt> = None;
    loop {
        if coeffs.iter().any(|&c| c != 0) {
            let v: Vec<BigInt> = (0..m)
                .map(|j| coeffs.iter().zip(rows).map(|(c, row)| &row[j] * c).sum())
                .collect();
            let s: BigInt = v.iter().map(|x| x * x).sum();
            if best.as_ref().is_none_or(|b| &s < b) {
                best = Some(s);
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return best.expect("at least one nonzero combination");
            }
            coeffs[i] += 1;
            if coeffs[i] <= r {
                break;
            }
            coeffs[i] = -r;
            i += 1;
        }
    }
}

pub fn trial_division_is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Solutions of `n = x^2 - y^2` with `x > y >= 0`, by scanning `x`.
pub fn brute_force_representations(n: u64) -> u64 {
    let mut count = 0;
    for x in 1..=(n + 1) / 2 + 1 {
        let r = x * x;
        if r < n {
            continue;
        }
        let y2 = r - n;
        let y = (y2 as f64).sqrt() as u64;
        if (y.saturating_sub(1)..=y + 1).any(|t| t * t == y2 && t < x) {
            count += 1;
        }
    }
    count
}

/// `#{ pq <= x : p < q < c p }` with `c = cn / cd`, by a plain double loop
/// over trial-division primes.
pub fn naive_balanced_count(x: u64, cn: u64, cd: u64) -> u64 {
    let limit = (x as f64).sqrt() as u64 + 2;
    let primes: Vec<u64> = (2..=limit)
        .filter(|&v| trial_division_is_prime(v))
        .collect();
    let mut count = 0;
    for &p in &primes {
        if p * p > x {
            break;
        }
        let mut q = p + 1;
        while p * q <= x && q * cd < cn * p {
            if trial_division_is_prime(q) {
                count += 1;
            }
            q += 1;
        }
    }
    count
}
