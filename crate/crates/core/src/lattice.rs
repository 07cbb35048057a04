//! Exact LLL reduction over the integers.
//!
//! Rows generate the lattice. Reduction uses the all-integer variant of LLL
//! that tracks `d_i` (Gram determinants of leading sub-bases) and
//! `lambda_{i,j} = d_{j} * mu_{i,j}`, so no rational arithmetic is needed.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith;
use crate::error::{domain, Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct Basis {
    rows: Vec<Vec<BigInt>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionReport {
    #[serde(with = "arith::decimal::vec")]
    pub vector_norms_squared: Vec<BigInt>,
    #[serde(with = "arith::decimal")]
    pub det_squared: BigInt,
    #[serde(with = "arith::rational_string")]
    pub lovasz_delta: BigRational,
    pub thm10_bound_ok: Vec<bool>,
    pub swaps: u64,
}

impl Basis {
    /// Validates shape and linear independence.
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Basis> {
        let b = Basis::unchecked(rows)?;
        b.gram_det_squared()?;
        Ok(b)
    }

    fn unchecked(rows: Vec<Vec<BigInt>>) -> Result<Basis> {
        if rows.is_empty() {
            return domain("basis must have at least one row");
        }
        let m = rows[0].len();
        if m == 0 || rows.iter().any(|r| r.len() != m) {
            return domain("basis rows must be nonempty and of equal length");
        }
        if rows.len() > m {
            return Err(Error::Rank);
        }
        Ok(Basis { rows })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Basis> {
        Basis::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<BigInt>> {
        self.rows
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.rows[0].len()
    }

    pub fn gram_matrix(&self) -> Vec<Vec<BigInt>> {
        let n = self.dim();
        let mut g = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for j in 0..=i {
                let v = dot(&self.rows[i], &self.rows[j]);
                g[j][i] = v.clone();
                g[i][j] = v;
            }
        }
        g
    }

    /// `det(L)^2`, i.e. the determinant of the Gram matrix.
    pub fn gram_det_squared(&self) -> Result<BigInt> {
        let d = int_determinant(self.gram_matrix());
        if d.is_positive() {
            Ok(d)
        } else {
            Err(Error::Rank)
        }
    }

    /// Text form: `n m` on the first line, then one row per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.dim(), self.ambient_dim());
        for r in &self.rows {
            let line: Vec<String> = r.iter().map(|v| v.to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Basis> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty basis file".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::Parse(format!("bad dimension `{t}`")))
            })
            .collect::<Result<_>>()?;
        let [n, m] = dims[..] else {
            return Err(Error::Parse("header must be `n m`".into()));
        };
        let rows: Vec<Vec<BigInt>> = lines
            .map(|l| {
                l.split_whitespace()
                    .map(arith::parse_bigint)
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        if rows.len() != n || rows.iter().any(|r| r.len() != m) {
            return Err(Error::Parse(format!("expected {n} rows of {m} entries")));
        }
        Basis::new(rows)
    }
}

impl fmt::Debug for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(
                self.rows
                    .iter()
                    .map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>()),
            )
            .finish()
    }
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm_squared(a: &[BigInt]) -> BigInt {
    dot(a, a)
}

/// Bareiss determinant of a square integer matrix.
pub fn int_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut prev = BigInt::one();
    let mut sign = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[k][k] * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Nearest integer to `a / b` for `b > 0`, ties rounded up.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    (a * 2u32 + b).div_floor(&(b * 2u32))
}

struct Lll {
    b: Vec<Vec<BigInt>>,
    d: Vec<BigInt>,
    lam: Vec<Vec<BigInt>>,
    swaps: u64,
}

impl Lll {
    // 1-based indices below follow the textbook presentation; b[k-1] is row k.
    fn redi(&mut self, k: usize, l: usize) {
        let two_lam: BigInt = &self.lam[k][l] * 2u32;
        if two_lam.abs() <= self.d[l] {
            return;
        }
        let q = round_div(&self.lam[k][l], &self.d[l]);
        let bl = self.b[l - 1].clone();
        for (x, y) in self.b[k - 1].iter_mut().zip(&bl) {
            *x -= &q * y;
        }
        let t = &q * &self.d[l];
        self.lam[k][l] -= t;
        for i in 1..l {
            let t = &q * &self.lam[l][i];
            self.lam[k][i] -= t;
        }
    }

    fn swapi(&mut self, k: usize, kmax: usize) {
        self.swaps += 1;
        self.b.swap(k - 1, k - 2);
        for j in 1..k - 1 {
            let t = std::mem::take(&mut self.lam[k][j]);
            self.lam[k][j] = std::mem::replace(&mut self.lam[k - 1][j], t);
        }
        let lam = self.lam[k][k - 1].clone();
        let bb = (&self.d[k - 2] * &self.d[k] + &lam * &lam) / &self.d[k - 1];
        for i in k + 1..=kmax {
            let t = self.lam[i][k].clone();
            self.lam[i][k] = (&self.d[k] * &self.lam[i][k - 1] - &lam * &t) / &self.d[k - 1];
            self.lam[i][k - 1] = (&bb * &t + &lam * &self.lam[i][k]) / &self.d[k];
        }
        self.d[k - 1] = bb;
    }
}

/// LLL-reduces `basis` with Lovász parameter `delta` in `(1/4, 1)`.
pub fn lll_reduce(basis: &Basis, delta: &BigRational) -> Result<(Basis, ReductionReport)> {
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    if delta <= &quarter || delta >= &BigRational::one() {
        return domain("delta must lie in (1/4, 1)");
    }
    let (a, bden) = (delta.numer().clone(), delta.denom().clone());
    let n = basis.dim();
    let mut st = Lll {
        b: basis.rows.clone(),
        d: vec![BigInt::zero(); n + 1],
        lam: vec![vec![BigInt::zero(); n + 1]; n + 1],
        swaps: 0,
    };
    st.d[0] = BigInt::one();
    st.d[1] = norm_squared(&st.b[0]);
    if st.d[1].is_zero() {
        return Err(Error::Rank);
    }
    let mut k = 2;
    let mut kmax = 1;
    while k <= n {
        if k > kmax {
            kmax = k;
            for j in 1..=k {
                let mut u = dot(&st.b[k - 1], &st.b[j - 1]);
                for i in 1..j {
                    u = (&st.d[i] * &u - &st.lam[k][i] * &st.lam[j][i]) / &st.d[i - 1];
                }
                if j < k {
                    st.lam[k][j] = u;
                } else {
                    if u.is_zero() {
                        return Err(Error::Rank);
                    }
                    st.d[k] = u;
                }
            }
        }
        loop {
            st.redi(k, k - 1);
            let lhs = &bden * &st.d[k] * &st.d[k - 2];
            let rhs =
                &a * &st.d[k - 1] * &st.d[k - 1] - &bden * &st.lam[k][k - 1] * &st.lam[k][k - 1];
            if lhs < rhs {
                st.swapi(k, kmax);
                if k > 2 {
                    k -= 1;
                }
                continue;
            }
            for l in (1..k - 1).rev() {
                st.redi(k, l);
            }
            k += 1;
            break;
        }
    }
    let det_squared = st.d[n].clone();
    let reduced = Basis { rows: st.b };
    let mut norms: Vec<BigInt> = reduced.rows.iter().map(|r| norm_squared(r)).collect();
    norms.sort();
    let thm10_bound_ok = thm10_checks(&norms, &det_squared);
    let report = ReductionReport {
        vector_norms_squared: norms,
        det_squared,
        lovasz_delta: delta.clone(),
        thm10_bound_ok,
        swaps: st.swaps,
    };
    Ok((reduced, report))
}

pub fn default_delta() -> BigRational {
    BigRational::new(BigInt::from(3), BigInt::from(4))
}

/// For sorted squared norms `s_1 <= ... <= s_n`, whether
/// `s_i^(n+1-i) <= 2^(n(n-1)/2) * det^2` holds for each `i`.
pub fn thm10_checks(sorted_norms_sq: &[BigInt], det_squared: &BigInt) -> Vec<bool> {
    let n = sorted_norms_sq.len();
    let rhs: BigInt = det_squared << (n * (n - 1) / 2);
    sorted_norms_sq
        .iter()
        .enumerate()
        .map(|(i, s)| num_traits::pow(s.clone(), n - i) <= rhs)
        .collect()
}

/// Minkowski's first theorem: some row has `||v||^(2n) <= n^n * det^2`.
pub fn minkowski_check(basis: &Basis) -> Result<bool> {
    let det_sq = basis.gram_det_squared()?;
    let n = basis.dim();
    let rhs = num_traits::pow(BigInt::from(n), n) * det_sq;
    Ok(basis
        .rows
        .iter()
        .any(|r| num_traits::pow(norm_squared(r), n) <= rhs))
}

/// Informational check of the Hermite-constant product bound using
/// `gamma_n ~ 1.5 * n / (e * pi)`: entry `d - 1` tells whether the product of
/// the `d` smallest norms stays below `gamma_n^(d/2) * det^(d/n)`.
pub fn hermite_diagnostic(sorted_norms_sq: &[BigInt], det_squared: &BigInt) -> Vec<bool> {
    let n = sorted_norms_sq.len() as f64;
    let gamma = (1.5 * n / (std::f64::consts::E * std::f64::consts::PI)).max(1.0);
    let log_det = log2_big(det_squared) / 2.0;
    let mut acc = 0.0;
    sorted_norms_sq
        .iter()
        .enumerate()
        .map(|(i, s)| {
            acc += log2_big(s) / 2.0;
            let d = (i + 1) as f64;
            acc <= d / 2.0 * gamma.log2() + d / n * log_det + 1e-9
        })
        .collect()
}

fn log2_big(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().unwrap_or(f64::INFINITY).log2();
    }
    let shift = bits - 64;
    (v >> shift).to_f64().unwrap_or(f64::INFINITY).log2() + shift as f64
}
