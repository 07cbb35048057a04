//! Exact counts of balanced semiprimes `N = pq <= x` with `p < q < c p`,
//! set against `x / ln^2 x`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::arith;
use crate::error::{domain, Error, Result};

pub const CSV_HEADER: &str = "x,c,count,model,ratio";

/// Largest sieve the census will allocate.
pub const MAX_SIEVE: u64 = 1 << 31;

#[derive(Clone, Debug, Serialize)]
pub struct CensusRow {
    pub x: u64,
    #[serde(with = "arith::rational_string")]
    pub c: BigRational,
    pub exact_count: u64,
    pub model: f64,
    pub ratio: f64,
}

impl CensusRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.x,
            arith::format_rational(&self.c),
            self.exact_count,
            self.model,
            self.ratio
        )
    }
}

/// Primes up to `limit` by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Result<Vec<u64>> {
    if limit > MAX_SIEVE {
        return Err(Error::Resource(format!(
            "sieve up to {limit} exceeds {MAX_SIEVE}"
        )));
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    Ok(out)
}

/// `#{N = pq <= x : p < q < c p}` by sieving to `sqrt(c x)` and counting,
/// for each `p`, the primes in `(p, min(x / p, ceil(c p) - 1)]`.
pub fn count_balanced(x: u64, c: &BigRational) -> Result<CensusRow> {
    if x < 100 {
        return domain("x must be at least 100");
    }
    if c <= &BigRational::one() {
        return domain("ratio bound must exceed 1");
    }
    let cx = c * BigRational::from_integer(BigInt::from(x));
    let limit = arith::isqrt(&cx.floor().to_integer())? + 1u32;
    let limit = limit
        .to_u64()
        .filter(|&l| l <= MAX_SIEVE)
        .ok_or_else(|| Error::Resource(format!("sieve for x = {x} is too large")))?;
    let primes = primes_up_to(limit)?;
    let (cn, cd) = (c.numer(), c.denom());
    let mut count = 0u64;
    for (i, &p) in primes.iter().enumerate() {
        let by_size = x / p;
        if by_size <= p {
            break;
        }
        // largest q with q * cd < cn * p
        let strict: BigInt = (cn * BigInt::from(p) - 1u32) / cd;
        let hi = match strict.to_u64() {
            Some(v) => v.min(by_size),
            None if strict.is_positive() => by_size,
            None => 0,
        };
        if hi <= p {
            continue;
        }
        let upto = primes.partition_point(|&q| q <= hi);
        count += (upto - i - 1) as u64;
    }
    let xf = x as f64;
    let model = xf / (xf.ln() * xf.ln());
    Ok(CensusRow {
        x,
        c: c.clone(),
        exact_count: count,
        model,
        ratio: count as f64 / model,
    })
}
