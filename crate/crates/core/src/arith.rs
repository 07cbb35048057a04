//! Big-integer utilities and balanced semiprime generation.

use std::str::FromStr;

use num_bigint::{BigInt, RandBigInt};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Floor square root.
pub fn isqrt(n: &BigInt) -> Result<BigInt> {
    if n.is_negative() {
        return domain(format!("isqrt of negative value {n}"));
    }
    Ok(n.sqrt())
}

/// Smallest `r` with `r*r >= n`.
pub fn ceil_sqrt(n: &BigInt) -> Result<BigInt> {
    let r = isqrt(n)?;
    if &r * &r == *n {
        Ok(r)
    } else {
        Ok(r + 1)
    }
}

pub fn is_perfect_square(n: &BigInt) -> Result<Option<BigInt>> {
    let r = isqrt(n)?;
    Ok(if &r * &r == *n { Some(r) } else { None })
}

/// Integer nearest to `sqrt(v)` for a nonnegative rational `v`, ties rounding up.
pub fn round_sqrt(v: &BigRational) -> Result<BigInt> {
    if v.is_negative() {
        return domain("square root of negative rational");
    }
    // largest odd t with t^2 <= 4v, then r = (t + 1) / 2
    let four_v = (v * BigInt::from(4)).floor().to_integer();
    let s = four_v.sqrt();
    Ok((s + 1) >> 1)
}

/// `floor(n^(1/k))`.
pub fn iroot(n: &BigInt, k: u32) -> Result<BigInt> {
    if n.is_negative() {
        return domain("root of negative value");
    }
    Ok(n.nth_root(k))
}

/// Smallest `r` with `r^k >= n`.
pub fn ceil_root(n: &BigInt, k: u32) -> Result<BigInt> {
    let r = iroot(n, k)?;
    if num_traits::pow(r.clone(), k as usize) == *n {
        Ok(r)
    } else {
        Ok(r + 1)
    }
}

/// Inverse of `a` modulo `m` in `[0, m)`, when it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_zero() {
        return None;
    }
    let m = m.abs();
    let e = a.mod_floor(&m).extended_gcd(&m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(&m))
}

/// Parses `a/b`, a plain integer, or a finite decimal such as `1.06` into an
/// exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("malformed rational `{s}`"));
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            BigInt::from_str(int).map_err(|_| bad())?
        };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac = BigInt::from_str(frac).map_err(|_| bad())?;
        let magnitude = int.abs() * &scale + frac;
        let num = if negative { -magnitude } else { magnitude };
        return Ok(BigRational::new(num, scale));
    }
    let n = BigInt::from_str(s).map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

pub fn parse_bigint(s: &str) -> Result<BigInt> {
    BigInt::from_str(s.trim()).map_err(|_| Error::Parse(format!("malformed integer `{s}`")))
}

/// Renders a rational as `a/b`, or `a` when the denominator is one.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

const SMALL_PRIMES: [u32; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

// Bases 2..17 are a deterministic witness set below this bound.
const DETERMINISTIC_LIMIT: u64 = 341_550_071_728_321;
const DETERMINISTIC_BASES: [u32; 7] = [2, 3, 5, 7, 11, 13, 17];

/// Miller-Rabin. Exact below 3.4e14; above that the fixed bases are followed by
/// `rounds` extra bases drawn from a generator seeded by `n`, so the answer is
/// reproducible and wrong with probability at most `4^-rounds`.
pub fn is_probable_prime(n: &BigInt, rounds: u32) -> Result<bool> {
    if *n < BigInt::from(2) {
        return domain(format!("primality test needs n >= 2, got {n}"));
    }
    if rounds == 0 {
        return domain("primality test needs at least one round");
    }
    for &sp in SMALL_PRIMES.iter() {
        let sp = BigInt::from(sp);
        if *n == sp {
            return Ok(true);
        }
        if (n % &sp).is_zero() {
            return Ok(false);
        }
    }
    let one = BigInt::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;

    let witness = |a: &BigInt| -> bool {
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            return false;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                return false;
            }
        }
        true
    };

    for &b in DETERMINISTIC_BASES.iter() {
        if witness(&BigInt::from(b)) {
            return Ok(false);
        }
    }
    if n.to_u64().is_some_and(|v| v < DETERMINISTIC_LIMIT) {
        return Ok(true);
    }
    let seed = n
        .iter_u64_digits()
        .fold(0x9e37_79b9_7f4a_7c15u64, |acc, w| acc.rotate_left(7) ^ w);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let two = BigInt::from(2);
    for _ in 0..rounds {
        let a = rng.gen_bigint_range(&two, &n_minus_1);
        if witness(&a) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub(crate) const PRIME_ROUNDS: u32 = 32;

pub(crate) fn is_prime(n: &BigInt) -> bool {
    *n >= BigInt::from(2) && is_probable_prime(n, PRIME_ROUNDS).unwrap_or(false)
}

/// Uniformly sampled prime in `[lo, hi]`, or `None` when none was found
/// within the attempt budget.
pub fn random_prime_in(lo: &BigInt, hi: &BigInt, rng: &mut ChaCha8Rng) -> Option<BigInt> {
    let lo = lo.max(&BigInt::from(2)).clone();
    if lo > *hi {
        return None;
    }
    let width = hi - &lo;
    if width < BigInt::from(20_000) {
        let w = width.to_u64().unwrap_or(0);
        let primes: Vec<BigInt> = (0..=w).map(|i| &lo + i).filter(is_prime).collect();
        if primes.is_empty() {
            return None;
        }
        let idx = rng
            .gen_bigint_range(&BigInt::zero(), &BigInt::from(primes.len()))
            .to_usize()
            .unwrap_or(0);
        return Some(primes[idx].clone());
    }
    let attempts = 64 * hi.bits().max(8);
    let upper = hi + 1;
    for _ in 0..attempts {
        let mut c = rng.gen_bigint_range(&lo, &upper);
        if c.is_even() {
            c += 1;
            if c > *hi {
                continue;
            }
        }
        if is_prime(&c) {
            return Some(c);
        }
    }
    None
}

/// A product of two primes `p < q < c*p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Semiprime {
    #[serde(with = "decimal")]
    pub n: BigInt,
    #[serde(with = "decimal")]
    pub p: BigInt,
    #[serde(with = "decimal")]
    pub q: BigInt,
    #[serde(with = "rational_string")]
    pub ratio_bound: BigRational,
}

impl Semiprime {
    /// Builds the instance after re-checking every invariant.
    pub fn new(p: BigInt, q: BigInt, ratio_bound: BigRational) -> Result<Self> {
        if !is_prime(&p) || !is_prime(&q) {
            return domain("semiprime factors must be prime");
        }
        if p >= q {
            return domain("semiprime needs p < q");
        }
        if BigRational::from_integer(q.clone())
            >= &ratio_bound * BigRational::from_integer(p.clone())
        {
            return domain("semiprime violates q < c*p");
        }
        Ok(Semiprime {
            n: &p * &q,
            p,
            q,
            ratio_bound,
        })
    }

    pub fn bits(&self) -> u64 {
        self.n.bits()
    }
}

/// Deterministically generates `n = p*q` with exactly `bits` bits and
/// `p < q < c*p`.
pub fn gen_balanced_semiprime(bits: u32, c: &BigRational, seed: u64) -> Result<Semiprime> {
    if bits < 16 {
        return domain("semiprime generation needs at least 16 bits");
    }
    if *c <= BigRational::one() {
        return domain("balance ratio must exceed 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lo_n = BigInt::one() << (bits - 1);
    let hi_n = (BigInt::one() << bits) - 1;
    // p*p < n < c*p*p
    let p_lo = ceil_sqrt(
        &(BigRational::from_integer(lo_n.clone()) / c)
            .ceil()
            .to_integer(),
    )?;
    let p_hi = isqrt(&hi_n)?;
    for _ in 0..512 {
        let Some(p) = random_prime_in(&p_lo, &p_hi, &mut rng) else {
            continue;
        };
        let cp = c * BigRational::from_integer(p.clone());
        let q_strict_hi: BigInt = cp.ceil().to_integer() - 1;
        let q_lo = (&p + 1u32).max(Integer::div_ceil(&lo_n, &p));
        let q_hi = q_strict_hi.min(&hi_n / &p);
        if q_lo > q_hi {
            continue;
        }
        let Some(q) = random_prime_in(&q_lo, &q_hi, &mut rng) else {
            continue;
        };
        let sp = Semiprime::new(p, q, c.clone())?;
        debug_assert_eq!(sp.n.bits(), bits as u64);
        return Ok(sp);
    }
    Err(Error::Generation(format!(
        "no balanced semiprime with {bits} bits and ratio {}",
        format_rational(c)
    )))
}

/// Serde adapter: big integers as decimal strings.
pub mod decimal {
    use std::str::FromStr;

    use num_bigint::BigInt;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        BigInt::from_str(&s).map_err(D::Error::custom)
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(v) => s.serialize_some(&v.to_string()),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
            let s = Option::<String>::deserialize(d)?;
            s.map(|s| BigInt::from_str(&s).map_err(D::Error::custom))
                .transpose()
        }
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for x in v {
                seq.serialize_element(&x.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter()
                .map(|s| BigInt::from_str(s).map_err(D::Error::custom))
                .collect()
        }
    }
}

/// Serde adapter: rationals as `a/b` strings.
pub mod rational_string {
    use num_rational::BigRational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_rational(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_rational(&s).map_err(D::Error::custom)
    }
}
