//! Sparse multivariate polynomials with arbitrary-precision integer
//! coefficients.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors, so iteration order
//! is lexicographic in the declared variable order and the last entry is the
//! lex-leading term. Display and the text format use graded lexicographic
//! order instead.

mod resultant;
mod roots;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Error, Result};

pub use resultant::{determinant, resultant};
pub use roots::{integer_roots_dense, integer_roots_univariate};

pub type Exponents = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    vars: Vec<String>,
    terms: BTreeMap<Exponents, BigInt>,
}

impl MPoly {
    pub fn zero(vars: &[&str]) -> Self {
        MPoly {
            vars: vars.iter().map(|v| v.to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn zero_with(vars: Vec<String>) -> Self {
        MPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[&str], c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars.len()], c.into());
        p
    }

    /// The polynomial consisting of the single variable `name`.
    pub fn var(vars: &[&str], name: &str) -> Self {
        let mut p = Self::zero(vars);
        let idx = vars
            .iter()
            .position(|v| *v == name)
            .expect("variable must be declared");
        let mut e = vec![0; vars.len()];
        e[idx] = 1;
        p.add_term(e, BigInt::one());
        p
    }

    pub fn from_terms<I, C>(vars: &[&str], terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponents, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(
                e.len(),
                vars.len(),
                "exponent arity must match variable count"
            );
            p.add_term(e, c.into());
        }
        p
    }

    pub(crate) fn from_map(vars: Vec<String>, terms: BTreeMap<Exponents, BigInt>) -> Self {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        MPoly { vars, terms }
    }

    /// Adds `c * monomial(e)` in place.
    pub fn add_term(&mut self, e: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeff(&vec![0; self.arity()])
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&d| d == 0))
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    /// Largest degree in any single variable.
    pub fn max_degree(&self) -> u32 {
        (0..self.arity())
            .map(|i| self.degree_in(i))
            .max()
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Variables that occur with positive degree.
    pub fn active_vars(&self) -> Vec<String> {
        (0..self.arity())
            .filter(|&i| self.degree_in(i) > 0)
            .map(|i| self.vars[i].clone())
            .collect()
    }

    pub fn evaluate(&self, point: &[BigInt]) -> Result<BigInt> {
        if point.len() != self.arity() {
            return domain(format!(
                "evaluation point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.arity()
            ));
        }
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &d) in point.iter().zip(e) {
                if d > 0 {
                    t *= num_traits::pow(v.clone(), d as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Re-expresses the polynomial over `vars`, which must contain every
    /// variable this polynomial actually uses.
    pub fn embed(&self, vars: &[String]) -> Result<MPoly> {
        if vars == self.vars.as_slice() {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.arity());
        for (i, v) in self.vars.iter().enumerate() {
            match vars.iter().position(|w| w == v) {
                Some(j) => map.push(Some(j)),
                None if self.degree_in(i) == 0 => map.push(None),
                None => {
                    return domain(format!(
                        "variable {v} is missing from the target variable list"
                    ))
                }
            }
        }
        let mut out = MPoly::zero_with(vars.to_vec());
        for (e, c) in &self.terms {
            let mut ne = vec![0; vars.len()];
            for (i, &d) in e.iter().enumerate() {
                if let Some(j) = map[i] {
                    ne[j] = d;
                }
            }
            out.terms.insert(ne, c.clone());
        }
        Ok(out)
    }

    /// `self`'s variables followed by any of `other`'s not already present.
    pub fn union_vars(&self, other: &MPoly) -> Vec<String> {
        let mut vars = self.vars.clone();
        for v in &other.vars {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        vars
    }

    fn aligned(&self, other: &MPoly) -> (MPoly, MPoly) {
        if self.vars == other.vars {
            return (self.clone(), other.clone());
        }
        let vars = self.union_vars(other);
        (
            self.embed(&vars).expect("union contains all variables"),
            other.embed(&vars).expect("union contains all variables"),
        )
    }

    pub fn scale(&self, k: &BigInt) -> MPoly {
        if k.is_zero() {
            return MPoly::zero_with(self.vars.clone());
        }
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect();
        MPoly::from_map(self.vars.clone(), terms)
    }

    pub fn mul_monomial(&self, e: &[u32], k: &BigInt) -> MPoly {
        if k.is_zero() {
            return MPoly::zero_with(self.vars.clone());
        }
        let terms = self
            .terms
            .iter()
            .map(|(te, c)| (te.iter().zip(e).map(|(a, b)| a + b).collect(), c * k))
            .collect();
        MPoly::from_map(self.vars.clone(), terms)
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut acc = MPoly::constant(&[], 1)
            .embed(&self.vars)
            .expect("constant embeds anywhere");
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `(sum of squared coefficients, largest absolute coefficient)`.
    pub fn norms(&self) -> (BigInt, BigInt) {
        let l2 = self.terms.values().map(|c| c * c).sum();
        let sup = self
            .terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default();
        (l2, sup)
    }

    /// Coefficients of `f(x1*B1, ..., xk*Bk)`.
    pub fn scaled(&self, bounds: &[BigInt]) -> Result<MPoly> {
        if bounds.len() != self.arity() {
            return domain("one bound per variable is required");
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut t = c.clone();
                for (b, &d) in bounds.iter().zip(e) {
                    t *= num_traits::pow(b.clone(), d as usize);
                }
                (e.clone(), t)
            })
            .collect();
        Ok(MPoly::from_map(self.vars.clone(), terms))
    }

    /// `||f(x1*B1, ..., xk*Bk)||_inf`.
    pub fn height(&self, bounds: &[BigInt]) -> Result<BigInt> {
        if bounds.iter().any(|b| !b.is_positive()) {
            return domain("height bounds must be positive");
        }
        Ok(self.scaled(bounds)?.norms().1)
    }

    /// Substitutes `var = value` and drops the variable.
    pub fn substitute(&self, var: &str, value: &BigInt) -> Result<MPoly> {
        let Some(idx) = self.var_index(var) else {
            return domain(format!("unknown variable {var}"));
        };
        let vars: Vec<String> = self.vars.iter().filter(|v| *v != var).cloned().collect();
        let mut out = MPoly::zero_with(vars);
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            let d = ne.remove(idx);
            out.add_term(ne, c * num_traits::pow(value.clone(), d as usize));
        }
        Ok(out)
    }

    /// Coefficients of `self` viewed as a polynomial in `var`: entry `k` is the
    /// coefficient of `var^k`, expressed over the remaining variables.
    pub fn coefficients_in(&self, var: &str) -> Result<Vec<MPoly>> {
        let Some(idx) = self.var_index(var) else {
            return domain(format!("unknown variable {var}"));
        };
        let vars: Vec<String> = self.vars.iter().filter(|v| *v != var).cloned().collect();
        let deg = self.degree_in(idx) as usize;
        let mut out = vec![MPoly::zero_with(vars); deg + 1];
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            let d = ne.remove(idx) as usize;
            out[d].terms.insert(ne, c.clone());
        }
        Ok(out)
    }

    /// `f(x1 + s1, ..., xk + sk)`.
    pub fn translate(&self, shifts: &[BigInt]) -> Result<MPoly> {
        if shifts.len() != self.arity() {
            return domain("one shift per variable is required");
        }
        let one = MPoly::constant(&[], 1).embed(&self.vars)?;
        let lin: Vec<MPoly> = (0..self.arity())
            .map(|i| {
                let mut e = vec![0; self.arity()];
                e[i] = 1;
                let mut p = MPoly::zero_with(self.vars.clone());
                p.add_term(e, BigInt::one());
                p.add_term(vec![0; self.arity()], shifts[i].clone());
                p
            })
            .collect();
        let mut out = MPoly::zero_with(self.vars.clone());
        for (e, c) in &self.terms {
            let mut t = one.scale(c);
            for (i, &d) in e.iter().enumerate() {
                if d > 0 {
                    t = &t * &lin[i].pow(d);
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Drops variables that do not occur.
    pub fn trim_vars(&self) -> MPoly {
        let keep: Vec<usize> = (0..self.arity())
            .filter(|&i| self.degree_in(i) > 0)
            .collect();
        let vars = keep.iter().map(|&i| self.vars[i].clone()).collect();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (keep.iter().map(|&i| e[i]).collect(), c.clone()))
            .collect();
        MPoly::from_map(vars, terms)
    }

    /// Dense coefficient list (constant first) when at most one variable occurs.
    pub fn to_dense_univariate(&self) -> Option<Vec<BigInt>> {
        let active: Vec<usize> = (0..self.arity())
            .filter(|&i| self.degree_in(i) > 0)
            .collect();
        if active.len() > 1 {
            return None;
        }
        let deg = active.first().map(|&i| self.degree_in(i)).unwrap_or(0) as usize;
        let mut out = vec![BigInt::zero(); deg + 1];
        for (e, c) in &self.terms {
            let d = active.first().map(|&i| e[i]).unwrap_or(0) as usize;
            out[d] = c.clone();
        }
        Some(out)
    }

    pub fn from_dense_univariate(var: &str, coeffs: &[BigInt]) -> MPoly {
        let mut p = MPoly::zero(&[var]);
        for (d, c) in coeffs.iter().enumerate() {
            p.add_term(vec![d as u32], c.clone());
        }
        p
    }

    pub fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and normalises the lex-leading coefficient to be positive.
    pub fn primitive(&self) -> MPoly {
        let g = self.content();
        if g.is_zero() {
            return self.clone();
        }
        let g = if self
            .terms
            .values()
            .next_back()
            .is_some_and(|c| c.is_negative())
        {
            -g
        } else {
            g
        };
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), c / &g))
            .collect();
        MPoly::from_map(self.vars.clone(), terms)
    }

    pub fn leading_term(&self) -> Option<(&Exponents, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder.
    pub fn exact_div(&self, divisor: &MPoly) -> Option<MPoly> {
        let (mut rem, divisor) = self.aligned(divisor);
        let (lead_e, lead_c) = divisor
            .leading_term()
            .map(|(e, c)| (e.clone(), c.clone()))?;
        if divisor.num_terms() == 1 {
            let mut terms = BTreeMap::new();
            for (e, c) in &rem.terms {
                if e.iter().zip(&lead_e).any(|(a, b)| a < b) {
                    return None;
                }
                let (q, r) = c.div_rem(&lead_c);
                if !r.is_zero() {
                    return None;
                }
                terms.insert(e.iter().zip(&lead_e).map(|(a, b)| a - b).collect(), q);
            }
            return Some(MPoly::from_map(rem.vars, terms));
        }
        let mut quotient = MPoly::zero_with(rem.vars.clone());
        while let Some((e, c)) = rem.leading_term().map(|(e, c)| (e.clone(), c.clone())) {
            if e.iter().zip(&lead_e).any(|(a, b)| a < b) {
                return None;
            }
            let (qc, r) = c.div_rem(&lead_c);
            if !r.is_zero() {
                return None;
            }
            let qe: Exponents = e.iter().zip(&lead_e).map(|(a, b)| a - b).collect();
            for (de, dc) in &divisor.terms {
                let te: Exponents = de.iter().zip(&qe).map(|(a, b)| a + b).collect();
                rem.add_term(te, -(dc * &qc));
            }
            quotient.add_term(qe, qc);
        }
        Some(quotient)
    }

    fn grlex_terms(&self) -> Vec<(&Exponents, &BigInt)> {
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        terms
    }

    /// Text form: a `vars:` header followed by one `coefficient e1 .. ek` line
    /// per term in descending graded lexicographic order.
    pub fn to_text(&self) -> String {
        let mut s = String::from("vars:");
        for v in &self.vars {
            s.push(' ');
            s.push_str(v);
        }
        s.push('\n');
        for (e, c) in self.grlex_terms() {
            s.push_str(&c.to_string());
            for d in e {
                s.push(' ');
                s.push_str(&d.to_string());
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<MPoly> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing vars header".into()))?;
        let names = header
            .trim()
            .strip_prefix("vars:")
            .ok_or_else(|| Error::Parse(format!("expected `vars:` header, got `{header}`")))?;
        let vars: Vec<String> = names.split_whitespace().map(str::to_string).collect();
        let mut seen = std::collections::HashSet::new();
        if !vars.iter().all(|v| seen.insert(v.clone())) {
            return Err(Error::Parse("duplicate variable name".into()));
        }
        let mut p = MPoly::zero_with(vars);
        for line in lines {
            let mut fields = line.split_whitespace();
            let c = fields.next().expect("non-empty line");
            let c = crate::arith::parse_bigint(c)?;
            let e: Vec<u32> = fields
                .map(|f| {
                    f.parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad exponent `{f}`")))
                })
                .collect::<Result<_>>()?;
            if e.len() != p.arity() {
                return Err(Error::Parse(format!(
                    "term `{line}` does not have {} exponents",
                    p.arity()
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.grlex_terms().into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .zip(&self.vars)
                .filter(|(d, _)| **d > 0)
                .map(|(d, v)| {
                    if *d == 1 {
                        v.clone()
                    } else {
                        format!("{v}^{d}")
                    }
                })
                .collect();
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{mag}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly[{}]({self})", self.vars.join(","))
    }
}

impl Add for &MPoly {
    type Output = MPoly;

    fn add(self, rhs: &MPoly) -> MPoly {
        let (mut a, b) = self.aligned(rhs);
        for (e, c) in b.terms {
            a.add_term(e, c);
        }
        a
    }
}

impl Sub for &MPoly {
    type Output = MPoly;

    fn sub(self, rhs: &MPoly) -> MPoly {
        let (mut a, b) = self.aligned(rhs);
        for (e, c) in b.terms {
            a.add_term(e, -c);
        }
        a
    }
}

impl Mul for &MPoly {
    type Output = MPoly;

    fn mul(self, rhs: &MPoly) -> MPoly {
        let (a, b) = self.aligned(rhs);
        let mut out = MPoly::zero_with(a.vars.clone());
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                out.add_term(ea.iter().zip(eb).map(|(x, y)| x + y).collect(), ca * cb);
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;

    fn neg(self) -> MPoly {
        self.scale(&-BigInt::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: MPoly) -> MPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// `true` when `g` is certified NOT to be a multiple of `f`: a nonzero
/// multiple always satisfies `||g||_2 >= 2^-((d+1)^(n+1)) * ||f||_inf`.
///
/// `d` is the largest single-variable degree over both polynomials (at least
/// one) and `n` the number of variables in their union. `false` means only
/// that no certificate exists.
pub fn not_multiple_certificate(g: &MPoly, f: &MPoly) -> Result<bool> {
    if g.is_zero() || f.is_zero() {
        return domain("multiple certificate needs nonzero polynomials");
    }
    let (g, f) = g.aligned(f);
    let d = g.max_degree().max(f.max_degree()).max(1) as u64;
    let n = g.arity().max(1) as u32;
    let exponent = (d + 1)
        .checked_pow(n + 1)
        .ok_or_else(|| Error::Resource("certificate exponent overflow".into()))?;
    let (g_l2sq, _) = g.norms();
    let (_, f_sup) = f.norms();
    // ||g||_2^2 * 2^(2e) < ||f||_inf^2
    let shift = usize::try_from(2 * exponent)
        .map_err(|_| Error::Resource("certificate exponent overflow".into()))?;
    if shift > (1 << 26) {
        return Ok(false);
    }
    Ok((g_l2sq << shift) < &f_sup * &f_sup)
}

/// Irreducibility of `a*x*y + b*x + c*y + e` over the integers: primitive and
/// `a*e != b*c` (or `a == 0` with a nonconstant linear part).
pub fn is_irreducible_bilinear(f: &MPoly) -> Result<bool> {
    let f = f.trim_vars();
    if f.arity() > 2 || f.max_degree() > 1 || f.total_degree() > 2 {
        return domain("polynomial is not bilinear in two variables");
    }
    if f.is_constant() {
        return Ok(false);
    }
    if !f.content().is_one() {
        return Ok(false);
    }
    if f.arity() < 2 {
        return Ok(true);
    }
    let a = f.coeff(&[1, 1]);
    let b = f.coeff(&[1, 0]);
    let c = f.coeff(&[0, 1]);
    let e = f.coeff(&[0, 0]);
    if a.is_zero() {
        return Ok(true);
    }
    Ok(&a * &e != &b * &c)
}
