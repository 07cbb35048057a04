//! Integer factorization experiments built around difference-of-squares
//! search, small-root lattice methods and resultant elimination.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`]: big-integer helpers, primality, balanced semiprime generation.
//! * [`fermat`]: classic, triangular-accelerated and shifted Fermat search.
//! * [`poly`]: sparse multivariate integer polynomials, resultants, norms and
//!   univariate integer root extraction.
//! * [`lattice`]: exact integral LLL reduction and basis diagnostics.
//! * [`smallroots`]: bivariate small-root solver and its factoring applications.
//! * [`trivariate`]: the trivariate lattice pipeline and its independence
//!   diagnostics.
//! * [`census`]: counts of balanced semiprimes below a threshold.

pub mod arith;
pub mod census;
mod error;
pub mod fermat;
pub mod lattice;
pub mod poly;
pub(crate) mod shift;
pub mod smallroots;
pub mod trivariate;

pub use error::{Error, Result};
