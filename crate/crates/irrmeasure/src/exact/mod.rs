//! Exact integers, rationals, Gaussian rationals, polynomials, primes, and
//! the precision-tagged float carrier used for every numeric output.

mod float;
mod gaussian;
mod poly;
mod primes;

pub use float::{BigFloat, ComplexFloat, Digits};
pub use gaussian::GaussianRational;
pub use poly::{Field, Poly, Ring};
pub use primes::{is_prime, lcm_upto, ord_p, ordp_factorial, primes_in, primes_upto};
pub use rug::{Integer, Rational};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid range [{lo}, {hi}]")]
    InvalidRange { lo: u64, hi: u64 },
}

/// Binomial coefficient C(n, k), zero outside 0 <= k <= n.
pub fn binomial(n: i64, k: i64) -> Integer {
    if n < 0 || k < 0 || k > n {
        return Integer::new();
    }
    Integer::from(Integer::binomial_u(n as u32, k as u32))
}

pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// `r^e` for a rational and a signed exponent.
pub fn rational_pow(r: &Rational, e: i64) -> Rational {
    use rug::ops::Pow;
    if e >= 0 {
        Rational::from(r.pow(e as u32))
    } else {
        assert!(*r != 0, "negative power of zero");
        Rational::from(r.clone().recip().pow((-e) as u32))
    }
}

pub fn is_integer(r: &Rational) -> bool {
    *r.denom() == 1
}
