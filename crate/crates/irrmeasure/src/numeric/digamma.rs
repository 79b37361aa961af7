//! Digamma at rational points: upward recurrence, then the Stirling-type
//! series with Bernoulli numbers and a tracked truncation bound.

use rug::{Float, Integer, Rational};

use super::NumericError;
use crate::exact::{binomial, BigFloat, Digits};

/// Bernoulli numbers `B_0..=B_n` (with `B_1 = -1/2`).
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
    b.push(Rational::from(1));
    for m in 1..=n {
        // sum_{j=0}^{m} C(m+1, j) B_j = 0
        let mut acc = Rational::new();
        for (j, bj) in b.iter().enumerate() {
            if *bj != 0 {
                acc += Rational::from(bj * binomial(m as i64 + 1, j as i64));
            }
        }
        b.push(-acc / Integer::from(m + 1));
    }
    b
}

/// Digamma value with an explicit bound on the series truncation error.
#[derive(Debug, Clone)]
pub struct CertifiedDigamma {
    pub value: BigFloat,
    pub error_bound: BigFloat,
}

/// `psi(x)` for rational `x > 0`.
pub fn digamma(x: &Rational, digits: Digits) -> Result<CertifiedDigamma, NumericError> {
    if *x <= 0 {
        return Err(NumericError::DigammaDomain(x.to_string()));
    }
    let work = digits.plus(10);
    let bits = work.bits();
    let eps = Float::with_val(bits, digits.plus(5).epsilon());
    let threshold = 20.max((0.4 * work.0 as f64).ceil() as i64 + 1);

    // psi(x) = psi(x + N) - sum_{j<N} 1/(x+j), exact rational shift
    let mut shifted = x.clone();
    let mut correction = Rational::new();
    while shifted < threshold {
        correction += Rational::from(shifted.recip_ref());
        shifted += 1;
    }

    let y = Float::with_val(bits, &shifted);
    let y2 = Float::with_val(bits, y.square_ref());
    let mut value = Float::with_val(bits, y.ln_ref()) - Float::with_val(bits, 0.5) / &y;
    let mut power = y2.clone();
    let mut k = 1usize;
    let mut bern = bernoulli_numbers(64);
    let error_bound = loop {
        if 2 * k + 2 >= bern.len() {
            bern = bernoulli_numbers(2 * bern.len());
        }
        let term = Float::with_val(bits, &bern[2 * k]) / Float::with_val(bits, &power * (2 * k) as u32);
        value -= &term;
        power *= &y2;
        let next = Float::with_val(bits, &bern[2 * k + 2])
            / Float::with_val(bits, &power * (2 * k + 2) as u32);
        let next = next.abs();
        if next < eps {
            break next;
        }
        k += 1;
    };
    value -= Float::with_val(bits, &correction);
    Ok(CertifiedDigamma {
        value: BigFloat::new(value, digits),
        error_bound: BigFloat::new(error_bound, digits),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_small() {
        let b = bernoulli_numbers(8);
        assert_eq!(b[1], Rational::from((-1, 2)));
        assert_eq!(b[2], Rational::from((1, 6)));
        assert_eq!(b[4], Rational::from((-1, 30)));
        assert_eq!(b[6], Rational::from((1, 42)));
        assert_eq!(b[7], 0);
        assert_eq!(b[8], Rational::from((-1, 30)));
    }

    #[test]
    fn matches_mpfr_digamma() {
        let d = Digits(60);
        for (p, q) in [(1, 2), (2, 3), (1, 8), (6, 7), (1, 1), (37, 5), (200, 3)] {
            let x = Rational::from((p, q));
            let ours = digamma(&x, d).unwrap();
            let reference = Float::with_val(d.bits() + 64, &x).digamma();
            let reference = BigFloat::new(reference, d);
            assert!(ours.value.agreeing_digits(&reference) > 58.0, "psi({x})");
            assert!(ours.error_bound.to_f64() < 1e-60);
        }
    }

    #[test]
    fn euler_gamma_at_one() {
        let d = Digits(40);
        let psi1 = digamma(&Rational::from(1), d).unwrap().value;
        let gamma = BigFloat::parse("0.5772156649015328606065120900824024310422", d).unwrap();
        assert!(psi1.within(&-&gamma, 1e-39));
    }

    #[test]
    fn rejects_non_positive() {
        assert!(digamma(&Rational::from(0), Digits(20)).is_err());
        assert!(digamma(&Rational::from(-3), Digits(20)).is_err());
    }
}
