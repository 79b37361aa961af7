use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Integer, Rational};

use super::ExactError;

/// Element of Q(i), kept as a pair of reduced rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussianRational::new(Rational::from(re), Rational::from(im))
    }

    pub fn real(re: Rational) -> Self {
        GaussianRational::new(re, Rational::new())
    }

    pub fn zero() -> Self {
        GaussianRational::default()
    }

    pub fn one() -> Self {
        GaussianRational::from_ints(1, 0)
    }

    pub fn i() -> Self {
        GaussianRational::from_ints(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn is_real(&self) -> bool {
        self.im == 0
    }

    pub fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), Rational::from(-&self.im))
    }

    /// `x * conj(x)`, a non-negative rational.
    pub fn norm(&self) -> Rational {
        Rational::from(self.re.square_ref()) + Rational::from(self.im.square_ref())
    }

    pub fn is_gaussian_integer(&self) -> bool {
        *self.re.denom() == 1 && *self.im.denom() == 1
    }

    pub fn recip(&self) -> Result<Self, ExactError> {
        let n = self.norm();
        if n == 0 {
            return Err(ExactError::DivisionByZero);
        }
        Ok(GaussianRational::new(
            Rational::from(&self.re / &n),
            Rational::from(-&self.im) / &n,
        ))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ExactError> {
        Ok(self * &other.recip()?)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        GaussianRational::new(Rational::from(&self.re * k), Rational::from(&self.im * k))
    }

    /// Integer power; negative exponents need a nonzero base.
    pub fn pow(&self, e: i64) -> Result<Self, ExactError> {
        let mut base = if e < 0 { self.recip()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = GaussianRational::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        Ok(acc)
    }

    /// Valuation at the ramified prime 1+i (norm 2).
    ///
    /// `2 = -i(1+i)^2`, so a rational denominator `2^k` costs `2k`.
    pub fn ord_one_plus_i(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let lcm = Integer::from(self.re.denom().lcm_ref(self.im.denom()));
        let mut a = Integer::from(self.re.numer() * Integer::from(&lcm / self.re.denom()));
        let mut b = Integer::from(self.im.numer() * Integer::from(&lcm / self.im.denom()));
        let mut v: i64 = 0;
        loop {
            let s = Integer::from(&a + &b);
            if !s.is_even() {
                break;
            }
            // (a + bi)/(1 + i) = ((a + b) + (b - a)i)/2
            let na = Integer::from(&a + &b) >> 1;
            let nb = Integer::from(&b - &a) >> 1;
            a = na;
            b = nb;
            v += 1;
        }
        let mut d = lcm;
        let twos = d.remove_factor_mut(&Integer::from(2));
        Some(v - 2 * twos as i64)
    }
}

impl From<Rational> for GaussianRational {
    fn from(r: Rational) -> Self {
        GaussianRational::real(r)
    }
}

impl Add<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(
            Rational::from(&self.re + &o.re),
            Rational::from(&self.im + &o.im),
        )
    }
}

impl Sub<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(
            Rational::from(&self.re - &o.re),
            Rational::from(&self.im - &o.im),
        )
    }
}

impl Mul<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        if self.im == 0 && o.im == 0 {
            return GaussianRational::real(Rational::from(&self.re * &o.re));
        }
        let re = Rational::from(&self.re * &o.re) - Rational::from(&self.im * &o.im);
        let im = Rational::from(&self.re * &o.im) + Rational::from(&self.im * &o.re);
        GaussianRational::new(re, im)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(Rational::from(-&self.re), Rational::from(-&self.im))
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re == 0, self.im == 0) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                if self.im < 0 {
                    write!(f, "{}-{}i", self.re, Rational::from(-&self.im))
                } else {
                    write!(f, "{}+{}i", self.re, self.im)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(a: i64, b: i64, c: i64) -> GaussianRational {
        GaussianRational::new(Rational::from((a, c)), Rational::from((b, c)))
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = GaussianRational::i();
        assert_eq!(&i * &i, GaussianRational::from_ints(-1, 0));
    }

    #[test]
    fn division_inverts_multiplication() {
        let x = g(3, -7, 5);
        let y = g(2, 9, 4);
        let q = (&x * &y).checked_div(&y).unwrap();
        assert_eq!(q, x);
        assert!(GaussianRational::zero().recip().is_err());
    }

    #[test]
    fn valuation_at_one_plus_i() {
        assert_eq!(GaussianRational::from_ints(2, 0).ord_one_plus_i(), Some(2));
        assert_eq!(GaussianRational::from_ints(1, 1).ord_one_plus_i(), Some(1));
        assert_eq!(GaussianRational::from_ints(1, -1).ord_one_plus_i(), Some(1));
        assert_eq!(GaussianRational::from_ints(3, 0).ord_one_plus_i(), Some(0));
        assert_eq!(g(1, 0, 4).ord_one_plus_i(), Some(-4));
        assert_eq!(g(1, 1, 2).ord_one_plus_i(), Some(-1));
    }

    #[test]
    fn negative_powers() {
        let z = GaussianRational::from_ints(1, 1);
        let w = z.pow(-3).unwrap();
        assert_eq!(&w * &z.pow(3).unwrap(), GaussianRational::one());
    }

    #[test]
    fn display_forms() {
        assert_eq!(g(1, -2, 3).to_string(), "1/3-2/3i");
        assert_eq!(GaussianRational::i().to_string(), "1i");
    }
}
