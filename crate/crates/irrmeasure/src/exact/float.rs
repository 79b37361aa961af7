use std::cmp::Ordering;
use std::fmt;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::GaussianRational;

const LOG2_10: f64 = std::f64::consts::LOG2_10;
const GUARD_BITS: u32 = 32;

/// Working precision in decimal digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Digits(pub u32);

impl Digits {
    pub const DEFAULT: Digits = Digits(60);

    /// Binary precision carrying these digits plus guard bits.
    pub fn bits(self) -> u32 {
        (self.0 as f64 * LOG2_10).ceil() as u32 + GUARD_BITS
    }

    pub fn plus(self, extra: u32) -> Digits {
        Digits(self.0 + extra)
    }

    /// `10^-digits` as a float at this precision.
    pub fn epsilon(self) -> Float {
        let ten = Float::with_val(self.bits(), 10);
        ten.pow(-(self.0 as i32))
    }
}

impl Default for Digits {
    fn default() -> Self {
        Digits::DEFAULT
    }
}

/// A float value together with the decimal precision it was computed at.
#[derive(Debug, Clone)]
pub struct BigFloat {
    value: Float,
    digits: Digits,
}

impl BigFloat {
    pub fn new(value: Float, digits: Digits) -> Self {
        let value = Float::with_val(digits.bits(), value);
        BigFloat { value, digits }
    }

    pub fn from_f64(x: f64, digits: Digits) -> Self {
        BigFloat::new(Float::with_val(digits.bits(), x), digits)
    }

    pub fn from_rational(r: &Rational, digits: Digits) -> Self {
        BigFloat::new(Float::with_val(digits.bits(), r), digits)
    }

    pub fn from_integer(z: &Integer, digits: Digits) -> Self {
        BigFloat::new(Float::with_val(digits.bits(), z), digits)
    }

    /// Parses a decimal literal such as `"3.89139977"`.
    pub fn parse(s: &str, digits: Digits) -> Option<Self> {
        let parsed = Float::parse(s).ok()?;
        Some(BigFloat::new(Float::with_val(digits.bits(), parsed), digits))
    }

    pub fn zero(digits: Digits) -> Self {
        BigFloat::new(Float::new(digits.bits()), digits)
    }

    pub fn pi(digits: Digits) -> Self {
        BigFloat::new(Float::with_val(digits.bits(), Constant::Pi), digits)
    }

    pub fn ln_of_rational(r: &Rational, digits: Digits) -> Self {
        BigFloat::new(Float::with_val(digits.bits(), r).ln(), digits)
    }

    pub fn value(&self) -> &Float {
        &self.value
    }

    pub fn into_value(self) -> Float {
        self.value
    }

    pub fn digits(&self) -> Digits {
        self.digits
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    pub fn abs(&self) -> Self {
        BigFloat::new(Float::with_val(self.digits.bits(), self.value.abs_ref()), self.digits)
    }

    pub fn ln(&self) -> Self {
        BigFloat::new(Float::with_val(self.digits.bits(), self.value.ln_ref()), self.digits)
    }

    pub fn exp(&self) -> Self {
        BigFloat::new(Float::with_val(self.digits.bits(), self.value.exp_ref()), self.digits)
    }

    pub fn sqrt(&self) -> Self {
        BigFloat::new(Float::with_val(self.digits.bits(), self.value.sqrt_ref()), self.digits)
    }

    pub fn recip(&self) -> Self {
        BigFloat::new(Float::with_val(self.digits.bits(), self.value.recip_ref()), self.digits)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }

    pub fn is_sign_positive(&self) -> bool {
        self.value.is_sign_positive() && !self.value.is_zero()
    }

    /// `|self - other|`.
    pub fn distance(&self, other: &BigFloat) -> BigFloat {
        (self - other).abs()
    }

    /// True when `|self - other| < tol`.
    pub fn within(&self, other: &BigFloat, tol: f64) -> bool {
        let d = self.distance(other);
        d.value < tol
    }

    /// Number of agreeing significant decimal digits, `-log10 |x-y|/|y|`.
    pub fn agreeing_digits(&self, reference: &BigFloat) -> f64 {
        let diff = self.distance(reference);
        if diff.is_zero() {
            return self.digits.0.min(reference.digits.0) as f64;
        }
        let scale = reference.abs();
        let rel = if scale.is_zero() { diff } else { &diff / &scale };
        -rel.value.clone().log10().to_f64()
    }

    /// Fixed notation with `places` digits after the point.
    pub fn to_fixed(&self, places: usize) -> String {
        if !self.value.is_finite() {
            return self.value.to_string();
        }
        let scale = Integer::from(10).pow(places as u32);
        let scaled = Float::with_val(self.digits.bits(), &self.value * &scale);
        let rounded = scaled.round().to_integer().unwrap_or_default();
        let negative = rounded < 0;
        let mut s = rounded.abs().to_string();
        if places > 0 {
            if s.len() <= places {
                s = format!("{}{}", "0".repeat(places + 1 - s.len()), s);
            }
            s.insert(s.len() - places, '.');
        }
        if negative {
            s.insert(0, '-');
        }
        s
    }

    /// Scientific notation with `sig` significant digits.
    pub fn to_sci(&self, sig: usize) -> String {
        self.value.to_string_radix(10, Some(sig.max(1)))
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let places = f.precision().unwrap_or(self.digits.0 as usize);
        write!(f, "{}", self.to_fixed(places))
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.partial_cmp(&other.value)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl std::ops::$tr<&BigFloat> for &BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: &BigFloat) -> BigFloat {
                let digits = self.digits.max(rhs.digits);
                BigFloat::new(Float::with_val(digits.bits(), &self.value $op &rhs.value), digits)
            }
        }
        impl std::ops::$tr<BigFloat> for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: BigFloat) -> BigFloat {
                &self $op &rhs
            }
        }
    };
}
binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);
binop!(Div, div, /);

impl std::ops::Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat::new(Float::with_val(self.digits.bits(), -&self.value), self.digits)
    }
}

/// Complex number as a pair of MPFR floats sharing one binary precision.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexFloat {
    pub re: Float,
    pub im: Float,
}

impl ComplexFloat {
    pub fn new(re: Float, im: Float) -> Self {
        ComplexFloat { re, im }
    }

    pub fn zero(bits: u32) -> Self {
        ComplexFloat::new(Float::new(bits), Float::new(bits))
    }

    pub fn real(re: Float) -> Self {
        let bits = re.prec();
        ComplexFloat::new(re, Float::new(bits))
    }

    pub fn from_gaussian(g: &GaussianRational, bits: u32) -> Self {
        ComplexFloat::new(Float::with_val(bits, &g.re), Float::with_val(bits, &g.im))
    }

    pub fn from_f64(re: f64, im: f64, bits: u32) -> Self {
        ComplexFloat::new(Float::with_val(bits, re), Float::with_val(bits, im))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn with_prec(&self, bits: u32) -> Self {
        ComplexFloat::new(Float::with_val(bits, &self.re), Float::with_val(bits, &self.im))
    }

    pub fn conj(&self) -> Self {
        ComplexFloat::new(self.re.clone(), Float::with_val(self.prec(), -&self.im))
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn arg(&self) -> Float {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        ComplexFloat::new(self.abs().ln(), self.arg())
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let m = Float::with_val(p, self.re.exp_ref());
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        ComplexFloat::new(Float::with_val(p, &m * &c), m * s)
    }

    pub fn scale(&self, k: &Float) -> Self {
        let p = self.prec();
        ComplexFloat::new(Float::with_val(p, &self.re * k), Float::with_val(p, &self.im * k))
    }

    pub fn recip(&self) -> Self {
        let p = self.prec();
        let n = self.norm_sqr();
        ComplexFloat::new(
            Float::with_val(p, &self.re / &n),
            Float::with_val(p, -&self.im) / &n,
        )
    }

    pub fn powu(&self, mut e: u32) -> Self {
        let p = self.prec();
        let mut base = self.clone();
        let mut acc = ComplexFloat::real(Float::with_val(p, 1));
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl std::ops::Add<&ComplexFloat> for &ComplexFloat {
    type Output = ComplexFloat;
    fn add(self, o: &ComplexFloat) -> ComplexFloat {
        let p = self.prec().max(o.prec());
        ComplexFloat::new(Float::with_val(p, &self.re + &o.re), Float::with_val(p, &self.im + &o.im))
    }
}

impl std::ops::Sub<&ComplexFloat> for &ComplexFloat {
    type Output = ComplexFloat;
    fn sub(self, o: &ComplexFloat) -> ComplexFloat {
        let p = self.prec().max(o.prec());
        ComplexFloat::new(Float::with_val(p, &self.re - &o.re), Float::with_val(p, &self.im - &o.im))
    }
}

impl std::ops::Mul<&ComplexFloat> for &ComplexFloat {
    type Output = ComplexFloat;
    fn mul(self, o: &ComplexFloat) -> ComplexFloat {
        let p = self.prec().max(o.prec());
        let rr = Float::with_val(p, &self.re * &o.re);
        let ii = Float::with_val(p, &self.im * &o.im);
        let ri = Float::with_val(p, &self.re * &o.im);
        let ir = Float::with_val(p, &self.im * &o.re);
        ComplexFloat::new(rr - ii, ri + ir)
    }
}

impl std::ops::Div<&ComplexFloat> for &ComplexFloat {
    type Output = ComplexFloat;
    fn div(self, o: &ComplexFloat) -> ComplexFloat {
        self * &o.recip()
    }
}

impl std::ops::Neg for &ComplexFloat {
    type Output = ComplexFloat;
    fn neg(self) -> ComplexFloat {
        let p = self.prec();
        ComplexFloat::new(Float::with_val(p, -&self.re), Float::with_val(p, -&self.im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_rendering() {
        let d = Digits(30);
        let x = BigFloat::parse("-0.0625", d).unwrap();
        assert_eq!(x.to_fixed(3), "-0.063");
        assert_eq!(BigFloat::from_f64(12.5, d).to_fixed(0), "13");
        assert_eq!(BigFloat::from_f64(0.001, d).to_fixed(4), "0.0010");
    }

    #[test]
    fn complex_log_of_one_plus_i() {
        let bits = Digits(40).bits();
        let z = ComplexFloat::from_f64(1.0, 1.0, bits).ln();
        let half_ln2 = Float::with_val(bits, 2).ln() / 2u32;
        let quarter_pi = Float::with_val(bits, Constant::Pi) / 4u32;
        assert!((z.re - half_ln2).abs() < 1e-38);
        assert!((z.im - quarter_pi).abs() < 1e-38);
    }

    #[test]
    fn complex_powers_match_repeated_products() {
        let bits = 128;
        let z = ComplexFloat::from_f64(0.5, -1.25, bits);
        let mut acc = ComplexFloat::real(Float::with_val(bits, 1));
        for _ in 0..7 {
            acc = &acc * &z;
        }
        let p = z.powu(7);
        assert!((&acc - &p).abs() < 1e-30);
    }
}
