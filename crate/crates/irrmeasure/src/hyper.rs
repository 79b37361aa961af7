//! Hypergeometric series used as independent oracles: Gauss ₂F₁, Appell F₁
//! and two Ramanujan series for `1/π`.
//!
//! Terms are exact rationals times a power of the argument; the rational
//! part is converted once per term.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use thiserror::Error;

use crate::exact::{BigFloat, ComplexFloat, Digits};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HyperError {
    #[error("series diverges at |argument| = {0}")]
    Divergent(String),
    #[error("lower parameter {0} is a non-positive integer")]
    PoleInLowerParameter(String),
    #[error("series did not reach the target precision within {0} terms")]
    TooManyTerms(usize),
    #[error("unknown Ramanujan series {0}; available: 39, 44")]
    UnknownSeries(u32),
}

const MAX_TERMS: usize = 200_000;

/// Rising factorial `(a)_n`.
pub fn pochhammer(a: &Rational, n: u32) -> Rational {
    (0..n).fold(Rational::from(1), |acc, k| acc * Rational::from(a + k))
}

fn nonpositive_integer(r: &Rational) -> Option<u32> {
    if *r.denom() == 1 && *r <= 0 {
        (-r.numer().clone()).to_u32()
    } else {
        None
    }
}

/// Upper and lower parameters of ₂F₁.
#[derive(Debug, Clone, PartialEq)]
pub struct Gauss2F1 {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl Gauss2F1 {
    pub fn new(a: impl Into<Rational>, b: impl Into<Rational>, c: impl Into<Rational>) -> Self {
        Gauss2F1 { a: a.into(), b: b.into(), c: c.into() }
    }

    /// Ratio `t_{k+1}/t_k` without the argument.
    fn ratio(&self, k: u32) -> Rational {
        Rational::from(&self.a + k) * Rational::from(&self.b + k) / (Rational::from(&self.c + k) * (k + 1))
    }

    /// Exact rational coefficient of `z^k`.
    pub fn coefficient(&self, k: u32) -> Rational {
        pochhammer(&self.a, k) * pochhammer(&self.b, k) / (pochhammer(&self.c, k) * crate::exact::factorial(k))
    }

    fn terminating_degree(&self) -> Option<u32> {
        match (nonpositive_integer(&self.a), nonpositive_integer(&self.b)) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        }
    }

    fn check_lower(&self) -> Result<(), HyperError> {
        if let Some(c) = nonpositive_integer(&self.c) {
            if self.terminating_degree().is_none_or(|d| d >= c) {
                return Err(HyperError::PoleInLowerParameter(self.c.to_string()));
            }
        }
        Ok(())
    }

    /// Direct summation of the defining series, with a ratio tail bound.
    pub fn sum_direct(&self, z: &ComplexFloat, digits: Digits) -> Result<ComplexFloat, HyperError> {
        self.check_lower()?;
        let bits = digits.plus(15).bits();
        let z = z.with_prec(bits);
        let az = z.abs();
        let limit = match self.terminating_degree() {
            Some(d) => d as usize + 1,
            None => {
                if az >= 1 {
                    return Err(HyperError::Divergent(az.to_f64().to_string()));
                }
                MAX_TERMS
            }
        };
        let eps = Float::with_val(bits, digits.epsilon());
        let mut coeff = Rational::from(1);
        let mut power = ComplexFloat::real(Float::with_val(bits, 1));
        let mut sum = ComplexFloat::zero(bits);
        for k in 0..limit as u32 {
            let term = power.scale(&Float::with_val(bits, &coeff));
            sum = &sum + &term;
            coeff *= self.ratio(k);
            power = &power * &z;
            if coeff == 0 {
                return Ok(sum);
            }
            if limit == MAX_TERMS {
                // |t_{j+1}/t_j| <= rho for all j > k
                let next = Float::with_val(bits, &coeff).abs() * power.abs();
                if let Some(rho) = self.tail_ratio(k + 1, &az) {
                    let tail = Float::with_val(bits, &next / (Float::with_val(bits, 1) - &rho));
                    let scale = sum.abs().max(&Float::with_val(bits, 1));
                    if tail < Float::with_val(bits, &eps * &scale) {
                        return Ok(sum);
                    }
                }
            }
        }
        if limit == MAX_TERMS {
            Err(HyperError::TooManyTerms(MAX_TERMS))
        } else {
            Ok(sum)
        }
    }

    /// Uniform bound `sup_{j>=k} |ratio(j)|·|z|` when it is below 1.
    fn tail_ratio(&self, k: u32, az: &Float) -> Option<Float> {
        let ck = Rational::from(&self.c + k);
        if ck <= 0 {
            return None;
        }
        let f1 = Rational::from(1) + Rational::from(&self.a - 1u32).abs() / (k + 1);
        let f2 = Rational::from(1) + Rational::from(&self.b - &self.c).abs() / ck;
        let rho = Float::with_val(az.prec(), &(f1 * f2)) * az;
        (rho < 1).then_some(rho)
    }

    /// `(1-z)^{-a} ₂F₁(a, c-b; c; z/(z-1))`.
    pub fn sum_pfaff(&self, z: &ComplexFloat, digits: Digits) -> Result<ComplexFloat, HyperError> {
        let bits = digits.plus(15).bits();
        let z = z.with_prec(bits);
        let one = ComplexFloat::real(Float::with_val(bits, 1));
        let one_minus = &one - &z;
        let w = &(-&z) / &one_minus;
        let swapped = Gauss2F1::new(self.a.clone(), Rational::from(&self.c - &self.b), self.c.clone());
        let inner = swapped.sum_direct(&w, digits.plus(5))?;
        let factor = (one_minus.ln().scale(&Float::with_val(bits, &-self.a.clone()))).exp();
        Ok(&factor * &inner)
    }

    /// Value of the series, by direct summation or after the Pfaff
    /// transformation, whichever has the smaller argument.
    pub fn eval(&self, z: &ComplexFloat, digits: Digits) -> Result<ComplexFloat, HyperError> {
        self.check_lower()?;
        if self.terminating_degree().is_some() {
            return self.sum_direct(z, digits);
        }
        let bits = digits.plus(15).bits();
        let az = z.abs();
        let one = ComplexFloat::real(Float::with_val(bits, 1));
        let w = (&(-z) / &(&one - z)).abs();
        if az > 1 {
            return Err(HyperError::Divergent(az.to_f64().to_string()));
        }
        if az == 1 {
            // on the circle (z != 1) the series converges iff c - a - b > -1
            let excess = Rational::from(&self.c - &self.a) - &self.b;
            if excess <= -1 || w >= 1 {
                return Err(HyperError::Divergent(az.to_f64().to_string()));
            }
        }
        if az <= 0.75 || w >= az {
            self.sum_direct(z, digits)
        } else {
            self.sum_pfaff(z, digits)
        }
    }

    /// Alternating-series acceleration (Cohen, Rodriguez Villegas, Zagier)
    /// for a real argument in `[-1, 0)`: an evaluation route independent
    /// of [`Gauss2F1::eval`].
    pub fn eval_alternating(&self, x: &Rational, digits: Digits) -> Result<BigFloat, HyperError> {
        self.check_lower()?;
        if *x >= 0 || *x < -1 {
            return Err(HyperError::Divergent(x.to_string()));
        }
        let bits = digits.plus(20).bits();
        let t = Rational::from(-x);
        let n = (1.31 * digits.0 as f64).ceil() as i64 + 10;
        let d = {
            let r = (Float::with_val(bits, 8).sqrt() + 3u32).pow(n as u32);
            Float::with_val(bits, &r + r.clone().recip()) / 2u32
        };
        let mut b = Float::with_val(bits, -1);
        let mut c = Float::with_val(bits, -&d);
        let mut s = Float::with_val(bits, 0);
        let mut u = Rational::from(1);
        for k in 0..n {
            c = Float::with_val(bits, &b - &c);
            s += Float::with_val(bits, &c * &u);
            let kk = k as u32;
            u *= self.ratio(kk) * &t;
            let num = Float::with_val(bits, (k + n) * (k - n)) * &b;
            b = num / Float::with_val(bits, (2 * k + 1) * (k + 1)) * 2u32;
        }
        Ok(BigFloat::new(s / d, digits))
    }
}

/// Parameters of the Appell series `F1(A; B, B'; C; X, Y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AppellF1 {
    pub a: Rational,
    pub b: Rational,
    pub b_prime: Rational,
    pub c: Rational,
}

impl AppellF1 {
    pub fn new(a: impl Into<Rational>, b: impl Into<Rational>, b_prime: impl Into<Rational>, c: impl Into<Rational>) -> Self {
        AppellF1 { a: a.into(), b: b.into(), b_prime: b_prime.into(), c: c.into() }
    }

    /// Value at `(X, Y)`. A non-positive integer `B'` (or `B`) turns the
    /// series into a finite combination of ₂F₁ values, which is valid on
    /// the ₂F₁ domain of the other argument; otherwise both arguments must
    /// lie in the open unit disc and the series is summed by diagonals.
    pub fn eval(&self, x: &ComplexFloat, y: &ComplexFloat, digits: Digits) -> Result<ComplexFloat, HyperError> {
        if let Some(n) = nonpositive_integer(&self.b_prime) {
            return self.terminating(x, y, n, digits);
        }
        if let Some(n) = nonpositive_integer(&self.b) {
            let swapped = AppellF1::new(self.a.clone(), self.b_prime.clone(), self.b.clone(), self.c.clone());
            return swapped.terminating(y, x, n, digits);
        }
        self.diagonal(x, y, digits)
    }

    /// `Σ_μ (B')_μ (A)_μ / ((C)_μ μ!) Y^μ ₂F₁(A+μ, B; C+μ; X)`.
    fn terminating(&self, x: &ComplexFloat, y: &ComplexFloat, n: u32, digits: Digits) -> Result<ComplexFloat, HyperError> {
        let bits = digits.plus(15).bits();
        let y = y.with_prec(bits);
        let mut sum = ComplexFloat::zero(bits);
        let mut power = ComplexFloat::real(Float::with_val(bits, 1));
        for mu in 0..=n {
            let coeff = pochhammer(&self.b_prime, mu) * pochhammer(&self.a, mu)
                / (pochhammer(&self.c, mu) * crate::exact::factorial(mu));
            if coeff != 0 {
                let inner = Gauss2F1::new(Rational::from(&self.a + mu), self.b.clone(), Rational::from(&self.c + mu))
                    .eval(x, digits.plus(5))?;
                sum = &sum + &(&inner * &power).scale(&Float::with_val(bits, &coeff));
            }
            power = &power * &y;
        }
        Ok(sum)
    }

    fn diagonal(&self, x: &ComplexFloat, y: &ComplexFloat, digits: Digits) -> Result<ComplexFloat, HyperError> {
        let bits = digits.plus(15).bits();
        let (x, y) = (x.with_prec(bits), y.with_prec(bits));
        let r = x.abs().max(&y.abs());
        if r >= 1 {
            return Err(HyperError::Divergent(r.to_f64().to_string()));
        }
        let eps = Float::with_val(bits, digits.epsilon());
        let mut sum = ComplexFloat::zero(bits);
        // bound_s = |(A)_s/(C)_s| Σ_{i+j=s} |(B)_i/i!| |(B')_j/j!| r^s
        let mut history: Vec<Float> = Vec::new();
        for s in 0..MAX_TERMS as u32 {
            let outer = pochhammer(&self.a, s) / pochhammer(&self.c, s);
            let mut diag = ComplexFloat::zero(bits);
            let mut bound = Float::with_val(bits, 0);
            for i in 0..=s {
                let j = s - i;
                let ci = pochhammer(&self.b, i) / crate::exact::factorial(i);
                let cj = pochhammer(&self.b_prime, j) / crate::exact::factorial(j);
                let coeff = Rational::from(&outer * &ci) * &cj;
                let term = (&x.powu(i) * &y.powu(j)).scale(&Float::with_val(bits, &coeff));
                diag = &diag + &term;
                bound += Float::with_val(bits, Rational::from(&ci * &cj).abs());
            }
            bound *= Float::with_val(bits, outer.abs()) * Float::with_val(bits, (&r).pow(s));
            sum = &sum + &diag;
            history.push(bound);
            if s >= 8 {
                let k = history.len();
                let rho = (k - 4..k)
                    .map(|i| Float::with_val(bits, &history[i] / &history[i - 1]))
                    .fold(Float::with_val(bits, 0), |a, b| a.max(&b));
                if rho < 1 {
                    let tail = Float::with_val(bits, &history[k - 1] * &rho) / (Float::with_val(bits, 1) - &rho);
                    let scale = sum.abs().max(&Float::with_val(bits, 1));
                    if tail < Float::with_val(bits, &eps * &scale) {
                        return Ok(sum);
                    }
                }
            }
        }
        Err(HyperError::TooManyTerms(MAX_TERMS))
    }
}

/// Partial sums of `Σ (1/4)_ν(1/2)_ν(3/4)_ν/ν!³ (aν+b) x^ν · w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RamanujanSeries {
    /// `(21460ν+1123)(-1)^ν/882^{2ν+1} = 4/π`.
    FourOverPi,
    /// `(26390ν+1103)/99^{4ν+2} = 1/(2π√2)`.
    OneOverTwoPiRootTwo,
}

impl RamanujanSeries {
    pub fn from_id(id: u32) -> Result<Self, HyperError> {
        match id {
            39 => Ok(RamanujanSeries::FourOverPi),
            44 => Ok(RamanujanSeries::OneOverTwoPiRootTwo),
            other => Err(HyperError::UnknownSeries(other)),
        }
    }

    /// `(slope, intercept, ratio x, leading factor w)`.
    fn data(self) -> (i64, i64, Rational, Rational) {
        match self {
            RamanujanSeries::FourOverPi => {
                let s = Integer::from(882);
                (21460, 1123, Rational::from((-1, s.clone() * &s)), Rational::from((1, s)))
            }
            RamanujanSeries::OneOverTwoPiRootTwo => {
                let s = Integer::from(99).pow(2);
                (26390, 1103, Rational::from((1, s.clone() * &s)), Rational::from((1, s)))
            }
        }
    }

    /// Exact partial sum of the first `terms` terms.
    pub fn partial_sum(self, terms: u32) -> Rational {
        let (slope, intercept, x, w) = self.data();
        let q = [Rational::from((1, 4)), Rational::from((1, 2)), Rational::from((3, 4))];
        let mut coeff = Rational::from(1);
        let mut power = Rational::from(1);
        let mut sum = Rational::new();
        for nu in 0..terms {
            sum += Rational::from(&coeff * &power) * (slope * nu as i64 + intercept);
            for p in &q {
                coeff *= Rational::from(p + nu);
            }
            coeff /= Integer::from(nu + 1).pow(3);
            power *= &x;
        }
        sum * w
    }

    /// The limit of the series.
    pub fn limit(self, digits: Digits) -> BigFloat {
        let bits = digits.bits();
        let pi = Float::with_val(bits, rug::float::Constant::Pi);
        let v = match self {
            RamanujanSeries::FourOverPi => Float::with_val(bits, 4u32 / &pi),
            RamanujanSeries::OneOverTwoPiRootTwo => {
                let r2 = Float::with_val(bits, 2).sqrt();
                Float::with_val(bits, pi * r2 * 2u32).recip()
            }
        };
        BigFloat::new(v, digits)
    }
}

/// `ramanujan_pi(id, N)` as a float at `digits`.
pub fn ramanujan_pi(id: u32, terms: u32, digits: Digits) -> Result<BigFloat, HyperError> {
    if terms == 0 {
        return Err(HyperError::TooManyTerms(0));
    }
    let series = RamanujanSeries::from_id(id)?;
    Ok(BigFloat::from_rational(&series.partial_sum(terms), digits))
}
