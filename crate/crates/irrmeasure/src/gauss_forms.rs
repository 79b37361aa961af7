//! Linear forms `B log a - A` from the integral
//! `∫_0^1 x^{n0} (1-x)^{n1} / (1 - (1-a)x)^{m+1} dx`, obtained exactly through
//! partial fractions of the series coefficients, with their integrality
//! certificates.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::Serialize;
use thiserror::Error;

use crate::arith::phi_denominator;
use crate::exact::{
    binomial, factorial, is_integer, lcm_upto, primes_upto, rational_pow, BigFloat, ComplexFloat, Digits,
    GaussianRational, Poly,
};
use crate::numeric::quadrature::integrate_real;
use crate::numeric::NumericError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormError {
    #[error("invalid parameters (m, n0, n1) = ({m}, {n0}, {n1}): need m <= n1")]
    InvalidExponents { m: u32, n0: u32, n1: u32 },
    #[error("a = {0} outside (0, 2]")]
    PointOutOfRange(String),
    #[error("a = 1 carries no information (log 1 = 0)")]
    DegeneratePoint,
    #[error("integrality fails at prime {prime} in the {which} coefficient")]
    InclusionViolation { prime: u64, which: &'static str },
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// Parameters `(m, n0, n1; a)` of the integral.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HGParams {
    m: u32,
    n0: u32,
    n1: u32,
    a: Rational,
}

impl HGParams {
    /// Needs `m <= n1` (so the series coefficients decay) and `a` in `(0, 2]`,
    /// `a != 1`.
    pub fn new(m: u32, n0: u32, n1: u32, a: Rational) -> Result<Self, FormError> {
        if m > n1 {
            return Err(FormError::InvalidExponents { m, n0, n1 });
        }
        if a <= 0 || a > 2 {
            return Err(FormError::PointOutOfRange(a.to_string()));
        }
        if a == 1 {
            return Err(FormError::DegeneratePoint);
        }
        Ok(HGParams { m, n0, n1, a })
    }

    pub fn at_two(m: u32, n0: u32, n1: u32) -> Result<Self, FormError> {
        HGParams::new(m, n0, n1, Rational::from(2))
    }

    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn n0(&self) -> u32 {
        self.n0
    }
    pub fn n1(&self) -> u32 {
        self.n1
    }
    pub fn a(&self) -> &Rational {
        &self.a
    }
    pub fn m_star(&self) -> u32 {
        self.m.min(self.n0)
    }
    pub fn n0_star(&self) -> u32 {
        self.m.max(self.n0)
    }
    /// Denominator `d` of `a`.
    pub fn d(&self) -> Integer {
        self.a.denom().clone()
    }
    /// Exponent `n0 + n1 - m*` of `d` and of the lcm in the inclusion.
    pub fn lcm_index(&self) -> u32 {
        self.n0 + self.n1 - self.m_star()
    }
    /// The swapped tuple `(n0, m, n0 + n1 - m; a)`.
    pub fn swapped(&self) -> HGParams {
        HGParams {
            m: self.n0,
            n0: self.m,
            n1: self.n0 + self.n1 - self.m,
            a: self.a.clone(),
        }
    }
}

/// `R(t) = Σ_k A_k / (t + k + 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialFractionExpansion {
    pub terms: Vec<(u32, Rational)>,
}

impl PartialFractionExpansion {
    /// Exact check that the terms clear to `R(t)`: multiplying through by
    /// `Q(t) = Π_{j=n0+1}^{n0+n1+1} (t + j)` must give `(n1!/m!) Π_{i=1}^{m} (t + i)`.
    pub fn reconstructs(&self, p: &HGParams) -> bool {
        let lin = |j: u32| Poly::new(vec![Rational::from(j), Rational::from(1)]);
        let poles: Vec<u32> = (p.n0 + 1..=p.n0 + p.n1 + 1).collect();
        let mut lhs = Poly::zero();
        for (k, ak) in &self.terms {
            let mut q = Poly::constant(ak.clone());
            for &j in poles.iter().filter(|&&j| j != k + 1) {
                q = q.mul(&lin(j));
            }
            lhs = lhs.add(&q);
        }
        let mut rhs = Poly::constant(Rational::from((factorial(p.n1), factorial(p.m))));
        for i in 1..=p.m {
            rhs = rhs.mul(&lin(i));
        }
        lhs == rhs
    }
}

/// Exact record `log_coeff · log(target) + const_coeff`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogLinearForm<T> {
    pub log_coeff: T,
    pub const_coeff: T,
    pub target: T,
}

impl LogLinearForm<Rational> {
    pub fn value(&self, digits: Digits) -> BigFloat {
        let bits = digits.plus(20).bits();
        let l = Float::with_val(bits, &self.target).ln();
        let v = l * &self.log_coeff + &self.const_coeff;
        BigFloat::new(v, digits)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        LogLinearForm {
            log_coeff: Rational::from(&self.log_coeff * k),
            const_coeff: Rational::from(&self.const_coeff * k),
            target: self.target.clone(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.target, o.target, "forms in different logarithms");
        LogLinearForm {
            log_coeff: Rational::from(&self.log_coeff + &o.log_coeff),
            const_coeff: Rational::from(&self.const_coeff + &o.const_coeff),
            target: self.target.clone(),
        }
    }
}

impl LogLinearForm<GaussianRational> {
    /// Value with the principal logarithm of the target.
    pub fn value(&self, digits: Digits) -> ComplexFloat {
        let bits = digits.plus(20).bits();
        let l = ComplexFloat::from_gaussian(&self.target, bits).ln();
        let b = ComplexFloat::from_gaussian(&self.log_coeff, bits);
        let a = ComplexFloat::from_gaussian(&self.const_coeff, bits);
        &(&b * &l) + &a
    }
}

/// `A_k = (-1)^{m+n0-k} C(k, m) C(n1, k-n0)` for `k = max(m,n0) ..= n0+n1`.
pub fn partial_fractions(p: &HGParams) -> PartialFractionExpansion {
    let terms = (p.n0_star()..=p.n0 + p.n1)
        .map(|k| {
            let mut c = binomial(k as i64, p.m as i64) * binomial(p.n1 as i64, (k - p.n0) as i64);
            if (p.m + p.n0 + k) % 2 == 1 {
                c = -c;
            }
            (k, Rational::from(c))
        })
        .collect();
    PartialFractionExpansion { terms }
}

/// Exact form with `I(m, n0, n1; a) = log_coeff · log a + const_coeff`.
pub fn linear_form(p: &HGParams) -> LogLinearForm<Rational> {
    let x = Rational::from(1 - p.a.clone());
    let x_inv = x.clone().recip();
    let m_star = p.m_star() as i64;
    let pf = partial_fractions(p);

    // S_K = Σ_{l=1}^{K} x^l / l, extended as K grows with k
    let mut s = Rational::new();
    let mut s_len = 0i64;
    let mut x_pow = Rational::from(1);
    let mut log_coeff = Rational::new();
    let mut const_coeff = Rational::new();
    for (k, ak) in &pf.terms {
        let k = *k as i64;
        while s_len < k - m_star {
            s_len += 1;
            x_pow *= &x;
            s += Rational::from(&x_pow / s_len);
        }
        let inv_pow = rational_pow(&x_inv, k + 1);
        let weight = Rational::from(ak * &inv_pow);
        log_coeff -= &weight;
        if k - m_star >= 1 {
            const_coeff -= weight * &s;
        }
    }
    LogLinearForm { log_coeff, const_coeff, target: p.a.clone() }
}

/// The defining integral by quadrature.
pub fn integral_value(p: &HGParams, digits: Digits) -> Result<BigFloat, FormError> {
    let bits = digits.plus(10).bits();
    let x_coef = Float::with_val(bits, &Rational::from(1 - p.a.clone()));
    let (n0, n1, m1) = (p.n0, p.n1, p.m + 1);
    let q = integrate_real(
        |x| {
            let one_minus = Float::with_val(bits, 1 - x);
            let num = Float::with_val(bits, x.pow(n0)) * Float::with_val(bits, (&one_minus).pow(n1));
            let den = Float::with_val(bits, 1 - Float::with_val(bits, &x_coef * x));
            num / Float::with_val(bits, (&den).pow(m1))
        },
        &Float::with_val(bits, 0),
        &Float::with_val(bits, 1),
        digits,
    )?;
    Ok(BigFloat::new(q.value, digits))
}

/// Integer coefficients of a scaled form together with the scale used.
#[derive(Debug, Clone, PartialEq)]
pub struct InclusionReport {
    pub scale: Rational,
    pub log_coeff: Integer,
    pub const_coeff: Integer,
    pub divided_by_phi: Option<Integer>,
}

fn smallest_prime_factor(n: &Integer) -> u64 {
    let limit = n.to_u64().unwrap_or(u64::MAX).min(1 << 24);
    for p in primes_upto(limit) {
        if n.is_divisible_u(p as u32) {
            return p;
        }
    }
    0
}

/// Scale `(1-a)^{n0+n1+1} d^{n0+n1-m*} D_{n0+n1-m*}` (over `Φ` when `improved`)
/// and check both coefficients become integers.
pub fn inclusion_check(p: &HGParams, improved: bool) -> Result<InclusionReport, FormError> {
    let form = linear_form(p);
    let x = Rational::from(1 - p.a.clone());
    let idx = p.lcm_index();
    let mut scale = rational_pow(&x, (p.n0 + p.n1 + 1) as i64);
    scale *= Rational::from(p.d().pow(idx));
    scale *= Rational::from(lcm_upto(idx as u64));
    let phi = if improved {
        let phi = phi_denominator(p.m, p.n0, p.n1);
        scale /= Rational::from(phi.clone());
        Some(phi)
    } else {
        None
    };
    let b = Rational::from(&form.log_coeff * &scale);
    let a = Rational::from(&form.const_coeff * &scale);
    for (which, v) in [("log", &b), ("constant", &a)] {
        if !is_integer(v) {
            return Err(FormError::InclusionViolation { prime: smallest_prime_factor(v.denom()), which });
        }
    }
    Ok(InclusionReport {
        scale,
        log_coeff: b.numer().clone(),
        const_coeff: a.numer().clone(),
        divided_by_phi: phi,
    })
}

/// `I(m,n0,n1)/(n0! n1!) = I(n0,m,n0+n1-m)/(m! (n0+n1-m)!)`, compared exactly.
pub fn symmetry_check(p: &HGParams) -> bool {
    let q = p.swapped();
    let left = linear_form(p).scale(&Rational::from(factorial(p.m) * factorial(q.n1)));
    let right = linear_form(&q).scale(&Rational::from(factorial(p.n0) * factorial(p.n1)));
    left == right
}

/// `log 2` at `digits`, shared by tests and reports.
pub fn ln2(digits: Digits) -> BigFloat {
    BigFloat::new(Float::with_val(digits.bits(), Constant::Log2), digits)
}
