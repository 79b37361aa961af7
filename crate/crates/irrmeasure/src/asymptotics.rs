//! Growth and decay constants: maxima of `log|Π p_j^{e_j}|` on real
//! intervals, entropy maxima of binomial products, complex saddle points,
//! and the assembly `μ <= 1 + C1/C0` with an itemised ledger.

use rug::{Float, Integer, Rational};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{phi_step_profile, valuation_asymptotic, ValuationError};
use crate::exact::{BigFloat, ComplexFloat, Digits, GaussianRational, Poly, Ring};
use crate::numeric::optimize::golden_max;
use crate::numeric::roots::{complex_roots, real_roots_in};
use crate::numeric::NumericError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AsymptoticError {
    #[error("the linear forms do not decay (C0 = {0} <= 0): the construction proves nothing")]
    NoDecay(String),
    #[error("second form must decay strictly faster: C0 = {c0} >= C0' = {c0_prime}")]
    Ordering { c0: String, c0_prime: String },
    #[error("objective unbounded above at the boundary point {0}")]
    Unbounded(String),
    #[error("objective has complex coefficients; a real interval needs a real objective")]
    NotReal,
    #[error("entropy pattern is unbalanced (Σ coefficient·slope = {0} != 0)")]
    Unbalanced(String),
    #[error("saddle residual {residual} above tolerance at root {root}")]
    Residual { root: String, residual: String },
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Valuation(#[from] ValuationError),
}

/// `f(z) = Σ e_j log|p_j(z)| + Σ w_k log|c_k|`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentProduct {
    factors: Vec<(Poly<GaussianRational>, Rational)>,
    constants: Vec<(Rational, Rational)>,
}

impl ExponentProduct {
    pub fn new() -> Self {
        ExponentProduct { factors: Vec::new(), constants: Vec::new() }
    }

    /// `Σ e_j log|z - r_j| - β log|z|`.
    pub fn from_roots(roots: &[(GaussianRational, Rational)], z_exponent: Rational) -> Self {
        let mut f = ExponentProduct::new();
        for (r, e) in roots {
            f = f.factor(Poly::linear_root(r), e.clone());
        }
        if z_exponent != 0 {
            f = f.factor(Poly::monomial(GaussianRational::one(), 1), -z_exponent);
        }
        f
    }

    pub fn factor(mut self, p: Poly<GaussianRational>, exponent: Rational) -> Self {
        if exponent != 0 {
            self.factors.push((p, exponent));
        }
        self
    }

    pub fn real_factor(self, p: Poly<Rational>, exponent: Rational) -> Self {
        self.factor(p.to_gaussian(), exponent)
    }

    /// Adds `weight · log|base|`.
    pub fn constant(mut self, base: Rational, weight: Rational) -> Self {
        if weight != 0 && base != 1 {
            self.constants.push((base, weight));
        }
        self
    }

    pub fn factors(&self) -> &[(Poly<GaussianRational>, Rational)] {
        &self.factors
    }

    pub fn is_real(&self) -> bool {
        self.factors.iter().all(|(p, _)| p.coeffs().iter().all(GaussianRational::is_real))
    }

    /// All exponents multiplied by `c`.
    pub fn scaled(&self, c: &Rational) -> Self {
        ExponentProduct {
            factors: self.factors.iter().map(|(p, e)| (p.clone(), Rational::from(e * c))).collect(),
            constants: self.constants.iter().map(|(b, w)| (b.clone(), Rational::from(w * c))).collect(),
        }
    }

    fn constant_part(&self, bits: u32) -> Float {
        let mut acc = Float::new(bits);
        for (b, w) in &self.constants {
            acc += Float::with_val(bits, b).abs().ln() * Float::with_val(bits, w);
        }
        acc
    }

    pub fn log_abs(&self, z: &ComplexFloat) -> Float {
        let bits = z.prec();
        let mut acc = self.constant_part(bits);
        for (p, e) in &self.factors {
            acc += p.eval_complex(z).abs().ln() * Float::with_val(bits, e);
        }
        acc
    }

    pub fn log_abs_real(&self, x: &Float) -> Float {
        self.log_abs(&ComplexFloat::real(x.clone()))
    }

    /// Numerator of `f'` over the common denominator `Π p_j`.
    pub fn derivative_numerator(&self) -> Poly<GaussianRational> {
        let mut total = Poly::zero();
        for (j, (pj, ej)) in self.factors.iter().enumerate() {
            let mut term = pj.derivative().scale(&GaussianRational::real(ej.clone()));
            for (k, (pk, _)) in self.factors.iter().enumerate() {
                if k != j {
                    term = term.mul(pk);
                }
            }
            total = total.add(&term);
        }
        total
    }

    fn real_derivative_numerator(&self) -> Result<Poly<Rational>, AsymptoticError> {
        if !self.is_real() {
            return Err(AsymptoticError::NotReal);
        }
        Ok(self.derivative_numerator().map(|c| c.re.clone()))
    }

    /// Net order of vanishing `Σ e_j ord_x(p_j)` at a rational point.
    fn order_at(&self, x: &Rational) -> Rational {
        let xg = GaussianRational::real(x.clone());
        let mut total = Rational::new();
        for (p, e) in &self.factors {
            let mut q = p.clone();
            let mut mult = 0;
            while !q.is_zero() && q.eval(&xg).is_zero() {
                q = q.div_rem(&Poly::linear_root(&xg)).0;
                mult += 1;
            }
            total += Rational::from(e * mult);
        }
        total
    }
}

impl Default for ExponentProduct {
    fn default() -> Self {
        ExponentProduct::new()
    }
}

/// Location and value of a maximum.
#[derive(Debug, Clone)]
pub struct Extremum {
    pub argmax: BigFloat,
    pub value: BigFloat,
}

/// `sup` of a real objective over the open interval `(lo, hi)`.
pub fn log_max_on_interval(
    f: &ExponentProduct,
    lo: &Rational,
    hi: &Rational,
    digits: Digits,
) -> Result<Extremum, AsymptoticError> {
    let bits = digits.plus(20).bits();
    let numer = f.real_derivative_numerator()?;
    let mut best: Option<(Float, Float)> = None;
    let mut consider = |x: Float, v: Float| {
        if v.is_finite() && best.as_ref().is_none_or(|(_, b)| v > *b) {
            best = Some((x, v));
        }
    };
    if numer.is_zero() {
        let mid = Float::with_val(bits, Rational::from(lo + hi) / 2u32);
        let v = f.log_abs_real(&mid);
        consider(mid, v);
    } else {
        for x in real_roots_in(&numer, lo, hi, bits)? {
            let v = f.log_abs_real(&x);
            consider(x, v);
        }
    }
    for end in [lo, hi] {
        let ord = f.order_at(end);
        if ord < 0 {
            return Err(AsymptoticError::Unbounded(end.to_string()));
        }
        if ord == 0 {
            let x = Float::with_val(bits, end);
            let v = f.log_abs_real(&x);
            consider(x, v);
        }
    }
    let (x, v) = best.ok_or_else(|| AsymptoticError::Unbounded(format!("({lo}, {hi})")))?;
    Ok(Extremum { argmax: BigFloat::new(x, digits), value: BigFloat::new(v, digits) })
}

/// Independent check of [`log_max_on_interval`] by grid plus golden section.
pub fn golden_section_max(f: &ExponentProduct, lo: f64, hi: f64, bits: u32) -> Float {
    golden_max(|x| f.log_abs_real(x), lo, hi, 400, bits).1
}

/// `slope · y + intercept`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Linear {
    pub slope: Rational,
    pub intercept: Rational,
}

impl Linear {
    pub fn new(slope: i64, intercept: i64) -> Self {
        Linear { slope: Rational::from(slope), intercept: Rational::from(intercept) }
    }

    fn poly(&self) -> Poly<Rational> {
        Poly::new(vec![self.intercept.clone(), self.slope.clone()])
    }

    fn sub(&self, o: &Linear) -> Linear {
        Linear {
            slope: Rational::from(&self.slope - &o.slope),
            intercept: Rational::from(&self.intercept - &o.intercept),
        }
    }
}

/// `g(y) = Σ c_j h(L_j(y)) + w · y · log|b|`, `h(u) = u log u`: the limit
/// of `(1/n) log` of a product of binomials `C(T n, B n)` with `y = k/n`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EntropyPattern {
    terms: Vec<(Rational, Linear)>,
    tilt: Option<(Rational, Rational)>,
}

impl EntropyPattern {
    /// `Σ log C(top, bottom)` for each `(top, bottom)` pair.
    pub fn from_binomials(pairs: &[(Linear, Linear)]) -> Self {
        let mut terms = Vec::new();
        for (top, bottom) in pairs {
            terms.push((Rational::from(1), top.clone()));
            terms.push((Rational::from(-1), bottom.clone()));
            terms.push((Rational::from(-1), top.sub(bottom)));
        }
        EntropyPattern { terms, tilt: None }
    }

    /// Adds `weight · y · log|base|`.
    pub fn with_tilt(mut self, base: Rational, weight: Rational) -> Self {
        if base.clone().abs() != 1 && weight != 0 {
            self.tilt = Some((base.abs(), weight));
        }
        self
    }

    pub fn eval(&self, y: &Float) -> Float {
        let bits = y.prec();
        let mut acc = Float::new(bits);
        for (c, l) in &self.terms {
            let u = Float::with_val(bits, y * &l.slope) + &l.intercept;
            if u.is_zero() {
                continue;
            }
            let hu = Float::with_val(bits, u.ln_ref()) * &u;
            acc += hu * c;
        }
        if let Some((b, w)) = &self.tilt {
            acc += Float::with_val(bits, b).ln() * w * y;
        }
        acc
    }

    /// Polynomial whose roots are the critical points: `Π L_j^{E_j} b^{W} = 1`.
    fn critical_polynomial(&self) -> Result<Poly<Rational>, AsymptoticError> {
        let balance: Rational = self
            .terms
            .iter()
            .fold(Rational::new(), |acc, (c, l)| acc + Rational::from(c * &l.slope));
        if balance != 0 {
            return Err(AsymptoticError::Unbalanced(balance.to_string()));
        }
        let mut scale = Integer::from(1);
        let weights: Vec<Rational> = self.terms.iter().map(|(c, l)| Rational::from(c * &l.slope)).collect();
        for w in weights.iter().chain(self.tilt.iter().map(|(_, w)| w)) {
            scale.lcm_mut(w.denom());
        }
        let mut pos = Poly::constant(Rational::from(1));
        let mut neg = Poly::constant(Rational::from(1));
        for (w, (_, l)) in weights.iter().zip(&self.terms) {
            let e = Rational::from(w * &scale);
            let e = e.numer().to_i64().expect("small exponent");
            if e > 0 {
                pos = pos.mul(&l.poly().pow(e as u32));
            } else if e < 0 {
                neg = neg.mul(&l.poly().pow((-e) as u32));
            }
        }
        if let Some((b, w)) = &self.tilt {
            let e = Rational::from(w * &scale).numer().to_i64().expect("small exponent");
            let factor = crate::exact::rational_pow(b, e);
            pos = pos.scale(&factor);
        }
        Ok(pos.sub(&neg))
    }
}

/// `max_{lo<y<hi} g(y)` via the critical-point polynomial.
pub fn binomial_growth_max(
    pattern: &EntropyPattern,
    lo: &Rational,
    hi: &Rational,
    digits: Digits,
) -> Result<Extremum, AsymptoticError> {
    let bits = digits.plus(20).bits();
    let poly = pattern.critical_polynomial()?;
    let mut candidates: Vec<Float> = vec![Float::with_val(bits, lo), Float::with_val(bits, hi)];
    if !poly.is_zero() {
        candidates.extend(real_roots_in(&poly, lo, hi, bits)?);
    }
    let (x, v) = candidates
        .into_iter()
        .map(|y| {
            let v = pattern.eval(&y);
            (y, v)
        })
        .filter(|(_, v)| v.is_finite())
        .max_by(|a, b| a.1.partial_cmp(&b.1).expect("finite"))
        .ok_or_else(|| AsymptoticError::Unbounded(format!("({lo}, {hi})")))?;
    Ok(Extremum { argmax: BigFloat::new(x, digits), value: BigFloat::new(v, digits) })
}

/// A critical point of `f` with its growth value `Re`-part `f(ξ)`.
#[derive(Debug, Clone)]
pub struct Saddle {
    pub root: ComplexFloat,
    pub value: BigFloat,
    pub residual: Float,
}

/// All roots of `f'` with residual certificates.
pub fn saddle_points(f: &ExponentProduct, digits: Digits) -> Result<Vec<Saddle>, AsymptoticError> {
    let bits = digits.plus(20).bits();
    let numer = f.derivative_numerator();
    let roots = complex_roots(&numer, bits)?;
    let tol = digits.epsilon() * Float::with_val(bits, 100_000);
    let mut out = Vec::with_capacity(roots.len());
    for r in roots {
        // relative to the size of the terms of the numerator at the root
        let scale: Float = numer
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| c.to_complex(bits).abs() * Float::with_val(bits, rug::ops::Pow::pow(r.root.abs(), k as u32)))
            .fold(Float::with_val(bits, 0), |a, b| a + b);
        let rel = Float::with_val(bits, &r.residual / &scale);
        if rel > tol {
            return Err(AsymptoticError::Residual {
                root: format!("{}+{}i", r.root.re.to_f64(), r.root.im.to_f64()),
                residual: rel.to_f64().to_string(),
            });
        }
        let value = BigFloat::new(f.log_abs(&r.root), digits);
        out.push(Saddle { root: r.root, value, residual: rel });
    }
    out.sort_by(|a, b| a.value.partial_cmp(&b.value).expect("finite values"));
    Ok(out)
}

/// `|Σ roots + c_{d-1}/c_d|`, exact coefficients against computed roots.
pub fn vieta_defect(f: &ExponentProduct, saddles: &[Saddle]) -> Float {
    let numer = f.derivative_numerator();
    let d = numer.degree().expect("nonconstant");
    let ratio = numer.coeff(d - 1).checked_div(&numer.coeff(d)).expect("leading nonzero");
    let bits = saddles[0].root.prec();
    let mut s = ComplexFloat::from_gaussian(&ratio, bits);
    for sd in saddles {
        s = &s + &sd.root;
    }
    s.abs()
}

/// Role of a ledger entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TermKind {
    IntegralDecay,
    CoefficientGrowth,
    LcmGrowth,
    PhiSaving,
    DPower,
    OneMinusAPower,
    PowerDenominator,
    ScalingConstant,
}

/// One named additive contribution to `C0`, `C0'` and `C1`.
#[derive(Debug, Clone, Serialize)]
pub struct Contribution {
    pub label: String,
    pub kind: TermKind,
    pub source: String,
    #[serde(serialize_with = "ser_float")]
    pub c0: BigFloat,
    #[serde(serialize_with = "ser_float")]
    pub c0_prime: BigFloat,
    #[serde(serialize_with = "ser_float")]
    pub c1: BigFloat,
}

fn ser_float<S: serde::Serializer>(x: &BigFloat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_fixed(30))
}

impl Contribution {
    /// A term that enters `C0` and `C0'` alike.
    pub fn shared(label: &str, kind: TermKind, source: &str, c0: BigFloat, c1: BigFloat) -> Self {
        Contribution {
            label: label.to_string(),
            kind,
            source: source.to_string(),
            c0_prime: c0.clone(),
            c0,
            c1,
        }
    }

    /// Arithmetic term: shrinks both coefficients and forms by `rate`,
    /// i.e. `C0 -= rate`, `C1 += rate`.
    pub fn arithmetic(label: &str, kind: TermKind, source: &str, rate: BigFloat) -> Self {
        let neg = -&rate;
        Contribution::shared(label, kind, source, neg, rate)
    }
}

/// Assembled exponent bound.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    #[serde(serialize_with = "ser_float")]
    pub c0: BigFloat,
    #[serde(serialize_with = "ser_float")]
    pub c1: BigFloat,
    #[serde(serialize_with = "ser_opt_float")]
    pub c0_prime: Option<BigFloat>,
    #[serde(serialize_with = "ser_float")]
    pub mu: BigFloat,
    pub terms: Vec<Contribution>,
}

fn ser_opt_float<S: serde::Serializer>(x: &Option<BigFloat>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&v.to_fixed(30)),
        None => s.serialize_none(),
    }
}

/// `μ = 1 + C1/C0` from the ledger; `two_forms` also checks `C0 < C0'`.
pub fn assemble_bound(terms: Vec<Contribution>, two_forms: bool, digits: Digits) -> Result<BoundReport, AsymptoticError> {
    let sum = |pick: fn(&Contribution) -> &BigFloat| {
        terms.iter().fold(BigFloat::zero(digits), |acc, t| &acc + pick(t))
    };
    let c0 = sum(|t| &t.c0);
    let c1 = sum(|t| &t.c1);
    let c0_prime = two_forms.then(|| sum(|t| &t.c0_prime));
    if !c0.is_sign_positive() {
        return Err(AsymptoticError::NoDecay(c0.to_fixed(12)));
    }
    if let Some(cp) = &c0_prime {
        if c0 >= *cp {
            return Err(AsymptoticError::Ordering { c0: c0.to_fixed(12), c0_prime: cp.to_fixed(12) });
        }
    }
    let one = BigFloat::from_f64(1.0, digits);
    let mu = &one + &(&c1 / &c0);
    Ok(BoundReport { c0, c1, c0_prime, mu, terms })
}

fn rat(k: i64) -> Rational {
    Rational::from(k)
}

/// Bound for the family `(m, n0, n1) = (μ_r n, ν0 n, ν1 n)` at the point `a`
/// (one linear form in `log a`).
pub fn gauss_family_bound(m: u32, n0: u32, n1: u32, a: &Rational, digits: Digits) -> Result<BoundReport, AsymptoticError> {
    let work = digits.plus(10);
    let x = Rational::from(1 - a.clone());
    let x_abs = x.clone().abs();
    let m_star = m.min(n0);
    let n0_star = m.max(n0);
    let lcm_index = n0 + n1 - m_star;

    // decay: max_{0<x<1} x^{n0} (1-x)^{n1} / |1 - (1-a)x|^m
    let integrand = ExponentProduct::new()
        .real_factor(Poly::new(vec![rat(0), rat(1)]), rat(n0 as i64))
        .real_factor(Poly::new(vec![rat(1), rat(-1)]), rat(n1 as i64))
        .real_factor(Poly::new(vec![rat(1), Rational::from(-&x)]), rat(-(m as i64)));
    let decay = log_max_on_interval(&integrand, &rat(0), &rat(1), work)?;

    // growth: max_y C(y, m) C(n1, y - n0) |1-a|^{-y}
    let pattern = EntropyPattern::from_binomials(&[
        (Linear::new(1, 0), Linear::new(0, m as i64)),
        (Linear::new(0, n1 as i64), Linear::new(1, -(n0 as i64))),
    ])
    .with_tilt(x_abs.clone(), rat(-1));
    let growth = binomial_growth_max(&pattern, &rat(n0_star as i64), &rat((n0 + n1) as i64), work)?;

    let saving = valuation_asymptotic(&phi_step_profile(m, n0, n1), work)?;
    let ln_abs_x = BigFloat::ln_of_rational(&x_abs, work);
    let ln_d = BigFloat::ln_of_rational(&Rational::from(a.denom()), work);
    let zero = BigFloat::zero(work);
    let num = |k: u32| BigFloat::from_integer(&Integer::from(k), work);

    let terms = vec![
        Contribution::shared(
            "integral decay",
            TermKind::IntegralDecay,
            "critical point of x^n0 (1-x)^n1 / (1-(1-a)x)^m on (0,1)",
            -&decay.value,
            zero.clone(),
        ),
        Contribution::shared(
            "coefficient growth",
            TermKind::CoefficientGrowth,
            "entropy maximum of C(k,m) C(n1,k-n0) |1-a|^-k",
            zero.clone(),
            growth.value.clone(),
        ),
        Contribution::arithmetic(
            "(1-a)^(n0+n1+1) scaling",
            TermKind::OneMinusAPower,
            "clears (1-a)^-(k+1) in the partial-fraction sums",
            &num(n0 + n1) * &ln_abs_x,
        ),
        Contribution::arithmetic(
            "d^(n0+n1-m*) scaling",
            TermKind::DPower,
            "clears powers of the denominator of a",
            &num(lcm_index) * &ln_d,
        ),
        Contribution::arithmetic(
            "lcm D_(n0+n1-m*)",
            TermKind::LcmGrowth,
            "prime number theorem, (log D_n)/n -> 1",
            num(lcm_index),
        ),
        Contribution::arithmetic(
            "large-prime saving",
            TermKind::PhiSaving,
            "digamma-weighted step profile of the factorial quotient",
            -&saving,
        ),
    ];
    let mut report = assemble_bound(terms, false, work)?;
    for t in &mut report.terms {
        for v in [&mut t.c0, &mut t.c0_prime, &mut t.c1] {
            *v = BigFloat::new(v.value().clone(), digits);
        }
    }
    report.c0 = BigFloat::new(report.c0.into_value(), digits);
    report.c1 = BigFloat::new(report.c1.into_value(), digits);
    report.mu = BigFloat::new(report.mu.into_value(), digits);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d() -> Digits {
        Digits(40)
    }

    #[test]
    fn identity_is_flat_zero() {
        let f = ExponentProduct::new().real_factor(Poly::new(vec![rat(0), rat(1)]), rat(1));
        let m = log_max_on_interval(&f, &rat(0), &rat(1), d()).unwrap();
        assert!(m.value.is_zero());
    }

    #[test]
    fn pole_at_boundary_is_unbounded() {
        let f = ExponentProduct::new().real_factor(Poly::new(vec![rat(0), rat(1)]), rat(-1));
        assert!(matches!(
            log_max_on_interval(&f, &rat(0), &rat(1), d()),
            Err(AsymptoticError::Unbounded(_))
        ));
    }

    #[test]
    fn simple_decay() {
        let f = ExponentProduct::new()
            .real_factor(Poly::new(vec![rat(0), rat(1)]), rat(1))
            .real_factor(Poly::new(vec![rat(1), rat(-1)]), rat(1))
            .real_factor(Poly::new(vec![rat(1), rat(1)]), rat(-1));
        let m = log_max_on_interval(&f, &rat(0), &rat(1), d()).unwrap();
        let bits = d().bits();
        let expected = (Float::with_val(bits, 2).sqrt() - 1u32).ln() * 2u32;
        assert!(Float::with_val(bits, m.value.value() - &expected).abs() < 1e-38);
    }

    #[test]
    fn central_binomial_growth() {
        let p = EntropyPattern::from_binomials(&[(Linear::new(0, 2), Linear::new(0, 1))]);
        let m = binomial_growth_max(&p, &rat(0), &rat(1), d()).unwrap();
        let bits = d().bits();
        assert!(Float::with_val(bits, m.value.value() - Float::with_val(bits, 4).ln()).abs() < 1e-38);
    }

    #[test]
    fn bound_arithmetic() {
        let one = BigFloat::from_f64(1.0, d());
        let zero = BigFloat::zero(d());
        let t = vec![Contribution::shared("x", TermKind::IntegralDecay, "", one.clone(), one.clone())];
        let r = assemble_bound(t, false, d()).unwrap();
        assert_eq!(r.mu.to_f64(), 2.0);
        let t = vec![Contribution::shared("x", TermKind::IntegralDecay, "", zero.clone(), one.clone())];
        assert!(matches!(assemble_bound(t, false, d()), Err(AsymptoticError::NoDecay(_))));
        let t = vec![Contribution::shared("x", TermKind::IntegralDecay, "", one.clone(), one)];
        assert!(matches!(assemble_bound(t, true, d()), Err(AsymptoticError::Ordering { .. })));
    }
}

#[cfg(test)]
mod family_tests {
    use super::*;

    #[test]
    fn log_two_families() {
        let two = Rational::from(2);
        let r = gauss_family_bound(7, 6, 8, &two, Digits(30)).unwrap();
        assert!((r.mu.to_f64() - 3.89139977).abs() < 1e-7, "{}", r.mu);
        assert!((r.c0.to_f64() - 6.30273213).abs() < 1e-7, "{}", r.c0);
        assert!((r.c1.to_f64() - 18.22371823).abs() < 1e-7, "{}", r.c1);
        let s = gauss_family_bound(1, 1, 1, &two, Digits(30)).unwrap();
        assert!((s.mu.to_f64() - 4.62210083).abs() < 1e-7, "{}", s.mu);
    }
}
