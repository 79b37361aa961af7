//! Polynomial-numerator constructions: forms from `G(x(1-x)/(1+x))`, the
//! small-degree sup-norm search, general numerators `H(z)` with the
//! `Δ^{n-ν}` divisibility shape, and the envelope bound for `log 3`.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use rayon::prelude::*;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::Serialize;
use thiserror::Error;

use crate::asymptotics::{
    assemble_bound, log_max_on_interval, saddle_points, AsymptoticError, BoundReport, Contribution, ExponentProduct,
    TermKind,
};
use crate::exact::{is_integer, lcm_upto, rational_pow, BigFloat, Digits, Poly};
use crate::gauss_forms::{linear_form, FormError, HGParams, LogLinearForm};
use crate::numeric::quadrature::integrate_real;
use crate::numeric::roots::real_roots_in;
use crate::numeric::NumericError;

/// Integer polynomial, ascending coefficients.
pub type IntPolynomial = Poly<Integer>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RhinError {
    #[error("degree {degree} exceeds the bound {bound}")]
    DegreeTooHigh { degree: usize, bound: usize },
    #[error("Δ^(n-ν) does not divide the coefficient of z^{nu}")]
    NotDivisible { nu: usize },
    #[error("Δ = {delta} is not a multiple of {value}")]
    DeltaCondition { delta: String, value: String },
    #[error("{which} coefficient for target {target} is not integral after D_n scaling")]
    InclusionViolation { target: String, which: &'static str },
    #[error("empty search space: {0}")]
    EmptySearch(String),
    #[error("intervals must be sorted, disjoint and non-empty")]
    BadSegments,
    #[error("polynomial for n = {0} has non-integral coefficients")]
    NotIntegral(u32),
    #[error("circle maximum does not bracket a minimum in [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Asymptotic(#[from] AsymptoticError),
}

fn lcm_n(n: u32) -> Rational {
    Rational::from(lcm_upto(n as u64))
}

/// Exact form of `∫_0^1 G(x(1-x)/(1+x)) dx/(1+x)` for `deg G <= n`.
pub fn gn_linear_form(g: &IntPolynomial, n: u32) -> Result<LogLinearForm<Rational>, RhinError> {
    if let Some(deg) = g.degree() {
        if deg > n as usize {
            return Err(RhinError::DegreeTooHigh { degree: deg, bound: n as usize });
        }
    }
    let mut log_coeff = Rational::new();
    let mut const_coeff = Rational::new();
    for (k, c) in g.coeffs().iter().enumerate() {
        if *c == 0 {
            continue;
        }
        let k = k as u32;
        let f = linear_form(&HGParams::at_two(k, k, k)?);
        log_coeff += Rational::from(&f.log_coeff * c);
        const_coeff += Rational::from(&f.const_coeff * c);
    }
    Ok(LogLinearForm { log_coeff, const_coeff, target: Rational::from(2) })
}

/// `D_n` times the form, as integers.
pub fn gn_inclusion(g: &IntPolynomial, n: u32) -> Result<(Integer, Integer), RhinError> {
    let f = gn_linear_form(g, n)?.scale(&lcm_n(n));
    for (which, v) in [("log", &f.log_coeff), ("constant", &f.const_coeff)] {
        if !is_integer(v) {
            return Err(RhinError::InclusionViolation { target: "2".into(), which });
        }
    }
    Ok((f.log_coeff.numer().clone(), f.const_coeff.numer().clone()))
}

/// Disjoint closed intervals with rational endpoints, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentUnion {
    intervals: Vec<(Rational, Rational)>,
}

impl SegmentUnion {
    pub fn new(intervals: Vec<(Rational, Rational)>) -> Result<Self, RhinError> {
        if intervals.is_empty() {
            return Err(RhinError::BadSegments);
        }
        for (i, (lo, hi)) in intervals.iter().enumerate() {
            if lo > hi || (i > 0 && intervals[i - 1].1 >= *lo) {
                return Err(RhinError::BadSegments);
            }
        }
        Ok(SegmentUnion { intervals })
    }

    /// `[0, r]` with `r` a rational upper bound for `(√2-1)^2 = 3 - 2√2`
    /// within `10^-45`.
    pub fn log2_saddle_segment() -> Self {
        let scale = Integer::from(10).pow(45);
        let root2_low = Integer::from(Integer::from(2) * &scale * &scale).sqrt();
        let r = Rational::from(3) - Rational::from((root2_low * 2u32, scale));
        SegmentUnion { intervals: vec![(Rational::new(), r)] }
    }

    pub fn intervals(&self) -> &[(Rational, Rational)] {
        &self.intervals
    }
}

/// `max_{y ∈ Y} |G(y)|`, from endpoints and the real critical points.
pub fn sup_norm(g: &IntPolynomial, segment: &SegmentUnion, bits: u32) -> Result<Float, RhinError> {
    let q = g.to_rational();
    let dq = q.derivative();
    let mut best = Float::with_val(bits, 0);
    for (lo, hi) in segment.intervals() {
        let mut pts = vec![Float::with_val(bits, lo), Float::with_val(bits, hi)];
        if !dq.is_zero() && lo < hi {
            pts.extend(real_roots_in(&dq, lo, hi, bits)?);
        }
        for x in pts {
            let v = q.eval_float(&x).abs();
            if v > best {
                best = v;
            }
        }
    }
    Ok(best)
}

/// `max_Y |G|^{1/deg G}` (the plain maximum for constants).
pub fn sup_norm_root(g: &IntPolynomial, segment: &SegmentUnion, digits: Digits) -> Result<BigFloat, RhinError> {
    let bits = digits.plus(10).bits();
    let m = sup_norm(g, segment, bits)?;
    let deg = g.degree().unwrap_or(0).max(1) as u32;
    let root = if m.is_zero() { m } else { (m.ln() / deg).exp() };
    Ok(BigFloat::new(root, digits))
}

/// Optimum of the box search with its scan statistics.
#[derive(Debug, Clone)]
pub struct GStarResult {
    pub poly: IntPolynomial,
    pub sup_norm_root: BigFloat,
    /// Search-tree nodes visited (every box point is a leaf or pruned).
    pub nodes: u64,
    /// Leaves that survived the sampled bounds and were evaluated exactly.
    pub exact_checks: usize,
}

struct SearchSpace {
    /// sample abscissae and their powers `y^k`
    powers: Vec<Vec<f64>>,
    /// dense abscissae per interval for leaf estimates
    dense: Vec<Vec<f64>>,
    dense_step: Vec<f64>,
    ymax: f64,
    bound: i64,
}

impl SearchSpace {
    fn new(segment: &SegmentUnion, degree: usize, bound: i64) -> Self {
        let mut ys = Vec::new();
        let mut dense = Vec::new();
        let mut dense_step = Vec::new();
        let mut ymax = 0.0f64;
        for (lo, hi) in segment.intervals() {
            let (lo, hi) = (lo.to_f64(), hi.to_f64());
            ymax = ymax.max(lo.abs()).max(hi.abs());
            for k in 0..=64 {
                ys.push(lo + (hi - lo) * k as f64 / 64.0);
            }
            for k in 1..=40 {
                ys.push(lo + (hi - lo) * 0.5f64.powi(k));
                ys.push(hi - (hi - lo) * 0.5f64.powi(k));
            }
            let cells = 2048;
            dense.push((0..=cells).map(|k| lo + (hi - lo) * k as f64 / cells as f64).collect());
            dense_step.push((hi - lo) / cells as f64);
        }
        let powers = ys.iter().map(|&y| (0..=degree).map(|k| y.powi(k as i32)).collect()).collect();
        SearchSpace { powers, dense, dense_step, ymax, bound }
    }

    /// Upper and lower estimates of `max |G|` from dense samples plus a
    /// Lipschitz margin.
    fn leaf_bounds(&self, coeffs: &[i64]) -> (f64, f64) {
        let mut low = 0.0f64;
        let mut up = 0.0f64;
        let lip: f64 = coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| (k as f64) * (*c as f64).abs() * self.ymax.powi(k as i32 - 1))
            .sum();
        for (pts, h) in self.dense.iter().zip(&self.dense_step) {
            let mut m = 0.0f64;
            for &y in pts {
                let v = coeffs.iter().rev().fold(0.0, |acc, &c| acc * y + c as f64).abs();
                m = m.max(v);
            }
            low = low.max(m);
            up = up.max(m + lip * h / 2.0);
        }
        (low, up * (1.0 + 1e-12) + 1e-300)
    }
}

fn load(a: &AtomicU64) -> f64 {
    f64::from_bits(a.load(Ordering::Relaxed))
}

fn lower_to(a: &AtomicU64, v: f64) {
    let _ = a.fetch_update(Ordering::Relaxed, Ordering::Relaxed, |old| (v < f64::from_bits(old)).then(|| v.to_bits()));
}

struct Scan<'a> {
    space: &'a SearchSpace,
    degree: usize,
    /// `Σ_{k=j}^{deg} |y_i|^k` per sample, per `j`
    tails: Vec<Vec<f64>>,
    incumbent: &'a AtomicU64,
    survivors: &'a Mutex<Vec<(Vec<i64>, f64)>>,
    nodes: &'a AtomicU64,
}

impl Scan<'_> {
    fn visit(&self, j: usize, coeffs: &mut Vec<i64>, partial: &[f64]) {
        self.nodes.fetch_add(1, Ordering::Relaxed);
        let best = load(self.incumbent);
        let threshold = best.powi(self.degree as i32);
        let b = self.space.bound as f64;
        if threshold.is_finite() {
            for (i, p) in partial.iter().enumerate() {
                let tail = if j <= self.degree { b * self.tails[i][j] } else { 0.0 };
                let slack = 1e-12 * (1.0 + p.abs() + tail);
                if p.abs() - tail > threshold * (1.0 + 1e-9) + slack {
                    return;
                }
            }
        }
        if j > self.degree {
            let (low, up) = self.space.leaf_bounds(coeffs);
            let d = self.degree as f64;
            let root_low = low.powf(1.0 / d);
            let root_up = up.powf(1.0 / d);
            if root_low <= best * (1.0 + 1e-9) {
                lower_to(self.incumbent, root_up);
                self.survivors.lock().expect("poisoned").push((coeffs.clone(), root_low));
            }
            return;
        }
        let choices: Vec<i64> = if j == self.degree {
            (1..=self.space.bound).collect()
        } else {
            let mut v = vec![0];
            for c in 1..=self.space.bound {
                v.push(c);
                v.push(-c);
            }
            v
        };
        let step = |c: i64, coeffs: &mut Vec<i64>| {
            let next: Vec<f64> = partial.iter().zip(&self.space.powers).map(|(p, pw)| p + c as f64 * pw[j]).collect();
            coeffs.push(c);
            self.visit(j + 1, coeffs, &next);
            coeffs.pop();
        };
        if j < 3 {
            choices.par_iter().for_each(|&c| {
                let mut local = coeffs.clone();
                step(c, &mut local);
            });
        } else {
            for c in choices {
                step(c, coeffs);
            }
        }
    }
}

/// Exhaustive minimisation of `max_Y |G|^{1/deg G}` over integer `G` with
/// `1 <= deg G <= max_degree` and coefficients in `[-bound, bound]`.
/// `G` and `-G` are identified (positive leading coefficient).
pub fn search_gstar(
    max_degree: u32,
    bound: u32,
    segment: &SegmentUnion,
    digits: Digits,
) -> Result<GStarResult, RhinError> {
    if max_degree == 0 || bound == 0 {
        return Err(RhinError::EmptySearch(format!("degree {max_degree}, bound {bound}")));
    }
    if max_degree > 8 {
        return Err(RhinError::DegreeTooHigh { degree: max_degree as usize, bound: 8 });
    }
    let incumbent = AtomicU64::new(f64::INFINITY.to_bits());
    let survivors = Mutex::new(Vec::new());
    let nodes = AtomicU64::new(0);
    for degree in 1..=max_degree as usize {
        let space = SearchSpace::new(segment, degree, bound as i64);
        let tails = space
            .powers
            .iter()
            .map(|pw| (0..=degree + 1).map(|j| pw[j.min(degree + 1)..].iter().map(|v| v.abs()).sum()).collect())
            .collect();
        let scan = Scan { space: &space, degree, tails, incumbent: &incumbent, survivors: &survivors, nodes: &nodes };
        let zero = vec![0.0; space.powers.len()];
        scan.visit(0, &mut Vec::new(), &zero);
    }
    let best = load(&incumbent);
    let mut cands: Vec<(Vec<i64>, f64)> =
        survivors.into_inner().expect("poisoned").into_iter().filter(|(_, low)| *low <= best * (1.0 + 1e-9)).collect();
    cands.sort_by(|a, b| a.0.cmp(&b.0));
    let exact: Vec<(IntPolynomial, BigFloat)> = cands
        .par_iter()
        .map(|(c, _)| {
            let p = Poly::new(c.iter().map(|&v| Integer::from(v)).collect());
            let r = sup_norm_root(&p, segment, digits)?;
            Ok((p, r))
        })
        .collect::<Result<_, RhinError>>()?;
    let exact_checks = exact.len();
    let (poly, root) = exact
        .into_iter()
        .min_by(|a, b| {
            a.1.partial_cmp(&b.1)
                .expect("finite")
                .then_with(|| a.0.degree().cmp(&b.0.degree()))
                .then_with(|| a.0.coeffs().cmp(b.0.coeffs()))
        })
        .ok_or_else(|| RhinError::EmptySearch("no candidate survived".into()))?;
    Ok(GStarResult { poly, sup_norm_root: root, nodes: nodes.load(Ordering::Relaxed), exact_checks })
}

/// `H(z) = Σ_{ν<=n} B_ν Δ^{n-ν} z^ν + Σ_{ν>n} B_ν z^ν`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HnForm {
    pub b: Vec<Integer>,
    pub delta: Integer,
    pub n: u32,
}

impl HnForm {
    pub fn reconstruct(&self) -> IntPolynomial {
        let n = self.n as usize;
        Poly::new(
            self.b
                .iter()
                .enumerate()
                .map(|(nu, b)| if nu <= n { Integer::from(b * Integer::from((&self.delta).pow((n - nu) as u32))) } else { b.clone() })
                .collect(),
        )
    }
}

/// Checks the `Δ^{n-ν}` divisibility shape and extracts the `B_ν`.
pub fn hn_validate(h: &IntPolynomial, n: u32, delta: &Integer) -> Result<HnForm, RhinError> {
    let deg = h.degree().unwrap_or(0);
    if deg > 2 * n as usize {
        return Err(RhinError::DegreeTooHigh { degree: deg, bound: 2 * n as usize });
    }
    let mut b = Vec::with_capacity(deg + 1);
    for (nu, c) in h.coeffs().iter().enumerate() {
        if nu <= n as usize {
            let q = Integer::from(delta.pow((n as usize - nu) as u32));
            if !c.is_divisible(&q) {
                return Err(RhinError::NotDivisible { nu });
            }
            b.push(Integer::from(c / &q));
        } else {
            b.push(c.clone());
        }
    }
    Ok(HnForm { b, delta: delta.clone(), n })
}

/// Exact forms `I(n; a_j) = -p_n log a_j + const` for several targets, and
/// their `D_n`-scaled integer coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct RhinForms {
    pub n: u32,
    pub log_coeff: Rational,
    pub forms: Vec<LogLinearForm<Rational>>,
    pub scaled: Vec<(Integer, Integer)>,
}

fn common_denominator(points: &[Rational]) -> Integer {
    points.iter().fold(Integer::from(1), |acc, p| acc.lcm(p.denom()))
}

/// `I(n;a) = -∫_d^{da} H(z) z^{-n-1} dz` for each `a = c/d`.
pub fn hn_simultaneous_forms(form: &HnForm, points: &[Rational]) -> Result<RhinForms, RhinError> {
    let d = common_denominator(points);
    let mut required: Vec<Integer> =
        points.iter().map(|p| Rational::from(p * &d).numer().clone().abs()).collect();
    required.push(d.clone());
    for v in &required {
        if !form.delta.is_divisible(v) {
            return Err(RhinError::DeltaCondition { delta: form.delta.to_string(), value: v.to_string() });
        }
    }
    let h = form.reconstruct();
    let n = form.n as i64;
    let dq = Rational::from(&d);
    let scale = lcm_n(form.n);
    let mut forms = Vec::new();
    let mut scaled = Vec::new();
    for a in points {
        let mut const_coeff = Rational::new();
        for (nu, p) in h.coeffs().iter().enumerate() {
            let s = nu as i64 - n;
            if s == 0 || *p == 0 {
                continue;
            }
            // ∫_d^{da} z^{s-1} dz = d^s (a^s - 1)/s
            let w = rational_pow(&dq, s) * (rational_pow(a, s) - Rational::from(1)) / Rational::from(s);
            const_coeff -= w * p;
        }
        let log_coeff = -Rational::from(h.coeff(form.n as usize));
        let f = LogLinearForm { log_coeff, const_coeff, target: a.clone() };
        let sf = f.scale(&scale);
        for (which, v) in [("log", &sf.log_coeff), ("constant", &sf.const_coeff)] {
            if !is_integer(v) {
                return Err(RhinError::InclusionViolation { target: a.to_string(), which });
            }
        }
        scaled.push((sf.log_coeff.numer().clone(), sf.const_coeff.numer().clone()));
        forms.push(f);
    }
    Ok(RhinForms { n: form.n, log_coeff: forms[0].log_coeff.clone(), forms, scaled })
}

/// `(1-a) ∫_0^1 H(d - d(1-a)x) / (d^n (1-(1-a)x)^{n+1}) dx` by quadrature.
pub fn hn_integral_value(h: &IntPolynomial, n: u32, a: &Rational, digits: Digits) -> Result<BigFloat, RhinError> {
    let d = Integer::from(a.denom());
    let coeff_bits = h.coeffs().iter().map(|c| c.significant_bits()).max().unwrap_or(1);
    let bits = digits.plus(20).bits() + coeff_bits;
    let hq = h.to_rational();
    let one_minus = Rational::from(1 - a.clone());
    let om = Float::with_val(bits, &one_minus);
    let df = Float::with_val(bits, &d);
    let dn = Float::with_val(bits, (&df).pow(n));
    let q = integrate_real(
        |x| {
            let x = Float::with_val(bits, x);
            let u = Float::with_val(bits, 1) - Float::with_val(bits, &om * &x);
            let z = Float::with_val(bits, &df * &u);
            let num = hq.eval_float(&z);
            num / Float::with_val(bits, &dn * Float::with_val(bits, (&u).pow(n + 1)))
        },
        &Float::with_val(bits, 0),
        &Float::with_val(bits, 1),
        digits,
    )?;
    Ok(BigFloat::new(q.value * om, digits))
}

/// `base^{⌊rate n⌋ + offset}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimePower {
    pub base: u64,
    pub rate: Rational,
    pub offset: i64,
}

/// `H_n(z) = Π base^{⌊rate n⌋+offset} · Π q_i(z/d)^{⌊β_i n⌋}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RhinFamily {
    pub points: Vec<Rational>,
    pub d: Integer,
    pub delta: Integer,
    pub prefactor: Vec<PrimePower>,
    /// `(q_i(t), β_i)` in the variable `t = z/d`
    pub factors: Vec<(Poly<Rational>, Rational)>,
}

fn qpoly(c: &[i64]) -> Poly<Rational> {
    Poly::new(c.iter().map(|&v| Rational::from(v)).collect())
}

fn rate(s: &str) -> Rational {
    // decimal literal to an exact rational
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let den = Integer::from(10).pow(frac.len() as u32);
    let num: Integer = format!("{int}{frac}").parse().expect("decimal");
    Rational::from((num, den))
}

impl RhinFamily {
    /// Points `2/3, 4/3` with the six-factor numerator.
    pub fn log3() -> Self {
        let third = |k: i64| Rational::from((k, 3));
        RhinFamily {
            points: vec![third(2), third(4)],
            d: Integer::from(3),
            delta: Integer::from(12),
            prefactor: vec![
                PrimePower { base: 2, rate: Rational::new(), offset: 14 },
                PrimePower { base: 3, rate: Rational::from(2), offset: 7 },
            ],
            factors: vec![
                (qpoly(&[-1, 1]), rate("0.704324")),
                (Poly::new(vec![-third(2), Rational::from(1)]), rate("0.552418")),
                (Poly::new(vec![-third(4), Rational::from(1)]), rate("0.447582")),
                (qpoly(&[-4, 5]), rate("0.109072")),
                (qpoly(&[16, -34, 17]), rate("0.038934")),
                (qpoly(&[16, -36, 19]), rate("0.054368")),
            ],
        }
    }

    /// `(z-1)^n (z-2)^n` with the single point 2.
    pub fn log2_simple() -> Self {
        RhinFamily {
            points: vec![Rational::from(2)],
            d: Integer::from(1),
            delta: Integer::from(2),
            prefactor: Vec::new(),
            factors: vec![(qpoly(&[-1, 1]), Rational::from(1)), (qpoly(&[-2, 1]), Rational::from(1))],
        }
    }

    /// Every rate multiplied by `c`.
    pub fn scaled(&self, c: u32) -> Self {
        let mut f = self.clone();
        for p in &mut f.prefactor {
            p.rate *= c;
        }
        for (_, b) in &mut f.factors {
            *b *= c;
        }
        f
    }

    fn floor_exp(r: &Rational, n: u32) -> u32 {
        Rational::from(r * n).floor().numer().to_u32().expect("small exponent")
    }

    pub fn polynomial(&self, n: u32) -> Result<IntPolynomial, RhinError> {
        let mut pre = Rational::from(1);
        for p in &self.prefactor {
            let e = Self::floor_exp(&p.rate, n) as i64 + p.offset;
            pre *= rational_pow(&Rational::from(p.base), e);
        }
        let inv_d = Rational::from((1, self.d.clone()));
        let mut h = Poly::constant(pre);
        for (q, b) in &self.factors {
            let e = Self::floor_exp(b, n);
            h = h.mul(&q.rescale(&inv_d).pow(e));
        }
        h.to_integer().ok_or(RhinError::NotIntegral(n))
    }

    /// `Σ β_i log|q_i(t)| - log|t|`.
    pub fn envelope(&self) -> ExponentProduct {
        let mut f = ExponentProduct::new();
        for (q, b) in &self.factors {
            f = f.real_factor(q.clone(), b.clone());
        }
        f.real_factor(qpoly(&[0, 1]), Rational::from(-1))
    }

    /// Per-`n` rate of the prefactor and of `z^{-n} = (d t)^{-n}`.
    pub fn scaling_rate(&self, digits: Digits) -> BigFloat {
        let mut total = -&BigFloat::ln_of_rational(&Rational::from(&self.d), digits);
        for p in &self.prefactor {
            if p.rate != 0 {
                let l = BigFloat::ln_of_rational(&Rational::from(p.base), digits);
                total = &total + &(&l * &BigFloat::from_rational(&p.rate, digits));
            }
        }
        total
    }
}

/// Rhin's numerator at `n`.
pub fn rhin_polynomial(n: u32) -> Result<IntPolynomial, RhinError> {
    RhinFamily::log3().polynomial(n)
}

/// Double-precision copy of a family envelope for circle scans.
#[derive(Debug, Clone)]
pub struct FastEnvelope {
    /// ascending coefficients and rate
    terms: Vec<(Vec<f64>, f64)>,
}

impl FastEnvelope {
    pub fn new(family: &RhinFamily) -> Self {
        let mut terms: Vec<(Vec<f64>, f64)> =
            family.factors.iter().map(|(q, b)| (q.coeffs().iter().map(Rational::to_f64).collect(), b.to_f64())).collect();
        terms.push((vec![0.0, 1.0], -1.0));
        FastEnvelope { terms }
    }

    pub fn eval(&self, re: f64, im: f64) -> f64 {
        self.terms
            .iter()
            .map(|(c, b)| {
                let (mut pr, mut pi) = (0.0f64, 0.0f64);
                for a in c.iter().rev() {
                    let t = pr * re - pi * im + a;
                    pi = pr * im + pi * re;
                    pr = t;
                }
                b * pr.hypot(pi).ln()
            })
            .sum()
    }

    /// `max_{|t| = r}`, by a grid over `[0, π]` (the envelope is symmetric in
    /// the real axis) refined with golden section.
    pub fn circle_max(&self, r: f64) -> f64 {
        let eval = |theta: f64| self.eval(r * theta.cos(), r * theta.sin());
        let grid = 2880;
        let pi = std::f64::consts::PI;
        let (mut best_t, mut best_v) = (0.0, f64::NEG_INFINITY);
        for k in 0..=grid {
            let t = pi * k as f64 / grid as f64;
            let v = eval(t);
            if v > best_v {
                best_v = v;
                best_t = t;
            }
        }
        let h = pi / grid as f64;
        let (lo, hi) = golden_min(|t| -eval(t), (best_t - h).max(0.0), (best_t + h).min(pi), 60);
        best_v.max(eval((lo + hi) / 2.0))
    }

    /// `min_{r>0} max_{|t|=r}`: Cauchy estimate for the growth of the
    /// coefficients. Returns the radius and the value.
    pub fn cauchy_minmax(&self) -> Result<(f64, f64), RhinError> {
        let (lo0, hi0) = (1e-2f64.ln(), 1e2f64.ln());
        let (lo, hi) = golden_min(|x| self.circle_max(x.exp()), lo0, hi0, 80);
        let x = (lo + hi) / 2.0;
        if (x - lo0).abs() < 1e-3 || (x - hi0).abs() < 1e-3 {
            return Err(RhinError::NoBracket { lo: lo0.exp(), hi: hi0.exp() });
        }
        Ok((x.exp(), self.circle_max(x.exp())))
    }
}

fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, steps: usize) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..steps {
        let a = hi - g * (hi - lo);
        let b = lo + g * (hi - lo);
        if f(a) <= f(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    (lo, hi)
}

/// Envelope maxima per target segment.
#[derive(Debug, Clone, Serialize)]
pub struct SegmentEnvelope {
    pub target: String,
    pub argmax: f64,
    #[serde(serialize_with = "ser_float")]
    pub value: BigFloat,
}

fn ser_float<S: serde::Serializer>(x: &BigFloat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_fixed(30))
}

/// Bound with the envelope data behind it.
#[derive(Debug, Clone, Serialize)]
pub struct RhinBound {
    pub report: BoundReport,
    pub envelopes: Vec<SegmentEnvelope>,
    /// Saddle of the envelope on whose circle the maximum is attained.
    pub coefficient_saddle: (f64, f64),
    /// Independent golden-section value of the min-max.
    pub cauchy_check: f64,
}

/// Bound from the limit envelope of a polynomial family.
pub fn rhin_bound(family: &RhinFamily, digits: Digits) -> Result<RhinBound, RhinError> {
    let work = digits.plus(10);
    let phase = family.envelope();
    let one = Rational::from(1);
    let mut envelopes = Vec::new();
    for a in &family.points {
        let (lo, hi) = if *a < 1 { (a.clone(), one.clone()) } else { (one.clone(), a.clone()) };
        let m = log_max_on_interval(&phase, &lo, &hi, work)?;
        envelopes.push(SegmentEnvelope { target: a.to_string(), argmax: m.argmax.to_f64(), value: m.value });
    }
    let fast = FastEnvelope::new(family);
    let (r_star, minmax) = fast.cauchy_minmax()?;
    // the saddle realising the min-max: its value equals the circle maximum
    let saddles = saddle_points(&phase, work)?;
    let chosen = saddles
        .iter()
        .filter(|s| (fast.circle_max(s.root.abs().to_f64()) - s.value.to_f64()).abs() < 1e-7)
        .min_by(|a, b| a.value.partial_cmp(&b.value).expect("finite"))
        .ok_or(RhinError::NoBracket { lo: r_star, hi: r_star })?;
    if (chosen.value.to_f64() - minmax).abs() > 1e-6 {
        return Err(RhinError::NoBracket { lo: r_star, hi: chosen.root.abs().to_f64() });
    }

    let mut decays: Vec<BigFloat> = envelopes.iter().map(|e| -&e.value).collect();
    decays.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let slow = decays[0].clone();
    let fast = decays.last().expect("nonempty").clone();
    let zero = BigFloat::zero(work);
    let terms = vec![
        Contribution {
            label: "integral decay".into(),
            kind: TermKind::IntegralDecay,
            source: "maximum of the limit envelope on each segment [1, a_j]".into(),
            c0: slow,
            c0_prime: fast,
            c1: zero.clone(),
        },
        Contribution::shared(
            "coefficient growth",
            TermKind::CoefficientGrowth,
            "Cauchy min-max over circles, attained at a saddle of the envelope",
            zero,
            chosen.value.clone(),
        ),
        Contribution::arithmetic(
            "prefactor and (d t)^-n scaling",
            TermKind::ScalingConstant,
            "constant factors of the numerator per n, less log d",
            family.scaling_rate(work),
        ),
        Contribution::arithmetic("lcm D_n", TermKind::LcmGrowth, "prime number theorem", BigFloat::from_f64(1.0, work)),
    ];
    let report = assemble_bound(terms, family.points.len() > 1, work)?;
    let t = |v: &BigFloat| BigFloat::new(v.value().clone(), digits);
    let mut report = report;
    report.c0 = t(&report.c0);
    report.c1 = t(&report.c1);
    report.mu = t(&report.mu);
    report.c0_prime = report.c0_prime.as_ref().map(t);
    for c in &mut report.terms {
        c.c0 = t(&c.c0);
        c.c0_prime = t(&c.c0_prime);
        c.c1 = t(&c.c1);
    }
    for e in &mut envelopes {
        e.value = t(&e.value);
    }
    Ok(RhinBound {
        report,
        envelopes,
        coefficient_saddle: (chosen.root.re.to_f64(), chosen.root.im.to_f64()),
        cauchy_check: minmax,
    })
}

/// `-log|I(n; a)|/n` for each `n`, from the exact forms.
pub fn decay_trend(family: &RhinFamily, target: usize, ns: &[u32]) -> Result<Vec<(u32, f64)>, RhinError> {
    ns.par_iter()
        .map(|&n| {
            let h = family.polynomial(n)?;
            let form = hn_validate(&h, n, &family.delta)?;
            let forms = hn_simultaneous_forms(&form, &family.points)?;
            let f = &forms.forms[target];
            let size = f.log_coeff.numer().significant_bits().max(f.const_coeff.numer().significant_bits())
                + f.const_coeff.denom().significant_bits();
            let digits = Digits((size as f64 * 0.30103) as u32 + 40);
            let v = f.value(digits);
            Ok((n, -v.abs().ln().to_f64() / n as f64))
        })
        .collect()
}

/// `π` at `digits`, used in reports of the constants.
pub fn pi(digits: Digits) -> BigFloat {
    BigFloat::new(Float::with_val(digits.bits(), Constant::Pi), digits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> IntPolynomial {
        Poly::new(c.iter().map(|&v| Integer::from(v)).collect())
    }

    #[test]
    fn constant_one_has_root_one() {
        let r = sup_norm_root(&ip(&[1]), &SegmentUnion::log2_saddle_segment(), Digits(30)).unwrap();
        assert_eq!(r.to_f64(), 1.0);
    }

    #[test]
    fn gstar_root_is_one_seventh() {
        let g = ip(&[0, 0, 0, 0, 0, 0, -1, 6]);
        let r = sup_norm_root(&g, &SegmentUnion::log2_saddle_segment(), Digits(40)).unwrap();
        assert!((r.to_f64() - 1.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn validate_examples() {
        let h = ip(&[-1, 1]).mul(&ip(&[-2, 1])).pow(3);
        assert!(hn_validate(&h, 3, &Integer::from(2)).is_ok());
        assert_eq!(hn_validate(&ip(&[1, 1]), 1, &Integer::from(6)), Err(RhinError::NotDivisible { nu: 0 }));
    }

    #[test]
    fn segments_must_be_disjoint() {
        let r = |a: i64| Rational::from(a);
        assert!(SegmentUnion::new(vec![(r(0), r(2)), (r(1), r(3))]).is_err());
        assert!(SegmentUnion::new(vec![(r(0), r(1)), (r(2), r(3))]).is_ok());
    }

    #[test]
    fn degree_bound_enforced() {
        assert!(matches!(gn_linear_form(&ip(&[0, 0, 1]), 1), Err(RhinError::DegreeTooHigh { .. })));
    }

    #[test]
    fn form_of_y_matches_the_unit_family() {
        let f = gn_linear_form(&ip(&[0, 1]), 1).unwrap();
        assert_eq!((f.log_coeff, f.const_coeff), (Rational::from(3), Rational::from(-2)));
        let f = gn_linear_form(&ip(&[1]), 0).unwrap();
        assert_eq!((f.log_coeff, f.const_coeff), (Rational::from(1), Rational::new()));
        assert!(gn_inclusion(&ip(&[0, 0, 0, 0, 0, 0, -1, 6]), 7).is_ok());
    }

    #[test]
    fn quadratic_numerator_reduces_to_unit_family() {
        let h = ip(&[2, -3, 1]);
        let form = hn_validate(&h, 1, &Integer::from(2)).unwrap();
        let f = hn_simultaneous_forms(&form, &[Rational::from(2)]).unwrap();
        let g = gn_linear_form(&ip(&[0, 1]), 1).unwrap();
        assert_eq!((&f.forms[0].log_coeff, &f.forms[0].const_coeff), (&g.log_coeff, &g.const_coeff));
    }

    #[test]
    fn delta_condition_checked() {
        let form = hn_validate(&ip(&[2, -3, 1]), 1, &Integer::from(2)).unwrap();
        let third = [Rational::from((2, 3))];
        assert!(matches!(hn_simultaneous_forms(&form, &third), Err(RhinError::DeltaCondition { .. })));
    }

    #[test]
    fn log3_polynomial_small_n() {
        for n in 1..=12 {
            let h = rhin_polynomial(n).unwrap();
            assert!(h.degree().unwrap() <= 2 * n as usize + 7);
        }
        let h = rhin_polynomial(10).unwrap();
        assert!(hn_validate(&h, 10, &Integer::from(12)).is_ok());
    }

    #[test]
    fn degree_one_search_prefers_y() {
        let seg = SegmentUnion::log2_saddle_segment();
        let r = search_gstar(1, 6, &seg, Digits(30)).unwrap();
        assert_eq!(r.poly, ip(&[0, 1]));
        let alt = sup_norm_root(&ip(&[-1, 6]), &seg, Digits(30)).unwrap();
        assert_eq!(alt.to_f64(), 1.0);
        assert!(search_gstar(0, 6, &seg, Digits(30)).is_err());
        assert!(search_gstar(9, 6, &seg, Digits(30)).is_err());
    }
}
