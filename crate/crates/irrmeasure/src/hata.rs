//! Simultaneous linear forms in `log a_1, log a_2` from the complex integral
//! `∫_1^a (z-1)^{n0} (z-a_1)^{n1} (z-a_2)^{n2} z^{-m-1} dz`, the Gaussian
//! integrality witnesses for the points `2, 1+i`, and the bound assembly.

use rayon::prelude::*;
use rug::{Float, Integer, Rational};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{minimize_varpi, valuation_asymptotic, ValuationError};
use crate::asymptotics::{assemble_bound, saddle_points, AsymptoticError, BoundReport, Contribution, ExponentProduct, TermKind};
use crate::exact::{binomial, BigFloat, ComplexFloat, Digits, GaussianRational};
use crate::gauss_forms::LogLinearForm;
use crate::numeric::quadrature::integrate_path;
use crate::numeric::NumericError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HataError {
    #[error("{0} points given; one or two points are supported")]
    UnsupportedPointCount(usize),
    #[error("expected {expected} exponents n0..nk, got {got}")]
    ExponentCount { expected: usize, got: usize },
    #[error("point {0} must differ from 0, 1 and the other points")]
    InvalidPoint(String),
    #[error("target {0} is not one of the configured points")]
    UnknownTarget(String),
    #[error("coefficients need {bits} bits, above the budget of {budget}")]
    CoefficientBudget { bits: u64, budget: u64 },
    #[error("denominator witnesses are defined for the points 2 and 1+i")]
    WitnessUnsupported,
    #[error("proviso fails: {0}")]
    Proviso(String),
    #[error("integration path passes through 0")]
    PathThroughZero,
    #[error("integration path must run from 1 to the target")]
    PathEndpoints,
    #[error("point {0} is not a unit times a power of 1+i times a rational")]
    SplitPrime(String),
    #[error("no pair of segment forms decays at distinct rates")]
    NoSeparation,
    #[error("coefficient saddle value {saddle} disagrees with the measured growth {measured}")]
    SaddleMismatch { saddle: String, measured: String },
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Asymptotic(#[from] AsymptoticError),
    #[error(transparent)]
    Valuation(#[from] ValuationError),
}

/// Default cap on coefficient size.
pub const DEFAULT_BUDGET_BITS: u64 = 1 << 22;

/// Points `a_1..a_k` (with `a_0 = 1`), exponents `n_0..n_k` and `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct HataConfig {
    points: Vec<GaussianRational>,
    exponents: Vec<u32>,
    m: u32,
    budget_bits: u64,
}

impl HataConfig {
    pub fn new(points: Vec<GaussianRational>, exponents: Vec<u32>, m: u32) -> Result<Self, HataError> {
        if !(1..=2).contains(&points.len()) {
            return Err(HataError::UnsupportedPointCount(points.len()));
        }
        if exponents.len() != points.len() + 1 {
            return Err(HataError::ExponentCount { expected: points.len() + 1, got: exponents.len() });
        }
        for (i, p) in points.iter().enumerate() {
            if p.is_zero() || *p == GaussianRational::one() || points[..i].contains(p) {
                return Err(HataError::InvalidPoint(p.to_string()));
            }
        }
        Ok(HataConfig { points, exponents, m, budget_bits: DEFAULT_BUDGET_BITS })
    }

    /// `a_1 = 2`, `a_2 = 1+i`, exponents `(2n, 2n, 2n; 3n)`.
    pub fn log2_pi(n: u32) -> Self {
        HataConfig::new(
            vec![GaussianRational::from_ints(2, 0), GaussianRational::from_ints(1, 1)],
            vec![2 * n, 2 * n, 2 * n],
            3 * n,
        )
        .expect("valid points")
    }

    /// `a_1 = 4/3`, `a_2 = 3/2`, exponents `(2n, 2n, 2n; 3n)`.
    pub fn log2_log3(n: u32) -> Self {
        HataConfig::new(
            vec![GaussianRational::real(Rational::from((4, 3))), GaussianRational::real(Rational::from((3, 2)))],
            vec![2 * n, 2 * n, 2 * n],
            3 * n,
        )
        .expect("valid points")
    }

    pub fn with_budget(mut self, bits: u64) -> Self {
        self.budget_bits = bits;
        self
    }

    pub fn points(&self) -> &[GaussianRational] {
        &self.points
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// All exponents multiplied by `n`.
    pub fn scaled(&self, n: u32) -> Self {
        HataConfig {
            points: self.points.clone(),
            exponents: self.exponents.iter().map(|e| e * n).collect(),
            m: self.m * n,
            budget_bits: self.budget_bits,
        }
    }

    /// `Σ_j n_j log|z - a_j| - m log|z|`.
    pub fn phase(&self) -> ExponentProduct {
        let mut roots = vec![(GaussianRational::one(), Rational::from(self.exponents[0]))];
        for (p, e) in self.points.iter().zip(&self.exponents[1..]) {
            roots.push((p.clone(), Rational::from(*e)));
        }
        ExponentProduct::from_roots(&roots, Rational::from(self.m))
    }

    fn is_log2_pi(&self) -> bool {
        self.points == [GaussianRational::from_ints(2, 0), GaussianRational::from_ints(1, 1)]
    }

    /// `n1 + [n2/2] - m >= 0` and `n1 + n2 - m >= 0`.
    pub fn check_proviso(&self) -> Result<(), HataError> {
        if self.points.len() != 2 {
            return Ok(());
        }
        let (n1, n2, m) = (self.exponents[1] as i64, self.exponents[2] as i64, self.m as i64);
        let mut failed = Vec::new();
        if n1 + n2 / 2 - m < 0 {
            failed.push(format!("n1 + [n2/2] - m = {} < 0", n1 + n2 / 2 - m));
        }
        if n1 + n2 - m < 0 {
            failed.push(format!("n1 + n2 - m = {} < 0", n1 + n2 - m));
        }
        if failed.is_empty() {
            Ok(())
        } else {
            Err(HataError::Proviso(failed.join("; ")))
        }
    }
}

/// Gaussian integer used in the inner loops.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
struct GInt {
    re: Integer,
    im: Integer,
}

impl GInt {
    fn real(re: Integer) -> Self {
        GInt { re, im: Integer::new() }
    }

    fn mul(&self, o: &GInt) -> GInt {
        if self.im == 0 && o.im == 0 {
            return GInt::real(Integer::from(&self.re * &o.re));
        }
        let re = Integer::from(&self.re * &o.re) - Integer::from(&self.im * &o.im);
        let im = Integer::from(&self.re * &o.im) + Integer::from(&self.im * &o.re);
        GInt { re, im }
    }

    fn add_assign(&mut self, o: &GInt) {
        self.re += &o.re;
        self.im += &o.im;
    }

    fn pow(&self, e: u32) -> GInt {
        (0..e).fold(GInt::real(Integer::from(1)), |acc, _| acc.mul(self))
    }

    fn from_gaussian(g: &GaussianRational) -> GInt {
        GInt { re: g.re.numer().clone(), im: g.im.numer().clone() }
    }

    fn to_gaussian(&self) -> GaussianRational {
        GaussianRational::new(Rational::from(&self.re), Rational::from(&self.im))
    }

    /// Exponent of `1+i` dividing a nonzero value.
    fn ord_one_plus_i(&self) -> i64 {
        self.to_gaussian().ord_one_plus_i().expect("nonzero")
    }
}

/// `T_j(l) = C(n_j, l) (-a_j d)^{n_j - l} d^l`, `d` the common denominator.
fn coefficient_tables(cfg: &HataConfig) -> (Vec<Vec<GInt>>, Integer) {
    let mut d = Integer::from(1);
    for p in &cfg.points {
        d.lcm_mut(p.re.denom());
        d.lcm_mut(p.im.denom());
    }
    let mut tables = Vec::new();
    let n0 = cfg.exponents[0];
    tables.push(
        (0..=n0)
            .map(|l| {
                let mut c = binomial(n0 as i64, l as i64);
                if (n0 - l) % 2 == 1 {
                    c = -c;
                }
                GInt::real(c)
            })
            .collect(),
    );
    for (p, &n) in cfg.points.iter().zip(&cfg.exponents[1..]) {
        let scaled = GInt::from_gaussian(&p.scale(&Rational::from(&d)));
        let neg = GInt { re: -scaled.re.clone(), im: -scaled.im.clone() };
        let dd = GInt::real(d.clone());
        tables.push(
            (0..=n)
                .map(|l| GInt::real(binomial(n as i64, l as i64)).mul(&neg.pow(n - l)).mul(&dd.pow(l)))
                .collect(),
        );
    }
    (tables, d)
}

/// Coefficient of `z^t` in `Π_j (z - a_j)^{n_j}`, summed over all
/// multi-indices `l` with `Σ l_j = t` (one stratum of `l_0` per task).
pub fn coefficient_buckets(cfg: &HataConfig) -> Result<Vec<GaussianRational>, HataError> {
    let (tables, d) = coefficient_tables(cfg);
    let total: u32 = cfg.exponents.iter().sum();
    let len = total as usize + 1;
    let partials: Vec<Vec<GInt>> = (0..tables[0].len())
        .into_par_iter()
        .map(|l0| {
            let mut acc = vec![GInt::default(); len];
            let t0 = &tables[0][l0];
            if tables.len() == 2 {
                for (l1, t1) in tables[1].iter().enumerate() {
                    acc[l0 + l1].add_assign(&t0.mul(t1));
                }
            } else {
                for (l1, t1) in tables[1].iter().enumerate() {
                    let p01 = t0.mul(t1);
                    for (l2, t2) in tables[2].iter().enumerate() {
                        acc[l0 + l1 + l2].add_assign(&p01.mul(t2));
                    }
                }
            }
            acc
        })
        .collect();
    let mut buckets = vec![GInt::default(); len];
    for part in &partials {
        for (b, v) in buckets.iter_mut().zip(part) {
            b.add_assign(v);
        }
    }
    let scale: u32 = cfg.exponents[1..].iter().sum();
    let denom = Rational::from(rug::ops::Pow::pow(d, scale)).recip();
    let bits = buckets
        .iter()
        .map(|g| g.re.significant_bits().max(g.im.significant_bits()) as u64)
        .max()
        .unwrap_or(0);
    if bits > cfg.budget_bits {
        return Err(HataError::CoefficientBudget { bits, budget: cfg.budget_bits });
    }
    Ok(buckets.iter().map(|g| g.to_gaussian().scale(&denom)).collect())
}

fn form_from_buckets(buckets: &[GaussianRational], m: u32, target: &GaussianRational) -> LogLinearForm<GaussianRational> {
    let m = m as i64;
    let inv = target.recip().expect("target is nonzero");
    let mut log_coeff = GaussianRational::zero();
    let mut const_coeff = GaussianRational::zero();
    // target^s for s = t - m, built incrementally from s = -m
    let mut power = inv.pow(m).expect("nonzero");
    let one = GaussianRational::one();
    for (t, c) in buckets.iter().enumerate() {
        let s = t as i64 - m;
        if s == 0 {
            log_coeff = c.clone();
        } else if !c.is_zero() {
            let w = (&power - &one).scale(&Rational::from((1, s)));
            const_coeff = &const_coeff + &(c * &w);
        }
        power = &power * target;
    }
    LogLinearForm { log_coeff, const_coeff, target: target.clone() }
}

/// Exact form `∫_1^target ... = log_coeff · log(target) + const_coeff`.
pub fn expand_form(cfg: &HataConfig, target: &GaussianRational) -> Result<LogLinearForm<GaussianRational>, HataError> {
    if !cfg.points.contains(target) {
        return Err(HataError::UnknownTarget(target.to_string()));
    }
    let buckets = coefficient_buckets(cfg)?;
    Ok(form_from_buckets(&buckets, cfg.m, target))
}

/// One form per configured point, sharing the coefficient of the logarithm.
#[derive(Debug, Clone, PartialEq)]
pub struct SimultaneousForms {
    pub log_coeff: GaussianRational,
    pub forms: Vec<LogLinearForm<GaussianRational>>,
}

pub fn simultaneous_forms(cfg: &HataConfig) -> Result<SimultaneousForms, HataError> {
    let buckets = coefficient_buckets(cfg)?;
    let forms: Vec<_> = cfg.points.iter().map(|p| form_from_buckets(&buckets, cfg.m, p)).collect();
    Ok(SimultaneousForms { log_coeff: forms[0].log_coeff.clone(), forms })
}

/// Outcome of the integrality identities for one target.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessReport {
    pub target: String,
    pub tuples: u64,
    /// Multi-indices where the regrouped closed form differs.
    pub mismatches: Vec<[u32; 3]>,
    /// `min_l ord_{1+i}(A_l target^{Σl - m})`.
    pub min_valuation: i64,
    /// Smallest `e >= 0` with every term times `(1+i)^e` in `Z[i]`.
    pub scaling_exponent: u32,
    /// Exponent of 2 the regrouped closed forms ask for (0 under the proviso).
    pub predicted_two_power: u32,
}

impl WitnessReport {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty() && self.scaling_exponent == 0
    }
}

/// Checks `2^{n1-l1} (1+i)^{n2-l2} t^{Σl-m}` against its regrouped
/// closed form for every `l`, with `t ∈ {1, 2, 1+i}`.
pub fn denominator_witness(cfg: &HataConfig, target: &GaussianRational) -> Result<WitnessReport, HataError> {
    if !cfg.is_log2_pi() {
        return Err(HataError::WitnessUnsupported);
    }
    cfg.check_proviso()?;
    let (n0, n1, n2, m) = (cfg.exponents[0], cfg.exponents[1], cfg.exponents[2], cfg.m);
    let g = |re: i64, im: i64| GInt { re: Integer::from(re), im: Integer::from(im) };
    let one = g(1, 0);
    let two = g(2, 0);
    let opi = g(1, 1);
    let omi = g(1, -1);
    let t = GInt::from_gaussian(target);
    // lhs · t^m = t^{l0} · 2^{n1-l1} t^{l1} · (1+i)^{n2-l2} t^{l2}
    let u0: Vec<GInt> = (0..=n0).map(|l| t.pow(l)).collect();
    let u1: Vec<GInt> = (0..=n1).map(|l| two.pow(n1 - l).mul(&t.pow(l))).collect();
    let u2: Vec<GInt> = (0..=n2).map(|l| opi.pow(n2 - l).mul(&t.pow(l))).collect();
    let half = n2 / 2;
    let (r0, r1, r2, cst, t_ord): (Vec<GInt>, Vec<GInt>, Vec<GInt>, GInt, i64) = if *target == GaussianRational::one() {
        (
            vec![one.clone(); n0 as usize + 1],
            (0..=n1).map(|l| two.pow(n1 - l)).collect(),
            (0..=n2).map(|l| opi.pow(n2 - l)).collect(),
            one.clone(),
            0,
        )
    } else if *target == GaussianRational::from_ints(2, 0) {
        // 2^{n1+[n2/2]-m+l0} i^{[n2/2]} (1+i)^{2{n2/2}} (1-i)^{l2}, times 2^m
        let cst = two.pow(n1 + half).mul(&g(0, 1).pow(half)).mul(&opi.pow(n2 % 2));
        (
            (0..=n0).map(|l| two.pow(l)).collect(),
            vec![one.clone(); n1 as usize + 1],
            (0..=n2).map(|l| omi.pow(l)).collect(),
            cst,
            2,
        )
    } else if *target == GaussianRational::from_ints(1, 1) {
        // (1+i)^{n1+n2-m+l0} (1-i)^{n1-l1}, times (1+i)^m
        (
            (0..=n0).map(|l| opi.pow(l)).collect(),
            (0..=n1).map(|l| omi.pow(n1 - l)).collect(),
            vec![one.clone(); n2 as usize + 1],
            opi.pow(n1 + n2),
            1,
        )
    } else {
        return Err(HataError::UnknownTarget(target.to_string()));
    };
    let ords = |v: &[GInt]| v.iter().map(GInt::ord_one_plus_i).collect::<Vec<i64>>();
    let (o0, o1, o2) = (ords(&u0), ords(&u1), ords(&u2));
    let results: Vec<(Vec<[u32; 3]>, i64)> = (0..=n0)
        .into_par_iter()
        .map(|l0| {
            let mut bad = Vec::new();
            let mut min = i64::MAX;
            let i0 = l0 as usize;
            let rc = r0[i0].mul(&cst);
            for l1 in 0..=n1 as usize {
                let p01 = u0[i0].mul(&u1[l1]);
                let q01 = rc.mul(&r1[l1]);
                for l2 in 0..=n2 as usize {
                    if p01.mul(&u2[l2]) != q01.mul(&r2[l2]) {
                        bad.push([l0, l1 as u32, l2 as u32]);
                    }
                    min = min.min(o0[i0] + o1[l1] + o2[l2] - m as i64 * t_ord);
                }
            }
            (bad, min)
        })
        .collect();
    let mut mismatches = Vec::new();
    let mut min_valuation = i64::MAX;
    for (bad, min) in results {
        mismatches.extend(bad);
        min_valuation = min_valuation.min(min);
    }
    let predicted = if t_ord == 2 { (m as i64 - n1 as i64 - half as i64).max(0) as u32 } else { 0 };
    Ok(WitnessReport {
        target: target.to_string(),
        tuples: (n0 as u64 + 1) * (n1 as u64 + 1) * (n2 as u64 + 1),
        mismatches,
        min_valuation,
        scaling_exponent: (-min_valuation).max(0) as u32,
        predicted_two_power: predicted,
    })
}

/// Route for the contour integral.
#[derive(Debug, Clone, PartialEq)]
pub enum ContourPath {
    /// Straight segment, or a detour through `1 + i/2` when the segment
    /// passes within `10^-3` of the origin.
    Default,
    /// Polygon through the listed vertices, from 1 to the target.
    Polygon(Vec<GaussianRational>),
}

fn segment_distance_sq(p: &GaussianRational, q: &GaussianRational) -> f64 {
    let (px, py) = (p.re.to_f64(), p.im.to_f64());
    let (qx, qy) = (q.re.to_f64(), q.im.to_f64());
    let (dx, dy) = (qx - px, qy - py);
    let len = dx * dx + dy * dy;
    let s = if len == 0.0 { 0.0 } else { (-(px * dx + py * dy) / len).clamp(0.0, 1.0) };
    let (x, y) = (px + s * dx, py + s * dy);
    x * x + y * y
}

/// Exact test: does the closed segment `[p, q]` contain 0?
fn segment_hits_zero(p: &GaussianRational, q: &GaussianRational) -> bool {
    let cross = Rational::from(&p.re * &q.im) - Rational::from(&p.im * &q.re);
    let dot = Rational::from(&p.re * &q.re) + Rational::from(&p.im * &q.im);
    cross == 0 && dot <= 0
}

pub fn default_path(target: &GaussianRational) -> Vec<GaussianRational> {
    let one = GaussianRational::one();
    if segment_distance_sq(&one, target) < 1e-6 {
        let detour = GaussianRational::new(Rational::from(1), Rational::from((1, 2)));
        vec![one, detour, target.clone()]
    } else {
        vec![one, target.clone()]
    }
}

/// A second route bent away from the origin, homotopic to the default.
pub fn alternate_path(target: &GaussianRational) -> Vec<GaussianRational> {
    let one = GaussianRational::one();
    let mid = (&one + target).scale(&Rational::from((1, 2)));
    let chord = target - &one;
    let perp = (&chord * &GaussianRational::i()).scale(&Rational::from((1, 4)));
    let a = &mid + &perp;
    let b = &mid - &perp;
    let bend = if a.norm() >= b.norm() { a } else { b };
    vec![one, bend, target.clone()]
}

/// `∫ Π (z - a_j)^{n_j} z^{-m-1} dz` along `path` by quadrature.
pub fn contour_integral(
    cfg: &HataConfig,
    target: &GaussianRational,
    path: &ContourPath,
    digits: Digits,
) -> Result<ComplexFloat, HataError> {
    let vertices = match path {
        ContourPath::Default => default_path(target),
        ContourPath::Polygon(v) => v.clone(),
    };
    if vertices.len() < 2 || vertices[0] != GaussianRational::one() || vertices.last() != Some(target) {
        return Err(HataError::PathEndpoints);
    }
    if vertices.windows(2).any(|w| segment_hits_zero(&w[0], &w[1])) {
        return Err(HataError::PathThroughZero);
    }
    let bits = digits.plus(10).bits();
    let mut roots = vec![ComplexFloat::real(Float::with_val(bits, 1))];
    roots.extend(cfg.points.iter().map(|p| ComplexFloat::from_gaussian(p, bits)));
    let exps = cfg.exponents.clone();
    let m1 = cfg.m + 1;
    let verts: Vec<ComplexFloat> = vertices.iter().map(|v| ComplexFloat::from_gaussian(v, bits)).collect();
    let q = integrate_path(
        |z| {
            let mut num = ComplexFloat::real(Float::with_val(bits, 1));
            for (r, &e) in roots.iter().zip(&exps) {
                num = &num * &(z - r).powu(e);
            }
            &num / &z.powu(m1)
        },
        &verts,
        digits,
    )?;
    Ok(q.value)
}

/// Role assigned to a saddle point.
#[derive(Debug, Clone, Serialize)]
pub struct SaddleRole {
    pub re: f64,
    pub im: f64,
    #[serde(serialize_with = "ser_float")]
    pub value: BigFloat,
    pub role: String,
    /// Growth rate measured from exact forms at two sizes.
    pub measured: Option<f64>,
}

fn ser_float<S: serde::Serializer>(x: &BigFloat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_fixed(30))
}

/// Bound with its saddle assignment.
#[derive(Debug, Clone, Serialize)]
pub struct HataBound {
    pub report: BoundReport,
    pub saddles: Vec<SaddleRole>,
}

/// Sizes used to measure growth rates of the exact forms.
pub const RATE_SIZES: (u32, u32) = (40, 80);

/// Numeric values of the segment forms and `|log_coeff|` at scale `n`.
#[derive(Debug, Clone)]
pub struct SegmentSample {
    pub labels: Vec<String>,
    pub log_abs_values: Vec<f64>,
    pub log_abs_coeff: f64,
}

/// Segment integrals `∫_1^{a_1}`, `∫_1^{a_2}`, `∫_{a_1}^{a_2}` at `unit.scaled(n)`,
/// evaluated from the exact forms.
pub fn segment_sample(unit: &HataConfig, n: u32) -> Result<SegmentSample, HataError> {
    let cfg = unit.scaled(n);
    let sf = simultaneous_forms(&cfg)?;
    let coeff_digits = sf
        .forms
        .iter()
        .flat_map(|f| [&f.log_coeff, &f.const_coeff])
        .map(|g| {
            let bits = |r: &Rational| r.numer().significant_bits() as f64 + r.denom().significant_bits() as f64;
            bits(&g.re).max(bits(&g.im))
        })
        .fold(0.0f64, f64::max);
    let digits = Digits((coeff_digits * 0.30103) as u32 + 60);
    let vals: Vec<ComplexFloat> = sf.forms.iter().map(|f| f.value(digits)).collect();
    let ln_abs = |z: &ComplexFloat| z.abs().ln().to_f64();
    let mut labels = Vec::new();
    let mut log_abs_values = Vec::new();
    for (p, v) in unit.points.iter().zip(&vals) {
        labels.push(format!("[1, {p}]"));
        log_abs_values.push(ln_abs(v));
    }
    if vals.len() == 2 {
        labels.push(format!("[{}, {}]", unit.points[0], unit.points[1]));
        log_abs_values.push(ln_abs(&(&vals[1] - &vals[0])));
    }
    let b = ComplexFloat::from_gaussian(&sf.log_coeff, digits.bits());
    Ok(SegmentSample { labels, log_abs_values, log_abs_coeff: ln_abs(&b) })
}

/// `(1+i)`-adic exponent and odd rational part of a point `u (1+i)^e r`.
fn decompose(p: &GaussianRational) -> Result<(i64, Rational), HataError> {
    let e = p.ord_one_plus_i().ok_or_else(|| HataError::InvalidPoint(p.to_string()))?;
    let opi = GaussianRational::from_ints(1, 1);
    let q = p.checked_div(&opi.pow(e).expect("nonzero")).expect("nonzero");
    if q.im == 0 {
        Ok((e, q.re.abs()))
    } else if q.re == 0 {
        Ok((e, q.im.abs()))
    } else {
        Err(HataError::SplitPrime(p.to_string()))
    }
}

fn odd_primes(r: &Rational) -> Vec<u64> {
    let mut out = Vec::new();
    for z in [r.numer().clone().abs(), r.denom().clone()] {
        let mut z = z;
        z.remove_factor_mut(&Integer::from(2));
        let mut p = 3u64;
        while z > 1 {
            if z.is_divisible_u(p as u32) {
                out.push(p);
                while z.is_divisible_u(p as u32) {
                    z /= p as u32;
                }
            }
            p += 2;
        }
    }
    out
}

fn valuation(r: &Rational, p: u64) -> i64 {
    let pz = Integer::from(p);
    let mut num = r.numer().clone().abs();
    let mut den = r.denom().clone();
    num.remove_factor_mut(&pz) as i64 - den.remove_factor_mut(&pz) as i64
}

/// Per-`n` rate of the power denominator of `A_l · t^{Σl - m}` over
/// `t ∈ {1, a_1, .., a_k}` (linear in `l`, so extremal at the box vertices).
pub fn power_denominator_rate(unit: &HataConfig, digits: Digits) -> Result<(BigFloat, String), HataError> {
    let parts: Vec<(i64, Rational)> = unit.points.iter().map(decompose).collect::<Result<_, _>>()?;
    let mut primes: Vec<u64> = parts.iter().flat_map(|(_, r)| odd_primes(r)).collect();
    primes.sort_unstable();
    primes.dedup();
    let k = unit.points.len();
    let mut targets = vec![(0i64, Rational::from(1))];
    targets.extend(parts.iter().cloned());
    // valuation functional: v(point) for the (1+i) prime and each odd prime
    let val_of = |part: &(i64, Rational), prime: Option<u64>| -> i64 {
        match prime {
            None => part.0,
            Some(p) => valuation(&part.1, p),
        }
    };
    let mut total = BigFloat::zero(digits);
    let mut desc = Vec::new();
    let mut prime_list: Vec<Option<u64>> = vec![None];
    prime_list.extend(primes.iter().map(|&p| Some(p)));
    for prime in prime_list {
        let mut worst = 0i64;
        for t in &targets {
            let vt = val_of(t, prime);
            for mask in 0..(1u32 << (k + 1)) {
                // l_j = 0 or n_j
                let l: Vec<i64> = (0..=k).map(|j| if mask >> j & 1 == 1 { unit.exponents[j] as i64 } else { 0 }).collect();
                let sum_l: i64 = l.iter().sum();
                let mut v = (sum_l - unit.m as i64) * vt;
                for j in 1..=k {
                    v += (unit.exponents[j] as i64 - l[j]) * val_of(&parts[j - 1], prime);
                }
                worst = worst.min(v);
            }
        }
        if worst < 0 {
            let need = (-worst) as u32;
            let term = match prime {
                None => {
                    desc.push(format!("(1+i)^{need}"));
                    &BigFloat::ln_of_rational(&Rational::from(2), digits) * &BigFloat::from_f64(need as f64 / 2.0, digits)
                }
                Some(p) => {
                    desc.push(format!("{p}^{need}"));
                    &BigFloat::ln_of_rational(&Rational::from(p), digits) * &BigFloat::from_f64(need as f64, digits)
                }
            };
            total = &total + &term;
        }
    }
    let text = if desc.is_empty() { "none".to_string() } else { desc.join(" ") };
    Ok((total, text))
}

/// Bound for the family `unit.scaled(n)` via one (k = 1) or two (k = 2)
/// segment forms; saddles are matched to forms by measured growth rates.
pub fn hata_bound(unit: &HataConfig, digits: Digits) -> Result<HataBound, HataError> {
    let work = digits.plus(10);
    let saddles = saddle_points(&unit.phase(), work)?;
    let (n1, n2) = RATE_SIZES;
    let s1 = segment_sample(unit, n1)?;
    let s2 = segment_sample(unit, n2)?;
    let span = (n2 - n1) as f64;
    let rates: Vec<f64> = s1.log_abs_values.iter().zip(&s2.log_abs_values).map(|(a, b)| (b - a) / span).collect();
    let coeff_rate = (s2.log_abs_coeff - s1.log_abs_coeff) / span;
    let values: Vec<f64> = saddles.iter().map(|s| s.value.to_f64()).collect();
    let nearest = |r: f64| {
        (0..values.len())
            .min_by(|&i, &j| (values[i] - r).abs().total_cmp(&(values[j] - r).abs()))
            .expect("saddles exist")
    };
    let matched: Vec<usize> = rates.iter().map(|&r| nearest(r)).collect();

    // choose the forms: one form for k = 1, the best separated pair for k = 2
    let chosen: Vec<usize> = if unit.points.len() == 1 {
        vec![0]
    } else {
        let mut best: Option<(f64, Vec<usize>)> = None;
        for i in 0..rates.len() {
            for j in i + 1..rates.len() {
                if matched[i] == matched[j] {
                    continue;
                }
                let c0 = (-values[matched[i]]).min(-values[matched[j]]);
                if best.as_ref().is_none_or(|(b, _)| c0 > *b) {
                    best = Some((c0, vec![i, j]));
                }
            }
        }
        best.ok_or(HataError::NoSeparation)?.1
    };
    let used: Vec<usize> = chosen.iter().map(|&c| matched[c]).collect();
    let coeff_saddle = (0..saddles.len())
        .filter(|i| !used.contains(i))
        .max_by(|&i, &j| values[i].total_cmp(&values[j]))
        .ok_or(HataError::NoSeparation)?;
    if (values[coeff_saddle] - coeff_rate).abs() > 0.1 {
        return Err(HataError::SaddleMismatch {
            saddle: format!("{:.6}", values[coeff_saddle]),
            measured: format!("{coeff_rate:.6}"),
        });
    }

    let mut roles: Vec<SaddleRole> = saddles
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let (role, measured) = if i == coeff_saddle {
                ("coefficient growth".to_string(), Some(coeff_rate))
            } else if let Some(pos) = chosen.iter().position(|&c| matched[c] == i) {
                (format!("decay of {}", s1.labels[chosen[pos]]), Some(rates[chosen[pos]]))
            } else {
                ("unused".to_string(), None)
            };
            SaddleRole { re: s.root.re.to_f64(), im: s.root.im.to_f64(), value: s.value.clone(), role, measured }
        })
        .collect();
    roles.sort_by(|a, b| a.value.partial_cmp(&b.value).expect("finite"));

    let mut decays: Vec<&BigFloat> = used.iter().map(|&i| &saddles[i].value).collect();
    decays.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    let slow = -decays[0];
    let fast = decays.get(1).map(|v| -*v).unwrap_or_else(|| slow.clone());

    let total: u32 = unit.exponents.iter().sum();
    let beta = unit.m.max(total - unit.m);
    let profile = minimize_varpi(&unit.exponents, unit.m)?;
    let saving = valuation_asymptotic(&profile.profile, work)?;
    let (power_rate, power_desc) = power_denominator_rate(unit, work)?;
    let zero = BigFloat::zero(work);

    let terms = vec![
        Contribution {
            label: "integral decay".into(),
            kind: TermKind::IntegralDecay,
            source: "saddle values matched to the segment forms by measured growth".into(),
            c0: slow,
            c0_prime: fast,
            c1: zero.clone(),
        },
        Contribution::shared(
            "coefficient growth",
            TermKind::CoefficientGrowth,
            "remaining saddle value",
            zero.clone(),
            saddles[coeff_saddle].value.clone(),
        ),
        Contribution::arithmetic(
            &format!("lcm D_({beta}n)"),
            TermKind::LcmGrowth,
            "denominators 1/(l0+..+lk-m), prime number theorem",
            BigFloat::from_f64(beta as f64, work),
        ),
        Contribution::arithmetic(
            &format!("power denominators {power_desc}"),
            TermKind::PowerDenominator,
            "valuations of A_l t^(l0+..+lk-m) at the vertices of the index box",
            power_rate,
        ),
        Contribution::arithmetic(
            "large-prime saving",
            TermKind::PhiSaving,
            "digamma-weighted minimum of the floor-sum function",
            -&saving,
        ),
    ];
    let report = assemble_bound(terms, unit.points.len() == 2, work)?;
    Ok(HataBound { report: trim(report, digits), saddles: roles })
}

fn trim(mut r: BoundReport, digits: Digits) -> BoundReport {
    let t = |v: &BigFloat| BigFloat::new(v.value().clone(), digits);
    r.c0 = t(&r.c0);
    r.c1 = t(&r.c1);
    r.mu = t(&r.mu);
    r.c0_prime = r.c0_prime.as_ref().map(t);
    for c in &mut r.terms {
        c.c0 = t(&c.c0);
        c.c0_prime = t(&c.c0_prime);
        c.c1 = t(&c.c1);
    }
    r
}
