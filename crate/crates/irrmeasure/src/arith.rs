//! Denominator savings: the reduced denominator of `m!(n0+n1-m)!/(n0! n1!)`,
//! its large-prime part, the 1-periodic step profiles governing which primes
//! drop out, and their digamma-weighted asymptotic contribution.

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::Serialize;
use thiserror::Error;

use crate::exact::{lcm_upto, ordp_factorial, primes_upto, BigFloat, Digits};
use crate::numeric::digamma::digamma;
use crate::numeric::NumericError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ValuationError {
    #[error("profile interval starting at 0 (digamma is singular there)")]
    TouchesZero,
    #[error("rates must be positive")]
    NonPositiveRate,
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

fn floor_div(a: u64, b: u64) -> i64 {
    (a / b) as i64
}

/// `[n0/q] + [n1/q] - [m/q] - [(n0+n1-m)/q]` for `q = p^j`.
fn bracket(m: u64, n0: u64, n1: u64, q: u64) -> i64 {
    floor_div(n0, q) + floor_div(n1, q) - floor_div(m, q) - floor_div(n0 + n1 - m, q)
}

/// Reduced denominator of `m! (n0+n1-m)! / (n0! n1!)`.
pub fn phi_denominator(m: u32, n0: u32, n1: u32) -> Integer {
    let (m, n0, n1) = (m as u64, n0 as u64, n1 as u64);
    assert!(m <= n0 + n1, "m exceeds n0 + n1");
    let mut out = Integer::from(1);
    for p in primes_upto(n0 + n1) {
        let ord = |k| ordp_factorial(p, k).expect("prime") as i64;
        let v = ord(n0) + ord(n1) - ord(m) - ord(n0 + n1 - m);
        if v > 0 {
            out *= Integer::from(p).pow(v as u32);
        }
    }
    out
}

/// `Π_p p^{Σ_j max(0, [n0/p^j] + [n1/p^j] - [m/p^j] - [(n0+n1-m)/p^j])}`.
///
/// Always a multiple of [`phi_denominator`]; the two differ when some
/// higher power of `p` contributes a negative bracket.
pub fn phi_floor_product(m: u32, n0: u32, n1: u32) -> Integer {
    let (m, n0, n1) = (m as u64, n0 as u64, n1 as u64);
    let mut out = Integer::from(1);
    for p in primes_upto(n0 + n1) {
        let mut q = p;
        let mut e = 0i64;
        loop {
            e += bracket(m, n0, n1, q).max(0);
            match q.checked_mul(p) {
                Some(next) if next <= n0 + n1 => q = next,
                _ => break,
            }
        }
        if e > 0 {
            out *= Integer::from(p).pow(e as u32);
        }
    }
    out
}

/// Which primes count as "large" in [`phi_tilde`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PrimeThreshold {
    /// `p > sqrt(n0 + n1)`: only first powers of `p` can occur.
    #[default]
    SqrtTotal,
    /// `p > sqrt(n1)`.
    SqrtN1,
    /// `p > bound`.
    Above(u64),
}

impl PrimeThreshold {
    fn admits(self, p: u64, n0: u64, n1: u64) -> bool {
        match self {
            PrimeThreshold::SqrtTotal => p * p > n0 + n1,
            PrimeThreshold::SqrtN1 => p * p > n1,
            PrimeThreshold::Above(b) => p > b,
        }
    }
}

/// `Π_{p large} p^{max(0, [n0/p] + [n1/p] - [m/p] - [(n0+n1-m)/p])}`.
pub fn phi_tilde(m: u32, n0: u32, n1: u32, threshold: PrimeThreshold) -> Integer {
    let (m, n0, n1) = (m as u64, n0 as u64, n1 as u64);
    primes_upto(n0 + n1)
        .into_par_iter()
        .filter(|&p| threshold.admits(p, n0, n1) && bracket(m, n0, n1, p) > 0)
        .map(|p| Integer::from(p).pow(bracket(m, n0, n1, p) as u32))
        .reduce(|| Integer::from(1), |a, b| a * b)
}

/// `log(phi_tilde)`, summed in floating point (cheap for large `n`).
pub fn log_phi_tilde(m: u32, n0: u32, n1: u32, threshold: PrimeThreshold) -> f64 {
    let (m, n0, n1) = (m as u64, n0 as u64, n1 as u64);
    primes_upto(n0 + n1)
        .into_par_iter()
        .filter(|&p| threshold.admits(p, n0, n1))
        .map(|p| bracket(m, n0, n1, p).max(0) as f64 * (p as f64).ln())
        .sum()
}

/// A maximal interval `[lo, hi)` on which a step function takes `value`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    #[serde(serialize_with = "ser_rational")]
    pub lo: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub hi: Rational,
    pub value: u32,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// 1-periodic, integer-valued, piecewise constant on `[0, 1)`; zero off the
/// listed steps.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct StepFunction {
    steps: Vec<Step>,
}

impl StepFunction {
    /// Builds from consecutive cells of `[0,1)`, merging equal neighbours
    /// and dropping zero cells.
    pub fn from_cells(cells: impl IntoIterator<Item = (Rational, Rational, u32)>) -> Self {
        let mut steps: Vec<Step> = Vec::new();
        for (lo, hi, value) in cells {
            if value == 0 {
                continue;
            }
            if let Some(last) = steps.last_mut() {
                if last.hi == lo && last.value == value {
                    last.hi = hi;
                    continue;
                }
            }
            steps.push(Step { lo, hi, value });
        }
        StepFunction { steps }
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn is_zero(&self) -> bool {
        self.steps.is_empty()
    }

    /// Value at `x` (reduced mod 1).
    pub fn eval(&self, x: &Rational) -> u32 {
        let frac = Rational::from(x - x.clone().floor());
        self.steps
            .iter()
            .find(|s| s.lo <= frac && frac < s.hi)
            .map_or(0, |s| s.value)
    }
}

fn lcm_of(values: &[u64]) -> u64 {
    values.iter().filter(|&&v| v > 0).fold(1u64, |acc, &v| {
        let g = gcd(acc, v);
        acc / g * v
    })
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn floor_rat(r: &Rational) -> i64 {
    r.clone().floor().numer().to_i64().expect("small floor")
}

/// `x ↦ max(0, [n0 x] + [n1 x] - [m x] - [(n0+n1-m) x])` on `[0, 1)`.
pub fn phi_step_profile(m_rate: u32, n0_rate: u32, n1_rate: u32) -> StepFunction {
    let (m, n0, n1) = (m_rate as i64, n0_rate as i64, n1_rate as i64);
    let rest = n0 + n1 - m;
    let l = lcm_of(&[m as u64, n0 as u64, n1 as u64, rest.unsigned_abs()]) as i64;
    let cells = (0..l).map(|q| {
        let x = Rational::from((q, l));
        let f = |k: i64| floor_rat(&Rational::from(&x * k));
        let v = (f(n0) + f(n1) - f(m) - f(rest)).max(0) as u32;
        (x, Rational::from((q + 1, l)), v)
    });
    StepFunction::from_cells(cells.collect::<Vec<_>>())
}

/// The minimiser found on one cell of the `x` axis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarpiCertificate {
    #[serde(serialize_with = "ser_rational")]
    pub x: Rational,
    #[serde(serialize_with = "ser_rational_vec")]
    pub y: Vec<Rational>,
    pub value: u32,
}

fn ser_rational_vec<S: serde::Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for r in v {
        seq.serialize_element(&r.to_string())?;
    }
    seq.end()
}

/// Pointwise minimum profile together with one witness per cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarpiProfile {
    pub profile: StepFunction,
    pub certificates: Vec<VarpiCertificate>,
}

/// `Σ_j ([α_j x] - [y_j] - [α_j x - y_j])`.
pub fn varpi(alphas: &[u32], x: &Rational, y: &[Rational]) -> i64 {
    alphas
        .iter()
        .zip(y)
        .map(|(&a, yj)| {
            let ax = Rational::from(x * a);
            floor_rat(&ax) - floor_rat(yj) - floor_rat(&Rational::from(&ax - yj))
        })
        .sum()
}

/// Minimum of `varpi(x, y)` over `y ∈ [0,1)^k` with `Σ y_j ≡ α x (mod 1)`.
///
/// The `x` axis is cut at multiples of `1/L`, `L = lcm(α_j, α, |Σα_j - α|)`
/// (the last rate is where `{αx}` and `Σ{α_j x}` cross); each cell is
/// evaluated at its midpoint, and the free `y_j` run over the lattice
/// `(1/2L) Z`, the last one solved from the congruence.
pub fn minimize_varpi(alphas: &[u32], alpha: u32) -> Result<VarpiProfile, ValuationError> {
    if alpha == 0 || alphas.is_empty() || alphas.contains(&0) {
        return Err(ValuationError::NonPositiveRate);
    }
    let total: i64 = alphas.iter().map(|&a| a as i64).sum();
    let mut rates: Vec<u64> = alphas.iter().map(|&a| a as u64).collect();
    rates.push(alpha as u64);
    rates.push((total - alpha as i64).unsigned_abs());
    let l = lcm_of(&rates) as i64;
    let grid = 2 * l;
    let k = alphas.len();

    let cells: Vec<(Rational, Rational, VarpiCertificate)> = (0..l)
        .into_par_iter()
        .map(|q| {
            let x = Rational::from((2 * q + 1, 2 * l));
            let target = Rational::from(&x * alpha);
            let mut best: Option<(i64, Vec<Rational>)> = None;
            let mut idx = vec![0i64; k - 1];
            loop {
                let mut y: Vec<Rational> = idx.iter().map(|&i| Rational::from((i, grid))).collect();
                let partial: Rational = y.iter().fold(Rational::new(), |acc, v| acc + v);
                let last = Rational::from(&target - &partial);
                let last = Rational::from(&last - last.clone().floor());
                y.push(last);
                let v = varpi(alphas, &x, &y);
                if best.as_ref().is_none_or(|(b, _)| v < *b) {
                    best = Some((v, y));
                }
                // odometer over the free coordinates
                let mut pos = 0;
                loop {
                    if pos == idx.len() {
                        break;
                    }
                    idx[pos] += 1;
                    if idx[pos] < grid {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
                if pos == idx.len() {
                    break;
                }
            }
            let (v, y) = best.expect("nonempty lattice");
            let value = v.max(0) as u32;
            (
                Rational::from((q, l)),
                Rational::from((q + 1, l)),
                VarpiCertificate { x, y, value },
            )
        })
        .collect();
    let profile = StepFunction::from_cells(cells.iter().map(|(a, b, c)| (a.clone(), b.clone(), c.value)).collect::<Vec<_>>());
    let certificates = cells.into_iter().map(|(_, _, c)| c).collect();
    Ok(VarpiProfile { profile, certificates })
}

/// `∫_0^1 ϖ(x) dψ(x) = Σ value · (ψ(hi) - ψ(lo))`.
pub fn valuation_asymptotic(profile: &StepFunction, digits: Digits) -> Result<BigFloat, ValuationError> {
    let work = digits.plus(10);
    let mut total = BigFloat::zero(work);
    for s in profile.steps() {
        if s.lo == 0 {
            return Err(ValuationError::TouchesZero);
        }
        let hi = digamma(&s.hi, work)?.value;
        let lo = digamma(&s.lo, work)?.value;
        let diff = &hi - &lo;
        total = &total + &(&diff * &BigFloat::from_integer(&Integer::from(s.value), work));
    }
    Ok(BigFloat::new(total.into_value(), digits))
}

/// `(log D_n)/n`.
pub fn lcm_rate(n: u64) -> f64 {
    lcm_upto(n).to_f64().ln() / n as f64
}
