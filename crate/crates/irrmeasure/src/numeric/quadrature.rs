//! Double-exponential (tanh-sinh) quadrature on segments, real and complex.

use rug::float::Constant;
use rug::Float;

use super::NumericError;
use crate::exact::{ComplexFloat, Digits};

/// Hard cap on integrand evaluations per segment.
pub const MAX_NODES: usize = 1 << 20;

/// Values that can be accumulated by the quadrature driver.
pub trait QuadValue: Clone {
    fn zero(bits: u32) -> Self;
    fn add_weighted(&mut self, w: &Float, v: &Self);
    fn scaled(&self, k: &Float) -> Self;
    fn magnitude(&self) -> Float;
    fn distance(&self, o: &Self) -> Float;
    fn finite(&self) -> bool;
}

impl QuadValue for Float {
    fn zero(bits: u32) -> Self {
        Float::new(bits)
    }
    fn add_weighted(&mut self, w: &Float, v: &Self) {
        *self += Float::with_val(self.prec(), w * v);
    }
    fn scaled(&self, k: &Float) -> Self {
        Float::with_val(self.prec(), self * k)
    }
    fn magnitude(&self) -> Float {
        self.clone().abs()
    }
    fn distance(&self, o: &Self) -> Float {
        Float::with_val(self.prec(), self - o).abs()
    }
    fn finite(&self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for ComplexFloat {
    fn zero(bits: u32) -> Self {
        ComplexFloat::zero(bits)
    }
    fn add_weighted(&mut self, w: &Float, v: &Self) {
        let p = self.prec();
        self.re += Float::with_val(p, w * &v.re);
        self.im += Float::with_val(p, w * &v.im);
    }
    fn scaled(&self, k: &Float) -> Self {
        self.scale(k)
    }
    fn magnitude(&self) -> Float {
        self.abs()
    }
    fn distance(&self, o: &Self) -> Float {
        (self - o).abs()
    }
    fn finite(&self) -> bool {
        self.is_finite()
    }
}

/// Integral value with its convergence record.
#[derive(Debug, Clone)]
pub struct Quadrature<V> {
    pub value: V,
    /// `|S_k - S_{k-1}|` at the accepted level.
    pub error_estimate: Float,
    pub nodes: usize,
}

/// One abscissa of the `[-1, 1]` rule: `x`, `1 - x`, `1 + x`, weight.
struct Node {
    one_minus: Float,
    one_plus: Float,
    weight: Float,
}

fn node(t: &Float, bits: u32, half_pi: &Float) -> Node {
    let u = Float::with_val(bits, t.sinh_ref()) * half_pi;
    let e2u = Float::with_val(bits, Float::with_val(bits, &u * 2u32).exp_ref());
    // 1 - tanh u = 2/(e^{2u}+1), 1 + tanh u = 2 e^{2u}/(e^{2u}+1)
    let denom = Float::with_val(bits, &e2u + 1u32);
    let one_minus = Float::with_val(bits, 2u32 / &denom);
    let one_plus = Float::with_val(bits, &e2u * 2u32) / &denom;
    let cosh_u = Float::with_val(bits, u.cosh_ref());
    let weight = Float::with_val(bits, t.cosh_ref()) * half_pi
        / Float::with_val(bits, cosh_u.square_ref());
    Node { one_minus, one_plus, weight }
}

/// `∫_{-1}^{1} g` where `g` receives `(1 - x, 1 + x)`, to `digits`
/// relative to the L1 mass of the integrand.
fn tanh_sinh<V: QuadValue>(
    g: &mut dyn FnMut(&Float, &Float) -> V,
    digits: Digits,
    max_nodes: usize,
) -> Result<Quadrature<V>, NumericError> {
    let bits = digits.plus(10).bits();
    let half_pi = Float::with_val(bits, Constant::Pi) / 2u32;
    let eps = digits.epsilon();
    let tiny = Digits(2 * digits.0 + 30).epsilon();
    let t_max = ((2.0 * (2.0 * digits.0 as f64 + 30.0) * std::f64::consts::LN_10)
        / std::f64::consts::PI)
        .ln()
        .max(1.0);

    let mut nodes = 0usize;
    let mut sum = V::zero(bits);
    let mut mass = Float::new(bits);
    let mut add_node = |t: Float, sum: &mut V, mass: &mut Float, nodes: &mut usize| -> Result<bool, NumericError> {
        let nd = node(&t, bits, &half_pi);
        if nd.weight < tiny {
            return Ok(false);
        }
        let v = g(&nd.one_minus, &nd.one_plus);
        if !v.finite() {
            return Err(NumericError::NonFinite);
        }
        *mass += Float::with_val(bits, &nd.weight * &v.magnitude());
        sum.add_weighted(&nd.weight, &v);
        *nodes += 1;
        Ok(true)
    };

    // level 0: h = 1, all integer t
    let h0 = Float::with_val(bits, 1);
    add_node(Float::new(bits), &mut sum, &mut mass, &mut nodes)?;
    let mut k = 1u32;
    loop {
        let t = Float::with_val(bits, k);
        if t > t_max {
            break;
        }
        let a = add_node(t.clone(), &mut sum, &mut mass, &mut nodes)?;
        let b = add_node(-t, &mut sum, &mut mass, &mut nodes)?;
        if !a && !b {
            break;
        }
        k += 1;
    }
    let mut h = h0;
    let mut estimate = sum.scaled(&h);
    let mut level = 0u32;
    loop {
        level += 1;
        h /= 2u32;
        let mut j = 1u64;
        loop {
            let t = Float::with_val(bits, &h * j);
            if t > t_max {
                break;
            }
            let a = add_node(t.clone(), &mut sum, &mut mass, &mut nodes)?;
            let b = add_node(-t, &mut sum, &mut mass, &mut nodes)?;
            if !a && !b {
                break;
            }
            j += 2;
        }
        let next = sum.scaled(&h);
        let err = next.distance(&estimate);
        estimate = next;
        let scale = Float::with_val(bits, &mass * &h);
        let tol = Float::with_val(bits, &eps * &scale);
        if level >= 3 && err <= tol {
            return Ok(Quadrature { value: estimate, error_estimate: err, nodes });
        }
        if nodes >= max_nodes {
            return Err(NumericError::PrecisionUnreachable { digits: digits.0, nodes });
        }
    }
}

/// `∫_a^b f(x) dx` for real endpoints.
pub fn integrate_real(
    f: impl FnMut(&Float) -> Float,
    a: &Float,
    b: &Float,
    digits: Digits,
) -> Result<Quadrature<Float>, NumericError> {
    integrate_real_capped(f, a, b, digits, MAX_NODES)
}

/// As [`integrate_real`] with an explicit node budget.
pub fn integrate_real_capped(
    mut f: impl FnMut(&Float) -> Float,
    a: &Float,
    b: &Float,
    digits: Digits,
    max_nodes: usize,
) -> Result<Quadrature<Float>, NumericError> {
    let bits = digits.plus(10).bits();
    let half = Float::with_val(bits, b - a) / 2u32;
    let mut g = |om: &Float, op: &Float| -> Float {
        // evaluate from the nearer endpoint to keep the offset exact
        let x = if op < om {
            Float::with_val(bits, a + Float::with_val(bits, &half * op))
        } else {
            Float::with_val(bits, b - Float::with_val(bits, &half * om))
        };
        f(&x)
    };
    let mut q = tanh_sinh(&mut g, digits, max_nodes)?;
    q.value *= &half;
    q.error_estimate *= half.abs();
    Ok(q)
}

/// `∫ f(z) dz` along the polygon through `vertices`.
pub fn integrate_path(
    mut f: impl FnMut(&ComplexFloat) -> ComplexFloat,
    vertices: &[ComplexFloat],
    digits: Digits,
) -> Result<Quadrature<ComplexFloat>, NumericError> {
    let bits = digits.plus(10).bits();
    let mut total = ComplexFloat::zero(bits);
    let mut err = Float::new(bits);
    let mut nodes = 0;
    for w in vertices.windows(2) {
        let z0 = w[0].with_prec(bits);
        let z1 = w[1].with_prec(bits);
        let half = (&z1 - &z0).scale(&Float::with_val(bits, 0.5));
        let mut g = |om: &Float, op: &Float| -> ComplexFloat {
            let z = if op < om { &z0 + &half.scale(op) } else { &z1 - &half.scale(om) };
            f(&z)
        };
        let q = tanh_sinh(&mut g, digits, MAX_NODES)?;
        total = &total + &(&q.value * &half);
        err += q.error_estimate * half.abs();
        nodes += q.nodes;
    }
    Ok(Quadrature { value: total, error_estimate: err, nodes })
}
