//! Real root isolation by Sturm sequences with Newton polishing, and
//! simultaneous complex root finding (Aberth-Ehrlich) with residual checks.

use rug::{Float, Rational};

use super::NumericError;
use crate::exact::{ComplexFloat, GaussianRational, Poly, Ring};

fn sign(r: &Rational) -> i32 {
    r.cmp0() as i32
}

fn variations(chain: &[Poly<Rational>], x: &Rational) -> usize {
    let mut last = 0;
    let mut count = 0;
    for p in chain {
        let s = sign(&p.eval(x));
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Isolating intervals `(lo, hi]` each holding exactly one root.
fn isolate(
    chain: &[Poly<Rational>],
    lo: Rational,
    hi: Rational,
    v_lo: usize,
    v_hi: usize,
    out: &mut Vec<(Rational, Rational)>,
) {
    let count = v_lo - v_hi;
    if count == 0 {
        return;
    }
    if count == 1 {
        out.push((lo, hi));
        return;
    }
    let mid = Rational::from(&lo + &hi) / 2u32;
    let v_mid = variations(chain, &mid);
    isolate(chain, lo, mid.clone(), v_lo, v_mid, out);
    isolate(chain, mid, hi, v_mid, v_hi, out);
}

/// Distinct real roots of `p` in the open interval `(lo, hi)`, ascending,
/// refined to `bits` of precision.
pub fn real_roots_in(
    p: &Poly<Rational>,
    lo: &Rational,
    hi: &Rational,
    bits: u32,
) -> Result<Vec<Float>, NumericError> {
    if p.degree().unwrap_or(0) == 0 {
        if p.is_zero() {
            return Err(NumericError::ConstantPolynomial);
        }
        return Ok(Vec::new());
    }
    let sq = p.squarefree();
    let chain = sq.sturm_chain();
    let v_lo = variations(&chain, lo);
    let v_hi = variations(&chain, hi);
    let mut boxes = Vec::new();
    isolate(&chain, lo.clone(), hi.clone(), v_lo, v_hi, &mut boxes);
    let mut roots = Vec::new();
    for (a, b) in boxes {
        if b == *hi && sq.eval(&b) == 0 {
            continue;
        }
        roots.push(refine_root(&sq, a, b, bits)?);
    }
    Ok(roots)
}

/// Root of a squarefree `p` in `(a, b]` with a sign change (or `p(b) = 0`).
fn refine_root(p: &Poly<Rational>, mut a: Rational, mut b: Rational, bits: u32) -> Result<Float, NumericError> {
    if p.eval(&b) == 0 {
        return Ok(Float::with_val(bits, &b));
    }
    let sb = sign(&p.eval(&b));
    // exact bisection to a 2^-60 relative bracket
    let mut width = Rational::from(&b - &a);
    let target = Rational::from((1, 1u64 << 60));
    for _ in 0..400 {
        if width < target {
            break;
        }
        let mid = Rational::from(&a + &b) / 2u32;
        let sm = sign(&p.eval(&mid));
        if sm == 0 {
            return Ok(Float::with_val(bits, &mid));
        }
        if sm == sb {
            b = mid;
        } else {
            a = mid;
        }
        width = Rational::from(&b - &a);
    }
    let dp = p.derivative();
    let mut lo = Float::with_val(bits, &a);
    let mut hi = Float::with_val(bits, &b);
    let mut x = Float::with_val(bits, &lo + &hi) / 2u32;
    let tol = Float::with_val(bits, 1) >> (bits as i32 - 8);
    for _ in 0..200 {
        let fx = p.eval_float(&x);
        if fx.is_zero() {
            return Ok(x);
        }
        if (fx.cmp0() == Some(std::cmp::Ordering::Greater)) == (sb > 0) {
            hi = x.clone();
        } else {
            lo = x.clone();
        }
        let dfx = dp.eval_float(&x);
        let mut next = Float::with_val(bits, &x - Float::with_val(bits, &fx / &dfx));
        if !next.is_finite() || next <= lo || next >= hi {
            next = Float::with_val(bits, &lo + &hi) / 2u32;
        }
        let step = Float::with_val(bits, &next - &x).abs();
        x = next;
        let scale = Float::with_val(bits, x.abs_ref()).max(&Float::with_val(bits, 1));
        if step <= Float::with_val(bits, &tol * &scale) {
            return Ok(x);
        }
    }
    Err(NumericError::NoConvergence(200))
}

/// A complex root with the size of `|p(root)|` after polishing.
#[derive(Debug, Clone)]
pub struct ComplexRoot {
    pub root: ComplexFloat,
    pub residual: Float,
}

/// All complex roots of `p` (counted once each; repeated roots rejected).
pub fn complex_roots(p: &Poly<GaussianRational>, bits: u32) -> Result<Vec<ComplexRoot>, NumericError> {
    let n = match p.degree() {
        None | Some(0) => return Err(NumericError::ConstantPolynomial),
        Some(n) => n,
    };
    let sq = p.squarefree();
    if sq.degree() != Some(n) {
        return Err(NumericError::RepeatedRoot(format!("{p:?}")));
    }
    let work = bits + 64;
    let monic: Vec<ComplexFloat> = p.monic().coeffs().iter().map(|c| c.to_complex(work)).collect();
    let eval = |z: &ComplexFloat| -> (ComplexFloat, ComplexFloat) {
        let mut f = ComplexFloat::zero(work);
        let mut df = ComplexFloat::zero(work);
        for c in monic.iter().rev() {
            df = &(&df * z) + &f;
            f = &(&f * z) + c;
        }
        (f, df)
    };
    // Cauchy bound for the initial circle
    let mut radius = Float::with_val(work, 0);
    for c in &monic[..n] {
        let a = c.abs();
        if a > radius {
            radius = a;
        }
    }
    radius += 1u32;
    let two_pi = Float::with_val(work, rug::float::Constant::Pi) * 2u32;
    let mut z: Vec<ComplexFloat> = (0..n)
        .map(|k| {
            let theta = Float::with_val(work, &two_pi * k as u32) / n as u32 + 0.4f64;
            let (s, c) = theta.sin_cos(Float::new(work));
            ComplexFloat::new(Float::with_val(work, &radius * &c), Float::with_val(work, &radius * &s))
        })
        .collect();
    let tol = Float::with_val(work, 1) >> (bits as i32);
    let max_iter = 2000;
    let mut converged = false;
    for _ in 0..max_iter {
        let mut biggest = Float::with_val(work, 0);
        for k in 0..n {
            let (f, df) = eval(&z[k]);
            if f.abs().is_zero() {
                continue;
            }
            let w = &f / &df;
            let mut s = ComplexFloat::zero(work);
            for j in 0..n {
                if j != k {
                    s = &s + &(&z[k] - &z[j]).recip();
                }
            }
            let one = ComplexFloat::real(Float::with_val(work, 1));
            let denom = &one - &(&w * &s);
            let step = &w / &denom;
            let size = step.abs() / Float::with_val(work, z[k].abs().max(&Float::with_val(work, 1)));
            if size > biggest {
                biggest = size;
            }
            z[k] = &z[k] - &step;
        }
        if biggest < tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(NumericError::NoConvergence(max_iter));
    }
    let roots: Vec<ComplexRoot> = z
        .into_iter()
        .map(|r| {
            let r = r.with_prec(bits);
            let residual = p.eval_complex(&r.with_prec(work)).abs();
            ComplexRoot { root: r, residual: Float::with_val(bits, residual) }
        })
        .collect();
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> Poly<Rational> {
        Poly::new(v.iter().map(|&k| Rational::from(k)).collect())
    }

    #[test]
    fn sqrt_two_isolated() {
        let roots = real_roots_in(&q(&[-2, 0, 1]), &Rational::from(0), &Rational::from(3), 300).unwrap();
        assert_eq!(roots.len(), 1);
        let s2 = Float::with_val(300, 2).sqrt();
        assert!(Float::with_val(300, &roots[0] - &s2).abs() < Float::with_val(300, 1) >> 280);
    }

    #[test]
    fn roots_at_rational_points_and_boundaries() {
        // (x-1)(x-2)(x-3): interval (1,3) holds only 2
        let p = q(&[-1, 1]).mul(&q(&[-2, 1])).mul(&q(&[-3, 1]));
        let roots = real_roots_in(&p, &Rational::from(1), &Rational::from(3), 100).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0], 2);
    }

    #[test]
    fn clustered_roots_separate() {
        // (x - 1/1000)(x - 2/1000)(x + 5)
        let p = Poly::new(vec![Rational::from((-1, 1000)), Rational::from(1)])
            .mul(&Poly::new(vec![Rational::from((-2, 1000)), Rational::from(1)]))
            .mul(&q(&[5, 1]));
        let roots = real_roots_in(&p, &Rational::from(-10), &Rational::from(10), 200).unwrap();
        assert_eq!(roots.len(), 3);
        assert!(roots[0] < -4.9);
        assert!((roots[2].to_f64() - 0.002).abs() < 1e-15);
    }

    #[test]
    fn cubic_complex_roots_with_residuals() {
        // z^3 - 1
        let p = Poly::new(vec![
            GaussianRational::from_ints(-1, 0),
            GaussianRational::zero(),
            GaussianRational::zero(),
            GaussianRational::one(),
        ]);
        let roots = complex_roots(&p, 200).unwrap();
        assert_eq!(roots.len(), 3);
        for r in &roots {
            assert!(r.residual < Float::with_val(200, 1) >> 190);
            assert!((r.root.abs() - 1u32).abs() < 1e-50);
        }
    }

    #[test]
    fn repeated_roots_flagged() {
        let p = q(&[1, -2, 1]).to_gaussian();
        assert!(matches!(complex_roots(&p, 100), Err(NumericError::RepeatedRoot(_))));
    }
}
