//! Derivative-free maximisation on an interval: grid scan, then golden
//! section around the best grid cell. Used as an independent cross-check.

use rug::Float;

/// Maximum of `f` on `[lo, hi]` (interior points only), to roughly the
/// working precision of `bits`.
pub fn golden_max(f: impl Fn(&Float) -> Float, lo: f64, hi: f64, grid: usize, bits: u32) -> (Float, Float) {
    let lo = Float::with_val(bits, lo);
    let hi = Float::with_val(bits, hi);
    let step = Float::with_val(bits, &hi - &lo) / grid as u32;
    let mut best_i = 1;
    let mut best_v: Option<Float> = None;
    for i in 1..grid {
        let x = Float::with_val(bits, &lo + Float::with_val(bits, &step * i as u32));
        let v = f(&x);
        if v.is_finite() && best_v.as_ref().is_none_or(|b| v > *b) {
            best_v = Some(v);
            best_i = i;
        }
    }
    let mut a = Float::with_val(bits, &lo + Float::with_val(bits, &step * (best_i as u32 - 1)));
    let mut b = Float::with_val(bits, &lo + Float::with_val(bits, &step * (best_i as u32 + 1)));
    let inv_phi = (Float::with_val(bits, 5).sqrt() - 1u32) / 2u32;
    let mut c = Float::with_val(bits, &b - Float::with_val(bits, &inv_phi * Float::with_val(bits, &b - &a)));
    let mut d = Float::with_val(bits, &a + Float::with_val(bits, &inv_phi * Float::with_val(bits, &b - &a)));
    let mut fc = f(&c);
    let mut fd = f(&d);
    let tol = Float::with_val(bits, 1) >> (bits as i32 / 2 + 4);
    while Float::with_val(bits, &b - &a) > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = Float::with_val(bits, &b - Float::with_val(bits, &inv_phi * Float::with_val(bits, &b - &a)));
            fc = f(&c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = Float::with_val(bits, &a + Float::with_val(bits, &inv_phi * Float::with_val(bits, &b - &a)));
            fd = f(&d);
        }
    }
    let x = Float::with_val(bits, &a + &b) / 2u32;
    let v = f(&x);
    (x, v)
}
