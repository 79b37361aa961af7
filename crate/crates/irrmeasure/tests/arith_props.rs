use irrmeasure::arith::{
    minimize_varpi, phi_denominator, phi_step_profile, phi_tilde, valuation_asymptotic, varpi,
    PrimeThreshold,
};
use irrmeasure::{Digits, Rational};
use proptest::prelude::*;
use rug::float::Constant;
use rug::Float;

fn floor(x: &Rational) -> i64 {
    x.clone().floor().numer().to_i64().unwrap()
}

proptest! {
    #[test]
    fn tilde_divides_full_denominator(n1 in 0u32..120, m_frac in 0.0f64..=1.0, n0 in 0u32..120) {
        let m = (m_frac * n1 as f64) as u32;
        let full = phi_denominator(m, n0, n1);
        prop_assert!(full.is_divisible(&phi_tilde(m, n0, n1, PrimeThreshold::default())));
    }

    #[test]
    fn step_profile_matches_brackets(n1 in 1u32..10, m_frac in 0.0f64..=1.0, n0 in 1u32..10, seed in 0u64..1000) {
        let m = ((m_frac * n1 as f64) as u32).max(1);
        use rand::{Rng, SeedableRng};
        let profile = phi_step_profile(m, n0, n1);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..200 {
            let den = rng.gen_range(1..400i64);
            let x = Rational::from((rng.gen_range(0..den), den));
            let b = |k: u32| floor(&Rational::from(&x * k));
            let direct = (b(n0) + b(n1) - b(m) - b(n0 + n1 - m)).max(0);
            prop_assert_eq!(profile.eval(&x) as i64, direct, "x = {}", x);
        }
    }
}

#[test]
fn step_profile_at_ten_thousand_points() {
    let profile = phi_step_profile(7, 6, 8);
    for k in 0..10_000i64 {
        let x = Rational::from((k * 7919 % 10_007, 10_007));
        let b = |c: i64| floor(&Rational::from(&x * c));
        assert_eq!(profile.eval(&x) as i64, (b(6) + b(8) - b(7) - b(7)).max(0), "x = {x}");
    }
}

fn rationals(max_den: i64) -> Vec<Rational> {
    let mut v: Vec<Rational> = (1..=max_den).flat_map(|q| (0..q).map(move |p| Rational::from((p, q)))).collect();
    v.sort();
    v.dedup();
    v
}

#[test]
fn varpi_minimum_is_a_certified_lower_bound() {
    let alphas = [2u32, 2, 2];
    let res = minimize_varpi(&alphas, 3).unwrap();
    for c in &res.certificates {
        assert_eq!(varpi(&alphas, &c.x, &c.y), c.value as i64);
        let sum: Rational = c.y.iter().cloned().sum();
        let gap = Rational::from(&sum - Rational::from(&c.x * 3u32));
        assert!(gap.denom() == &1, "certificate violates the congruence");
        assert_eq!(res.profile.eval(&c.x), c.value);
    }
    let ys = rationals(12);
    for x in rationals(20) {
        let floor_min = res.profile.eval(&x) as i64;
        for y0 in &ys {
            for y1 in &ys {
                let y2 = {
                    let t = Rational::from(&x * 3u32) - y0 - y1;
                    let f = t.clone().floor();
                    t - f
                };
                let v = varpi(&alphas, &x, &[y0.clone(), y1.clone(), y2]);
                assert!(v >= floor_min, "x = {x}, y0 = {y0}, y1 = {y1}");
            }
        }
    }
}

#[test]
fn digamma_integral_closed_form() {
    let d = Digits(40);
    let v = valuation_asymptotic(&phi_step_profile(7, 6, 8), d).unwrap();
    let bits = 200;
    let pi = Float::with_val(bits, Constant::Pi);
    let r2 = Float::with_val(bits, 2).sqrt();
    let r3 = Float::with_val(bits, 3).sqrt();
    let log_part = Float::with_val(bits, Rational::from((32768 * 27, 823543))).ln();
    let closed = log_part + pi * (Float::with_val(bits, 3) + r2 * 6u32 - r3 * 4u32) / 6u32;
    let diff = Float::with_val(bits, v.value() - &closed).abs();
    assert!(diff < 1e-35, "{}", diff.to_f64());
}
