use irrmeasure::exact::Poly;
use irrmeasure::rhin::{
    decay_trend, gn_inclusion, gn_linear_form, hn_integral_value, hn_simultaneous_forms, hn_validate, rhin_bound,
    search_gstar, IntPolynomial, RhinFamily, SegmentUnion,
};
use irrmeasure::Digits;
use proptest::prelude::*;
use rug::{Integer, Rational};

fn ip(c: &[i64]) -> IntPolynomial {
    Poly::new(c.iter().map(|&v| Integer::from(v)).collect())
}

fn lcm_to(n: u32) -> Integer {
    (1..=n).fold(Integer::from(1), |acc, k| acc.lcm(&Integer::from(k)))
}

proptest! {
    #[test]
    fn unit_family_forms_are_linear(a in prop::collection::vec(-20i64..20, 1..6), b in prop::collection::vec(-20i64..20, 1..6),
                                    s in -5i64..5) {
        let n = 6;
        let (pa, pb) = (ip(&a), ip(&b));
        let combo = pa.scale(&Integer::from(s)).add(&pb);
        let fa = gn_linear_form(&pa, n).unwrap();
        let fb = gn_linear_form(&pb, n).unwrap();
        let fc = gn_linear_form(&combo, n).unwrap();
        prop_assert_eq!(fc.log_coeff, Rational::from(&fa.log_coeff * s) + &fb.log_coeff);
        prop_assert_eq!(fc.const_coeff, Rational::from(&fa.const_coeff * s) + &fb.const_coeff);
        prop_assert!(gn_inclusion(&combo, n).is_ok());
    }
}

/// Best `max |G|^{1/deg}` over the box by exhaustive enumeration on a fine grid.
fn brute_force_optimum(degree: usize, bound: i64) -> f64 {
    let right = 3.0 - 2.0 * 2f64.sqrt();
    let grid: Vec<f64> = (0..=20_000).map(|k| right * k as f64 / 20_000.0).collect();
    let width = (2 * bound + 1) as usize;
    let mut best = f64::INFINITY;
    for deg in 1..=degree {
        for code in 0..width.pow(deg as u32 + 1) {
            let mut c = Vec::with_capacity(deg + 1);
            let mut k = code;
            for _ in 0..=deg {
                c.push((k % width) as i64 - bound);
                k /= width;
            }
            if c[deg] <= 0 {
                continue;
            }
            let sup = grid
                .iter()
                .map(|&y| c.iter().rev().fold(0.0, |acc, &v| acc * y + v as f64).abs())
                .fold(0.0, f64::max);
            best = best.min(sup.powf(1.0 / deg as f64));
        }
    }
    best
}

#[test]
fn search_matches_exhaustive_enumeration() {
    let seg = SegmentUnion::log2_saddle_segment();
    for (degree, bound) in [(1, 3), (2, 3), (3, 2), (3, 3)] {
        let got = search_gstar(degree, bound, &seg, Digits(30)).unwrap();
        let want = brute_force_optimum(degree as usize, bound as i64);
        assert!((got.sup_norm_root.to_f64() - want).abs() < 1e-7, "degree {degree}: {} vs {want}", got.sup_norm_root);
    }
}

#[test]
fn log3_numerators_have_integral_forms() {
    let fam = RhinFamily::log3();
    for n in 1..=12 {
        let h = fam.polynomial(n).unwrap();
        let form = hn_validate(&h, n, &fam.delta).unwrap();
        assert_eq!(form.reconstruct(), h);
        let forms = hn_simultaneous_forms(&form, &fam.points).unwrap();
        let dn = Rational::from(lcm_to(n));
        for f in &forms.forms {
            assert!(Rational::from(&f.log_coeff * &dn).denom() == &1);
            assert!(Rational::from(&f.const_coeff * &dn).denom() == &1);
            assert_eq!(f.log_coeff, forms.log_coeff);
        }
    }
}

#[test]
fn forms_match_quadrature() {
    let d = Digits(40);
    let fam = RhinFamily::log3();
    for n in 1..=8 {
        let h = fam.polynomial(n).unwrap();
        let forms = hn_simultaneous_forms(&hn_validate(&h, n, &fam.delta).unwrap(), &fam.points).unwrap();
        for f in &forms.forms {
            let quad = hn_integral_value(&h, n, &f.target, d).unwrap();
            let digits = quad.agreeing_digits(&f.value(d));
            assert!(digits >= 32.0, "n = {n} at {}: {digits}", f.target);
        }
    }
}

#[test]
fn finite_decay_rises_toward_the_limit() {
    let fam = RhinFamily::log3();
    let limit = rhin_bound(&fam, Digits(30)).unwrap().report.c0.to_f64() + 1.0;
    let trend = decay_trend(&fam, 0, &[10, 20, 30, 40, 50, 60]).unwrap();
    for w in trend.windows(2) {
        assert!(w[1].1 > w[0].1, "{:?}", trend);
    }
    assert!(trend.iter().all(|&(_, v)| v < limit + 0.1));
}

#[test]
fn doubled_rates_match_doubled_index() {
    let fam = RhinFamily::log3();
    let twice = fam.scaled(2);
    for n in 1..=6 {
        assert_eq!(fam.polynomial(2 * n).unwrap(), twice.polynomial(n).unwrap());
    }
}

#[test]
fn bound_values() {
    let b = rhin_bound(&RhinFamily::log3(), Digits(30)).unwrap();
    assert!((b.report.mu.to_f64() - 8.616).abs() <= 0.05);
    let simple = rhin_bound(&RhinFamily::log2_simple(), Digits(30)).unwrap();
    let l = (3.0 + 2.0 * 2f64.sqrt()).ln();
    let closed = 1.0 + (l + 1.0) / (l - 1.0);
    assert!((simple.report.mu.to_f64() - closed).abs() < 1e-8);
    assert!((simple.report.mu.to_f64() - 4.62210083).abs() < 1e-8);
}
