use irrmeasure::exact::ComplexFloat;
use irrmeasure::hyper::{pochhammer, ramanujan_pi, Gauss2F1, RamanujanSeries};
use irrmeasure::Digits;
use proptest::prelude::*;
use rug::{Float, Rational};

fn rational() -> impl Strategy<Value = Rational> {
    (-30i64..30, 1i64..12).prop_map(|(p, q)| Rational::from((p, q)))
}

proptest! {
    #[test]
    fn pochhammer_steps_by_one(a in rational(), n in 0u32..15) {
        let next = pochhammer(&a, n + 1);
        prop_assert_eq!(next, pochhammer(&a, n) * (a.clone() + n));
    }

    #[test]
    fn coefficients_symmetric_in_numerator_parameters(a in rational(), b in rational(), c in (1i64..20, 1i64..5), k in 0u32..12) {
        let c = Rational::from(c);
        let f = Gauss2F1::new(a.clone(), b.clone(), c.clone());
        let g = Gauss2F1::new(b, a, c);
        prop_assert_eq!(f.coefficient(k), g.coefficient(k));
    }

    #[test]
    fn log_series_closed_form(p in 1i64..19, sign in prop::bool::ANY) {
        // 2F1(1, 1; 2; z) = -log(1 - z)/z
        let d = Digits(40);
        let bits = d.plus(10).bits();
        let z = Float::with_val(bits, if sign { p } else { -p }) / 20u32;
        let got = Gauss2F1::new(1, 1, 2).eval(&ComplexFloat::real(z.clone()), d).unwrap();
        let want = -(Float::with_val(bits, 1) - &z).ln() / &z;
        let err = (got.re - &want).abs() / want.abs();
        prop_assert!(err < 1e-38, "{}", err.to_f64());
        prop_assert!(got.im.abs() < 1e-38);
    }
}

#[test]
fn ramanujan_digits_grow_with_terms() {
    let d = Digits(200);
    for (id, series, per_term) in [(39, RamanujanSeries::FourOverPi, 5.0), (44, RamanujanSeries::OneOverTwoPiRootTwo, 7.9)] {
        let limit = series.limit(d);
        let mut last = 0.0;
        for terms in 1..=8 {
            let digits = ramanujan_pi(id, terms, d).unwrap().agreeing_digits(&limit);
            assert!(digits > last, "series {id}, {terms} terms");
            assert!(digits >= per_term * terms as f64 - 2.0, "series {id}, {terms} terms: {digits}");
            last = digits;
        }
    }
}
