use irrmeasure::exact::factorial;
use irrmeasure::gauss_forms::{
    inclusion_check, integral_value, linear_form, partial_fractions, symmetry_check, HGParams,
};
use irrmeasure::hyper::Gauss2F1;
use irrmeasure::{BigFloat, ComplexFloat, Digits, Rational};
use proptest::prelude::*;

const POINTS: [(i64, i64); 4] = [(2, 1), (3, 2), (4, 3), (2, 3)];

fn params(max_n1: u32) -> impl Strategy<Value = HGParams> {
    (0..=max_n1, 0..=max_n1, 0..=max_n1, 0..POINTS.len()).prop_filter_map("m <= n1", |(n1, m, n0, i)| {
        let (p, q) = POINTS[i];
        HGParams::new(m, n0, n1, Rational::from((p, q))).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn partial_fractions_reconstruct(p in params(14)) {
        prop_assert!(partial_fractions(&p).reconstructs(&p));
    }

    #[test]
    fn scaled_forms_are_integral(p in params(40)) {
        prop_assert!(inclusion_check(&p, false).is_ok());
        prop_assert!(inclusion_check(&p, true).is_ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn factorial_normalised_symmetry(p in params(40)) {
        prop_assert!(symmetry_check(&p));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn exact_form_matches_quadrature(p in params(20)) {
        let d = Digits(30);
        let exact = linear_form(&p).value(d.plus(10));
        let quad = integral_value(&p, d.plus(10)).unwrap();
        let diff = exact.distance(&quad).to_f64();
        prop_assert!(diff < 1e-20, "{:?}: {}", p, diff);
    }

    #[test]
    fn euler_integral_is_hypergeometric(p in params(12)) {
        let d = Digits(30);
        let quad = integral_value(&p, d.plus(10)).unwrap();
        let f = Gauss2F1::new(p.m() + 1, p.n0() + 1, p.n0() + p.n1() + 2);
        let z = Rational::from(1 - p.a().clone());
        let bits = d.plus(10).bits();
        let series = f.eval(&ComplexFloat::from_gaussian(&irrmeasure::GaussianRational::real(z), bits), d.plus(10)).unwrap();
        let gamma = Rational::from((factorial(p.n0()) * factorial(p.n1()), factorial(p.n0() + p.n1() + 1)));
        let value = BigFloat::new(series.re * &gamma, d);
        prop_assert!(value.agreeing_digits(&quad) > 22.0, "{:?}", p);
    }
}

#[test]
fn rukhadze_log_coefficient_alternates() {
    let signs: Vec<i32> = (1..=10)
        .map(|n| linear_form(&HGParams::at_two(7 * n, 6 * n, 8 * n).unwrap()).log_coeff.cmp0() as i32)
        .collect();
    for (n, s) in (1..=10).zip(&signs) {
        assert_eq!(*s, if n % 2 == 0 { 1 } else { -1 }, "n = {n}: {signs:?}");
    }
}
