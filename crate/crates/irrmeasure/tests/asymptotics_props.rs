use irrmeasure::asymptotics::{
    assemble_bound, binomial_growth_max, gauss_family_bound, golden_section_max, log_max_on_interval, saddle_points,
    vieta_defect, BoundReport, Contribution, EntropyPattern, ExponentProduct, Linear, TermKind,
};
use irrmeasure::exact::Poly;
use irrmeasure::hata::HataConfig;
use irrmeasure::numeric::optimize::golden_max;
use irrmeasure::rhin::RhinFamily;
use irrmeasure::{BigFloat, Digits, Rational};
use proptest::prelude::*;
use rug::float::Constant;
use rug::Float;

const BITS: u32 = 256;

fn r(p: i64) -> Rational {
    Rational::from(p)
}

fn sqrt(k: u32) -> Float {
    Float::with_val(BITS, k).sqrt()
}

/// `log(2^5 3^3 (7734633 sqrt 393 + sign 153333125) / 7^7)`.
fn closed_extremum(sign: i32) -> Float {
    let inner = sqrt(393) * 7734633u32 + Float::with_val(BITS, 153333125i64 * sign as i64);
    (inner * 864u32 / 823543u32).ln()
}

fn closed_saving() -> Float {
    let pi = Float::with_val(BITS, Constant::Pi);
    let log_part = Float::with_val(BITS, Rational::from((32768 * 27, 823543))).ln();
    log_part + pi * (Float::with_val(BITS, 3) + sqrt(2) * 6u32 - sqrt(3) * 4u32) / 6u32
}

fn term(report: &BoundReport, kind: TermKind) -> &Contribution {
    report.terms.iter().find(|t| t.kind == kind).expect("ledger term")
}

fn close(a: &Float, b: &Float, tol: f64) -> bool {
    Float::with_val(BITS, a - b).abs() < tol
}

fn rukhadze_integrand() -> ExponentProduct {
    ExponentProduct::new()
        .real_factor(Poly::new(vec![r(0), r(1)]), r(6))
        .real_factor(Poly::new(vec![r(1), r(-1)]), r(8))
        .real_factor(Poly::new(vec![r(1), r(1)]), r(-7))
}

fn rukhadze_pattern() -> EntropyPattern {
    // C(y, 7) C(8, y - 6) per n
    EntropyPattern::from_binomials(&[(Linear::new(1, 0), Linear::new(0, 7)), (Linear::new(0, 8), Linear::new(1, -6))])
}

#[test]
fn rukhadze_ledger_identity() {
    let d = Digits(50);
    let rep = gauss_family_bound(7, 6, 8, &r(2), d).unwrap();
    let decay = closed_extremum(-1);
    let growth = closed_extremum(1);
    let saving = closed_saving();
    assert!(close(&Float::with_val(BITS, -term(&rep, TermKind::IntegralDecay).c0.value()), &decay, 1e-40));
    assert!(close(term(&rep, TermKind::CoefficientGrowth).c1.value(), &growth, 1e-40));
    assert!(close(term(&rep, TermKind::PhiSaving).c0.value(), &saving, 1e-40));
    let c0 = Float::with_val(BITS, -&decay) - 8u32 + &saving;
    let c1 = Float::with_val(BITS, &growth) + 8u32 - &saving;
    assert!(close(rep.c0.value(), &c0, 1e-40));
    assert!(close(rep.c1.value(), &c1, 1e-40));
    assert!((rep.c0.to_f64() - 6.30273213).abs() < 1e-8);
    assert!((rep.c1.to_f64() - 18.22371823).abs() < 1e-8);
}

#[test]
fn critical_points_agree_with_golden_section() {
    let d = Digits(40);
    let bits = d.bits();
    let unit = ExponentProduct::new()
        .real_factor(Poly::new(vec![r(0), r(1)]), r(1))
        .real_factor(Poly::new(vec![r(1), r(-1)]), r(1))
        .real_factor(Poly::new(vec![r(1), r(1)]), r(-1));
    let mut cases = vec![(rukhadze_integrand(), r(0), r(1)), (unit, r(0), r(1))];
    let env = RhinFamily::log3().envelope();
    cases.push((env.clone(), Rational::from((2, 3)), r(1)));
    cases.push((env, r(1), Rational::from((4, 3))));
    for (f, lo, hi) in &cases {
        let exact = log_max_on_interval(f, lo, hi, d).unwrap();
        let golden = golden_section_max(f, lo.to_f64(), hi.to_f64(), bits);
        assert!((exact.value.to_f64() - golden.to_f64()).abs() < 1e-10, "{} vs {}", exact.value, golden);
    }
    let pattern = rukhadze_pattern();
    let exact = binomial_growth_max(&pattern, &r(7), &r(14), d).unwrap();
    let (_, golden) = golden_max(|y| pattern.eval(y), 7.0, 14.0, 400, bits);
    assert!((exact.value.to_f64() - golden.to_f64()).abs() < 1e-10);
}

#[test]
fn paper_constants_both_ways() {
    let d = Digits(40);
    let bits = d.bits();
    let decay = golden_section_max(&rukhadze_integrand(), 0.0, 1.0, bits).to_f64();
    let (_, growth) = golden_max(|y| rukhadze_pattern().eval(y), 7.0, 14.0, 400, bits);
    for (closed, numeric, want) in [
        (closed_extremum(-1), decay, -11.84497806),
        (closed_extremum(1), growth.to_f64(), 12.68147230),
    ] {
        assert!((closed.to_f64() - want).abs() < 1e-8 && (numeric - want).abs() < 1e-8);
    }
    assert!((closed_saving().to_f64() - 2.45775406).abs() < 1e-8);
}

#[test]
fn saddle_roots_satisfy_vieta() {
    let d = Digits(40);
    for cfg in [HataConfig::log2_pi(1), HataConfig::log2_log3(1)] {
        let f = cfg.phase();
        let s = saddle_points(&f, d).unwrap();
        assert_eq!(s.len(), 3);
        assert!(vieta_defect(&f, &s) < 1e-35);
    }
}

fn ledger(c0_terms: &[f64], c1: f64) -> Vec<Contribution> {
    let d = Digits(30);
    let mut v: Vec<Contribution> = c0_terms
        .iter()
        .map(|c| Contribution::shared("t", TermKind::IntegralDecay, "", BigFloat::from_f64(*c, d), BigFloat::zero(d)))
        .collect();
    v.push(Contribution::shared("g", TermKind::CoefficientGrowth, "", BigFloat::zero(d), BigFloat::from_f64(c1, d)));
    v
}

proptest! {
    #[test]
    fn mu_decreases_as_c0_grows(terms in prop::collection::vec(0.1f64..5.0, 1..5), c1 in 0.1f64..20.0,
                                which in 0usize..5, bump in 0.01f64..2.0) {
        let d = Digits(30);
        let base = assemble_bound(ledger(&terms, c1), false, d).unwrap();
        let mut bumped = terms.clone();
        let i = which % bumped.len();
        bumped[i] += bump;
        let more = assemble_bound(ledger(&bumped, c1), false, d).unwrap();
        prop_assert!(more.mu < base.mu);
    }

    #[test]
    fn saddle_values_scale_linearly(c in 1i64..6) {
        let d = Digits(30);
        let f = HataConfig::log2_pi(1).phase();
        let base = saddle_points(&f, d).unwrap();
        let scaled = saddle_points(&f.scaled(&r(c)), d).unwrap();
        for (a, b) in base.iter().zip(&scaled) {
            let diff = Float::with_val(BITS, a.value.value() * c) - b.value.value();
            prop_assert!(diff.abs() < 1e-20);
            let dz = (&a.root - &b.root).abs().to_f64();
            prop_assert!(dz < 1e-20);
        }
    }
}
