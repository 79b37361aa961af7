use irrmeasure::exact::{is_prime, lcm_upto, ordp_factorial, primes_upto};
use irrmeasure::{GaussianRational, Integer, Rational};
use proptest::prelude::*;

#[test]
fn lcm_grows_only_at_prime_powers() {
    let mut prev = lcm_upto(1);
    for n in 2..=2000u64 {
        let next = lcm_upto(n);
        let q = Integer::from(&next / &prev);
        assert!(q == 1 || q.to_u64().is_some_and(is_prime), "n = {n}: ratio {q}");
        prev = next;
    }
}

fn brute_ord(p: u64, mut k: u64) -> u64 {
    let mut e = 0;
    while k % p == 0 {
        k /= p;
        e += 1;
    }
    e
}

#[test]
fn legendre_matches_brute_force() {
    for p in primes_upto(50) {
        let mut acc = 0;
        for n in 1..=500u64 {
            acc += brute_ord(p, n);
            assert_eq!(ordp_factorial(p, n).unwrap(), acc, "p = {p}, n = {n}");
        }
    }
}

#[test]
fn lcm_rate_approaches_one() {
    for (n, tol) in [(1000u64, 0.15), (10_000, 0.05)] {
        let rate = log_big(&lcm_upto(n)) / n as f64;
        assert!((rate - 1.0).abs() < tol, "n = {n}: {rate}");
    }
}

fn log_big(x: &Integer) -> f64 {
    let bits = x.significant_bits();
    let shift = bits.saturating_sub(60);
    Integer::from(x >> shift).to_f64().ln() + shift as f64 * std::f64::consts::LN_2
}

fn gaussian() -> impl Strategy<Value = GaussianRational> {
    (-50i64..50, 1i64..20, -50i64..50, 1i64..20)
        .prop_map(|(a, b, c, d)| GaussianRational::new(Rational::from((a, b)), Rational::from((c, d))))
}

proptest! {
    #[test]
    fn norm_is_multiplicative(x in gaussian(), y in gaussian()) {
        let xy = &x * &y;
        let lhs = &xy * &xy.conj();
        let rhs = &(&x * &x.conj()) * &(&y * &y.conj());
        prop_assert_eq!(lhs, rhs);
    }
}
