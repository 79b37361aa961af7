use rug::Integer;

use super::ExactError;

const SIEVE_LIMIT: u64 = 10_000_000;
const SEGMENT: u64 = 1 << 18;

fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// All primes in `[lo, hi]`, ascending: segmented sieve below 10^7,
/// Miller-Rabin above.
pub fn primes_in(lo: u64, hi: u64) -> Result<Vec<u64>, ExactError> {
    if lo < 2 || lo > hi {
        return Err(ExactError::InvalidRange { lo, hi });
    }
    let mut out = Vec::new();
    let sieve_hi = hi.min(SIEVE_LIMIT);
    if lo <= sieve_hi {
        let base = small_primes((sieve_hi as f64).sqrt() as u64 + 1);
        let mut start = lo;
        while start <= sieve_hi {
            let end = (start + SEGMENT - 1).min(sieve_hi);
            let mut composite = vec![false; (end - start + 1) as usize];
            for &p in &base {
                if p * p > end {
                    break;
                }
                let first = (start.div_ceil(p) * p).max(p * p);
                let mut j = first;
                while j <= end {
                    composite[(j - start) as usize] = true;
                    j += p;
                }
            }
            out.extend(
                composite
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| !c)
                    .map(|(i, _)| start + i as u64),
            );
            start = end + 1;
        }
    }
    if hi > SIEVE_LIMIT {
        let from = lo.max(SIEVE_LIMIT + 1);
        out.extend((from..=hi).filter(|&k| is_prime(k)));
    }
    Ok(out)
}

pub fn primes_upto(n: u64) -> Vec<u64> {
    if n < 2 {
        Vec::new()
    } else {
        primes_in(2, n).expect("valid range")
    }
}

/// `D_n = lcm(1, ..., n)`.
pub fn lcm_upto(n: u64) -> Integer {
    let mut acc = Integer::from(1);
    for p in primes_upto(n) {
        let mut q = p;
        while q <= n / p {
            q *= p;
        }
        acc *= q;
    }
    acc
}

/// `ord_p(N!)` by Legendre's formula.
pub fn ordp_factorial(p: u64, n: u64) -> Result<u64, ExactError> {
    if !is_prime(p) {
        return Err(ExactError::NotPrime(p));
    }
    let mut total = 0;
    let mut q = n;
    while q > 0 {
        q /= p;
        total += q;
    }
    Ok(total)
}

/// `ord_p(x)` for a nonzero integer.
pub fn ord_p(x: &Integer, p: u64) -> u32 {
    assert!(*x != 0, "valuation of zero");
    let mut y = x.clone();
    y.remove_factor_mut(&Integer::from(p))
}
