//! Helpers around arbitrary-precision rationals.
//!
//! `num::BigRational` already keeps every value reduced with a positive
//! denominator, which is exactly the canonical form the rest of the crate
//! relies on. This module adds the string form used at every serialization
//! boundary ("num/den", never floats), factorials for the truncated
//! exponential series, and the small number-theoretic routines backing the
//! p-adic fractional part.

use num::bigint::{BigInt, Sign};
use num::{BigRational, One, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

/// Canonical string form `num/den` (denominator always printed).
pub fn format_rat(x: &Rat) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Accepts `num/den` or a bare integer.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator: {s:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator: {s:?}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator: {s:?}")));
    }
    Ok(Rat::new(n, d))
}

pub fn factorial(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

/// Fractional part in `[0, 1)`: `x - floor(x)`.
pub fn fract(x: &Rat) -> Rat {
    x - x.floor()
}

/// Deterministic Miller-Rabin, valid for every `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Prime factors (without multiplicity) of a positive integer, by trial
/// division. Denominators seen in practice are tiny; this is not a general
/// factoring routine.
pub fn prime_factors(n: &BigInt) -> Vec<u64> {
    assert!(
        n.sign() == Sign::Plus,
        "prime_factors wants a positive integer"
    );
    let mut n: BigInt = n.clone();
    let mut out = Vec::new();
    let mut p = BigInt::from(2u64);
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            out.push(u64::try_from(&p).expect("trial divisor fits u64"));
            while (&n % &p).is_zero() {
                n /= &p;
            }
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push(u64::try_from(&n).unwrap_or_else(|_| {
            panic!("prime factor {n} too large for the fractional-part routines")
        }));
    }
    out
}

/// `v_p(n)` and the cofactor, for a positive integer `n`.
pub fn split_p_power(n: &BigInt, p: u64) -> (u32, BigInt) {
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut k = 0u32;
    while (&n % &p).is_zero() {
        n /= &p;
        k += 1;
    }
    (k, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_string_round_trip() {
        let x = rat(-6, 8);
        assert_eq!(format_rat(&x), "-3/4");
        assert_eq!(parse_rat("-3/4").unwrap(), x);
        assert_eq!(parse_rat("7").unwrap(), rat_int(7));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("a/b").is_err());
    }

    #[test]
    fn primality() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(3));
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(561)); // Carmichael
        assert!(!is_prime_u64(1_000_000_007u64 * 3));
    }

    #[test]
    fn factor_small() {
        assert_eq!(prime_factors(&BigInt::from(360)), vec![2, 3, 5]);
        assert_eq!(prime_factors(&BigInt::from(1)), Vec::<u64>::new());
        assert_eq!(split_p_power(&BigInt::from(24), 2), (3, BigInt::from(3)));
    }
}
