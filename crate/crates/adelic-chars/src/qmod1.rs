//! Exact arithmetic in `Q/Z` and p-adic fractional parts.
//!
//! A [`Phase`] `r` stands for the root of unity `e^{2πir}`; a [`CharValue`]
//! is either such a root or the absorbing value zero. All character
//! evaluations in the crate stay in this exact domain; conversion to complex
//! numbers happens only inside the numerical positivity check.

use std::fmt;

use num::{BigInt, One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::{self, format_rat, fract, parse_rat, Rat};

/// An element of `Q/Z`, stored as the reduced representative in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Phase(Rat);

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Phase({})", format_rat(&self.0))
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rat(&self.0))
    }
}

impl Phase {
    pub fn new(r: Rat) -> Self {
        Phase(fract(&r))
    }

    pub fn zero() -> Self {
        Phase(Rat::zero())
    }

    pub fn value(&self) -> &Rat {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, other: &Phase) -> Phase {
        Phase::new(&self.0 + &other.0)
    }

    pub fn neg(&self) -> Phase {
        Phase::new(-self.0.clone())
    }

    pub fn sub(&self, other: &Phase) -> Phase {
        self.add(&other.neg())
    }

    pub fn parse(s: &str) -> Result<Phase> {
        Ok(Phase::new(parse_rat(s)?))
    }
}

impl Serialize for Phase {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(&self.0))
    }
}

impl<'de> Deserialize<'de> for Phase {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Phase::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// A character value: `0`, or the root of unity with the given phase.
/// `Root(0)` is the multiplicative identity and `Zero` absorbs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CharValue {
    Zero,
    Root(Phase),
}

impl CharValue {
    pub fn one() -> Self {
        CharValue::Root(Phase::zero())
    }

    pub fn mul(&self, other: &CharValue) -> CharValue {
        match (self, other) {
            (CharValue::Root(a), CharValue::Root(b)) => CharValue::Root(a.add(b)),
            _ => CharValue::Zero,
        }
    }

    pub fn conj(&self) -> CharValue {
        match self {
            CharValue::Zero => CharValue::Zero,
            CharValue::Root(p) => CharValue::Root(p.neg()),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, CharValue::Zero)
    }

    pub fn is_one(&self) -> bool {
        matches!(self, CharValue::Root(p) if p.is_zero())
    }
}

impl fmt::Display for CharValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharValue::Zero => f.write_str("0"),
            CharValue::Root(p) => write!(f, "e(2*pi*i*{p})"),
        }
    }
}

pub fn phase_add(a: &Phase, b: &Phase) -> Phase {
    a.add(b)
}

pub fn phase_neg(a: &Phase) -> Phase {
    a.neg()
}

pub fn cv_mul(a: &CharValue, b: &CharValue) -> CharValue {
    a.mul(b)
}

/// The p-adic fractional part: the unique rational `f` with `0 ≤ f < 1`,
/// denominator a power of `p`, and `x − f` p-integral.
pub fn frac_p(x: &Rat, p: u64) -> Result<Rat> {
    if !rat::is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    let (k, m) = rat::split_p_power(x.denom(), p);
    if k == 0 {
        return Ok(Rat::zero());
    }
    // x = a/(p^k m), gcd(m, p) = 1: need c ≡ a·m⁻¹ (mod p^k), f = c/p^k
    let pk = BigInt::from(p).pow(k);
    let m_inv = mod_inverse(&m, &pk);
    let c = ((x.numer() * m_inv) % &pk + &pk) % &pk;
    Ok(Rat::new(c, pk))
}

fn mod_inverse(a: &BigInt, modulus: &BigInt) -> BigInt {
    let e = num::Integer::extended_gcd(&(((a % modulus) + modulus) % modulus), modulus);
    assert!(e.gcd.is_one(), "mod_inverse of non-unit");
    ((e.x % modulus) + modulus) % modulus
}

/// Self-test of the character convention `e = e_∞ · Π_p e_p`: for every
/// rational, the real fractional part minus the sum of p-adic fractional
/// parts over the primes of the denominator is an integer.
pub fn global_phase_zero(q: &Rat) -> bool {
    let mut acc = fract(q);
    for p in rat::prime_factors(q.denom()) {
        acc -= frac_p(q, p).expect("denominator factors are prime");
    }
    fract(&acc).is_zero()
}
