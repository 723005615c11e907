//! Seeded random generators for the property suites.
//!
//! Everything is driven by an explicit `ChaCha` stream so reports are
//! reproducible: same seed, same samples, same verdicts. Rationals are
//! drawn with bounded numerators and denominators; group elements combine a
//! random central label, a short word in the one-parameter generators, and
//! a random unipotent part; characters place bounded-denominator vectors at
//! a subset of `{∞, 2, 3, 5}`.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::adelic::{AdeleCharacter, Place};
use crate::group::{central_element, multiply, one_param, unipotent, GroupElement, LeviSystem};
use crate::nilpotent::LieVector;
use crate::rat::Rat;

pub type SampleRng = ChaCha12Rng;

pub fn rng_from_seed(seed: u64) -> SampleRng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// A rational with `|numerator| ≤ max_num` and `1 ≤ denominator ≤ max_den`.
pub fn rat_bounded(rng: &mut SampleRng, max_num: i64, max_den: i64) -> Rat {
    let num = rng.random_range(-max_num..=max_num);
    let den = rng.random_range(1..=max_den);
    Rat::new(num.into(), den.into())
}

pub fn vector_bounded(rng: &mut SampleRng, dim: usize, max_num: i64, max_den: i64) -> Vec<Rat> {
    (0..dim)
        .map(|_| rat_bounded(rng, max_num, max_den))
        .collect()
}

pub fn lie_vector(rng: &mut SampleRng, system: &Arc<LeviSystem>) -> LieVector {
    system
        .algebra()
        .vector(vector_bounded(rng, system.dim(), 6, 6))
}

/// A Levi element: random table label times a word of up to `max_len`
/// one-parameter factors with small rational times.
pub fn levi_word(rng: &mut SampleRng, system: &Arc<LeviSystem>, max_len: usize) -> GroupElement {
    let label = rng.random_range(0..system.central().len());
    let mut g = central_element(system, label);
    let gens = system.one_param_gens().len();
    if gens == 0 {
        return g;
    }
    let len = rng.random_range(0..=max_len);
    for _ in 0..len {
        let i = rng.random_range(0..gens);
        let t = rat_bounded(rng, 3, 4);
        g = multiply(&g, &one_param(system, i, &t));
    }
    g
}

/// A full group element `l·exp(x)`.
pub fn group_element(rng: &mut SampleRng, system: &Arc<LeviSystem>) -> GroupElement {
    let l = levi_word(rng, system, 3);
    let x = lie_vector(rng, system);
    multiply(&l, &unipotent(system, x))
}

/// A rational-supported character over places drawn from `{∞, 2, 3, 5}`
/// with entry denominators at most `max_den`.
pub fn adele_character(rng: &mut SampleRng, dim: usize, max_den: i64) -> AdeleCharacter {
    let places = [
        Place::Infinity,
        Place::Prime(2),
        Place::Prime(3),
        Place::Prime(5),
    ];
    let mut components = Vec::new();
    for place in places {
        if rng.random_bool(0.5) {
            components.push((place, vector_bounded(rng, dim, 8, max_den)));
        }
    }
    AdeleCharacter::new(dim, components).expect("sampled components have the right dimension")
}

/// Deterministic default membership samples for a classification run: the
/// central table, one unit-time one-parameter element per generator, and
/// seeded random words to fill up to `count`.
pub fn membership_samples(
    system: &Arc<LeviSystem>,
    count: usize,
    rng: &mut SampleRng,
) -> Vec<GroupElement> {
    let mut out = Vec::new();
    for label in 0..system.central().len() {
        out.push(central_element(system, label));
    }
    for i in 0..system.one_param_gens().len() {
        out.push(one_param(system, i, &Rat::from_integer(1.into())));
    }
    while out.len() < count {
        out.push(levi_word(rng, system, 3));
    }
    out.truncate(count.max(system.central().len()));
    out
}
