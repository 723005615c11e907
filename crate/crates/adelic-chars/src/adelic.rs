//! Characters of `Q^d` as rational-supported adele vectors.
//!
//! A character is stored as a finite map `place → Q^d` with literal zero at
//! every other place; the fixed global character is `e = e_∞ · Π_p e_p` with
//! `e_∞(x) = e^{2πix}` and `e_p(x) = e^{−2πi·frac_p(x)}`, which is trivial on
//! the diagonal `Q` (see [`crate::qmod1::global_phase_zero`]). Distinct
//! canonical values define distinct characters: a nonzero diagonal rational
//! is nonzero at every place, so a finitely supported difference that is
//! diagonal must vanish.

use std::collections::BTreeMap;
use std::fmt;

use num::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmod1::{frac_p, Phase};
use crate::rat::{format_rat, is_prime_u64, parse_rat, Rat};
use crate::ratlinalg::{RatMatrix, Subspace};

/// A place of `Q`: the archimedean one or a finite prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Infinity,
    Prime(u64),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => f.write_str("inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Place::Infinity => s.serialize_str("inf"),
            Place::Prime(p) => s.serialize_u64(*p),
        }
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::String(s) if s == "inf" => Ok(Place::Infinity),
            serde_json::Value::Number(n) => {
                let p = n
                    .as_u64()
                    .ok_or_else(|| D::Error::custom("place must be a prime"))?;
                if !is_prime_u64(p) {
                    return Err(D::Error::custom(format!("{p} is not prime")));
                }
                Ok(Place::Prime(p))
            }
            other => Err(D::Error::custom(format!("bad place: {other}"))),
        }
    }
}

/// A unitary character of `Q^dim` with rational finite support.
///
/// Canonical form: zero component vectors are dropped and places are kept
/// sorted (`∞` first, then primes ascending), so equality of values is
/// equality of characters.
#[derive(Clone, PartialEq, Eq)]
pub struct AdeleCharacter {
    dim: usize,
    comps: BTreeMap<Place, Vec<Rat>>,
}

impl fmt::Debug for AdeleCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AdeleCharacter(dim {}", self.dim)?;
        for (place, v) in &self.comps {
            let parts: Vec<String> = v.iter().map(format_rat).collect();
            write!(f, ", {place} ↦ [{}]", parts.join(", "))?;
        }
        f.write_str(")")
    }
}

impl AdeleCharacter {
    /// The trivial character.
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            comps: BTreeMap::new(),
        }
    }

    pub fn new(dim: usize, components: Vec<(Place, Vec<Rat>)>) -> Result<Self> {
        let mut comps = BTreeMap::new();
        for (place, v) in components {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: v.len(),
                });
            }
            if let Place::Prime(p) = place {
                if !is_prime_u64(p) {
                    return Err(Error::NotPrime(p));
                }
            }
            if v.iter().all(Rat::is_zero) {
                continue;
            }
            comps.insert(place, v);
        }
        Ok(Self { dim, comps })
    }

    /// Archimedean-only character `q ↦ e^{2πi⟨a,q⟩}`.
    pub fn archimedean(a: Vec<Rat>) -> Self {
        let dim = a.len();
        Self::new(dim, vec![(Place::Infinity, a)]).expect("dimension matches by construction")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> impl Iterator<Item = (&Place, &Vec<Rat>)> {
        self.comps.iter()
    }

    pub fn places(&self) -> Vec<Place> {
        self.comps.keys().copied().collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.comps.is_empty()
    }

    /// Phase of `λ(q)` under the fixed `e`:
    /// `⟨a_∞,q⟩ − Σ_p frac_p(⟨a_p,q⟩)` mod 1.
    pub fn eval(&self, q: &[Rat]) -> Result<Phase> {
        if q.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: q.len(),
            });
        }
        let mut acc = Rat::zero();
        for (place, a) in &self.comps {
            let pairing: Rat = a.iter().zip(q).map(|(x, y)| x * y).sum();
            match place {
                Place::Infinity => acc += pairing,
                Place::Prime(p) => acc -= frac_p(&pairing, *p).expect("stored places are prime"),
            }
        }
        Ok(Phase::new(acc))
    }

    /// True iff `λ(t·x) = 1` for every rational `t`; decided exactly as
    /// `⟨a_v, x⟩ = 0` at every stored place. A diagonal rational supported at
    /// finitely many places is zero, which is what collapses the density
    /// argument to these linear conditions.
    pub fn line_trivial(&self, x: &[Rat]) -> Result<bool> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(self
            .comps
            .values()
            .all(|a| a.iter().zip(x).map(|(u, v)| u * v).sum::<Rat>().is_zero()))
    }

    /// True iff the character is trivial on every rational point of `s`;
    /// line-triviality on a basis suffices since `s` is closed under
    /// rational scaling and addition.
    pub fn trivial_on_subspace(&self, s: &Subspace) -> Result<bool> {
        if s.ambient_dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: s.ambient_dim(),
            });
        }
        for b in s.basis_rows() {
            if !self.line_trivial(&b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The coadjoint image `λ ∘ g⁻¹`, realized componentwise by `(g⁻¹)ᵀ`;
    /// satisfies `eval(coadjoint(λ,g), q) = eval(λ, g⁻¹·q)`.
    pub fn coadjoint(&self, g_action: &RatMatrix) -> Result<Self> {
        assert!(
            g_action.is_square() && g_action.rows() == self.dim,
            "action must be square of the character dimension"
        );
        let inv_t = g_action.inverse().ok_or(Error::SingularMatrix)?.transpose();
        let components = self
            .comps
            .iter()
            .map(|(p, a)| (*p, inv_t.mul_vec(a)))
            .collect();
        Self::new(self.dim, components)
    }

    /// Componentwise application of an invertible matrix `m` to every
    /// component vector (the raw `λ_a ↦ λ_{m·a}` move; coadjoint is the
    /// `m = (g⁻¹)ᵀ` case).
    pub fn map_components(&self, m: &RatMatrix) -> Self {
        let components = self.comps.iter().map(|(p, a)| (*p, m.mul_vec(a))).collect();
        Self::new(self.dim, components).expect("shape preserved")
    }

    /// Componentwise difference `λ − μ`, canonicalized. Subtraction of
    /// character classes is representation-independent here because the
    /// finite-support rational representation is injective.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut components: BTreeMap<Place, Vec<Rat>> = self.comps.clone();
        for (place, b) in &other.comps {
            let entry = components
                .entry(*place)
                .or_insert_with(|| vec![Rat::zero(); self.dim]);
            for (x, y) in entry.iter_mut().zip(b) {
                *x -= y;
            }
        }
        Self::new(self.dim, components.into_iter().collect())
    }

    /// Restriction to a subspace, as a character of `Q^dim(s)` in the
    /// coordinates of the canonical basis of `s`: component vectors `B·a_v`.
    pub fn restrict_to(&self, s: &Subspace) -> Result<Self> {
        if s.ambient_dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: s.ambient_dim(),
            });
        }
        let b = s.basis();
        let components = self.comps.iter().map(|(p, a)| (*p, b.mul_vec(a))).collect();
        Self::new(s.dim(), components)
    }
}

/// Serde face of [`AdeleCharacter`]: `{"dim": d, "components": [{"place":
/// "inf"|p, "vector": ["num/den", ...]}, ...]}`.
#[derive(Serialize, Deserialize)]
struct AdeleCharacterDoc {
    dim: usize,
    components: Vec<ComponentDoc>,
}

#[derive(Serialize, Deserialize)]
struct ComponentDoc {
    place: Place,
    vector: Vec<String>,
}

impl Serialize for AdeleCharacter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let doc = AdeleCharacterDoc {
            dim: self.dim,
            components: self
                .comps
                .iter()
                .map(|(place, v)| ComponentDoc {
                    place: *place,
                    vector: v.iter().map(format_rat).collect(),
                })
                .collect(),
        };
        doc.serialize(s)
    }
}

impl<'de> Deserialize<'de> for AdeleCharacter {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = AdeleCharacterDoc::deserialize(d)?;
        let mut components = Vec::new();
        for c in doc.components {
            let v: std::result::Result<Vec<Rat>, _> =
                c.vector.iter().map(|s| parse_rat(s)).collect();
            components.push((c.place, v.map_err(D::Error::custom)?));
        }
        AdeleCharacter::new(doc.dim, components).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn rv(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| rat_int(x)).collect()
    }

    #[test]
    fn eval_cases() {
        let zero = AdeleCharacter::zero(2);
        assert!(zero.eval(&rv(&[3, 4])).unwrap().is_zero());

        let lam = AdeleCharacter::archimedean(vec![rat(1, 3)]);
        assert_eq!(lam.eval(&rv(&[1])).unwrap(), Phase::new(rat(1, 3)));

        let lam2 = AdeleCharacter::new(1, vec![(Place::Prime(2), vec![rat(1, 2)])]).unwrap();
        assert_eq!(lam2.eval(&rv(&[1])).unwrap(), Phase::new(rat(1, 2))); // −frac_2(1/2) = −1/2 ≡ 1/2
    }

    #[test]
    fn eval_additive() {
        let lam = AdeleCharacter::new(
            2,
            vec![
                (Place::Infinity, vec![rat(1, 3), rat(2, 5)]),
                (Place::Prime(2), vec![rat(1, 4), rat_int(1)]),
                (Place::Prime(3), vec![rat(5, 9), rat(1, 2)]),
            ],
        )
        .unwrap();
        let q1 = vec![rat(3, 7), rat(-1, 2)];
        let q2 = vec![rat(2, 3), rat(5, 4)];
        let sum: Vec<Rat> = q1.iter().zip(&q2).map(|(a, b)| a + b).collect();
        assert_eq!(
            lam.eval(&sum).unwrap(),
            lam.eval(&q1).unwrap().add(&lam.eval(&q2).unwrap())
        );
    }

    #[test]
    fn line_triviality() {
        let zero = AdeleCharacter::zero(2);
        assert!(zero.line_trivial(&rv(&[5, 7])).unwrap());

        let lam = AdeleCharacter::archimedean(rv(&[1, 0]));
        assert!(lam.line_trivial(&rv(&[0, 1])).unwrap());
        assert!(!lam.line_trivial(&rv(&[1, 0])).unwrap());

        // nontriviality witnessed by a sampled evaluation at t = 1/2
        let l1 = AdeleCharacter::archimedean(rv(&[1]));
        assert!(!l1.eval(&[rat(1, 2)]).unwrap().is_zero());
        assert!(!l1.line_trivial(&rv(&[1])).unwrap());
    }

    #[test]
    fn triviality_on_subspaces() {
        let lam = AdeleCharacter::archimedean(rv(&[0, 0, 1]));
        let plane = Subspace::from_spanning_rows(3, &[rv(&[1, 0, 0]), rv(&[0, 1, 0])]);
        let zline = Subspace::from_spanning_rows(3, &[rv(&[0, 0, 1])]);
        assert!(lam.trivial_on_subspace(&plane).unwrap());
        assert!(!lam.trivial_on_subspace(&zline).unwrap());
        assert!(lam.trivial_on_subspace(&Subspace::zero(3)).unwrap());
    }

    #[test]
    fn coadjoint_action() {
        let lam = AdeleCharacter::new(
            2,
            vec![
                (Place::Infinity, rv(&[0, 1])),
                (Place::Prime(3), vec![rat(1, 3), rat_int(2)]),
            ],
        )
        .unwrap();
        let id = RatMatrix::identity(2);
        assert_eq!(lam.coadjoint(&id).unwrap(), lam);

        let g = RatMatrix::from_rows(vec![rv(&[1, 1]), rv(&[0, 1])]);
        // (0,1) is fixed by (g⁻¹)ᵀ = [[1,0],[−1,1]]; (1,0) moves to (1,−1)
        let moved = lam.coadjoint(&g).unwrap();
        let (_, v) = moved
            .components()
            .next()
            .map(|(p, v)| (*p, v.clone()))
            .unwrap();
        assert_eq!(v, rv(&[0, 1]));
        let lam10 = AdeleCharacter::archimedean(rv(&[1, 0]));
        let moved10 = lam10.coadjoint(&g).unwrap();
        let (_, v10) = moved10
            .components()
            .next()
            .map(|(p, v)| (*p, v.clone()))
            .unwrap();
        assert_eq!(v10, rv(&[1, -1]));
        // group action: coadjoint by g then g⁻¹ returns λ
        let back = moved.coadjoint(&g.inverse().unwrap()).unwrap();
        assert_eq!(back, lam);
        // equivariance at basis vectors pins the transpose-inverse choice
        let ginv = g.inverse().unwrap();
        for q in [rv(&[1, 0]), rv(&[0, 1])] {
            assert_eq!(
                moved.eval(&q).unwrap(),
                lam.eval(&ginv.mul_vec(&q)).unwrap()
            );
            assert_eq!(
                moved10.eval(&q).unwrap(),
                lam10.eval(&ginv.mul_vec(&q)).unwrap()
            );
        }
        // singular action rejected
        let sing = RatMatrix::from_rows(vec![rv(&[1, 2]), rv(&[2, 4])]);
        assert!(matches!(lam.coadjoint(&sing), Err(Error::SingularMatrix)));
    }

    #[test]
    fn canonical_form_drops_zero_components() {
        let lam = AdeleCharacter::new(
            2,
            vec![
                (Place::Prime(5), rv(&[0, 0])),
                (Place::Infinity, rv(&[1, 0])),
            ],
        )
        .unwrap();
        assert_eq!(lam.places(), vec![Place::Infinity]);
        let diff = lam.sub(&lam).unwrap();
        assert!(diff.is_trivial());
    }

    #[test]
    fn json_round_trip() {
        let lam = AdeleCharacter::new(
            2,
            vec![
                (Place::Infinity, vec![rat(1, 3), rat_int(0)]),
                (Place::Prime(2), rv(&[1, 2])),
            ],
        )
        .unwrap();
        let text = serde_json::to_string(&lam).unwrap();
        let back: AdeleCharacter = serde_json::from_str(&text).unwrap();
        assert_eq!(back, lam);
        assert!(serde_json::from_str::<AdeleCharacter>(
            r#"{"dim":1,"components":[{"place":4,"vector":["1/1"]}]}"#
        )
        .is_err());
    }

    #[test]
    fn restriction_coordinates() {
        let lam = AdeleCharacter::archimedean(vec![rat_int(2), rat_int(3), rat_int(0)]);
        let s = Subspace::from_spanning_rows(3, &[rv(&[1, 0, 0]), rv(&[0, 1, 0])]);
        let r = lam.restrict_to(&s).unwrap();
        assert_eq!(r.dim(), 2);
        let (_, v) = r.components().next().map(|(p, v)| (*p, v.clone())).unwrap();
        assert_eq!(v, rv(&[2, 3]));
    }
}
