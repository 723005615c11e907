//! The classification engine.
//!
//! For a character `λ` of the algebra and a Levi system, this module
//! computes the invariant ideals `k_λ` (where the whole orbit of `λ` is
//! trivial on lines) and `p_λ` (where the orbit is fixed on lines), the
//! membership test for `L_λ`, the unitary character `χ_λ` on `p_λ`, the
//! orbit-direction subspace `V` dual to `p_λ`, and the quasi-orbit data that
//! decides when two characters define the same classification.
//!
//! Group invariance is always reduced to the generators: the Levi
//! one-parameter generators `N_i`, the adjoint generators `ad(X_j)`, and the
//! central table actions (a finite group, hence closed under inverses). In
//! characteristic zero a subspace stable under `exp(tN)` for all rational
//! `t` is stable under `N`, and stability under two operators implies
//! stability under their commutator, so generator stability already gives
//! stability under the whole unipotently generated group.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::adelic::AdeleCharacter;
use crate::error::{Error, Result};
use crate::group::{GroupElement, LeviSystem};
use crate::nilpotent::{ad_matrix, LieVector};
use crate::qmod1::Phase;
use crate::rat::Rat;
use crate::ratlinalg::{
    annihilator, intersect, kernel, largest_invariant_in, preimage, rref,
    smallest_invariant_containing, RatMatrix, Subspace,
};

/// Generators of the adjoint image of `G`: Levi one-parameter generators,
/// `ad` of every basis vector, and every central table action.
pub fn full_operator_set(system: &LeviSystem) -> Vec<RatMatrix> {
    let mut ops = system.one_param_gens().to_vec();
    let alg = system.algebra();
    for j in 0..alg.dim() {
        ops.push(ad_matrix(&alg.basis_vector(j)));
    }
    for c in 0..system.central().len() {
        ops.push(system.central().action(c).clone());
    }
    ops
}

/// The infinitesimal part only (`N_i` and `ad(X_j)`), used for seeding the
/// orbit-direction closure.
fn infinitesimal_operator_set(system: &LeviSystem) -> Vec<RatMatrix> {
    let mut ops = system.one_param_gens().to_vec();
    let alg = system.algebra();
    for j in 0..alg.dim() {
        ops.push(ad_matrix(&alg.basis_vector(j)));
    }
    ops
}

/// The line-triviality locus `W = ∩_v ker⟨a_v, ·⟩` of `λ`.
pub fn line_triviality_locus(lambda: &AdeleCharacter, system: &LeviSystem) -> Result<Subspace> {
    let d = system.dim();
    if lambda.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: lambda.dim(),
        });
    }
    let rows: Vec<Vec<Rat>> = lambda.components().map(|(_, v)| v.clone()).collect();
    if rows.is_empty() {
        return Ok(Subspace::full(d));
    }
    Ok(kernel(&RatMatrix::from_rows(rows)))
}

/// `k_λ`: the largest `G`-invariant subspace on whose lines every coadjoint
/// translate of `λ` is trivial.
pub fn compute_k(lambda: &AdeleCharacter, system: &LeviSystem) -> Result<Subspace> {
    let w = line_triviality_locus(lambda, system)?;
    Ok(largest_invariant_in(&w, &full_operator_set(system)))
}

/// `p_λ = {X : (Ad(g) − I)X ∈ k_λ for all g}`, computed from the
/// first-order generator conditions. Higher-order terms of
/// `exp(tN)X − X` land in `k_λ` automatically once `k_λ` is invariant and
/// `NX ∈ k_λ`; products of generators reduce by
/// `Ad(g₁g₂) − I = Ad(g₁)(Ad(g₂) − I) + (Ad(g₁) − I)`.
pub fn compute_p(lambda: &AdeleCharacter, system: &LeviSystem) -> Result<Subspace> {
    let k = compute_k(lambda, system)?;
    Ok(compute_p_given_k(&k, system))
}

pub(crate) fn compute_p_given_k(k: &Subspace, system: &LeviSystem) -> Subspace {
    let d = system.dim();
    let alg = system.algebra();
    let mut p = Subspace::full(d);
    for n in system.one_param_gens() {
        p = intersect(&p, &preimage(n, k));
    }
    for j in 0..d {
        p = intersect(&p, &preimage(&ad_matrix(&alg.basis_vector(j)), k));
    }
    let id = RatMatrix::identity(d);
    for c in 0..system.central().len() {
        let shifted = system.central().action(c).sub(&id);
        p = intersect(&p, &preimage(&shifted, k));
    }
    p
}

/// Independent oracle for `p_λ`: builds the quotient `𝔲/k_λ` explicitly,
/// computes the fixed central vectors of the induced quotient operators
/// there, and pulls the result back. Cross-validates [`compute_p`].
pub fn fixed_center_of_quotient(lambda: &AdeleCharacter, system: &LeviSystem) -> Result<Subspace> {
    let k = compute_k(lambda, system)?;
    let d = system.dim();
    let r = k.dim();
    if r == d {
        return Ok(Subspace::full(d));
    }
    // adapted basis: columns are the k-basis followed by the standard basis
    // vectors at the non-pivot columns of k's canonical basis
    let (_, pivots, _) = rref(k.basis());
    let mut cols: Vec<Vec<Rat>> = k.basis_rows();
    for c in 0..d {
        if !pivots.contains(&c) {
            let mut v = vec![Rat::from_integer(0.into()); d];
            v[c] = num::One::one();
            cols.push(v);
        }
    }
    let p_mat = RatMatrix::from_rows(cols).transpose();
    let p_inv = p_mat.inverse().expect("adapted basis is invertible");
    let q = d - r;
    // projection to quotient coordinates: the last q rows of P⁻¹
    let proj = RatMatrix::from_fn(q, d, |i, j| p_inv.get(r + i, j).clone());
    let induced = |m: &RatMatrix| -> RatMatrix {
        let conj = p_inv.mul(m).mul(&p_mat);
        RatMatrix::from_fn(q, q, |i, j| conj.get(r + i, r + j).clone())
    };

    let alg = system.algebra();
    let mut fixed_center = Subspace::full(q);
    for j in 0..d {
        let ad_q = induced(&ad_matrix(&alg.basis_vector(j)));
        fixed_center = intersect(&fixed_center, &kernel(&ad_q));
    }
    for n in system.one_param_gens() {
        fixed_center = intersect(&fixed_center, &kernel(&induced(n)));
    }
    let id_q = RatMatrix::identity(q);
    for c in 0..system.central().len() {
        let m = induced(system.central().action(c)).sub(&id_q);
        fixed_center = intersect(&fixed_center, &kernel(&m));
    }
    Ok(preimage(&proj, &fixed_center))
}

/// `L_λ` membership: `(action − I)·e_j ∈ k` for every basis vector.
pub fn in_l_lambda(action: &RatMatrix, k: &Subspace) -> bool {
    let d = k.ambient_dim();
    assert!(
        action.is_square() && action.rows() == d,
        "action has the wrong shape"
    );
    let shifted = action.sub(&RatMatrix::identity(d));
    (0..d).all(|j| k.contains_vec(&shifted.col(j)))
}

/// `χ_λ(exp x) = λ(x)` for `x ∈ p_λ`.
pub fn chi_lambda(lambda: &AdeleCharacter, x: &LieVector, p: &Subspace) -> Result<Phase> {
    if !p.contains_vec(x.coords()) {
        return Err(Error::NotInP);
    }
    lambda.eval(x.coords())
}

/// The orbit-direction subspace `V`: the smallest invariant subspace (under
/// the transposed operators) containing every first-order coadjoint
/// displacement of `λ` — `Mᵀ a_v` for the infinitesimal generators and
/// `(cᵀ − I) a_v` for the central actions. The coadjoint orbit closure of
/// `λ` is the coset `λ + V` in the solenoid picture, and `p_λ = V^⊥`.
pub fn orbit_direction_v(lambda: &AdeleCharacter, system: &LeviSystem) -> Result<Subspace> {
    let d = system.dim();
    if lambda.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: lambda.dim(),
        });
    }
    let mut seeds: Vec<Vec<Rat>> = Vec::new();
    for (_, a) in lambda.components() {
        for m in infinitesimal_operator_set(system) {
            seeds.push(m.transpose().mul_vec(a));
        }
        let id = RatMatrix::identity(d);
        for c in 0..system.central().len() {
            let shifted = system.central().action(c).transpose().sub(&id);
            seeds.push(shifted.mul_vec(a));
        }
    }
    let ops: Vec<RatMatrix> = full_operator_set(system)
        .iter()
        .map(RatMatrix::transpose)
        .collect();
    Ok(smallest_invariant_containing(d, &seeds, &ops))
}

/// Asserts the solenoid duality `p_λ = annihilator(V)`.
pub fn duality_check(lambda: &AdeleCharacter, system: &LeviSystem) -> Result<bool> {
    let p = compute_p(lambda, system)?;
    let v = orbit_direction_v(lambda, system)?;
    Ok(p == annihilator(&v))
}

/// Canonical quasi-orbit invariant: `p_λ` together with the restriction of
/// `λ` to `p_λ` (as a character of `Q^{dim p}` in the coordinates of the
/// canonical basis). Two characters have the same coadjoint quasi-orbit iff
/// their keys are equal. The basis phases are carried along as a readable
/// summary; they are not fine enough to decide equality on their own.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuasiOrbitKey {
    pub p: Subspace,
    pub restriction: AdeleCharacter,
    pub chi_values: Vec<Phase>,
}

impl PartialEq for QuasiOrbitKey {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.restriction == other.restriction
    }
}
impl Eq for QuasiOrbitKey {}

pub fn quasi_orbit_key(lambda: &AdeleCharacter, system: &LeviSystem) -> Result<QuasiOrbitKey> {
    let p = compute_p(lambda, system)?;
    let restriction = lambda.restrict_to(&p)?;
    let chi_values = p
        .basis_rows()
        .iter()
        .map(|b| lambda.eval(b))
        .collect::<Result<Vec<_>>>()?;
    Ok(QuasiOrbitKey {
        p,
        restriction,
        chi_values,
    })
}

/// Same quasi-orbit iff the `p`'s agree and `λ₁ − λ₂` is trivial on `p`.
pub fn same_quasi_orbit(
    lambda1: &AdeleCharacter,
    lambda2: &AdeleCharacter,
    system: &LeviSystem,
) -> Result<bool> {
    let p1 = compute_p(lambda1, system)?;
    let p2 = compute_p(lambda2, system)?;
    if p1 != p2 {
        return Ok(false);
    }
    lambda1.sub(lambda2)?.trivial_on_subspace(&p1)
}

/// Everything the classification procedure produces for one `λ`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ClassificationReport {
    pub lambda: AdeleCharacter,
    pub k: Subspace,
    pub p: Subspace,
    pub chi_on_p_basis: Vec<Phase>,
    #[serde(rename = "orbit_V")]
    pub orbit_v: Subspace,
    pub duality_ok: bool,
    pub l_lambda_samples: Vec<(String, bool)>,
}

/// Runs the full pipeline; membership is reported for the supplied sample
/// elements (their unipotent parts are ignored, membership is a Levi
/// condition).
pub fn classify(
    lambda: &AdeleCharacter,
    system: &Arc<LeviSystem>,
    sample_elements: &[GroupElement],
) -> Result<ClassificationReport> {
    let k = compute_k(lambda, system)?;
    let p = compute_p_given_k(&k, system);
    let chi_on_p_basis = p
        .basis_rows()
        .iter()
        .map(|b| lambda.eval(b))
        .collect::<Result<Vec<_>>>()?;
    let orbit_v = orbit_direction_v(lambda, system)?;
    let duality_ok = p == annihilator(&orbit_v);
    let l_lambda_samples = sample_elements
        .iter()
        .map(|g| (g.describe_levi(), in_l_lambda(g.levi().action(), &k)))
        .collect();
    Ok(ClassificationReport {
        lambda: lambda.clone(),
        k,
        p,
        chi_on_p_basis,
        orbit_v,
        duality_ok,
        l_lambda_samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adelic::Place;
    use crate::catalog::{self, AbelianRep};
    use crate::group::{central_element, identity, one_param};
    use crate::rat::{rat, rat_int};

    fn unit(d: usize, i: usize) -> Vec<Rat> {
        let mut v = vec![Rat::from_integer(0.into()); d];
        v[i] = num::One::one();
        v
    }

    #[test]
    fn trivial_character_gives_everything() {
        let fx = catalog::heisenberg_system(1);
        let lam = AdeleCharacter::zero(3);
        assert!(compute_k(&lam, &fx.system).unwrap().is_full());
        assert!(compute_p(&lam, &fx.system).unwrap().is_full());
        assert!(orbit_direction_v(&lam, &fx.system).unwrap().is_zero());
        assert!(duality_check(&lam, &fx.system).unwrap());
    }

    #[test]
    fn heisenberg_center_case() {
        // λ supported on the center: k = 0, p = z, V = span{x*, y*}
        let fx = catalog::heisenberg_system(1);
        let lam = fx.lambda("z-star");
        let k = compute_k(lam, &fx.system).unwrap();
        assert!(k.is_zero());
        let p = compute_p(lam, &fx.system).unwrap();
        assert_eq!(p.dim(), 1);
        assert!(p.contains_vec(&unit(3, 2)));
        let v = orbit_direction_v(lam, &fx.system).unwrap();
        assert_eq!(v.dim(), 2);
        assert!(v.contains_vec(&unit(3, 0)));
        assert!(v.contains_vec(&unit(3, 1)));
        assert!(duality_check(lam, &fx.system).unwrap());
    }

    #[test]
    fn heisenberg_v_case() {
        // λ supported on a symplectic coordinate: k = z, p = z
        let fx = catalog::heisenberg_system(1);
        let lam = fx.lambda("x1-star");
        let k = compute_k(lam, &fx.system).unwrap();
        assert_eq!(k.dim(), 1);
        assert!(k.contains_vec(&unit(3, 2)));
        let p = compute_p(lam, &fx.system).unwrap();
        assert_eq!(p, k);
        assert!(duality_check(lam, &fx.system).unwrap());
    }

    #[test]
    fn abelian_standard_cases() {
        let fx = catalog::abelian_radical_system(AbelianRep::Standard);
        let sys = &fx.system;
        let lam = fx.lambda("e1-star");
        let k = compute_k(lam, sys).unwrap();
        assert!(k.is_zero());
        assert!(compute_p(lam, sys).unwrap().is_zero());
        assert!(orbit_direction_v(lam, sys).unwrap().is_full());
        // I ∈ L_λ, −I ∉ L_λ
        assert!(in_l_lambda(central_element(sys, 0).levi().action(), &k));
        assert!(!in_l_lambda(central_element(sys, 1).levi().action(), &k));
        // p-adic support gives the same shape
        let lam2 = fx.lambda("e1-star-2adic");
        assert!(compute_k(lam2, sys).unwrap().is_zero());
        assert!(compute_p(lam2, sys).unwrap().is_zero());
        // λ = 0: everything is in L_λ
        let zero = fx.lambda("zero");
        let kfull = compute_k(zero, sys).unwrap();
        assert!(kfull.is_full());
        assert!(in_l_lambda(central_element(sys, 1).levi().action(), &kfull));
        assert!(in_l_lambda(
            one_param(sys, 0, &rat(2, 3)).levi().action(),
            &kfull
        ));
    }

    #[test]
    fn p_oracle_agrees() {
        for name in catalog::CATALOG_NAMES {
            let fx = catalog::by_name(name).unwrap();
            for (lname, lam) in &fx.lambdas {
                let p = compute_p(lam, &fx.system).unwrap();
                let oracle = fixed_center_of_quotient(lam, &fx.system).unwrap();
                assert_eq!(p, oracle, "{name}/{lname}");
            }
        }
    }

    #[test]
    fn k_identity_on_fixtures() {
        for name in catalog::CATALOG_NAMES {
            let fx = catalog::by_name(name).unwrap();
            for (lname, lam) in &fx.lambdas {
                let k = compute_k(lam, &fx.system).unwrap();
                let p = compute_p(lam, &fx.system).unwrap();
                let w = line_triviality_locus(lam, &fx.system).unwrap();
                assert_eq!(k, intersect(&p, &w), "{name}/{lname}");
                assert!(p.contains(&k), "{name}/{lname}");
            }
        }
    }

    #[test]
    fn chi_lambda_cases() {
        let fx = catalog::heisenberg_system(1);
        let lam = fx.lambda("z-star");
        let p = compute_p(lam, &fx.system).unwrap();
        let alg = fx.system.algebra();
        assert!(chi_lambda(lam, &alg.zero_vector(), &p).unwrap().is_zero());
        let tz = alg.vector(vec![rat_int(0), rat_int(0), rat(5, 3)]);
        assert_eq!(chi_lambda(lam, &tz, &p).unwrap(), Phase::new(rat(5, 3)));
        // x ∉ p rejected
        assert!(matches!(
            chi_lambda(lam, &alg.basis_vector(0), &p),
            Err(Error::NotInP)
        ));
    }

    #[test]
    fn quasi_orbit_separates_center_from_v() {
        let fx = catalog::heisenberg_system(1);
        let sys = &fx.system;
        let lam_center = fx.lambda("z-star");
        let lam_v = fx.lambda("x1-star");
        assert!(same_quasi_orbit(lam_center, lam_center, sys).unwrap());
        assert!(!same_quasi_orbit(lam_center, lam_v, sys).unwrap());
        let k1 = quasi_orbit_key(lam_center, sys).unwrap();
        let k2 = quasi_orbit_key(lam_v, sys).unwrap();
        // same p, different restriction
        assert_eq!(k1.p, k2.p);
        assert_ne!(k1, k2);
    }

    #[test]
    fn quasi_orbit_invariant_under_coadjoint() {
        let fx = catalog::heisenberg_system(1);
        let sys = &fx.system;
        let lam = AdeleCharacter::new(
            3,
            vec![
                (Place::Infinity, vec![rat(1, 2), rat_int(1), rat(2, 3)]),
                (Place::Prime(3), vec![rat_int(0), rat(1, 3), rat_int(2)]),
            ],
        )
        .unwrap();
        let g = one_param(sys, 0, &rat(1, 2));
        let moved = lam.coadjoint(g.levi().action()).unwrap();
        assert!(same_quasi_orbit(&lam, &moved, sys).unwrap());
        assert_eq!(
            compute_k(&lam, sys).unwrap(),
            compute_k(&moved, sys).unwrap()
        );
        assert_eq!(
            compute_p(&lam, sys).unwrap(),
            compute_p(&moved, sys).unwrap()
        );
    }

    #[test]
    fn phase_summary_alone_would_be_too_coarse() {
        // on h3, the archimedean center character and the 2-adic one have
        // the same p = z and the same phases on the basis vector of z, yet
        // restrict to distinct characters of z (they differ at z/3): the
        // canonical restriction separates them, the phase list does not
        let fx = catalog::heisenberg_system(1);
        let sys = &fx.system;
        let a = fx.lambda("z-star").clone();
        let b = AdeleCharacter::new(
            3,
            vec![(Place::Prime(2), vec![rat_int(0), rat_int(0), rat_int(-1)])],
        )
        .unwrap();
        let ka = quasi_orbit_key(&a, sys).unwrap();
        let kb = quasi_orbit_key(&b, sys).unwrap();
        assert_eq!(ka.p, kb.p);
        assert_eq!(ka.chi_values, kb.chi_values);
        let third = vec![rat_int(0), rat_int(0), rat(1, 3)];
        assert_ne!(a.eval(&third).unwrap(), b.eval(&third).unwrap());
        assert_ne!(ka, kb);
        assert!(!same_quasi_orbit(&a, &b, sys).unwrap());
    }

    #[test]
    fn classify_report_shape() {
        let fx = catalog::abelian_radical_system(AbelianRep::Standard);
        let sys = &fx.system;
        let samples = vec![
            identity(sys),
            central_element(sys, 1),
            one_param(sys, 0, &rat_int(1)),
        ];
        let report = classify(fx.lambda("e1-star"), sys, &samples).unwrap();
        assert!(report.k.is_zero());
        assert!(report.p.is_zero());
        assert!(report.orbit_v.is_full());
        assert!(report.duality_ok);
        assert_eq!(
            report
                .l_lambda_samples
                .iter()
                .map(|(_, b)| *b)
                .collect::<Vec<_>>(),
            vec![true, false, false]
        );
        // JSON round-trip
        let text = serde_json::to_string(&report).unwrap();
        let back: ClassificationReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn fixed_character_has_zero_orbit_direction() {
        // λ supported on a coordinate no generator moves: V = {0}, and the
        // duality forces p to be everything
        use crate::group::{CentralTable, LeviSystem};
        use crate::nilpotent::LieAlgebra;
        use crate::ratlinalg::RatMatrix;
        let algebra = LieAlgebra::abelian(2);
        let mut e12 = RatMatrix::zero(2, 2);
        e12.set(0, 1, num::One::one());
        let system = LeviSystem::new(algebra, vec![e12], CentralTable::trivial(2)).unwrap();
        let lam = AdeleCharacter::archimedean(vec![rat_int(0), rat_int(1)]);
        let v = orbit_direction_v(&lam, &system).unwrap();
        assert!(v.is_zero());
        assert!(compute_p(&lam, &system).unwrap().is_full());
        assert!(duality_check(&lam, &system).unwrap());
        // k is the invariant hyperplane the character kills
        assert_eq!(compute_k(&lam, &system).unwrap().dim(), 1);
    }

    #[test]
    fn operator_set_composition() {
        // h3/sl2: two one-parameter generators, ad of each basis vector
        // (including the zero matrix for the central Z), both table actions
        let fx = catalog::heisenberg_system(1);
        assert_eq!(full_operator_set(&fx.system).len(), 2 + 3 + 2);
        // free-3: six elementary derivations and six ad matrices
        let f3 = catalog::free_nilpotent_system(3).unwrap();
        assert_eq!(full_operator_set(&f3.system).len(), 6 + 6 + 1);
    }

    #[test]
    fn values_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Subspace>();
        assert_send_sync::<RatMatrix>();
        assert_send_sync::<AdeleCharacter>();
        assert_send_sync::<crate::group::LeviSystem>();
        assert_send_sync::<crate::group::GroupElement>();
        assert_send_sync::<crate::traces::TraceFunction>();
        assert_send_sync::<ClassificationReport>();
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let fx = catalog::heisenberg_system(1);
        let lam = AdeleCharacter::zero(5);
        assert!(matches!(
            compute_k(&lam, &fx.system),
            Err(Error::DimensionMismatch {
                expected: 3,
                got: 5
            })
        ));
    }
}
