//! Trace-function combinators and verifiers.
//!
//! A [`TraceFunction`] is an evaluable map from group elements to character
//! values — the group is infinite, so every check is pointwise or sampled.
//! This module builds the supported function family (constant one, trivial
//! extensions, tilde extensions of central-table characters, tensors over a
//! direct sum, the engine's `Φ_(λ,φ)`), and verifies the trace axioms:
//! normalization, centrality, and positive type via Gram matrices.

use std::sync::Arc;

use num::bigint::BigInt;
use num::{One, Signed, Zero};

use crate::adelic::AdeleCharacter;
use crate::chars::{compute_k, compute_p_given_k, in_l_lambda};
use crate::eigen::Fixed;
use crate::error::{Error, Result};
use crate::group::{conjugate, identity, inverse, multiply, DirectSum, GroupElement, LeviSystem};
use crate::qmod1::{CharValue, Phase};
use crate::rat::Rat;
use crate::ratlinalg::Subspace;

type EvalFn = dyn Fn(&GroupElement) -> CharValue + Send + Sync;

/// An evaluable trace candidate, tied to its system.
#[derive(Clone)]
pub struct TraceFunction {
    system: Arc<LeviSystem>,
    name: String,
    eval: Arc<EvalFn>,
}

impl TraceFunction {
    pub fn new(
        system: &Arc<LeviSystem>,
        name: impl Into<String>,
        eval: impl Fn(&GroupElement) -> CharValue + Send + Sync + 'static,
    ) -> Self {
        Self {
            system: Arc::clone(system),
            name: name.into(),
            eval: Arc::new(eval),
        }
    }

    pub fn eval(&self, g: &GroupElement) -> CharValue {
        assert!(
            Arc::ptr_eq(g.system(), &self.system),
            "element belongs to a different system"
        );
        (self.eval)(g)
    }

    pub fn system(&self) -> &Arc<LeviSystem> {
        &self.system
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// The constant-one trace `1_G`.
    pub fn one(system: &Arc<LeviSystem>) -> Self {
        Self::new(system, "1_G", |_| CharValue::one())
    }

    /// `δ_e`: one at the identity, zero elsewhere.
    pub fn delta_e(system: &Arc<LeviSystem>) -> Self {
        let id = identity(system);
        Self::new(system, "delta_e", move |g| {
            if *g == id {
                CharValue::one()
            } else {
                CharValue::Zero
            }
        })
    }
}

/// Trivial extension: `ψ` inside the membership set, zero outside.
/// The membership set must contain the identity.
pub fn trivial_extension(
    psi: TraceFunction,
    membership: impl Fn(&GroupElement) -> bool + Send + Sync + 'static,
    name: impl Into<String>,
) -> TraceFunction {
    let system = Arc::clone(psi.system());
    assert!(
        membership(&identity(&system)),
        "membership set must contain the identity"
    );
    TraceFunction::new(&system, name, move |g| {
        if membership(g) {
            psi.eval(g)
        } else {
            CharValue::Zero
        }
    })
}

/// A character of a subgroup of the central table, extended by zero: the
/// support lists `(label index, value)` pairs which must form a subgroup
/// with a homomorphism to `Q/Z`.
#[derive(Clone, Debug)]
pub struct TildeCentralCharacter {
    support: Vec<(usize, Phase)>,
}

impl TildeCentralCharacter {
    pub fn new(system: &LeviSystem, support: Vec<(usize, Phase)>) -> Result<Self> {
        let table = system.central();
        let find = |label: usize| support.iter().find(|(l, _)| *l == label).map(|(_, v)| v);
        if find(table.identity_index()).is_none_or(|v| !v.is_zero()) {
            return Err(Error::BadTildeSupport(
                "support must contain the identity with phase 0".into(),
            ));
        }
        for (l1, v1) in &support {
            if *l1 >= table.len() {
                return Err(Error::BadTildeSupport(format!(
                    "label index {l1} out of range"
                )));
            }
            for (l2, v2) in &support {
                let prod = table.mul(*l1, *l2);
                match find(prod) {
                    None => {
                        return Err(Error::BadTildeSupport(format!(
                            "support not closed: {} * {} leaves it",
                            table.label(*l1),
                            table.label(*l2)
                        )))
                    }
                    Some(v) if *v != v1.add(v2) => {
                        return Err(Error::BadTildeSupport(format!(
                            "value at {} is not the product of the values",
                            table.label(prod)
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(Self { support })
    }

    /// Trivial character of the trivial sub-table `{identity}`.
    pub fn trivial(system: &LeviSystem) -> Self {
        Self {
            support: vec![(system.central().identity_index(), Phase::zero())],
        }
    }

    /// The sign character of a `{I, −I}` table.
    pub fn sign(system: &LeviSystem) -> Result<Self> {
        let table = system.central();
        let minus = table
            .index_of("-I")
            .ok_or_else(|| Error::BadTildeSupport("table has no -I label".into()))?;
        Self::new(
            system,
            vec![
                (table.identity_index(), Phase::zero()),
                (minus, Phase::new(Rat::new(1.into(), 2.into()))),
            ],
        )
    }

    pub fn support(&self) -> &[(usize, Phase)] {
        &self.support
    }

    /// Value on a Levi element: the labeled table action must match the
    /// element's action exactly (equality in `L` is the pair).
    pub fn eval(&self, system: &LeviSystem, g: &GroupElement) -> CharValue {
        let levi = g.levi();
        for (label, value) in &self.support {
            if levi.label() == *label && levi.action() == system.central().action(*label) {
                return CharValue::Root(value.clone());
            }
        }
        CharValue::Zero
    }
}

/// The Levi input of [`make_character`].
pub enum LeviCharacter {
    /// Constant one on all of `L_λ`.
    ConstantOne,
    /// Trivial extension of a central-table character.
    Tilde(TildeCentralCharacter),
    /// Plug-in evaluation for characters outside the constructed family;
    /// the caller is responsible for support ⊆ `L_λ`.
    Custom(
        String,
        Arc<dyn Fn(&GroupElement) -> CharValue + Send + Sync>,
    ),
}

/// `Φ_(λ,φ)(l·exp x) = φ(l)·χ_λ(x)` when `l ∈ L_λ` and `x ∈ p_λ`, zero
/// otherwise. Tilde supports are checked to lie inside `L_λ`.
pub fn make_character(
    lambda: &AdeleCharacter,
    phi: LeviCharacter,
    system: &Arc<LeviSystem>,
) -> Result<TraceFunction> {
    let k = compute_k(lambda, system)?;
    let p = compute_p_given_k(&k, system);
    if let LeviCharacter::Tilde(t) = &phi {
        for (label, _) in t.support() {
            if !in_l_lambda(system.central().action(*label), &k) {
                return Err(Error::SupportNotInL);
            }
        }
    }
    let name = match &phi {
        LeviCharacter::ConstantOne => "Phi(lambda, 1)".to_string(),
        LeviCharacter::Tilde(_) => "Phi(lambda, tilde)".to_string(),
        LeviCharacter::Custom(n, _) => format!("Phi(lambda, {n})"),
    };
    let lambda = lambda.clone();
    let sys = Arc::clone(system);
    Ok(TraceFunction::new(system, name, move |g| {
        if !in_l_lambda(g.levi().action(), &k) || !p.contains_vec(g.uni().coords()) {
            return CharValue::Zero;
        }
        let phi_value = match &phi {
            LeviCharacter::ConstantOne => CharValue::one(),
            LeviCharacter::Tilde(t) => t.eval(&sys, g),
            LeviCharacter::Custom(_, f) => f(g),
        };
        let chi = CharValue::Root(
            lambda
                .eval(g.uni().coords())
                .expect("element dimension matches"),
        );
        phi_value.mul(&chi)
    }))
}

/// Tensor product over a direct sum: value on `(g₁, g₂)` is the product of
/// the factor values.
pub fn tensor(ds: &DirectSum, phi1: TraceFunction, phi2: TraceFunction) -> TraceFunction {
    assert!(
        Arc::ptr_eq(phi1.system(), ds.left()),
        "first factor is on the wrong system"
    );
    assert!(
        Arc::ptr_eq(phi2.system(), ds.right()),
        "second factor is on the wrong system"
    );
    let name = format!("{} (x) {}", phi1.name(), phi2.name());
    let split_sys = Arc::clone(&ds.system);
    let ds_clone = ds.clone();
    TraceFunction::new(&split_sys, name, move |g| {
        let (g1, g2) = ds_clone.split(g);
        phi1.eval(&g1).mul(&phi2.eval(&g2))
    })
}

/// Exact Gram matrix `(φ(g_j⁻¹ g_i))_{i,j}` of character values.
#[derive(Clone, Debug)]
pub struct GramMatrix {
    n: usize,
    values: Vec<CharValue>,
}

pub fn gram_matrix(phi: &TraceFunction, elems: &[GroupElement]) -> GramMatrix {
    let n = elems.len();
    assert!(n >= 1, "gram matrix needs at least one element");
    let mut values = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            values.push(phi.eval(&multiply(&inverse(&elems[j]), &elems[i])));
        }
    }
    GramMatrix { n, values }
}

impl GramMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn value(&self, i: usize, j: usize) -> &CharValue {
        &self.values[i * self.n + j]
    }

    /// Exact Hermitian test: `entry(i,j) = conj(entry(j,i))`.
    pub fn is_hermitian(&self) -> bool {
        for i in 0..self.n {
            for j in 0..self.n {
                if *self.value(i, j) != self.value(j, i).conj() {
                    return false;
                }
            }
        }
        true
    }

    /// All phases in `{0, 1/2}` — entries are the rationals `0, ±1`.
    pub fn is_rational_real(&self) -> bool {
        self.values.iter().all(|v| match v {
            CharValue::Zero => true,
            CharValue::Root(p) => p.is_zero() || *p.value() == Rat::new(1.into(), 2.into()),
        })
    }

    fn rational_entries(&self) -> Vec<Vec<Rat>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| match self.value(i, j) {
                        CharValue::Zero => Rat::zero(),
                        CharValue::Root(p) => {
                            if p.is_zero() {
                                Rat::one()
                            } else {
                                -Rat::one()
                            }
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Complex entries at the given precision, as fixed-point (re, im)
    /// mantissa pairs.
    pub fn to_complex(&self, ctx: &Fixed) -> Vec<Vec<(BigInt, BigInt)>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| match self.value(i, j) {
                        CharValue::Zero => (ctx.zero(), ctx.zero()),
                        CharValue::Root(p) => ctx.cos_sin_turns(p.value()),
                    })
                    .collect()
            })
            .collect()
    }
}

/// Default precision for the numerical positivity path, overridable through
/// the `ADELIC_CHARS_PSD_BITS` environment variable.
pub fn default_psd_bits() -> u32 {
    std::env::var("ADELIC_CHARS_PSD_BITS")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(60)
}

/// Positive semidefiniteness of a Gram matrix.
///
/// Rejects non-Hermitian input. When every phase lies in `{0, 1/2}` the
/// matrix is rational and an exact pivoted LDLᵀ decides, ignoring the
/// tolerance; otherwise the smallest eigenvalue of the real symmetric
/// embedding `[[Re, −Im], [Im, Re]]` is computed at `prec_bits` and
/// compared against `−tol`.
pub fn psd_check(gram: &GramMatrix, tol: &Rat, prec_bits: u32) -> Result<bool> {
    if !gram.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    if gram.is_rational_real() {
        return Ok(rational_psd(&gram.rational_entries()));
    }
    let ctx = Fixed::new(prec_bits);
    let complex = gram.to_complex(&ctx);
    let n = gram.n();
    let mut embed = vec![vec![BigInt::zero(); 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let (re, im) = &complex[i][j];
            embed[i][j] = re.clone();
            embed[n + i][n + j] = re.clone();
            embed[i][n + j] = -im.clone();
            embed[n + i][j] = im.clone();
        }
    }
    let min = ctx.min_eigenvalue_symmetric(&embed);
    Ok(ctx.to_rat(&min) >= -tol.clone())
}

/// Exact rational PSD test by pivoted LDLᵀ (symmetric Gaussian
/// elimination): at each step the largest remaining diagonal entry pivots;
/// a negative diagonal or a nonzero row on a vanished diagonal refutes.
fn rational_psd(m: &[Vec<Rat>]) -> bool {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        let (pos, pivot) = active
            .iter()
            .enumerate()
            .map(|(pos, &i)| (pos, a[i][i].clone()))
            .max_by(|(_, x), (_, y)| x.cmp(y))
            .expect("active set nonempty");
        let i = active[pos];
        if pivot.is_negative() {
            return false;
        }
        if pivot.is_zero() {
            // all remaining diagonals are ≤ 0, hence 0; PSD forces the
            // whole remaining block to vanish
            return active
                .iter()
                .all(|&r| active.iter().all(|&c| a[r][c].is_zero()));
        }
        active.remove(pos);
        // Schur complement on the remaining block
        for &r in &active {
            let f = &a[r][i] / &pivot;
            if f.is_zero() {
                continue;
            }
            for &c in &active {
                a[r][c] = &a[r][c] - &f * &a[i][c];
            }
        }
    }
    true
}

/// `φ(h g h⁻¹) = φ(g)` exactly for every supplied pair.
pub fn central_check(phi: &TraceFunction, pairs: &[(GroupElement, GroupElement)]) -> bool {
    pairs
        .iter()
        .all(|(g, h)| phi.eval(&conjugate(g, h)) == phi.eval(g))
}

/// Partition of supplied elements into the kernel (`φ = 1`) and projective
/// kernel (`|φ| = 1`), plus the multiplicativity check
/// `φ(x·γ) = φ(x)·φ(γ)` for `x` in the projective kernel.
#[derive(Debug)]
pub struct ProjectiveKernelProbe {
    pub k_members: Vec<usize>,
    pub p_members: Vec<usize>,
    pub multiplicativity_ok: bool,
}

pub fn projective_kernel_probe(
    phi: &TraceFunction,
    elems: &[GroupElement],
) -> ProjectiveKernelProbe {
    let mut k_members = Vec::new();
    let mut p_members = Vec::new();
    for (i, g) in elems.iter().enumerate() {
        match phi.eval(g) {
            CharValue::Root(p) if p.is_zero() => {
                k_members.push(i);
                p_members.push(i);
            }
            CharValue::Root(_) => p_members.push(i),
            CharValue::Zero => {}
        }
    }
    let mut multiplicativity_ok = true;
    for &i in &p_members {
        for g in elems {
            let lhs = phi.eval(&multiply(&elems[i], g));
            let rhs = phi.eval(&elems[i]).mul(&phi.eval(g));
            if lhs != rhs {
                multiplicativity_ok = false;
            }
        }
    }
    ProjectiveKernelProbe {
        k_members,
        p_members,
        multiplicativity_ok,
    }
}

/// Restriction of `Φ` to the unipotent part as a function on the algebra —
///`x ↦ Φ(e, x)` — used for the Ad-invariance checks.
pub fn unipotent_restriction(
    phi: &TraceFunction,
) -> impl Fn(&crate::nilpotent::LieVector) -> CharValue + '_ {
    let system = Arc::clone(phi.system());
    move |x| phi.eval(&crate::group::unipotent(&system, x.clone()))
}

/// The support subspace wrapper used by trivial extensions from `exp(s)`.
pub fn subspace_membership(
    system: &Arc<LeviSystem>,
    s: Subspace,
) -> impl Fn(&GroupElement) -> bool + Send + Sync {
    let id = identity(system).levi().clone();
    move |g| *g.levi() == id && s.contains_vec(g.uni().coords())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, AbelianRep};
    use crate::group::{central_element, direct_sum, one_param, unipotent};
    use crate::rat::{rat, rat_int};

    fn h3_fixture() -> (Arc<LeviSystem>, AdeleCharacter) {
        let fx = catalog::heisenberg_system(1);
        let lam = fx.lambda("z-star").clone();
        (fx.system, lam)
    }

    #[test]
    fn gram_of_constant_one_is_all_ones() {
        let (sys, _) = h3_fixture();
        let one = TraceFunction::one(&sys);
        let elems = vec![
            identity(&sys),
            one_param(&sys, 0, &rat_int(1)),
            central_element(&sys, 1),
        ];
        let gram = gram_matrix(&one, &elems);
        assert!(gram.is_hermitian());
        for i in 0..3 {
            for j in 0..3 {
                assert!(gram.value(i, j).is_one());
            }
        }
        assert!(psd_check(&gram, &rat(1, 1_000_000_000), 60).unwrap());
    }

    #[test]
    fn gram_of_delta_e_is_identity() {
        let (sys, _) = h3_fixture();
        let delta = TraceFunction::delta_e(&sys);
        let alg = sys.algebra();
        let elems = vec![
            identity(&sys),
            unipotent(&sys, alg.basis_vector(0)),
            unipotent(&sys, alg.basis_vector(2)),
        ];
        let gram = gram_matrix(&delta, &elems);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(gram.value(i, j).is_one(), i == j);
            }
        }
        assert!(psd_check(&gram, &rat(1, 1_000_000_000), 60).unwrap());
    }

    #[test]
    fn tilde_chi_gram_and_psd() {
        let (sys, lam) = h3_fixture();
        let phi = make_character(&lam, LeviCharacter::ConstantOne, &sys).unwrap();
        let alg = sys.algebra();
        let e = identity(&sys);
        let z = unipotent(&sys, alg.vector(vec![rat_int(0), rat_int(0), rat(1, 3)]));
        let gram = gram_matrix(&phi, &[e, z]);
        // [[1, e^{−2πi/3}], [e^{2πi/3}, 1]]
        assert!(gram.value(0, 0).is_one());
        assert_eq!(gram.value(1, 0), &CharValue::Root(Phase::new(rat(1, 3))));
        assert_eq!(gram.value(0, 1), &CharValue::Root(Phase::new(rat(-1, 3))));
        assert!(gram.is_hermitian());
        assert!(!gram.is_rational_real());
        assert!(psd_check(&gram, &rat(1, 1_000_000_000), 60).unwrap());
    }

    #[test]
    fn psd_rejects_indefinite_and_non_hermitian() {
        let (sys, _) = h3_fixture();
        // [[1,2],[2,1]] is not a Gram matrix of a trace; emulate it directly
        let gram = GramMatrix {
            n: 2,
            values: vec![
                CharValue::one(),
                CharValue::Root(Phase::zero()),
                CharValue::Root(Phase::zero()),
                CharValue::one(),
            ],
        };
        // all-ones is PSD
        assert!(psd_check(&gram, &rat(1, 1_000_000_000), 60).unwrap());
        let _ = sys;
        // indefinite rational matrix via the exact path
        assert!(!rational_psd(&[
            vec![rat_int(1), rat_int(2)],
            vec![rat_int(2), rat_int(1)],
        ]));
        // PSD rational matrix with a zero pivot
        assert!(rational_psd(&[
            vec![rat_int(0), rat_int(0)],
            vec![rat_int(0), rat_int(1)],
        ]));
        assert!(!rational_psd(&[
            vec![rat_int(0), rat_int(1)],
            vec![rat_int(1), rat_int(0)],
        ]));
        // non-Hermitian rejected
        let bad = GramMatrix {
            n: 2,
            values: vec![
                CharValue::one(),
                CharValue::Root(Phase::new(rat(1, 3))),
                CharValue::Root(Phase::new(rat(1, 3))),
                CharValue::one(),
            ],
        };
        assert!(matches!(
            psd_check(&bad, &rat(1, 1_000_000_000), 60),
            Err(Error::NotHermitian)
        ));
    }

    #[test]
    fn centrality_and_negative_control() {
        let (sys, lam) = h3_fixture();
        let phi = make_character(&lam, LeviCharacter::ConstantOne, &sys).unwrap();
        let alg = sys.algebra();
        let gx = unipotent(&sys, alg.basis_vector(0));
        let gy = unipotent(&sys, alg.basis_vector(1));
        let gz = unipotent(&sys, alg.vector(vec![rat_int(0), rat(1, 2), rat(1, 3)]));
        let pairs = vec![
            (gz.clone(), gx.clone()),
            (gz.clone(), gy.clone()),
            (gx.clone(), gy.clone()),
        ];
        assert!(central_check(&phi, &pairs));

        // support-unrestricted λ-evaluation is NOT central: conjugating
        // exp(X) by exp(Y/2) shifts the argument by −Z/2, and λ sees the
        // half-integer phase
        let lam2 = lam.clone();
        let broken = TraceFunction::new(&sys, "broken", move |g| {
            CharValue::Root(lam2.eval(g.uni().coords()).expect("dim matches"))
        });
        let gy_half = unipotent(&sys, alg.vector(vec![rat_int(0), rat(1, 2), rat_int(0)]));
        assert!(!central_check(&broken, &[(gx, gy_half)]));
    }

    #[test]
    fn tilde_support_validation() {
        let fx = catalog::abelian_radical_system(AbelianRep::Standard);
        let sys = &fx.system;
        let sign = TildeCentralCharacter::sign(sys).unwrap();
        assert_eq!(sign.support().len(), 2);
        // support must contain the identity with phase zero
        assert!(TildeCentralCharacter::new(sys, vec![(1, Phase::zero())]).is_err());
        // value map must be a homomorphism: -I with phase 1/3 breaks (−I)² = I
        assert!(TildeCentralCharacter::new(
            sys,
            vec![(0, Phase::zero()), (1, Phase::new(rat(1, 3)))]
        )
        .is_err());
        // ε requires −I ∈ L_λ: rejected for λ = e1*
        let lam = fx.lambda("e1-star");
        assert!(matches!(
            make_character(lam, LeviCharacter::Tilde(sign), sys),
            Err(Error::SupportNotInL)
        ));
    }

    #[test]
    fn epsilon_character_on_standard_system() {
        let fx = catalog::abelian_radical_system(AbelianRep::Standard);
        let sys = &fx.system;
        let zero = fx.lambda("zero");
        let eps = make_character(
            zero,
            LeviCharacter::Tilde(TildeCentralCharacter::sign(sys).unwrap()),
            sys,
        )
        .unwrap();
        let v = sys.algebra().vector(vec![rat(1, 2), rat_int(3)]);
        let plus = unipotent(sys, v.clone());
        let minus = multiply(&central_element(sys, 1), &unipotent(sys, v.clone()));
        let word = multiply(&one_param(sys, 0, &rat(1, 2)), &unipotent(sys, v));
        assert!(eps.eval(&plus).is_one());
        assert_eq!(eps.eval(&minus), CharValue::Root(Phase::new(rat(1, 2))));
        assert_eq!(eps.eval(&word), CharValue::Zero);
        // normalized and central on a few pairs
        assert!(eps.eval(&identity(sys)).is_one());
        assert!(central_check(
            &eps,
            &[(minus.clone(), word.clone()), (plus, minus)]
        ));
    }

    #[test]
    fn custom_levi_character_plugs_in() {
        // rebuild ε through the plug-in interface and compare with the
        // table route pointwise
        let fx = catalog::abelian_radical_system(AbelianRep::Standard);
        let sys = &fx.system;
        let zero = fx.lambda("zero");
        let table_eps = make_character(
            zero,
            LeviCharacter::Tilde(TildeCentralCharacter::sign(sys).unwrap()),
            sys,
        )
        .unwrap();
        let plus = central_element(sys, 0).levi().clone();
        let minus = central_element(sys, 1).levi().clone();
        let custom = make_character(
            zero,
            LeviCharacter::Custom(
                "sign".into(),
                Arc::new(move |g: &GroupElement| {
                    if *g.levi() == plus {
                        CharValue::one()
                    } else if *g.levi() == minus {
                        CharValue::Root(Phase::new(rat(1, 2)))
                    } else {
                        CharValue::Zero
                    }
                }),
            ),
            sys,
        )
        .unwrap();
        let mut rng = crate::sample::rng_from_seed(77);
        for _ in 0..100 {
            let g = crate::sample::group_element(&mut rng, sys);
            assert_eq!(custom.eval(&g), table_eps.eval(&g));
        }
    }

    #[test]
    fn trivial_extension_of_chi_matches_engine_character() {
        let (sys, lam) = h3_fixture();
        let p = crate::chars::compute_p(&lam, &sys).unwrap();
        let lam2 = lam.clone();
        let sys2 = Arc::clone(&sys);
        let chi = TraceFunction::new(&sys, "chi on P", move |g| {
            CharValue::Root(lam2.eval(g.uni().coords()).expect("dim matches"))
        });
        let tilde = trivial_extension(chi, subspace_membership(&sys2, p), "tilde chi");
        let phi = make_character(&lam, LeviCharacter::ConstantOne, &sys).unwrap();
        let alg = sys.algebra();
        let samples = vec![
            identity(&sys),
            unipotent(&sys, alg.vector(vec![rat_int(0), rat_int(0), rat(7, 5)])),
            unipotent(&sys, alg.vector(vec![rat_int(1), rat_int(0), rat(7, 5)])),
            one_param(&sys, 0, &rat(1, 3)),
            central_element(&sys, 1),
        ];
        for g in &samples {
            assert_eq!(tilde.eval(g), phi.eval(g));
        }
        // δ_e is the trivial extension of 1 from {e}
        let delta = trivial_extension(
            TraceFunction::one(&sys),
            {
                let id = identity(&sys);
                move |g: &GroupElement| *g == id
            },
            "delta via extension",
        );
        for g in &samples {
            assert_eq!(delta.eval(g), TraceFunction::delta_e(&sys).eval(g));
        }
    }

    #[test]
    fn trivial_extension_from_normal_subgroups() {
        let (sys, _) = h3_fixture();
        // extension of 1 from the full group is 1_G
        let full = trivial_extension(TraceFunction::one(&sys), |_| true, "1 from G");
        // extension of 1 from the (normal) unipotent radical is its indicator
        let id_levi = identity(&sys).levi().clone();
        let from_u = trivial_extension(
            TraceFunction::one(&sys),
            move |g: &GroupElement| *g.levi() == id_levi,
            "1 from U",
        );
        assert!(full.eval(&identity(&sys)).is_one());
        assert!(from_u.eval(&identity(&sys)).is_one());
        let mut rng = crate::sample::rng_from_seed(12);
        let pairs: Vec<(GroupElement, GroupElement)> = (0..50)
            .map(|_| {
                (
                    crate::sample::group_element(&mut rng, &sys),
                    crate::sample::group_element(&mut rng, &sys),
                )
            })
            .collect();
        assert!(central_check(&full, &pairs));
        assert!(central_check(&from_u, &pairs));
        for (g, _) in &pairs {
            assert!(full.eval(g).is_one());
        }
    }

    #[test]
    fn tensor_multiplies_blockwise() {
        let fx1 = catalog::abelian_radical_system(AbelianRep::Standard);
        let fx2 = catalog::heisenberg_system(1);
        let ds = direct_sum(&fx1.system, &fx2.system);
        let eps = make_character(
            fx1.lambda("zero"),
            LeviCharacter::Tilde(TildeCentralCharacter::sign(&fx1.system).unwrap()),
            &fx1.system,
        )
        .unwrap();
        let chi = make_character(
            fx2.lambda("z-star"),
            LeviCharacter::ConstantOne,
            &fx2.system,
        )
        .unwrap();
        let t = tensor(&ds, eps.clone(), chi.clone());

        let g1 = multiply(
            &central_element(&fx1.system, 1),
            &unipotent(
                &fx1.system,
                fx1.system.algebra().vector(vec![rat_int(1), rat(1, 2)]),
            ),
        );
        let g2 = unipotent(
            &fx2.system,
            fx2.system
                .algebra()
                .vector(vec![rat_int(0), rat_int(0), rat(1, 4)]),
        );
        let g = ds.embed(&g1, &g2);
        assert_eq!(t.eval(&g), eps.eval(&g1).mul(&chi.eval(&g2)));
        assert_eq!(t.eval(&g), CharValue::Root(Phase::new(rat(3, 4)))); // 1/2 + 1/4
        assert!(t.eval(&identity(&ds.system)).is_one());
    }

    #[test]
    fn projective_kernel_partition() {
        let (sys, lam) = h3_fixture();
        let phi = make_character(&lam, LeviCharacter::ConstantOne, &sys).unwrap();
        let alg = sys.algebra();
        let elems = vec![
            identity(&sys),                                                        // K
            unipotent(&sys, alg.vector(vec![rat_int(0), rat_int(0), rat_int(2)])), // K (λ(2Z)=0)
            unipotent(&sys, alg.vector(vec![rat_int(0), rat_int(0), rat(1, 2)])),  // P only
            unipotent(&sys, alg.basis_vector(0)),                                  // outside
        ];
        let probe = projective_kernel_probe(&phi, &elems);
        assert_eq!(probe.k_members, vec![0, 1]);
        assert_eq!(probe.p_members, vec![0, 1, 2]);
        assert!(probe.multiplicativity_ok);

        // 1_G: every element is in K
        let one = TraceFunction::one(&sys);
        let probe1 = projective_kernel_probe(&one, &elems);
        assert_eq!(probe1.k_members, vec![0, 1, 2, 3]);
        assert!(probe1.multiplicativity_ok);
    }
}
