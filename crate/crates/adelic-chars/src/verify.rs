//! Seeded property suites behind `adelic-chars verify`.
//!
//! Each check runs against a concrete system with an explicit seed and
//! yields a [`CheckReport`]; a fixed seed reproduces the reports byte for
//! byte. The suites mirror the module invariants: `core` covers the exact
//! linear algebra, BCH/Ad arithmetic, the adelic convention and the group
//! law; `duality` covers the classification identities; `traces` covers the
//! trace axioms of the constructed characters.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::adelic::AdeleCharacter;
use crate::chars::{
    self, compute_k, compute_p, duality_check, fixed_center_of_quotient, line_triviality_locus,
    same_quasi_orbit,
};
use crate::group::{conjugate, identity, inverse, multiply, unipotent, GroupElement, LeviSystem};
use crate::nilpotent::{ad_of_group, bch, bracket, is_derivation};
use crate::qmod1::{global_phase_zero, Phase};
use crate::rat::Rat;
use crate::ratlinalg::{
    annihilator, intersect, largest_invariant_in, smallest_invariant_containing, sum, RatMatrix,
    Subspace,
};
use crate::sample::{self, SampleRng};
use crate::traces::{
    central_check, default_psd_bits, gram_matrix, make_character, psd_check, LeviCharacter,
    TildeCentralCharacter, TraceFunction,
};

/// One verification record: `{check, samples, seed, result, tolerance}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CheckReport {
    pub check: String,
    pub samples: usize,
    pub seed: u64,
    pub result: String,
    pub tolerance: Option<String>,
}

impl CheckReport {
    fn pass(check: &str, samples: usize, seed: u64) -> Self {
        Self {
            check: check.into(),
            samples,
            seed,
            result: "pass".into(),
            tolerance: None,
        }
    }

    fn fail(check: &str, samples: usize, seed: u64, detail: impl Into<String>) -> Self {
        Self {
            check: check.into(),
            samples,
            seed,
            result: format!("fail: {}", detail.into()),
            tolerance: None,
        }
    }

    fn with_tolerance(mut self, tol: &str) -> Self {
        self.tolerance = Some(tol.to_string());
        self
    }

    pub fn passed(&self) -> bool {
        self.result == "pass"
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Core,
    Traces,
    Duality,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "core" => Some(Suite::Core),
            "traces" => Some(Suite::Traces),
            "duality" => Some(Suite::Duality),
            "all" => Some(Suite::All),
            _ => None,
        }
    }
}

pub fn run_suite(system: &Arc<LeviSystem>, suite: Suite, seed: u64) -> Vec<CheckReport> {
    let mut out = Vec::new();
    if matches!(suite, Suite::Core | Suite::All) {
        out.extend(core_suite(system, seed));
    }
    if matches!(suite, Suite::Duality | Suite::All) {
        out.extend(duality_suite(system, seed));
    }
    if matches!(suite, Suite::Traces | Suite::All) {
        out.extend(traces_suite(system, seed));
    }
    out
}

fn check_all<T>(
    name: &str,
    seed: u64,
    items: impl IntoIterator<Item = T>,
    mut ok: impl FnMut(&T) -> bool,
    describe: impl Fn(&T) -> String,
) -> CheckReport {
    let mut n = 0usize;
    for item in items {
        n += 1;
        if !ok(&item) {
            return CheckReport::fail(name, n, seed, describe(&item));
        }
    }
    CheckReport::pass(name, n, seed)
}

fn random_subspace(rng: &mut SampleRng, d: usize) -> Subspace {
    use rand::Rng;
    let rows = rng.random_range(0..=d);
    let rows: Vec<Vec<Rat>> = (0..rows)
        .map(|_| sample::vector_bounded(rng, d, 5, 4))
        .collect();
    Subspace::from_spanning_rows(d, &rows)
}

fn core_suite(system: &Arc<LeviSystem>, seed: u64) -> Vec<CheckReport> {
    let mut rng = sample::rng_from_seed(seed);
    let d = system.dim();
    let mut out = Vec::new();

    out.push(check_all(
        "ratlinalg/annihilator-involution",
        seed,
        (0..60).map(|_| random_subspace(&mut rng, d)),
        |s| {
            let a = annihilator(s);
            annihilator(&a) == *s && a.dim() + s.dim() == d
        },
        |s| format!("failed on a subspace of dim {}", s.dim()),
    ));

    out.push(check_all(
        "ratlinalg/modular-dimension-law",
        seed,
        (0..60).map(|_| (random_subspace(&mut rng, d), random_subspace(&mut rng, d))),
        |(s1, s2)| s1.dim() + s2.dim() == intersect(s1, s2).dim() + sum(s1, s2).dim(),
        |_| "dimension law violated".to_string(),
    ));

    let ops = chars::full_operator_set(system);
    let ops_t: Vec<RatMatrix> = ops.iter().map(RatMatrix::transpose).collect();
    out.push(check_all(
        "ratlinalg/fixpoint-duality",
        seed,
        (0..40).map(|_| random_subspace(&mut rng, d)),
        |w| {
            let big = largest_invariant_in(w, &ops);
            let dual = smallest_invariant_containing(d, &annihilator(w).basis_rows(), &ops_t);
            big == annihilator(&dual)
        },
        |w| format!("duality of fixpoints failed at dim {}", w.dim()),
    ));

    out.push(check_all(
        "ratlinalg/largest-invariant-is-maximal",
        seed,
        (0..25).map(|_| random_subspace(&mut rng, d)),
        |w| {
            let v = largest_invariant_in(w, &ops);
            if !w.contains(&v) {
                return false;
            }
            if !ops
                .iter()
                .all(|m| v.basis_rows().iter().all(|b| v.contains_vec(&m.mul_vec(b))))
            {
                return false;
            }
            // adding any basis vector of w outside v must break stability
            w.basis_rows().iter().all(|b| {
                if v.contains_vec(b) {
                    return true;
                }
                let bigger = sum(
                    &v,
                    &Subspace::from_spanning_rows(d, std::slice::from_ref(b)),
                );
                let closed = smallest_invariant_containing(d, &bigger.basis_rows(), &ops);
                !w.contains(&closed)
            })
        },
        |_| "maximality certificate failed".to_string(),
    ));

    out.push(check_all(
        "qmod1/global-phase-zero",
        seed,
        (0..1000).map(|_| sample::rat_bounded(&mut rng, 1_000_000, 1_000_000)),
        global_phase_zero,
        |q| format!("trivial-on-Q identity failed at {q}"),
    ));

    out.push(check_all(
        "qmod1/phase-group",
        seed,
        (0..200).map(|_| {
            (
                Phase::new(sample::rat_bounded(&mut rng, 50, 50)),
                Phase::new(sample::rat_bounded(&mut rng, 50, 50)),
                Phase::new(sample::rat_bounded(&mut rng, 50, 50)),
            )
        }),
        |(a, b, c)| {
            a.add(b) == b.add(a) && a.add(&b.add(c)) == a.add(b).add(c) && a.add(&a.neg()).is_zero()
        },
        |_| "phase group law failed".to_string(),
    ));

    out.push(check_all(
        "nilpotent/bch-associativity",
        seed,
        (0..40).map(|_| {
            (
                sample::lie_vector(&mut rng, system),
                sample::lie_vector(&mut rng, system),
                sample::lie_vector(&mut rng, system),
            )
        }),
        |(x, y, z)| bch(&bch(x, y), z) == bch(x, &bch(y, z)),
        |_| "bch associativity failed".to_string(),
    ));

    out.push(check_all(
        "nilpotent/bch-inverse-and-unit",
        seed,
        (0..60).map(|_| sample::lie_vector(&mut rng, system)),
        |x| bch(x, &x.neg()).is_zero() && bch(x, &x.algebra().zero_vector()) == *x,
        |_| "bch inverse law failed".to_string(),
    ));

    out.push(check_all(
        "nilpotent/ad-homomorphism",
        seed,
        (0..40).map(|_| {
            (
                sample::lie_vector(&mut rng, system),
                sample::lie_vector(&mut rng, system),
            )
        }),
        |(x, y)| ad_of_group(&bch(x, y)) == ad_of_group(x).mul(&ad_of_group(y)),
        |_| "Ad(bch) != Ad·Ad".to_string(),
    ));

    out.push(check_all(
        "nilpotent/ad-preserves-brackets",
        seed,
        (0..40).map(|_| {
            (
                sample::lie_vector(&mut rng, system),
                sample::lie_vector(&mut rng, system),
                sample::lie_vector(&mut rng, system),
            )
        }),
        |(g, y, z)| {
            let a = ad_of_group(g);
            let alg = g.algebra();
            a.mul_vec(bracket(y, z).coords())
                == alg.bracket_coords(&a.mul_vec(y.coords()), &a.mul_vec(z.coords()))
        },
        |_| "Ad is not an automorphism".to_string(),
    ));

    out.push(check_all(
        "nilpotent/exp-preserves-brackets",
        seed,
        system.one_param_gens().to_vec(),
        |n| {
            if !is_derivation(n, system.algebra()) {
                return false;
            }
            let e = crate::nilpotent::exp_nilpotent(n, &Rat::new(1.into(), 2.into()))
                .expect("generators are nilpotent");
            crate::nilpotent::is_automorphism(&e, system.algebra())
        },
        |_| "exp(tN) is not an automorphism".to_string(),
    ));

    out.push(check_all(
        "nilpotent/central-series-ideals",
        seed,
        [()],
        |_| {
            let series = system.algebra().ascending_central_series();
            let alg = system.algebra();
            let mut prev = Subspace::zero(d);
            for term in &series {
                if !term.contains(&prev) || term.dim() <= prev.dim() {
                    return false;
                }
                // [𝔲, z^i] ⊆ z^{i−1}
                for b in term.basis_rows() {
                    for j in 0..d {
                        let mut ej = vec![Rat::from_integer(0.into()); d];
                        ej[j] = num::One::one();
                        if !prev.contains_vec(&alg.bracket_coords(&ej, &b)) {
                            return false;
                        }
                    }
                }
                prev = term.clone();
            }
            series.last().map(Subspace::is_full).unwrap_or(false)
        },
        |_| "ascending central series is not an ideal chain".to_string(),
    ));

    out.push(check_all(
        "adelic/eval-additivity",
        seed,
        (0..100).map(|_| {
            (
                sample::adele_character(&mut rng, d, 12),
                sample::vector_bounded(&mut rng, d, 8, 8),
                sample::vector_bounded(&mut rng, d, 8, 8),
            )
        }),
        |(lam, q1, q2)| {
            let sum: Vec<Rat> = q1.iter().zip(q2).map(|(a, b)| a + b).collect();
            lam.eval(&sum).expect("dim ok")
                == lam
                    .eval(q1)
                    .expect("dim ok")
                    .add(&lam.eval(q2).expect("dim ok"))
        },
        |_| "character additivity failed".to_string(),
    ));

    out.push(check_all(
        "adelic/coadjoint-equivariance",
        seed,
        (0..60).map(|_| {
            (
                sample::adele_character(&mut rng, d, 12),
                sample::levi_word(&mut rng, system, 3),
                sample::vector_bounded(&mut rng, d, 8, 8),
            )
        }),
        |(lam, g, q)| {
            let action = g.levi().action();
            let moved = lam.coadjoint(action).expect("invertible");
            let ginv_q = action.inverse().expect("invertible").mul_vec(q);
            moved.eval(q).expect("dim ok") == lam.eval(&ginv_q).expect("dim ok")
        },
        |_| "coadjoint equivariance failed".to_string(),
    ));

    out.push(check_all(
        "adelic/line-triviality-consistent-with-sampling",
        seed,
        (0..60).map(|_| {
            (
                sample::adele_character(&mut rng, d, 12),
                sample::vector_bounded(&mut rng, d, 6, 6),
            )
        }),
        |(lam, x)| {
            let exact = lam.line_trivial(x).expect("dim ok");
            let sampled_trivial =
                [(1i64, 1i64), (1, 2), (1, 3), (1, 6), (1, 30)]
                    .iter()
                    .all(|&(n, dd)| {
                        let tx: Vec<Rat> = x
                            .iter()
                            .map(|v| v * Rat::new(n.into(), dd.into()))
                            .collect();
                        lam.eval(&tx).expect("dim ok").is_zero()
                    });
            // exact triviality must imply every sample is trivial, and a
            // nontrivial sample must refute exactness
            !(exact && !sampled_trivial)
        },
        |_| "sampled evaluations contradict the exact line test".to_string(),
    ));

    out.push(check_all(
        "group/associativity",
        seed,
        (0..60).map(|_| {
            (
                sample::group_element(&mut rng, system),
                sample::group_element(&mut rng, system),
                sample::group_element(&mut rng, system),
            )
        }),
        |(a, b, c)| multiply(&multiply(a, b), c) == multiply(a, &multiply(b, c)),
        |_| "group associativity failed".to_string(),
    ));

    out.push(check_all(
        "group/inverse-law",
        seed,
        (0..60).map(|_| sample::group_element(&mut rng, system)),
        |g| {
            multiply(g, &inverse(g)) == identity(system)
                && multiply(&inverse(g), g) == identity(system)
        },
        |_| "inverse law failed".to_string(),
    ));

    out.push(check_all(
        "group/conjugation-covariance",
        seed,
        (0..60).map(|_| {
            (
                sample::lie_vector(&mut rng, system),
                sample::levi_word(&mut rng, system, 3),
            )
        }),
        |(x, l)| {
            let conj = conjugate(&unipotent(system, x.clone()), l);
            conj.levi() == identity(system).levi()
                && conj.uni().coords() == l.levi().action().mul_vec(x.coords())
        },
        |_| "conjugation covariance failed".to_string(),
    ));

    out
}

fn duality_suite(system: &Arc<LeviSystem>, seed: u64) -> Vec<CheckReport> {
    let mut rng = sample::rng_from_seed(seed ^ 0x6475616c ^ 0xffff);
    let d = system.dim();
    let lambdas: Vec<AdeleCharacter> = (0..25)
        .map(|_| sample::adele_character(&mut rng, d, 20))
        .collect();
    let mut out = Vec::new();

    out.push(check_all(
        "chars/duality-p-equals-v-perp",
        seed,
        lambdas.iter(),
        |lam| duality_check(lam, system).expect("dims match"),
        |lam| format!("duality failed for {lam:?}"),
    ));

    out.push(check_all(
        "chars/p-oracle-fixed-center-of-quotient",
        seed,
        lambdas.iter(),
        |lam| {
            compute_p(lam, system).expect("dims match")
                == fixed_center_of_quotient(lam, system).expect("dims match")
        },
        |lam| format!("quotient oracle disagrees for {lam:?}"),
    ));

    out.push(check_all(
        "chars/k-is-p-meet-w",
        seed,
        lambdas.iter(),
        |lam| {
            let k = compute_k(lam, system).expect("dims match");
            let p = compute_p(lam, system).expect("dims match");
            let w = line_triviality_locus(lam, system).expect("dims match");
            k == intersect(&p, &w) && p.contains(&k)
        },
        |lam| format!("k-identity failed for {lam:?}"),
    ));

    out.push(check_all(
        "chars/coadjoint-invariance-of-k-p",
        seed,
        lambdas.iter().take(12).map(|lam| {
            let g = sample::levi_word(&mut rng, system, 3);
            (lam.clone(), g)
        }),
        |(lam, g)| {
            let moved = lam.coadjoint(g.levi().action()).expect("invertible");
            compute_k(lam, system).expect("dims") == compute_k(&moved, system).expect("dims")
                && compute_p(lam, system).expect("dims") == compute_p(&moved, system).expect("dims")
        },
        |_| "k/p not coadjoint-invariant".to_string(),
    ));

    out.push(check_all(
        "chars/quasi-orbit-coadjoint-invariance",
        seed,
        lambdas.iter().take(12).map(|lam| {
            let g = sample::levi_word(&mut rng, system, 3);
            (lam.clone(), g)
        }),
        |(lam, g)| {
            let moved = lam.coadjoint(g.levi().action()).expect("invertible");
            same_quasi_orbit(lam, &moved, system).expect("dims")
        },
        |_| "coadjoint move left the quasi-orbit".to_string(),
    ));

    out
}

/// Trace-axiom verification for one candidate; reused by the negative
/// controls in the test suites.
pub fn verify_trace_axioms(
    phi: &TraceFunction,
    seed: u64,
    conj_pairs: usize,
    gram_sets: usize,
    gram_size: usize,
) -> Vec<CheckReport> {
    let system = Arc::clone(phi.system());
    let mut rng = sample::rng_from_seed(seed ^ 0x74726163);
    let mut out = Vec::new();
    let name = phi.name().to_string();

    let normalized = phi.eval(&identity(&system)).is_one();
    out.push(if normalized {
        CheckReport::pass(&format!("traces/{name}/normalized"), 1, seed)
    } else {
        CheckReport::fail(&format!("traces/{name}/normalized"), 1, seed, "phi(e) != 1")
    });

    let pairs: Vec<(GroupElement, GroupElement)> = (0..conj_pairs)
        .map(|_| {
            (
                sample::group_element(&mut rng, &system),
                sample::group_element(&mut rng, &system),
            )
        })
        .collect();
    out.push(if central_check(phi, &pairs) {
        CheckReport::pass(&format!("traces/{name}/central"), pairs.len(), seed)
    } else {
        CheckReport::fail(
            &format!("traces/{name}/central"),
            pairs.len(),
            seed,
            "conjugation moved a value",
        )
    });

    let tol = Rat::new(1.into(), 1_000_000_000.into());
    let bits = default_psd_bits();
    let mut psd_ok = true;
    for _ in 0..gram_sets {
        let elems: Vec<GroupElement> = (0..gram_size)
            .map(|_| sample::group_element(&mut rng, &system))
            .collect();
        let gram = gram_matrix(phi, &elems);
        match psd_check(&gram, &tol, bits) {
            Ok(true) => {}
            _ => {
                psd_ok = false;
                break;
            }
        }
    }
    out.push(
        if psd_ok {
            CheckReport::pass(&format!("traces/{name}/gram-psd"), gram_sets, seed)
        } else {
            CheckReport::fail(
                &format!("traces/{name}/gram-psd"),
                gram_sets,
                seed,
                "a gram matrix is not positive semidefinite",
            )
        }
        .with_tolerance(&format!("min eigenvalue >= -1e-9 at {bits} bits")),
    );

    // Ad(G)-invariance of the unipotent restriction
    let mut ad_ok = true;
    for _ in 0..conj_pairs.min(100) {
        let x = sample::lie_vector(&mut rng, &system);
        let g = sample::levi_word(&mut rng, &system, 3);
        let moved = system
            .algebra()
            .vector(g.levi().action().mul_vec(x.coords()));
        if phi.eval(&unipotent(&system, moved)) != phi.eval(&unipotent(&system, x)) {
            ad_ok = false;
            break;
        }
    }
    out.push(if ad_ok {
        CheckReport::pass(
            &format!("traces/{name}/unipotent-ad-invariance"),
            conj_pairs.min(100),
            seed,
        )
    } else {
        CheckReport::fail(
            &format!("traces/{name}/unipotent-ad-invariance"),
            conj_pairs.min(100),
            seed,
            "restriction to the algebra is not Ad-invariant",
        )
    });

    out
}

fn traces_suite(system: &Arc<LeviSystem>, seed: u64) -> Vec<CheckReport> {
    let mut rng = sample::rng_from_seed(seed ^ 0x7068);
    let d = system.dim();
    let mut candidates: Vec<TraceFunction> = vec![TraceFunction::one(system)];
    // engine characters for a few sampled λ plus the trivial one
    let mut lambdas = vec![AdeleCharacter::zero(d)];
    lambdas.extend((0..3).map(|_| sample::adele_character(&mut rng, d, 12)));
    for lam in &lambdas {
        candidates.push(
            make_character(lam, LeviCharacter::ConstantOne, system)
                .expect("constant-one always admissible"),
        );
        let tilde = TildeCentralCharacter::trivial(system);
        candidates.push(
            make_character(lam, LeviCharacter::Tilde(tilde), system)
                .expect("trivial sub-table always admissible"),
        );
    }
    // the sign character of a ±I table on λ = 0, when the table has one
    if system.central().index_of("-I").is_some() {
        let sign = TildeCentralCharacter::sign(system).expect("table has -I");
        candidates.push(
            make_character(&AdeleCharacter::zero(d), LeviCharacter::Tilde(sign), system)
                .expect("lambda = 0 admits every table character"),
        );
    }

    let mut out = Vec::new();
    for (i, phi) in candidates.iter().enumerate() {
        out.extend(verify_trace_axioms(
            phi,
            seed.wrapping_add(i as u64),
            60,
            4,
            5,
        ));
    }
    out
}
