//! Stock example systems and their expected classification fixtures.
//!
//! Three families: a quasi-simple group acting irreducibly on an abelian
//! radical, the symplectic group on a Heisenberg radical, and `SL_n` on the
//! free 2-step radical `V ⊕ ∧²V`. Each fixture carries labeled characters
//! `λ` and the exact `(dim k, dim p, membership)` table the engine must
//! reproduce.

use std::sync::Arc;

use num::One;

use crate::adelic::{AdeleCharacter, Place};
use crate::error::{Error, Result};
use crate::group::{elementary, CentralTable, LeviSystem};
use crate::nilpotent::{wedge_pairs, LieAlgebra};
use crate::rat::{rat_int, Rat};
use crate::ratlinalg::RatMatrix;

/// How a labeled Levi element is rebuilt when a fixture is replayed.
#[derive(Clone, Debug, PartialEq)]
pub enum SampleElement {
    Central(String),
    OneParam(usize, Rat),
}

/// Expected classification facts for one labeled `λ`.
#[derive(Clone, Debug)]
pub struct ExpectedCase {
    pub lambda_name: String,
    pub k_dim: usize,
    pub p_dim: usize,
    pub memberships: Vec<(SampleElement, bool)>,
    pub character_desc: String,
}

pub struct CatalogFixture {
    pub name: String,
    pub system: Arc<LeviSystem>,
    pub basis_names: Vec<String>,
    pub lambdas: Vec<(String, AdeleCharacter)>,
    pub expected: Vec<ExpectedCase>,
}

impl CatalogFixture {
    pub fn lambda(&self, name: &str) -> &AdeleCharacter {
        &self
            .lambdas
            .iter()
            .find(|(n, _)| n == name)
            .expect("labeled lambda exists")
            .1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AbelianRep {
    Standard,
    SymK(usize),
}

fn plus_minus_table(dim: usize, minus_action: RatMatrix) -> CentralTable {
    CentralTable::new(
        vec!["I".into(), "-I".into()],
        vec![RatMatrix::identity(dim), minus_action],
        &[vec!["I".into(), "-I".into()], vec!["-I".into(), "I".into()]],
    )
    .expect("±I table is a group")
}

/// `SL_2(Q) ⋉ V(Q)` for the standard or `Sym^k` representation.
///
/// The table always carries `−I` as an explicit labeled element (it acts by
/// `(−1)^k`); the sign character of the table is what realizes `ε`.
pub fn abelian_radical_system(rep: AbelianRep) -> CatalogFixture {
    let (name, dim, e_gen, f_gen, minus) = match rep {
        AbelianRep::Standard => {
            let e = elementary(2, 0, 1);
            let f = elementary(2, 1, 0);
            let minus = RatMatrix::identity(2).scale(&rat_int(-1));
            ("abelian-sl2".to_string(), 2, e, f, minus)
        }
        AbelianRep::SymK(k) => {
            assert!(k >= 1, "sym_k needs k >= 1");
            let dim = k + 1;
            // basis m_i = u^{k−i} v^i: e·m_i = i m_{i−1}, f·m_i = (k−i) m_{i+1}
            let mut e = RatMatrix::zero(dim, dim);
            let mut f = RatMatrix::zero(dim, dim);
            for i in 0..dim {
                if i >= 1 {
                    e.set(i - 1, i, rat_int(i as i64));
                }
                if i + 1 < dim {
                    f.set(i + 1, i, rat_int((k - i) as i64));
                }
            }
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let minus = RatMatrix::identity(dim).scale(&rat_int(sign));
            (format!("abelian-sl2-sym{k}"), dim, e, f, minus)
        }
    };
    let algebra = LieAlgebra::abelian(dim);
    let central = plus_minus_table(dim, minus);
    let system = LeviSystem::new(algebra, vec![e_gen, f_gen], central)
        .expect("abelian radical system is valid");

    let mut e1_star = vec![Rat::from_integer(0.into()); dim];
    e1_star[0] = Rat::one();
    let mut dyadic = vec![Rat::from_integer(0.into()); dim];
    dyadic[0] = Rat::new(1.into(), 2.into());

    let lambdas = vec![
        ("zero".to_string(), AdeleCharacter::zero(dim)),
        ("e1-star".to_string(), AdeleCharacter::archimedean(e1_star)),
        (
            "e1-star-2adic".to_string(),
            AdeleCharacter::new(dim, vec![(Place::Prime(2), dyadic)]).expect("valid character"),
        ),
    ];

    // for Sym^k with k even, −I acts trivially and stays in L_λ even when k = 0
    let minus_in_f = matches!(rep, AbelianRep::SymK(k) if k % 2 == 0);
    let nontrivial_case = |lname: &str| ExpectedCase {
        lambda_name: lname.to_string(),
        k_dim: 0,
        p_dim: 0,
        memberships: vec![
            (SampleElement::Central("I".into()), true),
            (SampleElement::Central("-I".into()), minus_in_f),
            (SampleElement::OneParam(0, Rat::one()), false),
        ],
        character_desc: "delta_e (trivial extension from L_lambda = F)".to_string(),
    };
    let expected = vec![
        ExpectedCase {
            lambda_name: "zero".to_string(),
            k_dim: dim,
            p_dim: dim,
            memberships: vec![
                (SampleElement::Central("I".into()), true),
                (SampleElement::Central("-I".into()), true),
                (SampleElement::OneParam(0, Rat::one()), true),
            ],
            character_desc: "lifted Char(SL_2(Q)): 1_G and the sign character of ±I".to_string(),
        },
        nontrivial_case("e1-star"),
        nontrivial_case("e1-star-2adic"),
    ];

    let basis_names = (1..=dim).map(|i| format!("e{i}")).collect();
    CatalogFixture {
        name,
        system,
        basis_names,
        lambdas,
        expected,
    }
}

/// Nilpotent generators of `sp_{2n}` acting on `(x_1..x_n, y_1..y_n)`:
/// `A`-type `[[E_ij, 0], [0, −E_ji]]` for `i ≠ j`, and the long-root
/// blocks `[[0, E_ii], [0, 0]]`, `[[0, 0], [E_ii, 0]]`. Brackets of these
/// span all of `sp_{2n}`, which is all the invariance computations need.
fn symplectic_generators(n: usize) -> Vec<RatMatrix> {
    let d = 2 * n;
    let mut gens = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut m = RatMatrix::zero(d, d);
            m.set(i, j, Rat::one());
            m.set(n + j, n + i, -Rat::one());
            gens.push(m);
        }
    }
    for i in 0..n {
        let mut b = RatMatrix::zero(d, d);
        b.set(i, n + i, Rat::one());
        gens.push(b);
        let mut c = RatMatrix::zero(d, d);
        c.set(n + i, i, Rat::one());
        gens.push(c);
    }
    gens
}

/// `Sp_{2n}(Q) ⋉ H_{2n+1}(Q)`; basis `x_1..x_n, y_1..y_n, z`.
pub fn heisenberg_system(n: usize) -> CatalogFixture {
    assert!(n >= 1, "heisenberg system needs n >= 1");
    let d = 2 * n + 1;
    let algebra = LieAlgebra::heisenberg(n);
    let extend = |m: &RatMatrix| {
        RatMatrix::from_fn(d, d, |r, c| {
            if r < 2 * n && c < 2 * n {
                m.get(r, c).clone()
            } else {
                Rat::from_integer(0.into())
            }
        })
    };
    let gens: Vec<RatMatrix> = symplectic_generators(n).iter().map(extend).collect();
    // −I ∈ Sp negates the symplectic coordinates and fixes the center
    let minus = RatMatrix::from_fn(d, d, |r, c| {
        if r != c {
            Rat::from_integer(0.into())
        } else if r < 2 * n {
            -Rat::one()
        } else {
            Rat::one()
        }
    });
    let central = plus_minus_table(d, minus);
    let system = LeviSystem::new(algebra, gens, central).expect("heisenberg system is valid");

    let unit = |i: usize| {
        let mut v = vec![Rat::from_integer(0.into()); d];
        v[i] = Rat::one();
        v
    };
    let lambdas = vec![
        ("zero".to_string(), AdeleCharacter::zero(d)),
        (
            "z-star".to_string(),
            AdeleCharacter::archimedean(unit(2 * n)),
        ),
        ("x1-star".to_string(), AdeleCharacter::archimedean(unit(0))),
    ];
    let expected = vec![
        ExpectedCase {
            lambda_name: "zero".to_string(),
            k_dim: d,
            p_dim: d,
            memberships: vec![
                (SampleElement::Central("I".into()), true),
                (SampleElement::Central("-I".into()), true),
                (SampleElement::OneParam(0, Rat::one()), true),
            ],
            character_desc: "lifted Char(Sp_2n(Q)): 1_G, 1_H and ε".to_string(),
        },
        ExpectedCase {
            lambda_name: "z-star".to_string(),
            k_dim: 0,
            p_dim: 1,
            memberships: vec![
                (SampleElement::Central("I".into()), true),
                (SampleElement::Central("-I".into()), false),
                (SampleElement::OneParam(0, Rat::one()), false),
            ],
            character_desc: "tilde-chi_lambda supported on the center of H".to_string(),
        },
        ExpectedCase {
            lambda_name: "x1-star".to_string(),
            k_dim: 1,
            p_dim: 1,
            memberships: vec![
                (SampleElement::Central("I".into()), true),
                (SampleElement::Central("-I".into()), false),
                (SampleElement::OneParam(0, Rat::one()), false),
            ],
            character_desc: "indicator of the center of H (chi trivial on p = z)".to_string(),
        },
    ];

    let mut basis_names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    basis_names.extend((1..=n).map(|i| format!("y{i}")));
    basis_names.push("z".to_string());
    CatalogFixture {
        name: format!("heisenberg-{n}"),
        system,
        basis_names,
        lambdas,
        expected,
    }
}

/// `SL_n(Q) ⋉ (V ⊕ ∧²V)` for `n ≥ 3`; basis `v_1..v_n`, then `w_ij`
/// (`i < j`). The derivations are the elementary `E_ij` acting diagonally on
/// `V` and `∧²V`.
pub fn free_nilpotent_system(n: usize) -> Result<CatalogFixture> {
    if n < 3 {
        return Err(Error::Parse(format!(
            "free nilpotent catalog system needs n >= 3 (n = 2 is heisenberg-1), got {n}"
        )));
    }
    let pairs = wedge_pairs(n);
    let d = n + pairs.len();
    let algebra = LieAlgebra::free_two_step(n);

    // wedge coordinates of v_a ∧ v_b for arbitrary a, b
    let wedge_coord = |a: usize, b: usize| -> Option<(usize, Rat)> {
        if a == b {
            None
        } else if a < b {
            Some((pairs.iter().position(|&p| p == (a, b)).unwrap(), Rat::one()))
        } else {
            Some((
                pairs.iter().position(|&p| p == (b, a)).unwrap(),
                -Rat::one(),
            ))
        }
    };
    let mut gens = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            // E_ij: v_j ↦ v_i on V; w_kl ↦ (E_ij v_k)∧v_l + v_k∧(E_ij v_l)
            let mut m = RatMatrix::zero(d, d);
            m.set(i, j, Rat::one());
            for (idx, &(k, l)) in pairs.iter().enumerate() {
                if k == j {
                    if let Some((t, s)) = wedge_coord(i, l) {
                        let v = m.get(n + t, n + idx) + &s;
                        m.set(n + t, n + idx, v);
                    }
                }
                if l == j {
                    if let Some((t, s)) = wedge_coord(k, i) {
                        let v = m.get(n + t, n + idx) + &s;
                        m.set(n + t, n + idx, v);
                    }
                }
            }
            gens.push(m);
        }
    }

    let central = if n.is_multiple_of(2) {
        // −I ∈ SL_n for even n: −1 on V, +1 on ∧²V
        let minus = RatMatrix::from_fn(d, d, |r, c| {
            if r != c {
                Rat::from_integer(0.into())
            } else if r < n {
                -Rat::one()
            } else {
                Rat::one()
            }
        });
        plus_minus_table(d, minus)
    } else {
        // the center of SL_n(Q) is trivial for odd n
        CentralTable::trivial(d)
    };
    let system = LeviSystem::new(algebra, gens, central).expect("free nilpotent system is valid");

    let unit = |i: usize| {
        let mut v = vec![Rat::from_integer(0.into()); d];
        v[i] = Rat::one();
        v
    };
    let z_dim = pairs.len();
    let lambdas = vec![
        ("zero".to_string(), AdeleCharacter::zero(d)),
        ("v1-star".to_string(), AdeleCharacter::archimedean(unit(0))),
        ("w12-star".to_string(), AdeleCharacter::archimedean(unit(n))),
    ];
    let expected = vec![
        ExpectedCase {
            lambda_name: "zero".to_string(),
            k_dim: d,
            p_dim: d,
            memberships: vec![
                (SampleElement::Central("I".into()), true),
                (SampleElement::OneParam(0, Rat::one()), true),
            ],
            character_desc: "lifted Char(L): 1_G (center of SL_3(Q) is trivial)".to_string(),
        },
        ExpectedCase {
            lambda_name: "v1-star".to_string(),
            k_dim: z_dim,
            p_dim: z_dim,
            memberships: vec![
                (SampleElement::Central("I".into()), true),
                (SampleElement::OneParam(0, Rat::one()), false),
            ],
            character_desc: "indicator of exp(∧²V)".to_string(),
        },
        ExpectedCase {
            lambda_name: "w12-star".to_string(),
            k_dim: 0,
            p_dim: 0,
            memberships: vec![
                (SampleElement::Central("I".into()), true),
                (SampleElement::OneParam(0, Rat::one()), false),
            ],
            character_desc: "delta_e".to_string(),
        },
    ];

    let mut basis_names: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
    basis_names.extend(pairs.iter().map(|&(i, j)| format!("w{}{}", i + 1, j + 1)));
    Ok(CatalogFixture {
        name: format!("free-{n}"),
        system,
        basis_names,
        lambdas,
        expected,
    })
}

/// Fixture by CLI name.
pub fn by_name(name: &str) -> Result<CatalogFixture> {
    match name {
        "abelian-sl2" => Ok(abelian_radical_system(AbelianRep::Standard)),
        "heisenberg-1" => Ok(heisenberg_system(1)),
        "heisenberg-2" => Ok(heisenberg_system(2)),
        "free-3" => free_nilpotent_system(3),
        other => Err(Error::UnknownCatalog(other.to_string())),
    }
}

pub const CATALOG_NAMES: [&str; 4] = ["abelian-sl2", "heisenberg-1", "heisenberg-2", "free-3"];
