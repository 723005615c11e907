//! The semidirect product `G = L ⋉ U`.
//!
//! The Levi part is given by a finite list of nilpotent derivation
//! generators `N_i` (the infinitesimal generators of the one-parameter
//! subgroups `t ↦ exp(tN_i)`) together with a finite table of labeled
//! central elements. An element of `L` is a `(label, action)` pair; the
//! label carries exactly the information the action forgets when the kernel
//! of `L → GL(𝔲)` is nontrivial, and equality of elements is equality of
//! the pair. The unipotent part lives in exponential coordinates with the
//! BCH product.

use std::fmt;
use std::sync::Arc;

use num::One;

use crate::nilpotent::{bch, exp_nilpotent, is_automorphism, is_derivation, LieAlgebra, LieVector};
use crate::rat::{format_rat, Rat};
use crate::ratlinalg::RatMatrix;

/// Finite group of labeled central automorphisms.
///
/// `mult[i][j]` is the index of the product of labels `i` and `j`; the
/// identity label must be present and the table must be closed with
/// inverses. Actions must be a homomorphic image of the label group.
#[derive(Clone, Debug)]
pub struct CentralTable {
    labels: Vec<String>,
    actions: Vec<RatMatrix>,
    mult: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl CentralTable {
    /// The table containing only the identity.
    pub fn trivial(dim: usize) -> Self {
        Self {
            labels: vec!["I".to_string()],
            actions: vec![RatMatrix::identity(dim)],
            mult: vec![vec![0]],
            identity: 0,
            inverse: vec![0],
        }
    }

    /// Builds and checks the group axioms; `table[i][j]` holds the label of
    /// the product of labels `i` and `j`.
    pub fn new(
        labels: Vec<String>,
        actions: Vec<RatMatrix>,
        table: &[Vec<String>],
    ) -> Result<Self, String> {
        let n = labels.len();
        if n == 0 {
            return Err("table must contain the identity".into());
        }
        if actions.len() != n || table.len() != n || table.iter().any(|r| r.len() != n) {
            return Err("labels, actions and table sizes disagree".into());
        }
        let index_of = |l: &str| labels.iter().position(|x| x == l);
        let mut mult = vec![vec![0usize; n]; n];
        for i in 0..n {
            for j in 0..n {
                mult[i][j] = index_of(&table[i][j])
                    .ok_or_else(|| format!("product label {:?} not in table", table[i][j]))?;
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|i| mult[e][i] == i && mult[i][e] == i))
            .ok_or("table has no identity")?;
        if !actions[identity]
            .clone()
            .eq(&RatMatrix::identity(actions[identity].rows()))
        {
            return Err("identity label must act as the identity matrix".into());
        }
        let mut inverse = vec![usize::MAX; n];
        for i in 0..n {
            inverse[i] = (0..n)
                .find(|&j| mult[i][j] == identity && mult[j][i] == identity)
                .ok_or_else(|| format!("label {:?} has no inverse", labels[i]))?;
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if mult[mult[i][j]][k] != mult[i][mult[j][k]] {
                        return Err("table is not associative".into());
                    }
                }
            }
        }
        // actions must be compatible with the label multiplication
        for i in 0..n {
            for j in 0..n {
                if actions[i].mul(&actions[j]) != actions[mult[i][j]] {
                    return Err(format!(
                        "action of {:?}·{:?} is not the product of the actions",
                        labels[i], labels[j]
                    ));
                }
            }
        }
        Ok(Self {
            labels,
            actions,
            mult,
            identity,
            inverse,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn identity_index(&self) -> usize {
        self.identity
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn action(&self, i: usize) -> &RatMatrix {
        &self.actions[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|x| x == label)
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.mult[i][j]
    }

    pub fn inv(&self, i: usize) -> usize {
        self.inverse[i]
    }
}

/// The Levi action on a nilpotent algebra: one-parameter generators plus the
/// central table, validated together.
pub struct LeviSystem {
    algebra: Arc<LieAlgebra>,
    one_param_gens: Vec<RatMatrix>,
    central: CentralTable,
}

impl fmt::Debug for LeviSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LeviSystem(dim {}, {} one-param gens, central table of order {})",
            self.algebra.dim(),
            self.one_param_gens.len(),
            self.central.len()
        )
    }
}

impl LeviSystem {
    pub fn new(
        algebra: Arc<LieAlgebra>,
        one_param_gens: Vec<RatMatrix>,
        central: CentralTable,
    ) -> Result<Arc<Self>, Vec<String>> {
        let d = algebra.dim();
        let mut problems = Vec::new();
        for (i, n) in one_param_gens.iter().enumerate() {
            if !n.is_square() || n.rows() != d {
                problems.push(format!("generator {i} has the wrong shape"));
                continue;
            }
            if !n.is_nilpotent() {
                problems.push(format!("generator {i} is not nilpotent"));
            }
            if !is_derivation(n, &algebra) {
                problems.push(format!("generator {i} is not a derivation"));
            }
        }
        for c in 0..central.len() {
            let a = central.action(c);
            if !a.is_square() || a.rows() != d {
                problems.push(format!(
                    "central action {:?} has the wrong shape",
                    central.label(c)
                ));
                continue;
            }
            if !is_automorphism(a, &algebra) {
                problems.push(format!(
                    "central action {:?} is not an algebra automorphism",
                    central.label(c)
                ));
            }
            for (i, n) in one_param_gens.iter().enumerate() {
                if n.is_square() && n.rows() == d && a.mul(n) != n.mul(a) {
                    problems.push(format!(
                        "central action {:?} does not commute with generator {i}",
                        central.label(c)
                    ));
                }
            }
        }
        if problems.is_empty() {
            Ok(Arc::new(Self {
                algebra,
                one_param_gens,
                central,
            }))
        } else {
            Err(problems)
        }
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn one_param_gens(&self) -> &[RatMatrix] {
        &self.one_param_gens
    }

    pub fn central(&self) -> &CentralTable {
        &self.central
    }
}

/// An element of `L`: central label plus its total action on the algebra;
/// the word records how it was built (informational only).
#[derive(Clone, Debug)]
pub struct LeviElement {
    label: usize,
    action: RatMatrix,
    word: Vec<(usize, Rat)>,
}

impl PartialEq for LeviElement {
    fn eq(&self, other: &Self) -> bool {
        self.label == other.label && self.action == other.action
    }
}
impl Eq for LeviElement {}

impl LeviElement {
    pub fn label(&self) -> usize {
        self.label
    }

    pub fn action(&self) -> &RatMatrix {
        &self.action
    }

    pub fn word(&self) -> &[(usize, Rat)] {
        &self.word
    }
}

/// `g = l·exp(x)` with the unipotent part on the right.
#[derive(Clone)]
pub struct GroupElement {
    system: Arc<LeviSystem>,
    levi: LeviElement,
    uni: LieVector,
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.system, &other.system) && self.levi == other.levi && self.uni == other.uni
    }
}
impl Eq for GroupElement {}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {:?})", self.describe_levi(), self.uni)
    }
}

impl GroupElement {
    pub fn system(&self) -> &Arc<LeviSystem> {
        &self.system
    }

    pub fn levi(&self) -> &LeviElement {
        &self.levi
    }

    pub fn uni(&self) -> &LieVector {
        &self.uni
    }

    pub fn describe_levi(&self) -> String {
        let label = self.system.central().label(self.levi.label);
        if self.levi.word.is_empty() {
            format!("central {label}")
        } else {
            let word: Vec<String> = self
                .levi
                .word
                .iter()
                .map(|(i, t)| format!("exp({}·N{})", format_rat(t), i))
                .collect();
            format!("{label}·{}", word.join("·"))
        }
    }
}

pub fn identity(system: &Arc<LeviSystem>) -> GroupElement {
    let e = system.central().identity_index();
    GroupElement {
        system: Arc::clone(system),
        levi: LeviElement {
            label: e,
            action: RatMatrix::identity(system.dim()),
            word: Vec::new(),
        },
        uni: system.algebra().zero_vector(),
    }
}

/// The one-parameter element `exp(t·N_i)` (identity label).
pub fn one_param(system: &Arc<LeviSystem>, i: usize, t: &Rat) -> GroupElement {
    assert!(
        i < system.one_param_gens().len(),
        "generator index out of range"
    );
    let action =
        exp_nilpotent(&system.one_param_gens()[i], t).expect("system generators are nilpotent");
    let word = if t == &Rat::from_integer(0.into()) {
        Vec::new()
    } else {
        vec![(i, t.clone())]
    };
    GroupElement {
        system: Arc::clone(system),
        levi: LeviElement {
            label: system.central().identity_index(),
            action,
            word,
        },
        uni: system.algebra().zero_vector(),
    }
}

/// The table element with the given label index.
pub fn central_element(system: &Arc<LeviSystem>, label: usize) -> GroupElement {
    assert!(label < system.central().len(), "label index out of range");
    GroupElement {
        system: Arc::clone(system),
        levi: LeviElement {
            label,
            action: system.central().action(label).clone(),
            word: Vec::new(),
        },
        uni: system.algebra().zero_vector(),
    }
}

/// The unipotent element `exp(x)`.
pub fn unipotent(system: &Arc<LeviSystem>, x: LieVector) -> GroupElement {
    assert!(
        Arc::ptr_eq(x.algebra(), system.algebra()),
        "vector belongs to a different algebra"
    );
    let mut g = identity(system);
    g.uni = x;
    g
}

pub fn from_parts(system: &Arc<LeviSystem>, levi: LeviElement, uni: LieVector) -> GroupElement {
    assert!(
        Arc::ptr_eq(uni.algebra(), system.algebra()),
        "vector belongs to a different algebra"
    );
    GroupElement {
        system: Arc::clone(system),
        levi,
        uni,
    }
}

fn assert_same_system(a: &GroupElement, b: &GroupElement) {
    assert!(
        Arc::ptr_eq(&a.system, &b.system),
        "elements belong to different systems"
    );
}

/// `(l₁, x₁)(l₂, x₂) = (l₁l₂, bch(α(l₂)⁻¹·x₁, x₂))`, from
/// `l₁ exp(x₁) l₂ exp(x₂) = l₁l₂ exp(Ad(l₂⁻¹)x₁) exp(x₂)`.
pub fn multiply(a: &GroupElement, b: &GroupElement) -> GroupElement {
    assert_same_system(a, b);
    let sys = &a.system;
    let table = sys.central();
    let label = table.mul(a.levi.label, b.levi.label);
    let action = a.levi.action.mul(&b.levi.action);
    let mut word = a.levi.word.clone();
    word.extend(b.levi.word.iter().cloned());
    let b_inv = b
        .levi
        .action
        .inverse()
        .expect("levi actions are invertible");
    let moved = sys.algebra().vector(b_inv.mul_vec(a.uni.coords()));
    GroupElement {
        system: Arc::clone(sys),
        levi: LeviElement {
            label,
            action,
            word,
        },
        uni: bch(&moved, &b.uni),
    }
}

/// `(l, x)⁻¹ = (l⁻¹, −α(l)·x)`.
pub fn inverse(a: &GroupElement) -> GroupElement {
    let sys = &a.system;
    let table = sys.central();
    let label = table.inv(a.levi.label);
    let action = a
        .levi
        .action
        .inverse()
        .expect("levi actions are invertible");
    let word = a
        .levi
        .word
        .iter()
        .rev()
        .map(|(i, t)| (*i, -t.clone()))
        .collect();
    let uni = sys
        .algebra()
        .vector(a.levi.action.mul_vec(a.uni.coords()))
        .neg();
    GroupElement {
        system: Arc::clone(sys),
        levi: LeviElement {
            label,
            action,
            word,
        },
        uni,
    }
}

/// `h·a·h⁻¹`.
pub fn conjugate(a: &GroupElement, h: &GroupElement) -> GroupElement {
    multiply(&multiply(h, a), &inverse(h))
}

/// `a·b·a⁻¹·b⁻¹`.
pub fn commutator(a: &GroupElement, b: &GroupElement) -> GroupElement {
    multiply(&multiply(a, b), &multiply(&inverse(a), &inverse(b)))
}

/// Block-diagonal direct sum of two systems, with the product central table.
/// Labels of the summands are joined with `|`.
#[derive(Clone)]
pub struct DirectSum {
    pub system: Arc<LeviSystem>,
    left: Arc<LeviSystem>,
    right: Arc<LeviSystem>,
}

pub fn direct_sum(s1: &Arc<LeviSystem>, s2: &Arc<LeviSystem>) -> DirectSum {
    let d1 = s1.dim();
    let d2 = s2.dim();
    let d = d1 + d2;
    let a1 = s1.algebra();
    let a2 = s2.algebra();
    let mut c = vec![Rat::from_integer(0.into()); d * d * d];
    for i in 0..d1 {
        for j in 0..d1 {
            for k in 0..d1 {
                c[i * d * d + j * d + k] = a1.structure_constant(i, j, k).clone();
            }
        }
    }
    for i in 0..d2 {
        for j in 0..d2 {
            for k in 0..d2 {
                c[(d1 + i) * d * d + (d1 + j) * d + (d1 + k)] =
                    a2.structure_constant(i, j, k).clone();
            }
        }
    }
    let algebra = LieAlgebra::new(d, c).expect("direct sum of valid algebras is valid");

    let embed_left = |m: &RatMatrix| {
        RatMatrix::from_fn(d, d, |r, cc| {
            if r < d1 && cc < d1 {
                m.get(r, cc).clone()
            } else {
                Rat::from_integer(0.into())
            }
        })
    };
    let embed_right = |m: &RatMatrix| {
        RatMatrix::from_fn(d, d, |r, cc| {
            if r >= d1 && cc >= d1 {
                m.get(r - d1, cc - d1).clone()
            } else {
                Rat::from_integer(0.into())
            }
        })
    };
    let block_diag = |m1: &RatMatrix, m2: &RatMatrix| {
        RatMatrix::from_fn(d, d, |r, cc| {
            if r < d1 && cc < d1 {
                m1.get(r, cc).clone()
            } else if r >= d1 && cc >= d1 {
                m2.get(r - d1, cc - d1).clone()
            } else {
                Rat::from_integer(0.into())
            }
        })
    };

    let mut gens: Vec<RatMatrix> = s1.one_param_gens().iter().map(embed_left).collect();
    gens.extend(s2.one_param_gens().iter().map(embed_right));

    let t1 = s1.central();
    let t2 = s2.central();
    let mut labels = Vec::new();
    let mut actions = Vec::new();
    for i in 0..t1.len() {
        for j in 0..t2.len() {
            labels.push(format!("{}|{}", t1.label(i), t2.label(j)));
            actions.push(block_diag(t1.action(i), t2.action(j)));
        }
    }
    let n1 = t1.len();
    let n2 = t2.len();
    let mut table = vec![vec![String::new(); n1 * n2]; n1 * n2];
    for i1 in 0..n1 {
        for j1 in 0..n2 {
            for i2 in 0..n1 {
                for j2 in 0..n2 {
                    let a = i1 * n2 + j1;
                    let b = i2 * n2 + j2;
                    table[a][b] =
                        format!("{}|{}", t1.label(t1.mul(i1, i2)), t2.label(t2.mul(j1, j2)));
                }
            }
        }
    }
    let central =
        CentralTable::new(labels, actions, &table).expect("product of valid tables is valid");
    let system =
        LeviSystem::new(algebra, gens, central).expect("direct sum of valid systems is valid");
    DirectSum {
        system,
        left: Arc::clone(s1),
        right: Arc::clone(s2),
    }
}

impl DirectSum {
    /// Splits an element of the sum into its two block components. Every
    /// constructible element is block-diagonal with a pair label.
    pub fn split(&self, g: &GroupElement) -> (GroupElement, GroupElement) {
        assert!(
            Arc::ptr_eq(&g.system, &self.system),
            "element not in this direct sum"
        );
        let d1 = self.left.dim();
        let d2 = self.right.dim();
        let label = self.system.central().label(g.levi.label);
        let (l1, l2) = label.split_once('|').expect("direct-sum labels are pairs");
        let a1 = RatMatrix::from_fn(d1, d1, |r, c| g.levi.action.get(r, c).clone());
        let a2 = RatMatrix::from_fn(d2, d2, |r, c| g.levi.action.get(d1 + r, d1 + c).clone());
        let x1 = self.left.algebra().vector(g.uni.coords()[..d1].to_vec());
        let x2 = self.right.algebra().vector(g.uni.coords()[d1..].to_vec());
        let g1 = from_parts(
            &self.left,
            LeviElement {
                label: self.left.central().index_of(l1).expect("left label exists"),
                action: a1,
                word: Vec::new(),
            },
            x1,
        );
        let g2 = from_parts(
            &self.right,
            LeviElement {
                label: self
                    .right
                    .central()
                    .index_of(l2)
                    .expect("right label exists"),
                action: a2,
                word: Vec::new(),
            },
            x2,
        );
        (g1, g2)
    }

    /// Embeds a pair of elements block-diagonally.
    pub fn embed(&self, g1: &GroupElement, g2: &GroupElement) -> GroupElement {
        assert!(
            Arc::ptr_eq(&g1.system, &self.left),
            "left element not in left system"
        );
        assert!(
            Arc::ptr_eq(&g2.system, &self.right),
            "right element not in right system"
        );
        let d1 = self.left.dim();
        let d2 = self.right.dim();
        let d = d1 + d2;
        let label_name = format!(
            "{}|{}",
            self.left.central().label(g1.levi.label),
            self.right.central().label(g2.levi.label)
        );
        let action = RatMatrix::from_fn(d, d, |r, c| {
            if r < d1 && c < d1 {
                g1.levi.action.get(r, c).clone()
            } else if r >= d1 && c >= d1 {
                g2.levi.action.get(r - d1, c - d1).clone()
            } else {
                Rat::from_integer(0.into())
            }
        });
        let mut coords = g1.uni.coords().to_vec();
        coords.extend_from_slice(g2.uni.coords());
        from_parts(
            &self.system,
            LeviElement {
                label: self
                    .system
                    .central()
                    .index_of(&label_name)
                    .expect("pair label exists"),
                action,
                word: Vec::new(),
            },
            self.system.algebra().vector(coords),
        )
    }

    pub fn left(&self) -> &Arc<LeviSystem> {
        &self.left
    }

    pub fn right(&self) -> &Arc<LeviSystem> {
        &self.right
    }
}

/// `exp(tE_{ij})`-style elementary matrix with a 1 at `(i, j)`.
pub fn elementary(d: usize, i: usize, j: usize) -> RatMatrix {
    let mut m = RatMatrix::zero(d, d);
    m.set(i, j, Rat::one());
    m
}
