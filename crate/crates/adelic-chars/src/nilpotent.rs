//! Nilpotent Lie algebras over `Q` from structure constants.
//!
//! An algebra is a rational 3-tensor `c` with `[X_i, X_j] = Σ_k c[i][j][k] X_k`,
//! validated for antisymmetry, the Jacobi identity and nilpotency. Vectors
//! double as group elements of the associated unipotent group in exponential
//! coordinates; the group law is the Baker-Campbell-Hausdorff polynomial,
//! computed by Dynkin-formula summation truncated at the nilpotency class.

use std::fmt;
use std::sync::Arc;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::rat::{factorial, format_rat, Rat};
use crate::ratlinalg::{intersect, preimage, RatMatrix, Subspace};

/// One sparse bracket `[X_i, X_j] = Σ v_k X_k`, given for `i < j`.
pub type SparseBracket = (usize, usize, Vec<(usize, Rat)>);

/// A violated axiom found by [`LieAlgebra::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Antisymmetry { i: usize, j: usize, k: usize },
    Jacobi { i: usize, j: usize, k: usize },
    NotNilpotent,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Antisymmetry { i, j, k } => {
                write!(f, "antisymmetry fails at (i={i}, j={j}, k={k})")
            }
            Violation::Jacobi { i, j, k } => {
                write!(
                    f,
                    "Jacobi identity fails on basis triple (i={i}, j={j}, k={k})"
                )
            }
            Violation::NotNilpotent => write!(f, "lower central series does not reach zero"),
        }
    }
}

/// Nilpotent Lie algebra given by structure constants; `nil_class` is
/// computed at construction, never trusted from input.
#[derive(Clone)]
pub struct LieAlgebra {
    dim: usize,
    c: Vec<Rat>, // c[i][j][k] at i*dim*dim + j*dim + k
    nil_class: usize,
}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieAlgebra(dim {}, class {})", self.dim, self.nil_class)
    }
}

impl LieAlgebra {
    /// Validates the tensor and computes the nilpotency class.
    pub fn new(dim: usize, c: Vec<Rat>) -> std::result::Result<Arc<Self>, Vec<Violation>> {
        assert_eq!(
            c.len(),
            dim * dim * dim,
            "structure tensor must have dim^3 entries"
        );
        let raw = LieAlgebra {
            dim,
            c,
            nil_class: 0,
        };
        let violations = raw.validate();
        if !violations.is_empty() {
            return Err(violations);
        }
        let class = raw.compute_nil_class().expect("nilpotency already checked");
        Ok(Arc::new(LieAlgebra {
            nil_class: class,
            ..raw
        }))
    }

    /// Builds the tensor from sparse brackets `[X_i, X_j] = Σ v_k X_k` given
    /// for `i < j` only; antisymmetric counterparts are filled in.
    pub fn from_sparse_brackets(
        dim: usize,
        brackets: &[SparseBracket],
    ) -> std::result::Result<Arc<Self>, Vec<Violation>> {
        let mut c = vec![Rat::zero(); dim * dim * dim];
        for (i, j, terms) in brackets {
            assert!(i < j, "sparse brackets are given for i < j only");
            for (k, v) in terms {
                c[i * dim * dim + j * dim + k] = v.clone();
                c[j * dim * dim + i * dim + k] = -v.clone();
            }
        }
        Self::new(dim, c)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nil_class(&self) -> usize {
        self.nil_class
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Rat {
        &self.c[i * self.dim * self.dim + j * self.dim + k]
    }

    /// Reports every failed antisymmetry/Jacobi identity and non-nilpotency.
    pub fn validate(&self) -> Vec<Violation> {
        let d = self.dim;
        let mut out = Vec::new();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let lhs = self.structure_constant(i, j, k);
                    let rhs = -self.structure_constant(j, i, k).clone();
                    if *lhs != rhs {
                        out.push(Violation::Antisymmetry { i, j, k });
                    }
                }
            }
        }
        if !out.is_empty() {
            // Jacobi on a non-antisymmetric tensor would double-report
            return out;
        }
        for i in 0..d {
            for j in (i + 1)..d {
                for k in (j + 1)..d {
                    let a = self.bracket_coords(&self.bracket_basis(i, j), &basis_vec(d, k));
                    let b = self.bracket_coords(&self.bracket_basis(j, k), &basis_vec(d, i));
                    let c = self.bracket_coords(&self.bracket_basis(k, i), &basis_vec(d, j));
                    let sum: Vec<Rat> = a
                        .iter()
                        .zip(&b)
                        .zip(&c)
                        .map(|((x, y), z)| x + y + z)
                        .collect();
                    if sum.iter().any(|v| !v.is_zero()) {
                        out.push(Violation::Jacobi { i, j, k });
                    }
                }
            }
        }
        if out.is_empty() && self.compute_nil_class().is_none() {
            out.push(Violation::NotNilpotent);
        }
        out
    }

    fn bracket_basis(&self, i: usize, j: usize) -> Vec<Rat> {
        (0..self.dim)
            .map(|k| self.structure_constant(i, j, k).clone())
            .collect()
    }

    /// Bilinear extension of the structure constants to coordinate vectors.
    pub fn bracket_coords(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let d = self.dim;
        let mut out = vec![Rat::zero(); d];
        for i in 0..d {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if y[j].is_zero() {
                    continue;
                }
                let f = &x[i] * &y[j];
                for k in 0..d {
                    let c = self.structure_constant(i, j, k);
                    if !c.is_zero() {
                        out[k] = &out[k] + &f * c;
                    }
                }
            }
        }
        out
    }

    /// Smallest `c` with vanishing `(c+1)`-fold brackets, via the lower
    /// central series; `None` when the series does not reach zero.
    fn compute_nil_class(&self) -> Option<usize> {
        let d = self.dim;
        let mut term = Subspace::full(d);
        let mut class = 0usize;
        while !term.is_zero() {
            if class > d {
                return None;
            }
            class += 1;
            // [g, term]
            let mut rows = Vec::new();
            for i in 0..d {
                for b in term.basis_rows() {
                    rows.push(self.bracket_coords(&basis_vec(d, i), &b));
                }
            }
            let next = Subspace::from_spanning_rows(d, &rows);
            if next.dim() == term.dim() {
                return None;
            }
            term = next;
        }
        Some(class)
    }

    pub fn vector(self: &Arc<Self>, coords: Vec<Rat>) -> LieVector {
        assert_eq!(coords.len(), self.dim, "coordinate vector has wrong length");
        LieVector {
            algebra: Arc::clone(self),
            coords,
        }
    }

    pub fn zero_vector(self: &Arc<Self>) -> LieVector {
        self.vector(vec![Rat::zero(); self.dim])
    }

    pub fn basis_vector(self: &Arc<Self>, i: usize) -> LieVector {
        self.vector(basis_vec(self.dim, i))
    }

    /// Ascending central series `z¹ = center ⊂ ... ⊂ z^r = 𝔲`.
    pub fn ascending_central_series(&self) -> Vec<Subspace> {
        let d = self.dim;
        let ads: Vec<RatMatrix> = (0..d)
            .map(|j| self.ad_matrix_coords(&basis_vec(d, j)))
            .collect();
        let mut series = Vec::new();
        let mut current = Subspace::zero(d);
        loop {
            // {X : [X_j, X] ∈ current for all j}
            let mut next = Subspace::full(d);
            for ad in &ads {
                next = intersect(&next, &preimage(ad, &current));
            }
            series.push(next.clone());
            if next.is_full() {
                return series;
            }
            assert!(
                next.dim() > current.dim(),
                "central series stalled; algebra not nilpotent"
            );
            current = next;
        }
    }

    fn ad_matrix_coords(&self, x: &[Rat]) -> RatMatrix {
        let d = self.dim;
        let mut m = RatMatrix::zero(d, d);
        for j in 0..d {
            let col = self.bracket_coords(x, &basis_vec(d, j));
            for (k, v) in col.into_iter().enumerate() {
                m.set(k, j, v);
            }
        }
        m
    }

    // --- stock constructors used by the catalog and the test fixtures ---

    pub fn abelian(dim: usize) -> Arc<Self> {
        Self::new(dim, vec![Rat::zero(); dim * dim * dim]).expect("abelian algebra is valid")
    }

    /// `h_{2n+1}` with basis `x_1..x_n, y_1..y_n, z` and `[x_i, y_i] = z`.
    pub fn heisenberg(n: usize) -> Arc<Self> {
        assert!(n >= 1);
        let d = 2 * n + 1;
        let brackets: Vec<_> = (0..n)
            .map(|i| (i, n + i, vec![(2 * n, Rat::one())]))
            .collect();
        Self::from_sparse_brackets(d, &brackets).expect("heisenberg algebra is valid")
    }

    /// Free 2-step nilpotent algebra on `n` generators: `V ⊕ ∧²V` with
    /// `[v_i, v_j] = v_i ∧ v_j`. Basis: `v_1..v_n`, then `w_{ij}` for `i < j`
    /// in lexicographic order.
    pub fn free_two_step(n: usize) -> Arc<Self> {
        assert!(n >= 2);
        let pairs = wedge_pairs(n);
        let d = n + pairs.len();
        let mut brackets = Vec::new();
        for (idx, &(i, j)) in pairs.iter().enumerate() {
            brackets.push((i, j, vec![(n + idx, Rat::one())]));
        }
        Self::from_sparse_brackets(d, &brackets).expect("free 2-step algebra is valid")
    }

    /// Strictly upper-triangular `n×n` matrices; basis `E_{ij}` for `i < j`
    /// lexicographic. Class `n − 1`; the `n = 4` case is the stock class-3
    /// fixture.
    pub fn strictly_upper_triangular(n: usize) -> Arc<Self> {
        assert!(n >= 2);
        let pairs = wedge_pairs(n);
        let idx_of = |i: usize, j: usize| pairs.iter().position(|&p| p == (i, j)).unwrap();
        let d = pairs.len();
        let mut c = vec![Rat::zero(); d * d * d];
        for (a, &(i, j)) in pairs.iter().enumerate() {
            for (b, &(k, l)) in pairs.iter().enumerate() {
                // [E_ij, E_kl] = δ_jk E_il − δ_li E_kj
                if j == k {
                    let t = idx_of(i, l);
                    c[a * d * d + b * d + t] = &c[a * d * d + b * d + t] + Rat::one();
                }
                if l == i {
                    let t = idx_of(k, j);
                    c[a * d * d + b * d + t] = &c[a * d * d + b * d + t] - Rat::one();
                }
            }
        }
        Self::new(d, c).expect("strictly upper triangular algebra is valid")
    }
}

/// Index pairs `(i, j)` with `i < j < n`, lexicographic.
pub fn wedge_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            out.push((i, j));
        }
    }
    out
}

pub(crate) fn basis_vec(d: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); d];
    v[i] = Rat::one();
    v
}

/// Element of a [`LieAlgebra`]; via exponential coordinates also an element
/// of the associated unipotent group.
#[derive(Clone)]
pub struct LieVector {
    algebra: Arc<LieAlgebra>,
    coords: Vec<Rat>,
}

impl PartialEq for LieVector {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) && self.coords == other.coords
    }
}
impl Eq for LieVector {}

impl fmt::Debug for LieVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(format_rat).collect();
        write!(f, "LieVector[{}]", parts.join(", "))
    }
}

impl LieVector {
    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.algebra
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Rat::is_zero)
    }

    pub fn add(&self, other: &LieVector) -> LieVector {
        self.assert_same_algebra(other);
        self.algebra.vector(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn neg(&self) -> LieVector {
        self.algebra
            .vector(self.coords.iter().map(|a| -a.clone()).collect())
    }

    pub fn scale(&self, s: &Rat) -> LieVector {
        self.algebra
            .vector(self.coords.iter().map(|a| a * s).collect())
    }

    fn assert_same_algebra(&self, other: &LieVector) {
        assert!(
            Arc::ptr_eq(&self.algebra, &other.algebra),
            "vectors belong to different algebras"
        );
    }
}

/// `[x, y]` by bilinear extension of the structure constants.
pub fn bracket(x: &LieVector, y: &LieVector) -> LieVector {
    x.assert_same_algebra(y);
    x.algebra
        .vector(x.algebra.bracket_coords(x.coords(), y.coords()))
}

/// Matrix of `y ↦ [x, y]`; nilpotent of index at most the class.
pub fn ad_matrix(x: &LieVector) -> RatMatrix {
    x.algebra.ad_matrix_coords(x.coords())
}

/// `Ad(exp x) = Σ_{k < class} ad(x)^k / k!` — the automorphism of the
/// algebra induced by conjugation with the group element `exp x`.
pub fn ad_of_group(x: &LieVector) -> RatMatrix {
    let d = x.algebra.dim();
    let ad = ad_matrix(x);
    let mut acc = RatMatrix::identity(d);
    let mut power = RatMatrix::identity(d);
    for k in 1..x.algebra.nil_class() {
        power = power.mul(&ad);
        if power.is_zero() {
            break;
        }
        acc = acc.add(&power.scale(&Rat::new(1.into(), factorial(k))));
    }
    acc
}

/// `exp(t·n) = Σ t^k n^k / k!` for nilpotent `n`, exact.
pub fn exp_nilpotent(n: &RatMatrix, t: &Rat) -> Result<RatMatrix> {
    assert!(n.is_square(), "exp wants a square matrix");
    if !n.is_nilpotent() {
        return Err(Error::NotNilpotent);
    }
    let d = n.rows();
    let mut acc = RatMatrix::identity(d);
    let mut power = RatMatrix::identity(d);
    let mut tk = Rat::one();
    for k in 1..=d {
        power = power.mul(n);
        if power.is_zero() {
            break;
        }
        tk *= t;
        acc = acc.add(&power.scale(&(&tk / Rat::from(factorial(k)))));
    }
    Ok(acc)
}

/// True iff `n[x,y] = [nx,y] + [x,ny]` on all basis pairs.
pub fn is_derivation(n: &RatMatrix, alg: &LieAlgebra) -> bool {
    let d = alg.dim();
    assert!(
        n.is_square() && n.rows() == d,
        "derivation candidate has wrong shape"
    );
    for i in 0..d {
        for j in (i + 1)..d {
            let ei = basis_vec(d, i);
            let ej = basis_vec(d, j);
            let lhs = n.mul_vec(&alg.bracket_coords(&ei, &ej));
            let a = alg.bracket_coords(&n.mul_vec(&ei), &ej);
            let b = alg.bracket_coords(&ei, &n.mul_vec(&ej));
            if lhs
                .iter()
                .zip(a.iter().zip(&b))
                .any(|(l, (x, y))| l != &(x + y))
            {
                return false;
            }
        }
    }
    true
}

/// True iff `a` is invertible and `a[x,y] = [ax, ay]` on all basis pairs.
pub fn is_automorphism(a: &RatMatrix, alg: &LieAlgebra) -> bool {
    let d = alg.dim();
    assert!(
        a.is_square() && a.rows() == d,
        "automorphism candidate has wrong shape"
    );
    if a.inverse().is_none() {
        return false;
    }
    for i in 0..d {
        for j in (i + 1)..d {
            let ei = basis_vec(d, i);
            let ej = basis_vec(d, j);
            let lhs = a.mul_vec(&alg.bracket_coords(&ei, &ej));
            let rhs = alg.bracket_coords(&a.mul_vec(&ei), &a.mul_vec(&ej));
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// Truncated Baker-Campbell-Hausdorff product `log(exp x · exp y)`.
///
/// Dynkin's formula: over block sequences `(r_1,s_1)…(r_n,s_n)` with
/// `r_i + s_i ≥ 1` and total degree `m ≤ class`, sum
/// `(−1)^{n−1} / (n · m · Π r_i! s_i!)` times the left-normalized bracket of
/// the word `x^{r_1} y^{s_1} ⋯ x^{r_n} y^{s_n}`. Brackets of degree beyond
/// the class vanish, so the truncation is exact.
pub fn bch(x: &LieVector, y: &LieVector) -> LieVector {
    x.assert_same_algebra(y);
    let alg = x.algebra();
    let class = alg.nil_class();
    let mut acc = alg.zero_vector();
    let mut blocks: Vec<(usize, usize)> = Vec::new();
    bch_blocks(&mut acc, x, y, class, &mut blocks, 0);
    acc
}

fn bch_blocks(
    acc: &mut LieVector,
    x: &LieVector,
    y: &LieVector,
    class: usize,
    blocks: &mut Vec<(usize, usize)>,
    degree_so_far: usize,
) {
    if !blocks.is_empty() {
        let n = blocks.len();
        let m = degree_so_far;
        let word: Vec<&LieVector> = blocks
            .iter()
            .flat_map(|&(r, s)| std::iter::repeat_n(x, r).chain(std::iter::repeat_n(y, s)))
            .collect();
        let nested = left_normalized_bracket(&word);
        if !nested.is_zero() {
            let mut denom = num::BigInt::from(n) * num::BigInt::from(m);
            for &(r, s) in blocks.iter() {
                denom *= factorial(r) * factorial(s);
            }
            let sign = if n % 2 == 1 { 1 } else { -1 };
            let coeff = Rat::new(sign.into(), denom);
            *acc = acc.add(&nested.scale(&coeff));
        }
    }
    if degree_so_far == class {
        return;
    }
    // append one more block (r, s), r + s ≥ 1, staying within the class
    for r in 0..=(class - degree_so_far) {
        for s in 0..=(class - degree_so_far - r) {
            if r + s == 0 {
                continue;
            }
            blocks.push((r, s));
            bch_blocks(acc, x, y, class, blocks, degree_so_far + r + s);
            blocks.pop();
        }
    }
}

/// `[l_1, [l_2, [... [l_{m−1}, l_m]]]]`; a single letter is itself.
fn left_normalized_bracket(word: &[&LieVector]) -> LieVector {
    let mut it = word.iter().rev();
    let mut acc = (*it.next().expect("nonempty word")).clone();
    for &l in it {
        acc = bracket(l, &acc);
    }
    acc
}

/// Closed BCH formula complete through class 3:
/// `x + y + ½[x,y] + 1/12 [x,[x,y]] + 1/12 [y,[y,x]]`.
/// Kept independent of the Dynkin summation as the cross-check oracle.
pub fn bch_degree3_closed(x: &LieVector, y: &LieVector) -> LieVector {
    let half = Rat::new(1.into(), 2.into());
    let twelfth = Rat::new(1.into(), 12.into());
    let xy = bracket(x, y);
    x.add(y)
        .add(&xy.scale(&half))
        .add(&bracket(x, &xy).scale(&twelfth))
        .add(&bracket(y, &bracket(y, x)).scale(&twelfth))
}
