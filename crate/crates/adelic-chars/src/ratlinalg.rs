//! Exact rational linear algebra.
//!
//! Matrices over `Q` in row-major layout, subspaces in canonical reduced
//! row-echelon basis form, and the two invariant-subspace fixpoint
//! computations every classification step reduces to. Everything is exact;
//! equality of subspaces is field-wise equality of their canonical bases.

use std::fmt;

use num::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Serialize};

use crate::rat::{format_rat, parse_rat, Rat};

/// Dense matrix over `Q`, entries row-major, always reduced with positive
/// denominator (guaranteed by the scalar type).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| format_rat(self.get(r, c))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rat>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![Rat::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        for row in &rows {
            assert_eq!(row.len(), c, "ragged rows");
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Self::new(rows, cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn col(&self, c: usize) -> Vec<Rat> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Rat::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch in add"
        );
        Self::new(
            self.rows,
            self.cols,
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch in sub"
        );
        Self::new(
            self.rows,
            self.cols,
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, s: &Rat) -> Self {
        Self::new(
            self.rows,
            self.cols,
            self.entries.iter().map(|a| a * s).collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut out = Self::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let v = out.get(r, c) + a * other.get(k, c);
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_vec");
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn pow(&self, mut e: usize) -> Self {
        assert!(self.is_square(), "pow needs a square matrix");
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Nilpotency test: some power up to the dimension vanishes.
    pub fn is_nilpotent(&self) -> bool {
        assert!(self.is_square(), "nilpotency needs a square matrix");
        let mut m = self.clone();
        for _ in 0..self.rows {
            if m.is_zero() {
                return true;
            }
            m = m.mul(self);
        }
        m.is_zero()
    }

    /// Inverse by Gauss-Jordan on `[A | I]`; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square(), "inverse needs a square matrix");
        let n = self.rows;
        let mut aug = Self::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self.get(r, c).clone()
            } else if c - n == r {
                Rat::one()
            } else {
                Rat::zero()
            }
        });
        let (reduced, pivots, rank) = rref(&aug);
        if rank < n || pivots.iter().take(n).copied().ne(0..n) {
            return None;
        }
        aug = reduced;
        Some(Self::from_fn(n, n, |r, c| aug.get(r, c + n).clone()))
    }
}

/// Reduced row-echelon form: `(rref, pivot columns, rank)`.
///
/// The RREF of a matrix is unique, which is what makes [`Subspace`] a value
/// type with decidable equality.
pub fn rref(m: &RatMatrix) -> (RatMatrix, Vec<usize>, usize) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // pick the entry with smallest numerator*denominator size? plain
        // first-nonzero pivoting is fine at these dimensions
        let Some(pr) = (r..rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        if pr != r {
            for k in 0..cols {
                let tmp = a.get(pr, k).clone();
                a.set(pr, k, a.get(r, k).clone());
                a.set(r, k, tmp);
            }
        }
        let inv = a.get(r, c).clone().recip();
        for k in c..cols {
            let v = a.get(r, k) * &inv;
            a.set(r, k, v);
        }
        for i in 0..rows {
            if i == r || a.get(i, c).is_zero() {
                continue;
            }
            let f = a.get(i, c).clone();
            for k in c..cols {
                let v = a.get(i, k) - &f * a.get(r, k);
                a.set(i, k, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots, r)
}

/// A `Q`-linear subspace of `Q^d` in canonical form: the basis rows are the
/// nonzero rows of a reduced row-echelon matrix. Two subspaces are equal as
/// sets of vectors iff they are equal as values.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: RatMatrix,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace(dim {} of Q^{}) {:?}",
            self.dim(),
            self.ambient_dim,
            self.basis
        )
    }
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: RatMatrix::zero(0, ambient_dim),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: RatMatrix::identity(ambient_dim),
        }
    }

    /// Canonicalizes the span of the given rows.
    pub fn from_spanning_rows(ambient_dim: usize, rows: &[Vec<Rat>]) -> Self {
        for row in rows {
            assert_eq!(row.len(), ambient_dim, "spanning vector has wrong length");
        }
        if rows.is_empty() {
            return Self::zero(ambient_dim);
        }
        let (reduced, _, rank) = rref(&RatMatrix::from_rows(rows.to_vec()));
        let basis = RatMatrix::from_fn(rank, ambient_dim, |r, c| reduced.get(r, c).clone());
        Self { ambient_dim, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Canonical basis rows (RREF, sorted by pivot).
    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    pub fn basis_rows(&self) -> Vec<Vec<Rat>> {
        self.basis.row_vecs()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    pub fn contains_vec(&self, v: &[Rat]) -> bool {
        assert_eq!(v.len(), self.ambient_dim, "vector has wrong length");
        // reduce v against the echelon basis; membership iff residual is zero
        let mut v = v.to_vec();
        for r in 0..self.basis.rows() {
            let pivot = (0..self.ambient_dim)
                .find(|&c| self.basis.get(r, c).is_one())
                .expect("canonical basis row has a pivot");
            if v[pivot].is_zero() {
                continue;
            }
            let f = v[pivot].clone();
            for c in 0..self.ambient_dim {
                v[c] = &v[c] - &f * self.basis.get(r, c);
            }
        }
        v.iter().all(Rat::is_zero)
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        assert_eq!(
            self.ambient_dim, other.ambient_dim,
            "ambient dimension mismatch"
        );
        other.basis_rows().iter().all(|row| self.contains_vec(row))
    }
}

/// Serde face of [`Subspace`]: ambient dimension plus canonical basis rows
/// as fraction strings.
#[derive(Serialize, Deserialize)]
struct SubspaceDoc {
    ambient_dim: usize,
    basis: Vec<Vec<String>>,
}

impl Serialize for Subspace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let doc = SubspaceDoc {
            ambient_dim: self.ambient_dim,
            basis: self
                .basis_rows()
                .iter()
                .map(|row| row.iter().map(format_rat).collect())
                .collect(),
        };
        doc.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = SubspaceDoc::deserialize(d)?;
        let mut rows = Vec::new();
        for row in &doc.basis {
            if row.len() != doc.ambient_dim {
                return Err(D::Error::custom("basis row has the wrong length"));
            }
            let parsed: std::result::Result<Vec<Rat>, _> =
                row.iter().map(|s| parse_rat(s)).collect();
            rows.push(parsed.map_err(D::Error::custom)?);
        }
        Ok(Subspace::from_spanning_rows(doc.ambient_dim, &rows))
    }
}

/// Kernel `{x : m·x = 0}` in canonical form; `dim = cols - rank`.
pub fn kernel(m: &RatMatrix) -> Subspace {
    let n = m.cols();
    if m.rows() == 0 {
        return Subspace::full(n);
    }
    let (reduced, pivots, rank) = rref(m);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut rows = Vec::with_capacity(n - rank);
    for &fc in &free {
        let mut v = vec![Rat::zero(); n];
        v[fc] = Rat::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -reduced.get(r, fc).clone();
        }
        rows.push(v);
    }
    Subspace::from_spanning_rows(n, &rows)
}

/// Largest subspace contained in both.
pub fn intersect(s1: &Subspace, s2: &Subspace) -> Subspace {
    assert_eq!(
        s1.ambient_dim(),
        s2.ambient_dim(),
        "ambient dimension mismatch"
    );
    // (S1 ∩ S2)⊥ = S1⊥ + S2⊥
    annihilator(&sum(&annihilator(s1), &annihilator(s2)))
}

/// Span of the union of the bases.
pub fn sum(s1: &Subspace, s2: &Subspace) -> Subspace {
    assert_eq!(
        s1.ambient_dim(),
        s2.ambient_dim(),
        "ambient dimension mismatch"
    );
    let mut rows = s1.basis_rows();
    rows.extend(s2.basis_rows());
    Subspace::from_spanning_rows(s1.ambient_dim(), &rows)
}

/// `{x : m·x ∈ s}`.
pub fn preimage(m: &RatMatrix, s: &Subspace) -> Subspace {
    assert_eq!(
        m.rows(),
        s.ambient_dim(),
        "matrix rows must match ambient dimension"
    );
    // v ∈ s  ⟺  ann(s)·v = 0, so the preimage is ker(ann(s)·m)
    let ann = annihilator(s);
    if ann.dim() == 0 {
        return Subspace::full(m.cols());
    }
    kernel(&ann.basis().mul(m))
}

/// Annihilator under the standard dot pairing; an involution with
/// `dim(s) + dim(ann(s)) = d`.
pub fn annihilator(s: &Subspace) -> Subspace {
    if s.dim() == 0 {
        return Subspace::full(s.ambient_dim());
    }
    kernel(s.basis())
}

/// The unique maximal subspace `V ⊆ w` with `M·V ⊆ V` for every `M` in
/// `ops`, by the shrinking fixpoint `V ← V ∩ ⋂ preimage(M, V)`. Terminates
/// because the dimension strictly decreases at every non-final step.
pub fn largest_invariant_in(w: &Subspace, ops: &[RatMatrix]) -> Subspace {
    let d = w.ambient_dim();
    for op in ops {
        assert!(
            op.is_square() && op.rows() == d,
            "operator must be square of ambient size"
        );
    }
    let mut v = w.clone();
    loop {
        let mut next = v.clone();
        for op in ops {
            next = intersect(&next, &preimage(op, &v));
        }
        if next == v {
            return v;
        }
        v = next;
    }
}

/// The unique minimal subspace containing `seeds` and stable under every `M`
/// in `ops`, by closing the span under the operators until the dimension
/// stabilizes.
pub fn smallest_invariant_containing(
    ambient_dim: usize,
    seeds: &[Vec<Rat>],
    ops: &[RatMatrix],
) -> Subspace {
    for op in ops {
        assert!(
            op.is_square() && op.rows() == ambient_dim,
            "operator must be square of ambient size"
        );
    }
    let mut v = Subspace::from_spanning_rows(ambient_dim, seeds);
    loop {
        let mut rows = v.basis_rows();
        for op in ops {
            for b in v.basis_rows() {
                rows.push(op.mul_vec(&b));
            }
        }
        let next = Subspace::from_spanning_rows(ambient_dim, &rows);
        if next == v {
            return v;
        }
        v = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat_int(x)).collect())
                .collect(),
        )
    }

    fn span(d: usize, rows: &[&[i64]]) -> Subspace {
        Subspace::from_spanning_rows(
            d,
            &rows
                .iter()
                .map(|r| r.iter().map(|&x| rat_int(x)).collect())
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn rref_proportional_rows() {
        let (r, pivots, rank) = rref(&m(&[&[2, 4], &[1, 2]]));
        assert_eq!(r, m(&[&[1, 2], &[0, 0]]));
        assert_eq!(pivots, vec![0]);
        assert_eq!(rank, 1);
    }

    #[test]
    fn rref_identity_fixed() {
        let id = RatMatrix::identity(3);
        let (r, _, rank) = rref(&id);
        assert_eq!(r, id);
        assert_eq!(rank, 3);
    }

    #[test]
    fn rref_permutation() {
        let (r, _, rank) = rref(&m(&[&[0, 1], &[1, 0]]));
        assert_eq!(r, RatMatrix::identity(2));
        assert_eq!(rank, 2);
    }

    #[test]
    fn kernel_coordinate_hyperplane() {
        let k = kernel(&m(&[&[1, 0, 0]]));
        assert_eq!(k, span(3, &[&[0, 1, 0], &[0, 0, 1]]));
    }

    #[test]
    fn kernel_zero_matrix_is_everything() {
        assert_eq!(kernel(&RatMatrix::zero(2, 2)), Subspace::full(2));
    }

    #[test]
    fn kernel_line() {
        assert_eq!(kernel(&m(&[&[1, 1]])), span(2, &[&[1, -1]]));
    }

    #[test]
    fn intersect_planes() {
        let s1 = span(3, &[&[1, 0, 0], &[0, 1, 0]]);
        let s2 = span(3, &[&[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(intersect(&s1, &s2), span(3, &[&[0, 1, 0]]));
        assert_eq!(intersect(&s1, &s1), s1);
        let l1 = span(2, &[&[1, 1]]);
        let l2 = span(2, &[&[1, -1]]);
        assert_eq!(intersect(&l1, &l2), Subspace::zero(2));
    }

    #[test]
    fn sum_lines() {
        let e1 = span(2, &[&[1, 0]]);
        let e2 = span(2, &[&[0, 1]]);
        assert_eq!(sum(&e1, &e2), Subspace::full(2));
        assert_eq!(sum(&e1, &Subspace::zero(2)), e1);
        assert_eq!(sum(&e1, &e1), e1);
    }

    #[test]
    fn preimage_cases() {
        let s = span(2, &[&[1, 0]]);
        assert_eq!(preimage(&RatMatrix::identity(2), &s), s);
        assert_eq!(preimage(&RatMatrix::zero(2, 2), &s), Subspace::full(2));
        // image of [[0,1],[0,0]] is span{e1}, so the preimage of span{e1} is everything
        assert_eq!(preimage(&m(&[&[0, 1], &[0, 0]]), &s), Subspace::full(2));
    }

    #[test]
    fn annihilator_cases() {
        assert_eq!(annihilator(&Subspace::zero(3)), Subspace::full(3));
        assert_eq!(
            annihilator(&span(3, &[&[1, 0, 0]])),
            span(3, &[&[0, 1, 0], &[0, 0, 1]])
        );
        let s = span(4, &[&[1, 2, 3, 4], &[0, 1, 1, 0]]);
        assert_eq!(annihilator(&annihilator(&s)), s);
    }

    #[test]
    fn largest_invariant_no_ops_is_w() {
        let w = span(3, &[&[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(largest_invariant_in(&w, &[]), w);
    }

    // Heisenberg h3 ordered (X, Y, Z): the fixpoint from the spec examples,
    // derived by hand iteration. Ops: N1: Y↦X, ad X: Y↦Z, ad Y: X↦−Z.
    fn h3_ops() -> Vec<RatMatrix> {
        let n1 = m(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, 0]]);
        let ad_x = m(&[&[0, 0, 0], &[0, 0, 0], &[0, 1, 0]]);
        let ad_y = m(&[&[0, 0, 0], &[0, 0, 0], &[-1, 0, 0]]);
        vec![n1, ad_x, ad_y]
    }

    #[test]
    fn largest_invariant_heisenberg_center() {
        let w = span(3, &[&[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(largest_invariant_in(&w, &h3_ops()), span(3, &[&[0, 0, 1]]));
    }

    #[test]
    fn largest_invariant_heisenberg_complement_of_center() {
        let w = span(3, &[&[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(largest_invariant_in(&w, &h3_ops()), Subspace::zero(3));
    }

    #[test]
    fn smallest_invariant_cases() {
        assert_eq!(
            smallest_invariant_containing(3, &[], &h3_ops()),
            Subspace::zero(3)
        );
        assert_eq!(
            smallest_invariant_containing(2, &[vec![rat_int(1), rat_int(0)]], &[]),
            span(2, &[&[1, 0]])
        );
        // two-step closure: e_Y seeds, N1ᵀ: e_X↦e_Y, N2ᵀ: e_Y↦e_X
        let n1t = m(&[&[0, 0], &[1, 0]]);
        let n2t = m(&[&[0, 1], &[0, 0]]);
        assert_eq!(
            smallest_invariant_containing(2, &[vec![rat_int(0), rat_int(1)]], &[n1t, n2t]),
            Subspace::full(2)
        );
    }

    #[test]
    fn inverse_and_pow() {
        let a = m(&[&[1, 1], &[0, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), RatMatrix::identity(2));
        assert_eq!(inv, m(&[&[1, -1], &[0, 1]]));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
        assert_eq!(a.pow(3), m(&[&[1, 3], &[0, 1]]));
        assert!(m(&[&[0, 1], &[0, 0]]).is_nilpotent());
        assert!(!a.is_nilpotent());
    }

    #[test]
    #[should_panic(expected = "ambient dimension mismatch")]
    fn intersect_dimension_mismatch_panics() {
        let _ = intersect(&Subspace::full(2), &Subspace::full(3));
    }

    #[test]
    fn scaled_entries_stay_reduced() {
        let half = rat(1, 2);
        let a = RatMatrix::from_rows(vec![vec![half.clone(), rat(2, 4)]]);
        assert_eq!(a.get(0, 1), &half);
        let s = a.scale(&rat_int(2));
        assert_eq!(s.get(0, 0), &rat_int(1));
    }
}
