//! Exact linear algebra over the two-element field.
//!
//! Rows are bit-packed into `u64` words; addition is XOR. All basis
//! choices (kernel vectors, homology representatives) are fixed by
//! echelon order so downstream golden files are stable across runs.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("composite of differentials is not zero at row {row}, col {col}")]
    CompositeNotZero { row: usize, col: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

const WORD_BITS: usize = 64;

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// A bit vector of fixed length.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn unit(len: usize, pos: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(pos, true);
        v
    }

    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in indices {
            v.set(i, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let (w, b) = (i / WORD_BITS, i % WORD_BITS);
        if value {
            self.words[w] |= 1 << b;
        } else {
            self.words[w] &= !(1 << b);
        }
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the lowest set bit, if any.
    pub fn first_one(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(wi * WORD_BITS + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Index of the highest set bit, if any.
    pub fn last_one(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate().rev() {
            if w != 0 {
                return Some(wi * WORD_BITS + (63 - w.leading_zeros() as usize));
            }
        }
        None
    }

    pub fn ones(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        Ok(())
    }
}

/// A dense bit matrix acting on column vectors: an `rows x cols` matrix
/// represents a linear map `F2^cols -> F2^rows`.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat2 {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
}

impl Mat2 {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat2 {
            rows,
            cols,
            data: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &e) in row.iter().enumerate() {
                m.set(i, j, e % 2 == 1);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.data[r].set(c, value);
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.data[r]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitVec::is_zero)
    }

    pub fn column(&self, c: usize) -> BitVec {
        let mut v = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let mut out = BitVec::zeros(self.rows);
        for r in 0..self.rows {
            if self.data[r].dot(v) {
                out.set(r, true);
            }
        }
        out
    }

    pub fn mul(&self, other: &Mat2) -> Mat2 {
        assert_eq!(self.cols, other.rows, "matrix dimension mismatch");
        let mut out = Mat2::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in self.data[r].ones() {
                out.data[r].xor_assign(&other.data[k]);
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat2 {
        let mut out = Mat2::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.data[r].ones() {
                out.set(c, r, true);
            }
        }
        out
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pivot_row) = (row..m.rows).find(|&r| m.get(r, col)) else {
                continue;
            };
            m.data.swap(row, pivot_row);
            for r in 0..m.rows {
                if r != row && m.get(r, col) {
                    let (head, tail) = m.data.split_at_mut(row.max(r));
                    if r < row {
                        head[r].xor_assign(&tail[0]);
                    } else {
                        tail[0].xor_assign(&head[row]);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of `{v : self * v = 0}`, one vector per free column, in
    /// increasing order of the free column index.
    pub fn kernel_basis(&self) -> Vec<BitVec> {
        let Rref { reduced, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = BitVec::zeros(self.cols);
            v.set(free, true);
            for (r, &p) in pivots.iter().enumerate() {
                if reduced.get(r, free) {
                    v.set(p, true);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of `self * x = target`, if any.
    pub fn solve(&self, target: &BitVec) -> Option<BitVec> {
        assert_eq!(target.len(), self.rows);
        // Eliminate on the augmented matrix [self | target].
        let mut m = self.clone();
        let mut t = target.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| m.get(r, col)) else {
                continue;
            };
            m.data.swap(row, pr);
            let trow = t.get(row);
            let tpr = t.get(pr);
            t.set(row, tpr);
            t.set(pr, trow);
            for r in 0..m.rows {
                if r != row && m.get(r, col) {
                    let src = m.data[row].clone();
                    m.data[r].xor_assign(&src);
                    let bit = t.get(r) ^ t.get(row);
                    t.set(r, bit);
                }
            }
            pivots.push(col);
            row += 1;
        }
        // Inconsistent if a zero row has a nonzero target entry.
        for r in row..m.rows {
            if t.get(r) {
                return None;
            }
        }
        let mut x = BitVec::zeros(self.cols);
        for (r, &p) in pivots.iter().enumerate() {
            if t.get(r) {
                x.set(p, true);
            }
        }
        Some(x)
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat2 {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.data[r])?;
        }
        Ok(())
    }
}

pub struct Rref {
    pub reduced: Mat2,
    pub pivots: Vec<usize>,
}

/// Which bit of a vector is used as its leading term during echelon
/// insertion. `Low` gives the classical reduced echelon form; `High`
/// pivots on the highest set bit, which makes the *non*-pivot positions
/// the lowest indices (used to keep low-ordered monomials in quotient
/// sections).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PivotRule {
    Low,
    High,
}

/// An echelonized subspace of `F2^dim` supporting incremental insertion.
#[derive(Clone, Debug)]
pub struct Subspace {
    dim: usize,
    rule: PivotRule,
    /// (pivot index, vector) sorted by pivot.
    rows: Vec<(usize, BitVec)>,
}

impl Subspace {
    pub fn new(dim: usize, rule: PivotRule) -> Self {
        Subspace {
            dim,
            rule,
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }

    pub fn basis(&self) -> Vec<BitVec> {
        self.rows.iter().map(|(_, v)| v.clone()).collect()
    }

    fn lead(&self, v: &BitVec) -> Option<usize> {
        match self.rule {
            PivotRule::Low => v.first_one(),
            PivotRule::High => v.last_one(),
        }
    }

    /// Reduce `v` against the echelon rows in place; afterwards `v` has
    /// no nonzero entry in any pivot position.
    pub fn reduce(&self, v: &mut BitVec) {
        loop {
            let mut changed = false;
            for (p, row) in &self.rows {
                if v.get(*p) {
                    v.xor_assign(row);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }

    /// Insert `v` if independent. Returns the reduced vector when the
    /// rank grew, `None` when `v` was already in the span.
    pub fn insert(&mut self, v: &BitVec) -> Option<BitVec> {
        assert_eq!(v.len(), self.dim);
        let mut v = v.clone();
        self.reduce(&mut v);
        let lead = self.lead(&v)?;
        // Back-substitute so existing rows are clean at the new pivot.
        for (_, row) in self.rows.iter_mut() {
            if row.get(lead) {
                row.xor_assign(&v);
            }
        }
        let at = self.rows.partition_point(|(p, _)| *p < lead);
        self.rows.insert(at, (lead, v.clone()));
        Some(v)
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        let mut v = v.clone();
        self.reduce(&mut v);
        v.is_zero()
    }
}

/// Representatives of `ker(d_out) / im(d_in)` with `d_in: A -> B` and
/// `d_out: B -> C` given on column vectors.
pub struct Homology {
    pub dim: usize,
    pub reps: Vec<BitVec>,
}

/// Subquotient homology at the middle term. Fails with
/// `CompositeNotZero` unless `d_out * d_in = 0`. Representatives are the
/// kernel echelon vectors reduced against the boundary span, taken in
/// echelon order, so they are deterministic.
pub fn homology(d_in: &Mat2, d_out: &Mat2) -> Result<Homology, Gf2Error> {
    if d_in.rows() != d_out.cols() {
        return Err(Gf2Error::DimensionMismatch(format!(
            "d_in is {}x{} but d_out is {}x{}",
            d_in.rows(),
            d_in.cols(),
            d_out.rows(),
            d_out.cols()
        )));
    }
    let composite = d_out.mul(d_in);
    for r in 0..composite.rows() {
        if let Some(c) = composite.row(r).first_one() {
            return Err(Gf2Error::CompositeNotZero { row: r, col: c });
        }
    }
    let mid = d_in.rows();
    let mut span = Subspace::new(mid, PivotRule::Low);
    for c in 0..d_in.cols() {
        span.insert(&d_in.column(c));
    }
    let mut reps = Vec::new();
    for v in d_out.kernel_basis() {
        if let Some(reduced) = span.insert(&v) {
            reps.push(reduced);
        }
    }
    Ok(Homology {
        dim: reps.len(),
        reps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_duplicate_rows_cancel() {
        let m = Mat2::from_rows(&[vec![1, 1], vec![1, 1]]);
        let r = m.rref();
        assert_eq!(r.pivots, vec![0]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn rref_identity() {
        let m = Mat2::identity(3);
        let r = m.rref();
        assert_eq!(r.pivots, vec![0, 1, 2]);
        assert_eq!(r.reduced, Mat2::identity(3));
    }

    #[test]
    fn rank_of_three_by_two() {
        // Row spans enumerated by hand: all of F2^2.
        let m = Mat2::from_rows(&[vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn kernel_of_zero_matrix() {
        let m = Mat2::zero(2, 3);
        assert_eq!(m.kernel_basis().len(), 3);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(Mat2::identity(4).kernel_basis().is_empty());
    }

    #[test]
    fn kernel_solved_by_hand() {
        let m = Mat2::from_rows(&[vec![1, 1, 0], vec![0, 1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].ones(), vec![0, 1, 2]);
    }

    #[test]
    fn homology_zero_differentials() {
        let d_in = Mat2::zero(4, 0);
        let d_out = Mat2::zero(0, 4);
        let h = homology(&d_in, &d_out).unwrap();
        assert_eq!(h.dim, 4);
    }

    #[test]
    fn homology_exact_pair() {
        // 1 -> 2 -> 1 with ker = im = span(1,1).
        let d_in = Mat2::from_rows(&[vec![1], vec![1]]);
        let d_out = Mat2::from_rows(&[vec![1, 1]]);
        let h = homology(&d_in, &d_out).unwrap();
        assert_eq!(h.dim, 0);
    }

    #[test]
    fn homology_rejects_nonzero_composite() {
        let d_in = Mat2::from_rows(&[vec![1], vec![0]]);
        let d_out = Mat2::from_rows(&[vec![1, 0]]);
        assert!(matches!(
            homology(&d_in, &d_out),
            Err(Gf2Error::CompositeNotZero { .. })
        ));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = Mat2::from_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]);
        let target = BitVec::from_indices(3, &[0, 1]);
        let x = m.solve(&target).unwrap();
        assert_eq!(m.mul_vec(&x), target);

        let bad = BitVec::from_indices(3, &[0]);
        // rank 2 map; (1,0,0) is outside the column span
        assert!(m.solve(&bad).is_none());
    }

    #[test]
    fn subspace_high_pivot_keeps_low_section() {
        let mut s = Subspace::new(3, PivotRule::High);
        s.insert(&BitVec::from_indices(3, &[0, 2]));
        assert_eq!(s.pivots(), vec![2]);
    }
}
