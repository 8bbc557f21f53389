//! Linear algebra over GF(2) on word-packed bit vectors.

use std::fmt;

use super::LinalgError;

/// Fixed-length vector over GF(2), packed into `u64` words.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    pub fn from_indices(len: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in idx {
            v.flip(i);
        }
        v
    }

    /// Low `len` bits of `mask`, bit `i` is entry `i`.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= 64);
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = if len == 64 { mask } else { mask & ((1u64 << len) - 1) };
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
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if b {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut r = self.clone();
        r.xor_assign(other);
        r
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * 64 + t)
                }
            })
        })
    }

    /// Lowest set index.
    pub fn first_one(&self) -> Option<usize> {
        self.words.iter().enumerate().find(|(_, &w)| w != 0).map(|(k, &w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn to_indices(&self) -> Vec<usize> {
        self.ones().collect()
    }

    /// Entries `offset..offset+len` as a new vector.
    pub fn slice(&self, offset: usize, len: usize) -> BitVec {
        BitVec::from_indices(len, self.ones().filter(|&i| i >= offset && i < offset + len).map(|i| i - offset))
    }

    pub fn concat(parts: &[BitVec]) -> BitVec {
        let total = parts.iter().map(BitVec::len).sum();
        let mut out = BitVec::zeros(total);
        let mut off = 0;
        for p in parts {
            for i in p.ones() {
                out.set(off + i, true);
            }
            off += p.len();
        }
        out
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect();
        write!(f, "[{s}]")
    }
}

/// Matrix over GF(2), stored as columns.
#[derive(Clone, PartialEq, Eq)]
pub struct F2Matrix {
    rows: usize,
    columns: Vec<BitVec>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        F2Matrix { rows, columns: vec![BitVec::zeros(rows); cols] }
    }

    pub fn identity(n: usize) -> Self {
        F2Matrix { rows: n, columns: (0..n).map(|i| BitVec::unit(n, i)).collect() }
    }

    pub fn from_columns(rows: usize, columns: Vec<BitVec>) -> Self {
        assert!(columns.iter().all(|c| c.len() == rows));
        F2Matrix { rows, columns }
    }

    /// Entries given as rows of 0/1.
    pub fn from_rows(rows: &[Vec<u8>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols);
            for (j, &b) in r.iter().enumerate() {
                m.set(i, j, b & 1 == 1);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.columns[j].get(i)
    }

    pub fn set(&mut self, i: usize, j: usize, b: bool) {
        self.columns[j].set(i, b);
    }

    pub fn flip(&mut self, i: usize, j: usize) {
        self.columns[j].flip(i);
    }

    pub fn column(&self, j: usize) -> &BitVec {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[BitVec] {
        &self.columns
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(BitVec::is_zero)
    }

    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols(), "vector length does not match column count");
        let mut out = BitVec::zeros(self.rows);
        for j in v.ones() {
            out.xor_assign(&self.columns[j]);
        }
        out
    }

    /// `self * other`
    pub fn mul(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols(), other.rows());
        F2Matrix { rows: self.rows, columns: other.columns.iter().map(|c| self.mul_vec(c)).collect() }
    }

    pub fn add(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!((self.rows, self.cols()), (other.rows, other.cols()));
        F2Matrix { rows: self.rows, columns: self.columns.iter().zip(&other.columns).map(|(a, b)| a.xor(b)).collect() }
    }

    pub fn rank(&self) -> usize {
        let mut basis = Subspace::new(self.rows);
        self.columns.iter().filter(|c| basis.insert(c)).count()
    }

    pub fn kernel(&self) -> Vec<BitVec> {
        ColumnEliminator::new(self).kernel
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.cols()
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{} [", self.rows, self.cols())?;
        for i in 0..self.rows {
            let s: String = (0..self.cols()).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            writeln!(f, "  {s}")?;
        }
        write!(f, "]")
    }
}

/// Linear subspace kept as a fully reduced echelon basis: every basis vector
/// owns a pivot index that no other basis vector touches.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<BitVec>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn new(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Self::spanned_by(ambient, (0..ambient).map(|i| BitVec::unit(ambient, i)))
    }

    pub fn spanned_by(ambient: usize, vs: impl IntoIterator<Item = BitVec>) -> Self {
        let mut s = Self::new(ambient);
        for v in vs {
            s.insert(&v);
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BitVec] {
        &self.basis
    }

    /// Pivot coordinate of each basis vector; unit vectors on the remaining
    /// coordinates span a complement.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Canonical representative of `v` modulo the subspace.
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        let mut r = v.clone();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if r.get(p) {
                r.xor_assign(b);
            }
        }
        r
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        assert_eq!(v.len(), self.ambient);
        let r = self.reduce(v);
        let Some(p) = r.first_one() else { return false };
        for b in &mut self.basis {
            if b.get(p) {
                b.xor_assign(&r);
            }
        }
        self.basis.push(r);
        self.pivots.push(p);
        true
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    pub fn same_as(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.is_subspace_of(other)
    }

    /// Sum of two subspaces.
    pub fn join(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for b in &other.basis {
            s.insert(b);
        }
        s
    }

    /// Every element, for small dimensions.
    pub fn elements(&self) -> Vec<BitVec> {
        assert!(self.dim() < 24, "subspace too large to enumerate");
        (0u64..1 << self.dim())
            .map(|mask| {
                let mut v = BitVec::zeros(self.ambient);
                for (k, b) in self.basis.iter().enumerate() {
                    if mask >> k & 1 == 1 {
                        v.xor_assign(b);
                    }
                }
                v
            })
            .collect()
    }
}

/// Column reduction of a matrix that remembers, for every reduced column,
/// which original columns were combined to produce it.
struct ColumnEliminator {
    rows: usize,
    cols: usize,
    /// (reduced vector, pivot, combination of original columns)
    basis: Vec<(BitVec, usize, BitVec)>,
    kernel: Vec<BitVec>,
}

impl ColumnEliminator {
    fn new(m: &F2Matrix) -> Self {
        let mut e = ColumnEliminator { rows: m.rows(), cols: m.cols(), basis: Vec::new(), kernel: Vec::new() };
        for (j, c) in m.columns().iter().enumerate() {
            let (r, combo) = e.reduce(c, BitVec::unit(m.cols(), j));
            match r.first_one() {
                Some(p) => {
                    for (b, _, bc) in &mut e.basis {
                        if b.get(p) {
                            b.xor_assign(&r);
                            bc.xor_assign(&combo);
                        }
                    }
                    e.basis.push((r, p, combo));
                }
                None => e.kernel.push(combo),
            }
        }
        e
    }

    fn reduce(&self, v: &BitVec, mut combo: BitVec) -> (BitVec, BitVec) {
        let mut r = v.clone();
        for (b, p, bc) in &self.basis {
            if r.get(*p) {
                r.xor_assign(b);
                combo.xor_assign(bc);
            }
        }
        (r, combo)
    }

    fn solve(&self, v: &BitVec) -> Option<BitVec> {
        debug_assert_eq!(v.len(), self.rows);
        let (r, combo) = self.reduce(v, BitVec::zeros(self.cols));
        r.is_zero().then_some(combo)
    }
}

/// Solution set of `m * c = v` over GF(2).
#[derive(Clone, Debug)]
pub struct F2Solution {
    pub particular: BitVec,
    pub kernel: Vec<BitVec>,
}

pub fn gf2_solve(m: &F2Matrix, v: &BitVec) -> Result<Option<F2Solution>, LinalgError> {
    if v.len() != m.rows() {
        return Err(LinalgError::Dimension { expected: m.rows(), found: v.len() });
    }
    let e = ColumnEliminator::new(m);
    Ok(e.solve(v).map(|particular| F2Solution { particular, kernel: e.kernel }))
}

/// Reusable solver for many right-hand sides against one matrix.
pub struct F2Solver {
    inner: ColumnEliminator,
}

impl F2Solver {
    pub fn new(m: &F2Matrix) -> Self {
        F2Solver { inner: ColumnEliminator::new(m) }
    }

    pub fn solve(&self, v: &BitVec) -> Option<BitVec> {
        self.inner.solve(v)
    }

    pub fn kernel(&self) -> &[BitVec] {
        &self.inner.kernel
    }

    pub fn rank(&self) -> usize {
        self.inner.basis.len()
    }
}

/// `{c : m * c ∈ target}`
pub fn preimage(m: &F2Matrix, target: &Subspace) -> Subspace {
    assert_eq!(m.rows(), target.ambient());
    let reduced = F2Matrix::from_columns(m.rows(), m.columns().iter().map(|c| target.reduce(c)).collect());
    Subspace::spanned_by(m.cols(), reduced.kernel())
}

/// Image of a subspace under `m`.
pub fn image_of(m: &F2Matrix, s: &Subspace) -> Subspace {
    Subspace::spanned_by(m.rows(), s.basis().iter().map(|b| m.mul_vec(b)))
}

/// `offset + span(directions)`
#[derive(Clone, Debug)]
pub struct F2AffineSet {
    pub offset: BitVec,
    pub directions: Vec<BitVec>,
}

impl F2AffineSet {
    pub fn new(offset: BitVec, directions: Vec<BitVec>) -> Self {
        // keep only an independent subset
        let mut span = Subspace::new(offset.len());
        let directions = directions.into_iter().filter(|d| span.insert(d)).collect();
        F2AffineSet { offset, directions }
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        let span = Subspace::spanned_by(self.offset.len(), self.directions.iter().cloned());
        span.contains(&v.xor(&self.offset))
    }
}

/// An element of `a ∩ k`, found with a single solve of
/// `[directions | basis(k)] c = offset`.
pub fn affine_meets_subspace(a: &F2AffineSet, k: &Subspace) -> Result<Option<BitVec>, LinalgError> {
    let n = a.offset.len();
    if k.ambient() != n {
        return Err(LinalgError::Dimension { expected: n, found: k.ambient() });
    }
    let cols: Vec<BitVec> = a.directions.iter().chain(k.basis()).cloned().collect();
    let m = F2Matrix::from_columns(n, cols);
    Ok(gf2_solve(&m, &a.offset)?.map(|sol| {
        let mut v = a.offset.clone();
        for i in sol.particular.ones().filter(|&i| i < a.directions.len()) {
            v.xor_assign(&a.directions[i]);
        }
        v
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(bits: &[u8]) -> BitVec {
        BitVec::from_bools(&bits.iter().map(|&b| b == 1).collect::<Vec<_>>())
    }

    #[test]
    fn solve_identity() {
        let s = gf2_solve(&F2Matrix::identity(3), &bv(&[1, 0, 0])).unwrap().unwrap();
        assert_eq!(s.particular, bv(&[1, 0, 0]));
        assert!(s.kernel.is_empty());
    }

    #[test]
    fn solve_row() {
        let m = F2Matrix::from_rows(&[vec![1, 1]], 2);
        let s = gf2_solve(&m, &bv(&[1])).unwrap().unwrap();
        assert_eq!(m.mul_vec(&s.particular), bv(&[1]));
        assert_eq!(s.kernel, vec![bv(&[1, 1])]);
    }

    #[test]
    fn solve_zero_matrix() {
        assert!(gf2_solve(&F2Matrix::zeros(1, 1), &bv(&[1])).unwrap().is_none());
        assert!(gf2_solve(&F2Matrix::zeros(2, 1), &bv(&[1])).is_err());
    }

    #[test]
    fn affine_examples() {
        let full = Subspace::full(2);
        let a = F2AffineSet::new(bv(&[0, 0]), vec![]);
        assert_eq!(affine_meets_subspace(&a, &full).unwrap(), Some(bv(&[0, 0])));

        let e2 = Subspace::spanned_by(2, [bv(&[0, 1])]);
        let a = F2AffineSet::new(bv(&[1, 0]), vec![bv(&[1, 1])]);
        assert_eq!(affine_meets_subspace(&a, &e2).unwrap(), Some(bv(&[0, 1])));

        let a = F2AffineSet::new(bv(&[1, 0]), vec![]);
        assert_eq!(affine_meets_subspace(&a, &e2).unwrap(), None);
    }

    #[test]
    fn subspace_reduce_is_canonical() {
        let s = Subspace::spanned_by(4, [bv(&[1, 1, 0, 0]), bv(&[0, 1, 1, 0])]);
        assert_eq!(s.reduce(&bv(&[1, 0, 0, 1])), s.reduce(&bv(&[0, 1, 0, 1])));
        assert!(s.contains(&bv(&[1, 0, 1, 0])));
        assert_eq!(s.elements().len(), 4);
    }

    #[test]
    fn preimage_of_subspace() {
        // m: e0 -> e0, e1 -> e1, e2 -> e0+e1
        let m = F2Matrix::from_rows(&[vec![1, 0, 1], vec![0, 1, 1]], 3);
        let target = Subspace::spanned_by(2, [bv(&[1, 1])]);
        let pre = preimage(&m, &target);
        assert_eq!(pre.dim(), 2);
        assert!(pre.contains(&bv(&[0, 0, 1])));
        assert!(pre.contains(&bv(&[1, 1, 0])));
    }

    #[test]
    fn bitvec_words() {
        let mut v = BitVec::zeros(130);
        v.set(0, true);
        v.set(64, true);
        v.set(129, true);
        assert_eq!(v.to_indices(), vec![0, 64, 129]);
        assert_eq!(v.count_ones(), 3);
        assert_eq!(v.slice(64, 66).to_indices(), vec![0, 65]);
    }
}
