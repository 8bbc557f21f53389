//! Exact integer matrices: Smith normal form with transforms, integer
//! solving and kernel lattices.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::LinalgError;

/// Dense matrix of arbitrary-precision integers, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of machine integers. All rows must have the
    /// same length; `cols` is used when `rows` is empty.
    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged row {i}");
            for (j, &v) in row.iter().enumerate() {
                m.data[i * cols + j] = BigInt::from(v);
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

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] += v;
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Submatrix made of the given columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &j) in cols.iter().enumerate() {
                m.set(i, k, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter().zip(v).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    pub fn mul_vec_i64(&self, v: &[i64]) -> Vec<BigInt> {
        let big: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        self.mul_vec(&big)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] -= q * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let s = self.data[src * self.cols + j].clone();
            if !s.is_zero() {
                self.data[dst * self.cols + j] -= q * s;
            }
        }
    }

    /// col[dst] -= q * col[src]
    fn col_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let s = self.data[i * self.cols + src].clone();
            if !s.is_zero() {
                self.data[i * self.cols + dst] -= q * s;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self.data[r * self.cols + j]);
            self.data[r * self.cols + j] = v;
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// `left * m * right = diag(invariants, 0, ...)` with `left`, `right`
/// unimodular and each invariant dividing the next.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub invariants: Vec<BigInt>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    /// Solves `m * c = v` over the integers, returning one solution.
    pub fn solve(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let w = self.left.mul_vec(v);
        let r = self.rank();
        if w[r..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut z = vec![BigInt::zero(); self.right.rows()];
        for (k, s) in self.invariants.iter().enumerate() {
            let (q, rem) = w[k].div_rem(s);
            if !rem.is_zero() {
                return None;
            }
            z[k] = q;
        }
        Some(self.right.mul_vec(&z))
    }

    /// Basis of the integer kernel: the trailing columns of `right`.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        (self.rank()..self.right.cols()).map(|j| self.right.column(j)).collect()
    }

    /// Invariant describing the coset of `v` in `Z^rows / image(m)`. Two
    /// vectors differ by an element of the image iff their keys agree.
    pub fn coset_key(&self, v: &[BigInt]) -> Vec<BigInt> {
        let w = self.left.mul_vec(v);
        w.into_iter()
            .enumerate()
            .map(|(k, x)| match self.invariants.get(k) {
                Some(s) => x.mod_floor(s),
                None => x,
            })
            .collect()
    }
}

/// Computes the Smith normal form of `m` together with both transforms.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);
    let mut invariants = Vec::new();

    for t in 0..rows.min(cols) {
        // smallest nonzero pivot in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let v = a.get(i, j);
                if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < a.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap_rows(t, pi);
        left.swap_rows(t, pi);
        a.swap_cols(t, pj);
        right.swap_cols(t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = a.get(i, t).div_floor(a.get(t, t));
                a.row_axpy(i, t, &q);
                left.row_axpy(i, t, &q);
                if !a.get(i, t).is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = a.get(t, j).div_floor(a.get(t, t));
                a.col_axpy(j, t, &q);
                right.col_axpy(j, t, &q);
                if !a.get(t, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // bring a smaller remainder onto the pivot and repeat
                let mut best = (t, t);
                for i in t..rows {
                    let v = a.get(i, t);
                    if !v.is_zero() && v.abs() < a.get(best.0, best.1).abs() {
                        best = (i, t);
                    }
                }
                for j in t..cols {
                    let v = a.get(t, j);
                    if !v.is_zero() && v.abs() < a.get(best.0, best.1).abs() {
                        best = (t, j);
                    }
                }
                a.swap_rows(t, best.0);
                left.swap_rows(t, best.0);
                a.swap_cols(t, best.1);
                right.swap_cols(t, best.1);
                continue;
            }
            // divisibility of the trailing block by the pivot
            let pivot = a.get(t, t).clone();
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a.get(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    a.row_axpy(t, i, &minus_one);
                    left.row_axpy(t, i, &minus_one);
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            left.negate_row(t);
        }
        invariants.push(a.get(t, t).clone());
    }
    SmithForm { left, right, invariants }
}

/// One integer solution of `m * c = v`, or `None` if there is none.
pub fn solve_integer(m: &IntMatrix, v: &[BigInt]) -> Result<Option<Vec<BigInt>>, LinalgError> {
    if v.len() != m.rows {
        return Err(LinalgError::Dimension { expected: m.rows, found: v.len() });
    }
    Ok(smith_normal_form(m).solve(v))
}

/// A basis of the free abelian group `{c : m * c = 0}`.
pub fn integer_kernel_basis(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    smith_normal_form(m).kernel_basis()
}

/// Rank over the rationals by fraction-free elimination. Independent of the
/// Smith form code path.
pub fn rational_rank(m: &IntMatrix) -> usize {
    let mut a = m.clone();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..a.cols {
        if rank == a.rows {
            break;
        }
        let Some(p) = (rank..a.rows).find(|&i| !a.get(i, c).is_zero()) else { continue };
        a.swap_rows(rank, p);
        for i in rank + 1..a.rows {
            for j in c + 1..a.cols {
                let v = (a.get(rank, c) * a.get(i, j) - a.get(i, c) * a.get(rank, j)) / &prev;
                a.set(i, j, v);
            }
            a.set(i, c, BigInt::zero());
        }
        prev = a.get(rank, c).clone();
        rank += 1;
    }
    rank
}

pub fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Converts to machine integers; panics on overflow.
pub fn to_i64(v: &[BigInt]) -> Vec<i64> {
    v.iter().map(|x| i64::try_from(x).expect("coefficient exceeds i64")).collect()
}
