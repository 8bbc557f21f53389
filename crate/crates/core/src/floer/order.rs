//! Spectral order of a cycle `x` under a split differential `d0 + d1`, both
//! viewed as maps `C1 -> C0` over GF(2).
//!
//! The order is the least `k` for which chains `b0, …, bk` in `C1` solve the
//! zigzag system
//!
//! ```text
//! d0 b0 + d1 b1 = x,   d0 b(i) + d1 b(i+1) = 0 (1 <= i < k),   d0 bk = 0
//! ```
//!
//! (for `k = 0`: `d0 b0 = x`), or infinity if there are none.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::linalg::f2::{image_of, preimage};
use crate::linalg::{affine_meets_subspace, BitVec, F2AffineSet, F2Matrix, F2Solver, Subspace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("dimension mismatch: d0 is {0}x{1}, d1 is {2}x{3}, x has length {4}")]
    Shape(usize, usize, usize, usize, usize),
    #[error("internal error in order computation: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InfiniteReason {
    /// The minimal subspace `K` is all of `C1`.
    KIsEverything,
    /// The induced `d0` on `C1/K` is injective.
    QuotientD0Injective,
    /// The remainder set misses the stable kernel of `δ`.
    NoIntersection,
}

impl fmt::Display for InfiniteReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InfiniteReason::KIsEverything => "K = C1",
            InfiniteReason::QuotientD0Injective => "induced d0 on C1/K is injective",
            InfiniteReason::NoIntersection => "remainder set misses the stable kernel of delta",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderResult {
    /// Finite order with chains `b0..=bk` solving the zigzag system.
    Finite { order: usize, certificate: Vec<BitVec> },
    /// `stable_index` is the index at which the `δ` kernels stabilised (0
    /// when the machinery stopped earlier).
    Infinite { reason: InfiniteReason, stable_index: usize },
}

impl OrderResult {
    pub fn order(&self) -> Option<usize> {
        match self {
            OrderResult::Finite { order, .. } => Some(*order),
            OrderResult::Infinite { .. } => None,
        }
    }
}

/// `C1/K` and `C0/d0(K)` with the induced maps. Quotient vectors of `C0`
/// are the canonical representatives `image.reduce(v)`; `C1/K` has the
/// basis of unit vectors on `coords`.
#[derive(Debug, Clone)]
pub struct KReduction {
    pub k: Subspace,
    pub image: Subspace,
    pub coords: Vec<usize>,
    pub d0: F2Matrix,
    pub d1: F2Matrix,
    pub iterations: usize,
}

impl KReduction {
    fn embed(&self, q: &BitVec, dim: usize) -> BitVec {
        BitVec::from_indices(dim, q.ones().map(|i| self.coords[i]))
    }
}

fn check_shapes(d0: &F2Matrix, d1: &F2Matrix, x_len: usize) -> Result<(), OrderError> {
    if d0.rows() != d1.rows() || d0.cols() != d1.cols() || x_len != d0.rows() {
        return Err(OrderError::Shape(d0.rows(), d0.cols(), d1.rows(), d1.cols(), x_len));
    }
    Ok(())
}

/// The minimal `K ⊆ C1` for which `d1` induces an injection
/// `C1/K -> C0/d0(K)`: the limit of `K0 = ker d1`,
/// `K(i) = d1⁻¹(d0(K(i-1)))`.
pub fn reduce_by_k(d0: &F2Matrix, d1: &F2Matrix) -> Result<KReduction, OrderError> {
    check_shapes(d0, d1, d0.rows())?;
    let zero = Subspace::new(d0.rows());
    let mut k = preimage(d1, &zero);
    let mut iterations = 0;
    loop {
        let next = preimage(d1, &image_of(d0, &k));
        iterations += 1;
        if !k.is_subspace_of(&next) {
            return Err(OrderError::Internal("K sequence is not increasing".into()));
        }
        if next.dim() == k.dim() {
            break;
        }
        k = next;
    }
    let image = image_of(d0, &k);
    let pivots: BTreeSet<usize> = k.pivots().iter().copied().collect();
    let coords: Vec<usize> = (0..d0.cols()).filter(|c| !pivots.contains(c)).collect();
    let induced = |m: &F2Matrix| F2Matrix::from_columns(m.rows(), coords.iter().map(|&c| image.reduce(m.column(c))).collect());
    let (q0, q1) = (induced(d0), induced(d1));
    if !q1.is_injective() {
        return Err(OrderError::Internal("induced d1 is not injective".into()));
    }
    Ok(KReduction { k, image, coords, d0: q0, d1: q1, iterations })
}

/// Checks the zigzag system for `chains = [b0, …, bk]`.
pub fn verify_zigzag(d0: &F2Matrix, d1: &F2Matrix, x: &BitVec, chains: &[BitVec]) -> bool {
    let Some(last) = chains.last() else { return false };
    if chains.len() == 1 {
        return d0.mul_vec(last) == *x;
    }
    for i in 0..chains.len() - 1 {
        let lhs = d0.mul_vec(&chains[i]).xor(&d1.mul_vec(&chains[i + 1]));
        let rhs = if i == 0 { x.clone() } else { BitVec::zeros(x.len()) };
        if lhs != rhs {
            return false;
        }
    }
    d0.mul_vec(last).is_zero()
}

/// Order of `x` with a certificate for finite values.
pub fn compute_order(d0: &F2Matrix, d1: &F2Matrix, x: &BitVec) -> Result<OrderResult, OrderError> {
    check_shapes(d0, d1, x.len())?;
    let c1 = d0.cols();
    let solver0 = F2Solver::new(d0);
    if let Some(b0) = solver0.solve(x) {
        return Ok(OrderResult::Finite { order: 0, certificate: vec![b0] });
    }

    let red = reduce_by_k(d0, d1)?;
    if red.k.dim() == c1 {
        return Ok(OrderResult::Infinite { reason: InfiniteReason::KIsEverything, stable_index: 0 });
    }
    let (a, b) = (&red.d0, &red.d1);
    if a.is_injective() {
        return Ok(OrderResult::Infinite { reason: InfiniteReason::QuotientD0Injective, stable_index: 0 });
    }
    let x_bar = red.image.reduce(x);
    let remainder = F2AffineSet::new(x_bar.clone(), a.columns().to_vec());

    // In C1/K coordinates: E1 = ker A, E(k) = A⁻¹(B(E(k-1))); ker δᵏ = B(E(k)).
    // U0 = im B, U(i) = B(A⁻¹(U(i-1))).
    let q = red.coords.len();
    let mut e = preimage(a, &Subspace::new(a.rows()));
    let mut u = image_of(b, &Subspace::full(q));
    let mut k = 1;
    let hit = loop {
        let ker = image_of(b, &e);
        if let Some(r) = affine_meets_subspace(&remainder, &ker).map_err(|e| OrderError::Internal(e.to_string()))? {
            break Some(r);
        }
        let e_next = preimage(a, &ker);
        let u_next = image_of(b, &preimage(a, &u));
        if !e.is_subspace_of(&e_next) {
            return Err(OrderError::Internal("kernels of powers of delta are not nested".into()));
        }
        if e_next.same_as(&e) && u_next.same_as(&u) {
            break None;
        }
        e = e_next;
        u = u_next;
        k += 1;
    };
    let Some(r) = hit else {
        return Ok(OrderResult::Infinite { reason: InfiniteReason::NoIntersection, stable_index: k });
    };

    // zigzag in the quotient
    let solve_a = F2Solver::new(a);
    let solve_b = F2Solver::new(b);
    let internal = |m: &str| OrderError::Internal(m.to_string());
    let q0 = solve_a.solve(&r.xor(&x_bar)).ok_or_else(|| internal("r is not in the remainder set"))?;
    let mut qs = vec![q0];
    let mut ri = r;
    for i in 1..=k {
        let qi = solve_b.solve(&ri).ok_or_else(|| internal("r_i is not in the image of d1"))?;
        ri = a.mul_vec(&qi);
        qs.push(qi);
        if i == k && !ri.is_zero() {
            return Err(internal("delta^k r is not zero"));
        }
    }

    // lift to C1: correct each chain by an element of K, last to first
    let kb = red.k.basis();
    let d0k = F2Matrix::from_columns(d0.rows(), kb.iter().map(|v| d0.mul_vec(v)).collect());
    let solve_k = F2Solver::new(&d0k);
    let from_k = |v: &BitVec| -> Result<BitVec, OrderError> {
        let coeff = solve_k.solve(v).ok_or_else(|| internal("correction is not in d0(K)"))?;
        let mut out = BitVec::zeros(c1);
        for i in coeff.ones() {
            out.xor_assign(&kb[i]);
        }
        Ok(out)
    };
    let cs: Vec<BitVec> = qs.iter().map(|qv| red.embed(qv, c1)).collect();
    let mut bs = vec![BitVec::zeros(c1); k + 1];
    bs[k] = cs[k].xor(&from_k(&d0.mul_vec(&cs[k]))?);
    for i in (0..k).rev() {
        let mut v = d0.mul_vec(&cs[i]).xor(&d1.mul_vec(&bs[i + 1]));
        if i == 0 {
            v.xor_assign(x);
        }
        bs[i] = cs[i].xor(&from_k(&v)?);
    }
    if !verify_zigzag(d0, d1, x, &bs) {
        return Err(internal("certificate does not satisfy the zigzag system"));
    }
    debug_assert!(q == red.coords.len());
    Ok(OrderResult::Finite { order: k, certificate: bs })
}

/// Brute-force order by enumerating every chain in `C1` (small dimensions
/// only): `S1 = ker d0`, `S(j+1) = {b : d0 b = d1 b' for some b' in S(j)}`;
/// the order is the least `k` with `d0 b0 + d1 b1 = x` for some `b1` in
/// `S(k)`. Returns `None` for infinity.
pub fn exhaustive_order(d0: &F2Matrix, d1: &F2Matrix, x: &BitVec) -> Option<usize> {
    let c1 = d0.cols();
    assert!(c1 < 20, "exhaustive search needs a small C1");
    let all: Vec<BitVec> = (0u64..1 << c1).map(|m| BitVec::from_mask(c1, m)).collect();
    let img0: Vec<BitVec> = all.iter().map(|b| d0.mul_vec(b)).collect();
    let img1: Vec<BitVec> = all.iter().map(|b| d1.mul_vec(b)).collect();
    if img0.iter().any(|v| v == x) {
        return Some(0);
    }
    let targets: BTreeSet<Vec<usize>> = img0.iter().map(|v| v.xor(x).to_indices()).collect();
    let mut s: Vec<bool> = img0.iter().map(BitVec::is_zero).collect();
    let mut k = 1;
    loop {
        if (0..all.len()).any(|i| s[i] && targets.contains(&img1[i].to_indices())) {
            return Some(k);
        }
        let reach: BTreeSet<Vec<usize>> = (0..all.len()).filter(|&i| s[i]).map(|i| img1[i].to_indices()).collect();
        let next: Vec<bool> = img0.iter().map(|v| reach.contains(&v.to_indices())).collect();
        if next == s {
            return None;
        }
        s = next;
        k += 1;
    }
}
