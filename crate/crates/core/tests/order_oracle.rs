mod common;

use obd_floer::floer::{compute_order, exhaustive_order, reduce_by_k, verify_zigzag, InfiniteReason, OrderResult};
use obd_floer::linalg::{BitVec, F2Matrix, Subspace};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn instance(seed: u64, max_dim: usize) -> (F2Matrix, F2Matrix, BitVec) {
    common::random_split_complex(&mut ChaCha8Rng::seed_from_u64(seed), max_dim)
}

fn subspaces(dim: usize) -> Vec<Subspace> {
    let vs = common::all_vectors(dim);
    let mut out: Vec<Subspace> = Vec::new();
    for mask in 0u64..1 << vs.len() {
        let s = Subspace::spanned_by(dim, (0..vs.len()).filter(|i| mask >> i & 1 == 1).map(|i| vs[i].clone()));
        if !out.iter().any(|t| t.same_as(&s)) {
            out.push(s);
        }
    }
    out
}

/// `d1` induces an injection `C1/K -> C0/d0(K)`.
fn induces_injection(d0: &F2Matrix, d1: &F2Matrix, k: &Subspace) -> bool {
    let image = Subspace::spanned_by(d0.rows(), k.basis().iter().map(|v| d0.mul_vec(v)));
    common::all_vectors(d1.cols()).iter().all(|b| !image.contains(&d1.mul_vec(b)) || k.contains(b))
}

#[test]
fn worked_example() {
    let col = |idx: &[usize]| BitVec::from_indices(3, idx.iter().copied());
    let d0 = F2Matrix::from_columns(3, vec![col(&[0, 1]), col(&[])]);
    let d1 = F2Matrix::from_columns(3, vec![col(&[2]), col(&[1])]);
    let x = col(&[0]);
    let OrderResult::Finite { order, certificate } = compute_order(&d0, &d1, &x).unwrap() else { panic!("expected finite") };
    assert_eq!(order, 1);
    assert_eq!(certificate.len(), 2);
    assert!(verify_zigzag(&d0, &d1, &x, &certificate));
}

#[test]
fn both_outcomes_occur() {
    let orders: Vec<Option<usize>> = (0..200)
        .map(|s| {
            let (d0, d1, x) = instance(s, 4);
            compute_order(&d0, &d1, &x).unwrap().order()
        })
        .collect();
    assert!(orders.contains(&None));
    assert!(orders.contains(&Some(0)));
    assert!(orders.iter().any(|o| matches!(o, Some(k) if *k >= 1)));
}

proptest! {
    #[test]
    fn agrees_with_exhaustive_search(seed in any::<u64>()) {
        let (d0, d1, x) = instance(seed, 4);
        let res = compute_order(&d0, &d1, &x).unwrap();
        prop_assert_eq!(res.order(), exhaustive_order(&d0, &d1, &x));
        if let OrderResult::Finite { order, certificate } = &res {
            prop_assert_eq!(certificate.len(), order + 1);
            prop_assert!(verify_zigzag(&d0, &d1, &x, certificate));
        }
    }

    #[test]
    fn infinite_reasons_are_consistent(seed in any::<u64>()) {
        let (d0, d1, x) = instance(seed, 4);
        if let OrderResult::Infinite { reason, .. } = compute_order(&d0, &d1, &x).unwrap() {
            let red = reduce_by_k(&d0, &d1).unwrap();
            match reason {
                InfiniteReason::KIsEverything => prop_assert_eq!(red.k.dim(), d0.cols()),
                InfiniteReason::QuotientD0Injective => prop_assert!(red.d0.is_injective()),
                InfiniteReason::NoIntersection => prop_assert!(!red.d0.is_injective()),
            }
        }
    }

    #[test]
    fn k_is_the_minimal_injective_quotient(seed in any::<u64>()) {
        let (d0, d1, _) = instance(seed, 3);
        let red = reduce_by_k(&d0, &d1).unwrap();
        prop_assert!(induces_injection(&d0, &d1, &red.k));
        for s in subspaces(d0.cols()) {
            if induces_injection(&d0, &d1, &s) {
                prop_assert!(red.k.is_subspace_of(&s));
            }
        }
        prop_assert!(red.d1.is_injective());
    }
}
