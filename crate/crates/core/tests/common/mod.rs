#![allow(dead_code)]

use std::path::PathBuf;

use obd_floer::diagram::{parse_region_list, RegionList};
use obd_floer::domains::Domains;
use obd_floer::linalg::{BitVec, F2Matrix};
use obd_floer::nicefy::finger_push;
use rand::Rng;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.json"))
}

pub fn fixture(name: &str) -> RegionList {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture exists");
    parse_region_list(&text).expect("fixture parses")
}

fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> F2Matrix {
    F2Matrix::from_columns(rows, (0..cols).map(|_| BitVec::from_indices(rows, (0..rows).filter(|_| rng.gen_bool(0.5)))).collect())
}

/// A random split complex `C2 -> C1 -> C0` with `d0² = d1² = 0` and
/// `d0 d1 = d1 d0`; returns the maps `C1 -> C0` and a random nonzero `x`
/// in `C0`.
///
/// The upper maps are uniform; the lower pair is a uniform element of the
/// linear space of pairs satisfying the identities.
pub fn random_split_complex<R: Rng>(rng: &mut R, max_dim: usize) -> (F2Matrix, F2Matrix, BitVec) {
    let n0 = rng.gen_range(1..=max_dim);
    let n1 = rng.gen_range(0..=max_dim);
    let n2 = rng.gen_range(0..=max_dim);
    let (u0, u1) = (random_matrix(rng, n1, n2), random_matrix(rng, n1, n2));
    let unknowns = 2 * n0 * n1;
    let unpack = |v: &BitVec| {
        let mut d0 = F2Matrix::zeros(n0, n1);
        let mut d1 = F2Matrix::zeros(n0, n1);
        for i in v.ones() {
            let (m, rest) = (i / (n0 * n1), i % (n0 * n1));
            let (r, c) = (rest / n1, rest % n1);
            if m == 0 {
                d0.set(r, c, true);
            } else {
                d1.set(r, c, true);
            }
        }
        (d0, d1)
    };
    let constraints = |d0: &F2Matrix, d1: &F2Matrix| {
        let parts = [d0.mul(&u0), d1.mul(&u1), d0.mul(&u1).add(&d1.mul(&u0))];
        BitVec::concat(&parts.iter().flat_map(|m| m.columns().to_vec()).collect::<Vec<_>>())
    };
    let rows = 3 * n0 * n2;
    let cols: Vec<BitVec> = (0..unknowns)
        .map(|i| {
            let (d0, d1) = unpack(&BitVec::unit(unknowns, i));
            constraints(&d0, &d1)
        })
        .collect();
    let system = F2Matrix::from_columns(rows, cols);
    let mut pick = BitVec::zeros(unknowns);
    for k in system.kernel() {
        if rng.gen_bool(0.5) {
            pick.xor_assign(&k);
        }
    }
    let (d0, d1) = unpack(&pick);
    assert!(constraints(&d0, &d1).is_zero());
    let mut x = BitVec::zeros(n0);
    while x.is_zero() {
        x = BitVec::from_indices(n0, (0..n0).filter(|_| rng.gen_bool(0.5)));
    }
    (d0, d1, x)
}

/// Applies up to `pushes` random finger pushes; pushes the engine refuses
/// are skipped.
pub fn random_pushes<R: Rng>(rng: &mut R, base: &RegionList, pushes: usize) -> RegionList {
    let mut rl = base.clone();
    let mut done = 0;
    for _ in 0..50 * pushes.max(1) {
        if done == pushes {
            break;
        }
        let r = rng.gen_range(0..rl.num_unpointed());
        if !rl.regions[r].is_disk() {
            continue;
        }
        let m = rl.regions[r].corner_count() / 2;
        if let Ok(next) = finger_push(&rl, r, rng.gen_range(0..m), rng.gen_range(0..m)) {
            rl = next;
            done += 1;
        }
    }
    rl
}

/// Hat differential over all generators, counted from the unpruned box
/// scan: entry (y, x) is the parity of positive index-one domains x -> y.
pub fn brute_differential(d: &Domains) -> F2Matrix {
    let n = d.generators.len();
    let mut m = F2Matrix::zeros(n, n);
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            let count =
                d.find_pos_domains_unpruned(x, y).unwrap().iter().filter(|dom| d.maslov_index(&dom.coeffs, x, y).unwrap() == 1).count();
            m.set(y, x, count % 2 == 1);
        }
    }
    m
}

/// All vectors of `F2^n` (n small).
pub fn all_vectors(n: usize) -> Vec<BitVec> {
    assert!(n < 20);
    (0u64..1 << n).map(|m| BitVec::from_mask(n, m)).collect()
}

/// Homology rank by counting cycles and boundaries one vector at a time.
pub fn brute_homology_rank(d: &F2Matrix) -> usize {
    let vs = all_vectors(d.cols());
    let cycles = vs.iter().filter(|v| d.mul_vec(v).is_zero()).count();
    let mut boundaries: Vec<Vec<usize>> = vs.iter().map(|v| d.mul_vec(v).to_indices()).collect();
    boundaries.sort();
    boundaries.dedup();
    (cycles / boundaries.len()).trailing_zeros() as usize
}

/// Whether `x` is a boundary, by trying every chain.
pub fn brute_is_boundary(d: &F2Matrix, x: &BitVec) -> bool {
    all_vectors(d.cols()).iter().any(|v| d.mul_vec(v) == *x)
}

/// Minimal syntax check for the DOT subset the tool writes: a `digraph`
/// header, node and edge statements with bracketed attributes, and
/// balanced braces and quotes.
pub fn dot_is_valid(text: &str) -> bool {
    let mut lines = text.lines();
    let Some(header) = lines.next() else { return false };
    if !(header.starts_with("digraph ") && header.ends_with('{')) {
        return false;
    }
    let body: Vec<&str> = lines.collect();
    let Some((last, stmts)) = body.split_last() else { return false };
    if last.trim() != "}" {
        return false;
    }
    stmts.iter().all(|l| {
        let l = l.trim();
        let Some(stmt) = l.strip_suffix(';') else { return false };
        let (head, attrs) = match stmt.find('[') {
            Some(i) => (stmt[..i].trim(), Some(&stmt[i..])),
            None => (stmt, None),
        };
        let ids_ok = head.split("->").all(|id| {
            let id = id.trim();
            !id.is_empty() && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        });
        let attrs_ok = attrs.is_none_or(|a| a.ends_with(']') && a.matches('"').count() % 2 == 0);
        ids_ok && attrs_ok
    })
}
