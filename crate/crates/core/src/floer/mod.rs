//! Heegaard Floer computations on nice diagrams over GF(2): the hat
//! differential and its J₊ splitting, homology per SpinC class, the contact
//! class and its spectral order.
//!
//! On a nice diagram every positive index-one domain is an empty embedded
//! bigon or rectangle with exactly one holomorphic representative, so the
//! differential is read off the positive-domain enumeration.

pub mod order;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::diagram::{DiagramError, HeegaardDiagram};
use crate::domains::{Domain, DomainError, Domains, IndexOneDifferentials, SpinCTable};
use crate::linalg::{BitVec, F2Matrix, F2Solver};
use crate::nicefy::is_nice;

pub use order::{compute_order, exhaustive_order, reduce_by_k, verify_zigzag, InfiniteReason, KReduction, OrderError, OrderResult};

#[derive(Debug, Error)]
pub enum FloerError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("diagram is not nice; run `makenice` first")]
    NotNice,
    #[error("SpinC class {0} does not exist ({1} classes)")]
    NoSuchClass(usize, usize),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

/// Differential count between two generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffCount {
    pub from: usize,
    pub to: usize,
    pub domains: Vec<Domain>,
    /// Number of domains with J₊ = 0 (bigons and one kind of rectangle).
    pub j0: usize,
    /// Number of domains with J₊ = 2.
    pub j2: usize,
}

impl DiffCount {
    pub fn count(&self) -> usize {
        self.domains.len()
    }
}

/// The differentials of one SpinC class. Matrices are square over the
/// class members; column `j` is the boundary of member `j`.
#[derive(Debug, Clone)]
pub struct ClassComplex {
    pub class: usize,
    /// Global generator indices, sorted by (grading, index).
    pub members: Vec<usize>,
    /// Grading of each member (residue when `div != 0`).
    pub gradings: Vec<i64>,
    pub div: i64,
    pub diffs: Vec<DiffCount>,
    pub d_hat: F2Matrix,
    pub d0: F2Matrix,
    pub d1: F2Matrix,
}

/// Homology ranks of one class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Homology {
    pub class: usize,
    pub div: i64,
    pub ranks: BTreeMap<i64, usize>,
    pub total: usize,
}

impl ClassComplex {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn local_index(&self, generator: usize) -> Option<usize> {
        self.members.iter().position(|&g| g == generator)
    }

    fn residue(&self, g: i64) -> i64 {
        if self.div == 0 {
            g
        } else {
            g.rem_euclid(self.div)
        }
    }

    /// Local indices of members in the given grading.
    pub fn level(&self, grading: i64) -> Vec<usize> {
        let g = self.residue(grading);
        (0..self.len()).filter(|&i| self.gradings[i] == g).collect()
    }

    /// Checks ∂̂ = ∂₀ + ∂₁, ∂̂² = ∂₀² = ∂₁² = 0 and ∂₀∂₁ = ∂₁∂₀.
    pub fn check_identities(&self) -> Result<(), FloerError> {
        let fail = |what: &str| Err(FloerError::Internal(format!("class {}: {what}", self.class)));
        if self.d0.add(&self.d1) != self.d_hat {
            return fail("d_hat != d0 + d1");
        }
        if !self.d_hat.mul(&self.d_hat).is_zero() {
            return fail("d_hat^2 != 0");
        }
        if !self.d0.mul(&self.d0).is_zero() {
            return fail("d0^2 != 0");
        }
        if !self.d1.mul(&self.d1).is_zero() {
            return fail("d1^2 != 0");
        }
        if self.d0.mul(&self.d1) != self.d1.mul(&self.d0) {
            return fail("d0 d1 != d1 d0");
        }
        Ok(())
    }

    fn block(m: &F2Matrix, rows: &[usize], cols: &[usize]) -> F2Matrix {
        F2Matrix::from_columns(
            rows.len(),
            cols.iter().map(|&c| BitVec::from_indices(rows.len(), (0..rows.len()).filter(|&i| m.get(rows[i], c)))).collect(),
        )
    }

    /// Rank of the hat homology at each grading (residue) and in total.
    pub fn homology(&self) -> Homology {
        let mut levels: Vec<i64> = self.gradings.clone();
        levels.dedup();
        let mut ranks = BTreeMap::new();
        for &g in &levels {
            let here = self.level(g);
            let below = self.level(g - 1);
            let above = self.level(g + 1);
            let out_rank = Self::block(&self.d_hat, &below, &here).rank();
            let in_rank = Self::block(&self.d_hat, &here, &above).rank();
            ranks.insert(g, here.len() - out_rank - in_rank);
        }
        let total = self.len() - 2 * self.d_hat.rank();
        Homology { class: self.class, div: self.div, ranks, total }
    }

    /// `x_i -> x_j : count=c J0=a J2=b` lines, with global indices.
    pub fn differentials_text(&self) -> String {
        let mut s = String::new();
        for d in &self.diffs {
            let _ = writeln!(s, "x_{} -> x_{} : count={} J0={} J2={}", d.from, d.to, d.count(), d.j0, d.j2);
        }
        s
    }

    /// DOT digraph with one edge per mod-2 nonzero differential.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"{}_spinc_{}\" {{", dot_escape(name), self.class);
        for (i, &g) in self.members.iter().enumerate() {
            let _ = writeln!(s, "  x{g} [label=\"x_{g}\\ngr={}\"];", self.gradings[i]);
        }
        for d in &self.diffs {
            if d.count() % 2 == 1 {
                let style = if d.j0 % 2 == 1 { "solid" } else { "dashed" };
                let _ = writeln!(s, "  x{} -> x{} [style={style}];", d.from, d.to);
            }
        }
        s.push_str("}\n");
        s
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// DOT digraph of candidate differentials on an arbitrary diagram: every
/// positive index-one domain is an edge; those that are embedded bigons or
/// rectangles (hence have a unique holomorphic representative) are blue.
pub fn plot_candidates(domains: &Domains, table: &SpinCTable, diffs: &IndexOneDifferentials, class: usize) -> Result<String, FloerError> {
    let mut s = String::new();
    let _ = writeln!(s, "digraph \"{}_spinc_{class}\" {{", dot_escape(&domains.diagram.name));
    let members = table.classes.get(class).ok_or(FloerError::NoSuchClass(class, table.classes.len()))?;
    for &g in members {
        let _ = writeln!(s, "  x{g} [label=\"x_{g}\\ngr={}\"];", table.gradings[g]);
    }
    for (&(x, y), doms) in &diffs.pairs {
        if table.class_of[x] != class {
            continue;
        }
        for d in doms {
            let color = if is_embedded_polygon(domains, d)? { "blue" } else { "black" };
            let _ = writeln!(s, "  x{x} -> x{y} [color={color}];");
        }
    }
    s.push_str("}\n");
    Ok(s)
}

fn is_embedded_polygon(domains: &Domains, d: &Domain) -> Result<bool, FloerError> {
    if d.coeffs.iter().any(|&c| c > 1) {
        return Ok(false);
    }
    let e2 = domains.euler_measure_2(&d.coeffs);
    let t = domains.domain_type(d)?;
    Ok(matches!(e2, 0 | 1) && t.euler == 1 && t.boundary_components == 1)
}

/// The canonical class split at the contact generator: `C0` is its grading,
/// `C1` one above; maps go `C1 -> C0`.
#[derive(Debug, Clone)]
pub struct SplitDifferential {
    pub class: usize,
    /// Global generator indices.
    pub c0: Vec<usize>,
    pub c1: Vec<usize>,
    pub d_hat: F2Matrix,
    pub d0: F2Matrix,
    pub d1: F2Matrix,
    /// The contact generator as a chain in `C0`.
    pub x: BitVec,
    /// Gradings are only defined modulo `div`.
    pub graded_mod_div: Option<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ContactClass {
    Zero,
    Nonzero,
}

impl ContactClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ContactClass::Zero => "zero",
            ContactClass::Nonzero => "nonzero",
        }
    }
}

/// Everything the `order` command reports.
#[derive(Debug, Clone)]
pub struct OrderReport {
    pub class: usize,
    pub contact_generator: usize,
    pub c0: Vec<usize>,
    pub c1: Vec<usize>,
    pub contact_class: ContactClass,
    pub order: OrderResult,
    pub graded_mod_div: Option<i64>,
    /// True when every Chern number of the class vanishes.
    pub torsion: bool,
}

impl OrderReport {
    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::json;
        let mut v = json!({
            "contact_class": self.contact_class.as_str(),
            "spinc": self.class,
            "contact_generator": self.contact_generator,
            "c0": self.c0,
            "c1": self.c1,
            "graded_mod_div": self.graded_mod_div,
            "torsion": self.torsion,
        });
        match &self.order {
            OrderResult::Finite { order, certificate } => {
                v["order"] = json!(order);
                let chains: Vec<Vec<usize>> = certificate.iter().map(|b| b.ones().map(|i| self.c1[i]).collect()).collect();
                v["certificate"] = json!(chains);
            }
            OrderResult::Infinite { reason, stable_index } => {
                v["order"] = json!("infinity");
                v["reason"] = json!({ "kind": reason, "description": reason.to_string(), "m": stable_index });
            }
        }
        v
    }
}

/// Floer engine for a nice diagram.
#[derive(Debug, Clone)]
pub struct NiceFloer {
    pub domains: Domains,
    pub table: SpinCTable,
}

impl NiceFloer {
    /// Refuses diagrams that are not nice.
    pub fn new(diagram: HeegaardDiagram) -> Result<Self, FloerError> {
        if !is_nice(&diagram.region_list()) {
            return Err(FloerError::NotNice);
        }
        let domains = Domains::new(diagram);
        let table = domains.spinc_partition()?;
        Ok(NiceFloer { domains, table })
    }

    pub fn num_classes(&self) -> usize {
        self.table.classes.len()
    }

    /// Positive index-one domains from generator `i` to `j`, classified by J₊.
    pub fn find_diffs(&self, i: usize, j: usize) -> Result<DiffCount, FloerError> {
        let mut domains = Vec::new();
        for d in self.domains.find_pos_domains(i, j)? {
            if self.domains.maslov_index(&d.coeffs, i, j)? == 1 {
                domains.push(d);
            }
        }
        self.classify(i, j, domains)
    }

    fn classify(&self, i: usize, j: usize, domains: Vec<Domain>) -> Result<DiffCount, FloerError> {
        let (mut j0, mut j2) = (0, 0);
        for d in &domains {
            let e2 = self.domains.euler_measure_2(&d.coeffs);
            if !matches!(e2, 0 | 1) {
                return Err(FloerError::Internal(format!("index-one domain x_{i} -> x_{j} has 2e = {e2}")));
            }
            match self.domains.j_plus(&d.coeffs, i, j)? {
                0 => j0 += 1,
                2 => j2 += 1,
                other => return Err(FloerError::Internal(format!("index-one domain x_{i} -> x_{j} has J+ = {other}"))),
            }
        }
        Ok(DiffCount { from: i, to: j, domains, j0, j2 })
    }

    /// All differentials of one class, with the identities checked.
    pub fn class_complex(&self, class: usize) -> Result<ClassComplex, FloerError> {
        let n_classes = self.num_classes();
        let mut members = self.table.classes.get(class).ok_or(FloerError::NoSuchClass(class, n_classes))?.clone();
        members.sort_by_key(|&g| (self.table.gradings[g], g));
        let local: BTreeMap<usize, usize> = members.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let n = members.len();
        let pairs = self.domains.index1_differentials_in_class(&self.table, class)?;
        let mut diffs = Vec::new();
        let (mut d_hat, mut d0, mut d1) = (F2Matrix::zeros(n, n), F2Matrix::zeros(n, n), F2Matrix::zeros(n, n));
        for ((x, y), doms) in pairs.pairs {
            let dc = self.classify(x, y, doms)?;
            let (r, c) = (local[&y], local[&x]);
            d_hat.set(r, c, dc.count() % 2 == 1);
            d0.set(r, c, dc.j0 % 2 == 1);
            d1.set(r, c, dc.j2 % 2 == 1);
            diffs.push(dc);
        }
        let cc = ClassComplex {
            class,
            gradings: members.iter().map(|&g| self.table.gradings[g]).collect(),
            members,
            div: self.table.div[class],
            diffs,
            d_hat,
            d0,
            d1,
        };
        cc.check_identities()?;
        Ok(cc)
    }

    pub fn contact_generator(&self) -> Result<usize, FloerError> {
        let g = self.domains.diagram.contact_generator()?;
        self.domains.generator_index(&g.points).ok_or_else(|| FloerError::Diagram(DiagramError::ContactNotGenerator(g.points.clone())))
    }

    /// Class of the contact generator.
    pub fn canonical_class(&self) -> Result<usize, FloerError> {
        Ok(self.table.class_of[self.contact_generator()?])
    }

    /// Splits the canonical class at the contact generator's grading and
    /// checks that the contact generator is a cycle.
    pub fn sort_canonical_spinc(&self, cc: &ClassComplex) -> Result<SplitDifferential, FloerError> {
        let xi = self.contact_generator()?;
        let li = cc.local_index(xi).ok_or_else(|| FloerError::Internal("contact generator missing from its class".into()))?;
        if !cc.d_hat.column(li).is_zero() {
            return Err(FloerError::Internal("contact generator is not a cycle".into()));
        }
        let g = cc.gradings[li];
        let l0 = cc.level(g);
        let l1 = cc.level(g + 1);
        let pos0 = l0.iter().position(|&i| i == li).expect("contact generator in its own level");
        Ok(SplitDifferential {
            class: cc.class,
            c0: l0.iter().map(|&i| cc.members[i]).collect(),
            c1: l1.iter().map(|&i| cc.members[i]).collect(),
            d_hat: ClassComplex::block(&cc.d_hat, &l0, &l1),
            d0: ClassComplex::block(&cc.d0, &l0, &l1),
            d1: ClassComplex::block(&cc.d1, &l0, &l1),
            x: BitVec::unit(l0.len(), pos0),
            graded_mod_div: (cc.div != 0).then_some(cc.div),
        })
    }

    /// Zero iff the contact generator is a boundary.
    pub fn check_contact_class(split: &SplitDifferential) -> ContactClass {
        if F2Solver::new(&split.d_hat).solve(&split.x).is_some() {
            ContactClass::Zero
        } else {
            ContactClass::Nonzero
        }
    }

    /// Full pipeline on the canonical class.
    pub fn order_report(&self) -> Result<OrderReport, FloerError> {
        let class = self.canonical_class()?;
        let cc = self.class_complex(class)?;
        self.order_report_for(&cc)
    }

    /// As [`Self::order_report`], reusing an already built canonical complex.
    pub fn order_report_for(&self, cc: &ClassComplex) -> Result<OrderReport, FloerError> {
        let split = self.sort_canonical_spinc(cc)?;
        let contact_class = Self::check_contact_class(&split);
        let order = compute_order(&split.d0, &split.d1, &split.x)?;
        let xi = self.contact_generator()?;
        let torsion = self.table.chern[xi].iter().all(|&c| c == 0);
        if contact_class == ContactClass::Zero && split.graded_mod_div.is_none() && torsion && order.order().is_none() {
            return Err(FloerError::Internal("contact class vanishes but the order is infinite".into()));
        }
        Ok(OrderReport {
            class: split.class,
            contact_generator: xi,
            c0: split.c0,
            c1: split.c1,
            contact_class,
            order,
            graded_mod_div: split.graded_mod_div,
            torsion,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn engine(json: &str) -> NiceFloer {
        NiceFloer::new(HeegaardDiagram::from_text(json).unwrap()).unwrap()
    }

    fn total_rank(f: &NiceFloer) -> usize {
        (0..f.num_classes()).map(|c| f.class_complex(c).unwrap().homology().total).sum()
    }

    #[test]
    fn tight_sphere() {
        let f = engine(include_str!("../../fixtures/tight_s3_finger.json"));
        assert_eq!(total_rank(&f), 1);
        let r = f.order_report().unwrap();
        assert_eq!(r.contact_class, ContactClass::Nonzero);
        assert_eq!(r.order.order(), None);
    }

    #[test]
    fn overtwisted_sphere() {
        let f = engine(include_str!("../../fixtures/overtwisted_s3.json"));
        assert_eq!(total_rank(&f), 1);
        let r = f.order_report().unwrap();
        assert_eq!(r.contact_class, ContactClass::Zero);
        assert_eq!(r.order.order(), Some(0));
    }

    #[test]
    fn s1xs2_has_rank_two() {
        let f = engine(include_str!("../../fixtures/s1xs2.json"));
        assert_eq!(total_rank(&f), 2);
    }

    #[test]
    fn refuses_non_nice() {
        let d = HeegaardDiagram::from_text(include_str!("../../fixtures/m12.json")).unwrap();
        assert!(matches!(NiceFloer::new(d), Err(FloerError::NotNice)));
    }
}
