//! Domains on a Heegaard diagram: periodic and connecting domains, positive
//! domain enumeration, Maslov index and J₊, SpinC classes and gradings.
//!
//! Sign convention: with `B` the beta-arc boundary matrix (`+1` at the head of
//! a beta arc, `-1` at its tail), a domain `D` from `x` to `y` satisfies
//! `B·D = x − y`. Under this convention a bigon `[a, b]` runs from the
//! generator containing `a` to the one containing `b`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::diagram::{Generator, HeegaardDiagram};
use crate::linalg::int::to_i64;
use crate::linalg::{lattice_points, polytope_box_bounds, smith_normal_form, BoxBounds, SmithForm, System};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DomainError {
    #[error("diagram is not weakly admissible: positive domain set is unbounded")]
    NotAdmissible,
    #[error("corrupted domain: {0}")]
    Corrupted(String),
}

/// Integer combination of unpointed regions, from generator `from` to `to`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Domain {
    pub coeffs: Vec<i64>,
    pub from: usize,
    pub to: usize,
}

impl Domain {
    pub fn is_positive(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

/// Topological data of the curve a positive domain would carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DomainType {
    pub j_plus: i64,
    pub euler: i64,
    pub boundary_components: i64,
    pub genus: i64,
}

#[derive(Debug, Clone)]
pub struct SpinCTable {
    /// Generator indices per class; classes ordered by smallest member.
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    /// Per generator, one number per hat-periodic basis element.
    pub chern: Vec<Vec<i64>>,
    /// Per class; 0 means integer graded.
    pub div: Vec<i64>,
    /// Per generator, relative to the class's first member; reduced to
    /// `0..div` when `div != 0`.
    pub gradings: Vec<i64>,
}

impl SpinCTable {
    /// Grading difference `gr(x) − gr(y)` reduced mod div.
    pub fn grading_difference(&self, x: usize, y: usize) -> i64 {
        let d = self.gradings[x] - self.gradings[y];
        let div = self.div[self.class_of[x]];
        if div == 0 {
            d
        } else {
            d.mod_floor(&div)
        }
    }

    fn same_residue(&self, class: usize, a: i64, b: i64) -> bool {
        let div = self.div[class];
        if div == 0 {
            a == b
        } else {
            (a - b).mod_floor(&div) == 0
        }
    }
}

/// Positive Maslov-index-one domains between graded pairs, with per-generator
/// views.
#[derive(Debug, Clone, Default)]
pub struct IndexOneDifferentials {
    pub pairs: BTreeMap<(usize, usize), Vec<Domain>>,
}

impl IndexOneDifferentials {
    pub fn from_generator(&self, x: usize) -> impl Iterator<Item = (&usize, &Vec<Domain>)> {
        self.pairs.range((x, 0)..=(x, usize::MAX)).map(|((_, y), d)| (y, d))
    }

    pub fn to_generator(&self, y: usize) -> impl Iterator<Item = (&usize, &Vec<Domain>)> {
        self.pairs.iter().filter(move |((_, t), _)| *t == y).map(|((x, _), d)| (x, d))
    }

    pub fn total(&self) -> usize {
        self.pairs.values().map(Vec::len).sum()
    }
}

/// Occurrences of a point as a corner, split by parity of the corner index.
#[derive(Debug, Clone, Default)]
struct CornerSides {
    even: Vec<usize>,
    odd: Vec<usize>,
}

/// Domain computations for one diagram and its generators.
#[derive(Debug, Clone)]
pub struct Domains {
    pub diagram: HeegaardDiagram,
    pub generators: Vec<Generator>,
    /// Basis of unpointed periodic domains.
    pub periodic: Vec<Vec<i64>>,
    /// Basis of periodic domains allowed to cover pointed regions.
    pub full_periodic: Vec<Vec<i64>>,
    hat_smith: SmithForm,
    full_smith: SmithForm,
    /// Per generator: (class key index, domain to the key's base generator).
    hat_offset: Vec<(usize, Vec<i64>)>,
    full_offset: Vec<(usize, Vec<i64>)>,
    corner_sides: Vec<CornerSides>,
    index: HashMap<Vec<usize>, usize>,
}

fn indicator(p: usize, points: &[usize]) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); p];
    for &q in points {
        v[q] += 1;
    }
    v
}

/// Groups generators by coset of their indicator modulo the image of the
/// matrix, and solves for a domain from each generator to its group's first
/// member.
fn offsets(smith: &SmithForm, p: usize, gens: &[Generator]) -> Vec<(usize, Vec<i64>)> {
    let mut keys: HashMap<Vec<BigInt>, (usize, usize)> = HashMap::new();
    let mut out = Vec::with_capacity(gens.len());
    for (i, g) in gens.iter().enumerate() {
        let e = indicator(p, &g.points);
        let key = smith.coset_key(&e);
        let next = keys.len();
        let (class, base) = *keys.entry(key).or_insert((next, i));
        let rhs: Vec<BigInt> = e.iter().zip(indicator(p, &gens[base].points)).map(|(a, b)| a - b).collect();
        let sol = smith.solve(&rhs).expect("vectors in one coset differ by an image element");
        out.push((class, to_i64(&sol)));
    }
    out
}

impl Domains {
    pub fn new(diagram: HeegaardDiagram) -> Self {
        let generators = diagram.enumerate_generators();
        Self::with_generators(diagram, generators)
    }

    pub fn with_generators(diagram: HeegaardDiagram, generators: Vec<Generator>) -> Self {
        let hat_smith = smith_normal_form(&diagram.boundary_mat_unpointed());
        let full_smith = smith_normal_form(&diagram.boundary_mat);
        let periodic = hat_smith.kernel_basis().iter().map(|v| to_i64(v)).collect();
        let full_periodic = full_smith.kernel_basis().iter().map(|v| to_i64(v)).collect();
        let p = diagram.num_points;
        let hat_offset = offsets(&hat_smith, p, &generators);
        let full_offset = offsets(&full_smith, p, &generators);

        let mut corner_sides = vec![CornerSides::default(); p];
        for (r, region) in diagram.regions.iter().enumerate() {
            for circuit in &region.circuits {
                for (i, &q) in circuit.iter().enumerate() {
                    if i % 2 == 0 {
                        corner_sides[q].even.push(r);
                    } else {
                        corner_sides[q].odd.push(r);
                    }
                }
            }
        }
        let index = generators.iter().enumerate().map(|(i, g)| (g.points.clone(), i)).collect();
        Domains { diagram, generators, periodic, full_periodic, hat_smith, full_smith, hat_offset, full_offset, corner_sides, index }
    }

    pub fn periodic_rank(&self) -> usize {
        self.periodic.len()
    }

    /// Index of the generator with exactly these points (in alpha order).
    pub fn generator_index(&self, points: &[usize]) -> Option<usize> {
        self.index.get(points).copied()
    }

    pub fn contact_index(&self) -> Option<usize> {
        let g = self.diagram.contact_generator().ok()?;
        self.generator_index(&g.points)
    }

    /// `B·D` over the unpointed columns (or all columns for a full domain).
    pub fn boundary_of(&self, coeffs: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.diagram.num_points];
        for (r, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (a, b) in self.diagram.regions[r].beta_arcs() {
                out[b] += c;
                out[a] -= c;
            }
        }
        out
    }

    /// Whether `coeffs` is a domain from generator `x` to generator `y`.
    pub fn satisfies_boundary(&self, coeffs: &[i64], x: usize, y: usize) -> bool {
        let mut want = vec![0i64; self.diagram.num_points];
        for &p in &self.generators[x].points {
            want[p] += 1;
        }
        for &p in &self.generators[y].points {
            want[p] -= 1;
        }
        self.boundary_of(coeffs) == want
    }

    /// No nonzero combination of periodic domains is everywhere non-negative.
    pub fn is_weakly_admissible(&self) -> bool {
        check_weak_admissibility(&self.periodic)
    }

    /// Some domain from `x` to `y` avoiding the pointed regions.
    pub fn connecting_domain(&self, x: usize, y: usize) -> Option<Domain> {
        let (cx, hx) = &self.hat_offset[x];
        let (cy, hy) = &self.hat_offset[y];
        (cx == cy).then(|| Domain { coeffs: hx.iter().zip(hy).map(|(a, b)| a - b).collect(), from: x, to: y })
    }

    /// Some domain from `x` to `y` over all regions.
    pub fn full_connecting_domain(&self, x: usize, y: usize) -> Option<Vec<i64>> {
        let (cx, hx) = &self.full_offset[x];
        let (cy, hy) = &self.full_offset[y];
        (cx == cy).then(|| hx.iter().zip(hy).map(|(a, b)| a - b).collect())
    }

    /// Solves directly rather than through the cached offsets (for checks).
    pub fn solve_connecting(&self, x: usize, y: usize, full: bool) -> Option<Vec<i64>> {
        let p = self.diagram.num_points;
        let rhs: Vec<BigInt> = indicator(p, &self.generators[x].points)
            .into_iter()
            .zip(indicator(p, &self.generators[y].points))
            .map(|(a, b)| a - b)
            .collect();
        let smith = if full { &self.full_smith } else { &self.hat_smith };
        smith.solve(&rhs).map(|v| to_i64(&v))
    }

    /// Contact points whose "even" quadrants all lie in pointed regions.
    /// Around such a point a positive domain can only use odd quadrants.
    fn shielded_contact(&self, c: usize) -> bool {
        self.corner_sides[c].even.iter().all(|&r| self.diagram.is_pointed(r))
    }

    fn polytope(&self, base: &[i64], prune: Option<(usize, usize)>) -> Option<System> {
        let r = self.periodic.len();
        let mut sys = System::new(r);
        for (k, &b) in base.iter().enumerate() {
            let row: Vec<BigInt> = self.periodic.iter().map(|p| BigInt::from(p[k])).collect();
            sys.push(row, b.into());
        }
        let Some((x, y)) = prune else { return Some(sys) };
        let (gx, gy) = (&self.generators[x], &self.generators[y]);
        for &c in &self.diagram.contact_points {
            if !self.shielded_contact(c) || gx.contains(c) == gy.contains(c) {
                continue;
            }
            if gx.contains(c) {
                // the local boundary equation at c would need a negative quadrant
                return None;
            }
            // exactly one odd quadrant carries multiplicity one
            for &region in &self.corner_sides[c].odd {
                if self.diagram.is_pointed(region) {
                    continue;
                }
                let row: Vec<BigInt> = self.periodic.iter().map(|p| BigInt::from(-p[region])).collect();
                sys.push(row, BigInt::from(1 - base[region]));
            }
        }
        Some(sys)
    }

    fn assemble(&self, base: &[i64], t: &[i64], x: usize, y: usize) -> Domain {
        let mut coeffs = base.to_vec();
        for (p, &tj) in self.periodic.iter().zip(t) {
            for (c, &pk) in coeffs.iter_mut().zip(p) {
                *c += tj * pk;
            }
        }
        Domain { coeffs, from: x, to: y }
    }

    /// All positive domains from `x` to `y`, sorted by coefficient vector.
    pub fn find_pos_domains(&self, x: usize, y: usize) -> Result<Vec<Domain>, DomainError> {
        let Some(d0) = self.connecting_domain(x, y) else { return Ok(Vec::new()) };
        if self.periodic.is_empty() {
            return Ok(if d0.is_positive() { vec![d0] } else { Vec::new() });
        }
        let Some(sys) = self.polytope(&d0.coeffs, Some((x, y))) else { return Ok(Vec::new()) };
        let points = lattice_points(&sys).map_err(|_| DomainError::NotAdmissible)?;
        let mut out: Vec<Domain> = points.iter().map(|t| self.assemble(&d0.coeffs, &to_i64(t), x, y)).filter(Domain::is_positive).collect();
        out.sort();
        Ok(out)
    }

    /// Reference enumeration: scan the whole bounding box of the polytope,
    /// without any corner pruning.
    pub fn find_pos_domains_unpruned(&self, x: usize, y: usize) -> Result<Vec<Domain>, DomainError> {
        let Some(d0) = self.connecting_domain(x, y) else { return Ok(Vec::new()) };
        let sys = self.polytope(&d0.coeffs, None).expect("no pruning requested");
        let intervals = match polytope_box_bounds(&sys) {
            BoxBounds::Empty => return Ok(Vec::new()),
            BoxBounds::Box(iv) => iv,
        };
        let mut ranges = Vec::with_capacity(intervals.len());
        for iv in &intervals {
            let (Some(lo), Some(hi)) = (&iv.lo, &iv.hi) else { return Err(DomainError::NotAdmissible) };
            let lo = lo.ceil().to_integer().to_i64().expect("small bound");
            let hi = hi.floor().to_integer().to_i64().expect("small bound");
            ranges.push((lo, hi));
        }
        let mut out = Vec::new();
        let mut t: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        if ranges.iter().any(|(lo, hi)| lo > hi) {
            return Ok(out);
        }
        loop {
            let d = self.assemble(&d0.coeffs, &t, x, y);
            if d.is_positive() {
                out.push(d);
            }
            // odometer increment
            let mut k = 0;
            loop {
                if k == t.len() {
                    out.sort();
                    return Ok(out);
                }
                if t[k] < ranges[k].1 {
                    t[k] += 1;
                    break;
                }
                t[k] = ranges[k].0;
                k += 1;
            }
        }
    }

    /// Four times the total point measure of `coeffs` at the points of `g`.
    fn point_measure_4(&self, coeffs: &[i64], g: &Generator) -> i64 {
        g.points.iter().map(|&p| coeffs.iter().enumerate().map(|(r, &c)| c * self.diagram.point_measures_4[r][p]).sum::<i64>()).sum()
    }

    /// Twice the Euler measure.
    pub fn euler_measure_2(&self, coeffs: &[i64]) -> i64 {
        coeffs.iter().zip(&self.diagram.euler_measures_2).map(|(c, e)| c * e).sum()
    }

    /// Maslov index `n_x + n_y + e` of a (hat or full) domain from `x` to `y`.
    pub fn maslov_index(&self, coeffs: &[i64], x: usize, y: usize) -> Result<i64, DomainError> {
        let (gx, gy) = (&self.generators[x], &self.generators[y]);
        let four = self.point_measure_4(coeffs, gx) + self.point_measure_4(coeffs, gy) + 2 * self.euler_measure_2(coeffs);
        if four % 4 != 0 {
            return Err(DomainError::Corrupted(format!("Maslov index {four}/4 is not an integer")));
        }
        Ok(four / 4)
    }

    pub fn j_plus(&self, coeffs: &[i64], x: usize, y: usize) -> Result<i64, DomainError> {
        let mu = self.maslov_index(coeffs, x, y)?;
        Ok(mu - self.euler_measure_2(coeffs) + self.generators[x].cycles() as i64 - self.generators[y].cycles() as i64)
    }

    /// `(J₊, χ, boundary components, genus)` of an embedded curve with this
    /// domain. Constant components at fixed points are not counted.
    pub fn domain_type(&self, d: &Domain) -> Result<DomainType, DomainError> {
        let (gx, gy) = (&self.generators[d.from], &self.generators[d.to]);
        let j_plus = self.j_plus(&d.coeffs, d.from, d.to)?;
        let local = |p: usize| -> i64 { d.coeffs.iter().enumerate().map(|(r, &c)| c * self.diagram.point_measures_4[r][p]).sum() };
        let trivial = gx.points.iter().filter(|&&p| gy.contains(p) && local(p) == 0).count() as i64;
        let n = self.diagram.n() as i64;
        let chi4 = 4 * (n - trivial) + 2 * self.euler_measure_2(&d.coeffs)
            - self.point_measure_4(&d.coeffs, gx)
            - self.point_measure_4(&d.coeffs, gy);
        if chi4 % 4 != 0 {
            return Err(DomainError::Corrupted(format!("Euler characteristic {chi4}/4 is not an integer")));
        }
        let euler = chi4 / 4;
        let b = self.boundary_components(d)?;
        let g2 = 2 - euler - b;
        if g2 % 2 != 0 || g2 < 0 {
            return Err(DomainError::Corrupted(format!("genus (2 - {euler} - {b})/2 is not a non-negative integer")));
        }
        Ok(DomainType { j_plus, euler, boundary_components: b, genus: g2 / 2 })
    }

    /// Counts the circles of `∂D`. Boundary strands follow their curve through
    /// intersection points, except that at a point of `x` one incoming beta
    /// strand turns onto an outgoing alpha strand and at a point of `y` one
    /// incoming alpha strand turns onto an outgoing beta strand. Parallel
    /// arcs with the same endpoints are merged.
    fn boundary_components(&self, d: &Domain) -> Result<i64, DomainError> {
        // net multiplicity on each directed arc, keyed by (from, to) with from < to
        let mut alpha: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        let mut beta: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        let add = |m: &mut BTreeMap<(usize, usize), i64>, a: usize, b: usize, c: i64| match a.cmp(&b) {
            std::cmp::Ordering::Less => *m.entry((a, b)).or_default() += c,
            std::cmp::Ordering::Greater => *m.entry((b, a)).or_default() -= c,
            std::cmp::Ordering::Equal => {}
        };
        for (r, &c) in d.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (a, b) in self.diagram.regions[r].alpha_arcs() {
                add(&mut alpha, a, b, c);
            }
            for (a, b) in self.diagram.regions[r].beta_arcs() {
                add(&mut beta, a, b, c);
            }
        }
        // strands: (tail, head, is_alpha)
        let mut strands: Vec<(usize, usize, bool)> = Vec::new();
        for (is_alpha, m) in [(true, &alpha), (false, &beta)] {
            for (&(a, b), &c) in m {
                let (t, h) = if c > 0 { (a, b) } else { (b, a) };
                strands.extend(std::iter::repeat_n((t, h, is_alpha), c.unsigned_abs() as usize));
            }
        }
        let p = self.diagram.num_points;
        let mut incoming: Vec<[Vec<usize>; 2]> = vec![[Vec::new(), Vec::new()]; p];
        let mut outgoing: Vec<[Vec<usize>; 2]> = vec![[Vec::new(), Vec::new()]; p];
        for (s, &(t, h, is_alpha)) in strands.iter().enumerate() {
            let k = usize::from(!is_alpha);
            outgoing[t][k].push(s);
            incoming[h][k].push(s);
        }
        let (gx, gy) = (&self.generators[d.from], &self.generators[d.to]);
        let mut next = vec![usize::MAX; strands.len()];
        for q in 0..p {
            let [mut a_in, mut b_in] = std::mem::take(&mut incoming[q]);
            let [mut a_out, mut b_out] = std::mem::take(&mut outgoing[q]);
            if gx.contains(q) && !b_in.is_empty() && !a_out.is_empty() {
                next[b_in.pop().unwrap()] = a_out.pop().unwrap();
            }
            if gy.contains(q) && !a_in.is_empty() && !b_out.is_empty() {
                next[a_in.pop().unwrap()] = b_out.pop().unwrap();
            }
            if a_in.len() != a_out.len() || b_in.len() != b_out.len() {
                return Err(DomainError::Corrupted(format!("boundary strands do not close up at point {q}")));
            }
            for (i, o) in a_in.into_iter().zip(a_out).chain(b_in.into_iter().zip(b_out)) {
                next[i] = o;
            }
        }
        let mut seen = vec![false; strands.len()];
        let mut cycles = 0;
        for s in 0..strands.len() {
            if seen[s] {
                continue;
            }
            cycles += 1;
            let mut cur = s;
            while !seen[cur] {
                seen[cur] = true;
                cur = next[cur];
            }
        }
        Ok(cycles)
    }

    /// Generator classes, Chern numbers, divisibility and relative gradings.
    pub fn spinc_partition(&self) -> Result<SpinCTable, DomainError> {
        let n = self.generators.len();
        let mut key_to_class: HashMap<usize, usize> = HashMap::new();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut class_of = vec![0; n];
        for (i, (key, _)) in self.full_offset.iter().enumerate() {
            let next = classes.len();
            let c = *key_to_class.entry(*key).or_insert(next);
            if c == next {
                classes.push(Vec::new());
            }
            classes[c].push(i);
            class_of[i] = c;
        }

        let mut chern = Vec::with_capacity(n);
        for i in 0..n {
            let g = &self.generators[i];
            let row = self
                .periodic
                .iter()
                .map(|p| {
                    let four = 2 * self.point_measure_4(p, g) + 2 * self.euler_measure_2(p);
                    if four % 4 != 0 {
                        Err(DomainError::Corrupted(format!("Chern number {four}/4 is not an integer")))
                    } else {
                        Ok(four / 4)
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            chern.push(row);
        }

        let mut div = Vec::with_capacity(classes.len());
        let mut gradings = vec![0i64; n];
        for members in &classes {
            let base = members[0];
            let mut g = 0i64;
            for p in &self.full_periodic {
                g = g.gcd(&self.grading_quantity(p, base, base)?);
            }
            div.push(g);
            for &x in members {
                let c = self.full_connecting_domain(x, base).expect("same class");
                let v = self.grading_quantity(&c, x, base)?;
                gradings[x] = if g == 0 { v } else { v.mod_floor(&g) };
            }
        }
        Ok(SpinCTable { classes, class_of, chern, div, gradings })
    }

    /// `μ(c) − 2·(pointed multiplicities)` for a full domain from `x` to `y`.
    pub fn grading_quantity(&self, full: &[i64], x: usize, y: usize) -> Result<i64, DomainError> {
        let pointed: i64 = full[self.diagram.num_unpointed()..].iter().sum();
        Ok(self.maslov_index(full, x, y)? - 2 * pointed)
    }

    /// Positive index-one domains for every same-class pair whose grading
    /// drops by one.
    pub fn index1_differentials(&self, table: &SpinCTable) -> Result<IndexOneDifferentials, DomainError> {
        let mut out = IndexOneDifferentials::default();
        for c in 0..table.classes.len() {
            out.pairs.extend(self.index1_differentials_in_class(table, c)?.pairs);
        }
        Ok(out)
    }

    /// [`Self::index1_differentials`] restricted to one class.
    pub fn index1_differentials_in_class(&self, table: &SpinCTable, class: usize) -> Result<IndexOneDifferentials, DomainError> {
        let mut out = IndexOneDifferentials::default();
        let members = &table.classes[class];
        for &x in members {
            for &y in members {
                if x == y || !table.same_residue(class, table.gradings[x] - table.gradings[y], 1) {
                    continue;
                }
                let mut found = Vec::new();
                for d in self.find_pos_domains(x, y)? {
                    if self.maslov_index(&d.coeffs, x, y)? == 1 {
                        found.push(d);
                    }
                }
                if !found.is_empty() {
                    out.pairs.insert((x, y), found);
                }
            }
        }
        Ok(out)
    }

    /// Text report: one line per candidate domain, grouped by class.
    pub fn possible_differentials_report(&self, table: &SpinCTable, diffs: &IndexOneDifferentials) -> Result<String, DomainError> {
        let mut s = String::new();
        for (c, members) in table.classes.iter().enumerate() {
            let _ = writeln!(s, "# spinc {c}: {} generators, div={}", members.len(), table.div[c]);
            for (&(x, y), doms) in &diffs.pairs {
                if table.class_of[x] != c {
                    continue;
                }
                for d in doms {
                    let coeffs: Vec<String> = d.coeffs.iter().map(i64::to_string).collect();
                    let _ = writeln!(s, "x_{x} -> x_{y} : [{}] mu=1 Jplus={}", coeffs.join(", "), self.j_plus(&d.coeffs, x, y)?);
                }
            }
        }
        Ok(s)
    }
}

/// True when the cone `{t : Σ t_j P_j >= 0}` is just the origin.
pub fn check_weak_admissibility(basis: &[Vec<i64>]) -> bool {
    let Some(first) = basis.first() else { return true };
    let mut sys = System::new(basis.len());
    for k in 0..first.len() {
        sys.push(basis.iter().map(|p| BigInt::from(p[k])).collect(), BigInt::zero());
    }
    match polytope_box_bounds(&sys) {
        BoxBounds::Empty => true,
        BoxBounds::Box(iv) => iv.iter().all(|i| i.lo.as_ref().is_some_and(Zero::is_zero) && i.hi.as_ref().is_some_and(Zero::is_zero)),
    }
}

/// `coeffs · rows`, convenience for tests and reports.
pub fn combine(basis: &[Vec<i64>], t: &[i64]) -> Vec<i64> {
    let len = basis.first().map_or(0, Vec::len);
    let mut out = vec![0; len];
    for (p, &tj) in basis.iter().zip(t) {
        for (o, &v) in out.iter_mut().zip(p) {
            *o += tj * v;
        }
    }
    out
}
