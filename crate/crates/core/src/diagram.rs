//! Region lists and the Heegaard diagrams they describe.
//!
//! A region is given by its corner sequence `c0 c1 ... c(2n-1)`, traversed
//! counter-clockwise with `c0 -> c1` on an alpha curve; arcs then alternate,
//! so `c(2j) -> c(2j+1)` is an alpha arc and `c(2j+1) -> c(2j+2)` a beta arc.
//! A region that is not a disk is written as several such circuits.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::linalg::{smith_normal_form, IntMatrix};

/// Cyclically ordered points of each curve in one family.
type Curves = Vec<Vec<usize>>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("region {region}: circuit of odd or zero length {len}")]
    OddRegion { region: usize, len: usize },
    #[error("region {region}: invalid point index {value}")]
    BadIndex { region: usize, value: String },
    #[error("point labels are not contiguous: {missing} never appears")]
    MissingPoint { missing: usize },
    #[error("num_pointed = {num_pointed} out of range for {regions} regions")]
    NumPointed { num_pointed: usize, regions: usize },
    #[error("point {point} is a corner {count} times (expected 4)")]
    CornerCount { point: usize, count: usize },
    #[error("{kind} arc {from}->{to} occurs {forward} times but its reverse {backward} times")]
    ArcPairing { kind: CurveKind, from: usize, to: usize, forward: usize, backward: usize },
    #[error("point {point} has {degree} {kind} arc ends (expected 2)")]
    CurveDegree { kind: CurveKind, point: usize, degree: usize },
    #[error("{alpha} alpha curves but {beta} beta curves")]
    CurveCountMismatch { alpha: usize, beta: usize },
    #[error("boundary matrices from alpha and beta arcs disagree")]
    BoundaryMismatch,
    #[error("contact points {0:?} do not form a generator")]
    ContactNotGenerator(Vec<usize>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CurveKind {
    Alpha,
    Beta,
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurveKind::Alpha => "alpha",
            CurveKind::Beta => "beta",
        })
    }
}

/// One region: one boundary circuit for a disk, several otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Region {
    pub circuits: Vec<Vec<usize>>,
}

impl Region {
    pub fn disk(corners: Vec<usize>) -> Self {
        Region { circuits: vec![corners] }
    }

    pub fn corner_count(&self) -> usize {
        self.circuits.iter().map(Vec::len).sum()
    }

    pub fn is_disk(&self) -> bool {
        self.circuits.len() == 1
    }

    pub fn corners(&self) -> impl Iterator<Item = usize> + '_ {
        self.circuits.iter().flatten().copied()
    }

    /// Directed alpha arcs `(from, to)` in traversal order.
    pub fn alpha_arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.circuits.iter().flat_map(|c| (0..c.len()).step_by(2).map(move |j| (c[j], c[j + 1])))
    }

    /// Directed beta arcs `(from, to)` in traversal order.
    pub fn beta_arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.circuits.iter().flat_map(|c| (1..c.len()).step_by(2).map(move |j| (c[j], c[(j + 1) % c.len()])))
    }

    /// Twice the Euler measure, assuming a genus-zero region:
    /// `2 * (2 - circuits) - corners / 2`.
    pub fn euler_measure_2(&self) -> i64 {
        2 * (2 - self.circuits.len() as i64) - self.corner_count() as i64 / 2
    }

    /// Number of corners of this region at `p`, i.e. four times the point
    /// measure of the region at `p`.
    pub fn point_measure_4(&self, p: usize) -> i64 {
        self.corners().filter(|&q| q == p).count() as i64
    }
}

impl Serialize for Region {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.is_disk() {
            self.circuits[0].serialize(s)
        } else {
            self.circuits.serialize(s)
        }
    }
}

/// The raw region-list encoding. Pointed regions come last.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegionList {
    pub name: String,
    pub num_pointed: usize,
    pub regions: Vec<Region>,
}

impl RegionList {
    pub fn new(name: impl Into<String>, num_pointed: usize, regions: Vec<Region>) -> Result<Self, DiagramError> {
        let rl = RegionList { name: name.into(), num_pointed, regions };
        rl.check()?;
        Ok(rl)
    }

    /// Convenience constructor for disk regions.
    pub fn from_flat(name: &str, num_pointed: usize, regions: &[&[usize]]) -> Result<Self, DiagramError> {
        Self::new(name, num_pointed, regions.iter().map(|r| Region::disk(r.to_vec())).collect())
    }

    pub fn num_points(&self) -> usize {
        self.regions.iter().flat_map(Region::corners).max().map_or(0, |m| m + 1)
    }

    pub fn num_unpointed(&self) -> usize {
        self.regions.len() - self.num_pointed
    }

    fn check(&self) -> Result<(), DiagramError> {
        if self.num_pointed == 0 || self.num_pointed > self.regions.len() {
            return Err(DiagramError::NumPointed { num_pointed: self.num_pointed, regions: self.regions.len() });
        }
        for (i, r) in self.regions.iter().enumerate() {
            if r.circuits.is_empty() {
                return Err(DiagramError::OddRegion { region: i, len: 0 });
            }
            for c in &r.circuits {
                if c.is_empty() || c.len() % 2 == 1 {
                    return Err(DiagramError::OddRegion { region: i, len: c.len() });
                }
            }
        }
        let p = self.num_points();
        let mut seen = vec![false; p];
        for q in self.regions.iter().flat_map(Region::corners) {
            seen[q] = true;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(DiagramError::MissingPoint { missing });
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut out = String::from("{\n");
        out.push_str(&format!("  \"name\": {},\n", serde_json::to_string(&self.name).unwrap()));
        out.push_str(&format!("  \"num_pointed\": {},\n", self.num_pointed));
        out.push_str("  \"regions\": [\n");
        let lines: Vec<String> = self.regions.iter().map(|r| format!("    {}", serde_json::to_string(r).unwrap())).collect();
        out.push_str(&lines.join(",\n"));
        out.push_str("\n  ]\n}\n");
        out
    }
}

fn parse_region(i: usize, v: &Value) -> Result<Region, DiagramError> {
    let bad = |v: &Value| DiagramError::BadIndex { region: i, value: v.to_string() };
    let items = v.as_array().ok_or_else(|| bad(v))?;
    let nested = items.first().is_some_and(Value::is_array);
    let parse_circuit = |c: &Value| -> Result<Vec<usize>, DiagramError> {
        c.as_array().ok_or_else(|| bad(c))?.iter().map(|x| x.as_u64().and_then(|u| u.to_usize()).ok_or_else(|| bad(x))).collect()
    };
    let circuits = if nested { items.iter().map(parse_circuit).collect::<Result<Vec<_>, _>>()? } else { vec![parse_circuit(v)?] };
    Ok(Region { circuits })
}

fn parse_regions(v: &Value) -> Result<Vec<Region>, DiagramError> {
    v.as_array()
        .ok_or_else(|| DiagramError::Parse("regions must be a list".into()))?
        .iter()
        .enumerate()
        .map(|(i, r)| parse_region(i, r))
        .collect()
}

/// Parses the JSON input format
/// `{"name": .., "num_pointed": .., "regions": [[..], ..]}`.
pub fn parse_region_list(text: &str) -> Result<RegionList, DiagramError> {
    let v: Value = serde_json::from_str(text).map_err(|e| DiagramError::Parse(e.to_string()))?;
    let obj = v.as_object().ok_or_else(|| DiagramError::Parse("expected a JSON object".into()))?;
    let name = obj.get("name").and_then(Value::as_str).unwrap_or("diagram").to_string();
    let num_pointed = obj
        .get("num_pointed")
        .map(|n| n.as_u64().ok_or_else(|| DiagramError::Parse(format!("bad num_pointed {n}"))))
        .transpose()?
        .unwrap_or(1) as usize;
    let regions = parse_regions(obj.get("regions").ok_or_else(|| DiagramError::Parse("missing regions".into()))?)?;
    RegionList::new(name, num_pointed, regions)
}

/// Reads either the JSON object format or a bare bracketed list such as
/// `rlist = [[1,0,5,6], ...]`; for the latter `name` and `num_pointed`
/// are taken from the arguments.
pub fn parse_tolerant(text: &str, name: &str, num_pointed: usize) -> Result<RegionList, DiagramError> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        return parse_region_list(text);
    }
    let (Some(start), Some(end)) = (text.find('['), text.rfind(']')) else {
        return Err(DiagramError::Parse("no bracketed region list found".into()));
    };
    let v: Value = serde_json::from_str(&text[start..=end]).map_err(|e| DiagramError::Parse(e.to_string()))?;
    RegionList::new(name, num_pointed, parse_regions(&v)?)
}

/// A tuple of intersection points, one on each alpha curve, using every
/// beta curve once.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    /// `points[i]` lies on alpha curve `i`.
    pub points: Vec<usize>,
    /// `permutation[i]` is the beta curve through `points[i]`.
    pub permutation: Vec<usize>,
}

impl Generator {
    /// Number of disjoint cycles of the alpha-to-beta permutation.
    pub fn cycles(&self) -> usize {
        let n = self.permutation.len();
        let mut seen = vec![false; n];
        let mut count = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            count += 1;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                i = self.permutation[i];
            }
        }
        count
    }

    pub fn contains(&self, p: usize) -> bool {
        self.points.contains(&p)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.points.iter().map(usize::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

/// Validated diagram with reconstructed curves and the measures every
/// downstream computation needs.
#[derive(Debug, Clone)]
pub struct HeegaardDiagram {
    pub name: String,
    pub num_points: usize,
    pub regions: Vec<Region>,
    pub num_pointed: usize,
    /// Cyclically ordered points on each alpha curve; curves sorted by their
    /// lowest point.
    pub alpha_curves: Vec<Vec<usize>>,
    pub beta_curves: Vec<Vec<usize>>,
    /// `incidence[p] = (alpha index, beta index)`
    pub incidence: Vec<(usize, usize)>,
    /// Lowest point on each alpha curve.
    pub contact_points: Vec<usize>,
    pub euler_measures_2: Vec<i64>,
    /// `point_measures_4[region][point]`
    pub point_measures_4: Vec<Vec<i64>>,
    /// points x regions
    pub boundary_mat: IntMatrix,
    /// `intersection_matrix[a][b]` = number of points on alpha `a` and beta `b`.
    pub intersection_matrix: Vec<Vec<usize>>,
    pub b1_diagram: usize,
}

/// Every arc is seen once from each side, so `p -> q` and `q -> p` occur
/// equally often.
fn check_pairing(kind: CurveKind, arcs: &[(usize, usize)]) -> Result<BTreeMap<(usize, usize), usize>, DiagramError> {
    let mut directed: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &a in arcs {
        *directed.entry(a).or_default() += 1;
    }
    for (&(a, b), &n) in &directed {
        let back = directed.get(&(b, a)).copied().unwrap_or(0);
        if n != back {
            return Err(DiagramError::ArcPairing { kind, from: a, to: b, forward: n, backward: back });
        }
    }
    Ok(directed)
}

/// Curve reconstruction for one curve family.
fn reconstruct_curves(kind: CurveKind, num_points: usize, arcs: &[(usize, usize)]) -> Result<Vec<Vec<usize>>, DiagramError> {
    let directed = check_pairing(kind, arcs)?;
    // each physical arc is seen once from either side
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (&(a, b), &n) in &directed {
        if a < b {
            edges.extend(std::iter::repeat_n((a, b), n));
        } else if a == b {
            edges.extend(std::iter::repeat_n((a, a), n / 2));
        }
    }
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); num_points];
    for (e, &(a, b)) in edges.iter().enumerate() {
        incident[a].push(e);
        incident[b].push(e);
    }
    for (p, inc) in incident.iter().enumerate() {
        if inc.len() != 2 {
            return Err(DiagramError::CurveDegree { kind, point: p, degree: inc.len() });
        }
    }
    let mut used = vec![false; edges.len()];
    let mut on_curve = vec![false; num_points];
    let mut curves = Vec::new();
    for start in 0..num_points {
        if on_curve[start] {
            continue;
        }
        let mut curve = vec![start];
        on_curve[start] = true;
        let mut cur = start;
        loop {
            let next_edge = incident[cur].iter().copied().filter(|&e| !used[e]).min_by_key(|&e| {
                let (a, b) = edges[e];
                if a == cur {
                    b
                } else {
                    a
                }
            });
            let Some(e) = next_edge else { break };
            used[e] = true;
            let (a, b) = edges[e];
            let nxt = if a == cur { b } else { a };
            if nxt == start {
                break;
            }
            curve.push(nxt);
            on_curve[nxt] = true;
            cur = nxt;
        }
        curves.push(curve);
    }
    Ok(curves)
}

impl HeegaardDiagram {
    /// Checks a region list without computing any derived data; returns the
    /// number of alpha (= beta) curves.
    pub fn validate(rl: &RegionList) -> Result<usize, DiagramError> {
        Ok(Self::curves(rl)?.0.len())
    }

    fn curves(rl: &RegionList) -> Result<(Curves, Curves), DiagramError> {
        rl.check()?;
        let num_points = rl.num_points();
        let regions = &rl.regions;
        let alpha_arcs: Vec<_> = regions.iter().flat_map(Region::alpha_arcs).collect();
        let beta_arcs: Vec<_> = regions.iter().flat_map(Region::beta_arcs).collect();
        check_pairing(CurveKind::Alpha, &alpha_arcs)?;
        check_pairing(CurveKind::Beta, &beta_arcs)?;

        // a transverse crossing has four quadrants
        let mut corner_count = vec![0usize; num_points];
        for p in regions.iter().flat_map(Region::corners) {
            corner_count[p] += 1;
        }
        if let Some((point, &count)) = corner_count.iter().enumerate().find(|(_, &c)| c != 4) {
            return Err(DiagramError::CornerCount { point, count });
        }

        let alpha_curves = reconstruct_curves(CurveKind::Alpha, num_points, &alpha_arcs)?;
        let beta_curves = reconstruct_curves(CurveKind::Beta, num_points, &beta_arcs)?;
        if alpha_curves.len() != beta_curves.len() {
            return Err(DiagramError::CurveCountMismatch { alpha: alpha_curves.len(), beta: beta_curves.len() });
        }
        Ok((alpha_curves, beta_curves))
    }

    pub fn build(rl: &RegionList) -> Result<Self, DiagramError> {
        let (alpha_curves, beta_curves) = Self::curves(rl)?;
        let num_points = rl.num_points();
        let regions = rl.regions.clone();

        let mut incidence = vec![(0, 0); num_points];
        for (i, c) in alpha_curves.iter().enumerate() {
            for &p in c {
                incidence[p].0 = i;
            }
        }
        for (j, c) in beta_curves.iter().enumerate() {
            for &p in c {
                incidence[p].1 = j;
            }
        }
        let n = alpha_curves.len();
        let mut intersection_matrix = vec![vec![0; n]; n];
        for &(a, b) in &incidence {
            intersection_matrix[a][b] += 1;
        }
        let contact_points = alpha_curves.iter().map(|c| *c.iter().min().unwrap()).collect();

        let euler_measures_2 = regions.iter().map(Region::euler_measure_2).collect();
        let point_measures_4 = regions.iter().map(|r| (0..num_points).map(|p| r.point_measure_4(p)).collect()).collect();

        let mut boundary_mat = IntMatrix::zeros(num_points, regions.len());
        let mut alpha_mat = IntMatrix::zeros(num_points, regions.len());
        for (k, r) in regions.iter().enumerate() {
            for (a, b) in r.beta_arcs() {
                boundary_mat.add_to(b, k, 1);
                boundary_mat.add_to(a, k, -1);
            }
            for (a, b) in r.alpha_arcs() {
                alpha_mat.add_to(b, k, 1);
                alpha_mat.add_to(a, k, -1);
            }
        }
        for p in 0..num_points {
            for k in 0..regions.len() {
                if *boundary_mat.get(p, k) != -alpha_mat.get(p, k) {
                    return Err(DiagramError::BoundaryMismatch);
                }
            }
        }

        let unpointed: Vec<usize> = (0..regions.len() - rl.num_pointed).collect();
        let b1_diagram = {
            let m = boundary_mat.select_columns(&unpointed);
            m.cols() - smith_normal_form(&m).rank()
        };

        Ok(HeegaardDiagram {
            name: rl.name.clone(),
            num_points,
            regions,
            num_pointed: rl.num_pointed,
            alpha_curves,
            beta_curves,
            incidence,
            contact_points,
            euler_measures_2,
            point_measures_4,
            boundary_mat,
            intersection_matrix,
            b1_diagram,
        })
    }

    pub fn from_text(text: &str) -> Result<Self, DiagramError> {
        Self::build(&parse_region_list(text)?)
    }

    /// Number of alpha (equivalently beta) curves.
    pub fn n(&self) -> usize {
        self.alpha_curves.len()
    }

    pub fn num_regions(&self) -> usize {
        self.regions.len()
    }

    pub fn num_unpointed(&self) -> usize {
        self.regions.len() - self.num_pointed
    }

    pub fn is_pointed(&self, region: usize) -> bool {
        region >= self.num_unpointed()
    }

    /// Boundary matrix restricted to unpointed regions.
    pub fn boundary_mat_unpointed(&self) -> IntMatrix {
        let cols: Vec<usize> = (0..self.num_unpointed()).collect();
        self.boundary_mat.select_columns(&cols)
    }

    /// Euler characteristic of the Heegaard surface.
    pub fn euler_characteristic(&self) -> i64 {
        self.regions.iter().map(|r| 2 - r.circuits.len() as i64).sum::<i64>() - self.num_points as i64
    }

    pub fn region_list(&self) -> RegionList {
        RegionList { name: self.name.clone(), num_pointed: self.num_pointed, regions: self.regions.clone() }
    }

    /// All generators in lexicographic order of their point tuples.
    pub fn enumerate_generators(&self) -> Vec<Generator> {
        let n = self.n();
        let sorted: Vec<Vec<usize>> = self
            .alpha_curves
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.sort_unstable();
                c
            })
            .collect();
        let mut out = Vec::new();
        let mut points = Vec::with_capacity(n);
        let mut perm = Vec::with_capacity(n);
        let mut used = vec![false; n];
        self.backtrack(&sorted, &mut points, &mut perm, &mut used, &mut out);
        out
    }

    fn backtrack(
        &self,
        sorted: &[Vec<usize>],
        points: &mut Vec<usize>,
        perm: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Generator>,
    ) {
        let i = points.len();
        if i == sorted.len() {
            out.push(Generator { points: points.clone(), permutation: perm.clone() });
            return;
        }
        for &p in &sorted[i] {
            let b = self.incidence[p].1;
            if used[b] {
                continue;
            }
            used[b] = true;
            points.push(p);
            perm.push(b);
            self.backtrack(sorted, points, perm, used, out);
            points.pop();
            perm.pop();
            used[b] = false;
        }
    }

    pub fn generator_from_points(&self, points: &[usize]) -> Option<Generator> {
        if points.len() != self.n() {
            return None;
        }
        let mut by_alpha = vec![usize::MAX; self.n()];
        let mut used = vec![false; self.n()];
        for &p in points {
            let (a, b) = *self.incidence.get(p)?;
            if by_alpha[a] != usize::MAX || used[b] {
                return None;
            }
            by_alpha[a] = p;
            used[b] = true;
        }
        let permutation = by_alpha.iter().map(|&p| self.incidence[p].1).collect();
        Some(Generator { points: by_alpha, permutation })
    }

    /// The generator made of all contact points.
    pub fn contact_generator(&self) -> Result<Generator, DiagramError> {
        self.generator_from_points(&self.contact_points).ok_or_else(|| DiagramError::ContactNotGenerator(self.contact_points.clone()))
    }

    /// Corner counts of the unpointed regions, as a histogram.
    pub fn region_size_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for r in &self.regions[..self.num_unpointed()] {
            *h.entry(r.corner_count()).or_default() += 1;
        }
        h
    }
}
