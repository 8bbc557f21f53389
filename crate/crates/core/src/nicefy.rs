//! Finger moves that turn a diagram into a nice one, where every unpointed
//! region is a bigon or a square.
//!
//! A finger is grown from a beta arc on the boundary of a bad region `R`
//! whose other side `R'` is one step closer to a pointed region. The finger
//! first crosses `R`, splitting it into two pieces with fewer corners in
//! total badness, then keeps crossing alpha arcs until its tip lands in a
//! bigon (which becomes a square) or in a pointed region. Every alpha
//! crossing creates two intersection points and two regions.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};
use std::fmt;

use log::{debug, info};
use thiserror::Error;

use crate::diagram::{DiagramError, HeegaardDiagram, Region, RegionList};

pub const DEFAULT_MOVE_CAP: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NiceError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("algorithm stuck after {moves} pushes: {reason}\nintermediate region list:\n{dump}")]
    Stuck { moves: usize, reason: String, dump: String },
    #[error("finger move broke an invariant: {0}")]
    Internal(String),
}

/// One completed finger.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FingerMove {
    pub region: usize,
    pub distance: usize,
    pub corners: usize,
    pub arc: (usize, usize),
    pub from_region: usize,
    pub crossings: usize,
    pub new_points: usize,
    pub total_points: usize,
}

impl fmt::Display for FingerMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "region {} (distance {}, {} corners) beta arc {}->{} from region {}: crossings={} new_points={} points={}",
            self.region,
            self.distance,
            self.corners,
            self.arc.0,
            self.arc.1,
            self.from_region,
            self.crossings,
            self.new_points,
            self.total_points
        )
    }
}

#[derive(Debug, Clone)]
pub struct NiceResult {
    pub region_list: RegionList,
    pub moves: Vec<FingerMove>,
}

impl NiceResult {
    pub fn log(&self) -> String {
        self.moves.iter().enumerate().map(|(k, m)| format!("move {k}: {m}\n")).collect()
    }
}

/// Position of an arc: region, circuit, index of its first corner.
type Slot = (usize, usize, usize);

/// Mutable working copy with a pointed flag per region, so that regions can
/// be appended while ids stay stable.
#[derive(Debug, Clone)]
struct Work {
    name: String,
    regions: Vec<Region>,
    pointed: Vec<bool>,
    next_point: usize,
}

impl Work {
    fn new(rl: &RegionList) -> Self {
        let u = rl.num_unpointed();
        Work {
            name: rl.name.clone(),
            regions: rl.regions.clone(),
            pointed: (0..rl.regions.len()).map(|r| r >= u).collect(),
            next_point: rl.num_points(),
        }
    }

    fn to_region_list(&self) -> RegionList {
        let mut regions: Vec<Region> = self.regions.iter().zip(&self.pointed).filter(|(_, &p)| !p).map(|(r, _)| r.clone()).collect();
        regions.extend(self.regions.iter().zip(&self.pointed).filter(|(_, &p)| p).map(|(r, _)| r.clone()));
        RegionList { name: self.name.clone(), num_pointed: self.pointed.iter().filter(|&&p| p).count(), regions }
    }

    /// Occurrences of the directed arc `a -> b` starting at even (alpha) or
    /// odd (beta) corner positions.
    fn arc_slots(&self, alpha: bool, a: usize, b: usize) -> Vec<Slot> {
        let parity = usize::from(!alpha);
        let mut out = Vec::new();
        for (r, region) in self.regions.iter().enumerate() {
            for (c, circ) in region.circuits.iter().enumerate() {
                let n = circ.len();
                for pos in (parity..n).step_by(2) {
                    if circ[pos] == a && circ[(pos + 1) % n] == b {
                        out.push((r, c, pos));
                    }
                }
            }
        }
        out
    }

    /// The unique other side of the arc at `slot`.
    fn partner(&self, alpha: bool, slot: Slot) -> Result<Slot, NiceError> {
        let circ = &self.regions[slot.0].circuits[slot.1];
        let (a, b) = (circ[slot.2], circ[(slot.2 + 1) % circ.len()]);
        let cands: Vec<Slot> = self.arc_slots(alpha, b, a).into_iter().filter(|&s| s != slot).collect();
        match cands.as_slice() {
            [one] => Ok(*one),
            [] => Err(NiceError::Internal(format!("arc {a}->{b} has no partner"))),
            _ => Err(NiceError::Unsupported(format!(
                "parallel {} arcs {a}->{b}: the region list does not determine which sides are glued",
                if alpha { "alpha" } else { "beta" }
            ))),
        }
    }

    /// Regions across the beta (or alpha) arcs of `r`, one entry per arc.
    fn neighbours(&self, alpha: bool, r: usize) -> Vec<(usize, Vec<usize>)> {
        let parity = usize::from(!alpha);
        let mut out = Vec::new();
        for circ in &self.regions[r].circuits {
            let n = circ.len();
            for pos in (parity..n).step_by(2) {
                let (a, b) = (circ[pos], circ[(pos + 1) % n]);
                let mut others: Vec<usize> = self.arc_slots(alpha, b, a).into_iter().map(|s| s.0).collect();
                others.sort_unstable();
                others.dedup();
                out.push((pos, others));
            }
        }
        out
    }

    fn corners(&self, r: usize) -> usize {
        self.regions[r].corner_count()
    }

    fn is_bad(&self, r: usize) -> bool {
        !self.pointed[r] && self.corners(r) > 4
    }

    /// Breadth-first distance from the pointed regions through beta arcs.
    fn distances(&self) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.regions.len()];
        let mut queue = VecDeque::new();
        for (r, &p) in self.pointed.iter().enumerate() {
            if p {
                dist[r] = Some(0);
                queue.push_back(r);
            }
        }
        let adj: Vec<Vec<usize>> =
            (0..self.regions.len()).map(|r| self.neighbours(false, r).into_iter().flat_map(|(_, o)| o).collect()).collect();
        while let Some(r) = queue.pop_front() {
            let d = dist[r].unwrap() + 1;
            for &s in &adj[r] {
                if dist[s].is_none() {
                    dist[s] = Some(d);
                    queue.push_back(s);
                }
            }
        }
        dist
    }

    /// Pushes the beta arc `(q[2i+1], q[2i+2])` of disk region `q` across the
    /// region and over its alpha arc `(q[2j], q[2j+1])`. Returns the id of
    /// the new tip bigon and the region now holding the tip's outer arc.
    fn push(&mut self, q: usize, i: usize, j: usize) -> Result<(usize, usize), NiceError> {
        if self.pointed[q] || !self.regions[q].is_disk() {
            return Err(NiceError::Internal(format!("cannot push into region {q}")));
        }
        let circ = self.regions[q].circuits[0].clone();
        let n = circ.len();
        let m = n / 2;
        if i >= m || j >= m {
            return Err(NiceError::Internal(format!("arc index out of range in region {q}")));
        }
        let g_slot = (q, 0, 2 * i + 1);
        let f_slot = (q, 0, 2 * j);
        let g_partner = self.partner(false, g_slot)?;
        let f_partner = self.partner(true, f_slot)?;
        let (p1, p2) = (self.next_point, self.next_point + 1);
        self.next_point += 2;

        // tokens to insert after a given corner: G gets p1 p2, F gets p2 p1
        let mut inserts: Vec<(Slot, [usize; 2])> = vec![(g_partner, [p1, p2]), (f_partner, [p2, p1])];
        inserts.sort_by_key(|&(s, _)| Reverse(s));

        let mut after_q: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (slot, toks) in inserts {
            if slot.0 == q {
                after_q[slot.2].extend(toks);
            } else {
                let c = &mut self.regions[slot.0].circuits[slot.1];
                c.splice(slot.2 + 1..slot.2 + 1, toks);
            }
        }
        let take = |from: usize, to: usize| -> Vec<usize> {
            let mut out = Vec::new();
            let mut k = from;
            loop {
                out.push(circ[k]);
                out.extend(&after_q[k]);
                if k == to {
                    break;
                }
                k = (k + 1) % n;
            }
            out
        };
        let mut q1 = take((2 * i + 2) % n, 2 * j);
        q1.push(p1);
        let mut q2 = vec![p2];
        q2.extend(take(2 * j + 1, 2 * i + 1));

        self.regions[q] = Region::disk(q1);
        self.regions.push(Region::disk(q2));
        self.pointed.push(false);
        self.regions.push(Region::disk(vec![p2, p1]));
        self.pointed.push(false);
        let bigon = self.regions.len() - 1;
        let tip = self.arc_slots(false, p2, p1);
        let [(tip_region, _, _)] = tip.as_slice() else {
            return Err(NiceError::Internal("finger tip arc is not unique".into()));
        };
        Ok((bigon, *tip_region))
    }

    fn dump(&self) -> String {
        self.to_region_list().to_json()
    }
}

/// Regions' distances from the pointed regions (through beta arcs); `None`
/// if unreachable. Indexed like `rl.regions`.
pub fn compute_distances(rl: &RegionList) -> Vec<Option<usize>> {
    Work::new(rl).distances()
}

/// Per unpointed region, `max(0, n - 2)` for a `2n`-gon.
pub fn badness(rl: &RegionList) -> Vec<usize> {
    rl.regions[..rl.num_unpointed()].iter().map(|r| (r.corner_count() / 2).saturating_sub(2)).collect()
}

/// Every unpointed region is a disk with 2 or 4 corners.
pub fn is_nice(rl: &RegionList) -> bool {
    rl.regions[..rl.num_unpointed()].iter().all(|r| r.is_disk() && matches!(r.corner_count(), 2 | 4))
}

/// One push on a region list, with the invariants checked. `region` must be
/// an unpointed disk; `beta` and `alpha` index its arcs.
pub fn finger_push(rl: &RegionList, region: usize, beta: usize, alpha: usize) -> Result<RegionList, NiceError> {
    let before = Invariants::of(rl)?;
    let mut w = Work::new(rl);
    w.push(region, beta, alpha)?;
    let out = w.to_region_list();
    before.check(&out)?;
    Ok(out)
}

/// Quantities every finger move must preserve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Invariants {
    curves: usize,
    num_pointed: usize,
    chi: i64,
}

impl Invariants {
    fn of(rl: &RegionList) -> Result<Self, NiceError> {
        let curves = HeegaardDiagram::validate(rl)?;
        Ok(Invariants { curves, num_pointed: rl.num_pointed, chi: rl.regions.len() as i64 - rl.num_points() as i64 })
    }

    fn check(&self, rl: &RegionList) -> Result<(), NiceError> {
        let after = Self::of(rl).map_err(|e| NiceError::Internal(format!("invalid region list after push: {e}")))?;
        if after != *self {
            return Err(NiceError::Internal(format!("invariants changed: {self:?} -> {after:?}")));
        }
        Ok(())
    }
}

/// A planned route for the finger tip: regions entered in order, and for
/// each region but the last, the alpha arc (endpoints) it is left through.
#[derive(Debug, Clone)]
struct Route {
    regions: Vec<usize>,
    exits: Vec<(usize, usize)>,
    bad_crossed: usize,
}

/// Cheapest route (fewest bad regions crossed, then fewest crossings) from
/// `start` to a bigon or pointed region, moving through alpha arcs and
/// avoiding the unpointed regions in `forbidden`.
fn plan_route(w: &Work, start: usize, forbidden: &[usize]) -> Option<Route> {
    let terminal = |r: usize| w.pointed[r] || w.corners(r) == 2;
    let k = w.regions.len();
    let mut best: Vec<Option<(usize, usize)>> = vec![None; k];
    let mut prev: Vec<Option<(usize, (usize, usize))>> = vec![None; k];
    let mut heap = BinaryHeap::new();
    best[start] = Some((0, 0));
    heap.push(Reverse((0usize, 0usize, start)));
    while let Some(Reverse((bad, len, r))) = heap.pop() {
        if best[r] != Some((bad, len)) {
            continue;
        }
        if terminal(r) {
            let mut regions = vec![r];
            let mut exits = Vec::new();
            let mut cur = r;
            while let Some((p, arc)) = prev[cur] {
                regions.push(p);
                exits.push(arc);
                cur = p;
            }
            regions.reverse();
            exits.reverse();
            return Some(Route { regions, exits, bad_crossed: bad });
        }
        if !w.regions[r].is_disk() {
            continue;
        }
        let cost = (bad + usize::from(w.is_bad(r)), len + 1);
        let circ = &w.regions[r].circuits[0];
        for (pos, others) in w.neighbours(true, r) {
            let arc = (circ[pos], circ[(pos + 1) % circ.len()]);
            for s in others {
                // a pointed region may always take the tip
                if s == r || (forbidden.contains(&s) && !w.pointed[s]) {
                    continue;
                }
                if best[s].is_none_or(|b| cost < b) {
                    best[s] = Some(cost);
                    prev[s] = Some((r, arc));
                    heap.push(Reverse((cost.0, cost.1, s)));
                }
            }
        }
    }
    None
}

/// Index of the alpha arc `(a, b)` in disk region `r`.
fn alpha_index(w: &Work, r: usize, arc: (usize, usize)) -> Result<usize, NiceError> {
    let circ = &w.regions[r].circuits[0];
    let hits: Vec<usize> = (0..circ.len() / 2).filter(|&j| (circ[2 * j], circ[2 * j + 1]) == arc).collect();
    match hits.as_slice() {
        [j] => Ok(*j),
        _ => Err(NiceError::Unsupported(format!("alpha arc {}->{} not unique in region {r}", arc.0, arc.1))),
    }
}

/// Index of the beta arc `(a, b)` in disk region `r`.
fn beta_index(w: &Work, r: usize, arc: (usize, usize)) -> Result<usize, NiceError> {
    let circ = &w.regions[r].circuits[0];
    let n = circ.len();
    let hits: Vec<usize> = (0..n / 2).filter(|&i| (circ[2 * i + 1], circ[(2 * i + 2) % n]) == arc).collect();
    match hits.as_slice() {
        [i] => Ok(*i),
        _ => Err(NiceError::Internal(format!("beta arc {}->{} not unique in region {r}", arc.0, arc.1))),
    }
}

struct Plan {
    region: usize,
    beta: usize,
    alpha: usize,
    from_region: usize,
    route: Route,
}

fn choose_finger(w: &Work, dist: &[Option<usize>]) -> Result<Option<(Plan, usize)>, NiceError> {
    let mut bad: Vec<usize> = (0..w.regions.len()).filter(|&r| w.is_bad(r)).collect();
    if bad.is_empty() {
        return Ok(None);
    }
    if let Some(&r) = bad.iter().find(|&&r| !w.regions[r].is_disk()) {
        return Err(NiceError::Unsupported(format!("unpointed region {r} is not a disk")));
    }
    if let Some(&r) = bad.iter().find(|&&r| dist[r].is_none()) {
        return Err(NiceError::Unsupported(format!("region {r} is not connected to a pointed region")));
    }
    // farthest first, then lowest index
    bad.sort_by_key(|&r| (Reverse(dist[r]), r));
    for &r in &bad {
        let d = dist[r].unwrap();
        let circ = &w.regions[r].circuits[0];
        let n = circ.len();
        let m = n / 2;
        let mut arcs: Vec<(usize, usize)> = Vec::new();
        for i in 0..m {
            let slot = (r, 0, 2 * i + 1);
            let Ok(other) = w.partner(false, slot) else { continue };
            if other.0 != r && dist[other.0] == Some(d - 1) {
                arcs.push((other.0, i));
            }
        }
        arcs.sort_unstable();
        let mut best: Option<Plan> = None;
        for &(rp, i) in &arcs {
            for j in 0..m {
                // halves of the two pieces: a and m + 1 - a
                let a = (j + m - i - 1) % m + 1;
                if a < 2 || a > m - 1 {
                    continue;
                }
                let Ok(fp) = w.partner(true, (r, 0, 2 * j)) else { continue };
                if fp.0 == r || (fp.0 == rp && !w.pointed[rp]) {
                    continue;
                }
                let Some(route) = plan_route(w, fp.0, &[r, rp]) else { continue };
                let key = (route.bad_crossed, route.regions.len());
                if best.as_ref().is_none_or(|b| key < (b.route.bad_crossed, b.route.regions.len())) {
                    best = Some(Plan { region: r, beta: i, alpha: j, from_region: rp, route });
                }
            }
        }
        if let Some(plan) = best {
            return Ok(Some((plan, d)));
        }
        debug!("no admissible finger for region {r}");
    }
    Err(NiceError::Unsupported("no admissible finger move for any bad region".into()))
}

/// Runs finger moves until the diagram is nice. Each individual push is
/// checked against the preserved invariants; `move_cap` bounds the number
/// of pushes.
pub fn make_nice(rl: &RegionList, move_cap: usize) -> Result<NiceResult, NiceError> {
    let invariants = Invariants::of(rl)?;
    let mut w = Work::new(rl);
    let mut moves = Vec::new();
    let mut pushes = 0usize;
    loop {
        let dist = w.distances();
        let Some((plan, d)) = choose_finger(&w, &dist)? else { break };
        let circ = &w.regions[plan.region].circuits[0];
        let n = circ.len();
        let arc = (circ[2 * plan.beta + 1], circ[(2 * plan.beta + 2) % n]);
        let corners = n;
        let points_before = w.next_point;

        let mut step = |w: &mut Work, q: usize, i: usize, j: usize| -> Result<usize, NiceError> {
            if pushes >= move_cap {
                return Err(NiceError::Stuck { moves: pushes, reason: "move cap reached".into(), dump: w.dump() });
            }
            pushes += 1;
            let (_, tip) = w.push(q, i, j)?;
            invariants.check(&w.to_region_list())?;
            Ok(tip)
        };
        let mut tip = step(&mut w, plan.region, plan.beta, plan.alpha)?;
        let mut crossings = 1;
        for (k, &exit) in plan.route.exits.iter().enumerate() {
            let here = plan.route.regions[k];
            if tip != here {
                return Err(NiceError::Internal(format!("finger tip in region {tip}, expected {here}")));
            }
            let (p2, p1) = (w.next_point - 1, w.next_point - 2);
            let i = beta_index(&w, here, (p2, p1))?;
            let j = alpha_index(&w, here, exit)?;
            tip = step(&mut w, here, i, j)?;
            crossings += 1;
        }
        let mv = FingerMove {
            region: plan.region,
            distance: d,
            corners,
            arc,
            from_region: plan.from_region,
            crossings,
            new_points: w.next_point - points_before,
            total_points: w.next_point,
        };
        info!("finger move {}: {mv}", moves.len());
        moves.push(mv);
    }
    let region_list = w.to_region_list();
    if !is_nice(&region_list) {
        return Err(NiceError::Internal("finished without a nice diagram".into()));
    }
    Ok(NiceResult { region_list, moves })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_region_list;

    fn m12() -> RegionList {
        parse_region_list(include_str!("../fixtures/m12.json")).unwrap()
    }

    #[test]
    fn badness_and_niceness() {
        let rl = m12();
        assert!(!is_nice(&rl));
        let mut sizes: Vec<usize> = rl.regions[..5].iter().map(Region::corner_count).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![4, 4, 6, 6, 8]);
        assert_eq!(badness(&rl).iter().sum::<usize>(), 4);
        let t = parse_region_list(include_str!("../fixtures/s1xs2.json")).unwrap();
        assert!(is_nice(&t));
    }

    #[test]
    fn distances_start_at_pointed_regions() {
        let rl = m12();
        let d = compute_distances(&rl);
        assert_eq!(d[5], Some(0));
        assert!(d.iter().all(Option::is_some));
    }

    #[test]
    fn single_push_preserves_invariants() {
        let rl = m12();
        // region 2 is the octagon [3,2,5,4,1,2,8,7]
        let out = finger_push(&rl, 2, 0, 2).unwrap();
        assert_eq!(out.regions.len(), rl.regions.len() + 2);
        assert_eq!(out.num_points(), rl.num_points() + 2);
    }

    #[test]
    fn nice_input_is_fixed_point() {
        let t = parse_region_list(include_str!("../fixtures/overtwisted_s3.json")).unwrap();
        let res = make_nice(&t, DEFAULT_MOVE_CAP).unwrap();
        assert!(res.moves.is_empty());
        assert_eq!(res.region_list, t);
    }

    #[test]
    fn m12_becomes_nice() {
        let rl = m12();
        let res = make_nice(&rl, DEFAULT_MOVE_CAP).unwrap();
        let out = &res.region_list;
        assert!(is_nice(out));
        assert_eq!(out.regions.len() as i64 - out.num_points() as i64, -4);
        let again = make_nice(out, DEFAULT_MOVE_CAP).unwrap();
        assert!(again.moves.is_empty());
    }
}
