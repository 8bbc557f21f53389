//! Exact Fourier–Motzkin elimination for systems `A t + b >= 0`: coordinate
//! bounds and integer point enumeration.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::LinalgError;

/// One inequality `coeffs · t + constant >= 0` with integer entries.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Row {
    coeffs: Vec<BigInt>,
    constant: BigInt,
}

impl Row {
    fn normalized(mut self) -> Row {
        let g = self.coeffs.iter().chain(std::iter::once(&self.constant)).fold(BigInt::zero(), |g, x| g.gcd(x));
        if !g.is_zero() && !g.is_one() {
            for c in &mut self.coeffs {
                *c /= &g;
            }
            self.constant /= &g;
        }
        self
    }
}

/// Inequality system over `vars` unknowns.
#[derive(Clone, Debug)]
pub struct System {
    vars: usize,
    rows: Vec<Row>,
    infeasible: bool,
}

impl System {
    pub fn new(vars: usize) -> Self {
        System { vars, rows: Vec::new(), infeasible: false }
    }

    /// Integer system from `a` (one row per inequality) and `b`.
    pub fn from_int(a: &[Vec<BigInt>], b: &[BigInt]) -> Result<Self, LinalgError> {
        if a.len() != b.len() {
            return Err(LinalgError::Dimension { expected: a.len(), found: b.len() });
        }
        let vars = a.first().map_or(0, Vec::len);
        let mut s = System::new(vars);
        for (row, c) in a.iter().zip(b) {
            if row.len() != vars {
                return Err(LinalgError::Dimension { expected: vars, found: row.len() });
            }
            s.push(row.clone(), c.clone());
        }
        Ok(s)
    }

    /// Rational system; each row is scaled by the lcm of its denominators.
    pub fn from_rational(a: &[Vec<BigRational>], b: &[BigRational]) -> Result<Self, LinalgError> {
        if a.len() != b.len() {
            return Err(LinalgError::Dimension { expected: a.len(), found: b.len() });
        }
        let vars = a.first().map_or(0, Vec::len);
        let mut s = System::new(vars);
        for (row, c) in a.iter().zip(b) {
            if row.len() != vars {
                return Err(LinalgError::Dimension { expected: vars, found: row.len() });
            }
            let l = row.iter().chain(std::iter::once(c)).fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            let scale = |x: &BigRational| (x * BigRational::from_integer(l.clone())).to_integer();
            s.push(row.iter().map(scale).collect(), scale(c));
        }
        Ok(s)
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn push(&mut self, coeffs: Vec<BigInt>, constant: BigInt) {
        assert_eq!(coeffs.len(), self.vars);
        if coeffs.iter().all(Zero::is_zero) {
            if constant.is_negative() {
                self.infeasible = true;
            }
            return;
        }
        self.rows.push(Row { coeffs, constant }.normalized());
    }

    /// Keeps the tightest constant per coefficient direction.
    fn simplify(&mut self) {
        let mut best: BTreeMap<Vec<BigInt>, BigInt> = BTreeMap::new();
        for r in self.rows.drain(..) {
            best.entry(r.coeffs)
                .and_modify(|c| {
                    if r.constant < *c {
                        *c = r.constant.clone();
                    }
                })
                .or_insert(r.constant);
        }
        self.rows = best.into_iter().map(|(coeffs, constant)| Row { coeffs, constant }).collect();
    }

    /// Eliminates variable `k` (its coefficient becomes zero everywhere).
    fn eliminate(&self, k: usize) -> System {
        let mut out = System { vars: self.vars, rows: Vec::new(), infeasible: self.infeasible };
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for r in &self.rows {
            match r.coeffs[k].sign() {
                num_bigint::Sign::Plus => pos.push(r),
                num_bigint::Sign::Minus => neg.push(r),
                num_bigint::Sign::NoSign => out.rows.push(r.clone()),
            }
        }
        for p in &pos {
            for n in &neg {
                let (wp, wn) = (-&n.coeffs[k], p.coeffs[k].clone());
                let coeffs: Vec<BigInt> = p.coeffs.iter().zip(&n.coeffs).map(|(a, b)| &wp * a + &wn * b).collect();
                let constant = &wp * &p.constant + &wn * &n.constant;
                out.push(coeffs, constant);
            }
        }
        out.simplify();
        out
    }

    /// Bounds on variable `k` implied by rows that only involve `k`, given
    /// values for the variables `< k` (later variables must be absent).
    fn bounds_given(&self, k: usize, prefix: &[BigInt]) -> Option<(Option<BigInt>, Option<BigInt>)> {
        let mut lo: Option<BigInt> = None;
        let mut hi: Option<BigInt> = None;
        for r in &self.rows {
            let rest: BigInt = r.constant.clone() + r.coeffs[..k].iter().zip(prefix).map(|(a, t)| a * t).sum::<BigInt>();
            let a = &r.coeffs[k];
            if a.is_zero() {
                if rest.is_negative() {
                    return None;
                }
            } else if a.is_positive() {
                // a t + rest >= 0  =>  t >= ceil(-rest / a)
                let b = (-&rest).div_ceil(a);
                if lo.as_ref().is_none_or(|l| b > *l) {
                    lo = Some(b);
                }
            } else {
                // t <= floor(rest / -a)
                let b = rest.div_floor(&-a);
                if hi.as_ref().is_none_or(|h| b < *h) {
                    hi = Some(b);
                }
            }
        }
        Some((lo, hi))
    }

    fn rational_bounds(&self, k: usize) -> (Option<BigRational>, Option<BigRational>) {
        let mut lo: Option<BigRational> = None;
        let mut hi: Option<BigRational> = None;
        for r in &self.rows {
            let a = &r.coeffs[k];
            let v = BigRational::new(-r.constant.clone(), a.clone());
            if a.is_positive() {
                if lo.as_ref().is_none_or(|l| v > *l) {
                    lo = Some(v);
                }
            } else if a.is_negative() && hi.as_ref().is_none_or(|h| v < *h) {
                hi = Some(v);
            }
        }
        (lo, hi)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Option<BigRational>,
    pub hi: Option<BigRational>,
}

impl Interval {
    pub fn is_bounded(&self) -> bool {
        self.lo.is_some() && self.hi.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoxBounds {
    Empty,
    Box(Vec<Interval>),
}

impl BoxBounds {
    pub fn is_bounded(&self) -> bool {
        match self {
            BoxBounds::Empty => true,
            BoxBounds::Box(iv) => iv.iter().all(Interval::is_bounded),
        }
    }
}

/// Exact per-coordinate extent of `{t : A t + b >= 0}`.
pub fn polytope_box_bounds(sys: &System) -> BoxBounds {
    let mut intervals = Vec::with_capacity(sys.vars);
    for k in 0..sys.vars {
        let mut s = sys.clone();
        s.simplify();
        for j in (0..sys.vars).filter(|&j| j != k) {
            s = s.eliminate(j);
        }
        if s.infeasible {
            return BoxBounds::Empty;
        }
        let (lo, hi) = s.rational_bounds(k);
        if let (Some(l), Some(h)) = (&lo, &hi) {
            if l > h {
                return BoxBounds::Empty;
            }
        }
        intervals.push(Interval { lo, hi });
    }
    if sys.infeasible {
        return BoxBounds::Empty;
    }
    BoxBounds::Box(intervals)
}

pub fn box_bounds(a: &[Vec<BigRational>], b: &[BigRational]) -> Result<BoxBounds, LinalgError> {
    Ok(polytope_box_bounds(&System::from_rational(a, b)?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unbounded;

/// All integer points of the polytope. Variable `k` is chosen within the
/// bounds of the projection onto the first `k+1` variables, so every visited
/// prefix extends to a rational point.
pub fn lattice_points(sys: &System) -> Result<Vec<Vec<BigInt>>, Unbounded> {
    let n = sys.vars;
    let mut s = sys.clone();
    s.simplify();
    // projections[k] involves only variables 0..=k
    let mut projections = vec![System::new(n); n];
    for k in (0..n).rev() {
        projections[k] = s.clone();
        s = s.eliminate(k);
    }
    if s.infeasible || s.rows.iter().any(|r| r.constant.is_negative()) {
        return Ok(Vec::new());
    }
    if n == 0 {
        return Ok(vec![Vec::new()]);
    }
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(n);
    descend(&projections, &mut prefix, &mut out)?;
    Ok(out)
}

fn descend(proj: &[System], prefix: &mut Vec<BigInt>, out: &mut Vec<Vec<BigInt>>) -> Result<(), Unbounded> {
    let k = prefix.len();
    if k == proj.len() {
        out.push(prefix.clone());
        return Ok(());
    }
    let Some((lo, hi)) = proj[k].bounds_given(k, prefix) else { return Ok(()) };
    let (Some(lo), Some(hi)) = (lo, hi) else { return Err(Unbounded) };
    let mut t = lo;
    while t <= hi {
        prefix.push(t.clone());
        descend(proj, prefix, out)?;
        prefix.pop();
        t += 1;
    }
    Ok(())
}
