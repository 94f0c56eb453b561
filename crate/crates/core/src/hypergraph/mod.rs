//! The containment hypergraph of a family: realized subfamilies, witnesses,
//! shattering and the combinatorial invariants that constrain them.

mod oracle;
pub(crate) mod sweep;

pub use oracle::sampled_oracle;

use crate::geom::{
    self, body_in_halfplane, bodies_intersect, check_distinct_locations, convex_hull, rat, Family, Halfplane,
    Rational, Rational2,
};
use crate::{BodySet, Error};
use num_traits::One;
use std::collections::HashSet;
use std::ops::ControlFlow;
use sweep::{sweep, Locations, SweepVisitor};

/// The hyperedges of a family, sorted ascending and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSet {
    n: usize,
    edges: Vec<BodySet>,
}

impl EdgeSet {
    /// Sorts and deduplicates.
    pub fn new(n: usize, mut edges: Vec<BodySet>) -> Self {
        edges.sort();
        edges.dedup();
        EdgeSet { n, edges }
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[BodySet] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: &BodySet) -> bool {
        self.edges.binary_search(e).is_ok()
    }

    pub fn is_subset(&self, other: &EdgeSet) -> bool {
        self.edges.iter().all(|e| other.contains(e))
    }

    /// One binary string per line, ascending.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.edges {
            out.push_str(&e.to_binary());
            out.push('\n');
        }
        out
    }

    /// Parses [`EdgeSet::to_text`]; every line must have length `n`.
    pub fn from_text(n: usize, text: &str) -> Option<EdgeSet> {
        let edges = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| BodySet::from_binary(l.trim()).filter(|s| s.universe() == n))
            .collect::<Option<Vec<_>>>()?;
        Some(EdgeSet::new(n, edges))
    }
}

/// A vertex of a family, `(body id, index in the body's vertex list)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VertexRef {
    pub body: usize,
    pub vertex: usize,
}

/// A halfplane certifying that `subset` is realized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub subset: BodySet,
    pub halfplane: Halfplane,
    /// `(tail, head)` of the terminal configuration the halfplane was rotated
    /// from; absent for the empty and full subfamilies.
    pub anchor: Option<(VertexRef, VertexRef)>,
}

impl Witness {
    /// Re-derives the contained bodies and compares with `subset`.
    pub fn verify(&self, family: &Family) -> bool {
        contained_bodies(family, &self.halfplane) == self.subset
    }
}

/// Bodies fully inside `h`.
pub fn contained_bodies(family: &Family, h: &Halfplane) -> BodySet {
    BodySet::from_ids(
        family.len(),
        family.bodies().iter().filter(|b| body_in_halfplane(b, h)).map(|b| b.id()),
    )
}

fn prepare(family: &Family) -> Result<Locations, Error> {
    family.require_planar()?;
    check_distinct_locations(family).into_result()?;
    Ok(Locations::new(family))
}

struct Collect {
    current: BodySet,
    seen: HashSet<BodySet>,
}

impl SweepVisitor for Collect {
    fn clear(&mut self) {
        self.current.clear();
    }

    fn toggle(&mut self, body: usize, included: bool) {
        self.current.set(body, included);
    }

    fn candidate(&mut self, _: Option<(usize, usize)>) -> ControlFlow<()> {
        if !self.seen.contains(&self.current) {
            self.seen.insert(self.current.clone());
        }
        ControlFlow::Continue(())
    }
}

/// Every subfamily realized by a closed halfplane.
///
/// Requires that no three distinct vertex locations are collinear; vertices
/// shared between bodies are allowed.
pub fn enumerate_realized(family: &Family) -> Result<EdgeSet, Error> {
    let locs = prepare(family)?;
    let n = family.len();
    let mut visitor = Collect {
        current: BodySet::empty(n),
        seen: HashSet::new(),
    };
    let _ = sweep(&locs, &mut visitor);
    Ok(EdgeSet::new(n, visitor.seen.into_iter().collect()))
}

/// Streams the sweep through a visitor after the usual precondition checks.
pub(crate) fn visit_realized<V: SweepVisitor>(family: &Family, visitor: &mut V) -> Result<(), Error> {
    let locs = prepare(family)?;
    let _ = sweep(&locs, visitor);
    Ok(())
}

struct Find<'a> {
    target: &'a BodySet,
    current: BodySet,
    found: Option<Option<(usize, usize)>>,
}

impl SweepVisitor for Find<'_> {
    fn clear(&mut self) {
        self.current.clear();
    }

    fn toggle(&mut self, body: usize, included: bool) {
        self.current.set(body, included);
    }

    fn candidate(&mut self, anchor: Option<(usize, usize)>) -> ControlFlow<()> {
        if &self.current == self.target {
            self.found = Some(anchor);
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    }
}

const MAX_HALVINGS: usize = 4096;

/// An exact halfplane realizing `subset`, or `None` when it is not realized.
pub fn realize_witness(family: &Family, subset: &BodySet) -> Result<Option<Witness>, Error> {
    let locs = prepare(family)?;
    let n = family.len();
    if subset.universe() != n {
        return Err(Error::InvalidParameter(format!(
            "subset over {} bodies for a family of {n}",
            subset.universe()
        )));
    }
    let mut finder = Find {
        target: subset,
        current: BodySet::empty(n),
        found: None,
    };
    let _ = sweep(&locs, &mut finder);
    let anchor = match finder.found {
        None => return Ok(None),
        Some(a) => a,
    };
    let witness = match anchor {
        None => trivial_witness(family, subset),
        Some((tail, head)) => {
            let halfplane = rotate_off_tail(family, subset, &locs.points[tail], &locs.points[head]);
            let vref = |loc: usize| {
                let (body, vertex) = locs.first_vertex[loc];
                VertexRef { body, vertex }
            };
            Witness {
                subset: subset.clone(),
                halfplane,
                anchor: Some((vref(tail), vref(head))),
            }
        }
    };
    assert!(witness.verify(family), "witness failed re-classification");
    Ok(Some(witness))
}

fn trivial_witness(family: &Family, subset: &BodySet) -> Witness {
    let (lo, hi) = family
        .bounding_box()
        .unwrap_or_else(|| (Rational2::from_ints(0, 0), Rational2::from_ints(0, 0)));
    // y <= max y holds everything; y <= min y - 1 holds nothing.
    let c = if subset.is_empty() && !family.is_empty() {
        lo.y - Rational::one()
    } else {
        hi.y
    };
    Witness {
        subset: subset.clone(),
        halfplane: Halfplane::new(rat(0, 1), rat(1, 1), c).expect("b = 1"),
        anchor: None,
    }
}

/// Left side of `tail' -> head` where `tail' = tail + eta * leftnormal`,
/// halving `eta` until the contained bodies are exactly `subset`.
fn rotate_off_tail(family: &Family, subset: &BodySet, tail: &Rational2, head: &Rational2) -> Halfplane {
    let d = head.sub(tail);
    let normal = Rational2::new(-d.y.clone(), d.x.clone());
    let mut eta = Rational::one();
    let half = rat(1, 2);
    for _ in 0..MAX_HALVINGS {
        let moved = tail.add(&normal.scale(&eta));
        let h = Halfplane::left_of(&moved, head).expect("distinct locations");
        if &contained_bodies(family, &h) == subset {
            return h;
        }
        eta *= &half;
    }
    unreachable!("rotation about a terminal configuration must realize its candidate")
}

/// Result of a shattering query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Shattering {
    Shattered,
    /// The numerically smallest subset of `X` that is no edge's trace.
    Missing(BodySet),
}

impl Shattering {
    pub fn is_shattered(&self) -> bool {
        matches!(self, Shattering::Shattered)
    }
}

/// Shattering of `subset` against a precomputed edge set.
pub fn shattering_in(edges: &EdgeSet, subset: &BodySet) -> Shattering {
    let members = subset.to_vec();
    let mut traces: HashSet<u64> = HashSet::new();
    'edges: for e in edges.edges() {
        let mut index = 0u64;
        for (pos, &m) in members.iter().enumerate() {
            if e.contains(m) {
                if pos >= 64 {
                    continue 'edges;
                }
                index |= 1 << pos;
            }
        }
        traces.insert(index);
    }
    let k = members.len();
    let total: u128 = 1u128 << k.min(127);
    let mut i: u64 = 0;
    while (i as u128) < total {
        if !traces.contains(&i) {
            let n = edges.universe();
            return Shattering::Missing(BodySet::from_ids(
                n,
                members.iter().enumerate().filter(|(pos, _)| *pos < 64 && i >> pos & 1 == 1).map(|(_, &m)| m),
            ));
        }
        i += 1;
    }
    Shattering::Shattered
}

/// Whether every subset of `subset` is the trace of a realized subfamily.
pub fn is_shattered(family: &Family, subset: &BodySet) -> Result<Shattering, Error> {
    let edges = enumerate_realized(family)?;
    Ok(shattering_in(&edges, subset))
}

/// VC-dimension (capped) with the numerically smallest witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VcDimension {
    pub dim: usize,
    pub witness: BodySet,
}

fn is_shattered_fast(edges: &[BodySet], members: &[usize], seen: &mut Vec<bool>) -> bool {
    let k = members.len();
    seen.clear();
    seen.resize(1 << k, false);
    let mut hit = 0usize;
    for e in edges {
        let mut index = 0usize;
        for (pos, &m) in members.iter().enumerate() {
            if e.contains(m) {
                index |= 1 << pos;
            }
        }
        if !seen[index] {
            seen[index] = true;
            hit += 1;
            if hit == 1 << k {
                return true;
            }
        }
    }
    false
}

/// Advances `comb` to the next k-combination in colexicographic order, which
/// is ascending bitmask order.
fn next_combination(comb: &mut [usize], n: usize) -> bool {
    let k = comb.len();
    for i in 0..k {
        let limit = if i + 1 < k { comb[i + 1] } else { n };
        if comb[i] + 1 < limit {
            comb[i] += 1;
            for (j, slot) in comb.iter_mut().enumerate().take(i) {
                *slot = j;
            }
            return true;
        }
    }
    false
}

/// Largest shattered subset size up to `cap`, from an edge set.
pub fn vc_dimension_in(edges: &EdgeSet, cap: usize) -> VcDimension {
    let n = edges.universe();
    let log = usize::BITS as usize - 1 - edges.len().max(1).leading_zeros() as usize;
    let top = cap.min(n).min(log).min(usize::BITS as usize - 2);
    let mut seen = Vec::new();
    for k in (1..=top).rev() {
        let mut comb: Vec<usize> = (0..k).collect();
        loop {
            if is_shattered_fast(edges.edges(), &comb, &mut seen) {
                return VcDimension {
                    dim: k,
                    witness: BodySet::from_ids(n, comb.iter().copied()),
                };
            }
            if !next_combination(&mut comb, n) {
                break;
            }
        }
    }
    VcDimension {
        dim: 0,
        witness: BodySet::empty(n),
    }
}

/// Largest `k <= cap` such that some k-subset is shattered.
pub fn vc_dimension(family: &Family, cap: usize) -> Result<VcDimension, Error> {
    Ok(vc_dimension_in(&enumerate_realized(family)?, cap))
}

/// Unordered pairs of bodies with a common point.
pub fn count_intersecting_pairs(family: &Family) -> usize {
    let b = family.bodies();
    (0..b.len())
        .map(|i| (i + 1..b.len()).filter(|&j| bodies_intersect(&b[i], &b[j])).count())
        .sum()
}

/// `n (n - 3) / 6`, the fewest intersecting pairs a shattered family of `n`
/// convex bodies can have.
pub fn turan_lower_bound(n: usize) -> Rational {
    let n = n as i64;
    rat(n * (n - 3), 6)
}

/// `max(0, ceil(n (n - 3) / 6))` as an integer count.
pub fn turan_pairs(n: usize) -> usize {
    let ceil = geom::rational::ceil_to_integer(&turan_lower_bound(n));
    usize::try_from(ceil).unwrap_or(0)
}

/// `2 n (n - 1) + 2`, the most subfamilies `n` segments in general position
/// can realize.
pub fn tangent_bound(n: usize) -> usize {
    2 * n * n.saturating_sub(1) + 2
}

/// Outcome of [`hull_lemma_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HullCheck {
    Ok,
    /// A body with no point on the hull boundary.
    Offender(usize),
}

/// Every body must touch the boundary of the hull of the whole family for
/// the family to be shattered.
pub fn hull_lemma_check(family: &Family) -> HullCheck {
    let all: Vec<Rational2> = family.vertices().cloned().collect();
    if all.is_empty() {
        return HullCheck::Ok;
    }
    let hull = convex_hull(&all);
    let on_boundary = |p: &Rational2| -> bool {
        match hull.len() {
            1 => &hull[0] == p,
            k => (0..k).any(|i| {
                let (a, b) = (&hull[i], &hull[(i + 1) % k]);
                geom::orientation(a, b, p) == 0
                    && (&a.x).min(&b.x) <= &p.x
                    && &p.x <= (&a.x).max(&b.x)
                    && (&a.y).min(&b.y) <= &p.y
                    && &p.y <= (&a.y).max(&b.y)
            }),
        }
    };
    for body in family.bodies() {
        if !body.vertices().iter().any(&on_boundary) {
            return HullCheck::Offender(body.id());
        }
    }
    HullCheck::Ok
}
