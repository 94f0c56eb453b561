//! Exact rational geometry: points, closed halfplanes, convex bodies and the
//! predicates every other module is built on.

pub mod frame;
pub mod rational;

use crate::Error;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

pub use rational::{format_rational, parse_rational, ParseRationalError};

pub type Rational = num_rational::BigRational;

/// Shorthand for building small rationals in code and tests.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// A point in the plane with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational2 {
    pub x: Rational,
    pub y: Rational,
}

impl Rational2 {
    pub fn new(x: Rational, y: Rational) -> Self {
        Rational2 { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Rational2::new(rat(x, 1), rat(y, 1))
    }

    pub fn sub(&self, other: &Rational2) -> Rational2 {
        Rational2::new(&self.x - &other.x, &self.y - &other.y)
    }

    pub fn add(&self, other: &Rational2) -> Rational2 {
        Rational2::new(&self.x + &other.x, &self.y + &other.y)
    }

    pub fn scale(&self, k: &Rational) -> Rational2 {
        Rational2::new(&self.x * k, &self.y * k)
    }
}

impl fmt::Display for Rational2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, {}", format_rational(&self.x), format_rational(&self.y))
    }
}

fn cross(a: &Rational2, b: &Rational2) -> Rational {
    &a.x * &b.y - &a.y * &b.x
}

/// Sign of `(q - p) x (r - p)`: `+1` when `r` is strictly left of `p -> q`.
pub fn orientation(p: &Rational2, q: &Rational2, r: &Rational2) -> i8 {
    match cross(&q.sub(p), &r.sub(p)).cmp(&Rational::zero()) {
        Ordering::Greater => 1,
        Ordering::Equal => 0,
        Ordering::Less => -1,
    }
}

/// Convex hull in counterclockwise order without collinear vertices.
/// Collinear input collapses to its two extreme points, a single distinct
/// point to itself. Panics on empty input.
pub fn convex_hull(points: &[Rational2]) -> Vec<Rational2> {
    assert!(!points.is_empty(), "convex hull of an empty point set");
    let pts: Vec<Rational2> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    if pts.len() <= 2 {
        return pts;
    }
    // Andrew's monotone chain.
    let mut hull: Vec<Rational2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Rational2>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for p in iter {
            while hull.len() >= start + 2 && orientation(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(p.clone());
        }
        hull.pop();
    }
    if hull.len() == 2 && hull[0] == hull[1] {
        hull.truncate(1);
    }
    hull
}

/// Closed halfplane `a x + b y <= c`, scaled so that the first nonzero of
/// `(a, b)` has absolute value one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Halfplane {
    a: Rational,
    b: Rational,
    c: Rational,
}

impl Halfplane {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Result<Self, Error> {
        let lead = if !a.is_zero() {
            a.abs()
        } else if !b.is_zero() {
            b.abs()
        } else {
            return Err(Error::DegenerateHalfplane);
        };
        Ok(Halfplane {
            a: a / &lead,
            b: b / &lead,
            c: c / &lead,
        })
    }

    /// The closed side left of the directed line `from -> to`.
    pub fn left_of(from: &Rational2, to: &Rational2) -> Result<Self, Error> {
        let d = to.sub(from);
        let c = &d.y * &from.x - &d.x * &from.y;
        Halfplane::new(d.y, -d.x, c)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    /// `c - (a x + b y)`: positive inside, zero on the boundary.
    pub fn slack(&self, p: &Rational2) -> Rational {
        &self.c - (&self.a * &p.x + &self.b * &p.y)
    }

    pub fn contains(&self, p: &Rational2) -> bool {
        !self.slack(p).is_negative()
    }
}

impl fmt::Display for Halfplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}*x + {}*y <= {}",
            format_rational(&self.a),
            format_rational(&self.b),
            format_rational(&self.c)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BodyKind {
    Point,
    Segment,
    Polygon,
}

impl BodyKind {
    pub fn name(self) -> &'static str {
        match self {
            BodyKind::Point => "point",
            BodyKind::Segment => "segment",
            BodyKind::Polygon => "polygon",
        }
    }
}

/// A point, segment or strictly convex counterclockwise polygon.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConvexBody {
    id: usize,
    vertices: Vec<Rational2>,
}

impl ConvexBody {
    pub fn new(id: usize, vertices: Vec<Rational2>) -> Result<Self, Error> {
        let invalid = |reason: &str| Error::InvalidBody {
            id,
            reason: reason.to_string(),
        };
        match vertices.len() {
            0 => return Err(invalid("no vertices")),
            1 => {}
            2 => {
                if vertices[0] == vertices[1] {
                    return Err(invalid("segment endpoints coincide"));
                }
            }
            k => {
                let strictly_left = (0..k).all(|i| {
                    orientation(&vertices[i], &vertices[(i + 1) % k], &vertices[(i + 2) % k]) == 1
                });
                if !strictly_left || !same_cycle(&convex_hull(&vertices), &vertices) {
                    return Err(invalid("polygon is not strictly convex and counterclockwise"));
                }
            }
        }
        Ok(ConvexBody { id, vertices })
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn vertices(&self) -> &[Rational2] {
        &self.vertices
    }

    pub fn kind(&self) -> BodyKind {
        match self.vertices.len() {
            1 => BodyKind::Point,
            2 => BodyKind::Segment,
            _ => BodyKind::Polygon,
        }
    }

    /// Boundary edges; a point yields one degenerate edge.
    fn edges(&self) -> Vec<(&Rational2, &Rational2)> {
        let v = &self.vertices;
        match v.len() {
            1 => vec![(&v[0], &v[0])],
            2 => vec![(&v[0], &v[1])],
            k => (0..k).map(|i| (&v[i], &v[(i + 1) % k])).collect(),
        }
    }

    /// Closed point membership.
    pub fn contains_point(&self, p: &Rational2) -> bool {
        let v = &self.vertices;
        match v.len() {
            1 => &v[0] == p,
            2 => on_segment(&v[0], &v[1], p),
            k => (0..k).all(|i| orientation(&v[i], &v[(i + 1) % k], p) >= 0),
        }
    }

    fn with_id(mut self, id: usize) -> Self {
        self.id = id;
        self
    }
}

fn same_cycle(a: &[Rational2], b: &[Rational2]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    match b.iter().position(|p| p == &a[0]) {
        Some(shift) => (0..a.len()).all(|i| a[i] == b[(i + shift) % b.len()]),
        None => false,
    }
}

fn between(lo: &Rational, hi: &Rational, v: &Rational) -> bool {
    let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    lo <= v && v <= hi
}

/// Closed segment membership (`a == b` is a point).
fn on_segment(a: &Rational2, b: &Rational2, p: &Rational2) -> bool {
    orientation(a, b, p) == 0 && between(&a.x, &b.x, &p.x) && between(&a.y, &b.y, &p.y)
}

fn segments_meet(a: &Rational2, b: &Rational2, c: &Rational2, d: &Rational2) -> bool {
    let o1 = orientation(a, b, c);
    let o2 = orientation(a, b, d);
    let o3 = orientation(c, d, a);
    let o4 = orientation(c, d, b);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) || on_segment(c, d, b)
}

/// Closed containment of a body in a halfplane; vertices suffice by convexity.
pub fn body_in_halfplane(body: &ConvexBody, h: &Halfplane) -> bool {
    body.vertices.iter().all(|v| h.contains(v))
}

/// Whether two closed convex bodies share a point.
pub fn bodies_intersect(a: &ConvexBody, b: &ConvexBody) -> bool {
    if a.vertices.iter().any(|p| b.contains_point(p)) || b.vertices.iter().any(|p| a.contains_point(p)) {
        return true;
    }
    let eb = b.edges();
    a.edges()
        .iter()
        .any(|(p, q)| eb.iter().any(|(r, s)| segments_meet(p, q, r, s)))
}

/// Rational parametrization of the unit circle, `((1-t^2)/(1+t^2), 2t/(1+t^2))`.
pub fn circle_point(t: &Rational) -> Rational2 {
    let t2 = t * t;
    let den = Rational::one() + &t2;
    Rational2::new((Rational::one() - &t2) / &den, (t * Rational::from_integer(2.into())) / &den)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ambient {
    Planar,
    Lifted3d,
}

impl Ambient {
    pub fn name(self) -> &'static str {
        match self {
            Ambient::Planar => "planar",
            Ambient::Lifted3d => "lifted-3d",
        }
    }
}

/// Bodies with ids `0..n`, optionally lifted to integer z-levels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Family {
    bodies: Vec<ConvexBody>,
    ambient: Ambient,
    levels: Option<Vec<i64>>,
}

impl Family {
    /// Builds a planar family, validating every vertex list.
    pub fn planar(bodies: Vec<Vec<Rational2>>) -> Result<Self, Error> {
        let bodies = bodies
            .into_iter()
            .enumerate()
            .map(|(id, v)| ConvexBody::new(id, v))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Family {
            bodies,
            ambient: Ambient::Planar,
            levels: None,
        })
    }

    /// Renumbers the given bodies to `0..n` in order.
    pub fn from_bodies(bodies: Vec<ConvexBody>) -> Self {
        Family {
            bodies: bodies.into_iter().enumerate().map(|(i, b)| b.with_id(i)).collect(),
            ambient: Ambient::Planar,
            levels: None,
        }
    }

    /// Attaches one z-level per body.
    pub fn lifted(self, levels: Vec<i64>) -> Result<Self, Error> {
        if levels.len() != self.bodies.len() {
            return Err(Error::InvalidParameter(format!(
                "{} levels for {} bodies",
                levels.len(),
                self.bodies.len()
            )));
        }
        Ok(Family {
            ambient: Ambient::Lifted3d,
            levels: Some(levels),
            ..self
        })
    }

    /// Drops the lift, keeping the planar projection.
    pub fn projection(&self) -> Family {
        Family {
            bodies: self.bodies.clone(),
            ambient: Ambient::Planar,
            levels: None,
        }
    }

    pub fn bodies(&self) -> &[ConvexBody] {
        &self.bodies
    }

    pub fn len(&self) -> usize {
        self.bodies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bodies.is_empty()
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn levels(&self) -> Option<&[i64]> {
        self.levels.as_deref()
    }

    pub fn require_planar(&self) -> Result<(), Error> {
        match self.ambient {
            Ambient::Planar => Ok(()),
            Ambient::Lifted3d => Err(Error::NotPlanar),
        }
    }

    /// All vertices in body order.
    pub fn vertices(&self) -> impl Iterator<Item = &Rational2> {
        self.bodies.iter().flat_map(|b| b.vertices.iter())
    }

    /// The subfamily of the listed bodies, renumbered.
    pub fn subfamily(&self, ids: &[usize]) -> Family {
        let mut sub = Family::from_bodies(ids.iter().map(|&i| self.bodies[i].clone()).collect());
        if let Some(levels) = &self.levels {
            sub.ambient = self.ambient;
            sub.levels = Some(ids.iter().map(|&i| levels[i]).collect());
        }
        sub
    }

    /// Axis-aligned bounding box `(min, max)`, or `None` for an empty family.
    pub fn bounding_box(&self) -> Option<(Rational2, Rational2)> {
        let mut it = self.vertices();
        let first = it.next()?;
        let (mut lo, mut hi) = (first.clone(), first.clone());
        for v in it {
            if v.x < lo.x {
                lo.x = v.x.clone();
            }
            if v.y < lo.y {
                lo.y = v.y.clone();
            }
            if v.x > hi.x {
                hi.x = v.x.clone();
            }
            if v.y > hi.y {
                hi.y = v.y.clone();
            }
        }
        Some((lo, hi))
    }
}

/// Outcome of the general-position check; violations are data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneralPosition {
    Ok,
    Duplicate(Rational2),
    Collinear([Rational2; 3]),
}

impl GeneralPosition {
    pub fn is_ok(&self) -> bool {
        matches!(self, GeneralPosition::Ok)
    }

    pub fn into_result(self) -> Result<(), Error> {
        match self {
            GeneralPosition::Ok => Ok(()),
            GeneralPosition::Duplicate(p) => Err(Error::DuplicateVertex(p)),
            GeneralPosition::Collinear(t) => Err(Error::Collinear(t)),
        }
    }
}

/// All vertices pairwise distinct and no three collinear.
pub fn check_general_position(family: &Family) -> GeneralPosition {
    let mut seen = BTreeSet::new();
    for v in family.vertices() {
        if !seen.insert(v) {
            return GeneralPosition::Duplicate(v.clone());
        }
    }
    collinear_among(&family.vertices().cloned().collect::<Vec<_>>())
}

/// No three distinct vertex locations collinear. Vertices shared between
/// bodies are allowed; this is what enumeration needs.
pub fn check_distinct_locations(family: &Family) -> GeneralPosition {
    let mut seen = BTreeSet::new();
    let locs: Vec<Rational2> = family.vertices().filter(|v| seen.insert(*v)).cloned().collect();
    collinear_among(&locs)
}

fn collinear_among(points: &[Rational2]) -> GeneralPosition {
    match frame::collinear_triple_in(&frame::Frame::new(points)) {
        Some([i, j, k]) => GeneralPosition::Collinear([points[i].clone(), points[j].clone(), points[k].clone()]),
        None => GeneralPosition::Ok,
    }
}

/// Deterministic perturbation: the i-th vertex (global order) moves by
/// `(i * delta, i^2 * delta)`, where `delta` is the smallest positive
/// Chebyshev distance between two vertices divided by 2^20 (and again by the
/// square of the vertex count, so no vertex moves further than that bound).
/// An x-only shift would keep horizontal collinear triples collinear.
pub fn perturb(family: &Family) -> Result<Family, Error> {
    let verts: Vec<&Rational2> = family.vertices().collect();
    let mut min: Option<Rational> = None;
    for (i, p) in verts.iter().enumerate() {
        for q in &verts[i + 1..] {
            let d = (&p.x - &q.x).abs().max((&p.y - &q.y).abs());
            if d.is_positive() && min.as_ref().map_or(true, |m| &d < m) {
                min = Some(d);
            }
        }
    }
    let count = verts.len().max(1) as u64;
    let delta = min.unwrap_or_else(Rational::one)
        / Rational::from_integer(BigInt::from(1u64 << 20) * BigInt::from(count * count));
    let mut index = 0i64;
    let bodies = family
        .bodies()
        .iter()
        .map(|b| {
            let moved = b
                .vertices()
                .iter()
                .map(|v| {
                    let i = Rational::from_integer(index.into());
                    index += 1;
                    Rational2::new(&v.x + &delta * &i, &v.y + &delta * &i * &i)
                })
                .collect();
            ConvexBody::new(b.id(), moved)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Family {
        bodies,
        ambient: family.ambient,
        levels: family.levels.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Rational2 {
        Rational2::from_ints(x, y)
    }

    fn seg(a: (i64, i64), b: (i64, i64)) -> ConvexBody {
        ConvexBody::new(0, vec![p(a.0, a.1), p(b.0, b.1)]).unwrap()
    }

    fn hp(a: i64, b: i64, c: Rational) -> Halfplane {
        Halfplane::new(rat(a, 1), rat(b, 1), c).unwrap()
    }

    #[test]
    fn orientation_examples() {
        assert_eq!(orientation(&p(0, 0), &p(1, 0), &p(0, 1)), 1);
        assert_eq!(orientation(&p(0, 0), &p(1, 0), &p(2, 0)), 0);
        assert_eq!(orientation(&p(0, 0), &p(1, 0), &p(0, -1)), -1);
    }

    #[test]
    fn hull_examples() {
        assert_eq!(convex_hull(&[p(0, 0)]), vec![p(0, 0)]);
        let quarter = Rational2::new(rat(1, 4), rat(1, 4));
        assert_eq!(
            convex_hull(&[p(0, 0), p(1, 0), p(0, 1), quarter]),
            vec![p(0, 0), p(1, 0), p(0, 1)]
        );
        assert_eq!(convex_hull(&[p(0, 0), p(2, 0), p(1, 0)]), vec![p(0, 0), p(2, 0)]);
        assert_eq!(convex_hull(&[p(3, 3), p(3, 3)]), vec![p(3, 3)]);
        // collinear points on an edge are dropped
        assert_eq!(
            convex_hull(&[p(0, 0), p(1, 0), p(2, 0), p(2, 2), p(0, 2)]),
            vec![p(0, 0), p(2, 0), p(2, 2), p(0, 2)]
        );
    }

    #[test]
    fn containment_examples() {
        let s = seg((0, 0), (1, 0));
        assert!(body_in_halfplane(&s, &hp(0, 1, rat(1, 1))));
        assert!(body_in_halfplane(&s, &hp(0, 1, rat(0, 1))));
        assert!(!body_in_halfplane(&seg((0, 0), (0, 1)), &hp(0, 1, rat(1, 2))));
    }

    #[test]
    fn intersection_examples() {
        assert!(bodies_intersect(&seg((0, 0), (2, 2)), &seg((0, 2), (2, 0))));
        assert!(!bodies_intersect(&seg((0, 0), (1, 0)), &seg((0, 1), (1, 1))));
        let tri = ConvexBody::new(0, vec![p(0, 0), p(4, 0), p(0, 4)]).unwrap();
        let pt = ConvexBody::new(1, vec![p(1, 1)]).unwrap();
        assert!(bodies_intersect(&tri, &pt));
        // collinear, disjoint and touching segments
        assert!(!bodies_intersect(&seg((0, 0), (1, 0)), &seg((2, 0), (3, 0))));
        assert!(bodies_intersect(&seg((0, 0), (2, 0)), &seg((2, 0), (3, 0))));
        // nested polygons with no boundary contact
        let big = ConvexBody::new(0, vec![p(-10, -10), p(10, -10), p(10, 10), p(-10, 10)]).unwrap();
        assert!(bodies_intersect(&big, &tri));
    }

    #[test]
    fn circle_point_examples() {
        assert_eq!(circle_point(&rat(0, 1)), p(1, 0));
        assert_eq!(circle_point(&rat(1, 1)), p(0, 1));
        assert_eq!(circle_point(&rat(1, 2)), Rational2::new(rat(3, 5), rat(4, 5)));
    }

    #[test]
    fn general_position_examples() {
        let ok = Family::planar(vec![vec![p(0, 0), p(1, 3)], vec![p(5, 1), p(7, 4)]]).unwrap();
        assert!(check_general_position(&ok).is_ok());
        let col = Family::planar(vec![vec![p(0, 0), p(2, 0)], vec![p(1, 0), p(1, 1)]]).unwrap();
        assert_eq!(check_general_position(&col), GeneralPosition::Collinear([p(0, 0), p(2, 0), p(1, 0)]));
        let dup = Family::planar(vec![vec![p(0, 0), p(1, 3)], vec![p(0, 0), p(4, 1)]]).unwrap();
        assert_eq!(check_general_position(&dup), GeneralPosition::Duplicate(p(0, 0)));
        assert!(check_distinct_locations(&dup).is_ok());
    }

    #[test]
    fn body_validation() {
        assert!(ConvexBody::new(0, vec![]).is_err());
        assert!(ConvexBody::new(0, vec![p(1, 1), p(1, 1)]).is_err());
        // clockwise
        assert!(ConvexBody::new(0, vec![p(0, 0), p(0, 1), p(1, 0)]).is_err());
        // reflex vertex
        assert!(ConvexBody::new(0, vec![p(0, 0), p(4, 0), p(1, 1), p(0, 4)]).is_err());
        // collinear consecutive vertices
        assert!(ConvexBody::new(0, vec![p(0, 0), p(1, 0), p(2, 0), p(0, 2)]).is_err());
        // pentagram winds twice
        let star = vec![p(0, 10), p(-6, -8), p(10, 3), p(-10, 3), p(6, -8)];
        assert!(ConvexBody::new(0, star).is_err());
        assert!(ConvexBody::new(0, vec![p(0, 0), p(1, 0), p(0, 1)]).is_ok());
    }

    #[test]
    fn halfplane_normalization() {
        let h1 = Halfplane::new(rat(2, 1), rat(4, 1), rat(6, 1)).unwrap();
        let h2 = Halfplane::new(rat(1, 1), rat(2, 1), rat(3, 1)).unwrap();
        assert_eq!(h1, h2);
        let h3 = Halfplane::new(rat(0, 1), rat(-3, 1), rat(6, 1)).unwrap();
        assert_eq!((h3.b().clone(), h3.c().clone()), (rat(-1, 1), rat(2, 1)));
        assert_eq!(Halfplane::new(rat(0, 1), rat(0, 1), rat(1, 1)), Err(Error::DegenerateHalfplane));
        let left = Halfplane::left_of(&p(0, 0), &p(1, 0)).unwrap();
        assert!(left.contains(&p(5, 1)) && left.contains(&p(-3, 0)) && !left.contains(&p(0, -1)));
    }

    #[test]
    fn perturbation_breaks_collinearity() {
        let col = Family::planar(vec![vec![p(0, 0), p(2, 0)], vec![p(1, 0), p(1, 1)]]).unwrap();
        let moved = perturb(&col).unwrap();
        assert!(check_general_position(&moved).is_ok());
        assert_eq!(perturb(&col).unwrap(), moved);
    }
}
