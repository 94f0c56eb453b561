//! Rotational sweep over terminal configurations.
//!
//! Every nontrivial realized subfamily has a realizing halfplane whose
//! boundary passes through a vertex `v` of an included body (the head) and a
//! vertex `u` of an excluded body (the tail), with everything else strictly
//! classified. Rotating that boundary slightly about `v` so that `u` falls
//! outside gives the candidate
//!
//! ```text
//! { C : every vertex of C is strictly left of u -> v, or equals v }
//! ```
//!
//! and every such candidate is realized. For each pivot `v` the sweep sorts
//! the other vertex locations by the angle at which the directed line through
//! `v` passes them and maintains, per body, the number of vertices that are
//! not strictly left. Candidates are reported at every tail event, so a pivot
//! costs `O(L log L)` instead of `O(L^2)` for `L` distinct locations.
//!
//! Vertices shared between bodies are handled by grouping them into
//! locations; the sweep only needs that no three distinct locations are
//! collinear.

use crate::geom::frame::{angle_cmp, ExactInt, Frame, IntPoint};
use crate::geom::{Family, Rational2};
use std::collections::BTreeMap;
use std::ops::ControlFlow;

/// Receives the inclusion state as the sweep moves.
pub(crate) trait SweepVisitor {
    /// All bodies are now excluded.
    fn clear(&mut self);
    /// Body `body` switched membership.
    fn toggle(&mut self, body: usize, included: bool);
    /// The current membership is a realized subfamily. `anchor` is
    /// `(tail location, head location)` for rotation candidates and `None`
    /// for the empty and full subfamilies.
    fn candidate(&mut self, anchor: Option<(usize, usize)>) -> ControlFlow<()>;
}

/// Distinct vertex locations of a family with the bodies that own them.
pub(crate) struct Locations {
    pub points: Vec<Rational2>,
    /// Bodies with a vertex at each location.
    pub owners: Vec<Vec<usize>>,
    /// One `(body, vertex index)` per location, the first in body order.
    pub first_vertex: Vec<(usize, usize)>,
    pub frame: Frame,
    pub body_sizes: Vec<usize>,
}

impl Locations {
    pub fn new(family: &Family) -> Self {
        let mut index: BTreeMap<&Rational2, usize> = BTreeMap::new();
        let mut points = Vec::new();
        let mut owners: Vec<Vec<usize>> = Vec::new();
        let mut first_vertex = Vec::new();
        for body in family.bodies() {
            for (vi, v) in body.vertices().iter().enumerate() {
                let loc = *index.entry(v).or_insert_with(|| {
                    points.push(v.clone());
                    owners.push(Vec::new());
                    first_vertex.push((body.id(), vi));
                    points.len() - 1
                });
                owners[loc].push(body.id());
            }
        }
        let frame = Frame::new(&points);
        Locations {
            points,
            owners,
            first_vertex,
            frame,
            body_sizes: family.bodies().iter().map(|b| b.vertices().len()).collect(),
        }
    }
}

/// Runs the sweep; stops early when the visitor breaks.
pub(crate) fn sweep<V: SweepVisitor>(locs: &Locations, visitor: &mut V) -> ControlFlow<()> {
    let n = locs.body_sizes.len();
    visitor.clear();
    visitor.candidate(None)?;
    for b in 0..n {
        visitor.toggle(b, true);
    }
    visitor.candidate(None)?;
    match &locs.frame {
        Frame::Small(pts) => sweep_pivots(pts, locs, visitor),
        Frame::Big(pts) => sweep_pivots(pts, locs, visitor),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Event {
    /// The location is ahead of the pivot and leaves the left side.
    Exit,
    /// The location is behind the pivot (the tail) and enters the left side.
    Enter,
}

fn sweep_pivots<T: ExactInt, V: SweepVisitor>(
    pts: &[IntPoint<T>],
    locs: &Locations,
    visitor: &mut V,
) -> ControlFlow<()> {
    let n = locs.body_sizes.len();
    let mut not_left = vec![0usize; n];
    let mut events: Vec<(IntPoint<T>, usize, Event)> = Vec::with_capacity(2 * pts.len());
    let zero = T::zero();
    for (pivot, v) in pts.iter().enumerate() {
        not_left.copy_from_slice(&locs.body_sizes);
        for &b in &locs.owners[pivot] {
            not_left[b] -= 1;
        }
        events.clear();
        for (w, p) in pts.iter().enumerate() {
            if w == pivot {
                continue;
            }
            let r = p.sub(v);
            // Start just clockwise of direction (1, 0).
            if r.y > zero || (r.y == zero && r.x > zero) {
                for &b in &locs.owners[w] {
                    not_left[b] -= 1;
                }
            }
            events.push((r.neg(), w, Event::Enter));
            events.push((r, w, Event::Exit));
        }
        events.sort_by(|a, b| angle_cmp(&a.0, &b.0));

        visitor.clear();
        for (b, &c) in not_left.iter().enumerate() {
            if c == 0 {
                visitor.toggle(b, true);
            }
        }
        for (_, w, kind) in &events {
            match kind {
                Event::Enter => {
                    visitor.candidate(Some((*w, pivot)))?;
                    for &b in &locs.owners[*w] {
                        not_left[b] -= 1;
                        if not_left[b] == 0 {
                            visitor.toggle(b, true);
                        }
                    }
                }
                Event::Exit => {
                    for &b in &locs.owners[*w] {
                        if not_left[b] == 0 {
                            visitor.toggle(b, false);
                        }
                        not_left[b] += 1;
                    }
                }
            }
        }
    }
    ControlFlow::Continue(())
}
