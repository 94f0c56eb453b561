//! Seeded random families on exact rational grids.
//!
//! Floating point only picks candidate coordinates; every coordinate is
//! snapped to a rational grid before any predicate sees it, and every family
//! returned is in general position.

use crate::hypergraph::{hull_lemma_check, HullCheck};
use crate::geom::{bodies_intersect, check_general_position, convex_hull, rat, ConvexBody, Family, Rational2};
use rand::Rng;
use std::f64::consts::TAU;

/// Grid denominator for small families.
pub const GRID_DENOM: i64 = 64;
/// Grid half-width for small families, so coordinates lie in `[-8, 8]`.
pub const GRID_HALF_WIDTH: i64 = 8;

const GRID_LIMIT: i64 = GRID_DENOM * GRID_HALF_WIDTH;

/// Snaps to the nearest point of the `1/64` grid, clamped to `[-8, 8]^2`.
pub fn snap(x: f64, y: f64) -> Rational2 {
    let k = |v: f64| ((v * GRID_DENOM as f64).round() as i64).clamp(-GRID_LIMIT, GRID_LIMIT);
    Rational2::new(rat(k(x), GRID_DENOM), rat(k(y), GRID_DENOM))
}

pub fn grid_point<R: Rng>(rng: &mut R) -> Rational2 {
    Rational2::new(
        rat(rng.gen_range(-GRID_LIMIT..=GRID_LIMIT), GRID_DENOM),
        rat(rng.gen_range(-GRID_LIMIT..=GRID_LIMIT), GRID_DENOM),
    )
}

/// `n` segments with grid endpoints, in general position.
pub fn random_segments<R: Rng>(n: usize, rng: &mut R) -> Family {
    loop {
        let bodies = (0..n).map(|_| vec![grid_point(rng), grid_point(rng)]).collect();
        if let Ok(f) = Family::planar(bodies) {
            if check_general_position(&f).is_ok() {
                return f;
            }
        }
    }
}

/// A convex polygon with 3 to 5 vertices around a random center.
pub fn random_polygon<R: Rng>(rng: &mut R, max_radius: f64) -> Vec<Rational2> {
    loop {
        let cx = rng.gen_range(-6.0..6.0);
        let cy = rng.gen_range(-6.0..6.0);
        let r = rng.gen_range(0.25..max_radius);
        let k = rng.gen_range(3..=5);
        let pts: Vec<Rational2> = (0..k)
            .map(|_| {
                let a = rng.gen_range(0.0..TAU);
                snap(cx + r * a.cos(), cy + r * a.sin())
            })
            .collect();
        let hull = convex_hull(&pts);
        if hull.len() >= 3 {
            return hull;
        }
    }
}

fn pairwise_disjoint(f: &Family) -> bool {
    let b = f.bodies();
    (0..b.len()).all(|i| (i + 1..b.len()).all(|j| !bodies_intersect(&b[i], &b[j])))
}

/// `n` pairwise disjoint convex polygons in general position.
pub fn random_disjoint_polygons<R: Rng>(n: usize, rng: &mut R) -> Family {
    'retry: loop {
        let mut bodies: Vec<ConvexBody> = Vec::with_capacity(n);
        for id in 0..n {
            let mut placed = false;
            for _ in 0..200 {
                let poly = ConvexBody::new(id, random_polygon(rng, 2.0)).expect("hull is convex");
                if bodies.iter().all(|b| !bodies_intersect(b, &poly)) {
                    bodies.push(poly);
                    placed = true;
                    break;
                }
            }
            if !placed {
                continue 'retry;
            }
        }
        let f = Family::from_bodies(bodies);
        if check_general_position(&f).is_ok() {
            return f;
        }
    }
}

/// `n` convex polygons that may overlap, in general position.
pub fn random_convex_polygons<R: Rng>(n: usize, rng: &mut R) -> Family {
    loop {
        let f = Family::planar((0..n).map(|_| random_polygon(rng, 3.0)).collect()).expect("hulls are convex");
        if check_general_position(&f).is_ok() {
            return f;
        }
    }
}

/// `n` disjoint triangles, one per cell of a square grid of cells, with
/// integer coordinates below 2^20. Scales to hundreds of bodies; general
/// position is repaired by redrawing one body of each violation.
pub fn random_disjoint_triangles<R: Rng>(n: usize, rng: &mut R) -> Family {
    const SIDE: i64 = 1 << 20;
    let cells_per_row = ((n as f64).sqrt().ceil() as i64).max(1);
    let cell = SIDE / cells_per_row;
    let margin = cell / 10;
    let mut cells: Vec<i64> = (0..cells_per_row * cells_per_row).collect();
    for i in (1..cells.len()).rev() {
        let j = rng.gen_range(0..=i);
        cells.swap(i, j);
    }
    let triangle = |rng: &mut R, c: i64| -> Vec<Rational2> {
        let (ox, oy) = ((c % cells_per_row) * cell, (c / cells_per_row) * cell);
        loop {
            let pts: Vec<Rational2> = (0..3)
                .map(|_| {
                    Rational2::from_ints(
                        ox + rng.gen_range(margin..cell - margin),
                        oy + rng.gen_range(margin..cell - margin),
                    )
                })
                .collect();
            let hull = convex_hull(&pts);
            if hull.len() == 3 {
                return hull;
            }
        }
    };
    let mut bodies: Vec<Vec<Rational2>> = (0..n).map(|i| triangle(rng, cells[i])).collect();
    loop {
        let f = Family::planar(bodies.clone()).expect("triangles are convex");
        let bad = match check_general_position(&f) {
            crate::GeneralPosition::Ok => return f,
            crate::GeneralPosition::Duplicate(p) => p,
            crate::GeneralPosition::Collinear(t) => t[rng.gen_range(0..3)].clone(),
        };
        let owner = bodies.iter().position(|b| b.contains(&bad)).expect("vertex belongs to a body");
        bodies[owner] = triangle(rng, cells[owner]);
    }
}

/// `outer` disjoint polygons, each touching the boundary of their common
/// hull, and a final point body strictly inside that hull.
pub fn random_with_interior_point<R: Rng>(outer: usize, rng: &mut R) -> Family {
    loop {
        let base = random_disjoint_polygons(outer, rng);
        if hull_lemma_check(&base) != HullCheck::Ok {
            continue;
        }
        let verts: Vec<Rational2> = base.vertices().cloned().collect();
        let hull = convex_hull(&verts);
        if hull.len() < 3 {
            continue;
        }
        // A strict convex combination of three hull vertices is interior.
        let (a, b, c) = (&hull[0], &hull[hull.len() / 3], &hull[2 * hull.len() / 3]);
        let w: [i64; 3] = [rng.gen_range(1..6), rng.gen_range(1..6), rng.gen_range(1..6)];
        let total = w.iter().sum::<i64>();
        let inner = a
            .scale(&rat(w[0], total))
            .add(&b.scale(&rat(w[1], total)))
            .add(&c.scale(&rat(w[2], total)));
        let mut bodies: Vec<ConvexBody> = base.bodies().to_vec();
        let point = ConvexBody::new(outer, vec![inner]).expect("one vertex");
        if bodies.iter().any(|b| bodies_intersect(b, &point)) {
            continue;
        }
        bodies.push(point);
        let f = Family::from_bodies(bodies);
        if check_general_position(&f).is_ok() {
            return f;
        }
    }
}

pub(crate) fn is_pairwise_disjoint(f: &Family) -> bool {
    pairwise_disjoint(f)
}
