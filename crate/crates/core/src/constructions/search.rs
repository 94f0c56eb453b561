//! Randomized search for shattered families under constraints.

use super::random::{grid_point, is_pairwise_disjoint, random_polygon, snap};
use super::ConstructionResult;
use crate::geom::{check_general_position, ConvexBody, Family, Rational2};
use crate::hypergraph::{count_intersecting_pairs, enumerate_realized};
use num_traits::ToPrimitive;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchClass {
    Segments,
    DisjointConvex,
    Convex,
}

impl SearchClass {
    pub fn name(self) -> &'static str {
        match self {
            SearchClass::Segments => "segments",
            SearchClass::DisjointConvex => "disjoint-convex",
            SearchClass::Convex => "convex",
        }
    }

    pub fn parse(text: &str) -> Option<SearchClass> {
        match text {
            "segments" => Some(SearchClass::Segments),
            "disjoint-convex" => Some(SearchClass::DisjointConvex),
            "convex" => Some(SearchClass::Convex),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchConstraints {
    pub max_intersections: Option<usize>,
    /// Segments only: the family is made of orbits of this rotation order.
    pub symmetry: Option<usize>,
}

/// Consecutive non-improving moves before a restart.
const PATIENCE: usize = 150;

/// Searches for `n` bodies of `class` that are shattered and satisfy the
/// constraints, evaluating at most `budget` candidates. Random restarts are
/// followed by local moves of single vertices with halving step sizes,
/// accepted when the number of realized subfamilies does not drop.
pub fn search_shattered(
    n: usize,
    class: SearchClass,
    constraints: SearchConstraints,
    seed: u64,
    budget: usize,
) -> Option<ConstructionResult> {
    if n == 0 || budget == 0 {
        return None;
    }
    if let Some(m) = constraints.symmetry {
        if class != SearchClass::Segments || m == 0 || n % m != 0 {
            return None;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spent = 0usize;
    let full = 1usize.checked_shl(n as u32).unwrap_or(usize::MAX);
    while spent < budget {
        let mut params = initial(n, class, constraints, &mut rng);
        let mut score = match evaluate(&params, class, constraints) {
            Some(s) => s,
            None => {
                spent += 1;
                continue;
            }
        };
        spent += 1;
        let mut stale = 0;
        let mut step = 1.0f64;
        loop {
            if score == full {
                let family = build(&params, constraints).expect("evaluated family builds");
                let provenance = format!(
                    "search_shattered(n={n}, class={}, max_intersections={:?}, symmetry={:?}, seed={seed})",
                    class.name(),
                    constraints.max_intersections,
                    constraints.symmetry
                );
                let result = ConstructionResult::certify(family, provenance).expect("general position checked");
                if result.certificate.is_fully_shattered() {
                    return Some(result);
                }
            }
            if spent >= budget || stale >= PATIENCE {
                break;
            }
            let moved = perturb(&params, class, step, &mut rng);
            spent += 1;
            match evaluate(&moved, class, constraints) {
                Some(s) if s >= score => {
                    stale = if s > score { 0 } else { stale + 1 };
                    params = moved;
                    score = s;
                }
                _ => {
                    stale += 1;
                    if stale % 30 == 0 {
                        step = (step / 2.0).max(1.0 / 64.0);
                    }
                }
            }
        }
    }
    None
}

/// Free parameters of a candidate: one vertex list per generating body.
type Params = Vec<Vec<Rational2>>;

fn initial<R: Rng>(n: usize, class: SearchClass, c: SearchConstraints, rng: &mut R) -> Params {
    match class {
        SearchClass::Segments => {
            let free = n / c.symmetry.unwrap_or(1);
            (0..free).map(|_| vec![grid_point(rng), grid_point(rng)]).collect()
        }
        SearchClass::DisjointConvex => (0..n).map(|_| random_polygon(rng, 2.0)).collect(),
        SearchClass::Convex => (0..n).map(|_| random_polygon(rng, 3.0)).collect(),
    }
}

fn rotate(p: &Rational2, angle: f64) -> Rational2 {
    let (x, y) = (p.x.to_f64().unwrap_or(0.0), p.y.to_f64().unwrap_or(0.0));
    let (s, c) = angle.sin_cos();
    snap(c * x - s * y, s * x + c * y)
}

fn build(params: &Params, c: SearchConstraints) -> Option<Family> {
    let bodies: Vec<Vec<Rational2>> = match c.symmetry {
        Some(m) if m > 1 => (0..m)
            .flat_map(|k| {
                params
                    .iter()
                    .map(move |b| b.iter().map(|p| rotate(p, TAU * k as f64 / m as f64)).collect())
            })
            .collect(),
        _ => params.clone(),
    };
    let bodies = bodies
        .into_iter()
        .enumerate()
        .map(|(id, v)| ConvexBody::new(id, v))
        .collect::<Result<Vec<_>, _>>()
        .ok()?;
    Some(Family::from_bodies(bodies))
}

/// Number of realized subfamilies, or `None` when the candidate violates its
/// class or constraints.
fn evaluate(params: &Params, class: SearchClass, c: SearchConstraints) -> Option<usize> {
    let family = build(params, c)?;
    if !check_general_position(&family).is_ok() {
        return None;
    }
    if class == SearchClass::DisjointConvex && !is_pairwise_disjoint(&family) {
        return None;
    }
    if let Some(max) = c.max_intersections {
        if count_intersecting_pairs(&family) > max {
            return None;
        }
    }
    enumerate_realized(&family).ok().map(|e| e.len())
}

fn perturb<R: Rng>(params: &Params, class: SearchClass, step: f64, rng: &mut R) -> Params {
    let mut out = params.clone();
    let b = rng.gen_range(0..out.len());
    let v = rng.gen_range(0..out[b].len());
    let p = &out[b][v];
    let (x, y) = (p.x.to_f64().unwrap_or(0.0), p.y.to_f64().unwrap_or(0.0));
    let a = rng.gen_range(0.0..TAU);
    let len = step * rng.gen_range(0.0..1.0f64);
    out[b][v] = snap(x + len * a.cos(), y + len * a.sin());
    if class != SearchClass::Segments {
        let hull = crate::geom::convex_hull(&out[b]);
        if hull.len() >= 3 {
            out[b] = hull;
        } else {
            return params.clone();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_disjoint_found() {
        let r = search_shattered(3, SearchClass::DisjointConvex, SearchConstraints::default(), 1, 5_000)
            .expect("three disjoint convex sets are easy to shatter");
        assert!(r.certificate.is_fully_shattered());
        assert_eq!(r.certificate.intersections, 0);
        assert!(r.verify().is_ok());
    }

    #[test]
    fn symmetry_must_divide_n() {
        let c = SearchConstraints {
            symmetry: Some(2),
            ..Default::default()
        };
        assert!(search_shattered(5, SearchClass::Segments, c, 1, 10).is_none());
    }
}
