//! Verified generators for the classical shattered families.
//!
//! Every generator recomputes its certificate from the family it returns;
//! nothing leaves this module unverified.

pub mod random;
mod search;

pub use search::{search_shattered, SearchClass, SearchConstraints};

use crate::geom::{body_in_halfplane, circle_point, convex_hull, rat, Family, Halfplane, Rational, Rational2};
use crate::hypergraph::{count_intersecting_pairs, enumerate_realized, realize_witness, shattering_in, vc_dimension_in};
use crate::{BodySet, Error};

/// Largest `n` accepted by [`gen_unbounded`] unless a cap is given.
pub const DEFAULT_UNBOUNDED_CAP: usize = 5;

/// Machine-checked facts about a generated family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    /// A largest shattered subfamily (the full family when shattered).
    pub shattered: BodySet,
    pub edge_count: usize,
    pub intersections: usize,
}

impl Certificate {
    pub fn is_fully_shattered(&self) -> bool {
        self.shattered.count() == self.shattered.universe()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionResult {
    pub family: Family,
    pub certificate: Certificate,
    pub provenance: String,
}

impl ConstructionResult {
    /// Computes the certificate of `family` from scratch.
    pub fn certify(family: Family, provenance: String) -> Result<Self, Error> {
        let planar = family.projection();
        let edges = enumerate_realized(&planar)?;
        let n = planar.len();
        let full = BodySet::full(n);
        let shattered = if shattering_in(&edges, &full).is_shattered() {
            full
        } else {
            vc_dimension_in(&edges, n).witness
        };
        let certificate = Certificate {
            shattered,
            edge_count: edges.len(),
            intersections: count_intersecting_pairs(&planar),
        };
        Ok(ConstructionResult {
            family,
            certificate,
            provenance,
        })
    }

    /// Recomputes the certificate and compares.
    pub fn verify(&self) -> Result<(), String> {
        let fresh = ConstructionResult::certify(self.family.clone(), self.provenance.clone())
            .map_err(|e| e.to_string())?;
        if fresh.certificate == self.certificate {
            Ok(())
        } else {
            Err(format!(
                "stored certificate {:?} differs from recomputed {:?}",
                self.certificate, fresh.certificate
            ))
        }
    }
}

fn certified_shattered(family: Family, provenance: String) -> ConstructionResult {
    let r = ConstructionResult::certify(family, provenance).expect("generator output is in general position");
    assert!(
        r.certificate.is_fully_shattered(),
        "{} is not shattered: {:?}",
        r.provenance,
        r.certificate
    );
    r
}

/// `n` convex bodies on the unit circle that are shattered, with
/// `n <= DEFAULT_UNBOUNDED_CAP`.
pub fn gen_unbounded(n: usize) -> Result<ConstructionResult, Error> {
    gen_unbounded_capped(n, DEFAULT_UNBOUNDED_CAP)
}

/// One point `p_I` on the unit circle per proper nonempty index set `I`, at
/// parameter `t = I` read as a binary number; body `j` is the hull of the
/// points whose index set contains `j`. Bodies share vertices.
pub fn gen_unbounded_capped(n: usize, cap: usize) -> Result<ConstructionResult, Error> {
    if n > cap {
        return Err(Error::CapExceeded { value: n, cap });
    }
    if !(2..=20).contains(&n) {
        return Err(Error::InvalidParameter(format!("gen_unbounded needs 2 <= n, got {n}")));
    }
    let bodies: Vec<Vec<Rational2>> = (0..n)
        .map(|j| {
            let pts: Vec<Rational2> = unbounded_index_sets(n)
                .filter(|i| i >> j & 1 == 1)
                .map(|i| circle_point(&rat(i as i64, 1)))
                .collect();
            convex_hull(&pts)
        })
        .collect();
    let family = Family::planar(bodies)?;
    Ok(certified_shattered(family, format!("gen_unbounded(n={n})")))
}

/// Proper nonempty subsets of `{0..n}` as bitmasks, ascending.
pub fn unbounded_index_sets(n: usize) -> impl Iterator<Item = u64> {
    1..(1u64 << n) - 1
}

/// The halfplane cutting `p_J` off the other circle points, `J` the
/// complement of `index_set`. It realizes exactly the bodies in `index_set`.
pub fn unbounded_separator(n: usize, index_set: u64) -> Halfplane {
    let full = (1u64 << n) - 1;
    let j = full & !index_set;
    let p = circle_point(&rat(j as i64, 1));
    // Parallel to the tangent at p, halfway between p and the nearest other
    // circle point in the normal direction.
    let others = unbounded_index_sets(n)
        .filter(|&i| i != j)
        .map(|i| {
            let q = circle_point(&rat(i as i64, 1));
            &q.x * &p.x + &q.y * &p.y
        })
        .max()
        .expect("at least one other point");
    let c = (others + Rational::from_integer(1.into())) / Rational::from_integer(2.into());
    Halfplane::new(p.x, p.y, c).expect("unit normal")
}

/// Levels attached to a planar family and the checks tying the lifted
/// family's vertical halfspaces back to the planar certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftReport {
    /// Distinct levels make lifted bodies pairwise disjoint.
    pub pairwise_disjoint: bool,
    /// Vertical containment equals planar containment for every witness.
    pub containment_agrees: bool,
    /// Subsets of the certificate's shattered set realized by vertical
    /// halfspaces over the lifted family.
    pub realized_traces: usize,
    pub shattered_by_vertical: bool,
}

/// A vertical halfspace `a x + b y <= c` in space; `z` is unconstrained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerticalHalfspace(pub Halfplane);

impl VerticalHalfspace {
    pub fn contains(&self, x: &Rational, y: &Rational, _z: i64) -> bool {
        self.0.contains(&Rational2::new(x.clone(), y.clone()))
    }

    /// Whether every lifted vertex of `body` (placed at `level`) is inside.
    pub fn contains_body(&self, body: &crate::ConvexBody, level: i64) -> bool {
        body.vertices().iter().all(|v| self.contains(&v.x, &v.y, level))
    }
}

/// Places body `i` at height `i`.
pub fn lift_to_3d(result: &ConstructionResult) -> Result<(Family, LiftReport), Error> {
    result.family.require_planar()?;
    let n = result.family.len();
    let levels: Vec<i64> = (0..n as i64).collect();
    let lifted = result.family.clone().lifted(levels.clone())?;
    let mut sorted = levels.clone();
    sorted.sort_unstable();
    sorted.dedup();
    let pairwise_disjoint = sorted.len() == n;

    let shattered = result.certificate.shattered.to_vec();
    let mut containment_agrees = true;
    let mut realized = 0usize;
    let k = shattered.len();
    let edges = enumerate_realized(&result.family)?;
    for bits in 0..(1u64 << k) {
        let subset = BodySet::from_ids(n, (0..k).filter(|&i| bits >> i & 1 == 1).map(|i| shattered[i]));
        // Any realized subfamily whose trace on the shattered set is `subset`.
        let Some(edge) = edges.edges().iter().find(|e| e.intersection(&result.certificate.shattered) == subset) else {
            continue;
        };
        let Some(w) = realize_witness(&result.family, edge)? else {
            continue;
        };
        let vertical = VerticalHalfspace(w.halfplane.clone());
        let lifted_in = BodySet::from_ids(
            n,
            lifted.bodies().iter().filter(|b| vertical.contains_body(b, levels[b.id()])).map(|b| b.id()),
        );
        let planar_in = BodySet::from_ids(
            n,
            result.family.bodies().iter().filter(|b| body_in_halfplane(b, &w.halfplane)).map(|b| b.id()),
        );
        containment_agrees &= lifted_in == planar_in;
        if lifted_in.intersection(&result.certificate.shattered) == subset {
            realized += 1;
        }
    }
    let report = LiftReport {
        pairwise_disjoint,
        containment_agrees,
        realized_traces: realized,
        shattered_by_vertical: realized == 1 << k,
    };
    Ok((lifted, report))
}

fn family_from_grid(raw: &[&[(i64, i64)]], denom: i64) -> Family {
    Family::planar(
        raw.iter()
            .map(|body| body.iter().map(|&(x, y)| Rational2::new(rat(x, denom), rat(y, denom))).collect())
            .collect(),
    )
    .expect("constant coordinates form valid bodies")
}

// Coordinates below are in units of 1/64 and were produced by
// `search_shattered`, then frozen; the certificate is recomputed on every call.

const THREE_DISJOINT: [&[(i64, i64)]; 3] = [
    &[(78, -72), (203, -111), (192, 63), (79, 22)],
    &[(-75, 297), (-49, 252), (2, 237), (5, 237), (-47, 366)],
    &[(-310, -95), (-220, -134), (-185, -117), (-173, -1)],
];

/// Three pairwise disjoint triangles that are shattered.
pub fn gen_three_disjoint() -> ConstructionResult {
    let r = certified_shattered(family_from_grid(&THREE_DISJOINT, 64), "gen_three_disjoint()".into());
    assert_eq!(r.certificate.intersections, 0);
    r
}

const FIVE_SEGMENTS: [&[(i64, i64)]; 5] = [
    &[(344, 91), (-359, 119)],
    &[(20, 355), (-224, -305)],
    &[(-332, 129), (220, -307)],
    &[(-225, -276), (360, 115)],
    &[(193, -299), (2, 378)],
];

/// Five segments, approximately five-fold symmetric, that are shattered.
pub fn gen_five_segments() -> ConstructionResult {
    certified_shattered(family_from_grid(&FIVE_SEGMENTS, 64), "gen_five_segments()".into())
}

const FOUR_ONE_INTERSECTION: [&[(i64, i64)]; 4] = [
    &[(370, 339), (-158, -118)],
    &[(-165, -93), (102, 18)],
    &[(57, -434), (445, -458)],
    &[(399, 372), (-48, 247)],
];

/// Four shattered segments with exactly one intersecting pair.
pub fn gen_four_one_intersection() -> ConstructionResult {
    let r = certified_shattered(family_from_grid(&FOUR_ONE_INTERSECTION, 64), "gen_four_one_intersection()".into());
    assert_eq!(r.certificate.intersections, 1);
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unbounded_family_is_shattered() {
        for n in 2..=5 {
            let r = gen_unbounded(n).unwrap();
            assert_eq!(r.family.len(), n);
            assert!(r.certificate.is_fully_shattered());
            assert_eq!(r.certificate.edge_count, 1 << n);
            assert!(r.verify().is_ok());
        }
    }

    #[test]
    fn unbounded_cap_is_enforced() {
        assert!(matches!(gen_unbounded(6), Err(Error::CapExceeded { value: 6, cap: 5 })));
        assert!(gen_unbounded(1).is_err());
        assert!(gen_unbounded_capped(6, 6).is_ok());
    }

    #[test]
    fn separators_realize_their_index_sets() {
        let n = 4;
        let r = gen_unbounded(n).unwrap();
        for i in unbounded_index_sets(n) {
            let h = unbounded_separator(n, i);
            let inside: Vec<usize> = r
                .family
                .bodies()
                .iter()
                .filter(|b| body_in_halfplane(b, &h))
                .map(|b| b.id())
                .collect();
            let expected: Vec<usize> = (0..n).filter(|j| i >> j & 1 == 1).collect();
            assert_eq!(inside, expected);
        }
    }

    #[test]
    fn frozen_constructions_certify() {
        let three = gen_three_disjoint();
        assert_eq!((three.family.len(), three.certificate.edge_count), (3, 8));
        let five = gen_five_segments();
        assert_eq!((five.family.len(), five.certificate.edge_count), (5, 32));
        let four = gen_four_one_intersection();
        assert_eq!((four.family.len(), four.certificate.intersections), (4, 1));
        for r in [three, five, four] {
            assert!(r.verify().is_ok());
        }
    }

    #[test]
    fn lift_preserves_shattering() {
        let r = gen_unbounded(3).unwrap();
        let (lifted, report) = lift_to_3d(&r).unwrap();
        assert_eq!(lifted.len(), 3);
        assert_eq!(lifted.levels(), Some(&[0, 1, 2][..]));
        assert!(report.pairwise_disjoint && report.containment_agrees && report.shattered_by_vertical);
        assert_eq!(report.realized_traces, 8);
    }

    #[test]
    fn tampered_certificate_is_rejected() {
        let mut r = gen_three_disjoint();
        r.certificate.edge_count += 1;
        assert!(r.verify().is_err());
    }
}
