//! Hitting sets of halfplanes by segments, by iterative reweighting.

use crate::geom::{body_in_halfplane, rat, BodyKind, Family, Halfplane, Rational, Rational2};
use crate::hypergraph::contained_bodies;
use crate::nets::MAX_ATTEMPTS;
use crate::{BodySet, Error};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};

/// Segments and halfplanes, each halfplane fully containing some segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HittingInstance {
    segments: Family,
    halfplanes: Vec<Halfplane>,
    /// Segments contained in each halfplane.
    ranges: Vec<BodySet>,
}

impl HittingInstance {
    pub fn new(segments: Family, halfplanes: Vec<Halfplane>) -> Result<Self, Error> {
        segments.require_planar()?;
        if let Some(b) = segments.bodies().iter().find(|b| b.kind() != BodyKind::Segment) {
            return Err(Error::InvalidBody {
                id: b.id(),
                reason: format!("hitting instances take segments, got a {}", b.kind().name()),
            });
        }
        let ranges: Vec<BodySet> = halfplanes.iter().map(|h| contained_bodies(&segments, h)).collect();
        if let Some(i) = ranges.iter().position(|r| r.is_empty()) {
            return Err(Error::InfeasibleInstance(i));
        }
        Ok(HittingInstance {
            segments,
            halfplanes,
            ranges,
        })
    }

    pub fn segments(&self) -> &Family {
        &self.segments
    }

    pub fn halfplanes(&self) -> &[Halfplane] {
        &self.halfplanes
    }

    pub fn ranges(&self) -> &[BodySet] {
        &self.ranges
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HitCheck {
    Ok,
    Unhit(usize),
}

impl HitCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, HitCheck::Ok)
    }
}

/// Ok when every halfplane fully contains a segment of `t`; otherwise the
/// smallest index of an unhit halfplane.
pub fn verify_hitting_set(inst: &HittingInstance, t: &BodySet) -> HitCheck {
    match inst
        .halfplanes
        .iter()
        .position(|h| !t.iter().any(|s| body_in_halfplane(&inst.segments.bodies()[s], h)))
    {
        Some(i) => HitCheck::Unhit(i),
        None => HitCheck::Ok,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverTrace {
    pub k: usize,
    pub rounds_per_k: Vec<usize>,
    pub doublings: usize,
    pub solution: BodySet,
    pub optimum: Option<usize>,
}

/// Smallest power of two that is at least `n`.
pub fn next_pow2(n: usize) -> usize {
    n.max(1).next_power_of_two()
}

/// `ceil(4k log2(max(2, n/k)))`.
pub fn round_budget(k: usize, n: usize) -> usize {
    let ratio = (n as f64 / k as f64).max(2.0);
    (4.0 * k as f64 * ratio.log2()).ceil() as usize
}

/// Draw cap for one weighted `1/(2k)`-net attempt: the net sample size with
/// dimension 5.
fn draw_cap(k: usize) -> usize {
    let eps = rat(1, 2 * k as i64);
    crate::nets::net_sample_size(&eps, 5)
}

/// Approximate floats with the same ratios, for sampling only.
fn float_weights(weights: &[BigUint]) -> Vec<f64> {
    let bits = weights.iter().map(|w| w.bits()).max().unwrap_or(0);
    let shift = bits.saturating_sub(60);
    weights.iter().map(|w| (w >> shift).to_f64().unwrap_or(f64::MAX)).collect()
}

/// Draws segments by weight, one at a time, until every range of weight at
/// least `W/(2k)` is hit. Restarts after `draw_cap(k)` draws.
fn weighted_net<R: Rng>(
    inst: &HittingInstance,
    incidence: &[Vec<usize>],
    weights: &[BigUint],
    k: usize,
    rng: &mut R,
) -> Result<BodySet, Error> {
    let n = weights.len();
    let total: BigUint = weights.iter().sum();
    let two_k = BigUint::from(2 * k);
    let heavy: Vec<bool> = inst
        .ranges
        .iter()
        .map(|r| r.iter().map(|s| &weights[s]).sum::<BigUint>() * &two_k >= total)
        .collect();
    let heavy_count = heavy.iter().filter(|&&h| h).count();
    let dist = WeightedIndex::new(float_weights(weights)).map_err(|_| Error::ZeroTotalWeight)?;
    let cap = draw_cap(k);
    for _ in 0..MAX_ATTEMPTS {
        let mut net = BodySet::empty(n);
        let mut hit = vec![false; inst.ranges.len()];
        let mut missing = heavy_count;
        let mut draws = 0;
        while missing > 0 && draws < cap {
            let s = dist.sample(rng);
            draws += 1;
            if net.contains(s) {
                continue;
            }
            net.insert(s);
            for &r in &incidence[s] {
                if heavy[r] && !hit[r] {
                    hit[r] = true;
                    missing -= 1;
                }
            }
        }
        if missing == 0 {
            return Ok(net);
        }
    }
    Err(Error::AttemptsExhausted(MAX_ATTEMPTS))
}

/// Guess `k = 1, 2, 4, ...`; for each guess reweight for a bounded number of
/// rounds, each round taking a weighted `1/(2k)`-net of the ranges and
/// doubling the weights of one range it misses.
pub fn bg_hitting_set(inst: &HittingInstance, seed: u64) -> Result<SolverTrace, Error> {
    let n = inst.segments.len();
    let mut incidence = vec![Vec::new(); n];
    for (r, range) in inst.ranges.iter().enumerate() {
        for s in range.iter() {
            incidence[s].push(r);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rounds_per_k = Vec::new();
    let mut doublings = 0;
    let mut k = 1;
    loop {
        assert!(k <= next_pow2(n), "k = {k} exceeds {} on a feasible instance", next_pow2(n));
        let mut weights = vec![BigUint::one(); n];
        let budget = round_budget(k, n);
        let mut used = 0;
        while used < budget {
            used += 1;
            let net = weighted_net(inst, &incidence, &weights, k, &mut rng)?;
            let Some(r) = inst.ranges.iter().position(|range| !range.intersects(&net)) else {
                rounds_per_k.push(used);
                assert!(verify_hitting_set(inst, &net).is_ok());
                return Ok(SolverTrace {
                    k,
                    rounds_per_k,
                    doublings,
                    solution: net,
                    optimum: None,
                });
            };
            let total: BigUint = weights.iter().sum();
            let range_weight: BigUint = inst.ranges[r].iter().map(|s| &weights[s]).sum();
            assert!(
                range_weight * BigUint::from(2 * k) < total,
                "unhit range {r} is heavy for k = {k}"
            );
            for s in inst.ranges[r].iter() {
                weights[s] <<= 1;
            }
            doublings += 1;
        }
        rounds_per_k.push(used);
        k *= 2;
    }
}

/// A minimum hitting set by exhaustive search over sizes `0..=cap`, subsets
/// of each size in lexicographic order; `None` when the optimum exceeds `cap`.
pub fn exact_min_hitting_set(inst: &HittingInstance, cap: usize) -> Option<BodySet> {
    let n = inst.segments.len();
    for size in 0..=cap.min(n) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let t = BodySet::from_ids(n, idx.iter().copied());
            if inst.ranges.iter().all(|r| r.intersects(&t)) {
                return Some(t);
            }
            // Advance to the next combination in lexicographic order.
            let Some(i) = (0..size).rev().find(|&i| idx[i] < n - size + i) else {
                break;
            };
            idx[i] += 1;
            for j in i + 1..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    None
}

/// Number and fraction of bodies fully contained in `h`.
pub fn range_count(family: &Family, h: &Halfplane) -> Result<(usize, Rational), Error> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let count = contained_bodies(family, h).count();
    Ok((count, rat(count as i64, family.len() as i64)))
}

/// An instance with a known optimum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlantedInstance {
    pub instance: HittingInstance,
    /// One core segment per cluster; a minimum hitting set.
    pub planted: BodySet,
    pub tau: usize,
}

const PLANT_RADIUS: f64 = 100.0;

fn snap_fine(x: f64) -> Rational {
    rat((x * 64.0).round() as i64, 64)
}

fn snap_normal(x: f64) -> Rational {
    rat((x * 65536.0).round() as i64, 65536)
}

/// `tau` clusters of segments far apart on a circle. Each cluster has a core
/// segment lying outermost and a few decoys further in; every halfplane is a
/// cap containing the core of one cluster and possibly some of its decoys,
/// so the cores form a minimum hitting set of size `tau`.
pub fn planted_instance(tau: usize, seed: u64) -> Result<PlantedInstance, Error> {
    if !(1..=16).contains(&tau) {
        return Err(Error::InvalidParameter(format!("tau must lie in 1..=16, got {tau}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spread = (PI / (4.0 * tau as f64)).min(0.3);
    let mut segments: Vec<Vec<Rational2>> = Vec::new();
    let mut cluster_of: Vec<usize> = Vec::new();
    let mut cores = Vec::new();
    let mut caps: Vec<(usize, f64)> = Vec::new();
    let phase = rng.gen_range(0.0..TAU);
    for j in 0..tau {
        let theta = phase + TAU * j as f64 / tau as f64;
        let (ux, uy) = (theta.cos(), theta.sin());
        let (cx, cy) = (PLANT_RADIUS * ux, PLANT_RADIUS * uy);
        let point = |along: f64, across: f64| {
            Rational2::new(
                snap_fine(cx + along * ux - across * uy),
                snap_fine(cy + along * uy + across * ux),
            )
        };
        cores.push(segments.len());
        segments.push(vec![point(6.0, -1.0), point(6.0, 1.0)]);
        cluster_of.push(j);
        for _ in 0..rng.gen_range(2..=5) {
            loop {
                let a = point(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
                let b = point(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
                if a != b {
                    segments.push(vec![a, b]);
                    cluster_of.push(j);
                    break;
                }
            }
        }
        for _ in 0..rng.gen_range(3..=6) {
            caps.push((j, theta + rng.gen_range(-spread..spread)));
        }
    }
    let family = Family::planar(segments)?;
    let mut halfplanes = Vec::with_capacity(caps.len());
    for (j, angle) in caps {
        let (nx, ny) = (snap_normal(angle.cos()), snap_normal(angle.sin()));
        let proj = |p: &Rational2| &nx * &p.x + &ny * &p.y;
        let core = &family.bodies()[cores[j]];
        let core_low = core.vertices().iter().map(proj).min().expect("segment");
        // Cap `n . x >= c`, reaching at most 5 units inward from the core.
        let c = &core_low - snap_fine(rng.gen_range(0.0..5.0));
        let h = Halfplane::new(-nx.clone(), -ny.clone(), -c)?;
        let inside = contained_bodies(&family, &h);
        assert!(inside.contains(cores[j]));
        assert!(
            inside.iter().all(|s| cluster_of[s] == j),
            "cap of cluster {j} reaches another cluster"
        );
        halfplanes.push(h);
    }
    let planted = BodySet::from_ids(family.len(), cores);
    let instance = HittingInstance::new(family, halfplanes)?;
    Ok(PlantedInstance {
        instance,
        planted,
        tau,
    })
}
