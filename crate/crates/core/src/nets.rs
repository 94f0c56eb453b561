//! Epsilon-nets and epsilon-approximations, verified exactly.
//!
//! Sampling is randomized; acceptance is decided by the exact enumeration of
//! realized subfamilies, so every returned object satisfies its definition.

use crate::geom::{Family, Rational};
use crate::hypergraph::sweep::SweepVisitor;
use crate::hypergraph::visit_realized;
use crate::{BodySet, Error};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;
use std::ops::ControlFlow;

/// Las Vegas loops give up after this many attempts.
pub const MAX_ATTEMPTS: usize = 10_000;

/// Nonnegative weights, one per body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector {
    weights: Vec<Rational>,
    total: Rational,
}

impl WeightVector {
    pub fn new(weights: Vec<Rational>) -> Result<Self, Error> {
        if let Some(i) = weights.iter().position(|w| w.is_negative()) {
            return Err(Error::InvalidParameter(format!("weight {i} is negative")));
        }
        let total = weights.iter().fold(Rational::zero(), |acc, w| acc + w);
        Ok(WeightVector { weights, total })
    }

    pub fn uniform(n: usize) -> Self {
        WeightVector {
            weights: vec![Rational::one(); n],
            total: Rational::from_integer(n.into()),
        }
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn total(&self) -> &Rational {
        &self.total
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight_of(&self, set: &BodySet) -> Rational {
        set.iter().fold(Rational::zero(), |acc, i| acc + &self.weights[i])
    }

    /// The weights over a common denominator, as integers, with their total.
    fn scaled(&self) -> (Vec<BigInt>, BigInt) {
        let lcm = self.weights.iter().fold(BigInt::one(), |l, w| l.lcm(w.denom()));
        let ints: Vec<BigInt> = self.weights.iter().map(|w| w.numer() * (&lcm / w.denom())).collect();
        let total = ints.iter().sum();
        (ints, total)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetResult {
    pub net: BodySet,
    /// Number of draws per attempt.
    pub m: usize,
    pub attempts: usize,
    pub eps: Rational,
    pub d: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproximationResult {
    pub sample: BodySet,
    pub m: usize,
    pub discrepancy: Rational,
    pub attempts: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NetCheck {
    Ok,
    /// The smallest heavy realized subfamily missed by the net.
    Violation(BodySet),
}

impl NetCheck {
    pub fn is_ok(&self) -> bool {
        matches!(self, NetCheck::Ok)
    }
}

pub fn check_eps(eps: &Rational) -> Result<(), Error> {
    if eps.is_positive() && eps < &Rational::one() {
        Ok(())
    } else {
        Err(Error::InvalidEps(crate::geom::format_rational(eps)))
    }
}

/// `ceil((8d/eps) ln(16/eps))`.
pub fn net_sample_size(eps: &Rational, d: usize) -> usize {
    let e = eps.to_f64().expect("eps is finite");
    ((8.0 * d as f64 / e) * (16.0 / e).ln()).ceil() as usize
}

/// `min(n, ceil(4/eps^2))`.
pub fn approximation_sample_size(eps: &Rational, n: usize) -> usize {
    let four = Rational::from_integer(4.into());
    let m = crate::geom::rational::ceil_to_integer(&(four / (eps * eps)));
    m.to_usize().map_or(n, |m| m.min(n))
}

/// Collects the realized subfamilies whose weight reaches the threshold.
struct Heavy<'a> {
    weights: &'a [BigInt],
    /// Weight times `eps.den` must reach this.
    threshold: BigInt,
    eps_den: &'a BigInt,
    current: BodySet,
    weight: BigInt,
    seen: HashSet<BodySet>,
}

impl SweepVisitor for Heavy<'_> {
    fn clear(&mut self) {
        self.current.clear();
        self.weight.set_zero();
    }

    fn toggle(&mut self, body: usize, included: bool) {
        self.current.set(body, included);
        if included {
            self.weight += &self.weights[body];
        } else {
            self.weight -= &self.weights[body];
        }
    }

    fn candidate(&mut self, _anchor: Option<(usize, usize)>) -> ControlFlow<()> {
        if &self.weight * self.eps_den >= self.threshold && !self.seen.contains(&self.current) {
            self.seen.insert(self.current.clone());
        }
        ControlFlow::Continue(())
    }
}

/// Realized subfamilies of weight at least `eps * total`, in ascending order.
pub fn heavy_edges(family: &Family, eps: &Rational, w: &WeightVector) -> Result<Vec<BodySet>, Error> {
    if w.len() != family.len() {
        return Err(Error::InvalidParameter(format!(
            "{} weights for {} bodies",
            w.len(),
            family.len()
        )));
    }
    let (weights, total) = w.scaled();
    let mut visitor = Heavy {
        weights: &weights,
        threshold: eps.numer() * &total,
        eps_den: eps.denom(),
        current: BodySet::empty(family.len()),
        weight: BigInt::zero(),
        seen: HashSet::new(),
    };
    visit_realized(family, &mut visitor)?;
    let mut edges: Vec<BodySet> = visitor.seen.into_iter().collect();
    edges.sort();
    Ok(edges)
}

fn first_missed(heavy: &[BodySet], net: &BodySet) -> NetCheck {
    match heavy.iter().find(|e| !e.intersects(net)) {
        Some(e) => NetCheck::Violation(e.clone()),
        None => NetCheck::Ok,
    }
}

/// Checks that `net` meets every realized subfamily of weight at least
/// `eps * total`.
pub fn verify_epsilon_net(family: &Family, eps: &Rational, w: &WeightVector, net: &BodySet) -> Result<NetCheck, Error> {
    check_eps(eps)?;
    Ok(first_missed(&heavy_edges(family, eps, w)?, net))
}

/// Draws `m` bodies with replacement, proportionally to `w`, until the
/// distinct bodies drawn form an eps-net.
pub fn epsilon_net(family: &Family, eps: &Rational, w: &WeightVector, d: usize, seed: u64) -> Result<NetResult, Error> {
    check_eps(eps)?;
    if d == 0 {
        return Err(Error::InvalidParameter("d must be at least 1".into()));
    }
    if !w.total().is_positive() {
        return Err(Error::ZeroTotalWeight);
    }
    let heavy = heavy_edges(family, eps, w)?;
    let m = net_sample_size(eps, d);
    let n = family.len();
    let float_weights: Vec<f64> = w.weights().iter().map(|x| x.to_f64().unwrap_or(0.0)).collect();
    let dist = WeightedIndex::new(&float_weights).map_err(|_| Error::ZeroTotalWeight)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=MAX_ATTEMPTS {
        let mut net = BodySet::empty(n);
        for _ in 0..m {
            net.insert(dist.sample(&mut rng));
        }
        if first_missed(&heavy, &net).is_ok() {
            return Ok(NetResult {
                net,
                m,
                attempts: attempt,
                eps: eps.clone(),
                d,
            });
        }
    }
    Err(Error::AttemptsExhausted(MAX_ATTEMPTS))
}

/// Tracks `max |count(e) * |P| - count(e & P) * n|` over realized `e`.
struct Discrepancy<'a> {
    sample: &'a BodySet,
    n: i64,
    p: i64,
    count: i64,
    in_sample: i64,
    best: i64,
}

impl SweepVisitor for Discrepancy<'_> {
    fn clear(&mut self) {
        self.count = 0;
        self.in_sample = 0;
    }

    fn toggle(&mut self, body: usize, included: bool) {
        let s = if included { 1 } else { -1 };
        self.count += s;
        if self.sample.contains(body) {
            self.in_sample += s;
        }
    }

    fn candidate(&mut self, _anchor: Option<(usize, usize)>) -> ControlFlow<()> {
        self.best = self.best.max((self.count * self.p - self.in_sample * self.n).abs());
        ControlFlow::Continue(())
    }
}

/// `max_e | |e|/n - |e & P|/|P| |` over realized subfamilies `e`, which is
/// the supremum over all halfplanes.
pub fn max_discrepancy(family: &Family, sample: &BodySet) -> Result<Rational, Error> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let n = family.len();
    if sample.universe() != n {
        return Err(Error::InvalidParameter(format!(
            "sample over {} bodies for a family of {n}",
            sample.universe()
        )));
    }
    let p = sample.count();
    let mut visitor = Discrepancy {
        sample,
        n: n as i64,
        p: p as i64,
        count: 0,
        in_sample: 0,
        best: 0,
    };
    visit_realized(family, &mut visitor)?;
    Ok(Rational::new(visitor.best.into(), ((n * p) as i64).into()))
}

/// Draws uniform samples of `min(n, ceil(4/eps^2))` distinct bodies until one
/// has discrepancy below `eps`.
pub fn epsilon_approximation(family: &Family, eps: &Rational, seed: u64) -> Result<ApproximationResult, Error> {
    check_eps(eps)?;
    let n = family.len();
    if n == 0 {
        return Err(Error::EmptyFamily);
    }
    let m = approximation_sample_size(eps, n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=MAX_ATTEMPTS {
        let sample = BodySet::from_ids(n, rand::seq::index::sample(&mut rng, n, m));
        let discrepancy = max_discrepancy(family, &sample)?;
        if &discrepancy < eps {
            return Ok(ApproximationResult {
                sample,
                m,
                discrepancy,
                attempts: attempt,
            });
        }
    }
    Err(Error::AttemptsExhausted(MAX_ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{gen_five_segments, gen_four_one_intersection, random::random_segments};
    use crate::geom::rat;
    use crate::hypergraph::enumerate_realized;
    use proptest::prelude::*;

    fn brute_discrepancy(family: &Family, sample: &BodySet) -> Rational {
        let n = family.len() as i64;
        let p = sample.count() as i64;
        enumerate_realized(family)
            .unwrap()
            .edges()
            .iter()
            .map(|e| (rat(e.count() as i64, n) - rat(e.intersection_count(sample) as i64, p)).abs())
            .max()
            .unwrap()
    }

    fn brute_heavy(family: &Family, eps: &Rational, w: &WeightVector) -> Vec<BodySet> {
        enumerate_realized(family)
            .unwrap()
            .edges()
            .iter()
            .filter(|e| w.weight_of(e) >= eps * w.total())
            .cloned()
            .collect()
    }

    #[test]
    fn sample_sizes() {
        assert_eq!(net_sample_size(&rat(1, 10), 3), 1219);
        assert_eq!(approximation_sample_size(&rat(1, 10), 500), 400);
        assert_eq!(approximation_sample_size(&rat(1, 10), 7), 7);
        assert_eq!(approximation_sample_size(&rat(1, 3), 100), 36);
    }

    #[test]
    fn eps_is_validated() {
        let f = gen_five_segments().family;
        let w = WeightVector::uniform(5);
        for bad in [rat(0, 1), rat(1, 1), rat(-1, 2), rat(3, 2)] {
            assert!(matches!(epsilon_net(&f, &bad, &w, 5, 0), Err(Error::InvalidEps(_))));
            assert!(matches!(epsilon_approximation(&f, &bad, 0), Err(Error::InvalidEps(_))));
        }
        let zero = WeightVector::new(vec![rat(0, 1); 5]).unwrap();
        assert_eq!(epsilon_net(&f, &rat(1, 2), &zero, 5, 0), Err(Error::ZeroTotalWeight));
        assert!(WeightVector::new(vec![rat(-1, 1)]).is_err());
    }

    #[test]
    fn trivial_nets() {
        let f = gen_five_segments().family;
        let w = WeightVector::uniform(5);
        let eps = rat(1, 3);
        assert!(verify_epsilon_net(&f, &eps, &w, &BodySet::full(5)).unwrap().is_ok());
        assert_eq!(
            verify_epsilon_net(&f, &eps, &w, &BodySet::empty(5)).unwrap(),
            NetCheck::Violation(brute_heavy(&f, &eps, &w)[0].clone())
        );
        // Only the full family reaches weight 0.99.
        let only_full = rat(99, 100);
        assert_eq!(brute_heavy(&f, &only_full, &w), vec![BodySet::full(5)]);
        assert!(verify_epsilon_net(&f, &only_full, &w, &BodySet::from_ids(5, [2])).unwrap().is_ok());
    }

    #[test]
    fn five_segment_net() {
        let f = gen_five_segments().family;
        let w = WeightVector::uniform(5);
        let eps = rat(1, 2);
        let r = epsilon_net(&f, &eps, &w, 5, 7).unwrap();
        assert!(verify_epsilon_net(&f, &eps, &w, &r.net).unwrap().is_ok());
        assert!(r.net.count() <= r.m);
        // Heavy edges are exactly those with at least three segments.
        assert!(brute_heavy(&f, &eps, &w).iter().all(|e| e.count() >= 3));
        assert_eq!(brute_heavy(&f, &eps, &w).len(), 16);
        assert_eq!(epsilon_net(&f, &eps, &w, 5, 7).unwrap(), r);
    }

    #[test]
    fn empty_net_against_high_threshold() {
        let f = gen_four_one_intersection().family;
        let w = WeightVector::uniform(4);
        let eps = rat(9, 10);
        let expected = brute_heavy(&f, &eps, &w).is_empty();
        assert_eq!(verify_epsilon_net(&f, &eps, &w, &BodySet::empty(4)).unwrap().is_ok(), expected);
        assert!(!expected);
    }

    #[test]
    fn discrepancy_examples() {
        let two = Family::planar(vec![vec![crate::Rational2::from_ints(0, 0)], vec![crate::Rational2::from_ints(5, 1)]]).unwrap();
        assert_eq!(max_discrepancy(&two, &BodySet::from_ids(2, [0])).unwrap(), rat(1, 2));
        assert_eq!(max_discrepancy(&two, &BodySet::full(2)).unwrap(), rat(0, 1));
        assert_eq!(max_discrepancy(&two, &BodySet::empty(2)), Err(Error::EmptySample));
        let f = gen_five_segments().family;
        let p = BodySet::from_ids(5, [0, 2, 3]);
        assert_eq!(max_discrepancy(&f, &p).unwrap(), brute_discrepancy(&f, &p));
    }

    #[test]
    fn approximation_of_tiny_families() {
        let one = Family::planar(vec![vec![crate::Rational2::from_ints(1, 2)]]).unwrap();
        let r = epsilon_approximation(&one, &rat(1, 2), 0).unwrap();
        assert_eq!((r.sample, r.discrepancy, r.attempts), (BodySet::full(1), rat(0, 1), 1));
        let f = gen_five_segments().family;
        let r = epsilon_approximation(&f, &rat(1, 10), 3).unwrap();
        assert_eq!((r.m, r.discrepancy), (5, rat(0, 1)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn discrepancy_matches_brute_force(seed in any::<u64>(), n in 2usize..7, bits in 1u64..64) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_segments(n, &mut rng);
            let mut p = BodySet::from_bits(n, bits & ((1 << n) - 1));
            if p.is_empty() {
                p.insert(0);
            }
            let d = max_discrepancy(&f, &p).unwrap();
            prop_assert_eq!(&d, &brute_discrepancy(&f, &p));
            prop_assert!(d <= rat(1, 1));
        }

        #[test]
        fn heavy_edges_match_brute_force(seed in any::<u64>(), n in 2usize..7, num in 1i64..10, ws in proptest::collection::vec(0i64..5, 7)) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_segments(n, &mut rng);
            let w = WeightVector::new(ws[..n].iter().map(|&x| rat(x, 3)).collect()).unwrap();
            let eps = rat(num, 10);
            prop_assert_eq!(heavy_edges(&f, &eps, &w).unwrap(), brute_heavy(&f, &eps, &w));
        }

        #[test]
        fn nets_are_monotone(seed in any::<u64>(), n in 2usize..7, bits in 0u64..64, extra in 0usize..7) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_segments(n, &mut rng);
            let w = WeightVector::uniform(n);
            let net = BodySet::from_bits(n, bits & ((1 << n) - 1));
            let mut bigger = net.clone();
            bigger.insert(extra % n);
            let small_eps = rat(1, 4);
            let large_eps = rat(1, 2);
            if verify_epsilon_net(&f, &small_eps, &w, &net).unwrap().is_ok() {
                prop_assert!(verify_epsilon_net(&f, &small_eps, &w, &bigger).unwrap().is_ok());
                prop_assert!(verify_epsilon_net(&f, &large_eps, &w, &net).unwrap().is_ok());
            }
        }
    }
}
