//! Randomized lower oracle: evaluate random exact halfplanes and keep what
//! they realize. Every reported subset is realized; completeness is only
//! empirical. Shares nothing with the sweep except the integer scaling.

use super::EdgeSet;
use crate::geom::frame::{cross, ExactInt, Frame, IntPoint};
use crate::geom::Family;
use crate::BodySet;
use num_bigint::BigInt;
use num_traits::{FromPrimitive, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

/// Subsets realized by `trials` random halfplanes: half are small
/// perturbations of lines through two random vertices (either side), half
/// are random directions through random points of the bounding box.
pub fn sampled_oracle(family: &Family, trials: usize, seed: u64) -> EdgeSet {
    let n = family.len();
    let verts: Vec<_> = family.vertices().cloned().collect();
    let owner: Vec<usize> = family
        .bodies()
        .iter()
        .flat_map(|b| std::iter::repeat(b.id()).take(b.vertices().len()))
        .collect();
    if verts.is_empty() || trials == 0 {
        return EdgeSet::new(n, Vec::new());
    }
    let big: Vec<IntPoint<BigInt>> = match Frame::new(&verts) {
        Frame::Small(pts) => pts
            .into_iter()
            .map(|p| IntPoint {
                x: BigInt::from(p.x),
                y: BigInt::from(p.y),
            })
            .collect(),
        Frame::Big(pts) => pts,
    };
    // Refine the grid well past the spread so a unit nudge of a line's
    // endpoints cannot carry it across any other vertex.
    let coord_bits = big.iter().map(|p| p.x.bits().max(p.y.bits())).max().unwrap_or(0);
    let refine_bits = coord_bits + 5;
    let refine = BigInt::from(1u8) << refine_bits;
    let refined: Vec<IntPoint<BigInt>> = big
        .iter()
        .map(|p| IntPoint {
            x: &p.x * &refine,
            y: &p.y * &refine,
        })
        .collect();
    let found = if coord_bits + refine_bits <= 56 {
        let small: Vec<IntPoint<i128>> = refined
            .iter()
            .map(|p| IntPoint {
                x: p.x.to_i128().expect("fits"),
                y: p.y.to_i128().expect("fits"),
            })
            .collect();
        run(&small, &owner, n, trials, seed)
    } else {
        run(&refined, &owner, n, trials, seed)
    };
    EdgeSet::new(n, found.into_iter().collect())
}

fn from_i64<T: ExactInt + FromPrimitive>(v: i64) -> T {
    T::from_i64(v).expect("small integer")
}

fn run<T: ExactInt + FromPrimitive + ToPrimitive>(
    scaled: &[IntPoint<T>],
    owner: &[usize],
    n: usize,
    trials: usize,
    seed: u64,
) -> HashSet<BodySet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lo_x = scaled.iter().map(|p| p.x.clone()).min().expect("nonempty");
    let hi_x = scaled.iter().map(|p| p.x.clone()).max().expect("nonempty");
    let lo_y = scaled.iter().map(|p| p.y.clone()).min().expect("nonempty");
    let hi_y = scaled.iter().map(|p| p.y.clone()).max().expect("nonempty");
    let mut found = HashSet::new();
    let mut inside = vec![true; n];
    let nudge = |rng: &mut ChaCha8Rng| IntPoint {
        x: from_i64::<T>(rng.gen_range(-1..=1)),
        y: from_i64::<T>(rng.gen_range(-1..=1)),
    };
    let lerp = |lo: &T, hi: &T, f: f64| -> T {
        let width = (hi.clone() - lo.clone()).to_f64().unwrap_or(0.0);
        lo.clone() + T::from_f64((width * f).floor()).unwrap_or_else(T::zero)
    };
    for trial in 0..trials {
        let (from, dir) = if trial % 2 == 0 && scaled.len() > 1 {
            let i = rng.gen_range(0..scaled.len());
            let mut j = rng.gen_range(0..scaled.len());
            while j == i {
                j = rng.gen_range(0..scaled.len());
            }
            let a = scaled[i].sub(&nudge(&mut rng));
            let b = scaled[j].sub(&nudge(&mut rng));
            let d = b.sub(&a);
            if rng.gen_bool(0.5) {
                (a, d)
            } else {
                (a, d.neg())
            }
        } else {
            let origin = IntPoint {
                x: lerp(&lo_x, &hi_x, rng.gen_range(-0.25..=1.25)),
                y: lerp(&lo_y, &hi_y, rng.gen_range(-0.25..=1.25)),
            };
            let dir = IntPoint {
                x: from_i64::<T>(rng.gen_range(-1000..=1000)),
                y: from_i64::<T>(rng.gen_range(-1000..=1000)),
            };
            (origin, dir)
        };
        if dir.x.is_zero() && dir.y.is_zero() {
            continue;
        }
        inside.iter_mut().for_each(|s| *s = true);
        for (p, &b) in scaled.iter().zip(owner) {
            if cross(&dir, &p.sub(&from)) < T::zero() {
                inside[b] = false;
            }
        }
        found.insert(BodySet::from_ids(n, (0..n).filter(|&b| inside[b])));
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Rational2;
    use crate::hypergraph::enumerate_realized;

    fn p(x: i64, y: i64) -> Rational2 {
        Rational2::from_ints(x, y)
    }

    #[test]
    fn zero_trials_find_nothing() {
        let f = Family::planar(vec![vec![p(0, 0), p(1, 2)]]).unwrap();
        assert!(sampled_oracle(&f, 0, 1).is_empty());
    }

    #[test]
    fn two_segments_fully_recovered() {
        let f = Family::planar(vec![vec![p(0, 0), p(0, 2)], vec![p(3, 1), p(3, 4)]]).unwrap();
        let exact = enumerate_realized(&f).unwrap();
        assert_eq!(sampled_oracle(&f, 100_000, 1), exact);
    }

    #[test]
    fn deterministic_per_seed() {
        let f = Family::planar(vec![vec![p(0, 0), p(5, 2)], vec![p(3, 1), p(1, 4)], vec![p(-2, 3)]]).unwrap();
        assert_eq!(sampled_oracle(&f, 500, 9), sampled_oracle(&f, 500, 9));
    }
}
