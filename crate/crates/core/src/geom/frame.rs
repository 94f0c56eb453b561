//! Exact integer copies of rational point sets.
//!
//! Multiplying every coordinate by the common denominator is an orientation
//! preserving similarity, so all sign predicates can run on integers. When the
//! scaled coordinates stay below 2^60 in magnitude the predicates run on
//! `i128` (products of differences stay below 2^124); otherwise on `BigInt`.

use super::Rational2;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use std::cmp::Ordering;

/// Integer types usable by the exact predicates.
pub trait ExactInt: Clone + Ord + Signed {}
impl ExactInt for i128 {}
impl ExactInt for BigInt {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoint<T> {
    pub x: T,
    pub y: T,
}

impl<T: ExactInt> IntPoint<T> {
    pub fn sub(&self, other: &Self) -> Self {
        IntPoint {
            x: self.x.clone() - other.x.clone(),
            y: self.y.clone() - other.y.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        IntPoint {
            x: -self.x.clone(),
            y: -self.y.clone(),
        }
    }
}

/// Cross product of two direction vectors.
pub fn cross<T: ExactInt>(a: &IntPoint<T>, b: &IntPoint<T>) -> T {
    a.x.clone() * b.y.clone() - a.y.clone() * b.x.clone()
}

/// Sign of `(q - p) x (r - p)`.
pub fn orient<T: ExactInt>(p: &IntPoint<T>, q: &IntPoint<T>, r: &IntPoint<T>) -> Ordering {
    cross(&q.sub(p), &r.sub(p)).cmp(&T::zero())
}

/// 0 for directions in the half-open upper half `[0, pi)`, 1 otherwise.
fn half<T: ExactInt>(d: &IntPoint<T>) -> u8 {
    let zero = T::zero();
    if d.y > zero || (d.y == zero && d.x > zero) {
        0
    } else {
        1
    }
}

/// Orders nonzero directions by polar angle in `[0, 2pi)`.
pub fn angle_cmp<T: ExactInt>(a: &IntPoint<T>, b: &IntPoint<T>) -> Ordering {
    half(a)
        .cmp(&half(b))
        .then_with(|| T::zero().cmp(&cross(a, b)))
}

/// A point set scaled to integers, in whichever width fits.
#[derive(Debug, Clone)]
pub enum Frame {
    Small(Vec<IntPoint<i128>>),
    Big(Vec<IntPoint<BigInt>>),
}

const SMALL_LIMIT: u32 = 60;

impl Frame {
    pub fn new(points: &[Rational2]) -> Frame {
        let mut lcm = BigInt::one();
        for p in points {
            lcm = lcm.lcm(p.x.denom()).lcm(p.y.denom());
        }
        let scale = |v: &num_rational::BigRational| -> BigInt { v.numer() * (&lcm / v.denom()) };
        let big: Vec<IntPoint<BigInt>> = points
            .iter()
            .map(|p| IntPoint {
                x: scale(&p.x),
                y: scale(&p.y),
            })
            .collect();
        let fits = big
            .iter()
            .all(|p| p.x.abs().bits() <= SMALL_LIMIT as u64 && p.y.abs().bits() <= SMALL_LIMIT as u64);
        if fits {
            Frame::Small(
                big.iter()
                    .map(|p| IntPoint {
                        x: p.x.to_i128().expect("fits"),
                        y: p.y.to_i128().expect("fits"),
                    })
                    .collect(),
            )
        } else {
            Frame::Big(big)
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Frame::Small(v) => v.len(),
            Frame::Big(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Finds one collinear triple among pairwise distinct points, reported as
/// increasing indices. Runs in `O(n^2 log n)` by sorting, around each pivot,
/// the directions to later points folded onto a half-turn.
pub fn collinear_triple<T: ExactInt>(points: &[IntPoint<T>]) -> Option<[usize; 3]> {
    let mut dirs: Vec<(IntPoint<T>, usize)> = Vec::with_capacity(points.len());
    let mut best: Option<[usize; 3]> = None;
    for (i, p) in points.iter().enumerate() {
        dirs.clear();
        for (j, q) in points.iter().enumerate().skip(i + 1) {
            let d = q.sub(p);
            let d = if half(&d) == 1 { d.neg() } else { d };
            dirs.push((d, j));
        }
        dirs.sort_by(|a, b| angle_cmp(&a.0, &b.0).then(a.1.cmp(&b.1)));
        for w in dirs.windows(2) {
            if cross(&w[0].0, &w[1].0).is_zero() {
                let (j, k) = (w[0].1.min(w[1].1), w[0].1.max(w[1].1));
                let cand = [i, j, k];
                if best.map_or(true, |b| cand < b) {
                    best = Some(cand);
                }
            }
        }
        if best.is_some() {
            return best;
        }
    }
    None
}

pub fn collinear_triple_in(frame: &Frame) -> Option<[usize; 3]> {
    match frame {
        Frame::Small(v) => collinear_triple(v),
        Frame::Big(v) => collinear_triple(v),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Rational2;

    fn pts(raw: &[(i64, i64)]) -> Vec<IntPoint<i128>> {
        raw.iter()
            .map(|&(x, y)| IntPoint {
                x: x as i128,
                y: y as i128,
            })
            .collect()
    }

    #[test]
    fn angle_order_goes_counterclockwise_from_east() {
        let d = pts(&[(1, 0), (1, 1), (0, 1), (-1, 0), (0, -1), (1, -1)]);
        for w in d.windows(2) {
            assert_eq!(angle_cmp(&w[0], &w[1]), Ordering::Less);
        }
    }

    #[test]
    fn finds_collinear_triples() {
        assert_eq!(collinear_triple(&pts(&[(0, 0), (2, 0), (1, 0), (1, 1)])), Some([0, 1, 2]));
        assert_eq!(collinear_triple(&pts(&[(0, 0), (5, 1), (1, 3), (10, 2)])), Some([0, 1, 3]));
        assert_eq!(collinear_triple(&pts(&[(0, 0), (1, 0), (0, 1), (2, 3)])), None);
    }

    #[test]
    fn scaling_picks_width() {
        let small = Frame::new(&[Rational2::from_ints(1, 2), Rational2::new("1/3".parse().unwrap(), "5".parse().unwrap())]);
        match small {
            Frame::Small(v) => assert_eq!(v[1], IntPoint { x: 1, y: 15 }),
            Frame::Big(_) => panic!("expected small frame"),
        }
        let huge = Rational2::new("1/1000000000000000000000".parse().unwrap(), "1".parse().unwrap());
        assert!(matches!(Frame::new(&[huge]), Frame::Big(_)));
    }
}
