//! Fixed-width bitsets over body ids.

use std::cmp::Ordering;
use std::fmt;

/// A subset of `{0, .., n-1}`; body 0 is the least significant bit.
///
/// Ordering is numeric (most significant word first), so sorting a list of
/// sets gives the ascending bitmask order used by every text format.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BodySet {
    n: usize,
    words: Vec<u64>,
}

fn word_count(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

impl BodySet {
    pub fn empty(n: usize) -> Self {
        BodySet {
            n,
            words: vec![0; word_count(n)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = BodySet::empty(n);
        for i in 0..n {
            s.insert(i);
        }
        s
    }

    pub fn from_ids(n: usize, ids: impl IntoIterator<Item = usize>) -> Self {
        let mut s = BodySet::empty(n);
        for i in ids {
            s.insert(i);
        }
        s
    }

    /// Low 64 bits given as an integer; bits at or above `n` are ignored.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        BodySet::from_ids(n, (0..n.min(64)).filter(|&i| bits >> i & 1 == 1))
    }

    /// Universe size.
    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.n, "body {i} outside universe of {}", self.n);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        assert!(i < self.n, "body {i} outside universe of {}", self.n);
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn set(&mut self, i: usize, on: bool) {
        if on {
            self.insert(i)
        } else {
            self.remove(i)
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.n && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn intersects(&self, other: &BodySet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn intersection_count(&self, other: &BodySet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn intersection(&self, other: &BodySet) -> BodySet {
        BodySet {
            n: self.n,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn union(&self, other: &BodySet) -> BodySet {
        BodySet {
            n: self.n,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        }
    }

    pub fn is_subset(&self, other: &BodySet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn complement(&self) -> BodySet {
        let mut out = BodySet::full(self.n);
        for (o, w) in out.words.iter_mut().zip(&self.words) {
            *o &= !w;
        }
        out
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * 64 + bit)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Binary string of length `n`, body 0 rightmost.
    pub fn to_binary(&self) -> String {
        (0..self.n)
            .rev()
            .map(|i| if self.contains(i) { '1' } else { '0' })
            .collect()
    }

    /// Inverse of [`BodySet::to_binary`].
    pub fn from_binary(text: &str) -> Option<BodySet> {
        let n = text.len();
        let mut s = BodySet::empty(n);
        for (pos, ch) in text.chars().enumerate() {
            match ch {
                '1' => s.insert(n - 1 - pos),
                '0' => {}
                _ => return None,
            }
        }
        Some(s)
    }
}

impl Ord for BodySet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for BodySet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for BodySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for BodySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_binary())
    }
}
