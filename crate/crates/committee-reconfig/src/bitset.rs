//! Dense bitsets over voter and candidate indices.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Deref, DerefMut};

use serde::{Serialize, Serializer};

pub(crate) const WORD: usize = 64;

#[inline]
pub(crate) fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// Fixed-universe set of indices `0..len`, one bit per index.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    len: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet { len, words: vec![0; words_for(len)] }
    }

    pub fn full(len: usize) -> Self {
        let mut s = BitSet { len, words: vec![!0; words_for(len)] };
        s.trim();
        s
    }

    /// Builds a set from raw words; bits beyond `len` are cleared.
    pub fn from_words(len: usize, words: &[u64]) -> Self {
        assert_eq!(words.len(), words_for(len));
        let mut s = BitSet { len, words: words.to_vec() };
        s.trim();
        s
    }

    /// Panics if an index is outside the universe.
    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, it: I) -> Self {
        let mut s = BitSet::new(len);
        for i in it {
            s.insert(i);
        }
        s
    }

    fn trim(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Size of the universe.
    pub fn universe(&self) -> usize {
        self.len
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    /// Returns true if the index was newly inserted.
    #[inline]
    pub fn insert(&mut self, i: usize) -> bool {
        assert!(i < self.len, "index {i} outside universe of size {}", self.len);
        let w = &mut self.words[i / WORD];
        let bit = 1u64 << (i % WORD);
        let fresh = *w & bit == 0;
        *w |= bit;
        fresh
    }

    /// Returns true if the index was present.
    #[inline]
    pub fn remove(&mut self, i: usize) -> bool {
        if i >= self.len {
            return false;
        }
        let w = &mut self.words[i / WORD];
        let bit = 1u64 << (i % WORD);
        let had = *w & bit != 0;
        *w &= !bit;
        had
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn iter(&self) -> Ones<'_> {
        Ones::new(&self.words)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn union_with(&mut self, other: &BitSet) {
        self.union_words(&other.words);
    }

    pub fn union_words(&mut self, other: &[u64]) {
        for (a, b) in self.words.iter_mut().zip(other) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        self.intersect_words(&other.words);
    }

    pub fn intersect_words(&mut self, other: &[u64]) {
        for (a, b) in self.words.iter_mut().zip(other) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &BitSet) {
        self.difference_words(&other.words);
    }

    pub fn difference_words(&mut self, other: &[u64]) {
        for (a, b) in self.words.iter_mut().zip(other) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn complement(&self) -> BitSet {
        let mut s = BitSet { len: self.len, words: self.words.iter().map(|w| !w).collect() };
        s.trim();
        s
    }

    pub fn intersection_count(&self, other: &BitSet) -> usize {
        count_and(&self.words, &other.words)
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Ord for BitSet {
    /// Lexicographic order of the sorted member lists.
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter()).then(self.len.cmp(&other.len))
    }
}

impl PartialOrd for BitSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Iterator over set bits in increasing order.
pub struct Ones<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl<'a> Ones<'a> {
    pub fn new(words: &'a [u64]) -> Self {
        let cur = words.first().copied().unwrap_or(0);
        Ones { words, idx: 0, cur }
    }
}

impl Iterator for Ones<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let t = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * WORD + t);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

#[inline]
pub fn count_words(a: &[u64]) -> usize {
    a.iter().map(|w| w.count_ones() as usize).sum()
}

#[inline]
pub fn count_and(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

#[inline]
pub fn count_and_not(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & !y).count_ones() as usize).sum()
}

macro_rules! index_set {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(pub BitSet);

        impl $name {
            pub fn new(universe: usize) -> Self {
                $name(BitSet::new(universe))
            }

            pub fn full(universe: usize) -> Self {
                $name(BitSet::full(universe))
            }

            pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, it: I) -> Self {
                $name(BitSet::from_indices(universe, it))
            }

            pub fn from_words(universe: usize, words: &[u64]) -> Self {
                $name(BitSet::from_words(universe, words))
            }

            pub fn union(&self, other: &Self) -> Self {
                $name(self.0.union(&other.0))
            }

            pub fn intersection(&self, other: &Self) -> Self {
                $name(self.0.intersection(&other.0))
            }

            pub fn difference(&self, other: &Self) -> Self {
                $name(self.0.difference(&other.0))
            }

            pub fn complement(&self) -> Self {
                $name(self.0.complement())
            }

            pub fn is_subset(&self, other: &Self) -> bool {
                self.0.is_subset(&other.0)
            }

            /// Copy with `out` removed and `inc` inserted.
            pub fn swapped(&self, out: usize, inc: usize) -> Self {
                let mut s = self.clone();
                s.0.remove(out);
                s.0.insert(inc);
                s
            }

            pub fn with(&self, i: usize) -> Self {
                let mut s = self.clone();
                s.0.insert(i);
                s
            }

            pub fn without(&self, i: usize) -> Self {
                let mut s = self.clone();
                s.0.remove(i);
                s
            }
        }

        impl Deref for $name {
            type Target = BitSet;
            fn deref(&self) -> &BitSet {
                &self.0
            }
        }

        impl DerefMut for $name {
            fn deref_mut(&mut self) -> &mut BitSet {
                &mut self.0
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt(f)
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.collect_seq(self.iter())
            }
        }
    };
}

index_set!(
    /// Set of candidate indices. A committee when it has exactly `k` members.
    CandidateSet
);
index_set!(
    /// Set of voter indices.
    VoterSet
);

/// Symmetric distance between two committees: `|W \ W2|`.
pub fn distance(w: &CandidateSet, w2: &CandidateSet) -> Result<usize, crate::Error> {
    let a = w.count();
    let b = w2.count();
    if a != b {
        return Err(crate::Error::SizeMismatch { left: a, right: b });
    }
    Ok(count_and_not(w.words(), w2.words()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_remove_count() {
        let mut s = BitSet::new(130);
        assert!(s.insert(0));
        assert!(s.insert(64));
        assert!(s.insert(129));
        assert!(!s.insert(64));
        assert_eq!(s.count(), 3);
        assert_eq!(s.to_vec(), vec![0, 64, 129]);
        assert!(s.remove(64));
        assert!(!s.remove(64));
        assert_eq!(s.to_vec(), vec![0, 129]);
    }

    #[test]
    fn full_is_trimmed() {
        let s = BitSet::full(70);
        assert_eq!(s.count(), 70);
        assert_eq!(s.complement().count(), 0);
    }

    #[test]
    fn distance_examples() {
        let a = CandidateSet::from_indices(6, [0, 1]);
        let b = CandidateSet::from_indices(6, [2, 3]);
        assert_eq!(distance(&a, &a).unwrap(), 0);
        assert_eq!(distance(&a, &b).unwrap(), 2);
        let w = CandidateSet::from_indices(6, [0, 2, 3]);
        let w2 = CandidateSet::from_indices(6, [1, 4, 5]);
        assert_eq!(distance(&w, &w2).unwrap(), 3);
        assert!(distance(&a, &w).is_err());
    }

    #[test]
    fn order_is_lexicographic_on_members() {
        let a = CandidateSet::from_indices(10, [0, 5]);
        let b = CandidateSet::from_indices(10, [1, 2]);
        assert!(a < b);
    }
}
