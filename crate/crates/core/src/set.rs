//! Fixed-capacity bitset over project indices.
//!
//! Project indices follow the scenario's canonical project order (ids sorted
//! lexicographically), so ascending index order is also ascending id order and
//! [`ProjectSet::lex_cmp`] compares sorted member-id lists.

use std::cmp::Ordering;
use std::fmt;

const WORDS: usize = 4;

/// Largest number of projects a scenario may hold.
pub const MAX_PROJECTS: usize = WORDS * 64;

/// A set of project indices, `Copy` and cheap to hash.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct ProjectSet {
    words: [u64; WORDS],
}

impl ProjectSet {
    pub const EMPTY: ProjectSet = ProjectSet { words: [0; WORDS] };

    pub fn new() -> Self {
        Self::EMPTY
    }

    pub fn singleton(index: usize) -> Self {
        let mut s = Self::EMPTY;
        s.insert(index);
        s
    }

    /// All indices in `0..n`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_PROJECTS, "at most {MAX_PROJECTS} projects");
        let mut s = Self::EMPTY;
        for (w, word) in s.words.iter_mut().enumerate() {
            let lo = w * 64;
            if n >= lo + 64 {
                *word = u64::MAX;
            } else if n > lo {
                *word = (1u64 << (n - lo)) - 1;
            }
        }
        s
    }

    /// Builds a set from the low bits of a mask (bit `i` = index `i`).
    pub fn from_mask(mask: u64) -> Self {
        let mut s = Self::EMPTY;
        s.words[0] = mask;
        s
    }

    /// Low 64 bits as a mask; meaningful only when every member is below 64.
    pub fn low_mask(&self) -> u64 {
        self.words[0]
    }

    pub fn insert(&mut self, index: usize) {
        assert!(index < MAX_PROJECTS, "project index {index} out of range");
        self.words[index / 64] |= 1u64 << (index % 64);
    }

    pub fn remove(&mut self, index: usize) {
        if index < MAX_PROJECTS {
            self.words[index / 64] &= !(1u64 << (index % 64));
        }
    }

    pub fn with(mut self, index: usize) -> Self {
        self.insert(index);
        self
    }

    pub fn without(mut self, index: usize) -> Self {
        self.remove(index);
        self
    }

    pub fn contains(&self, index: usize) -> bool {
        index < MAX_PROJECTS && self.words[index / 64] & (1u64 << (index % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &ProjectSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &ProjectSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & b == 0)
    }

    pub fn union(&self, other: &ProjectSet) -> ProjectSet {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &ProjectSet) -> ProjectSet {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &ProjectSet) -> ProjectSet {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn symmetric_difference(&self, other: &ProjectSet) -> ProjectSet {
        self.zip_with(other, |a, b| a ^ b)
    }

    fn zip_with(&self, other: &ProjectSet, f: impl Fn(u64, u64) -> u64) -> ProjectSet {
        let mut out = ProjectSet::EMPTY;
        for i in 0..WORDS {
            out.words[i] = f(self.words[i], other.words[i]);
        }
        out
    }

    /// Member indices in ascending order.
    pub fn iter(&self) -> Iter {
        Iter {
            words: self.words,
            word: 0,
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    /// Lexicographic order of the ascending member lists (a proper prefix is smaller).
    pub fn lex_cmp(&self, other: &ProjectSet) -> Ordering {
        self.iter().cmp(other.iter())
    }

    /// Every non-empty subset with at most `max_size` members, smallest first.
    pub fn subsets_up_to(&self, max_size: usize) -> Vec<ProjectSet> {
        let members = self.to_vec();
        let mut out = Vec::new();
        for size in 1..=max_size.min(members.len()) {
            for_each_combination(&members, size, |s| out.push(s));
        }
        out
    }

    /// Every subset with exactly `size` members, in lexicographic order.
    pub fn subsets_of_size(&self, size: usize) -> Vec<ProjectSet> {
        let members = self.to_vec();
        let mut out = Vec::new();
        if size <= members.len() {
            for_each_combination(&members, size, |s| out.push(s));
        }
        out
    }
}

/// Calls `f` on every `size`-subset of `members` (lexicographic order of positions).
pub fn for_each_combination(members: &[usize], size: usize, mut f: impl FnMut(ProjectSet)) {
    fn rec(
        members: &[usize],
        start: usize,
        left: usize,
        acc: ProjectSet,
        f: &mut dyn FnMut(ProjectSet),
    ) {
        if left == 0 {
            f(acc);
            return;
        }
        for i in start..=members.len() - left {
            rec(members, i + 1, left - 1, acc.with(members[i]), f);
        }
    }
    if size > members.len() {
        return;
    }
    rec(members, 0, size, ProjectSet::EMPTY, &mut f);
}

impl FromIterator<usize> for ProjectSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut s = ProjectSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl fmt::Debug for ProjectSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Iter {
    words: [u64; WORDS],
    word: usize,
}

impl Iterator for Iter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.word < WORDS {
            let w = self.words[self.word];
            if w != 0 {
                let bit = w.trailing_zeros() as usize;
                self.words[self.word] &= w - 1;
                return Some(self.word * 64 + bit);
            }
            self.word += 1;
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let a: ProjectSet = [0, 3, 70].into_iter().collect();
        let b: ProjectSet = [3, 200].into_iter().collect();
        assert_eq!(a.len(), 3);
        assert!(a.contains(70));
        assert_eq!(a.intersection(&b).to_vec(), vec![3]);
        assert_eq!(a.union(&b).to_vec(), vec![0, 3, 70, 200]);
        assert_eq!(a.difference(&b).to_vec(), vec![0, 70]);
        assert!(ProjectSet::singleton(3).is_subset(&b));
        assert!(!a.is_disjoint(&b));
        assert_eq!(ProjectSet::full(65).len(), 65);
        assert_eq!(ProjectSet::full(256).len(), 256);
    }

    #[test]
    fn lex_order_treats_prefix_as_smaller() {
        let ab: ProjectSet = [0, 1].into_iter().collect();
        let abz: ProjectSet = [0, 1, 9].into_iter().collect();
        let ac: ProjectSet = [0, 2].into_iter().collect();
        assert_eq!(ab.lex_cmp(&abz), Ordering::Less);
        assert_eq!(abz.lex_cmp(&ac), Ordering::Less);
        assert_eq!(ProjectSet::EMPTY.lex_cmp(&ab), Ordering::Less);
    }

    #[test]
    fn subset_enumeration_counts() {
        let s = ProjectSet::full(6);
        assert_eq!(s.subsets_up_to(2).len(), 6 + 15);
        assert_eq!(s.subsets_up_to(10).len(), 63);
        assert_eq!(s.subsets_of_size(3).len(), 20);
        assert!(s.subsets_up_to(3).windows(2).all(|w| w[0].len() <= w[1].len()));
    }
}
