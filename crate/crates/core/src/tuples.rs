//! Dense sets of element tuples over a finite universe.
//!
//! A tuple `(t0, .., tk-1)` over a universe of size `u` is stored at the
//! mixed-radix index `t0 * u^(k-1) + .. + tk-1`, so ascending index order is
//! lexicographic tuple order.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Element of a finite universe.
pub type Element = usize;

/// Hard cap on the number of tuple slots a single set may address.
pub const MAX_SLOTS: usize = 1 << 24;

/// `u^k`, or `None` if it exceeds [`MAX_SLOTS`].
pub fn slot_count(universe: usize, arity: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..arity {
        acc = acc.checked_mul(universe)?;
        if acc > MAX_SLOTS {
            return None;
        }
    }
    Some(acc)
}

pub fn encode(universe: usize, tuple: &[Element]) -> usize {
    tuple.iter().fold(0, |acc, &t| acc * universe + t)
}

pub fn decode(universe: usize, arity: usize, mut index: usize) -> Vec<Element> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = index % universe;
        index /= universe;
    }
    out
}

/// Does the tuple have pairwise distinct entries?
pub fn is_distinct(tuple: &[Element]) -> bool {
    tuple
        .iter()
        .enumerate()
        .all(|(i, a)| tuple[i + 1..].iter().all(|b| a != b))
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            break;
        };
        let pivot = i - 1;
        let j = (pivot + 1..n)
            .rev()
            .find(|&j| current[j] > current[pivot])
            .unwrap();
        current.swap(pivot, j);
        current[i..].reverse();
    }
    out
}

/// All `k`-subsets of `0..n` as sorted vectors, in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<Element>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<Element>, out: &mut Vec<Vec<Element>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for e in start..n {
            if n - e < k - cur.len() {
                break;
            }
            cur.push(e);
            rec(e + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// All nonempty subsets of `0..n` as sorted vectors, in lexicographic order
/// (`{0} < {0,1} < {0,1,2} < {0,2} < {1} < ..`).
pub fn nonempty_subsets_lex(n: usize) -> Vec<Vec<Element>> {
    fn rec(start: usize, n: usize, cur: &mut Vec<Element>, out: &mut Vec<Vec<Element>>) {
        for e in start..n {
            cur.push(e);
            out.push(cur.clone());
            rec(e + 1, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, &mut Vec::new(), &mut out);
    out
}

/// A set of `arity`-tuples over `0..universe`, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TupleSet {
    universe: usize,
    arity: usize,
    words: Vec<u64>,
}

impl TupleSet {
    /// Panics if `universe^arity` exceeds [`MAX_SLOTS`]; callers validate sizes first.
    pub fn empty(universe: usize, arity: usize) -> Self {
        let slots = slot_count(universe, arity).expect("tuple space too large");
        TupleSet {
            universe,
            arity,
            words: vec![0; slots.div_ceil(64)],
        }
    }

    pub fn full(universe: usize, arity: usize) -> Self {
        let mut s = Self::empty(universe, arity);
        for w in s.words.iter_mut() {
            *w = !0;
        }
        s.trim();
        s
    }

    pub fn from_tuples<'a, I>(universe: usize, arity: usize, tuples: I) -> Self
    where
        I: IntoIterator<Item = &'a [Element]>,
    {
        let mut s = Self::empty(universe, arity);
        for t in tuples {
            s.insert(t);
        }
        s
    }

    /// Builds a set from raw bitset words (bits past the last slot are cleared).
    pub fn from_words(universe: usize, arity: usize, words: &[u64]) -> Self {
        let mut s = Self::empty(universe, arity);
        assert_eq!(
            s.words.len(),
            words.len(),
            "word count does not match the tuple space"
        );
        s.words.copy_from_slice(words);
        s.trim();
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of addressable slots (`universe^arity`).
    pub fn slots(&self) -> usize {
        slot_count(self.universe, self.arity).unwrap_or(0)
    }

    fn trim(&mut self) {
        let slots = self.slots();
        let rem = slots % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn contains_index(&self, index: usize) -> bool {
        self.words[index / 64] >> (index % 64) & 1 == 1
    }

    pub fn insert_index(&mut self, index: usize) {
        self.words[index / 64] |= 1 << (index % 64);
    }

    pub fn remove_index(&mut self, index: usize) {
        self.words[index / 64] &= !(1 << (index % 64));
    }

    /// Panics on a tuple of the wrong length; entries are taken modulo nothing.
    pub fn contains(&self, tuple: &[Element]) -> bool {
        debug_assert_eq!(tuple.len(), self.arity);
        self.contains_index(encode(self.universe, tuple))
    }

    pub fn insert(&mut self, tuple: &[Element]) {
        debug_assert_eq!(tuple.len(), self.arity);
        self.insert_index(encode(self.universe, tuple));
    }

    pub fn remove(&mut self, tuple: &[Element]) {
        self.remove_index(encode(self.universe, tuple));
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.slots()
    }

    /// Indices of members in ascending (lexicographic) order.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            core::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(wi * 64 + b)
            })
        })
    }

    /// Members in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = Vec<Element>> + '_ {
        self.indices()
            .map(move |i| decode(self.universe, self.arity, i))
    }

    pub fn to_vec(&self) -> Vec<Vec<Element>> {
        self.iter().collect()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        for w in out.words.iter_mut() {
            *w = !*w;
        }
        out.trim();
        out
    }

    fn zip_with(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        debug_assert_eq!((self.universe, self.arity), (other.universe, other.arity));
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a = f(*a, *b);
        }
        out.trim();
        out
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & !b)
    }

    /// `!a | b`, pointwise.
    pub fn implication(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| !a | b)
    }

    /// `a <-> b`, pointwise.
    pub fn equivalence(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| !(a ^ b))
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    /// Image of the set under an element permutation applied entrywise.
    pub fn permuted(&self, perm: &[Element]) -> Self {
        let mut out = Self::empty(self.universe, self.arity);
        for t in self.iter() {
            let image: Vec<Element> = t.iter().map(|&e| perm[e]).collect();
            out.insert(&image);
        }
        out
    }
}

impl fmt::Debug for TupleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encode_is_lexicographic() {
        let mut prev = None;
        for i in 0..27 {
            let t = decode(3, 3, i);
            assert_eq!(encode(3, &t), i);
            if let Some(p) = prev {
                assert!(p < t);
            }
            prev = Some(t);
        }
    }

    #[test]
    fn permutations_are_lexicographic() {
        let p = permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], vec![0, 1, 2]);
        assert_eq!(p[5], vec![2, 1, 0]);
        let mut sorted = p.clone();
        sorted.sort();
        assert_eq!(p, sorted);
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn subsets_in_lex_order() {
        let s = nonempty_subsets_lex(3);
        assert_eq!(s.len(), 7);
        assert_eq!(s[0], vec![0]);
        assert_eq!(s[1], vec![0, 1]);
        assert_eq!(s[2], vec![0, 1, 2]);
        assert_eq!(s[3], vec![0, 2]);
        assert_eq!(k_subsets(4, 2).len(), 6);
        assert!(k_subsets(2, 3).is_empty());
    }

    #[test]
    fn complement_masks_tail() {
        let s = TupleSet::empty(3, 2);
        let c = s.complement();
        assert_eq!(c.len(), 9);
        assert!(c.is_full());
        assert_eq!(c.complement(), s);
    }

    #[test]
    fn arity_zero_has_one_slot() {
        let f = TupleSet::full(4, 0);
        assert_eq!(f.len(), 1);
        assert!(f.contains(&[]));
    }
}
