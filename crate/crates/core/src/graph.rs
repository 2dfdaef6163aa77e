//! Immutable simple graphs over vertices `1..=n` with bit-packed adjacency.
//!
//! Vertices are 1-based at every public surface. Internally vertex `v` lives
//! at bit position `v - 1` of a word-aligned bit vector, and bits past `n`
//! are kept at zero.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

pub(crate) const WORD_BITS: usize = 64;

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(WORD_BITS)
}

/// A subset of `1..=n` stored as a characteristic bit vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    n: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet {
            n,
            words: vec![0; words_for(n)],
        }
    }

    /// The full vertex set `{1, ..., n}`.
    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for w in s.words.iter_mut() {
            *w = u64::MAX;
        }
        s.clear_tail();
        s
    }

    /// `{1, ..., i - 1}`, i.e. the vertices strictly below `i`.
    pub fn below(n: usize, i: usize) -> Self {
        Self::full(n).restrict_below(i)
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(n: usize, vertices: I) -> Self {
        let mut s = Self::empty(n);
        for v in vertices {
            s.insert(v);
        }
        s
    }

    /// Universe size `n`.
    #[inline]
    pub fn universe(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    fn check(&self, v: usize) {
        assert!(v >= 1 && v <= self.n, "vertex {v} out of range 1..={}", self.n);
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        if v == 0 || v > self.n {
            return false;
        }
        let b = v - 1;
        self.words[b / WORD_BITS] >> (b % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.check(v);
        let b = v - 1;
        self.words[b / WORD_BITS] |= 1 << (b % WORD_BITS);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.check(v);
        let b = v - 1;
        self.words[b / WORD_BITS] &= !(1 << (b % WORD_BITS));
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Smallest member.
    pub fn min(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * WORD_BITS + w.trailing_zeros() as usize + 1)
    }

    /// Largest member.
    pub fn max(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * WORD_BITS + (WORD_BITS - 1 - w.leading_zeros() as usize) + 1)
    }

    /// Smallest member strictly greater than `v`.
    pub fn next_after(&self, v: usize) -> Option<usize> {
        if v >= self.n {
            return None;
        }
        // bit position of v + 1 is v
        let mut k = v / WORD_BITS;
        let mut w = self.words[k] & (u64::MAX << (v % WORD_BITS));
        loop {
            if w != 0 {
                return Some(k * WORD_BITS + w.trailing_zeros() as usize + 1);
            }
            k += 1;
            if k == self.words.len() {
                return None;
            }
            w = self.words[k];
        }
    }

    /// Largest member strictly smaller than `v`.
    pub fn prev_before(&self, v: usize) -> Option<usize> {
        self.restrict_below(v).max()
    }

    /// Members in ascending order.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            k: 0,
            cur: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// `S_{<i} = S ∩ {1, ..., i - 1}`.
    pub fn restrict_below(&self, i: usize) -> VertexSet {
        let mut out = self.clone();
        if i == 0 {
            out.words.iter_mut().for_each(|w| *w = 0);
            return out;
        }
        let cut = i - 1; // first bit position to clear
        let k = cut / WORD_BITS;
        if k < out.words.len() {
            out.words[k] &= (1u64 << (cut % WORD_BITS)).wrapping_sub(1);
            for w in &mut out.words[k + 1..] {
                *w = 0;
            }
        }
        out
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        self.zip_with(other, |a, b| a & !b)
    }

    /// Complement within `1..=n`.
    pub fn complement(&self) -> VertexSet {
        let mut out = VertexSet {
            n: self.n,
            words: self.words.iter().map(|w| !w).collect(),
        };
        out.clear_tail();
        out
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        self.same_universe(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.same_universe(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        self.same_universe(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.same_universe(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        self.same_universe(other);
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.same_universe(other);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Lexicographic comparison: `Greater` iff the smallest vertex of the
    /// symmetric difference belongs to `self`.
    pub fn lex_cmp(&self, other: &VertexSet) -> Ordering {
        self.same_universe(other);
        for (a, b) in self.words.iter().zip(&other.words) {
            let x = a ^ b;
            if x != 0 {
                let low = x & x.wrapping_neg();
                return if a & low != 0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
            }
        }
        Ordering::Equal
    }

    fn zip_with(&self, other: &VertexSet, f: impl Fn(u64, u64) -> u64) -> VertexSet {
        self.same_universe(other);
        VertexSet {
            n: self.n,
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    #[inline]
    fn same_universe(&self, other: &VertexSet) {
        debug_assert_eq!(self.n, other.n, "vertex sets over different universes");
    }

    fn clear_tail(&mut self) {
        let r = self.n % WORD_BITS;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }

    pub fn tail_is_clear(&self) -> bool {
        let r = self.n % WORD_BITS;
        r == 0 || self.words.last().is_none_or(|w| w >> r == 0)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Restrict `s` to the vertices strictly below `i`.
pub fn restrict_below(s: &VertexSet, i: usize) -> VertexSet {
    s.restrict_below(i)
}

/// Lexicographic order on vertex sets.
pub fn lex_compare(a: &VertexSet, b: &VertexSet) -> Ordering {
    a.lex_cmp(b)
}

pub struct Iter<'a> {
    words: &'a [u64],
    k: usize,
    cur: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let t = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.k * WORD_BITS + t + 1);
            }
            self.k += 1;
            if self.k >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.k];
        }
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
}

/// What edge-list normalization threw away.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Normalization {
    pub self_loops: usize,
    pub duplicate_edges: usize,
}

/// Undirected simple graph on vertices `1..=n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    m: usize,
    adj: Vec<VertexSet>,
}

impl Graph {
    pub fn edgeless(n: usize) -> Self {
        Graph {
            n,
            m: 0,
            adj: vec![VertexSet::empty(n); n],
        }
    }

    /// Build a simple graph from an edge list, dropping self-loops and
    /// repeated edges (in either orientation).
    pub fn from_edges<I>(n: usize, edges: I) -> Result<(Graph, Normalization), GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::edgeless(n);
        let mut norm = Normalization::default();
        for (u, v) in edges {
            for x in [u, v] {
                if x == 0 || x > n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                norm.self_loops += 1;
            } else if g.adj[u - 1].contains(v) {
                norm.duplicate_edges += 1;
            } else {
                g.adj[u - 1].insert(v);
                g.adj[v - 1].insert(u);
                g.m += 1;
            }
        }
        Ok((g, norm))
    }

    /// Like [`Graph::from_edges`] for inputs known to be in range.
    pub fn from_edge_list(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, edges.iter().copied())
            .expect("edge endpoint out of range")
            .0
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of 64-bit words in one adjacency row.
    #[inline]
    pub fn row_words(&self) -> usize {
        words_for(self.n)
    }

    /// `Γ(v)`.
    #[inline]
    pub fn neighborhood(&self, v: usize) -> &VertexSet {
        assert!(v >= 1 && v <= self.n, "vertex {v} out of range 1..={}", self.n);
        &self.adj[v - 1]
    }

    /// `V_{<i} ∩ Γ(i)`.
    pub fn prefix_neighbors(&self, i: usize) -> VertexSet {
        self.neighborhood(i).restrict_below(i)
    }

    #[inline]
    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.neighborhood(u).contains(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighborhood(v).len()
    }

    pub fn max_degree(&self) -> usize {
        (1..=self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.n
    }

    /// Edges `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vertices()
            .flat_map(move |u| self.adj[u - 1].iter().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::empty(self.n)
    }

    pub fn set_of<I: IntoIterator<Item = usize>>(&self, vertices: I) -> VertexSet {
        VertexSet::from_vertices(self.n, vertices)
    }

    pub fn check_invariants(&self) -> bool {
        let mut bits = 0;
        for v in self.vertices() {
            let row = &self.adj[v - 1];
            if !row.tail_is_clear() || row.contains(v) {
                return false;
            }
            for u in row.iter() {
                if !self.adj[u - 1].contains(v) {
                    return false;
                }
            }
            bits += row.len();
        }
        bits == 2 * self.m
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("m", &self.m)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}
