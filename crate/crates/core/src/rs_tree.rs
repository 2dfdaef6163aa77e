//! Reverse-search tree over maximal cliques.
//!
//! The tree is never materialized. Everything here is a local query:
//! the lexicographic completion `lc(K)` of a clique, the index `i(C)` of a
//! maximal clique, its parent `lc(C_{<i(C)})`, and the candidate child
//! `lc((P_{<i} ∩ Γ(i)) ∪ {i})` of a parent `P` at index `i`.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::cost::WorkMeter;
use crate::graph::{Graph, VertexSet};

/// A clique of the host graph, kept as a sorted vertex set.
///
/// Construction does not check adjacency; use [`is_clique`] and
/// [`is_maximal`] where that matters.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Clique(VertexSet);

impl Clique {
    pub fn new(verts: VertexSet) -> Self {
        Clique(verts)
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(g: &Graph, vertices: I) -> Self {
        Clique(g.set_of(vertices))
    }

    pub fn empty(g: &Graph) -> Self {
        Clique(g.empty_set())
    }

    #[inline]
    pub fn verts(&self) -> &VertexSet {
        &self.0
    }

    pub fn into_verts(self) -> VertexSet {
        self.0
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> crate::graph::Iter<'_> {
        self.0.iter()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.0.to_vec()
    }

    pub fn lex_cmp(&self, other: &Clique) -> Ordering {
        self.0.lex_cmp(&other.0)
    }
}

impl fmt::Debug for Clique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Display for Clique {
    /// Space-separated ascending vertex ids.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for v in self.iter() {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
            first = false;
        }
        Ok(())
    }
}

/// `i(C)`: a vertex, or `None` (⊥) for the root.
pub type CliqueIndex = Option<usize>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RsTreeError {
    #[error("the root clique has no parent")]
    Root,
}

pub fn is_clique(g: &Graph, s: &VertexSet) -> bool {
    s.iter().all(|v| {
        let mut rest = s.clone();
        rest.remove(v);
        rest.is_subset(g.neighborhood(v))
    })
}

/// A clique is maximal iff no outside vertex is adjacent to all of it.
pub fn is_maximal(g: &Graph, s: &VertexSet) -> bool {
    if !is_clique(g, s) {
        return false;
    }
    common_neighbors(g, s).is_empty()
}

/// `∩_{v ∈ s} Γ(v)`, or all of `V` when `s` is empty.
pub(crate) fn common_neighbors(g: &Graph, s: &VertexSet) -> VertexSet {
    let mut c = VertexSet::full(g.n());
    for v in s.iter() {
        c.intersect_with(g.neighborhood(v));
    }
    c
}

/// Lexicographic completion `lc(k)`: the lexicographically greatest maximal
/// clique containing `k`.
pub fn lex_completion(g: &Graph, k: &Clique) -> Clique {
    lex_completion_metered(g, k.verts(), &mut WorkMeter::new())
}

/// Greedy ascending scan: starting from `S = K`, add each candidate `u` that
/// is adjacent to all of `S`. Candidates are `Γ(min K)` when `K` is
/// non-empty and all of `V` otherwise.
///
/// The scan keeps `C = ∩_{s ∈ S} Γ(s)` restricted to unvisited candidates;
/// the next vertex to add is always `min C`, because vertices skipped by the
/// ascending scan are exactly those that fail the adjacency test.
pub(crate) fn lex_completion_metered(g: &Graph, k: &VertexSet, meter: &mut WorkMeter) -> Clique {
    debug_assert!(is_clique(g, k), "lex_completion on a non-clique {k:?}");
    let words = g.row_words() as u64;
    let mut s = k.clone();
    let mut cand = match k.min() {
        Some(pivot) => g.neighborhood(pivot).clone(),
        None => VertexSet::full(g.n()),
    };
    for v in k.iter() {
        cand.intersect_with(g.neighborhood(v));
    }
    meter.charge(words * (k.len() as u64 + 1));
    while let Some(u) = cand.min() {
        s.insert(u);
        cand.intersect_with(g.neighborhood(u));
        meter.charge(words);
    }
    Clique(s)
}

/// Lexicographically greatest maximal clique, `lc(∅)`.
pub fn root(g: &Graph) -> Clique {
    lex_completion_metered(g, &g.empty_set(), &mut WorkMeter::new())
}

/// Index `i(C)` of a maximal clique: the greatest `i` with `lc(C_{<i}) ≠ C`,
/// or `None` for the root.
///
/// Scans `v = n, ..., 1`. When `v ∈ C` is switched off, the remaining clique
/// is `C_{<v}`, and `lc(C_{<v}) ≠ C` iff some vertex `z ∉ C` with `z < v`
/// (still *active*) is adjacent to all of `C_{<v}`. Such a `z` must be a
/// neighbour of `û = max C_{<v}`, so only `Γ(û) ∖ C` is inspected. When
/// `C_{<v}` is empty any active vertex witnesses it.
pub fn clique_index(g: &Graph, c: &Clique) -> CliqueIndex {
    clique_index_metered(g, c, &mut WorkMeter::new())
}

pub(crate) fn clique_index_metered(g: &Graph, c: &Clique, meter: &mut WorkMeter) -> CliqueIndex {
    debug_assert!(is_maximal(g, c.verts()), "clique_index on a non-maximal clique {c:?}");
    let n = g.n();
    let cv = c.verts();
    // d[v] = |Γ(v) ∩ C|
    let mut d: Vec<usize> = (1..=n).map(|v| g.neighborhood(v).intersection_len(cv)).collect();
    let mut size = cv.len();
    let mut active = cv.complement();
    meter.charge((n * g.row_words()) as u64);
    for v in (1..=n).rev() {
        meter.charge(1);
        if cv.contains(v) {
            let outside = g.neighborhood(v).difference(cv);
            for u in outside.iter() {
                d[u - 1] -= 1;
            }
            size -= 1;
            meter.charge(outside.len() as u64 + 1);
            match cv.prev_before(v) {
                Some(hat) => {
                    let witnesses = g.neighborhood(hat).difference(cv).intersection(&active);
                    meter.charge(witnesses.len() as u64 + g.row_words() as u64);
                    if witnesses.iter().any(|z| d[z - 1] >= size) {
                        return Some(v);
                    }
                }
                None => {
                    if !active.is_empty() {
                        return Some(v);
                    }
                }
            }
        } else {
            active.remove(v);
        }
    }
    None
}

/// Parent `P(C) = lc(C_{<i(C)})`.
pub fn parent(g: &Graph, c: &Clique) -> Result<Clique, RsTreeError> {
    let i = clique_index(g, c).ok_or(RsTreeError::Root)?;
    Ok(lex_completion(g, &Clique(c.verts().restrict_below(i))))
}

/// Seed of the candidate child of `p` at index `i`: `(P_{<i} ∩ Γ(i)) ∪ {i}`.
pub(crate) fn child_seed(g: &Graph, p: &VertexSet, i: usize) -> VertexSet {
    let mut seed = p.restrict_below(i);
    seed.intersect_with(g.neighborhood(i));
    seed.insert(i);
    seed
}

/// `lc((P_{<i} ∩ Γ(i)) ∪ {i})`. Always a maximal clique containing `i`, but a
/// child of `p` only when `i` passed the goodness test.
pub fn child(g: &Graph, p: &Clique, i: usize) -> Clique {
    child_metered(g, p, i, &mut WorkMeter::new())
}

pub(crate) fn child_metered(g: &Graph, p: &Clique, i: usize, meter: &mut WorkMeter) -> Clique {
    assert!(!p.contains(i), "child index {i} is a member of the parent");
    lex_completion_metered(g, &child_seed(g, p.verts(), i), meter)
}
