//! Brute-force references for differential testing.
//!
//! Nothing here shares code paths with the kernels it checks: maximal
//! cliques come from Bron–Kerbosch with pivoting (or a full subset scan),
//! indices from the descending definition, and children from inverting the
//! parent map over the complete clique set.

use std::cmp::Ordering;

use thiserror::Error;

use crate::graph::{Graph, VertexSet};
use crate::kernels::ChildSpec;
use crate::rs_tree::{self, Clique, CliqueIndex};

/// Default cap on `n` for the exponential references.
pub const DEFAULT_ORACLE_LIMIT: usize = 24;

/// Subset scanning enumerates `2^n` sets; keep it well below the BK limit.
pub const SUBSET_SCAN_LIMIT: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {n} vertices; the brute-force oracle is limited to {limit}")]
    TooLarge { n: usize, limit: usize },
}

/// Deduplicated maximal cliques, lexicographically descending (root first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueSet(Vec<Clique>);

impl CliqueSet {
    pub fn from_cliques(mut cliques: Vec<Clique>) -> Self {
        cliques.sort_by(|a, b| b.lex_cmp(a));
        cliques.dedup();
        CliqueSet(cliques)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Clique> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Clique] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Clique> {
        self.0
    }

    pub fn contains(&self, c: &Clique) -> bool {
        self.0.binary_search_by(|x| c.lex_cmp(x)).is_ok()
    }
}

impl<'a> IntoIterator for &'a CliqueSet {
    type Item = &'a Clique;
    type IntoIter = std::slice::Iter<'a, Clique>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Every maximal clique, with the default size limit.
pub fn all_maximal_cliques(g: &Graph) -> Result<CliqueSet, OracleError> {
    all_maximal_cliques_limited(g, DEFAULT_ORACLE_LIMIT)
}

pub fn all_maximal_cliques_limited(g: &Graph, limit: usize) -> Result<CliqueSet, OracleError> {
    if g.n() > limit {
        return Err(OracleError::TooLarge { n: g.n(), limit });
    }
    let mut out = Vec::new();
    bron_kerbosch(g, g.empty_set(), VertexSet::full(g.n()), g.empty_set(), &mut out);
    Ok(CliqueSet::from_cliques(out))
}

fn bron_kerbosch(g: &Graph, r: VertexSet, mut p: VertexSet, mut x: VertexSet, out: &mut Vec<Clique>) {
    if p.is_empty() {
        if x.is_empty() {
            out.push(Clique::new(r));
        }
        return;
    }
    // pivot maximizing |P ∩ Γ(u)|
    let pivot = p
        .union(&x)
        .iter()
        .max_by_key(|&u| p.intersection_len(g.neighborhood(u)))
        .expect("P is non-empty");
    let todo = p.difference(g.neighborhood(pivot));
    for v in todo.iter() {
        let nv = g.neighborhood(v);
        let mut r2 = r.clone();
        r2.insert(v);
        bron_kerbosch(g, r2, p.intersection(nv), x.intersection(nv), out);
        p.remove(v);
        x.insert(v);
    }
}

/// Every maximal clique by testing all `2^n` vertex subsets.
pub fn all_maximal_cliques_subset_scan(g: &Graph) -> Result<CliqueSet, OracleError> {
    let n = g.n();
    if n > SUBSET_SCAN_LIMIT {
        return Err(OracleError::TooLarge {
            n,
            limit: SUBSET_SCAN_LIMIT,
        });
    }
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << n) {
        let s = VertexSet::from_vertices(n, (1..=n).filter(|v| mask >> (v - 1) & 1 == 1));
        let clique = s.iter().all(|u| s.iter().all(|v| u == v || g.is_adjacent(u, v)));
        if clique && (1..=n).all(|w| s.contains(w) || s.iter().any(|u| !g.is_adjacent(u, w))) {
            out.push(Clique::new(s));
        }
    }
    Ok(CliqueSet::from_cliques(out))
}

/// `lc(k)` as the lexicographic maximum over the maximal cliques containing
/// `k`.
pub fn lex_completion_brute(_g: &Graph, k: &Clique, all: &CliqueSet) -> Clique {
    all.iter()
        .filter(|c| k.verts().is_subset(c.verts()))
        .max_by(|a, b| a.lex_cmp(b))
        .cloned()
        .expect("every clique extends to a maximal clique")
}

/// `i(C)` straight from the definition: the greatest `i` with
/// `lc(C_{<i}) ≠ C`, scanning `i = n, ..., 1`.
pub fn clique_index_by_definition(g: &Graph, c: &Clique) -> CliqueIndex {
    (1..=g.n())
        .rev()
        .find(|&i| rs_tree::lex_completion(g, &Clique::new(c.verts().restrict_below(i))) != *c)
}

fn parent_by_definition(g: &Graph, c: &Clique) -> Option<Clique> {
    clique_index_by_definition(g, c).map(|i| rs_tree::lex_completion(g, &Clique::new(c.verts().restrict_below(i))))
}

/// Is there `u ∈ P_{<i} ∩ Γ(i)` with `{u, j} ∉ E`? (`u = j` counts, since
/// there are no self-loops.)
pub fn good_pair_oracle(g: &Graph, p: &Clique, i: usize, j: usize) -> bool {
    p.iter()
        .filter(|&u| u < i && g.is_adjacent(u, i))
        .any(|u| u == j || !g.is_adjacent(u, j))
}

/// Children of `p`: every maximal clique whose parent is `p`, listed by
/// index.
pub fn children_oracle(g: &Graph, p: &Clique) -> Result<ChildSpec, OracleError> {
    let all = all_maximal_cliques(g)?;
    let mut indices: Vec<usize> = all
        .iter()
        .filter(|c| parent_by_definition(g, c).as_ref() == Some(p))
        .map(|c| clique_index_by_definition(g, c).expect("non-root has an index"))
        .collect();
    indices.sort_unstable();
    Ok(ChildSpec {
        parent: p.clone(),
        indices,
    })
}

/// Compare an emitted sequence against a reference set.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SetDiff {
    pub missing: usize,
    pub unexpected: usize,
    pub duplicates: usize,
}

impl SetDiff {
    pub fn is_exact(&self) -> bool {
        self.missing == 0 && self.unexpected == 0 && self.duplicates == 0
    }
}

pub fn compare_emissions(emitted: &[Clique], reference: &CliqueSet) -> SetDiff {
    let mut sorted: Vec<&Clique> = emitted.iter().collect();
    sorted.sort_by(|a, b| b.lex_cmp(a));
    let before = sorted.len();
    sorted.dedup();
    let duplicates = before - sorted.len();
    let unexpected = sorted.iter().filter(|c| !reference.contains(c)).count();
    let present = sorted.len() - unexpected;
    SetDiff {
        missing: reference.len() - present,
        unexpected,
        duplicates,
    }
}

/// Lexicographic total order wrapper, handy for sorting by `Ord`.
pub fn lex_descending(a: &Clique, b: &Clique) -> Ordering {
    b.lex_cmp(a)
}
