//! Small graph families used by tests, benches and the CLI.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

/// A 5-clique on `1..=5` and a triangle on `{6, 7, 8}` joined by the
/// bridges `{1,6}`, `{2,7}` and `{5,8}`.
///
/// Its maximal cliques are `{1,2,3,4,5}`, `{1,6}`, `{2,7}`, `{5,8}` and
/// `{6,7,8}`.
pub fn running_example() -> Graph {
    let mut edges = Vec::new();
    for u in 1..=5 {
        for v in u + 1..=5 {
            edges.push((u, v));
        }
    }
    edges.extend([(6, 7), (6, 8), (7, 8), (1, 6), (2, 7), (5, 8)]);
    Graph::from_edge_list(8, &edges)
}

pub fn complete(n: usize) -> Graph {
    let edges: Vec<_> = (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v))).collect();
    Graph::from_edge_list(n, &edges)
}

pub fn edgeless(n: usize) -> Graph {
    Graph::edgeless(n)
}

/// Complete multipartite graph with `parts` consecutive blocks of
/// `part_size` vertices each.
pub fn complete_multipartite(parts: usize, part_size: usize) -> Graph {
    let n = parts * part_size;
    let block = |v: usize| (v - 1) / part_size;
    let edges: Vec<_> = (1..=n)
        .flat_map(|u| (u + 1..=n).filter(move |&v| block(u) != block(v)).map(move |v| (u, v)))
        .collect();
    Graph::from_edge_list(n, &edges)
}

/// Moon–Moser graph on `n` vertices: `n / 3` independent triples, all
/// cross edges present. Has `3^(n/3)` maximal cliques.
pub fn moon_moser(n: usize) -> Graph {
    assert!(n.is_multiple_of(3), "Moon-Moser graphs need n divisible by 3");
    complete_multipartite(n / 3, 3)
}

/// Erdős–Rényi `G(n, p)` with a deterministic ChaCha8 stream.
pub fn gnp(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edge_list(n, &edges)
}
