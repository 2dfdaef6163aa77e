//! Shared inputs for the benchmarks.

use mcl_core::generators::{gnp, moon_moser};
use mcl_core::{Clique, Graph};

/// Deterministic random graph used across benches.
pub fn bench_graph(n: usize, p: f64) -> Graph {
    gnp(n, p, 0x5eed)
}

/// Moon–Moser graph on `n` vertices.
pub fn mm_graph(n: usize) -> Graph {
    moon_moser(n)
}

/// The first `count` cliques of a plain listing, for batch-sized inputs.
pub fn first_cliques(g: &Graph, count: usize) -> Vec<Clique> {
    let mut out = Vec::with_capacity(count);
    mcl_core::run_plain(
        g,
        mcl_core::Kernel::Bitset,
        mcl_core::default_capacity(g),
        Some(count),
        |r| out.push(r.clique.clone()),
    );
    out
}

/// Random 0/1 matrix with density `p`.
pub fn random_binary(rows: usize, cols: usize, p: f64, seed: u64) -> mcl_core::DenseMatrix {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut m = mcl_core::DenseMatrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            if rng.gen_bool(p) {
                m.set(r, c, 1);
            }
        }
    }
    m
}
