//! Children generation for batches of maximal cliques.
//!
//! For a parent `P` and indices `i, j`, the pair `(i, j)` is *good* when some
//! `u ∈ P_{<i} ∩ Γ(i)` is not adjacent to `j`. With `A_i = V_{<i} ∩ Γ(i)` and
//! `B_j = Γ(j)` this is `P ∩ (A_i ∖ B_j) ≠ ∅`, so a whole batch of parents
//! is decided by one product `M_B · M_G`, where row `k` of `M_B` is `x(P_k)`
//! and column `(i, j)` of `M_G` is `x(A_i ∖ B_j)`.
//!
//! Three interchangeable kernels produce the same [`ChildSpec`]s:
//! - `Naive`: tests both reconstructability conditions with direct
//!   lexicographic completions, one parent at a time.
//! - `Rectangular`: the matrix-product reduction above.
//! - `Bitset`: the same table via word-level intersections against the set
//!   family `S_{i,j} = A_i ∖ B_j`, materialized one `i` at a time.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::cost::WorkMeter;
use crate::graph::{Graph, VertexSet};
use crate::matmul::{self, Backend, BitMatrix, DenseMatrix};
use crate::rs_tree::{self, Clique};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KernelError {
    #[error("a batch must hold at least one clique")]
    EmptyBatch,
    #[error("batch of {len} cliques exceeds capacity {capacity}")]
    OverCapacity { len: usize, capacity: usize },
    #[error("unknown kernel `{0}` (expected naive, rect or bitset)")]
    UnknownKernel(String),
}

/// A non-empty group of distinct maximal cliques processed in one shot.
#[derive(Clone, Debug)]
pub struct Batch {
    cliques: Vec<Clique>,
    capacity: usize,
}

impl Batch {
    pub fn new(cliques: Vec<Clique>, capacity: usize) -> Result<Self, KernelError> {
        if cliques.is_empty() {
            return Err(KernelError::EmptyBatch);
        }
        if cliques.len() > capacity {
            return Err(KernelError::OverCapacity {
                len: cliques.len(),
                capacity,
            });
        }
        debug_assert!(
            cliques
                .iter()
                .enumerate()
                .all(|(a, x)| cliques[..a].iter().all(|y| y != x)),
            "batch members must be distinct"
        );
        Ok(Batch { cliques, capacity })
    }

    pub fn cliques(&self) -> &[Clique] {
        &self.cliques
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }
}

/// A parent and the ascending indices `i` whose `child(parent, i)` is a child
/// of `parent` in the reverse-search tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChildSpec {
    pub parent: Clique,
    pub indices: Vec<usize>,
}

impl ChildSpec {
    pub fn children(&self, g: &Graph) -> Vec<Clique> {
        self.indices
            .iter()
            .map(|&i| rs_tree::child(g, &self.parent, i))
            .collect()
    }
}

/// Good-pair table of a batch. `rows[k * n + (i - 1)]` is the set of `j`
/// with `(i, j)` good for the `k`-th parent.
#[derive(Clone, PartialEq, Eq)]
pub struct GoodTable {
    n: usize,
    batch_len: usize,
    rows: Vec<VertexSet>,
}

impl GoodTable {
    fn new(n: usize, batch_len: usize) -> Self {
        GoodTable {
            n,
            batch_len,
            rows: vec![VertexSet::empty(n); n * batch_len],
        }
    }

    pub fn batch_len(&self) -> usize {
        self.batch_len
    }

    /// `k` is a 0-based batch position; `i`, `j` are vertices.
    pub fn get(&self, k: usize, i: usize, j: usize) -> bool {
        self.rows[k * self.n + (i - 1)].contains(j)
    }

    /// The `n` rows belonging to batch position `k`, indexed by `i - 1`.
    pub fn slice(&self, k: usize) -> &[VertexSet] {
        &self.rows[k * self.n..(k + 1) * self.n]
    }
}

impl fmt::Debug for GoodTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_list();
        for k in 0..self.batch_len {
            let pairs: Vec<(usize, usize)> = (1..=self.n)
                .flat_map(|i| self.slice(k)[i - 1].iter().map(move |j| (i, j)))
                .collect();
            d.entry(&pairs);
        }
        d.finish()
    }
}

/// Which children-generation strategy to run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Kernel {
    Naive,
    #[default]
    Rectangular,
    Bitset,
}

impl Kernel {
    pub const ALL: [Kernel; 3] = [Kernel::Naive, Kernel::Rectangular, Kernel::Bitset];

    pub fn name(self) -> &'static str {
        match self {
            Kernel::Naive => "naive",
            Kernel::Rectangular => "rect",
            Kernel::Bitset => "bitset",
        }
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kernel {
    type Err = KernelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "naive" => Ok(Kernel::Naive),
            "rect" | "rectangular" => Ok(Kernel::Rectangular),
            "bitset" => Ok(Kernel::Bitset),
            other => Err(KernelError::UnknownKernel(other.to_string())),
        }
    }
}

/// `A_i ∖ B_j = (V_{<i} ∩ Γ(i)) ∖ Γ(j)`.
fn family_member(g: &Graph, i: usize, j: usize) -> VertexSet {
    g.prefix_neighbors(i).difference(g.neighborhood(j))
}

/// `M_B` (`|B| × n`, row `k` = `x(P_k)`) and `M_G` (`n × n²`, column
/// `(i - 1) * n + (j - 1)` = `x(A_i ∖ B_j)`).
pub fn build_batch_matrices(g: &Graph, batch: &Batch) -> (DenseMatrix, DenseMatrix) {
    (batch_matrix(g, batch.cliques()), graph_matrix(g))
}

fn batch_matrix(g: &Graph, cliques: &[Clique]) -> DenseMatrix {
    let n = g.n();
    let mut mb = DenseMatrix::zeros(cliques.len(), n);
    for (k, p) in cliques.iter().enumerate() {
        for v in p.iter() {
            mb.set(k, v - 1, 1);
        }
    }
    mb
}

fn graph_matrix(g: &Graph) -> DenseMatrix {
    let n = g.n();
    let mut mg = DenseMatrix::zeros(n, n * n);
    for i in 1..=n {
        for j in 1..=n {
            for u in family_member(g, i, j).iter() {
                mg.set(u - 1, (i - 1) * n + (j - 1), 1);
            }
        }
    }
    mg
}

fn table_from_bits(n: usize, batch_len: usize, bits: &BitMatrix) -> GoodTable {
    let mut table = GoodTable::new(n, batch_len);
    for k in 0..batch_len {
        for i in 1..=n {
            let row = &mut table.rows[k * n + (i - 1)];
            for j in 1..=n {
                if bits.get(k, (i - 1) * n + (j - 1)) {
                    row.insert(j);
                }
            }
        }
    }
    table
}

/// Good-pair table through the matrix product `M_B · M_G`.
pub fn good_table_rectangular(g: &Graph, batch: &Batch) -> GoodTable {
    good_table_rectangular_with(g, batch, Backend::default(), &mut WorkMeter::new())
}

pub fn good_table_rectangular_with(g: &Graph, batch: &Batch, backend: Backend, meter: &mut WorkMeter) -> GoodTable {
    let (mb, mg) = build_batch_matrices(g, batch);
    let positive = matmul::multiply_boolean_threshold_with(&mb, &mg, backend, meter)
        .expect("M_B has n columns and M_G has n rows");
    table_from_bits(g.n(), batch.len(), &positive)
}

/// Good-pair table through bit-vector intersections `x(P_k) ∧ x(S_{i,j})`.
pub fn good_table_bitset(g: &Graph, batch: &Batch) -> GoodTable {
    good_table_bitset_metered(g, batch.cliques(), &mut WorkMeter::new())
}

fn good_table_bitset_metered(g: &Graph, cliques: &[Clique], meter: &mut WorkMeter) -> GoodTable {
    let n = g.n();
    let mut table = GoodTable::new(n, cliques.len());
    for i in 1..=n {
        let a_i = g.prefix_neighbors(i);
        if a_i.is_empty() {
            continue;
        }
        let family: Vec<VertexSet> = (1..=n).map(|j| a_i.difference(g.neighborhood(j))).collect();
        for (k, p) in cliques.iter().enumerate() {
            let row = &mut table.rows[k * n + (i - 1)];
            for (j, s) in family.iter().enumerate() {
                if p.verts().intersects(s) {
                    row.insert(j + 1);
                }
            }
        }
        meter.charge(((cliques.len() + 1) * n * g.row_words()) as u64);
    }
    table
}

/// `J_P = { j : P_{<j} ⊆ Γ(j) }`.
fn prefix_complete_set(g: &Graph, p: &VertexSet, meter: &mut WorkMeter) -> VertexSet {
    let mut out = g.empty_set();
    for j in g.vertices() {
        if p.restrict_below(j).is_subset(g.neighborhood(j)) {
            out.insert(j);
        }
    }
    meter.charge((g.n() * g.row_words()) as u64);
    out
}

/// Turn the good-pair rows of parent `p` into its child indices.
///
/// `i` is accepted iff `i ∉ P`, `i > i(P)`, and no `j < i` with `(i, j)` not
/// good satisfies either
/// `j ∉ P_{<i} ∩ Γ(i)` and `{j, i} ∈ E`, or `j ∉ P` and `j ∈ J_P`.
pub fn filter_children(g: &Graph, p: &Clique, good_rows: &[VertexSet]) -> ChildSpec {
    filter_children_metered(g, p, good_rows, &mut WorkMeter::new())
}

fn filter_children_metered(g: &Graph, p: &Clique, good_rows: &[VertexSet], meter: &mut WorkMeter) -> ChildSpec {
    assert_eq!(good_rows.len(), g.n(), "one good row per vertex");
    let pv = p.verts();
    let j_p = prefix_complete_set(g, pv, meter);
    let start = rs_tree::clique_index_metered(g, p, meter).unwrap_or(0) + 1;
    let outside_j = j_p.difference(pv);
    let mut indices = Vec::new();
    for i in start..=g.n() {
        if pv.contains(i) {
            continue;
        }
        let gamma_i = g.neighborhood(i);
        let a = pv.restrict_below(i).intersection(gamma_i);
        let mut bad = gamma_i.difference(&a);
        bad.union_with(&outside_j);
        bad.intersect_with(&VertexSet::below(g.n(), i));
        bad.difference_with(&good_rows[i - 1]);
        meter.charge(6 * g.row_words() as u64);
        if bad.is_empty() {
            indices.push(i);
        }
    }
    ChildSpec {
        parent: p.clone(),
        indices,
    }
}

/// Children of `p` by testing both reconstructability conditions with
/// explicit lexicographic completions:
/// (a) `P_{<i} = lc(P_{<i} ∩ Γ(i))_{<i}` and
/// (b) `lc((P_{<i} ∩ Γ(i)) ∪ {i})_{<i} = P_{<i} ∩ Γ(i)`.
pub fn children_naive(g: &Graph, p: &Clique) -> ChildSpec {
    children_naive_metered(g, p, &mut WorkMeter::new())
}

fn children_naive_metered(g: &Graph, p: &Clique, meter: &mut WorkMeter) -> ChildSpec {
    let pv = p.verts();
    let start = rs_tree::clique_index_metered(g, p, meter).unwrap_or(0) + 1;
    let mut indices = Vec::new();
    for i in start..=g.n() {
        if pv.contains(i) {
            continue;
        }
        let p_below = pv.restrict_below(i);
        let a = p_below.intersection(g.neighborhood(i));
        let cond_a = rs_tree::lex_completion_metered(g, &a, meter).verts().restrict_below(i) == p_below;
        if !cond_a {
            continue;
        }
        let mut seed = a.clone();
        seed.insert(i);
        let cond_b = rs_tree::lex_completion_metered(g, &seed, meter)
            .verts()
            .restrict_below(i)
            == a;
        if cond_b {
            indices.push(i);
        }
    }
    ChildSpec {
        parent: p.clone(),
        indices,
    }
}

/// One [`ChildSpec`] per batch element, in batch order.
pub fn children_batch(g: &Graph, batch: &Batch, kernel: Kernel) -> Vec<ChildSpec> {
    ChildGenerator::new(g, kernel).children(batch.cliques(), &mut WorkMeter::new())
}

/// Children generator bound to one graph, caching the per-graph half of the
/// reduction (the packed columns of `M_G`).
#[derive(Clone, Debug)]
pub struct ChildGenerator<'g> {
    graph: &'g Graph,
    kernel: Kernel,
    backend: Backend,
    packed_mg: Option<BitMatrix>,
}

impl<'g> ChildGenerator<'g> {
    pub fn new(graph: &'g Graph, kernel: Kernel) -> Self {
        Self::with_backend(graph, kernel, Backend::default())
    }

    pub fn with_backend(graph: &'g Graph, kernel: Kernel, backend: Backend) -> Self {
        let packed_mg =
            (kernel == Kernel::Rectangular && backend == Backend::BitPacked).then(|| pack_graph_columns(graph));
        ChildGenerator {
            graph,
            kernel,
            backend,
            packed_mg,
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn kernel(&self) -> Kernel {
        self.kernel
    }

    /// Children of every clique in `batch`, charging the work to `meter`.
    pub fn children(&self, batch: &[Clique], meter: &mut WorkMeter) -> Vec<ChildSpec> {
        let g = self.graph;
        match self.kernel {
            Kernel::Naive => batch.iter().map(|p| children_naive_metered(g, p, meter)).collect(),
            Kernel::Rectangular => {
                let table = match &self.packed_mg {
                    Some(mg_cols) => {
                        let mut mb_rows = BitMatrix::zeros(batch.len(), g.n());
                        for (k, p) in batch.iter().enumerate() {
                            for v in p.iter() {
                                mb_rows.set(k, v - 1);
                            }
                        }
                        meter.charge((batch.len() * g.row_words()) as u64);
                        let bits = matmul::packed_positive(&mb_rows, mg_cols, meter);
                        table_from_bits(g.n(), batch.len(), &bits)
                    }
                    None => {
                        let mb = batch_matrix(g, batch);
                        let mg = graph_matrix(g);
                        let bits = matmul::multiply_boolean_threshold_with(&mb, &mg, self.backend, meter)
                            .expect("M_B has n columns and M_G has n rows");
                        table_from_bits(g.n(), batch.len(), &bits)
                    }
                };
                self.filter_all(batch, &table, meter)
            }
            Kernel::Bitset => {
                let table = good_table_bitset_metered(g, batch, meter);
                self.filter_all(batch, &table, meter)
            }
        }
    }

    fn filter_all(&self, batch: &[Clique], table: &GoodTable, meter: &mut WorkMeter) -> Vec<ChildSpec> {
        batch
            .iter()
            .enumerate()
            .map(|(k, p)| filter_children_metered(self.graph, p, table.slice(k), meter))
            .collect()
    }
}

/// Columns of `M_G` packed as bit rows (one per `(i, j)`).
fn pack_graph_columns(g: &Graph) -> BitMatrix {
    let n = g.n();
    let mut cols = BitMatrix::zeros(n * n, n);
    for i in 1..=n {
        for j in 1..=n {
            for u in family_member(g, i, j).iter() {
                cols.set((i - 1) * n + (j - 1), u - 1);
            }
        }
    }
    cols
}
