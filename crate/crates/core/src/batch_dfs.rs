//! Batch depth-first traversal of the reverse-search tree.
//!
//! The backtracking stack holds `(parent, pending indices)` pairs rather
//! than expanded cliques; a clique is materialized only when it is popped.
//! Each iteration pops up to `capacity` cliques, emits them, asks the
//! children function for all their children at once, and pushes the
//! resulting specs.
//!
//! [`Traversal`] exposes the run as a resumable stream of [`StepEvent`]s,
//! each carrying the work units spent since the previous event.

use thiserror::Error;

use crate::cost::WorkMeter;
use crate::graph::Graph;
use crate::kernels::{ChildGenerator, ChildSpec};
use crate::rs_tree::{self, Clique};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DfsError {
    #[error("pop from an empty backtracking stack")]
    EmptyStack,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Entry {
    Single(Clique),
    // indices kept descending so the smallest pending index pops first
    Children { parent: Clique, rest: Vec<usize> },
}

/// LIFO stack of pending children, stored compressed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BacktrackStack {
    entries: Vec<Entry>,
    pending: usize,
}

impl BacktrackStack {
    pub fn new() -> Self {
        Self::default()
    }

    /// Stack holding just an explicit clique (the traversal root).
    pub fn with_root(root: Clique) -> Self {
        BacktrackStack {
            entries: vec![Entry::Single(root)],
            pending: 1,
        }
    }

    /// Push a spec; specs without indices are dropped.
    pub fn push(&mut self, spec: ChildSpec) {
        if spec.indices.is_empty() {
            return;
        }
        debug_assert!(spec.indices.windows(2).all(|w| w[0] < w[1]));
        self.pending += spec.indices.len();
        let mut rest = spec.indices;
        rest.reverse();
        self.entries.push(Entry::Children {
            parent: spec.parent,
            rest,
        });
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of cliques still represented on the stack.
    pub fn pending_cliques(&self) -> usize {
        self.pending
    }

    /// Number of stack entries.
    pub fn depth(&self) -> usize {
        self.entries.len()
    }

    /// The top entry as a spec (parent plus ascending pending indices).
    pub fn peek(&self) -> Option<ChildSpec> {
        match self.entries.last()? {
            Entry::Single(c) => Some(ChildSpec {
                parent: c.clone(),
                indices: Vec::new(),
            }),
            Entry::Children { parent, rest } => Some(ChildSpec {
                parent: parent.clone(),
                indices: rest.iter().rev().copied().collect(),
            }),
        }
    }

    /// Take the smallest pending index `î` of the top spec (dropping the
    /// spec once it runs dry) and build `child(P, î)`.
    pub fn pop_from_top(&mut self, g: &Graph) -> Result<Clique, DfsError> {
        self.pop_from_top_metered(g, &mut WorkMeter::new())
    }

    pub(crate) fn pop_from_top_metered(&mut self, g: &Graph, meter: &mut WorkMeter) -> Result<Clique, DfsError> {
        let top = self.entries.last_mut().ok_or(DfsError::EmptyStack)?;
        self.pending -= 1;
        match top {
            Entry::Single(_) => match self.entries.pop() {
                Some(Entry::Single(c)) => Ok(c),
                _ => unreachable!(),
            },
            Entry::Children { parent, rest } => {
                let i = rest.pop().expect("specs on the stack are non-empty");
                let c = rs_tree::child_metered(g, parent, i, meter);
                if rest.is_empty() {
                    self.entries.pop();
                }
                Ok(c)
            }
        }
    }
}

/// Something that maps a batch of parents to their child specs, in batch
/// order.
pub trait ChildrenFn {
    fn children(&mut self, batch: &[Clique], meter: &mut WorkMeter) -> Vec<ChildSpec>;
}

impl ChildrenFn for ChildGenerator<'_> {
    fn children(&mut self, batch: &[Clique], meter: &mut WorkMeter) -> Vec<ChildSpec> {
        ChildGenerator::children(self, batch, meter)
    }
}

impl<F> ChildrenFn for F
where
    F: FnMut(&[Clique], &mut WorkMeter) -> Vec<ChildSpec>,
{
    fn children(&mut self, batch: &[Clique], meter: &mut WorkMeter) -> Vec<ChildSpec> {
        self(batch, meter)
    }
}

/// One observable step of the traversal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepEvent {
    /// A clique was popped into the current batch (and is emitted).
    CliqueCollected { clique: Clique, cost: u64 },
    /// Children of the current batch were computed and pushed.
    BatchCompleted { batch_size: usize, cost: u64 },
    /// The stack is empty; always the last event.
    TraversalEnded { cost: u64 },
}

impl StepEvent {
    pub fn cost(&self) -> u64 {
        match *self {
            StepEvent::CliqueCollected { cost, .. }
            | StepEvent::BatchCompleted { cost, .. }
            | StepEvent::TraversalEnded { cost } => cost,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TraversalStats {
    pub batches_total: usize,
    /// Batches that stopped short of capacity because the stack drained.
    pub batches_undersized: usize,
    /// Peak number of pending cliques on the stack.
    pub max_stack_cliques: usize,
    pub cliques_emitted: usize,
}

/// Resumable batch-DFS run.
pub struct Traversal<'g, F> {
    graph: &'g Graph,
    children_fn: F,
    capacity: usize,
    stack: BacktrackStack,
    batch: Vec<Clique>,
    meter: WorkMeter,
    stats: TraversalStats,
    ended: bool,
}

impl<'g, F: ChildrenFn> Traversal<'g, F> {
    pub fn new(graph: &'g Graph, root: Clique, children_fn: F, capacity: usize) -> Self {
        assert!(capacity >= 1, "batch capacity must be positive");
        Traversal {
            graph,
            children_fn,
            capacity,
            stack: BacktrackStack::with_root(root),
            batch: Vec::with_capacity(capacity.min(1 << 16)),
            meter: WorkMeter::new(),
            stats: TraversalStats {
                max_stack_cliques: 1,
                ..TraversalStats::default()
            },
            ended: false,
        }
    }

    /// Work already spent (e.g. building the root), reported with the
    /// first event.
    pub fn with_initial_cost(mut self, units: u64) -> Self {
        self.meter.charge(units);
        self
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn stats(&self) -> TraversalStats {
        self.stats
    }

    pub fn stack_cliques(&self) -> usize {
        self.stack.pending_cliques()
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    fn step(&mut self) -> Option<StepEvent> {
        if self.ended {
            return None;
        }
        if self.batch.len() < self.capacity && !self.stack.is_empty() {
            let clique = self
                .stack
                .pop_from_top_metered(self.graph, &mut self.meter)
                .expect("stack checked non-empty");
            self.batch.push(clique.clone());
            self.stats.cliques_emitted += 1;
            return Some(StepEvent::CliqueCollected {
                clique,
                cost: self.meter.take(),
            });
        }
        if self.batch.is_empty() {
            self.ended = true;
            return Some(StepEvent::TraversalEnded {
                cost: self.meter.take(),
            });
        }
        let batch_size = self.batch.len();
        if batch_size < self.capacity {
            self.stats.batches_undersized += 1;
        }
        self.stats.batches_total += 1;
        let specs = self.children_fn.children(&self.batch, &mut self.meter);
        debug_assert_eq!(specs.len(), batch_size);
        // first batch member's children end up on top
        for spec in specs.into_iter().rev() {
            self.meter.charge(spec.indices.len() as u64 + 1);
            self.stack.push(spec);
        }
        self.stats.max_stack_cliques = self.stats.max_stack_cliques.max(self.stack.pending_cliques());
        self.batch.clear();
        Some(StepEvent::BatchCompleted {
            batch_size,
            cost: self.meter.take(),
        })
    }
}

impl<F: ChildrenFn> Iterator for Traversal<'_, F> {
    type Item = StepEvent;

    fn next(&mut self) -> Option<StepEvent> {
        self.step()
    }
}

/// Run a full traversal, handing every emitted clique to `sink`.
pub fn batch_dfs<F, S>(g: &Graph, root: Clique, children_fn: F, capacity: usize, mut sink: S) -> TraversalStats
where
    F: ChildrenFn,
    S: FnMut(&Clique),
{
    let mut t = Traversal::new(g, root, children_fn, capacity);
    for event in t.by_ref() {
        if let StepEvent::CliqueCollected { clique, .. } = &event {
            sink(clique);
        }
    }
    t.stats()
}
