//! Listing drivers: plain batch-DFS listing and the strict-delay scheduler.
//!
//! The strict scheduler replays the plain traversal event by event. Every
//! collected clique goes to a FIFO queue instead of the output. A boot phase
//! fills the queue with at least `T` cliques (finishing the current batch),
//! and from then on one clique is printed whenever `tau_delay` work units
//! have accrued since the last print, or whenever the queue grows past
//! `T + n²`. The queue is drained once the traversal ends.

use std::collections::VecDeque;

use thiserror::Error;

use crate::batch_dfs::{StepEvent, Traversal, TraversalStats};
use crate::cost::WorkMeter;
use crate::graph::Graph;
use crate::kernels::{ChildGenerator, Kernel};
use crate::rs_tree::{self, Clique};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DelayError {
    #[error("tau_delay must be at least 1")]
    ZeroDelay,
    #[error("boot target must be at least 1")]
    ZeroBootTarget,
}

/// Default batch capacity `n²` (at least 1).
pub fn default_capacity(g: &Graph) -> usize {
    (g.n() * g.n()).max(1)
}

/// Start the plain listing: build the root, then batch-DFS with the chosen
/// kernel. The returned traversal is the event stream.
pub fn list_mc(g: &Graph, kernel: Kernel, capacity: usize) -> Traversal<'_, ChildGenerator<'_>> {
    let mut meter = WorkMeter::new();
    let root = rs_tree::lex_completion_metered(g, &g.empty_set(), &mut meter);
    Traversal::new(g, root, ChildGenerator::new(g, kernel), capacity).with_initial_cost(meter.units())
}

/// FIFO of cliques awaiting output.
#[derive(Clone, Debug, Default)]
pub struct EmissionQueue {
    items: VecDeque<(u64, Clique)>,
    next_seq: u64,
    high_water: usize,
}

impl EmissionQueue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, c: Clique) {
        self.items.push_back((self.next_seq, c));
        self.next_seq += 1;
        self.high_water = self.high_water.max(self.items.len());
    }

    /// Remove the head, returning it with its insertion ordinal.
    pub fn pop(&mut self) -> Option<(u64, Clique)> {
        self.items.pop_front()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn high_water(&self) -> usize {
        self.high_water
    }
}

/// Scheduler parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DelayConfig {
    /// Work units between guaranteed prints.
    pub tau_delay: u64,
    /// Cliques to queue before the first print.
    pub boot_target: usize,
}

impl DelayConfig {
    pub fn new(tau_delay: u64, boot_target: usize) -> Result<Self, DelayError> {
        if tau_delay == 0 {
            return Err(DelayError::ZeroDelay);
        }
        if boot_target == 0 {
            return Err(DelayError::ZeroBootTarget);
        }
        Ok(DelayConfig { tau_delay, boot_target })
    }

    /// Calibrate on the input graph with unit multipliers.
    pub fn calibrated(g: &Graph, kernel: Kernel, capacity: usize) -> Calibration {
        calibrate(g, kernel, capacity, 1, 1)
    }
}

/// Outcome of a calibration pass.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Calibration {
    pub config: DelayConfig,
    /// Largest `⌈cost / size⌉` over batches that reached capacity (over all
    /// batches when none did).
    pub amortized_batch_cost: u64,
    /// Largest single-batch cost among undersized batches.
    pub max_undersized_cost: u64,
    pub batches: usize,
}

/// Measure a dry run of the plain traversal and derive the schedule.
///
/// Each batch iteration is charged the cost of its collection events plus
/// its children computation. Then
/// `tau_delay = c0 · max ⌈cost_b / |B_b|⌉` over full batches, so a full
/// batch never prints more cliques than it queues, and
/// `T = c1 · (n · ⌈max undersized cost / tau_delay⌉ + 1)`, enough slack
/// for the at most `n` undersized batches.
pub fn calibrate(g: &Graph, kernel: Kernel, capacity: usize, c0: u64, c1: u64) -> Calibration {
    let c0 = c0.max(1);
    let c1 = c1.max(1);
    let mut full = 0u64;
    let mut any = 0u64;
    let mut undersized = 0u64;
    let mut batches = 0;
    let mut acc = 0u64;
    for event in list_mc(g, kernel, capacity) {
        acc += event.cost();
        if let StepEvent::BatchCompleted { batch_size, .. } = event {
            let amortized = acc.div_ceil(batch_size as u64);
            any = any.max(amortized);
            if batch_size == capacity {
                full = full.max(amortized);
            } else {
                undersized = undersized.max(acc);
            }
            batches += 1;
            acc = 0;
        }
    }
    let amortized = if full > 0 { full } else { any }.max(1);
    let tau_delay = c0 * amortized;
    let boot_target = (c1 as usize) * (g.n() * (undersized.div_ceil(tau_delay) as usize) + 1);
    Calibration {
        config: DelayConfig { tau_delay, boot_target },
        amortized_batch_cost: amortized,
        max_undersized_cost: undersized,
        batches,
    }
}

/// Where boot stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BootOutcome {
    pub events: usize,
    pub cost: u64,
    /// The event stream ended during boot.
    pub exhausted: bool,
}

/// Consume events into `q` until it holds at least `target` cliques and the
/// current batch iteration has completed, or the stream ends. Prints
/// nothing.
pub fn boot<I>(events: &mut I, q: &mut EmissionQueue, target: usize) -> BootOutcome
where
    I: Iterator<Item = StepEvent>,
{
    let mut out = BootOutcome {
        events: 0,
        cost: 0,
        exhausted: false,
    };
    for event in events.by_ref() {
        out.events += 1;
        out.cost += event.cost();
        match event {
            StepEvent::CliqueCollected { clique, .. } => q.push(clique),
            StepEvent::BatchCompleted { .. } if q.len() >= target => return out,
            StepEvent::BatchCompleted { .. } => {}
            StepEvent::TraversalEnded { .. } => {
                out.exhausted = true;
                return out;
            }
        }
    }
    out.exhausted = true;
    out
}

/// Phase in which a print happened.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrintPhase {
    /// Triggered by the accrued-work check.
    Delay,
    /// Triggered by the `|Q| > T + n²` guard.
    Forced,
    /// Final drain after the traversal ended.
    Drain,
}

/// One output line of the strict scheduler.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrintRecord {
    /// 1-based print ordinal.
    pub ordinal: usize,
    pub clique: Clique,
    /// Insertion ordinal of the clique in the queue.
    pub queue_seq: u64,
    /// Work units since the previous print (or since boot ended).
    pub cost_since_last: u64,
    /// Queue length after removing this clique.
    pub queue_size: usize,
    pub stack_cliques: usize,
    /// Index of the traversal event after which the print happened.
    pub event_index: usize,
    pub phase: PrintPhase,
}

/// Summary of a strict-mode run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictReport {
    pub config: DelayConfig,
    pub boot: BootOutcome,
    pub prints: usize,
    pub queue_high_water: usize,
    /// Largest single event cost seen after boot.
    pub max_event_cost_after_boot: u64,
    /// Checks where the delay had elapsed but the queue was empty.
    pub starved_checks: usize,
    pub traversal: TraversalStats,
    pub total_cost: u64,
}

/// Strict-delay listing. `emit` sees every print in output order.
pub fn run_strict<E>(g: &Graph, cfg: DelayConfig, kernel: Kernel, capacity: usize, emit: E) -> StrictReport
where
    E: FnMut(&PrintRecord),
{
    run_strict_limited(g, cfg, kernel, capacity, None, emit)
}

/// [`run_strict`] that stops after `limit` prints when given.
pub fn run_strict_limited<E>(
    g: &Graph,
    cfg: DelayConfig,
    kernel: Kernel,
    capacity: usize,
    limit: Option<usize>,
    mut emit: E,
) -> StrictReport
where
    E: FnMut(&PrintRecord),
{
    let limit = limit.unwrap_or(usize::MAX);
    let mut t = list_mc(g, kernel, capacity);
    let mut q = EmissionQueue::new();
    let boot = boot(&mut t, &mut q, cfg.boot_target);
    let force_above = cfg.boot_target + g.n() * g.n();
    let mut counter = 0u64;
    let mut ordinal = 0usize;
    let mut event_index = boot.events;
    let mut max_event = 0u64;
    let mut starved = 0usize;
    let mut total = boot.cost;

    let mut print = |q: &mut EmissionQueue, counter: u64, stack: usize, event_index: usize, phase: PrintPhase| {
        let (seq, clique) = q.pop().expect("print from a non-empty queue");
        ordinal += 1;
        let record = PrintRecord {
            ordinal,
            clique,
            queue_seq: seq,
            cost_since_last: counter,
            queue_size: q.len(),
            stack_cliques: stack,
            event_index,
            phase,
        };
        emit(&record);
        ordinal
    };

    let mut printed = 0;
    if !boot.exhausted && limit > 0 {
        while let Some(event) = t.next() {
            event_index += 1;
            let cost = event.cost();
            total += cost;
            counter += cost;
            max_event = max_event.max(cost);
            if let StepEvent::CliqueCollected { clique, .. } = event {
                q.push(clique);
            }
            let delay_due = counter >= cfg.tau_delay;
            if delay_due && q.is_empty() {
                starved += 1;
            }
            if (delay_due && !q.is_empty()) || q.len() > force_above {
                let phase = if delay_due {
                    PrintPhase::Delay
                } else {
                    PrintPhase::Forced
                };
                printed = print(&mut q, counter, t.stack_cliques(), event_index, phase);
                counter = 0;
                if printed >= limit {
                    break;
                }
            }
        }
    }
    while !q.is_empty() && printed < limit {
        printed = print(&mut q, counter, t.stack_cliques(), event_index, PrintPhase::Drain);
        counter = 0;
    }

    StrictReport {
        config: cfg,
        boot,
        prints: printed,
        queue_high_water: q.high_water(),
        max_event_cost_after_boot: max_event,
        starved_checks: starved,
        traversal: t.stats(),
        total_cost: total,
    }
}

/// One emission of the plain listing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmissionRecord {
    pub ordinal: usize,
    pub clique: Clique,
    /// Work units since the previous emission (since start for the first).
    pub cost_since_last: u64,
    pub stack_cliques: usize,
}

/// Plain listing: emit cliques as the traversal collects them. Stops after
/// `limit` emissions when given.
pub fn run_plain<E>(g: &Graph, kernel: Kernel, capacity: usize, limit: Option<usize>, mut emit: E) -> TraversalStats
where
    E: FnMut(&EmissionRecord),
{
    let mut t = list_mc(g, kernel, capacity);
    let mut counter = 0u64;
    let mut ordinal = 0;
    while let Some(event) = t.next() {
        counter += event.cost();
        if let StepEvent::CliqueCollected { clique, .. } = event {
            ordinal += 1;
            emit(&EmissionRecord {
                ordinal,
                clique,
                cost_since_last: counter,
                stack_cliques: t.stack_cliques(),
            });
            counter = 0;
            if limit.is_some_and(|x| ordinal >= x) {
                break;
            }
        }
    }
    t.stats()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{edgeless, gnp, moon_moser, running_example};
    use crate::oracle;

    #[test]
    fn list_mc_examples() {
        let g = running_example();
        let got: Vec<_> = list_mc(&g, Kernel::Rectangular, default_capacity(&g))
            .filter_map(|e| match e {
                StepEvent::CliqueCollected { clique, .. } => Some(clique),
                _ => None,
            })
            .collect();
        assert_eq!(got.len(), 5);
        assert!(oracle::compare_emissions(&got, &oracle::all_maximal_cliques(&g).unwrap()).is_exact());

        let single = edgeless(1);
        let n_events = list_mc(&single, Kernel::Naive, 1)
            .filter(|e| matches!(e, StepEvent::CliqueCollected { .. }))
            .count();
        assert_eq!(n_events, 1);

        let mm = moon_moser(9);
        let count = list_mc(&mm, Kernel::Bitset, default_capacity(&mm))
            .filter(|e| matches!(e, StepEvent::CliqueCollected { .. }))
            .count();
        assert_eq!(count, 27);
    }

    #[test]
    fn boot_fills_without_printing() {
        let g = running_example();
        let mut t = list_mc(&g, Kernel::Naive, 2);
        let mut q = EmissionQueue::new();
        let out = boot(&mut t, &mut q, 3);
        assert!(q.len() >= 3);
        assert!(!out.exhausted);

        let mut t = list_mc(&g, Kernel::Naive, 2);
        let mut q = EmissionQueue::new();
        let out = boot(&mut t, &mut q, 1);
        // the first batch is just the root
        assert_eq!((q.len(), out.events), (1, 2));

        let mut t = list_mc(&g, Kernel::Naive, 2);
        let mut q = EmissionQueue::new();
        let out = boot(&mut t, &mut q, 100);
        assert!(out.exhausted);
        assert_eq!(q.len(), 5);
    }

    #[test]
    fn strict_prints_everything_once() {
        let g = running_example();
        let all = oracle::all_maximal_cliques(&g).unwrap();
        for (tau, target) in [(10, 2), (1, 1), (1_000_000, 1), (3, 100)] {
            let cfg = DelayConfig::new(tau, target).unwrap();
            let mut printed = Vec::new();
            let report = run_strict(&g, cfg, Kernel::Rectangular, 2, |r| printed.push(r.clone()));
            let cliques: Vec<_> = printed.iter().map(|r| r.clique.clone()).collect();
            assert!(oracle::compare_emissions(&cliques, &all).is_exact());
            assert_eq!(report.prints, 5);
            for (k, r) in printed.iter().enumerate() {
                assert_eq!(r.queue_seq, k as u64);
                assert!(r.event_index >= report.boot.events);
            }
            assert!(report.queue_high_water <= target + 64 + 1);
        }
    }

    #[test]
    fn config_validation() {
        assert_eq!(DelayConfig::new(0, 1), Err(DelayError::ZeroDelay));
        assert_eq!(DelayConfig::new(1, 0), Err(DelayError::ZeroBootTarget));
    }

    #[test]
    fn calibrated_runs_never_starve() {
        for seed in 0..20 {
            let g = gnp(12, 0.5, seed);
            for capacity in [1, 2, 12, 144] {
                let cal = DelayConfig::calibrated(&g, Kernel::Rectangular, capacity);
                let report = run_strict(&g, cal.config, Kernel::Rectangular, capacity, |_| {});
                assert_eq!(report.starved_checks, 0, "seed {seed} capacity {capacity}");
            }
        }
    }

    #[test]
    fn strict_limit_truncates() {
        let g = running_example();
        for limit in [0, 1, 2, 5, 9] {
            let cfg = DelayConfig::new(5, 2).unwrap();
            let mut n = 0;
            let report = run_strict_limited(&g, cfg, Kernel::Naive, 2, Some(limit), |_| n += 1);
            assert_eq!(n, limit.min(5));
            assert_eq!(report.prints, n);
        }
    }

    #[test]
    fn plain_limit_truncates() {
        let g = running_example();
        let mut n = 0;
        run_plain(&g, Kernel::Naive, 4, Some(2), |_| n += 1);
        assert_eq!(n, 2);
    }
}
