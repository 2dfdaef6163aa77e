//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mcl_core::generators::{complete, edgeless, gnp, moon_moser, running_example};
use mcl_core::kernels::{good_table_bitset, good_table_rectangular};
use mcl_core::matmul::{multiply_boolean_threshold_with, multiply_with};
use mcl_core::oracle::{self, all_maximal_cliques, good_pair_oracle};
use mcl_core::rs_tree::{clique_index, lex_completion, parent};
use mcl_core::{
    calibrate, default_capacity, list_mc, run_plain, run_strict, Backend, Batch, Clique, DenseMatrix, Graph, Kernel,
    StepEvent, VertexSet, WorkMeter,
};

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

fn capacities(n: usize) -> [usize; 4] {
    [1, 2, n.max(1), (n * n).max(1)]
}

fn criterion_graphs() -> Vec<Graph> {
    let ps = [0.2, 0.5, 0.8];
    (0..200u64)
        .map(|k| {
            let n = 6 + (k as usize % 11);
            gnp(n, ps[(k / 11) as usize % 3], 1_000 + k)
        })
        .collect()
}

/// Per-run facts reused by criteria 1, 6 and 7.
#[derive(Default)]
struct RunLog {
    runs: usize,
    mismatches: Vec<String>,
    stack_violations: Vec<String>,
    undersized_violations: Vec<String>,
    strict_runs: usize,
    strict_violations: Vec<String>,
    max_stack_ratio: f64,
    max_undersized: usize,
}

fn check_strict(g: &Graph, kernel: Kernel, capacity: usize, log: &mut RunLog, label: &str) -> Vec<Clique> {
    let n = g.n();
    let cfg = calibrate(g, kernel, capacity, 1, 1).config;
    let mut prints = Vec::new();
    let report = run_strict(g, cfg, kernel, capacity, |r| prints.push(r.clone()));
    log.strict_runs += 1;

    let mut problems = Vec::new();
    if prints.iter().any(|r| r.event_index < report.boot.events) {
        problems.push("print during boot".to_string());
    }
    if report.queue_high_water > cfg.boot_target + n * n + 1 {
        problems.push(format!(
            "queue {} > T + n² + 1 = {}",
            report.queue_high_water,
            cfg.boot_target + n * n + 1
        ));
    }
    if prints.iter().enumerate().any(|(k, r)| r.queue_seq != k as u64) {
        problems.push("print order differs from insertion order".to_string());
    }
    let gap_bound = cfg.tau_delay + report.max_event_cost_after_boot;
    if let Some(r) = prints.iter().find(|r| r.cost_since_last > gap_bound) {
        problems.push(format!(
            "gap {} before print {} ({:?}) exceeds {}",
            r.cost_since_last, r.ordinal, r.phase, gap_bound
        ));
    }
    if !problems.is_empty() {
        log.strict_violations.push(format!("{label}: {}", problems.join("; ")));
    }
    log.check_stats(g, capacity, &report.traversal, label);
    prints.into_iter().map(|r| r.clique).collect()
}

impl RunLog {
    fn check_stats(&mut self, g: &Graph, capacity: usize, s: &mcl_core::TraversalStats, label: &str) {
        let n = g.n();
        let stack_bound = (n * n * capacity).max(1);
        if s.max_stack_cliques > stack_bound {
            self.stack_violations
                .push(format!("{label}: stack {} > {stack_bound}", s.max_stack_cliques));
        }
        if s.batches_undersized > n.max(1) {
            self.undersized_violations
                .push(format!("{label}: {} undersized batches", s.batches_undersized));
        }
        self.max_stack_ratio = self
            .max_stack_ratio
            .max(s.max_stack_cliques as f64 / stack_bound as f64);
        self.max_undersized = self.max_undersized.max(s.batches_undersized);
    }
}

fn criterion_1(log: &mut RunLog) -> Outcome {
    let start = Instant::now();
    for (gi, g) in criterion_graphs().iter().enumerate() {
        let reference = all_maximal_cliques(g).expect("n ≤ 16");
        for kernel in Kernel::ALL {
            for capacity in capacities(g.n()) {
                let label = format!("graph {gi} (n={}) {kernel} B={capacity}", g.n());

                let mut plain = Vec::new();
                let stats = run_plain(g, kernel, capacity, None, |r| plain.push(r.clique.clone()));
                log.runs += 1;
                log.check_stats(g, capacity, &stats, &label);
                let d = oracle::compare_emissions(&plain, &reference);
                if !d.is_exact() {
                    log.mismatches.push(format!("{label} plain: {d:?}"));
                }

                let strict = check_strict(g, kernel, capacity, log, &label);
                log.runs += 1;
                let d = oracle::compare_emissions(&strict, &reference);
                if !d.is_exact() {
                    log.mismatches.push(format!("{label} strict: {d:?}"));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = log.mismatches.is_empty() && elapsed < Duration::from_secs(60);
    let mut detail = format!(
        "{} runs, {} mismatches, {:.1}s (limit 60s)",
        log.runs,
        log.mismatches.len(),
        elapsed.as_secs_f64()
    );
    if let Some(first) = log.mismatches.first() {
        detail.push_str(&format!("; first: {first}"));
    }
    Outcome::new(pass, detail)
}

fn criterion_2() -> Outcome {
    let g = running_example();
    let k = |v: &[usize]| Clique::from_vertices(&g, v.iter().copied());
    let k0 = k(&[1, 2, 3, 4, 5]);
    let expected_set = [k0.clone(), k(&[1, 6]), k(&[2, 7]), k(&[5, 8]), k(&[6, 7, 8])];
    let indices = [(k(&[1, 6]), 6), (k(&[2, 7]), 7), (k(&[5, 8]), 8), (k(&[6, 7, 8]), 7)];
    let mut problems = Vec::new();

    for kernel in Kernel::ALL {
        for capacity in capacities(8) {
            let mut got = Vec::new();
            run_plain(&g, kernel, capacity, None, |r| got.push(r.clique.clone()));
            let mut sorted = got.clone();
            sorted.sort_by(oracle::lex_descending);
            if sorted != expected_set || got.first() != Some(&k0) {
                problems.push(format!("{kernel} B={capacity}: {got:?}"));
            }
        }
    }
    if clique_index(&g, &k0).is_some() {
        problems.push("root has an index".into());
    }
    for (c, i) in &indices {
        if clique_index(&g, c) != Some(*i) {
            problems.push(format!("i({c}) = {:?}, expected {i}", clique_index(&g, c)));
        }
    }
    let parent_of = |c: &Clique| parent(&g, c).ok();
    if parent_of(&k(&[6, 7, 8])) != Some(k(&[1, 6])) || parent_of(&k(&[2, 7])) != Some(k0.clone()) {
        problems.push("parent map differs from the tree".into());
    }
    Outcome::new(
        problems.is_empty(),
        if problems.is_empty() {
            "5 cliques, root first, indices 6/7/8/7 for every kernel and capacity".to_string()
        } else {
            problems.join("; ")
        },
    )
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut counts = Vec::new();
    let mut pass = true;
    for (n, want) in [(6usize, 9usize), (9, 27), (12, 81)] {
        let g = moon_moser(n);
        let reference = all_maximal_cliques(&g).unwrap();
        for kernel in Kernel::ALL {
            for capacity in capacities(n) {
                let mut got = Vec::new();
                run_plain(&g, kernel, capacity, None, |r| got.push(r.clique.clone()));
                pass &= got.len() == want && oracle::compare_emissions(&got, &reference).is_exact();
            }
        }
        counts.push(format!("n={n}: {}", reference.len()));
        pass &= reference.len() == want;
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(5);
    Outcome::new(
        pass,
        format!(
            "{} (expected 9/27/81), {:.2}s (limit 5s)",
            counts.join(", "),
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checked = 0u64;
    let mut bad = Vec::new();
    for gi in 0..100 {
        let n = rng.gen_range(1..=14);
        let g = gnp(n, rng.gen_range(0.1..0.9), rng.gen());
        let mut all = all_maximal_cliques(&g).unwrap().into_vec();
        // vary the batch composition
        for k in (1..all.len()).rev() {
            all.swap(k, rng.gen_range(0..=k));
        }
        let cap = (n * n).max(1);
        for chunk in all.chunks(cap) {
            let batch = Batch::new(chunk.to_vec(), cap).unwrap();
            let rect = good_table_rectangular(&g, &batch);
            let bits = good_table_bitset(&g, &batch);
            for (k, p) in chunk.iter().enumerate() {
                for i in 1..=n {
                    for j in 1..=n {
                        let want = good_pair_oracle(&g, p, i, j);
                        checked += 1;
                        if rect.get(k, i, j) != want || bits.get(k, i, j) != want {
                            bad.push(format!("graph {gi} clique {p} ({i},{j})"));
                        }
                    }
                }
            }
        }
    }
    Outcome::new(
        bad.is_empty(),
        format!(
            "{checked} (k,i,j) entries, {} disagreements{}",
            bad.len(),
            bad.first().map(|b| format!("; first: {b}")).unwrap_or_default()
        ),
    )
}

fn all_cliques(g: &Graph) -> Vec<Clique> {
    fn grow(g: &Graph, current: &VertexSet, candidates: &VertexSet, out: &mut Vec<Clique>) {
        out.push(Clique::new(current.clone()));
        for v in candidates.iter() {
            let mut next = current.clone();
            next.insert(v);
            let later = candidates.intersection(g.neighborhood(v)).restrict_complement_below(v);
            grow(g, &next, &later, out);
        }
    }
    let mut out = Vec::new();
    grow(g, &g.empty_set(), &VertexSet::full(g.n()), &mut out);
    out
}

trait AboveExt {
    fn restrict_complement_below(self, v: usize) -> VertexSet;
}

impl AboveExt for VertexSet {
    /// Keep only elements greater than `v`.
    fn restrict_complement_below(self, v: usize) -> VertexSet {
        let below = VertexSet::below(self.universe(), v + 1);
        self.difference(&below)
    }
}

fn property_graphs() -> Vec<Graph> {
    let mut gs = vec![
        running_example(),
        moon_moser(9),
        moon_moser(12),
        complete(10),
        edgeless(6),
        edgeless(1),
    ];
    for k in 0..36u64 {
        let n = 2 + (k as usize % 11);
        gs.push(gnp(n, [0.25, 0.5, 0.75][(k % 3) as usize], 500 + k));
    }
    gs
}

fn criterion_5() -> Outcome {
    let mut checks = [0u64; 5];
    let mut failures: Vec<String> = Vec::new();
    let names = [
        "reconstructability",
        "idempotence",
        "monotonicity",
        "characterization",
        "lex-dominance",
    ];
    for (gi, g) in property_graphs().iter().enumerate() {
        let n = g.n();
        let cliques = all_cliques(g);
        if g.m() == n * n.saturating_sub(1) / 2 && cliques.len() != 1 << n {
            failures.push(format!("clique enumeration: graph {gi}"));
        }
        let maximal = all_maximal_cliques(g).unwrap();

        for c in maximal.iter() {
            let Some(i) = clique_index(g, c) else { continue };
            let p = parent(g, c).unwrap();
            checks[0] += 1;
            let lhs = c.verts().restrict_below(i);
            let rhs = p.verts().restrict_below(i).intersection(g.neighborhood(i));
            if lhs != rhs {
                failures.push(format!("{}: graph {gi} C={c}", names[0]));
            }
            checks[4] += 1;
            if p.lex_cmp(c) != std::cmp::Ordering::Greater {
                failures.push(format!("{}: graph {gi} C={c}", names[4]));
            }
        }

        for k in &cliques {
            let lc = lex_completion(g, k);
            for a in 0..=n {
                let lc_a = lex_completion(g, &Clique::new(k.verts().restrict_below(a + 1)));
                for b in a..=n {
                    checks[1] += 1;
                    let again = lex_completion(g, &Clique::new(lc_a.verts().restrict_below(b + 1)));
                    if again != lc_a {
                        failures.push(format!("{}: graph {gi} K={k} a={a} b={b}", names[1]));
                    }
                }
            }
            // single-vertex removals chain every nested pair
            for v in k.iter() {
                let mut smaller = k.verts().clone();
                smaller.remove(v);
                checks[2] += 1;
                if lex_completion(g, &Clique::new(smaller)).lex_cmp(&lc) == std::cmp::Ordering::Less {
                    failures.push(format!("{}: graph {gi} K={k} minus {v}", names[2]));
                }
            }
            for v in 1..=n {
                checks[3] += 1;
                let inside = lc.contains(v);
                let blocker = k
                    .iter()
                    .chain(lc.iter().filter(|&z| z < v))
                    .any(|z| z != v && !g.is_adjacent(z, v));
                if inside == blocker {
                    failures.push(format!("{}: graph {gi} K={k} v={v}", names[3]));
                }
            }
        }
    }
    let summary: Vec<String> = names.iter().zip(checks).map(|(n, c)| format!("{n} {c}")).collect();
    Outcome::new(
        failures.is_empty(),
        format!(
            "checks: {}; {} failures{}",
            summary.join(", "),
            failures.len(),
            failures.first().map(|f| format!("; first: {f}")).unwrap_or_default()
        ),
    )
}

fn criterion_6(log: &RunLog) -> Outcome {
    let pass = log.stack_violations.is_empty() && log.undersized_violations.is_empty();
    let mut detail = format!(
        "{} runs, peak stack/(n²B) = {:.3}, peak undersized = {}",
        log.runs, log.max_stack_ratio, log.max_undersized
    );
    if let Some(v) = log.stack_violations.first().or(log.undersized_violations.first()) {
        detail.push_str(&format!("; first violation: {v}"));
    }
    Outcome::new(pass, detail)
}

fn criterion_7(log: &RunLog) -> Outcome {
    let mut detail = format!(
        "{} strict runs, {} violating",
        log.strict_runs,
        log.strict_violations.len()
    );
    if let Some(v) = log.strict_violations.first() {
        detail.push_str(&format!("; first: {v}"));
    }
    Outcome::new(log.strict_violations.is_empty(), detail)
}

fn reference_product(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    let mut out = DenseMatrix::zeros(a.rows(), b.cols());
    for r in 0..a.rows() {
        for c in 0..b.cols() {
            let mut s = 0;
            for k in 0..a.cols() {
                s += a.get(r, k) * b.get(k, c);
            }
            out.set(r, c, s);
        }
    }
    out
}

fn random_binary(rows: usize, cols: usize, p: f64, rng: &mut ChaCha8Rng) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            if rng.gen_bool(p) {
                m.set(r, c, 1);
            }
        }
    }
    m
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut bad = Vec::new();
    for t in 0..500 {
        // the first instances pin the largest shapes
        let (rows, inner, cols) = match t {
            0 => (64, 64, 4096),
            1 => (64, 1, 4096),
            2 => (1, 64, 1),
            _ => (rng.gen_range(1..=64), rng.gen_range(1..=64), rng.gen_range(1..=4096)),
        };
        let p = rng.gen_range(0.0..=1.0);
        let a = random_binary(rows, inner, p, &mut rng);
        let b = random_binary(inner, cols, p, &mut rng);
        let want = reference_product(&a, &b);
        for backend in Backend::ALL {
            let got = multiply_with(&a, &b, backend, &mut WorkMeter::new()).unwrap();
            let positive = multiply_boolean_threshold_with(&a, &b, backend, &mut WorkMeter::new()).unwrap();
            let threshold_ok = (0..rows).all(|r| (0..cols).all(|c| positive.get(r, c) == (want.get(r, c) > 0)));
            if got != want || !threshold_ok {
                bad.push(format!("instance {t} {rows}x{inner}x{cols} {backend:?}"));
            }
        }
    }
    Outcome::new(
        bad.is_empty(),
        format!(
            "500 instances x {} backends, {} mismatches{}",
            Backend::ALL.len(),
            bad.len(),
            bad.first().map(|b| format!("; first: {b}")).unwrap_or_default()
        ),
    )
}

/// Work before each emission against `boot + x · a`, where boot is the cost
/// of the undersized batches and `a` the largest per-clique cost of a full
/// batch (or of a single pop).
fn first_x_bound(g: &Graph, kernel: Kernel, capacity: usize) -> Result<(usize, u64, u64, usize), String> {
    let mut batch_cost = 0u64;
    let mut boot = 0u64;
    let mut amortized = 0u64;
    let mut max_pop = 0u64;
    let mut cumulative = 0u64;
    let mut work_before = Vec::new();
    for event in list_mc(g, kernel, capacity) {
        cumulative += event.cost();
        batch_cost += event.cost();
        match event {
            StepEvent::CliqueCollected { cost, .. } => {
                max_pop = max_pop.max(cost);
                work_before.push(cumulative);
            }
            StepEvent::BatchCompleted { batch_size, .. } => {
                if batch_size < capacity {
                    boot += batch_cost;
                } else {
                    amortized = amortized.max(batch_cost.div_ceil(batch_size as u64));
                }
                batch_cost = 0;
            }
            StepEvent::TraversalEnded { .. } => {}
        }
    }
    let a = amortized.max(max_pop);
    for (k, &w) in work_before.iter().enumerate() {
        let x = k as u64 + 1;
        if w > boot + x * a {
            return Err(format!("B={capacity}: W({x}) = {w} > {boot} + {x}·{a}"));
        }
    }
    Ok((work_before.len(), boot, a, capacity))
}

fn criterion_9() -> Outcome {
    let g = moon_moser(12);
    let mut parts = Vec::new();
    let mut pass = true;
    for kernel in Kernel::ALL {
        for capacity in [default_capacity(&g), g.n(), 1] {
            match first_x_bound(&g, kernel, capacity) {
                Ok((x, boot, a, b)) => {
                    pass &= x == 81;
                    if kernel == Kernel::Rectangular {
                        parts.push(format!("B={b}: x≤{x}, boot={boot}, a={a}"));
                    }
                }
                Err(e) => {
                    pass = false;
                    parts.push(format!("{kernel} {e}"));
                }
            }
        }
    }
    Outcome::new(pass, format!("{} (all kernels)", parts.join("; ")))
}

fn report(id: usize, name: &str, outcome: &Outcome) {
    println!(
        "criterion {id} [{name}]: {} ({})",
        if outcome.pass { "PASS" } else { "FAIL" },
        outcome.detail
    );
}

fn main() -> ExitCode {
    let mut log = RunLog::default();
    let c1 = criterion_1(&mut log);
    let outcomes = [
        (1, "oracle equivalence", c1),
        (2, "running-example golden", criterion_2()),
        (3, "Moon-Moser counts", criterion_3()),
        (4, "good-table cross-validation", criterion_4()),
        (5, "tree-property suite", criterion_5()),
        (6, "batch-DFS bounds", criterion_6(&log)),
        (7, "strict-delay properties", criterion_7(&log)),
        (8, "matmul differential", criterion_8()),
        (9, "first-x cost bound", criterion_9()),
    ];
    let mut failed = 0;
    for (id, name, outcome) in &outcomes {
        report(*id, name, outcome);
        failed += usize::from(!outcome.pass);
    }
    println!(
        "acceptance: {} of {} criteria passed",
        outcomes.len() - failed,
        outcomes.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
