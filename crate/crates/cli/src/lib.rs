//! Driver behind the `mcl` binary.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use thiserror::Error;

use mcl_core::generators::{complete, gnp, moon_moser};
use mcl_core::oracle::{self, OracleError};
use mcl_core::rs_tree::{is_clique, is_maximal};
use mcl_core::{
    calibrate, default_capacity, parse_dimacs, parse_edge_list, run_plain, run_strict_limited, Clique, DelayConfig,
    Graph, Kernel, ParseError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ORACLE_REFUSED: i32 = 3;

/// Version line written before the CSV header of a trace file.
pub const TRACE_SCHEMA: &str = "#schema=1";
pub const TRACE_HEADER: &str = "print_ordinal,cost_units,queue_size,stack_cliques";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Edges,
    Dimacs,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    #[default]
    Plain,
    Strict,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    Naive,
    #[default]
    Rect,
    Bitset,
}

impl From<KernelArg> for Kernel {
    fn from(k: KernelArg) -> Kernel {
        match k {
            KernelArg::Naive => Kernel::Naive,
            KernelArg::Rect => Kernel::Rectangular,
            KernelArg::Bitset => Kernel::Bitset,
        }
    }
}

/// List the maximal cliques of an undirected graph, one per line.
#[derive(Clone, Debug, Parser)]
#[command(name = "mcl", version)]
pub struct Args {
    /// Graph file; stdin when neither this nor --generate is given.
    #[arg(long, short)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Built-in graph: `gnp:N:P`, `moon-moser:N` or `complete:N`.
    #[arg(long, conflicts_with = "input")]
    pub generate: Option<String>,
    #[arg(long, value_enum, default_value_t)]
    pub kernel: KernelArg,
    /// Batch capacity (default n²).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub batch: Option<u64>,
    #[arg(long, value_enum, default_value_t)]
    pub mode: Mode,
    /// Stop after this many cliques.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub first: Option<u64>,
    /// Check the output against a brute-force reference.
    #[arg(long)]
    pub verify: bool,
    /// Write a per-clique CSV trace here.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Work units between prints in strict mode (default: calibrated).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub tau: Option<u64>,
    /// Cliques queued before the first strict-mode print (default: calibrated).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub boot_target: Option<u64>,
    /// Seed for --generate gnp.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: io::Error },
    #[error("bad --generate spec `{0}`")]
    Generate(String),
    #[error("cannot write trace {path}: {source}")]
    Trace { path: String, source: io::Error },
    #[error("{0}")]
    Oracle(#[from] OracleError),
    #[error("output error: {0}")]
    Output(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Oracle(_) => EXIT_ORACLE_REFUSED,
            _ => EXIT_USAGE,
        }
    }
}

/// Parse a `--generate` spec.
pub fn generate(spec: &str, seed: u64) -> Result<Graph, CliError> {
    let bad = || CliError::Generate(spec.to_string());
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        ["gnp", n, p] => {
            let n = n.parse().map_err(|_| bad())?;
            let p: f64 = p.parse().map_err(|_| bad())?;
            if !(0.0..=1.0).contains(&p) {
                return Err(bad());
            }
            Ok(gnp(n, p, seed))
        }
        ["moon-moser", n] => Ok(moon_moser(n.parse().map_err(|_| bad())?)),
        ["complete", n] => Ok(complete(n.parse().map_err(|_| bad())?)),
        _ => Err(bad()),
    }
}

fn load(args: &Args, err: &mut dyn Write) -> Result<Graph, CliError> {
    if let Some(spec) = &args.generate {
        return generate(spec, args.seed);
    }
    let text = match &args.input {
        Some(path) => fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.display().to_string(),
            source,
        })?,
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).map_err(|source| CliError::Read {
                path: "<stdin>".into(),
                source,
            })?;
            s
        }
    };
    let parsed = match args.format {
        Format::Edges => parse_edge_list(&text)?,
        Format::Dimacs => parse_dimacs(&text)?,
    };
    for w in &parsed.warnings {
        writeln!(err, "warning: {w}")?;
    }
    let norm = parsed.normalization;
    if norm.self_loops > 0 || norm.duplicate_edges > 0 {
        writeln!(
            err,
            "normalized: dropped {} self-loops, {} duplicate edges",
            norm.self_loops, norm.duplicate_edges
        )?;
    }
    Ok(parsed.graph)
}

fn write_clique(out: &mut dyn Write, c: &Clique) -> io::Result<()> {
    writeln!(out, "{c}")
}

/// Run with parsed arguments; returns the process exit code.
pub fn run(args: &Args, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match try_run(args, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn try_run(args: &Args, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let g = load(args, err)?;
    writeln!(err, "graph: n={} m={}", g.n(), g.m())?;

    // refuse before listing anything
    let reference = if args.verify {
        Some(oracle::all_maximal_cliques(&g)?)
    } else {
        None
    };

    let kernel = Kernel::from(args.kernel);
    let capacity = args.batch.map_or_else(|| default_capacity(&g), |b| b as usize);
    let limit = args.first.map(|x| x as usize);
    let mut emitted = Vec::new();
    let mut rows: Vec<(usize, u64, usize, usize)> = Vec::new();
    let mut write_err = None;

    match args.mode {
        Mode::Plain => {
            let stats = run_plain(&g, kernel, capacity, limit, |r| {
                if write_err.is_none() {
                    write_err = write_clique(out, &r.clique).err();
                }
                rows.push((r.ordinal, r.cost_since_last, 0, r.stack_cliques));
                emitted.push(r.clique.clone());
            });
            writeln!(
                err,
                "plain: kernel={} batch={} batches={} undersized={} max_stack={}",
                kernel, capacity, stats.batches_total, stats.batches_undersized, stats.max_stack_cliques
            )?;
        }
        Mode::Strict => {
            let cfg = match (args.tau, args.boot_target) {
                (Some(t), Some(b)) => DelayConfig {
                    tau_delay: t,
                    boot_target: b as usize,
                },
                (t, b) => {
                    let cal = calibrate(&g, kernel, capacity, 1, 1).config;
                    DelayConfig {
                        tau_delay: t.unwrap_or(cal.tau_delay),
                        boot_target: b.map_or(cal.boot_target, |b| b as usize),
                    }
                }
            };
            let report = run_strict_limited(&g, cfg, kernel, capacity, limit, |r| {
                if write_err.is_none() {
                    write_err = write_clique(out, &r.clique).err();
                }
                rows.push((r.ordinal, r.cost_since_last, r.queue_size, r.stack_cliques));
                emitted.push(r.clique.clone());
            });
            writeln!(
                err,
                "strict: kernel={} batch={} tau={} boot_target={} boot_events={} max_queue={} starved={}",
                kernel,
                capacity,
                cfg.tau_delay,
                cfg.boot_target,
                report.boot.events,
                report.queue_high_water,
                report.starved_checks
            )?;
        }
    }
    if let Some(e) = write_err {
        return Err(e.into());
    }
    out.flush()?;

    if let Some(path) = &args.trace {
        let mut csv = format!("{TRACE_SCHEMA}\n{TRACE_HEADER}\n");
        for (ordinal, cost, queue, stack) in &rows {
            csv.push_str(&format!("{ordinal},{cost},{queue},{stack}\n"));
        }
        fs::write(path, csv).map_err(|source| CliError::Trace {
            path: path.display().to_string(),
            source,
        })?;
    }

    let Some(reference) = reference else {
        return Ok(EXIT_OK);
    };
    let invalid = emitted
        .iter()
        .filter(|c| !is_clique(&g, c.verts()) || !is_maximal(&g, c.verts()))
        .count();
    let mut diff = oracle::compare_emissions(&emitted, &reference);
    if limit.is_some_and(|x| emitted.len() >= x) {
        // a truncated listing only has to be a duplicate-free subset
        diff.missing = 0;
    }
    let pass = invalid == 0 && diff.is_exact();
    writeln!(
        err,
        "verify: {} (emitted={} expected={} missing={} unexpected={} duplicates={} invalid={})",
        if pass { "PASS" } else { "FAIL" },
        emitted.len(),
        reference.len(),
        diff.missing,
        diff.unexpected,
        diff.duplicates,
        invalid
    )?;
    Ok(if pass { EXIT_OK } else { EXIT_VERIFY_FAIL })
}
