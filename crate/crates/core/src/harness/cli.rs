//! The `ssme` command line.
//!
//! Exit codes: 0 on success, 1 when a checked property is falsified, 2 on
//! usage or input errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::compare::{compare_graph, write_reports, CompareOptions};
use super::export::{append_summary, write_trace};
use super::verify::{run_suite, Scope, Suite};
use super::{ExperimentSpec, GraphSource, SummaryRow};
use crate::engine::lower_bound_witness;
use crate::error::HarnessError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSIFIED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "ssme", version, about = "Speculatively stabilizing mutual exclusion lab")]
pub struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct GlobalArgs {
    /// Graph file or generator (ring:N, path:N, complete:N, grid:RxC, random:N:P:SEED)
    #[arg(long, global = true)]
    graph: Option<String>,
    /// ssme | dijkstra
    #[arg(long, global = true)]
    protocol: Option<String>,
    /// sync | central-rr | central-rand | central-adv | dist-rand
    #[arg(long, global = true)]
    daemon: Option<String>,
    /// Activation probability for dist-rand
    #[arg(long, global = true)]
    prob: Option<f64>,
    /// Daemon seed (sampling seed for verify and compare)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Step cap per run
    #[arg(long, global = true)]
    max_steps: Option<usize>,
    /// Output directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// csv | json-lines
    #[arg(long, global = true)]
    format: Option<String>,
    /// key = value experiment file; flags override its entries
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug, Default)]
struct RunArgs {
    /// file:PATH | random:COUNT:SEED | exhaustive | witness
    #[arg(long)]
    init: Option<String>,
    /// Dijkstra's K
    #[arg(long)]
    states: Option<i64>,
    /// Steps recorded after reaching the legitimate set
    #[arg(long)]
    tail: Option<usize>,
    /// Cap on exhaustive enumeration
    #[arg(long)]
    budget: Option<u64>,
    /// Skip per-run trace files
    #[arg(long)]
    no_traces: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one experiment and write traces plus summary rows
    Run(RunArgs),
    /// Run every graph x daemon x seed combination and append summary rows
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated graphs
        #[arg(long, value_delimiter = ',')]
        graphs: Vec<String>,
        /// Comma-separated daemons
        #[arg(long, value_delimiter = ',')]
        daemons: Vec<String>,
        /// Comma-separated daemon seeds
        #[arg(long, value_delimiter = ',')]
        seeds: Vec<u64>,
    },
    /// Run a property suite: clock | guards | lemmas | closure | bounds | all
    Verify {
        suite: String,
        /// Sampled configurations when the space is not enumerated
        #[arg(long)]
        samples: Option<u64>,
        /// Configuration pairs for the indistinguishability check
        #[arg(long)]
        pairs: Option<u64>,
        /// Enumerate every configuration; fails if over --budget
        #[arg(long)]
        exhaustive: bool,
        /// Cap on exhaustive enumeration
        #[arg(long)]
        budget: Option<u64>,
        /// State-space cap for the exact unfair search
        #[arg(long)]
        unfair_budget: Option<u64>,
    },
    /// Compare synchronous and strong-daemon worst cases of SSME and Dijkstra
    Compare {
        /// Graphs to compare (default ring:3 ring:4 ring:5)
        graphs: Vec<String>,
        /// Sampled configurations when the space is over --budget
        #[arg(long)]
        samples: Option<u64>,
        /// Sampled runs per adversarial daemon
        #[arg(long)]
        runs: Option<u64>,
        /// Cap on exhaustive synchronous enumeration
        #[arg(long)]
        budget: Option<u64>,
        /// State-space cap for the exact unfair search
        #[arg(long)]
        unfair_budget: Option<u64>,
        /// Dijkstra's K (default n + 1)
        #[arg(long)]
        states: Option<i64>,
    },
    /// Build and validate a lower-bound witness configuration
    Witness {
        /// Output file (default <out>/witness.cfg)
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code. Reports go to `out`, errors to stderr.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn io_err(e: std::io::Error) -> HarnessError {
    HarnessError::io(std::path::Path::new("<stdout>"), e)
}

fn base_spec(g: &GlobalArgs, run: Option<&RunArgs>) -> Result<ExperimentSpec, HarnessError> {
    let mut spec = match &g.config {
        Some(path) => ExperimentSpec::from_file(path)?,
        None => ExperimentSpec::default(),
    };
    let mut set = |key: &str, value: Option<String>| -> Result<(), HarnessError> {
        match value {
            Some(v) => spec.set(key, &v),
            None => Ok(()),
        }
    };
    set("graph", g.graph.clone())?;
    set("protocol", g.protocol.clone())?;
    set("daemon", g.daemon.clone())?;
    set("prob", g.prob.map(|p| p.to_string()))?;
    set("seed", g.seed.map(|s| s.to_string()))?;
    set("max_steps", g.max_steps.map(|m| m.to_string()))?;
    set("out", g.out.as_ref().map(|o| o.display().to_string()))?;
    set("format", g.format.clone())?;
    if let Some(r) = run {
        set("init", r.init.clone())?;
        set("states", r.states.map(|k| k.to_string()))?;
        set("tail", r.tail.map(|t| t.to_string()))?;
        set("budget", r.budget.map(|b| b.to_string()))?;
        if r.no_traces {
            set("traces", Some("false".into()))?;
        }
    }
    Ok(spec)
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32, HarnessError> {
    let g = &cli.global;
    match &cli.command {
        Command::Run(args) => cmd_run(base_spec(g, Some(args))?, out),
        Command::Sweep {
            run,
            graphs,
            daemons,
            seeds,
        } => cmd_sweep(base_spec(g, Some(run))?, graphs, daemons, seeds, out),
        Command::Verify {
            suite,
            samples,
            pairs,
            exhaustive,
            budget,
            unfair_budget,
        } => {
            let suites: Vec<Suite> = if suite == "all" {
                Suite::ALL.to_vec()
            } else {
                vec![suite.parse()?]
            };
            let mut falsified = false;
            for s in suites {
                let label = match &g.graph {
                    Some(spec) => spec.clone(),
                    None => s.default_graph().to_string(),
                };
                let graph = label.parse::<GraphSource>()?.load()?;
                let mut scope = Scope::new(graph, label);
                scope.seed = g.seed.unwrap_or(scope.seed);
                scope.samples = samples.unwrap_or(scope.samples);
                scope.pairs = pairs.unwrap_or(scope.pairs);
                scope.exhaustive = *exhaustive;
                scope.budget = budget.unwrap_or(scope.budget);
                scope.unfair_budget = unfair_budget.unwrap_or(scope.unfair_budget);
                for check in run_suite(s, &scope)? {
                    falsified |= !check.passed();
                    writeln!(out, "{check}").map_err(io_err)?;
                }
            }
            Ok(if falsified { EXIT_FALSIFIED } else { EXIT_OK })
        }
        Command::Compare {
            graphs,
            samples,
            runs,
            budget,
            unfair_budget,
            states,
        } => {
            let defaults = CompareOptions::default();
            let opts = CompareOptions {
                samples: samples.unwrap_or(defaults.samples),
                runs: runs.unwrap_or(defaults.runs),
                seed: g.seed.unwrap_or(defaults.seed),
                budget: budget.unwrap_or(defaults.budget),
                unfair_budget: unfair_budget.unwrap_or(defaults.unfair_budget),
                states: *states,
            };
            let labels: Vec<String> = if graphs.is_empty() {
                vec!["ring:3".into(), "ring:4".into(), "ring:5".into()]
            } else {
                graphs.clone()
            };
            let mut reports = Vec::new();
            writeln!(
                out,
                "{:<12} {:<9} {:>4} {:>4} {:>10} {:>12} {:>8} {:>12}  note",
                "graph", "protocol", "n", "diam", "sync", "unfair", "ratio", "predicted_f"
            )
            .map_err(io_err)?;
            for label in &labels {
                let graph = label.parse::<GraphSource>()?.load()?;
                for r in compare_graph(label, &graph, &opts)? {
                    let show = |v: Option<u64>, exact: bool| match v {
                        Some(v) => format!("{v}{}", if exact { "" } else { "~" }),
                        None => "-".into(),
                    };
                    writeln!(
                        out,
                        "{:<12} {:<9} {:>4} {:>4} {:>10} {:>12} {:>8} {:>12.2}  {}",
                        r.graph,
                        r.protocol,
                        r.n,
                        r.diam,
                        show(r.sync_worst, r.sync_exact),
                        show(r.unfair_worst, r.unfair_exact),
                        r.ratio.map_or("-".into(), |x| format!("{x:.2}")),
                        r.predicted_f,
                        r.note
                    )
                    .map_err(io_err)?;
                    reports.push(r);
                }
            }
            let dir = g.out.clone().unwrap_or_else(|| PathBuf::from("out"));
            let path = dir.join("compare.csv");
            write_reports(&path, &reports)?;
            writeln!(out, "wrote {}", path.display()).map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Command::Witness { file } => {
            let mut spec = base_spec(g, None)?;
            spec.init = super::InitSource::Witness;
            let exp = spec.resolve()?;
            let p = exp.protocol.as_ref();
            let w = lower_bound_witness(p)?;
            let target = p.graph().diam().div_ceil(2);
            let path = file.clone().unwrap_or_else(|| exp.spec.out.join("witness.cfg"));
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
            }
            fs::write(&path, w.config.to_text()).map_err(|e| HarnessError::io(&path, e))?;
            let ok = w.index == target;
            writeln!(
                out,
                "{} witness {} on {}: index {} (expected {target}), pair ({}, {}), radius {}{}\nwrote {}",
                if ok { "PASS" } else { "FAIL" },
                w.config,
                exp.graph_label(),
                w.index,
                w.u,
                w.v,
                w.radius,
                if w.searched { ", found by search" } else { "" },
                path.display()
            )
            .map_err(io_err)?;
            Ok(if ok { EXIT_OK } else { EXIT_FALSIFIED })
        }
    }
}

fn cmd_run(spec: ExperimentSpec, out: &mut dyn Write) -> Result<i32, HarnessError> {
    let exp = spec.resolve()?;
    writeln!(out, "# effective spec\n{}", exp.spec).map_err(io_err)?;
    let outcomes = exp.run_all()?;
    if exp.spec.traces {
        for o in &outcomes {
            write_trace(&exp.spec.out, &exp, o)?;
        }
    }
    let rows: Vec<SummaryRow> = outcomes.into_iter().map(|o| o.summary).collect();
    let path = append_summary(&exp.spec.out, exp.spec.format, &rows)?;
    for row in rows.iter().take(20) {
        writeln!(
            out,
            "init {} conv_me {} conv_au {} violations {} steps {} {}",
            row.init_hash, row.conv_me, row.conv_au, row.violations, row.steps, row.reason
        )
        .map_err(io_err)?;
    }
    if rows.len() > 20 {
        writeln!(out, "... {} more rows", rows.len() - 20).map_err(io_err)?;
    }
    writeln!(out, "wrote {}", path.display()).map_err(io_err)?;
    Ok(if rows.iter().any(|r| r.violations > 0) {
        EXIT_FALSIFIED
    } else {
        EXIT_OK
    })
}

#[derive(Default)]
struct SweepTally {
    runs: usize,
    worst: usize,
    undetermined: usize,
    violations: usize,
}

fn cmd_sweep(
    base: ExperimentSpec,
    graphs: &[String],
    daemons: &[String],
    seeds: &[u64],
    out: &mut dyn Write,
) -> Result<i32, HarnessError> {
    let graphs: Vec<String> = if graphs.is_empty() { vec![base.graph.to_string()] } else { graphs.to_vec() };
    let daemons: Vec<String> = if daemons.is_empty() { vec![base.daemon.clone()] } else { daemons.to_vec() };
    let seeds: Vec<u64> = if seeds.is_empty() { vec![base.seed] } else { seeds.to_vec() };
    writeln!(out, "# effective base spec\n{base}").map_err(io_err)?;

    let mut all = Vec::new();
    let mut groups: BTreeMap<(String, String, u64), SweepTally> = BTreeMap::new();
    for graph in &graphs {
        for daemon in &daemons {
            for &seed in &seeds {
                let mut spec = base.clone();
                spec.set("graph", graph)?;
                spec.daemon = daemon.clone();
                spec.seed = seed;
                let exp = spec.resolve()?;
                for o in exp.run_all()? {
                    let row = o.summary;
                    let g = groups
                        .entry((row.graph.clone(), row.daemon.clone(), row.seed))
                        .or_default();
                    g.runs += 1;
                    g.worst = g.worst.max(row.conv_me);
                    g.undetermined += usize::from(row.reason == "undetermined");
                    g.violations += row.violations;
                    all.push(row);
                }
            }
        }
    }
    let path = append_summary(&base.out, base.format, &all)?;
    for ((graph, daemon, seed), t) in &groups {
        writeln!(
            out,
            "{graph} {daemon} seed {seed}: runs {} max_conv_me {} undetermined {} violations {}",
            t.runs, t.worst, t.undetermined, t.violations
        )
        .map_err(io_err)?;
    }
    writeln!(out, "wrote {}", path.display()).map_err(io_err)?;
    Ok(if all.iter().any(|r| r.violations > 0) {
        EXIT_FALSIFIED
    } else {
        EXIT_OK
    })
}
