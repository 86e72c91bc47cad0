//! Speculation reports: worst convergence under the synchronous daemon
//! against worst convergence under the strong daemon family, per protocol.

use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use super::default_step_budget;
use crate::daemon::{DaemonKind, DaemonPolicy};
use crate::engine::{
    convergence_index_me, default_max_steps, lower_bound_witness, run, worst_case_sync, worst_case_unfair,
    ConfigSource, ConfigSpace, Configuration, RunOptions, StopCondition,
};
use crate::error::{EngineError, HarnessError};
use crate::graph::Graph;
use crate::protocol::{Dijkstra, Protocol, Ssme};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpeculationReport {
    pub graph: String,
    pub protocol: String,
    pub n: usize,
    pub diam: usize,
    /// Worst synchronous ME convergence index.
    pub sync_worst: Option<u64>,
    pub sync_exact: bool,
    /// Worst convergence under the strong daemon: exact steps to the
    /// legitimate set when the state space is searchable, otherwise the
    /// largest ME convergence index over sampled adversarial runs and the
    /// synchronous worst case.
    pub unfair_worst: Option<u64>,
    pub unfair_exact: bool,
    /// `unfair_worst / sync_worst` when both are known and the divisor is
    /// positive.
    pub ratio: Option<f64>,
    /// Predicted ratio function: `n` for Dijkstra, the unfair step bound over
    /// `ceil(diam/2)` for SSME.
    pub predicted_f: f64,
    pub note: String,
}

#[derive(Clone, Copy, Debug)]
pub struct CompareOptions {
    /// Sampled initial configurations when exhaustive search is over budget.
    pub samples: u64,
    /// Runs per daemon for the sampled strong-daemon approximation.
    pub runs: u64,
    pub seed: u64,
    pub budget: u64,
    /// State-space cap for the exact unfair search.
    pub unfair_budget: u64,
    /// Dijkstra's `K`; `n + 1` when unset.
    pub states: Option<i64>,
}

impl Default for CompareOptions {
    fn default() -> Self {
        Self {
            samples: 100_000,
            runs: 1_000,
            seed: 1,
            budget: crate::engine::DEFAULT_CONFIG_BUDGET,
            unfair_budget: 1_000_000,
            states: None,
        }
    }
}

/// Reports for SSME and, on rings, Dijkstra's protocol.
pub fn compare_graph(label: &str, graph: &Graph, opts: &CompareOptions) -> Result<Vec<SpeculationReport>, HarnessError> {
    let ssme = Ssme::new(graph.clone());
    let target = graph.diam().div_ceil(2).max(1) as f64;
    let mut out = vec![report(label, &ssme, ssme.unfair_step_bound() as f64 / target, opts)?];
    let dijkstra = match opts.states {
        Some(k) => Dijkstra::new(graph.clone(), k),
        None => Dijkstra::with_default_states(graph.clone()),
    };
    match dijkstra {
        Ok(d) => out.push(report(label, &d, graph.n() as f64, opts)?),
        Err(e) => out.push(SpeculationReport {
            graph: label.to_string(),
            protocol: "dijkstra".into(),
            n: graph.n(),
            diam: graph.diam(),
            sync_worst: None,
            sync_exact: false,
            unfair_worst: None,
            unfair_exact: false,
            ratio: None,
            predicted_f: graph.n() as f64,
            note: e.to_string(),
        }),
    }
    Ok(out)
}

fn report(label: &str, p: &dyn Protocol, predicted_f: f64, opts: &CompareOptions) -> Result<SpeculationReport, HarnessError> {
    let g = p.graph();
    let space = ConfigSpace::of(p);
    let fits = space.size().is_some_and(|s| s <= opts.budget);
    let mut notes = Vec::new();

    let max_steps = default_max_steps(p);
    let sync = if fits {
        worst_case_sync(p, ConfigSource::Exhaustive, opts.budget, max_steps)?
    } else {
        worst_case_sync(
            p,
            ConfigSource::Sample {
                count: opts.samples,
                seed: opts.seed,
            },
            opts.budget,
            max_steps,
        )?
    };
    let mut sync_worst = sync.max_index as u64;
    if !fits && p.name() == "ssme" {
        sync_worst = sync_worst.max(lower_bound_witness(p)?.index as u64);
    }
    if sync.undetermined > 0 {
        notes.push(format!("{} synchronous runs undetermined", sync.undetermined));
    }

    let searchable = space.size().is_some_and(|s| s <= opts.unfair_budget);
    let (unfair_worst, unfair_exact) = if searchable {
        match worst_case_unfair(p, opts.unfair_budget) {
            Ok(w) => (Some(w.max_steps), true),
            Err(EngineError::Cycle { cycle }) => {
                notes.push(format!("cycle outside the legitimate set through {}", Configuration::new(cycle[0].clone())));
                (None, true)
            }
            Err(EngineError::Deadlock { config }) => {
                notes.push(format!("deadlock at {}", Configuration::new(config)));
                (None, true)
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        let (worst, undetermined) = sampled_strong(p, opts)?;
        if undetermined > 0 {
            notes.push(format!("{undetermined} adversarial runs undetermined"));
        }
        (Some(worst.max(sync_worst)), false)
    };

    let ratio = match (unfair_worst, sync_worst) {
        (Some(u), s) if s > 0 => Some(u as f64 / s as f64),
        _ => None,
    };
    Ok(SpeculationReport {
        graph: label.to_string(),
        protocol: p.name().to_string(),
        n: g.n(),
        diam: g.diam(),
        sync_worst: Some(sync_worst),
        sync_exact: fits,
        unfair_worst,
        unfair_exact,
        ratio,
        predicted_f,
        note: notes.join("; "),
    })
}

/// Largest ME convergence index over `runs` sampled starts for each of
/// central-rand, central-adv and dist-rand(0.5), with the undetermined count.
fn sampled_strong(p: &dyn Protocol, opts: &CompareOptions) -> Result<(u64, u64), HarnessError> {
    let space = ConfigSpace::of(p);
    let daemons = [
        DaemonKind::CentralRandom,
        DaemonKind::CentralAdversarial,
        DaemonKind::RandomDistributed { p: 0.5 },
    ];
    let jobs: Vec<(DaemonKind, u64)> = daemons
        .iter()
        .flat_map(|&d| (0..opts.runs).map(move |i| (d, i)))
        .collect();
    jobs.par_iter()
        .map(|&(kind, i)| -> Result<(u64, u64), HarnessError> {
            let mut policy = DaemonPolicy::new(kind, super::run_seed(opts.seed, i))?;
            let init = Configuration::new(space.sample(opts.seed, i));
            let options = RunOptions::new(default_step_budget(p, kind), StopCondition::OnLegitimate { tail: 0 });
            let trace = run(p, &init, &mut policy, options)?;
            Ok(match convergence_index_me(&trace).value() {
                Some(v) => (v as u64, 0),
                None => (0, 1),
            })
        })
        .try_reduce(|| (0, 0), |a, b| Ok((a.0.max(b.0), a.1 + b.1)))
}

pub fn write_reports(path: &Path, reports: &[SpeculationReport]) -> Result<(), HarnessError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    }
    let mut w = csv::Writer::from_path(path)?;
    for r in reports {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| HarnessError::io(path, e))?;
    Ok(())
}
