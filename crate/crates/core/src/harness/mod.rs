//! Experiment specifications, batch execution and result persistence.
//!
//! An [`ExperimentSpec`] is read from `key = value` text and command-line
//! overrides, then resolved into an [`Experiment`] holding the built graph,
//! protocol and daemon. Its [`Display`](fmt::Display) form lists every field
//! with defaults filled in and parses back to the same spec.

pub mod cli;
pub mod compare;
pub mod export;
pub mod verify;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::daemon::{DaemonKind, DaemonPolicy};
use crate::engine::{
    convergence_index_au, convergence_index_me, default_max_steps, lower_bound_witness, run, ConfigSpace,
    Configuration, ConvergenceIndex, RunOptions, StopCondition, Trace, DEFAULT_CONFIG_BUDGET,
};
use crate::error::HarnessError;
use crate::graph::{Graph, Topology};
use crate::protocol::{Protocol, ProtocolKind};

pub use export::{fnv1a, SummaryRow};

type Result<T> = std::result::Result<T, HarnessError>;

#[derive(Clone, Debug, PartialEq)]
pub enum GraphSource {
    Generated(Topology),
    File(PathBuf),
}

impl GraphSource {
    pub fn load(&self) -> Result<Graph> {
        Ok(match self {
            Self::Generated(t) => Graph::generate(t)?,
            Self::File(p) => Graph::from_file(p)?,
        })
    }
}

impl FromStr for GraphSource {
    type Err = HarnessError;

    /// `file:PATH`, a generator such as `ring:6` or `grid:2x3`, or a bare path.
    fn from_str(s: &str) -> Result<Self> {
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(Self::File(PathBuf::from(path)));
        }
        let head = s.split(':').next().unwrap_or_default();
        if matches!(head, "ring" | "path" | "complete" | "grid" | "random") && s.contains(':') {
            return Ok(Self::Generated(s.parse::<Topology>()?));
        }
        Ok(Self::File(PathBuf::from(s)))
    }
}

impl fmt::Display for GraphSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Generated(t) => write!(f, "{t}"),
            Self::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InitSource {
    File(PathBuf),
    Random { count: u64, seed: u64 },
    Exhaustive,
    Witness,
}

impl FromStr for InitSource {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || HarnessError::Usage(format!("bad init source `{s}` (file:PATH | random:COUNT:SEED | exhaustive | witness)"));
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(Self::File(PathBuf::from(path)));
        }
        match s {
            "exhaustive" => return Ok(Self::Exhaustive),
            "witness" => return Ok(Self::Witness),
            _ => {}
        }
        let rest = s.strip_prefix("random:").ok_or_else(bad)?;
        let (count, seed) = rest.split_once(':').ok_or_else(bad)?;
        let count: u64 = count.parse().map_err(|_| bad())?;
        if count == 0 {
            return Err(HarnessError::Usage("random init count must be positive".into()));
        }
        Ok(Self::Random {
            count,
            seed: seed.parse().map_err(|_| bad())?,
        })
    }
}

impl fmt::Display for InitSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::File(p) => write!(f, "file:{}", p.display()),
            Self::Random { count, seed } => write!(f, "random:{count}:{seed}"),
            Self::Exhaustive => f.write_str("exhaustive"),
            Self::Witness => f.write_str("witness"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    JsonLines,
}

impl FromStr for OutputFormat {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json-lines" | "jsonl" => Ok(Self::JsonLines),
            other => Err(HarnessError::Usage(format!("unknown format `{other}` (csv | json-lines)"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Csv => "csv",
            Self::JsonLines => "json-lines",
        })
    }
}

/// Everything needed to reproduce a batch of runs.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub graph: GraphSource,
    pub protocol: ProtocolKind,
    /// Dijkstra's `K`; ignored by SSME.
    pub states: Option<i64>,
    pub daemon: String,
    /// Activation probability of `dist-rand`.
    pub prob: f64,
    pub seed: u64,
    pub init: InitSource,
    /// `None` selects the protocol and daemon default.
    pub max_steps: Option<usize>,
    /// Steps recorded after the first legitimate configuration.
    pub tail: usize,
    pub out: PathBuf,
    pub format: OutputFormat,
    /// Cap on exhaustive configuration enumeration.
    pub budget: u64,
    /// Write one JSON trace per run.
    pub traces: bool,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            graph: GraphSource::Generated(Topology::Ring(4)),
            protocol: ProtocolKind::Ssme,
            states: None,
            daemon: "sync".into(),
            prob: 0.5,
            seed: 0,
            init: InitSource::Random { count: 1, seed: 0 },
            max_steps: None,
            tail: 0,
            out: PathBuf::from("out"),
            format: OutputFormat::Csv,
            budget: DEFAULT_CONFIG_BUDGET,
            traces: true,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| HarnessError::Usage(format!("bad value `{value}` for `{key}`")))
}

impl ExperimentSpec {
    /// Sets one field by its configuration-file key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim().replace('-', "_").as_str() {
            "graph" => self.graph = value.parse()?,
            "protocol" => self.protocol = value.parse()?,
            "states" => self.states = if value == "default" { None } else { Some(parse_value(key, value)?) },
            "daemon" => self.daemon = value.to_string(),
            "prob" => self.prob = parse_value(key, value)?,
            "seed" => self.seed = parse_value(key, value)?,
            "init" => self.init = value.parse()?,
            "max_steps" => self.max_steps = if value == "default" { None } else { Some(parse_value(key, value)?) },
            "tail" => self.tail = parse_value(key, value)?,
            "out" => self.out = PathBuf::from(value),
            "format" => self.format = value.parse()?,
            "budget" => self.budget = parse_value(key, value)?,
            "traces" => self.traces = parse_value(key, value)?,
            other => return Err(HarnessError::Usage(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or_default().trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| HarnessError::Usage(format!("line {}: expected `key = value`", i + 1)))?;
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let mut spec = Self::default();
        spec.apply_text(&text)?;
        Ok(spec)
    }

    /// Builds the graph, protocol and daemon and fills in defaults.
    pub fn resolve(&self) -> Result<Experiment> {
        if self.budget == 0 {
            return Err(HarnessError::Usage("budget must be positive".into()));
        }
        if self.max_steps == Some(0) {
            return Err(HarnessError::Usage("max_steps must be positive".into()));
        }
        if let InitSource::File(p) = &self.init {
            if !p.exists() {
                return Err(HarnessError::io(p, std::io::ErrorKind::NotFound.into()));
            }
        }
        let graph = self.graph.load()?;
        let protocol = self.protocol.build(graph, self.states)?;
        let daemon = DaemonKind::from_name(&self.daemon, self.prob)?;
        let max_steps = self
            .max_steps
            .unwrap_or_else(|| default_step_budget(protocol.as_ref(), daemon));
        let mut effective = self.clone();
        effective.max_steps = Some(max_steps);
        if self.protocol == ProtocolKind::Dijkstra {
            effective.states = Some(protocol.domain_size() as i64);
        }
        Ok(Experiment {
            spec: effective,
            protocol,
            daemon,
        })
    }
}

impl fmt::Display for ExperimentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "graph = {}", self.graph)?;
        writeln!(f, "protocol = {}", self.protocol)?;
        match self.states {
            Some(k) => writeln!(f, "states = {k}")?,
            None => writeln!(f, "states = default")?,
        }
        writeln!(f, "daemon = {}", self.daemon)?;
        writeln!(f, "prob = {}", self.prob)?;
        writeln!(f, "seed = {}", self.seed)?;
        writeln!(f, "init = {}", self.init)?;
        match self.max_steps {
            Some(m) => writeln!(f, "max_steps = {m}")?,
            None => writeln!(f, "max_steps = default")?,
        }
        writeln!(f, "tail = {}", self.tail)?;
        writeln!(f, "out = {}", self.out.display())?;
        writeln!(f, "format = {}", self.format)?;
        writeln!(f, "budget = {}", self.budget)?;
        write!(f, "traces = {}", self.traces)
    }
}

/// Step budget when none is given: the synchronous default for the
/// synchronous daemon, otherwise the protocol's unfair bound plus that
/// default, or `n` times the default when no bound is known.
pub fn default_step_budget(protocol: &dyn Protocol, daemon: DaemonKind) -> usize {
    let base = default_max_steps(protocol);
    match (daemon, protocol.unfair_bound()) {
        (DaemonKind::Synchronous, _) => base,
        (_, Some(bound)) => base.saturating_add(bound as usize),
        (_, None) => base.saturating_mul(protocol.graph().n()),
    }
}

/// A resolved spec, ready to run.
pub struct Experiment {
    /// The effective spec: every default materialized.
    pub spec: ExperimentSpec,
    pub protocol: Box<dyn Protocol>,
    pub daemon: DaemonKind,
}

/// One finished run.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub init: Configuration,
    /// Seed handed to the daemon for this run.
    pub run_seed: u64,
    pub trace: Trace,
    pub conv_me: ConvergenceIndex,
    pub conv_au: ConvergenceIndex,
    pub summary: SummaryRow,
}

/// Per-run daemon seed, so runs in a batch draw independent schedules.
pub fn run_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl Experiment {
    pub fn max_steps(&self) -> usize {
        self.spec.max_steps.expect("resolved spec has a step budget")
    }

    pub fn graph_label(&self) -> String {
        self.spec.graph.to_string()
    }

    pub fn daemon_label(&self) -> String {
        self.daemon.to_string()
    }

    pub fn initial_configs(&self) -> Result<Vec<Configuration>> {
        let p = self.protocol.as_ref();
        let space = ConfigSpace::of(p);
        Ok(match &self.spec.init {
            InitSource::File(path) => {
                let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
                let config = Configuration::parse(&text)
                    .map_err(|e| HarnessError::Usage(format!("{}: {e}", path.display())))?;
                vec![Configuration::validated(config.into_inner(), p)?]
            }
            InitSource::Random { count, seed } => (0..*count)
                .map(|i| Configuration::new(space.sample(*seed, i)))
                .collect(),
            InitSource::Exhaustive => {
                let size = space.check_budget(self.spec.budget)?;
                (0..size).map(|i| Configuration::new(space.decode(i))).collect()
            }
            InitSource::Witness => vec![lower_bound_witness(p)?.config],
        })
    }

    /// Runs from `init` with the daemon seeded for position `index`.
    pub fn run_one(&self, init: &Configuration, index: u64) -> Result<RunOutcome> {
        let seed = run_seed(self.spec.seed, index);
        let mut policy = DaemonPolicy::new(self.daemon, seed)?;
        let options = RunOptions::new(self.max_steps(), StopCondition::OnLegitimate { tail: self.spec.tail });
        let trace = run(self.protocol.as_ref(), init, &mut policy, options)?;
        let conv_me = convergence_index_me(&trace);
        let conv_au = convergence_index_au(&trace);
        let after = match conv_au {
            ConvergenceIndex::Determined(i) | ConvergenceIndex::Undetermined(i) => i,
        };
        let summary = SummaryRow {
            graph: self.graph_label(),
            protocol: self.spec.protocol.to_string(),
            daemon: self.daemon_label(),
            seed: self.spec.seed,
            init_hash: fnv1a(init.to_text().as_bytes()),
            conv_me: value_of(conv_me),
            conv_au: value_of(conv_au),
            violations: trace.privileged.iter().skip(after).filter(|p| p.len() > 1).count(),
            steps: trace.len(),
            reason: match conv_me {
                ConvergenceIndex::Undetermined(_) => "undetermined".to_string(),
                ConvergenceIndex::Determined(_) => trace.termination.to_string(),
            },
        };
        Ok(RunOutcome {
            init: init.clone(),
            run_seed: seed,
            trace,
            conv_me,
            conv_au,
            summary,
        })
    }

    /// Runs every initial configuration in parallel; results keep input order.
    pub fn run_all(&self) -> Result<Vec<RunOutcome>> {
        let inits = self.initial_configs()?;
        inits
            .par_iter()
            .enumerate()
            .map(|(i, init)| self.run_one(init, i as u64))
            .collect()
    }
}

fn value_of(c: ConvergenceIndex) -> usize {
    match c {
        ConvergenceIndex::Determined(i) | ConvergenceIndex::Undetermined(i) => i,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sources_parse_and_print_back() {
        for s in ["ring:4", "grid:2x3", "file:g.txt"] {
            assert_eq!(s.parse::<GraphSource>().unwrap().to_string(), s);
        }
        assert_eq!(
            "graphs/ring.txt".parse::<GraphSource>().unwrap(),
            GraphSource::File("graphs/ring.txt".into())
        );
        assert!("ring:x".parse::<GraphSource>().is_err());
        for s in ["random:10:3", "exhaustive", "witness", "file:a.cfg"] {
            assert_eq!(s.parse::<InitSource>().unwrap().to_string(), s);
        }
        assert!("random:0:1".parse::<InitSource>().is_err());
        assert!("random:5".parse::<InitSource>().is_err());
    }

    #[test]
    fn effective_spec_round_trips() {
        let mut spec = ExperimentSpec::default();
        spec.apply_text("graph = path:3 # comment\ndaemon = dist-rand\nprob = 0.3\nseed = 9\n").unwrap();
        let exp = spec.resolve().unwrap();
        let text = exp.spec.to_string();
        assert!(text.contains("max_steps = "));
        let mut again = ExperimentSpec::default();
        again.apply_text(&text).unwrap();
        assert_eq!(again, exp.spec);
        assert!(spec.clone().set("colour", "red").is_err());
    }

    #[test]
    fn step_budget_defaults() {
        let exp = ExperimentSpec {
            graph: "path:2".parse().unwrap(),
            daemon: "central-rand".into(),
            ..Default::default()
        }
        .resolve()
        .unwrap();
        assert_eq!(exp.max_steps(), 28 + 4 * (4 + 1 + 10));
        let sync = ExperimentSpec {
            graph: "path:2".parse().unwrap(),
            ..Default::default()
        }
        .resolve()
        .unwrap();
        assert_eq!(sync.max_steps(), 4 * (4 + 1 + 10));
    }

    #[test]
    fn witness_run_on_path2() {
        let exp = ExperimentSpec {
            graph: "path:2".parse().unwrap(),
            init: InitSource::Witness,
            ..Default::default()
        }
        .resolve()
        .unwrap();
        let out = exp.run_all().unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].init.states(), &[4, 6]);
        assert_eq!(out[0].summary.conv_me, 1);
        assert_eq!(out[0].summary.reason, "converged");
    }

    #[test]
    fn run_seeds_differ_per_index() {
        assert_ne!(run_seed(1, 0), run_seed(1, 1));
        assert_eq!(run_seed(5, 3), run_seed(5, 3));
    }
}
