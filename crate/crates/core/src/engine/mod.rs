//! Execution of protocols under daemons, trace recording and convergence
//! measurement.
//!
//! One step is one action of the daemon, whatever the size of the activated
//! set. Actions are evaluated against the pre-step configuration.

mod islands;
mod lemmas;
mod search;
mod witness;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::daemon::DaemonPolicy;
use crate::error::EngineError;
use crate::graph::Graph;
use crate::protocol::{Protocol, Rule};

pub use islands::{islands, Island, IslandReport};
pub use lemmas::{check_lemmas, lemma4_holds, LemmaViolation};
pub use search::{
    worst_case_sync, worst_case_unfair, ConfigSource, ConfigSpace, SyncWorstCase, UnfairWorstCase,
    DEFAULT_CONFIG_BUDGET,
};
pub use witness::{lower_bound_witness, Witness};

/// Global assignment of one state per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Configuration(Vec<i64>);

impl Configuration {
    pub fn new(states: Vec<i64>) -> Self {
        Self(states)
    }

    /// Checks arity and domain membership against `protocol`.
    pub fn validated(states: Vec<i64>, protocol: &dyn Protocol) -> Result<Self, EngineError> {
        let n = protocol.graph().n();
        if states.len() != n {
            return Err(EngineError::Arity {
                expected: n,
                got: states.len(),
            });
        }
        let domain = protocol.domain();
        if let Some((vertex, &value)) = states.iter().enumerate().find(|(_, s)| !domain.contains(s)) {
            return Err(EngineError::OutOfDomain { vertex, value });
        }
        Ok(Self(states))
    }

    pub fn uniform(n: usize, value: i64) -> Self {
        Self(vec![value; n])
    }

    pub fn states(&self) -> &[i64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<i64> {
        self.0
    }

    /// One integer per line, in vertex order.
    pub fn to_text(&self) -> String {
        self.0.iter().map(|s| format!("{s}\n")).collect()
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        text.lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| l.parse::<i64>().map_err(|e| format!("invalid state `{l}`: {e}")))
            .collect::<Result<Vec<_>, _>>()
            .map(Self)
    }
}

impl Deref for Configuration {
    type Target = [i64];

    fn deref(&self) -> &[i64] {
        &self.0
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

/// One action of an execution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub activated: Vec<usize>,
    pub rules: Vec<Rule>,
    /// Privileged vertices that were activated: they run their critical section.
    pub cs_events: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    MaxSteps,
    Terminal,
    Converged,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::MaxSteps => "max_steps",
            Self::Terminal => "terminal",
            Self::Converged => "converged",
        })
    }
}

/// A recorded execution prefix `gamma_0 .. gamma_T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub configs: Vec<Configuration>,
    pub steps: Vec<StepRecord>,
    /// Privileged vertices of each configuration.
    pub privileged: Vec<Vec<usize>>,
    /// Legitimacy flag of each configuration.
    pub legitimate: Vec<bool>,
    pub termination: Termination,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn first_legitimate(&self) -> Option<usize> {
        self.legitimate.iter().position(|&b| b)
    }

    pub fn last(&self) -> &Configuration {
        self.configs.last().expect("trace holds its initial configuration")
    }

    /// Number of configurations with more than one privileged vertex.
    pub fn violations(&self) -> usize {
        self.privileged.iter().filter(|p| p.len() > 1).count()
    }

    pub fn rule_at(&self, step: usize, v: usize) -> Option<Rule> {
        let rec = &self.steps[step];
        rec.activated
            .iter()
            .position(|&u| u == v)
            .map(|i| rec.rules[i])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopCondition {
    /// Run until terminal or `max_steps`.
    Never,
    /// Stop `tail` steps after the first legitimate configuration.
    OnLegitimate { tail: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub max_steps: usize,
    pub stop: StopCondition,
}

impl RunOptions {
    pub fn new(max_steps: usize, stop: StopCondition) -> Self {
        Self { max_steps, stop }
    }
}

/// Default synchronous step budget `4 (2n + diam + |domain|)`: enough for
/// stabilization plus two clock cycles.
pub fn default_max_steps(protocol: &dyn Protocol) -> usize {
    let g = protocol.graph();
    4 * (2 * g.n() + g.diam() + protocol.domain_size())
}

pub fn enabled_set(protocol: &dyn Protocol, config: &[i64]) -> Vec<usize> {
    (0..protocol.graph().n())
        .filter(|&v| protocol.enabled_rule(config, v).is_some())
        .collect()
}

pub fn privileged_set(protocol: &dyn Protocol, config: &[i64]) -> Vec<usize> {
    (0..protocol.graph().n())
        .filter(|&v| protocol.is_privileged(config, v))
        .collect()
}

/// Mutual exclusion safety on a single configuration.
pub fn me_safety_ok(privileged: &[usize]) -> bool {
    privileged.len() <= 1
}

/// Applies one action; returns the successor and the rules fired (aligned
/// with `activated`).
pub fn step_with_rules(
    protocol: &dyn Protocol,
    config: &[i64],
    activated: &[usize],
) -> Result<(Vec<i64>, Vec<Rule>), EngineError> {
    if activated.is_empty() {
        return Err(EngineError::EmptyActivation);
    }
    let mut next = config.to_vec();
    let mut rules = Vec::with_capacity(activated.len());
    for &v in activated {
        let rule = protocol
            .enabled_rule(config, v)
            .ok_or(EngineError::NotEnabled(v))?;
        next[v] = protocol.apply(config, v, rule);
        rules.push(rule);
    }
    Ok((next, rules))
}

pub fn step(
    protocol: &dyn Protocol,
    config: &[i64],
    activated: &[usize],
) -> Result<Configuration, EngineError> {
    step_with_rules(protocol, config, activated).map(|(c, _)| Configuration(c))
}

/// Runs `protocol` from `init` under `policy`.
pub fn run(
    protocol: &dyn Protocol,
    init: &Configuration,
    policy: &mut DaemonPolicy,
    options: RunOptions,
) -> Result<Trace, EngineError> {
    let mut current = init.0.clone();
    let mut trace = Trace {
        configs: Vec::new(),
        steps: Vec::new(),
        privileged: Vec::new(),
        legitimate: Vec::new(),
        termination: Termination::MaxSteps,
    };
    let mut stop_at = None;
    loop {
        let privileged = privileged_set(protocol, &current);
        let legit = protocol.is_legitimate(&current);
        let index = trace.configs.len();
        trace.configs.push(Configuration(current.clone()));
        trace.privileged.push(privileged.clone());
        trace.legitimate.push(legit);

        if let (StopCondition::OnLegitimate { tail }, true, None) = (options.stop, legit, stop_at) {
            stop_at = Some(index + tail);
        }
        if stop_at == Some(index) {
            trace.termination = Termination::Converged;
            break;
        }
        if index >= options.max_steps {
            trace.termination = Termination::MaxSteps;
            break;
        }
        let enabled = enabled_set(protocol, &current);
        if enabled.is_empty() {
            trace.termination = Termination::Terminal;
            break;
        }
        let activated = policy.select_scored(&enabled, |v| {
            step_with_rules(protocol, &current, &[v])
                .map(|(next, _)| protocol.disorder(&next))
                .unwrap_or(0)
        })?;
        let (next, rules) = step_with_rules(protocol, &current, &activated)?;
        let cs_events = activated
            .iter()
            .copied()
            .filter(|v| privileged.binary_search(v).is_ok())
            .collect();
        trace.steps.push(StepRecord {
            activated,
            rules,
            cs_events,
        });
        current = next;
    }
    Ok(trace)
}

/// Outcome of a convergence measurement on a finite trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvergenceIndex {
    Determined(usize),
    /// The trace never reached the legitimate set; the value is a lower
    /// bound (one past the last observed violation).
    Undetermined(usize),
}

impl ConvergenceIndex {
    pub fn value(self) -> Option<usize> {
        match self {
            Self::Determined(i) => Some(i),
            Self::Undetermined(_) => None,
        }
    }
}

impl fmt::Display for ConvergenceIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Determined(i) => write!(f, "{i}"),
            Self::Undetermined(lb) => write!(f, ">={lb}?"),
        }
    }
}

/// Smallest `i` such that every recorded configuration from `i` on has at
/// most one privileged vertex. Sound only once the trace reached the closed
/// legitimate set, otherwise undetermined.
pub fn convergence_index_me(trace: &Trace) -> ConvergenceIndex {
    let index = trace
        .privileged
        .iter()
        .rposition(|p| !me_safety_ok(p))
        .map_or(0, |last| last + 1);
    if trace.first_legitimate().is_some() {
        ConvergenceIndex::Determined(index)
    } else {
        ConvergenceIndex::Undetermined(index)
    }
}

/// Smallest `i` such that every recorded configuration from `i` on is
/// legitimate. Undetermined if the last configuration is not legitimate.
pub fn convergence_index_au(trace: &Trace) -> ConvergenceIndex {
    match trace.legitimate.iter().rposition(|&b| !b) {
        None => ConvergenceIndex::Determined(0),
        Some(last) if last + 1 < trace.legitimate.len() => ConvergenceIndex::Determined(last + 1),
        Some(last) => ConvergenceIndex::Undetermined(last + 1),
    }
}

/// Critical-section events per vertex over steps `conv .. conv + window`,
/// where `conv` is the ME convergence index. `None` if undetermined.
pub fn liveness_report(trace: &Trace, n: usize, window: usize) -> Option<Vec<usize>> {
    let conv = convergence_index_me(trace).value()?;
    let mut counts = vec![0; n];
    for rec in trace.steps.iter().skip(conv).take(window) {
        for &v in &rec.cs_events {
            counts[v] += 1;
        }
    }
    Some(counts)
}

/// The `k`-local state of `v`: states of every vertex within `k` hops.
pub fn local_state(config: &[i64], graph: &Graph, v: usize, k: usize) -> BTreeMap<usize, i64> {
    graph
        .ball(v, k)
        .into_iter()
        .map(|u| (u, config[u]))
        .collect()
}

/// The per-step state sequence of `v` along the trace.
pub fn restrict_trace(trace: &Trace, v: usize) -> Vec<i64> {
    trace.configs.iter().map(|c| c[v]).collect()
}

/// States of `v` in `gamma_0 ..= gamma_k` of the synchronous execution from
/// `init`. A terminal configuration repeats until index `k`.
pub fn sync_restriction(
    protocol: &dyn Protocol,
    init: &Configuration,
    v: usize,
    k: usize,
) -> Result<Vec<i64>, EngineError> {
    let trace = run(
        protocol,
        init,
        &mut DaemonPolicy::synchronous(),
        RunOptions::new(k, StopCondition::Never),
    )?;
    let mut out = restrict_trace(&trace, v);
    let last = *out.last().expect("trace holds its initial configuration");
    out.resize(k + 1, last);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::daemon::DaemonKind;
    use crate::graph::Topology;
    use crate::protocol::{Dijkstra, Ssme};

    fn ssme(t: Topology) -> Ssme {
        Ssme::new(Graph::generate(&t).unwrap())
    }

    fn sync_run(p: &dyn Protocol, init: &[i64], opts: RunOptions) -> Trace {
        run(p, &Configuration::new(init.to_vec()), &mut DaemonPolicy::synchronous(), opts).unwrap()
    }

    #[test]
    fn enabled_sets() {
        let p = ssme(Topology::Path(2));
        assert_eq!(enabled_set(&p, &[0, 0]), vec![0, 1]);
        assert_eq!(enabled_set(&p, &[-2, -1]), vec![0]);
        let d = Dijkstra::new(Graph::generate(&Topology::Ring(3)).unwrap(), 4).unwrap();
        assert_eq!(enabled_set(&d, &[0, 0, 0]), vec![0]);
    }

    #[test]
    fn steps() {
        let p = ssme(Topology::Path(2));
        assert_eq!(step(&p, &[0, 0], &[0, 1]).unwrap().states(), &[1, 1]);
        assert_eq!(step(&p, &[0, 0], &[0]).unwrap().states(), &[1, 0]);
        assert!(matches!(step(&p, &[-2, -1], &[1]), Err(EngineError::NotEnabled(1))));
        assert!(matches!(step(&p, &[0, 0], &[]), Err(EngineError::EmptyActivation)));
        let d = Dijkstra::new(Graph::generate(&Topology::Ring(3)).unwrap(), 4).unwrap();
        assert_eq!(step(&d, &[0, 0, 0], &[0]).unwrap().states(), &[1, 0, 0]);
    }

    #[test]
    fn legitimate_start_stays_legitimate() {
        let p = ssme(Topology::Ring(5));
        let t = sync_run(&p, &[3, 4, 4, 3, 2], RunOptions::new(100, StopCondition::Never));
        assert!(t.legitimate.iter().all(|&b| b));
        assert_eq!(convergence_index_au(&t), ConvergenceIndex::Determined(0));
        assert_eq!(convergence_index_me(&t), ConvergenceIndex::Determined(0));
    }

    #[test]
    fn bottom_of_stem_climbs_in_alpha_steps() {
        let p = ssme(Topology::Ring(4));
        let alpha = p.params().alpha();
        let init = vec![-alpha; 4];
        let t = sync_run(&p, &init, RunOptions::new(40, StopCondition::Never));
        for s in 0..alpha as usize {
            assert!(t.steps[s].rules.iter().all(|&r| r == Rule::Converge));
        }
        assert_eq!(t.configs[alpha as usize].states(), &[0, 0, 0, 0]);
        assert!(t.steps[alpha as usize..].iter().all(|s| s.rules.iter().all(|&r| r == Rule::Normal)));
        assert_eq!(convergence_index_au(&t), ConvergenceIndex::Determined(alpha as usize));
    }

    #[test]
    fn single_vertex_cycles() {
        let p = ssme(Topology::Path(1));
        let k = p.params().k() as usize;
        let t = sync_run(&p, &[0], RunOptions::new(3 * k, StopCondition::Never));
        assert_eq!(t.termination, Termination::MaxSteps);
        for (s, rec) in t.steps.iter().enumerate() {
            assert_eq!(rec.activated, vec![0]);
            assert_eq!(rec.cs_events.is_empty(), t.configs[s][0] != 2);
        }
        assert_eq!(liveness_report(&t, 1, k).unwrap(), vec![1]);
        assert_eq!(liveness_report(&t, 1, 0).unwrap(), vec![0]);
    }

    #[test]
    fn privileged_sets_and_safety() {
        let p = ssme(Topology::Path(2));
        assert_eq!(privileged_set(&p, &[4, 6]), vec![0, 1]);
        assert!(!me_safety_ok(&privileged_set(&p, &[4, 6])));
        assert!(me_safety_ok(&privileged_set(&p, &[0, 0])));
        let d = Dijkstra::new(Graph::generate(&Topology::Ring(3)).unwrap(), 4).unwrap();
        assert_eq!(privileged_set(&d, &[0, 1, 2]), vec![1, 2]);
    }

    #[test]
    fn two_privileged_start_converges_in_one() {
        let p = ssme(Topology::Path(2));
        let t = sync_run(&p, &[4, 6], RunOptions::new(50, StopCondition::OnLegitimate { tail: 0 }));
        assert_eq!(t.configs[1].states(), &[-2, -2]);
        assert_eq!(t.termination, Termination::Converged);
        assert_eq!(convergence_index_me(&t), ConvergenceIndex::Determined(1));
        assert_eq!(t.violations(), 1);
    }

    #[test]
    fn truncated_trace_is_undetermined() {
        let p = ssme(Topology::Path(2));
        let t = sync_run(&p, &[4, 6], RunOptions::new(1, StopCondition::Never));
        assert_eq!(convergence_index_me(&t), ConvergenceIndex::Undetermined(1));
        assert!(convergence_index_au(&t).value().is_none());
        assert!(liveness_report(&t, 2, 5).is_none());
    }

    #[test]
    fn local_state_and_restriction() {
        let g = Graph::generate(&Topology::Path(4)).unwrap();
        let c = [5, 6, 7, 8];
        assert_eq!(local_state(&c, &g, 1, 0), BTreeMap::from([(1, 6)]));
        assert_eq!(local_state(&c, &g, 1, 1).len(), 3);
        assert_eq!(local_state(&c, &g, 1, g.diam()).len(), 4);
        let p = Ssme::new(g);
        let t = sync_run(&p, &[0, 0, 0, 0], RunOptions::new(3, StopCondition::Never));
        assert_eq!(restrict_trace(&t, 2), vec![0, 1, 2, 3]);
    }

    #[test]
    fn configuration_text_and_validation() {
        let p = ssme(Topology::Path(2));
        let c = Configuration::parse("4\n# x\n6\n").unwrap();
        assert_eq!(c.states(), &[4, 6]);
        assert_eq!(Configuration::parse(&c.to_text()).unwrap(), c);
        assert!(Configuration::validated(vec![4], &p).is_err());
        assert!(Configuration::validated(vec![4, 8], &p).is_err());
        assert!(Configuration::validated(vec![-2, 7], &p).is_ok());
    }

    #[test]
    fn central_runs_record_single_activations() {
        let p = ssme(Topology::Ring(4));
        let mut policy = DaemonPolicy::new(DaemonKind::CentralAdversarial, 0).unwrap();
        let t = run(
            &p,
            &Configuration::new(vec![5, 17, 2, 9]),
            &mut policy,
            RunOptions::new(2000, StopCondition::OnLegitimate { tail: 3 }),
        )
        .unwrap();
        assert_eq!(t.termination, Termination::Converged);
        assert!(t.steps.iter().all(|s| s.activated.len() == 1));
        for (i, rec) in t.steps.iter().enumerate() {
            for (j, v) in t.configs[i].iter().enumerate() {
                if !rec.activated.contains(&j) {
                    assert_eq!(*v, t.configs[i + 1][j]);
                }
            }
        }
    }
}
