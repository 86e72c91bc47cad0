//! Guarded-rule protocols.
//!
//! A protocol is evaluated per vertex on a configuration (one integer state
//! per vertex). A vertex is enabled when one of its guards holds; its action
//! reads only the pre-step configuration, so a set of activated vertices can
//! be applied simultaneously.

use std::fmt;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::clock::ClockParams;
use crate::error::ProtocolError;
use crate::graph::Graph;

/// Label of the rule a vertex executes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    /// Normal increment of a correct clock (`NA`).
    #[serde(rename = "NA")]
    Normal,
    /// Converging increment along the initial stem (`CA`).
    #[serde(rename = "CA")]
    Converge,
    /// Reset to the bottom of the stem (`RA`).
    #[serde(rename = "RA")]
    Reset,
    /// Dijkstra root: advance its counter.
    #[serde(rename = "ADV")]
    Advance,
    /// Dijkstra non-root: copy the predecessor's counter.
    #[serde(rename = "CPY")]
    Copy,
}

impl Rule {
    pub fn label(self) -> &'static str {
        match self {
            Rule::Normal => "NA",
            Rule::Converge => "CA",
            Rule::Reset => "RA",
            Rule::Advance => "ADV",
            Rule::Copy => "CPY",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub trait Protocol: Send + Sync {
    fn name(&self) -> &'static str;

    fn graph(&self) -> &Graph;

    /// Per-vertex state domain; contiguous for every protocol here.
    fn domain(&self) -> RangeInclusive<i64>;

    /// The unique rule enabled at `v`, if any.
    fn enabled_rule(&self, config: &[i64], v: usize) -> Option<Rule>;

    /// New state of `v` after executing `rule` on the pre-step `config`.
    fn apply(&self, config: &[i64], v: usize, rule: Rule) -> i64;

    fn is_privileged(&self, config: &[i64], v: usize) -> bool;

    /// Membership in the protocol's closed legitimate set.
    fn is_legitimate(&self, config: &[i64]) -> bool;

    /// Heuristic distance from legitimacy used by adversarial schedulers.
    /// Larger means further away.
    fn disorder(&self, config: &[i64]) -> usize;

    fn domain_size(&self) -> usize {
        let d = self.domain();
        (d.end() - d.start() + 1) as usize
    }

    /// Known bound on actions to legitimacy under any daemon.
    fn unfair_bound(&self) -> Option<u64> {
        None
    }
}

/// The speculatively stabilizing mutual exclusion protocol: asynchronous
/// unison over a cherry clock with `alpha = n`, `K = (2n-1)(diam+1)+2`, where
/// vertex `v` is privileged when its register equals `2n + 2 diam id_v`.
#[derive(Clone, Debug)]
pub struct Ssme {
    graph: Graph,
    params: ClockParams,
    thresholds: Vec<i64>,
}

impl Ssme {
    pub fn new(graph: Graph) -> Self {
        let (n, diam) = (graph.n(), graph.diam());
        let params = ClockParams::for_ssme(n, diam);
        let thresholds = (0..n).map(|id| privilege_threshold(id, n, diam)).collect();
        Self {
            graph,
            params,
            thresholds,
        }
    }

    pub fn params(&self) -> &ClockParams {
        &self.params
    }

    pub fn threshold(&self, v: usize) -> i64 {
        self.thresholds[v]
    }

    /// `correct_v(u)`: both registers correct and within ring distance 1.
    pub fn correct(&self, config: &[i64], v: usize, u: usize) -> bool {
        let p = &self.params;
        p.is_stab(config[v]) && p.is_stab(config[u]) && p.distance(config[v], config[u]) <= 1
    }

    pub fn all_correct(&self, config: &[i64], v: usize) -> bool {
        self.graph
            .neighbors(v)
            .iter()
            .all(|&u| self.correct(config, v, u))
    }

    pub fn normal_step(&self, config: &[i64], v: usize) -> bool {
        self.all_correct(config, v)
            && self
                .graph
                .neighbors(v)
                .iter()
                .all(|&u| self.params.leq_local(config[v], config[u]))
    }

    pub fn converge_step(&self, config: &[i64], v: usize) -> bool {
        let p = &self.params;
        p.is_init_strict(config[v])
            && self
                .graph
                .neighbors(v)
                .iter()
                .all(|&u| p.is_init(config[u]) && p.leq_init(config[v], config[u]))
    }

    pub fn reset_init(&self, config: &[i64], v: usize) -> bool {
        !self.all_correct(config, v) && !self.params.is_init(config[v])
    }

    /// Asynchronous-unison legitimacy: every register correct and every edge
    /// within ring distance 1.
    pub fn is_unison_legitimate(&self, config: &[i64]) -> bool {
        is_unison_legitimate(config, &self.graph, &self.params)
    }

    /// Upper bound on the number of actions to reach unison legitimacy
    /// under any daemon.
    pub fn unfair_step_bound(&self) -> u64 {
        unfair_step_bound(self.graph.n(), self.graph.diam())
    }

    /// Number of vertices enabled for a reset.
    pub fn reset_enabled_count(&self, config: &[i64]) -> usize {
        (0..self.graph.n())
            .filter(|&v| self.reset_init(config, v))
            .count()
    }
}

impl Protocol for Ssme {
    fn name(&self) -> &'static str {
        "ssme"
    }

    fn graph(&self) -> &Graph {
        &self.graph
    }

    fn domain(&self) -> RangeInclusive<i64> {
        self.params.min_value()..=self.params.max_value()
    }

    fn enabled_rule(&self, config: &[i64], v: usize) -> Option<Rule> {
        if self.normal_step(config, v) {
            Some(Rule::Normal)
        } else if self.converge_step(config, v) {
            Some(Rule::Converge)
        } else if self.reset_init(config, v) {
            Some(Rule::Reset)
        } else {
            None
        }
    }

    fn apply(&self, config: &[i64], v: usize, rule: Rule) -> i64 {
        ssme_apply(rule, config[v], &self.params)
    }

    fn is_privileged(&self, config: &[i64], v: usize) -> bool {
        config[v] == self.thresholds[v]
    }

    fn is_legitimate(&self, config: &[i64]) -> bool {
        self.is_unison_legitimate(config)
    }

    fn disorder(&self, config: &[i64]) -> usize {
        self.reset_enabled_count(config)
    }

    fn unfair_bound(&self) -> Option<u64> {
        Some(self.unfair_step_bound())
    }
}

/// Critical-section threshold `2n + 2 diam id`.
/// `2 diam n^3 + (alpha + 1) n^2 + (alpha - 2 diam) n` with `alpha = n`.
pub fn unfair_step_bound(n: usize, diam: usize) -> u64 {
    let (n, d) = (n as i128, diam as i128);
    let alpha = n;
    let b = 2 * d * n.pow(3) + (alpha + 1) * n * n + (alpha - 2 * d) * n;
    b.max(0) as u64
}

pub fn privilege_threshold(id: usize, n: usize, diam: usize) -> i64 {
    2 * n as i64 + 2 * diam as i64 * id as i64
}

pub fn ssme_privileged(r: i64, id: usize, n: usize, diam: usize) -> bool {
    r == privilege_threshold(id, n, diam)
}

/// Action of an SSME rule on a register: `NA`/`CA` increment, `RA` resets.
pub fn ssme_apply(rule: Rule, r: i64, params: &ClockParams) -> i64 {
    match rule {
        Rule::Normal | Rule::Converge => params.increment(r),
        Rule::Reset => params.reset(),
        Rule::Advance | Rule::Copy => r,
    }
}

pub fn is_unison_legitimate(config: &[i64], graph: &Graph, params: &ClockParams) -> bool {
    config.iter().all(|&r| params.is_stab(r))
        && graph
            .edges()
            .iter()
            .all(|&(u, v)| params.distance(config[u], config[v]) <= 1)
}

/// Dijkstra's K-state token ring. Vertex `i` reads its ring predecessor
/// `i-1` (the root, vertex 0, reads `n-1`).
#[derive(Clone, Debug)]
pub struct Dijkstra {
    graph: Graph,
    k: i64,
}

impl Dijkstra {
    pub fn new(graph: Graph, k: i64) -> Result<Self, ProtocolError> {
        let n = graph.n();
        if k <= n as i64 {
            return Err(ProtocolError::TooFewStates { n, k });
        }
        for i in 1..n {
            if !graph.has_edge(i - 1, i) {
                return Err(ProtocolError::NotARing(i - 1, i));
            }
        }
        if n > 2 && !graph.has_edge(n - 1, 0) {
            return Err(ProtocolError::NotARing(n - 1, 0));
        }
        Ok(Self { graph, k })
    }

    /// Smallest state count that guarantees stabilization, `K = n + 1`.
    pub fn with_default_states(graph: Graph) -> Result<Self, ProtocolError> {
        let k = graph.n() as i64 + 1;
        Self::new(graph, k)
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    fn predecessor(&self, v: usize) -> usize {
        if v == 0 {
            self.graph.n() - 1
        } else {
            v - 1
        }
    }

    pub fn privileged_count(&self, config: &[i64]) -> usize {
        (0..self.graph.n())
            .filter(|&v| self.is_privileged(config, v))
            .count()
    }
}

impl Protocol for Dijkstra {
    fn name(&self) -> &'static str {
        "dijkstra"
    }

    fn graph(&self) -> &Graph {
        &self.graph
    }

    fn domain(&self) -> RangeInclusive<i64> {
        0..=self.k - 1
    }

    fn enabled_rule(&self, config: &[i64], v: usize) -> Option<Rule> {
        if !self.is_privileged(config, v) {
            None
        } else if v == 0 {
            Some(Rule::Advance)
        } else {
            Some(Rule::Copy)
        }
    }

    fn apply(&self, config: &[i64], v: usize, rule: Rule) -> i64 {
        match rule {
            Rule::Advance => (config[v] + 1) % self.k,
            Rule::Copy => config[self.predecessor(v)],
            _ => config[v],
        }
    }

    fn is_privileged(&self, config: &[i64], v: usize) -> bool {
        let pred = config[self.predecessor(v)];
        if v == 0 {
            config[0] == pred
        } else {
            config[v] != pred
        }
    }

    fn is_legitimate(&self, config: &[i64]) -> bool {
        self.privileged_count(config) == 1
    }

    fn disorder(&self, config: &[i64]) -> usize {
        self.privileged_count(config)
    }
}

/// Protocol selection by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProtocolKind {
    Ssme,
    Dijkstra,
}

impl std::str::FromStr for ProtocolKind {
    type Err = ProtocolError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ssme" => Ok(Self::Ssme),
            "dijkstra" => Ok(Self::Dijkstra),
            other => Err(ProtocolError::Unknown(other.to_string())),
        }
    }
}

impl fmt::Display for ProtocolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Ssme => "ssme",
            Self::Dijkstra => "dijkstra",
        })
    }
}

impl ProtocolKind {
    /// Instantiates the protocol; `states` overrides Dijkstra's `K`.
    pub fn build(self, graph: Graph, states: Option<i64>) -> Result<Box<dyn Protocol>, ProtocolError> {
        Ok(match self {
            Self::Ssme => Box::new(Ssme::new(graph)),
            Self::Dijkstra => match states {
                Some(k) => Box::new(Dijkstra::new(graph, k)?),
                None => Box::new(Dijkstra::with_default_states(graph)?),
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Topology;

    fn path2() -> Ssme {
        Ssme::new(Graph::generate(&Topology::Path(2)).unwrap())
    }

    #[test]
    fn unfair_bound_values() {
        assert_eq!(path2().unfair_step_bound(), 28);
        assert_eq!(unfair_step_bound(5, 2), 655);
        assert_eq!(unfair_step_bound(1, 0), 3);
    }

    #[test]
    fn thresholds() {
        assert!(ssme_privileged(6, 0, 3, 1));
        assert!(ssme_privileged(10, 2, 3, 1));
        assert_eq!(privilege_threshold(2, 3, 1), (2 * 3 - 2) * (1 + 1) + 2);
        for n in 1..6 {
            for diam in 0..5 {
                for id in 0..n {
                    assert!(!ssme_privileged(-1, id, n, diam));
                }
            }
        }
    }

    #[test]
    fn path2_guards() {
        let p = path2();
        assert_eq!((p.params().alpha(), p.params().k()), (2, 8));
        let all = |c: &[i64]| [p.enabled_rule(c, 0), p.enabled_rule(c, 1)];
        assert_eq!(all(&[0, 0]), [Some(Rule::Normal), Some(Rule::Normal)]);
        assert_eq!(all(&[5, 2]), [Some(Rule::Reset), Some(Rule::Reset)]);
        assert_eq!(all(&[-2, -1]), [Some(Rule::Converge), None]);
    }

    #[test]
    fn ssme_actions() {
        let p = ClockParams::for_ssme(2, 1);
        assert_eq!(ssme_apply(Rule::Normal, 7, &p), 0);
        assert_eq!(ssme_apply(Rule::Reset, 5, &p), -2);
        assert_eq!(ssme_apply(Rule::Converge, -2, &p), -1);
    }

    #[test]
    fn guards_are_mutually_exclusive() {
        for topo in [Topology::Path(2), Topology::Path(3), Topology::Ring(3)] {
            let p = Ssme::new(Graph::generate(&topo).unwrap());
            let n = p.graph().n();
            let dom: Vec<i64> = p.domain().collect();
            let total = dom.len().pow(n as u32);
            let mut config = vec![0; n];
            for mut idx in 0..total {
                for slot in config.iter_mut() {
                    *slot = dom[idx % dom.len()];
                    idx /= dom.len();
                }
                for v in 0..n {
                    let held = [
                        p.normal_step(&config, v),
                        p.converge_step(&config, v),
                        p.reset_init(&config, v),
                    ];
                    assert!(held.iter().filter(|&&b| b).count() <= 1, "{config:?} at {v}");
                }
            }
        }
    }

    #[test]
    fn unison_legitimacy() {
        let p = Ssme::new(Graph::generate(&Topology::Path(2)).unwrap());
        assert!(p.is_unison_legitimate(&[0, 0]));
        assert!(p.is_unison_legitimate(&[7, 0]));
        assert!(!p.is_unison_legitimate(&[-1, 0]));
        let g = Graph::generate(&Topology::Path(2)).unwrap();
        let k12 = ClockParams::new(3, 12).unwrap();
        assert!(!is_unison_legitimate(&[3, 5], &g, &k12));
    }

    #[test]
    fn single_vertex_always_normal() {
        let p = Ssme::new(Graph::generate(&Topology::Path(1)).unwrap());
        // With no neighbors both NA and CA hold vacuously on the stem; their
        // actions coincide and NA is reported.
        for r in p.domain() {
            assert_eq!(p.enabled_rule(&[r], 0), Some(Rule::Normal));
            assert_eq!(p.converge_step(&[r], 0), r < 0);
        }
    }

    #[test]
    fn dijkstra_privileges() {
        let d = Dijkstra::new(Graph::generate(&Topology::Ring(3)).unwrap(), 4).unwrap();
        let privileged = |c: &[i64]| (0..3).filter(|&v| d.is_privileged(c, v)).collect::<Vec<_>>();
        assert_eq!(privileged(&[0, 0, 0]), vec![0]);
        assert_eq!(privileged(&[0, 1, 2]), vec![1, 2]);
        assert_eq!(d.apply(&[0, 0, 0], 0, Rule::Advance), 1);
        assert_eq!(d.apply(&[3, 1, 2], 1, Rule::Copy), 3);
        assert_eq!(d.apply(&[3, 0, 0], 0, Rule::Advance), 0);
    }

    #[test]
    fn dijkstra_rejects_small_k_and_non_rings() {
        let ring = Graph::generate(&Topology::Ring(4)).unwrap();
        assert_eq!(
            Dijkstra::new(ring.clone(), 4).unwrap_err(),
            ProtocolError::TooFewStates { n: 4, k: 4 }
        );
        assert_eq!(Dijkstra::with_default_states(ring).unwrap().k(), 5);
        let path = Graph::generate(&Topology::Path(4)).unwrap();
        assert!(matches!(Dijkstra::new(path, 5), Err(ProtocolError::NotARing(3, 0))));
    }

    #[test]
    fn kinds_by_name() {
        assert_eq!("ssme".parse::<ProtocolKind>().unwrap(), ProtocolKind::Ssme);
        assert_eq!("dijkstra".parse::<ProtocolKind>().unwrap(), ProtocolKind::Dijkstra);
        assert!("bakery".parse::<ProtocolKind>().is_err());
        let g = Graph::generate(&Topology::Ring(5)).unwrap();
        let p = ProtocolKind::Dijkstra.build(g, Some(9)).unwrap();
        assert_eq!(p.domain_size(), 9);
    }
}
