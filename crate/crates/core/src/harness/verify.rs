//! Named property suites over the clock algebra, the guarded rules, the
//! structural lemmas, closure of the legitimate set and the convergence
//! bounds.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::clock::ClockParams;
use crate::daemon::{enumerate_choices, DaemonKind, DaemonPolicy};
use crate::engine::{
    check_lemmas, enabled_set, lower_bound_witness, privileged_set, run, step_with_rules, sync_restriction,
    worst_case_sync, worst_case_unfair, ConfigSource, ConfigSpace, Configuration, RunOptions, StopCondition,
};
use crate::error::{EngineError, HarnessError};
use crate::graph::{Graph, Topology};
use crate::protocol::{Protocol, Rule, Ssme};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Clock,
    Guards,
    Lemmas,
    Closure,
    Bounds,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Self::Clock, Self::Guards, Self::Lemmas, Self::Closure, Self::Bounds];

    /// Graph used when none is given.
    pub fn default_graph(self) -> Topology {
        match self {
            Self::Clock | Self::Lemmas => Topology::Ring(4),
            Self::Guards | Self::Closure => Topology::Path(3),
            Self::Bounds => Topology::Path(2),
        }
    }
}

impl FromStr for Suite {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "clock" => Ok(Self::Clock),
            "guards" => Ok(Self::Guards),
            "lemmas" => Ok(Self::Lemmas),
            "closure" => Ok(Self::Closure),
            "bounds" => Ok(Self::Bounds),
            other => Err(HarnessError::Usage(format!(
                "unknown suite `{other}` (clock | guards | lemmas | closure | bounds)"
            ))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Clock => "clock",
            Self::Guards => "guards",
            Self::Lemmas => "lemmas",
            Self::Closure => "closure",
            Self::Bounds => "bounds",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

/// Outcome of one property.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub status: Status,
    pub detail: String,
    pub counterexample: Option<String>,
}

impl Check {
    fn new(suite: Suite, name: &str, failure: Option<String>, detail: String) -> Self {
        Self {
            suite: suite.to_string(),
            name: name.to_string(),
            status: if failure.is_some() { Status::Fail } else { Status::Pass },
            detail,
            counterexample: failure,
        }
    }

    fn skip(suite: Suite, name: &str, detail: String) -> Self {
        Self {
            suite: suite.to_string(),
            name: name.to_string(),
            status: Status::Skip,
            detail,
            counterexample: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        write!(f, "{tag} {}.{}: {}", self.suite, self.name, self.detail)?;
        if let Some(c) = &self.counterexample {
            write!(f, "\n  counterexample: {c}")?;
        }
        Ok(())
    }
}

/// What a suite runs over.
#[derive(Clone, Debug)]
pub struct Scope {
    pub graph: Graph,
    pub label: String,
    /// Sampled configurations (or traces) when not exhaustive.
    pub samples: u64,
    /// Configuration pairs for the indistinguishability check.
    pub pairs: u64,
    pub seed: u64,
    /// Demand exhaustive enumeration; fails when over `budget`.
    pub exhaustive: bool,
    pub budget: u64,
    /// State-space cap for the exact unfair search.
    pub unfair_budget: u64,
}

impl Scope {
    pub fn new(graph: Graph, label: impl Into<String>) -> Self {
        Self {
            graph,
            label: label.into(),
            samples: 10_000,
            pairs: 1_000,
            seed: 7,
            exhaustive: false,
            budget: crate::engine::DEFAULT_CONFIG_BUDGET,
            unfair_budget: 1_000_000,
        }
    }
}

pub fn run_suite(suite: Suite, scope: &Scope) -> Result<Vec<Check>, HarnessError> {
    match suite {
        Suite::Clock => Ok(clock_suite(scope)),
        Suite::Guards => guards_suite(scope),
        Suite::Lemmas => lemmas_suite(scope),
        Suite::Closure => closure_suite(scope),
        Suite::Bounds => bounds_suite(scope),
    }
}

/// Configurations to check: the whole space when asked for or when it is no
/// larger than the sample count, otherwise seeded samples.
struct Population {
    space: ConfigSpace,
    exhaustive: bool,
    count: u64,
    seed: u64,
}

impl Population {
    fn of(protocol: &dyn Protocol, scope: &Scope) -> Result<Self, HarnessError> {
        let space = ConfigSpace::of(protocol);
        let small = space.size().is_some_and(|s| s <= scope.samples.min(scope.budget));
        if scope.exhaustive || small {
            let count = space.check_budget(scope.budget)?;
            return Ok(Self {
                space,
                exhaustive: true,
                count,
                seed: scope.seed,
            });
        }
        Ok(Self {
            space,
            exhaustive: false,
            count: scope.samples,
            seed: scope.seed,
        })
    }

    fn get(&self, i: u64) -> Vec<i64> {
        if self.exhaustive {
            self.space.decode(i)
        } else {
            self.space.sample(self.seed, i)
        }
    }

    fn describe(&self) -> String {
        if self.exhaustive {
            format!("{} configurations (exhaustive)", self.count)
        } else {
            format!("{} sampled configurations (seed {})", self.count, self.seed)
        }
    }

    /// Failure count and the first failure in population order.
    fn scan<F>(&self, f: F) -> (u64, Option<String>)
    where
        F: Fn(&[i64]) -> Option<String> + Sync,
    {
        let (count, first) = (0..self.count)
            .into_par_iter()
            .filter_map(|i| f(&self.get(i)).map(|m| (1u64, Some((i, m)))))
            .reduce(
                || (0, None),
                |a, b| {
                    let first = match (a.1, b.1) {
                        (Some(x), Some(y)) => Some(if x.0 <= y.0 { x } else { y }),
                        (x, y) => x.or(y),
                    };
                    (a.0 + b.0, first)
                },
            );
        (count, first.map(|(_, m)| m))
    }
}

fn show(c: &[i64]) -> String {
    Configuration::new(c.to_vec()).to_string()
}

fn clock_suite(scope: &Scope) -> Vec<Check> {
    let s = Suite::Clock;
    let g = &scope.graph;
    let mut params = vec![ClockParams::for_ssme(g.n(), g.diam())];
    for (a, k) in [(1, 2), (1, 3), (3, 12), (4, 23), (6, 46)] {
        params.push(ClockParams::new(a, k).expect("valid clock parameters"));
    }
    let names: Vec<String> = params.iter().map(|p| format!("({},{})", p.alpha(), p.k())).collect();
    let over = format!("cherry{}", names.join(" cherry"));
    let mut out = Vec::new();

    let first = |f: &dyn Fn(&ClockParams) -> Option<String>| params.iter().find_map(f);

    out.push(Check::new(
        s,
        "increment_in_range",
        first(&|p| {
            (p.min_value()..=p.max_value())
                .find(|&c| !p.contains(p.increment(c)))
                .map(|c| format!("alpha={} K={} phi({c}) = {}", p.alpha(), p.k(), p.increment(c)))
        }),
        over.clone(),
    ));

    out.push(Check::new(
        s,
        "stem_feeds_ring",
        first(&|p| {
            let mut c = p.reset();
            for _ in 0..p.alpha() {
                if p.is_stab_strict(c) {
                    return Some(format!("alpha={} K={}: left the stem early at {c}", p.alpha(), p.k()));
                }
                c = p.increment(c);
            }
            if c != 0 {
                return Some(format!("alpha={} K={}: alpha increments from reset give {c}", p.alpha(), p.k()));
            }
            for step in 1..=p.k() {
                c = p.increment(c);
                if !p.is_stab(c) || (c == 0) != (step == p.k()) {
                    return Some(format!("alpha={} K={}: ring period broken at {c}", p.alpha(), p.k()));
                }
            }
            None
        }),
        over.clone(),
    ));

    out.push(Check::new(
        s,
        "init_stab_partition",
        first(&|p| {
            (p.min_value()..=p.max_value())
                .find(|&c| (p.is_init(c) || p.is_stab(c)) && (p.is_init(c) && p.is_stab(c)) != (c == 0))
                .or_else(|| (p.min_value()..=p.max_value()).find(|&c| !p.is_init(c) && !p.is_stab(c)))
                .map(|c| format!("alpha={} K={} value {c}", p.alpha(), p.k()))
        }),
        format!("init and stab cover the domain and meet only at 0 over {over}"),
    ));

    let triples = |p: &ClockParams| -> Vec<(i64, i64, i64)> {
        let k = p.k();
        if k <= 64 {
            (0..k)
                .flat_map(|a| (0..k).flat_map(move |b| (0..k).map(move |c| (a, b, c))))
                .collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(scope.seed);
            (0..100_000)
                .map(|_| (rng.gen_range(0..k), rng.gen_range(0..k), rng.gen_range(0..k)))
                .collect()
        }
    };
    out.push(Check::new(
        s,
        "ring_metric",
        first(&|p| {
            triples(p).into_iter().find_map(|(a, b, c)| {
                let d = |x, y| p.distance(x, y);
                let bad = d(a, a) != 0
                    || d(a, b) != d(b, a)
                    || d(a, c) > d(a, b) + d(b, c)
                    || d(a, b) > p.k() / 2
                    || (a != b && d(a, b) == 0);
                bad.then(|| format!("K={} at ({a},{b},{c})", p.k()))
            })
        }),
        format!("identity, symmetry, triangle inequality, d <= K/2 over {over}"),
    ));

    out.push(Check::new(
        s,
        "comparable_iff_ordered",
        first(&|p| {
            (0..p.k()).flat_map(|a| (0..p.k()).map(move |b| (a, b))).find_map(|(a, b)| {
                let lhs = p.locally_comparable(a, b);
                let rhs = p.leq_local(a, b) || p.leq_local(b, a);
                (lhs != rhs || lhs != (p.distance(a, b) <= 1))
                    .then(|| format!("K={} at ({a},{b})", p.k()))
            })
        }),
        over.clone(),
    ));

    let p = &params[0];
    let dominance = if p.alpha() as usize != g.n() || p.k() as usize <= g.n() || p.alpha() + 2 < g.n() as i64 {
        Some(format!("alpha={} K={} for n={}", p.alpha(), p.k(), g.n()))
    } else {
        None
    };
    out.push(Check::new(
        s,
        "ssme_parameters",
        dominance,
        format!("alpha = n and K > n on {}", scope.label),
    ));
    out
}

fn guards_suite(scope: &Scope) -> Result<Vec<Check>, HarnessError> {
    let s = Suite::Guards;
    let ssme = Ssme::new(scope.graph.clone());
    let pop = Population::of(&ssme, scope)?;
    let n = scope.graph.n();
    let params = *ssme.params();
    let over = format!("{} on {}", pop.describe(), scope.label);
    let mut out = Vec::new();

    if n >= 2 {
        let (bad, first) = pop.scan(|c| {
            (0..n).find_map(|v| {
                let fired = [ssme.normal_step(c, v), ssme.converge_step(c, v), ssme.reset_init(c, v)];
                (fired.iter().filter(|&&b| b).count() > 1).then(|| format!("{} vertex {v} guards {fired:?}", show(c)))
            })
        });
        out.push(Check::new(s, "rules_exclusive", first, format!("{bad} failures over {over}")));
    } else {
        out.push(Check::skip(s, "rules_exclusive", "single vertex: NA and CA overlap on the stem".into()));
    }

    let (bad, first) = pop.scan(|c| {
        (0..n).find_map(|v| {
            let rule = ssme.enabled_rule(c, v)?;
            let expected = match rule {
                Rule::Normal | Rule::Converge => params.increment(c[v]),
                Rule::Reset => params.reset(),
                other => return Some(format!("{} vertex {v} fired {other}", show(c))),
            };
            (ssme.apply(c, v, rule) != expected).then(|| format!("{} vertex {v} rule {rule}", show(c)))
        })
    });
    out.push(Check::new(s, "actions", first, format!("NA/CA increment, RA resets; {bad} failures over {over}")));

    let (bad, first) = pop.scan(|c| {
        (0..n)
            .find(|&v| ssme.is_privileged(c, v) != (c[v] == ssme.threshold(v)))
            .map(|v| format!("{} vertex {v}", show(c)))
    });
    out.push(Check::new(s, "privilege_threshold", first, format!("{bad} failures over {over}")));

    let (bad, first) = pop.scan(|c| enabled_set(&ssme, c).is_empty().then(|| show(c)));
    out.push(Check::new(s, "no_deadlock", first, format!("{bad} terminal configurations over {over}")));

    let (bad, first) = pop.scan(|c| {
        if !ssme.is_unison_legitimate(c) {
            return None;
        }
        (0..n)
            .find(|&v| matches!(ssme.enabled_rule(c, v), Some(Rule::Converge | Rule::Reset)))
            .map(|v| format!("{} vertex {v}", show(c)))
    });
    out.push(Check::new(s, "legitimate_only_normal", first, format!("{bad} failures over {over}")));
    Ok(out)
}

fn lemmas_suite(scope: &Scope) -> Result<Vec<Check>, HarnessError> {
    let s = Suite::Lemmas;
    let ssme = Ssme::new(scope.graph.clone());
    let pop = Population::of(&ssme, scope)?;
    let diam = scope.graph.diam();
    let over = format!("{} synchronous traces of length {} on {}", pop.count, diam, scope.label);

    let found: Vec<(u64, String, u8)> = (0..pop.count)
        .into_par_iter()
        .map(|i| -> Result<Vec<(u64, String, u8)>, EngineError> {
            let init = Configuration::new(pop.get(i));
            let trace = run(
                &ssme,
                &init,
                &mut DaemonPolicy::synchronous(),
                RunOptions::new(diam, StopCondition::Never),
            )?;
            Ok(check_lemmas(&ssme, &trace)
                .into_iter()
                .map(|v| (i, format!("{init} {v}"), v.lemma))
                .collect())
        })
        .try_reduce(Vec::new, |mut a, b| {
            a.extend(b);
            Ok(a)
        })?;

    let mut out = Vec::new();
    let names = [
        "lemma1_no_correction_before_early_privilege",
        "lemma2_no_zero_island_before_early_privilege",
        "lemma3_depth_grows_backwards",
        "lemma4_value_containment",
    ];
    for (idx, name) in names.iter().enumerate() {
        let lemma = idx as u8 + 1;
        let hits: Vec<&(u64, String, u8)> = found.iter().filter(|f| f.2 == lemma).collect();
        let first = hits.iter().min_by_key(|f| f.0).map(|f| f.1.clone());
        out.push(Check::new(s, name, first, format!("{} counterexamples over {over}", hits.len())));
    }

    if diam == 0 {
        out.push(Check::skip(s, "lemma5_indistinguishability", "diameter 0".into()));
        return Ok(out);
    }
    let pairs = lemma5_pairs(&ssme, scope.pairs, scope.seed)?;
    let bad: Vec<&Lemma5Pair> = pairs.iter().filter(|p| p.left != p.right).collect();
    out.push(Check::new(
        s,
        "lemma5_indistinguishability",
        bad.first().map(|p| p.to_string()),
        format!("{} of {} pairs differ on {}", bad.len(), pairs.len(), scope.label),
    ));
    Ok(out)
}

/// Two configurations agreeing on `ball(v, k)` and the first `k + 1` states
/// of `v` in their synchronous executions.
#[derive(Clone, Debug)]
pub struct Lemma5Pair {
    pub first: Configuration,
    pub second: Configuration,
    pub v: usize,
    pub k: usize,
    pub left: Vec<i64>,
    pub right: Vec<i64>,
}

impl fmt::Display for Lemma5Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} vs {} at v={} k={}: {:?} vs {:?}",
            self.first, self.second, self.v, self.k, self.left, self.right
        )
    }
}

/// Builds `count` pairs: a random configuration, a random vertex and radius
/// `k` in `1..=diam`, and a second random configuration overwritten with the
/// first on `ball(v, k)`.
pub fn lemma5_pairs(protocol: &dyn Protocol, count: u64, seed: u64) -> Result<Vec<Lemma5Pair>, EngineError> {
    let g = protocol.graph();
    let space = ConfigSpace::of(protocol);
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            let a = space.sample(rng.gen(), i);
            let mut b = space.sample(rng.gen(), i);
            let v = rng.gen_range(0..g.n());
            let k = rng.gen_range(1..=g.diam().max(1));
            for u in g.ball(v, k) {
                b[u] = a[u];
            }
            let (a, b) = (Configuration::new(a), Configuration::new(b));
            let left = sync_restriction(protocol, &a, v, k)?;
            let right = sync_restriction(protocol, &b, v, k)?;
            Ok(Lemma5Pair {
                first: a,
                second: b,
                v,
                k,
                left,
                right,
            })
        })
        .collect()
}

fn closure_suite(scope: &Scope) -> Result<Vec<Check>, HarnessError> {
    let s = Suite::Closure;
    let ssme = Ssme::new(scope.graph.clone());
    let space = ConfigSpace::of(&ssme);
    let exhaustive = scope.exhaustive || space.size().is_some_and(|sz| sz <= scope.budget.min(1_000_000));

    let legit: Vec<Vec<i64>> = if exhaustive {
        let size = space.check_budget(scope.budget)?;
        (0..size)
            .into_par_iter()
            .map(|i| space.decode(i))
            .filter(|c| ssme.is_unison_legitimate(c))
            .collect()
    } else {
        reached_legitimate(&ssme, scope)?
    };
    let source = if exhaustive {
        format!("all {} legitimate configurations", legit.len())
    } else {
        format!("{} legitimate configurations reached from samples", legit.len())
    };

    let safety = legit
        .iter()
        .find(|c| privileged_set(&ssme, c).len() > 1)
        .map(|c| show(c));
    let mut out = vec![Check::new(s, "legitimate_implies_safety", safety, format!("{source} on {}", scope.label))];

    let mut rng = ChaCha8Rng::seed_from_u64(scope.seed);
    let mut failure = None;
    let mut transitions = 0u64;
    'outer: for c in &legit {
        let enabled = enabled_set(&ssme, c);
        let choices = if enabled.len() <= 10 {
            enumerate_choices(&enabled, 10).map_err(EngineError::from)?
        } else {
            let mut ch: Vec<Vec<usize>> = enabled.iter().map(|&v| vec![v]).collect();
            ch.push(enabled.clone());
            for _ in 0..64 {
                let pick: Vec<usize> = enabled.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
                if !pick.is_empty() {
                    ch.push(pick);
                }
            }
            ch
        };
        for choice in choices {
            let (next, _) = step_with_rules(&ssme, c, &choice)?;
            transitions += 1;
            if !ssme.is_unison_legitimate(&next) {
                failure = Some(format!("{} --{choice:?}--> {}", show(c), show(&next)));
                break 'outer;
            }
        }
    }
    out.push(Check::new(
        s,
        "legitimate_closed",
        failure,
        format!("{transitions} transitions from {source} on {}", scope.label),
    ));
    Ok(out)
}

/// Legitimate configurations visited by seeded random-daemon runs from
/// sampled starts.
fn reached_legitimate(ssme: &Ssme, scope: &Scope) -> Result<Vec<Vec<i64>>, HarnessError> {
    let space = ConfigSpace::of(ssme);
    let runs = scope.samples.min(2_000);
    let tail = 2 * ssme.params().k() as usize;
    let found: Vec<Vec<Vec<i64>>> = (0..runs)
        .into_par_iter()
        .map(|i| -> Result<Vec<Vec<i64>>, HarnessError> {
            let kind = if i % 2 == 0 {
                DaemonKind::CentralRandom
            } else {
                DaemonKind::RandomDistributed { p: 0.5 }
            };
            let mut policy = DaemonPolicy::new(kind, super::run_seed(scope.seed, i))?;
            let init = Configuration::new(space.sample(scope.seed, i));
            let max = ssme.unfair_step_bound() as usize + tail;
            let trace = run(ssme, &init, &mut policy, RunOptions::new(max, StopCondition::OnLegitimate { tail }))?;
            Ok(trace
                .configs
                .iter()
                .zip(&trace.legitimate)
                .filter(|(_, &l)| l)
                .map(|(c, _)| c.states().to_vec())
                .collect())
        })
        .collect::<Result<_, _>>()?;
    let mut all: Vec<Vec<i64>> = found.into_iter().flatten().collect();
    all.sort();
    all.dedup();
    Ok(all)
}

fn bounds_suite(scope: &Scope) -> Result<Vec<Check>, HarnessError> {
    let s = Suite::Bounds;
    let ssme = Ssme::new(scope.graph.clone());
    let target = scope.graph.diam().div_ceil(2);
    let space = ConfigSpace::of(&ssme);
    let max_steps = crate::engine::default_max_steps(&ssme);
    let fits = space.size().is_some_and(|sz| sz <= scope.budget);
    if scope.exhaustive && !fits {
        space.check_budget(scope.budget)?;
    }
    let mut out = Vec::new();

    let (worst, how) = if fits {
        let w = worst_case_sync(&ssme, ConfigSource::Exhaustive, scope.budget, max_steps)?;
        (w, "exhaustive".to_string())
    } else {
        let mut w = worst_case_sync(
            &ssme,
            ConfigSource::Sample {
                count: scope.samples,
                seed: scope.seed,
            },
            scope.budget,
            max_steps,
        )?;
        let witness = lower_bound_witness(&ssme)?;
        if witness.index > w.max_index {
            w.max_index = witness.index;
            w.witness = witness.config;
        }
        (w, format!("{} samples plus constructed witness", scope.samples))
    };
    let failure = (worst.max_index != target || worst.undetermined > 0).then(|| {
        format!(
            "worst index {} at {} ({} undetermined runs)",
            worst.max_index, worst.witness, worst.undetermined
        )
    });
    out.push(Check::new(
        s,
        "sync_worst_equals_half_diameter",
        failure,
        format!(
            "worst synchronous ME index {} (expected {target}) over {how} on {}",
            worst.max_index, scope.label
        ),
    ));

    let bound = ssme.unfair_step_bound();
    let states = space.size().unwrap_or(u64::MAX);
    if states > scope.unfair_budget {
        out.push(Check::skip(
            s,
            "unfair_worst_within_bound",
            format!("{states} states exceed the unfair search budget {}", scope.unfair_budget),
        ));
        return Ok(out);
    }
    let check = match worst_case_unfair(&ssme, scope.unfair_budget) {
        Ok(w) => Check::new(
            s,
            "unfair_worst_within_bound",
            (w.max_steps > bound).then(|| format!("{} steps from {}", w.max_steps, w.witness)),
            format!(
                "exact worst {} steps <= {bound}, no cycle outside the legitimate set, {} states on {}",
                w.max_steps, w.states, scope.label
            ),
        ),
        Err(EngineError::Cycle { cycle }) => Check::new(
            s,
            "unfair_worst_within_bound",
            Some(format!("cycle {:?}", cycle)),
            format!("cycle outside the legitimate set on {}", scope.label),
        ),
        Err(EngineError::Deadlock { config }) => Check::new(
            s,
            "unfair_worst_within_bound",
            Some(show(&config)),
            format!("terminal non-legitimate configuration on {}", scope.label),
        ),
        Err(e) => return Err(e.into()),
    };
    out.push(check);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scope(t: Topology) -> Scope {
        Scope::new(Graph::generate(&t).unwrap(), t.to_string())
    }

    #[test]
    fn clock_suite_passes() {
        let checks = run_suite(Suite::Clock, &scope(Topology::Ring(4))).unwrap();
        assert!(checks.iter().all(Check::passed), "{checks:#?}");
    }

    #[test]
    fn guards_and_closure_on_path2() {
        for suite in [Suite::Guards, Suite::Closure] {
            let checks = run_suite(suite, &scope(Topology::Path(2))).unwrap();
            assert!(checks.iter().all(|c| c.status == Status::Pass), "{checks:#?}");
        }
    }

    #[test]
    fn bounds_on_path2() {
        let checks = run_suite(Suite::Bounds, &scope(Topology::Path(2))).unwrap();
        assert_eq!(checks.len(), 2);
        assert!(checks.iter().all(|c| c.status == Status::Pass), "{checks:#?}");
        assert!(checks[1].detail.starts_with("exact worst 6 steps <= 28"));
    }

    #[test]
    fn failure_lines_carry_counterexamples() {
        let c = Check::new(Suite::Lemmas, "x", Some("(1,2)".into()), "1 counterexample".into());
        assert_eq!(c.to_string(), "FAIL lemmas.x: 1 counterexample\n  counterexample: (1,2)");
    }

    #[test]
    fn suite_names() {
        for s in Suite::ALL {
            assert_eq!(s.to_string().parse::<Suite>().unwrap(), s);
        }
    }
}
