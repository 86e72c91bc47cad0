//! Lower-bound witnesses: initial configurations whose synchronous execution
//! keeps two distant vertices simultaneously privileged for as long as
//! locality allows.

use serde::Serialize;

use super::search::{worst_case_sync, ConfigSource, ConfigSpace, DEFAULT_CONFIG_BUDGET};
use super::{convergence_index_me, default_max_steps, run, Configuration, RunOptions, StopCondition};
use crate::daemon::DaemonPolicy;
use crate::error::EngineError;
use crate::protocol::Protocol;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub config: Configuration,
    /// Simulated synchronous ME convergence index of `config`.
    pub index: usize,
    /// Diametral pair whose balls were spliced.
    pub u: usize,
    pub v: usize,
    /// Ball radius `ceil(diam/2) - 1`.
    pub radius: usize,
    /// `true` when the splice construction failed and the witness came from
    /// searching configurations instead.
    pub searched: bool,
}

fn sync_index(protocol: &dyn Protocol, config: &Configuration, max_steps: usize) -> Result<Option<usize>, EngineError> {
    let trace = run(
        protocol,
        config,
        &mut DaemonPolicy::synchronous(),
        RunOptions::new(max_steps, StopCondition::OnLegitimate { tail: 0 }),
    )?;
    Ok(convergence_index_me(&trace).value())
}

/// Builds a configuration whose synchronous convergence index is exactly
/// `ceil(diam/2)`.
///
/// Picks `u, v` at distance `diam` and runs a reference synchronous
/// execution from a stabilized start. For moments `i, j > t` at which `u`
/// (resp. `v`) is privileged, the radius-`t` ball of `u` is copied from
/// `gamma_{i-t}` and that of `v` from `gamma_{j-t}`; the balls are disjoint
/// because `2t < diam`. Both vertices then see exactly what they saw in the
/// reference run and are privileged together at step `t`.
pub fn lower_bound_witness(protocol: &dyn Protocol) -> Result<Witness, EngineError> {
    let g = protocol.graph();
    let diam = g.diam();
    let target = diam.div_ceil(2);
    let (u, v) = g.diametral_pair();
    let max_steps = default_max_steps(protocol);
    let start = Configuration::uniform(g.n(), *protocol.domain().start());

    if target == 0 {
        let index = sync_index(protocol, &start, max_steps)?.unwrap_or(0);
        return Ok(Witness {
            config: start,
            index,
            u,
            v,
            radius: 0,
            searched: false,
        });
    }

    let t = target - 1;
    let horizon = max_steps + 2 * protocol.domain_size();
    let reference = run(
        protocol,
        &start,
        &mut DaemonPolicy::synchronous(),
        RunOptions::new(horizon, StopCondition::Never),
    )?;
    let settled = reference.first_legitimate().unwrap_or(0);
    let moments = |w: usize| -> Vec<usize> {
        (settled.max(t + 1)..reference.configs.len())
            .filter(|&i| reference.privileged[i].contains(&w))
            .collect()
    };
    let ball_u = g.ball(u, t);
    let ball_v = g.ball(v, t);

    for &i in &moments(u) {
        for &j in &moments(v) {
            let mut spliced = reference.configs[i - t].clone().into_inner();
            for &w in &ball_v {
                spliced[w] = reference.configs[j - t][w];
            }
            debug_assert!(ball_u.iter().all(|&w| spliced[w] == reference.configs[i - t][w]));
            let config = Configuration::new(spliced);
            if sync_index(protocol, &config, max_steps)? == Some(target) {
                return Ok(Witness {
                    config,
                    index: target,
                    u,
                    v,
                    radius: t,
                    searched: false,
                });
            }
        }
    }

    let source = match ConfigSpace::of(protocol).size() {
        Some(s) if s <= DEFAULT_CONFIG_BUDGET => ConfigSource::Exhaustive,
        _ => ConfigSource::Sample { count: 100_000, seed: 0 },
    };
    let found = worst_case_sync(protocol, source, DEFAULT_CONFIG_BUDGET, max_steps)?;
    if found.max_index == target {
        return Ok(Witness {
            config: found.witness,
            index: target,
            u,
            v,
            radius: t,
            searched: true,
        });
    }
    Err(EngineError::Witness(format!(
        "no configuration with convergence index {target} found (best {})",
        found.max_index
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Graph, Topology};
    use crate::protocol::Ssme;

    #[test]
    fn path2_plants_both_thresholds() {
        let p = Ssme::new(Graph::generate(&Topology::Path(2)).unwrap());
        let w = lower_bound_witness(&p).unwrap();
        assert_eq!(w.config.states(), &[4, 6]);
        assert_eq!(w.index, 1);
        assert!(!w.searched);
    }

    #[test]
    fn complete3() {
        let p = Ssme::new(Graph::generate(&Topology::Complete(3)).unwrap());
        let w = lower_bound_witness(&p).unwrap();
        assert_eq!(w.index, 1);
        assert_eq!(w.config[w.u], p.threshold(w.u));
        assert_eq!(w.config[w.v], p.threshold(w.v));
    }

    #[test]
    fn single_vertex() {
        let p = Ssme::new(Graph::generate(&Topology::Path(1)).unwrap());
        assert_eq!(lower_bound_witness(&p).unwrap().index, 0);
    }
}
