//! Worst-case search over initial configurations and scheduler choices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{convergence_index_me, enabled_set, run, step_with_rules, Configuration, RunOptions, StopCondition};
use crate::daemon::{enumerate_choices, DaemonPolicy, DEFAULT_BRANCHING_CAP};
use crate::error::EngineError;
use crate::protocol::Protocol;

/// Raw configuration count above which exhaustive enumeration is refused.
pub const DEFAULT_CONFIG_BUDGET: u64 = 10_000_000;

/// Where initial configurations come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConfigSource {
    Exhaustive,
    Sample { count: u64, seed: u64 },
}

/// Mixed-radix indexing of the full configuration space; vertex 0 is the
/// least significant digit.
#[derive(Clone, Copy, Debug)]
pub struct ConfigSpace {
    n: usize,
    base: i64,
    radix: u64,
    size: Option<u64>,
}

impl ConfigSpace {
    pub fn of(protocol: &dyn Protocol) -> Self {
        let n = protocol.graph().n();
        let radix = protocol.domain_size() as u64;
        let size = (0..n).try_fold(1u64, |acc, _| acc.checked_mul(radix));
        Self {
            n,
            base: *protocol.domain().start(),
            radix,
            size,
        }
    }

    /// Number of configurations, `None` on overflow.
    pub fn size(&self) -> Option<u64> {
        self.size
    }

    pub fn check_budget(&self, budget: u64) -> Result<u64, EngineError> {
        match self.size {
            Some(s) if s <= budget => Ok(s),
            other => Err(EngineError::Budget {
                budget,
                needed: other.unwrap_or(u64::MAX),
            }),
        }
    }

    pub fn decode(&self, mut index: u64) -> Vec<i64> {
        (0..self.n)
            .map(|_| {
                let digit = index % self.radix;
                index /= self.radix;
                self.base + digit as i64
            })
            .collect()
    }

    pub fn encode(&self, config: &[i64]) -> u64 {
        config
            .iter()
            .rev()
            .fold(0, |acc, &s| acc * self.radix + (s - self.base) as u64)
    }

    /// A uniformly random configuration, deterministic in `(seed, index)`.
    pub fn sample(&self, seed: u64, index: u64) -> Vec<i64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        (0..self.n)
            .map(|_| self.base + rng.gen_range(0..self.radix) as i64)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SyncWorstCase {
    /// Largest ME convergence index observed.
    pub max_index: usize,
    /// First configuration (in enumeration order) attaining it.
    pub witness: Configuration,
    pub examined: u64,
    /// Every configuration was examined, so `max_index` is exact; otherwise
    /// it is a lower bound on the true worst case.
    pub exhaustive: bool,
    /// Runs whose trace never reached the legitimate set within budget.
    pub undetermined: u64,
}

/// Maximum synchronous ME convergence index over a configuration source.
pub fn worst_case_sync(
    protocol: &dyn Protocol,
    source: ConfigSource,
    budget: u64,
    max_steps: usize,
) -> Result<SyncWorstCase, EngineError> {
    let space = ConfigSpace::of(protocol);
    let (count, exhaustive) = match source {
        ConfigSource::Exhaustive => (space.check_budget(budget)?, true),
        ConfigSource::Sample { count, .. } => (count, false),
    };
    let config_at = |i: u64| match source {
        ConfigSource::Exhaustive => space.decode(i),
        ConfigSource::Sample { seed, .. } => space.sample(seed, i),
    };
    let options = RunOptions::new(max_steps, StopCondition::OnLegitimate { tail: 0 });

    // (index, enumeration position, undetermined count)
    let best = (0..count)
        .into_par_iter()
        .map(|i| -> Result<(usize, u64, u64), EngineError> {
            let init = Configuration::new(config_at(i));
            let trace = run(protocol, &init, &mut DaemonPolicy::synchronous(), options)?;
            let conv = convergence_index_me(&trace);
            Ok(match conv.value() {
                Some(v) => (v, i, 0),
                None => (0, u64::MAX, 1),
            })
        })
        .try_reduce(
            || (0, u64::MAX, 0),
            |a, b| {
                let undetermined = a.2 + b.2;
                let pick = if a.0 != b.0 {
                    if a.0 > b.0 { a } else { b }
                } else if a.1 <= b.1 {
                    a
                } else {
                    b
                };
                Ok((pick.0, pick.1, undetermined))
            },
        )?;

    let position = if best.1 == u64::MAX { 0 } else { best.1 };
    Ok(SyncWorstCase {
        max_index: best.0,
        witness: Configuration::new(config_at(position)),
        examined: count,
        exhaustive,
        undetermined: best.2,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnfairWorstCase {
    /// Longest number of actions from any configuration to the legitimate
    /// set, over every non-empty activation choice.
    pub max_steps: u64,
    /// A configuration at which the maximum is attained.
    pub witness: Configuration,
    pub states: u64,
    /// Number of configurations already legitimate.
    pub legitimate_states: u64,
}

const WHITE: u8 = 0;
const GRAY: u8 = 1;
const BLACK: u8 = 2;

struct Frame {
    state: u64,
    successors: Vec<u64>,
    next: usize,
    best: u64,
}

/// Exact worst case under the unfair distributed daemon by memoized
/// depth-first longest-path search over the full transition relation, with
/// legitimate configurations as absorbing targets.
///
/// A cycle among non-legitimate configurations is reported as
/// [`EngineError::Cycle`] and a non-legitimate terminal configuration as
/// [`EngineError::Deadlock`].
pub fn worst_case_unfair(protocol: &dyn Protocol, budget: u64) -> Result<UnfairWorstCase, EngineError> {
    let space = ConfigSpace::of(protocol);
    let total = space.check_budget(budget)?;
    let mut color = vec![WHITE; total as usize];
    let mut longest = vec![0u64; total as usize];
    let mut legitimate_states = 0;

    let successors = |state: u64| -> Result<Vec<u64>, EngineError> {
        let config = space.decode(state);
        let enabled = enabled_set(protocol, &config);
        if enabled.is_empty() {
            return Err(EngineError::Deadlock { config });
        }
        let mut out = Vec::new();
        for choice in enumerate_choices(&enabled, DEFAULT_BRANCHING_CAP)? {
            let (next, _) = step_with_rules(protocol, &config, &choice)?;
            out.push(space.encode(&next));
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    };

    for root in 0..total {
        if color[root as usize] != WHITE {
            continue;
        }
        if protocol.is_legitimate(&space.decode(root)) {
            color[root as usize] = BLACK;
            legitimate_states += 1;
            continue;
        }
        color[root as usize] = GRAY;
        let mut stack = vec![Frame {
            state: root,
            successors: successors(root)?,
            next: 0,
            best: 0,
        }];
        while let Some(frame) = stack.last_mut() {
            if frame.next == frame.successors.len() {
                let done = stack.pop().expect("non-empty stack");
                longest[done.state as usize] = done.best + 1;
                color[done.state as usize] = BLACK;
                if let Some(parent) = stack.last_mut() {
                    parent.best = parent.best.max(done.best + 1);
                }
                continue;
            }
            let succ = frame.successors[frame.next];
            frame.next += 1;
            match color[succ as usize] {
                BLACK => frame.best = frame.best.max(longest[succ as usize]),
                GRAY => {
                    let from = stack
                        .iter()
                        .position(|f| f.state == succ)
                        .expect("gray state is on the stack");
                    let cycle = stack[from..]
                        .iter()
                        .map(|f| space.decode(f.state))
                        .collect();
                    return Err(EngineError::Cycle { cycle });
                }
                _ => {
                    if protocol.is_legitimate(&space.decode(succ)) {
                        color[succ as usize] = BLACK;
                        legitimate_states += 1;
                    } else {
                        color[succ as usize] = GRAY;
                        let next = successors(succ)?;
                        stack.push(Frame {
                            state: succ,
                            successors: next,
                            next: 0,
                            best: 0,
                        });
                    }
                }
            }
        }
    }

    let (argmax, &max_steps) = longest
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .unwrap_or((0, &0));
    Ok(UnfairWorstCase {
        max_steps,
        witness: Configuration::new(space.decode(argmax as u64)),
        states: total,
        legitimate_states,
    })
}
