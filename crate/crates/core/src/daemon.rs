//! Concrete schedulers standing in for daemons.
//!
//! No fairness is imposed by any policy. The unfair distributed daemon is
//! approximated by random sampling, a greedy central adversary and, for tiny
//! instances, exhaustive branching over every non-empty activation subset.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::DaemonError;

/// Largest enabled set [`enumerate_choices`] will branch over by default.
pub const DEFAULT_BRANCHING_CAP: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DaemonKind {
    /// Activates every enabled vertex.
    Synchronous,
    /// One vertex: the smallest enabled id at or after a rotating cursor.
    CentralRoundRobin,
    /// One vertex, uniformly at random.
    CentralRandom,
    /// One vertex, chosen to keep the protocol's disorder measure high.
    CentralAdversarial,
    /// Each enabled vertex independently with probability `p`, resampled
    /// until non-empty.
    RandomDistributed { p: f64 },
    /// Branches over all non-empty subsets; only usable through search.
    Exhaustive,
}

impl DaemonKind {
    /// Parses a CLI daemon name. `prob` is used by `dist-rand` only.
    pub fn from_name(name: &str, prob: f64) -> Result<Self, DaemonError> {
        Ok(match name {
            "sync" => Self::Synchronous,
            "central-rr" => Self::CentralRoundRobin,
            "central-rand" => Self::CentralRandom,
            "central-adv" => Self::CentralAdversarial,
            "dist-rand" => {
                if !(prob > 0.0 && prob <= 1.0) {
                    return Err(DaemonError::Probability(prob));
                }
                Self::RandomDistributed { p: prob }
            }
            "exhaustive" => Self::Exhaustive,
            other => return Err(DaemonError::Unknown(other.to_string())),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Synchronous => "sync",
            Self::CentralRoundRobin => "central-rr",
            Self::CentralRandom => "central-rand",
            Self::CentralAdversarial => "central-adv",
            Self::RandomDistributed { .. } => "dist-rand",
            Self::Exhaustive => "exhaustive",
        }
    }

    pub fn is_central(&self) -> bool {
        matches!(
            self,
            Self::CentralRoundRobin | Self::CentralRandom | Self::CentralAdversarial
        )
    }
}

impl fmt::Display for DaemonKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::RandomDistributed { p } => write!(f, "dist-rand({p})"),
            other => f.write_str(other.name()),
        }
    }
}

/// A scheduler instance owned by a single run.
#[derive(Clone, Debug)]
pub struct DaemonPolicy {
    kind: DaemonKind,
    seed: u64,
    cursor: usize,
    rng: ChaCha8Rng,
}

impl DaemonPolicy {
    pub fn new(kind: DaemonKind, seed: u64) -> Result<Self, DaemonError> {
        if let DaemonKind::RandomDistributed { p } = kind {
            if !(p > 0.0 && p <= 1.0) {
                return Err(DaemonError::Probability(p));
            }
        }
        Ok(Self {
            kind,
            seed,
            cursor: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn synchronous() -> Self {
        Self {
            kind: DaemonKind::Synchronous,
            seed: 0,
            cursor: 0,
            rng: ChaCha8Rng::seed_from_u64(0),
        }
    }

    pub fn kind(&self) -> DaemonKind {
        self.kind
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Moves the round-robin cursor.
    pub fn with_cursor(mut self, cursor: usize) -> Self {
        self.cursor = cursor;
        self
    }

    /// Selects a non-empty subset of `enabled` (sorted ascending).
    pub fn select(&mut self, enabled: &[usize]) -> Result<Vec<usize>, DaemonError> {
        self.select_scored(enabled, |_| 0)
    }

    /// Like [`select`](Self::select); `disorder_after` reports the disorder
    /// measure after activating a single vertex and is only consulted by the
    /// adversarial policy.
    pub fn select_scored(
        &mut self,
        enabled: &[usize],
        mut disorder_after: impl FnMut(usize) -> usize,
    ) -> Result<Vec<usize>, DaemonError> {
        if enabled.is_empty() {
            return Err(DaemonError::NothingEnabled);
        }
        let chosen = match self.kind {
            DaemonKind::Synchronous => enabled.to_vec(),
            DaemonKind::CentralRoundRobin => {
                let v = enabled
                    .iter()
                    .copied()
                    .find(|&v| v >= self.cursor)
                    .unwrap_or(enabled[0]);
                self.cursor = v + 1;
                vec![v]
            }
            DaemonKind::CentralRandom => vec![enabled[self.rng.gen_range(0..enabled.len())]],
            DaemonKind::CentralAdversarial => {
                let mut best = enabled[0];
                let mut best_score = disorder_after(best);
                for &v in &enabled[1..] {
                    let s = disorder_after(v);
                    if s > best_score {
                        best = v;
                        best_score = s;
                    }
                }
                vec![best]
            }
            DaemonKind::RandomDistributed { p } => loop {
                let pick: Vec<usize> = enabled
                    .iter()
                    .copied()
                    .filter(|_| self.rng.gen_bool(p))
                    .collect();
                if !pick.is_empty() {
                    break pick;
                }
            },
            DaemonKind::Exhaustive => return Err(DaemonError::Branching),
        };
        debug_assert!(chosen.iter().all(|v| enabled.contains(v)));
        Ok(chosen)
    }
}

/// All `2^k - 1` non-empty subsets of `enabled`, in binary-counting order of
/// the subset mask.
pub fn enumerate_choices(enabled: &[usize], cap: usize) -> Result<Vec<Vec<usize>>, DaemonError> {
    if enabled.is_empty() {
        return Err(DaemonError::NothingEnabled);
    }
    if enabled.len() > cap || enabled.len() >= usize::BITS as usize {
        return Err(DaemonError::BranchingCap {
            size: enabled.len(),
            cap,
        });
    }
    Ok((1usize..1 << enabled.len())
        .map(|mask| {
            enabled
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &v)| v)
                .collect()
        })
        .collect())
}
