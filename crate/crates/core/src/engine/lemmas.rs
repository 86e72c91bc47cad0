//! Executable checks of the structural properties of synchronous SSME
//! executions that the tight stabilization bound rests on.

use std::fmt;

use serde::Serialize;

use super::islands::{islands, IslandReport};
use super::Trace;
use crate::protocol::{Protocol, Rule, Ssme};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaViolation {
    /// Which property failed (1 to 4).
    pub lemma: u8,
    /// Configuration index the failure was observed at.
    pub index: usize,
    pub vertex: usize,
    pub detail: String,
}

impl fmt::Display for LemmaViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "lemma {} at gamma_{} vertex {}: {}",
            self.lemma, self.index, self.vertex, self.detail
        )
    }
}

/// Runs every check on a synchronous SSME trace. The trace should hold at
/// least `diam + 1` configurations; shorter traces are checked as far as
/// they go.
///
/// 1. A vertex privileged at `gamma_i` with `i < diam` fired no `CA`/`RA`
///    in steps `0..i`.
/// 2. Such a vertex is in no zero-island in `gamma_0..=gamma_i`.
/// 3. For `0 < i < diam`, a vertex in a non-zero-island of depth `k` at
///    `gamma_i` was, at `gamma_{i-1}`, in a zero-island or in a
///    non-zero-island of depth at least `k + 1`.
/// 4. If `gamma_0` is not legitimate, every register at `gamma_diam` is
///    initial or lies on the ring arc from `K - diam` through `2 diam - 1`.
pub fn check_lemmas(ssme: &Ssme, trace: &Trace) -> Vec<LemmaViolation> {
    let g = ssme.graph();
    let params = ssme.params();
    let diam = g.diam();
    let reports: Vec<IslandReport> = trace
        .configs
        .iter()
        .take(diam + 1)
        .map(|c| islands(c, g, params))
        .collect();
    let mut out = Vec::new();

    for i in 0..diam.min(trace.configs.len()) {
        for &v in &trace.privileged[i] {
            for s in 0..i {
                if let Some(rule @ (Rule::Converge | Rule::Reset)) = trace.rule_at(s, v) {
                    out.push(LemmaViolation {
                        lemma: 1,
                        index: i,
                        vertex: v,
                        detail: format!("privileged but fired {rule} at step {s}"),
                    });
                }
            }
            for (j, report) in reports.iter().enumerate().take(i + 1) {
                if report.in_zero_island(v) {
                    out.push(LemmaViolation {
                        lemma: 2,
                        index: i,
                        vertex: v,
                        detail: format!("privileged but in a zero-island at gamma_{j}"),
                    });
                }
            }
        }
    }

    for i in 1..diam.min(reports.len()) {
        for isl in reports[i].islands.iter().filter(|isl| !isl.zero) {
            for &v in &isl.members {
                let ok = reports[i - 1]
                    .islands_of(v)
                    .any(|prev| prev.zero || prev.depth > isl.depth);
                if !ok {
                    out.push(LemmaViolation {
                        lemma: 3,
                        index: i,
                        vertex: v,
                        detail: format!(
                            "in a non-zero-island of depth {} but no zero-island or deeper island at gamma_{}",
                            isl.depth,
                            i - 1
                        ),
                    });
                }
            }
        }
    }

    if !trace.legitimate[0] && trace.configs.len() > diam {
        for (v, &r) in trace.configs[diam].iter().enumerate() {
            if !lemma4_holds(r, ssme) {
                out.push(LemmaViolation {
                    lemma: 4,
                    index: diam,
                    vertex: v,
                    detail: format!("register {r} outside the admissible arc"),
                });
            }
        }
    }
    out
}

/// Membership in `init ∪ {K - diam, .., K - 1, 0, .., 2 diam - 1}`.
pub fn lemma4_holds(r: i64, ssme: &Ssme) -> bool {
    let p = ssme.params();
    let d = ssme.graph().diam() as i64;
    p.is_init(r) || r >= p.k() - d || r < 2 * d
}
