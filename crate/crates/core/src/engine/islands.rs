use std::collections::BTreeSet;

use serde::Serialize;

use crate::clock::ClockParams;
use crate::graph::Graph;
use crate::protocol::is_unison_legitimate;

/// A maximal connected set of vertices in which every adjacent pair is
/// mutually correct.
///
/// Islands are proper subsets of the vertex set whenever the configuration
/// is not legitimate. When an incorrect edge closes a cycle of correct ones,
/// the vertices on that cycle belong to several overlapping islands.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Island {
    pub members: Vec<usize>,
    /// Some member holds the register value 0.
    pub zero: bool,
    /// Members with a neighbor outside the island.
    pub border: Vec<usize>,
    /// Largest hop distance from a member to the nearest border vertex.
    pub depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IslandReport {
    /// The configuration is unison-legitimate; no islands exist then.
    pub legitimate: bool,
    pub islands: Vec<Island>,
    #[serde(skip)]
    membership: Vec<Vec<usize>>,
}

impl IslandReport {
    /// Every island containing `v`.
    pub fn islands_of(&self, v: usize) -> impl Iterator<Item = &Island> + '_ {
        self.membership[v].iter().map(|&i| &self.islands[i])
    }

    pub fn in_zero_island(&self, v: usize) -> bool {
        self.islands_of(v).any(|isl| isl.zero)
    }
}

/// Enumerates the islands of a configuration.
///
/// Starts from the connected components of correct-valued vertices joined by
/// correct edges; a component still containing an incorrect edge is split by
/// removing either endpoint of that edge, recursively, and only the maximal
/// conflict-free pieces are kept.
pub fn islands(config: &[i64], graph: &Graph, params: &ClockParams) -> IslandReport {
    let n = graph.n();
    if is_unison_legitimate(config, graph, params) {
        return IslandReport {
            legitimate: true,
            islands: Vec::new(),
            membership: vec![Vec::new(); n],
        };
    }
    let stab: Vec<bool> = config.iter().map(|&r| params.is_stab(r)).collect();
    let linked =
        |u: usize, v: usize| stab[u] && stab[v] && params.distance(config[u], config[v]) <= 1;

    let mut candidates: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let all: Vec<usize> = (0..n).filter(|&v| stab[v]).collect();
    let mut work: Vec<Vec<usize>> = components(&all, graph, &linked);
    while let Some(set) = work.pop() {
        if !seen.insert(set.clone()) {
            continue;
        }
        let conflict = set.iter().find_map(|&u| {
            graph
                .neighbors(u)
                .iter()
                .find(|&&w| w > u && set.binary_search(&w).is_ok() && !linked(u, w))
                .map(|&w| (u, w))
        });
        match conflict {
            None => {
                candidates.insert(set);
            }
            Some((a, b)) => {
                for drop in [a, b] {
                    let rest: Vec<usize> = set.iter().copied().filter(|&x| x != drop).collect();
                    work.extend(components(&rest, graph, &linked));
                }
            }
        }
    }

    let maximal: Vec<Vec<usize>> = candidates
        .iter()
        .filter(|c| {
            !candidates
                .iter()
                .any(|d| d.len() > c.len() && c.iter().all(|x| d.binary_search(x).is_ok()))
        })
        .cloned()
        .collect();

    let mut membership = vec![Vec::new(); n];
    let islands = maximal
        .into_iter()
        .enumerate()
        .map(|(id, members)| {
            for &v in &members {
                membership[v].push(id);
            }
            let inside = |u: usize| members.binary_search(&u).is_ok();
            let border: Vec<usize> = members
                .iter()
                .copied()
                .filter(|&v| graph.neighbors(v).iter().any(|&u| !inside(u)))
                .collect();
            let depth = members
                .iter()
                .map(|&v| border.iter().map(|&b| graph.dist(v, b)).min().unwrap_or(0))
                .max()
                .unwrap_or(0);
            let zero = members.iter().any(|&v| config[v] == 0);
            Island {
                members,
                zero,
                border,
                depth,
            }
        })
        .collect();
    IslandReport {
        legitimate: false,
        islands,
        membership,
    }
}

/// Connected components of `vertices` under `linked`, each sorted.
fn components(vertices: &[usize], graph: &Graph, linked: &impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let mut done = BTreeSet::new();
    let mut out = Vec::new();
    for &start in vertices {
        if !done.insert(start) {
            continue;
        }
        let mut comp = vec![start];
        let mut i = 0;
        while i < comp.len() {
            let u = comp[i];
            i += 1;
            for &w in graph.neighbors(u) {
                if vertices.binary_search(&w).is_ok() && !done.contains(&w) && linked(u, w) {
                    done.insert(w);
                    comp.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}
