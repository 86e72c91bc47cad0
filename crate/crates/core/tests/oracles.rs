//! Reference values recomputed by a deliberately naive model of both
//! protocols, independent of the library's engine and search code.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ssme::engine::{convergence_index_me, run, worst_case_sync, ConfigSource, ConfigSpace, RunOptions, StopCondition};
use ssme::protocol::unfair_step_bound;
use ssme::{Configuration, DaemonPolicy, Dijkstra, Graph, Protocol, Ssme, Topology};

trait Model {
    fn n(&self) -> usize;
    fn values(&self) -> Vec<i64>;
    fn next(&self, c: &[i64], v: usize) -> Option<i64>;
    fn privileged(&self, c: &[i64], v: usize) -> bool;
    fn legitimate(&self, c: &[i64]) -> bool;
}

struct NaiveSsme {
    adj: Vec<Vec<usize>>,
    alpha: i64,
    k: i64,
    diam: i64,
}

impl NaiveSsme {
    fn new(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![Vec::new(); n];
        let inf = usize::MAX / 4;
        let mut d = vec![vec![inf; n]; n];
        for (i, row) in d.iter_mut().enumerate() {
            row[i] = 0;
        }
        for &(u, v) in edges {
            adj[u].push(v);
            adj[v].push(u);
            d[u][v] = 1;
            d[v][u] = 1;
        }
        for w in 0..n {
            for u in 0..n {
                for v in 0..n {
                    d[u][v] = d[u][v].min(d[u][w] + d[w][v]);
                }
            }
        }
        let diam = d.iter().flatten().copied().max().unwrap() as i64;
        let n = n as i64;
        Self {
            adj,
            alpha: n,
            k: (2 * n - 1) * (diam + 1) + 2,
            diam,
        }
    }

    fn stab(&self, x: i64) -> bool {
        0 <= x && x < self.k
    }

    fn init(&self, x: i64) -> bool {
        -self.alpha <= x && x <= 0
    }

    fn dk(&self, a: i64, b: i64) -> i64 {
        let d = (a - b).rem_euclid(self.k);
        d.min(self.k - d)
    }

    fn correct(&self, c: &[i64], v: usize, u: usize) -> bool {
        self.stab(c[v]) && self.stab(c[u]) && self.dk(c[v], c[u]) <= 1
    }

    fn phi(&self, x: i64) -> i64 {
        if x < 0 {
            x + 1
        } else {
            (x + 1) % self.k
        }
    }
}

impl Model for NaiveSsme {
    fn n(&self) -> usize {
        self.adj.len()
    }

    fn values(&self) -> Vec<i64> {
        (-self.alpha..self.k).collect()
    }

    fn next(&self, c: &[i64], v: usize) -> Option<i64> {
        let all_correct = self.adj[v].iter().all(|&u| self.correct(c, v, u));
        let normal = all_correct && self.adj[v].iter().all(|&u| (c[u] - c[v]).rem_euclid(self.k) <= 1);
        let converge = self.init(c[v])
            && c[v] != 0
            && self.adj[v].iter().all(|&u| self.init(c[u]) && c[v] <= c[u]);
        let reset = !all_correct && !self.init(c[v]);
        if normal || converge {
            Some(self.phi(c[v]))
        } else if reset {
            Some(-self.alpha)
        } else {
            None
        }
    }

    fn privileged(&self, c: &[i64], v: usize) -> bool {
        c[v] == 2 * self.alpha + 2 * self.diam * v as i64
    }

    fn legitimate(&self, c: &[i64]) -> bool {
        (0..self.n()).all(|v| self.adj[v].iter().all(|&u| self.correct(c, v, u)))
    }
}

struct NaiveDijkstra {
    n: usize,
    k: i64,
}

impl Model for NaiveDijkstra {
    fn n(&self) -> usize {
        self.n
    }

    fn values(&self) -> Vec<i64> {
        (0..self.k).collect()
    }

    fn next(&self, c: &[i64], v: usize) -> Option<i64> {
        if v == 0 {
            (c[0] == c[self.n - 1]).then(|| (c[0] + 1) % self.k)
        } else {
            (c[v] != c[v - 1]).then(|| c[v - 1])
        }
    }

    fn privileged(&self, c: &[i64], v: usize) -> bool {
        self.next(c, v).is_some()
    }

    fn legitimate(&self, c: &[i64]) -> bool {
        (0..self.n).filter(|&v| self.privileged(c, v)).count() == 1
    }
}

fn all_configs(m: &dyn Model) -> Vec<Vec<i64>> {
    let vals = m.values();
    let mut out = vec![Vec::new()];
    for _ in 0..m.n() {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                vals.iter().map(move |&x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out
}

fn unsafe_config(m: &dyn Model, c: &[i64]) -> bool {
    (0..m.n()).filter(|&v| m.privileged(c, v)).count() > 1
}

/// Synchronous ME convergence index by simulating until a configuration
/// repeats; `None` if the recurrent cycle contains an unsafe configuration.
fn sync_me_index(m: &dyn Model, start: &[i64]) -> Option<usize> {
    let mut seen = HashMap::new();
    let mut seq = vec![start.to_vec()];
    loop {
        let cur = seq.last().unwrap().clone();
        if let Some(&first) = seen.get(&cur) {
            let cycle_unsafe = seq[first..seq.len() - 1].iter().any(|c| unsafe_config(m, c));
            if cycle_unsafe {
                return None;
            }
            return Some(
                seq[..first]
                    .iter()
                    .rposition(|c| unsafe_config(m, c))
                    .map_or(0, |i| i + 1),
            );
        }
        seen.insert(cur.clone(), seq.len() - 1);
        let next: Vec<i64> = (0..m.n()).map(|v| m.next(&cur, v).unwrap_or(cur[v])).collect();
        seq.push(next);
    }
}

fn sync_worst(m: &dyn Model) -> usize {
    all_configs(m)
        .iter()
        .map(|c| sync_me_index(m, c).expect("synchronous execution stabilizes"))
        .max()
        .unwrap()
}

/// Longest action sequence to the legitimate set over every non-empty subset
/// of enabled vertices, by value iteration. `None` if it does not converge
/// (a cycle or deadlock outside the legitimate set).
fn unfair_worst(m: &dyn Model) -> Option<u64> {
    let configs = all_configs(m);
    let index: HashMap<Vec<i64>, usize> = configs.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    let succ: Vec<Vec<usize>> = configs
        .iter()
        .map(|c| {
            if m.legitimate(c) {
                return Vec::new();
            }
            let moves: Vec<(usize, i64)> = (0..m.n()).filter_map(|v| m.next(c, v).map(|x| (v, x))).collect();
            (1u32..1 << moves.len())
                .map(|mask| {
                    let mut d = c.clone();
                    for (bit, &(v, x)) in moves.iter().enumerate() {
                        if mask >> bit & 1 == 1 {
                            d[v] = x;
                        }
                    }
                    index[&d]
                })
                .collect()
        })
        .collect();
    if configs.iter().zip(&succ).any(|(c, s)| !m.legitimate(c) && s.is_empty()) {
        return None;
    }
    let mut value = vec![0u64; configs.len()];
    for _ in 0..=configs.len() {
        let next: Vec<u64> = succ
            .iter()
            .map(|s| s.iter().map(|&j| value[j] + 1).max().unwrap_or(0))
            .collect();
        if next == value {
            return value.into_iter().max();
        }
        value = next;
    }
    None
}

fn graph(t: Topology) -> Graph {
    Graph::generate(&t).unwrap()
}

fn naive_ssme(g: &Graph) -> NaiveSsme {
    NaiveSsme::new(g.n(), g.edges())
}

#[test]
fn naive_ssme_matches_library_transitions() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for t in [
        Topology::Path(4),
        Topology::Ring(5),
        Topology::Complete(4),
        Topology::Grid { rows: 2, cols: 3 },
        Topology::RandomConnected { n: 7, p: 0.3, seed: 4 },
    ] {
        let g = graph(t);
        let (lib, naive) = (Ssme::new(g.clone()), naive_ssme(&g));
        assert_eq!(lib.params().k(), naive.k);
        for _ in 0..20_000 {
            // Bias toward small drifts so that every rule gets exercised.
            let base = rng.gen_range(-naive.alpha..naive.k);
            let c: Vec<i64> = (0..g.n())
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        rng.gen_range(-naive.alpha..naive.k)
                    } else {
                        (base + rng.gen_range(-1..=1)).clamp(-naive.alpha, naive.k - 1)
                    }
                })
                .collect();
            for v in 0..g.n() {
                let lib_next = lib.enabled_rule(&c, v).map(|r| lib.apply(&c, v, r));
                assert_eq!(lib_next, naive.next(&c, v), "{c:?} at {v}");
                assert_eq!(lib.is_privileged(&c, v), naive.privileged(&c, v));
            }
            assert_eq!(lib.is_legitimate(&c), naive.legitimate(&c));
        }
    }
}

#[test]
fn naive_dijkstra_matches_library_transitions() {
    for n in 3..=5 {
        let lib = Dijkstra::with_default_states(graph(Topology::Ring(n))).unwrap();
        let naive = NaiveDijkstra { n, k: n as i64 + 1 };
        for c in all_configs(&naive) {
            for v in 0..n {
                let lib_next = lib.enabled_rule(&c, v).map(|r| lib.apply(&c, v, r));
                assert_eq!(lib_next, naive.next(&c, v));
            }
            assert_eq!(lib.is_legitimate(&c), naive.legitimate(&c));
        }
    }
}

#[test]
fn ssme_sync_worst_is_half_diameter() {
    for (t, expected) in [(Topology::Path(2), 1), (Topology::Path(3), 1), (Topology::Ring(4), 1)] {
        assert_eq!(sync_worst(&naive_ssme(&graph(t))), expected);
    }
}

#[test]
fn ssme_sync_index_agrees_with_engine_per_config() {
    let g = graph(Topology::Path(3));
    let (lib, naive) = (Ssme::new(g), naive_ssme(&graph(Topology::Path(3))));
    let space = ConfigSpace::of(&lib);
    for i in 0..space.size().unwrap() {
        let c = space.decode(i);
        let trace = run(
            &lib,
            &Configuration::new(c.clone()),
            &mut DaemonPolicy::synchronous(),
            RunOptions::new(200, StopCondition::Never),
        )
        .unwrap();
        assert_eq!(convergence_index_me(&trace).value(), sync_me_index(&naive, &c), "{c:?}");
    }
}

#[test]
fn ssme_unfair_worst_small_graphs() {
    assert_eq!(unfair_worst(&naive_ssme(&graph(Topology::Path(2)))), Some(6));
    assert_eq!(unfair_worst(&naive_ssme(&graph(Topology::Path(3)))), Some(15));
}

#[test]
fn dijkstra_sync_worst_is_2n_minus_3() {
    for (n, expected) in [(3, 3), (4, 5), (5, 7)] {
        let naive = NaiveDijkstra { n, k: n as i64 + 1 };
        assert_eq!(sync_worst(&naive), expected);
        let lib = Dijkstra::with_default_states(graph(Topology::Ring(n))).unwrap();
        let w = worst_case_sync(&lib, ConfigSource::Exhaustive, 1_000_000, 200).unwrap();
        assert_eq!(w.max_index, expected);
    }
}

#[test]
fn dijkstra_unfair_worst() {
    assert_eq!(unfair_worst(&NaiveDijkstra { n: 3, k: 4 }), Some(3));
    assert_eq!(unfair_worst(&NaiveDijkstra { n: 4, k: 5 }), Some(13));
}

#[test]
fn unfair_bound_formula() {
    let formula = |n: i64, d: i64| 2 * d * n.pow(3) + (n + 1) * n * n + (n - 2 * d) * n;
    for (n, d, expected) in [(2, 1, 28), (3, 2, 141), (4, 2, 336), (5, 2, 655)] {
        assert_eq!(formula(n, d), expected);
        assert_eq!(unfair_step_bound(n as usize, d as usize), expected as u64);
    }
    for n in 1..30 {
        for d in 0..n {
            assert_eq!(unfair_step_bound(n as usize, d as usize), formula(n, d) as u64);
        }
    }
}
