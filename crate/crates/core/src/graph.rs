//! Undirected connected communication graphs with precomputed hop metrics.
//!
//! Vertex identities are always `0..n`. Distances are computed once, by a
//! breadth-first search from every vertex, and the diameter is derived from
//! them so protocol parameters can never disagree with the topology.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::GraphError;

/// Communication graph `g = (V, E)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    dist: Vec<Vec<usize>>,
    diam: usize,
}

impl Graph {
    /// Builds a graph from an edge list. Pairs are unordered; the stored edge
    /// list is normalized to `(min, max)` and sorted.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut set = BTreeSet::new();
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if !set.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }

        let mut dist = Vec::with_capacity(n);
        for source in 0..n {
            let row = bfs(&adjacency, source);
            if let Some(unreached) = row.iter().position(Option::is_none) {
                return Err(GraphError::Disconnected {
                    from: source,
                    to: unreached,
                });
            }
            dist.push(row.into_iter().map(|d| d.unwrap_or_default()).collect::<Vec<_>>());
        }
        let diam = dist.iter().flatten().copied().max().unwrap_or(0);

        Ok(Self {
            n,
            edges,
            adjacency,
            dist,
            diam,
        })
    }

    /// Builds one of the standard topologies.
    pub fn generate(topology: &Topology) -> Result<Self, GraphError> {
        match *topology {
            Topology::Ring(n) => {
                let edges: Vec<_> = match n {
                    0 => return Err(GraphError::Empty),
                    1 => Vec::new(),
                    2 => vec![(0, 1)],
                    _ => (0..n).map(|i| (i, (i + 1) % n)).collect(),
                };
                Self::new(n, &edges)
            }
            Topology::Path(n) => {
                let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
                Self::new(n, &edges)
            }
            Topology::Complete(n) => {
                let edges: Vec<_> = (0..n)
                    .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                    .collect();
                Self::new(n, &edges)
            }
            Topology::Grid { rows, cols } => {
                let n = rows * cols;
                let mut edges = Vec::new();
                for r in 0..rows {
                    for c in 0..cols {
                        let v = r * cols + c;
                        if c + 1 < cols {
                            edges.push((v, v + 1));
                        }
                        if r + 1 < rows {
                            edges.push((v, v + cols));
                        }
                    }
                }
                Self::new(n, &edges)
            }
            Topology::RandomConnected { n, p, seed } => random_connected(n, p, seed),
        }
    }

    /// Parses the plain-text graph format: a header line `n m` followed by
    /// `m` lines `u v`. Lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (line, header) = lines.next().ok_or(GraphError::Parse {
            line: 1,
            reason: "missing header line `n m`".into(),
        })?;
        let (n, m) = parse_pair(header).map_err(|reason| GraphError::Parse { line, reason })?;

        let mut edges = Vec::with_capacity(m);
        for (line, body) in lines.by_ref() {
            let pair = parse_pair(body).map_err(|reason| GraphError::Parse { line, reason })?;
            edges.push(pair);
        }
        if edges.len() != m {
            return Err(GraphError::Parse {
                line: 1,
                reason: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        Self::new(n, &edges)
    }

    pub fn from_file(path: &Path) -> Result<Self, GraphError> {
        let text = std::fs::read_to_string(path).map_err(|source| GraphError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Serializes into the plain-text graph format accepted by [`Graph::parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for (u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Hop distance from the precomputed matrix.
    pub fn dist(&self, u: usize, v: usize) -> usize {
        self.dist[u][v]
    }

    pub fn diam(&self) -> usize {
        self.diam
    }

    /// Vertices within `k` hops of `v`, in increasing order.
    pub fn ball(&self, v: usize, k: usize) -> Vec<usize> {
        (0..self.n).filter(|&u| self.dist[v][u] <= k).collect()
    }

    /// A pair of vertices realizing the diameter (lexicographically first).
    pub fn diametral_pair(&self) -> (usize, usize) {
        for u in 0..self.n {
            for v in u..self.n {
                if self.dist[u][v] == self.diam {
                    return (u, v);
                }
            }
        }
        (0, 0)
    }

    /// Hop distance recomputed by a fresh BFS, independent of the matrix.
    pub fn bfs_distance(&self, u: usize, v: usize) -> Option<usize> {
        bfs(&self.adjacency, u)[v]
    }
}

fn bfs(adjacency: &[Vec<usize>], source: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; adjacency.len()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap_or_default();
        for &w in &adjacency[u] {
            if dist[w].is_none() {
                dist[w] = Some(du + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let mut it = s.split_whitespace();
    let mut next = || -> Result<usize, String> {
        let tok = it.next().ok_or_else(|| format!("expected two integers in `{s}`"))?;
        tok.parse::<usize>()
            .map_err(|e| format!("invalid integer `{tok}`: {e}"))
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(format!("trailing tokens in `{s}`"));
    }
    Ok((a, b))
}

/// Erdős–Rényi sample; if disconnected, components are joined by chaining
/// their smallest vertices, so the result is deterministic in `seed`.
fn random_connected(n: usize, p: f64, seed: u64) -> Result<Graph, GraphError> {
    if n == 0 {
        return Err(GraphError::Empty);
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(GraphError::Probability(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }

    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(u, v) in &edges {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent[ru.max(rv)] = ru.min(rv);
        }
    }
    let mut roots: Vec<usize> = (0..n).filter(|&v| find(&mut parent, v) == v).collect();
    roots.sort_unstable();
    for pair in roots.windows(2) {
        edges.push((pair[0], pair[1]));
    }
    Graph::new(n, &edges)
}

/// Generator selector for [`Graph::generate`].
#[derive(Clone, Debug, PartialEq)]
pub enum Topology {
    Ring(usize),
    Path(usize),
    Complete(usize),
    Grid { rows: usize, cols: usize },
    RandomConnected { n: usize, p: f64, seed: u64 },
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Topology::Ring(n) => write!(f, "ring:{n}"),
            Topology::Path(n) => write!(f, "path:{n}"),
            Topology::Complete(n) => write!(f, "complete:{n}"),
            Topology::Grid { rows, cols } => write!(f, "grid:{rows}x{cols}"),
            Topology::RandomConnected { n, p, seed } => write!(f, "random:{n}:{p}:{seed}"),
        }
    }
}

impl FromStr for Topology {
    type Err = GraphError;

    /// Accepts `ring:N`, `path:N`, `complete:N`, `grid:RxC` and
    /// `random:N:P:SEED`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GraphError::Topology(s.to_string());
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        let int = |t: &str| t.parse::<usize>().map_err(|_| bad());
        match kind {
            "ring" => Ok(Topology::Ring(int(rest)?)),
            "path" => Ok(Topology::Path(int(rest)?)),
            "complete" => Ok(Topology::Complete(int(rest)?)),
            "grid" => {
                let (r, c) = rest.split_once('x').ok_or_else(bad)?;
                Ok(Topology::Grid {
                    rows: int(r)?,
                    cols: int(c)?,
                })
            }
            "random" => {
                let parts: Vec<_> = rest.split(':').collect();
                if parts.len() != 3 {
                    return Err(bad());
                }
                Ok(Topology::RandomConnected {
                    n: int(parts[0])?,
                    p: parts[1].parse().map_err(|_| bad())?,
                    seed: parts[2].parse().map_err(|_| bad())?,
                })
            }
            _ => Err(bad()),
        }
    }
}
