use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("graph must have at least one vertex")]
    Empty,
    #[error("edge ({u}, {v}) references a vertex outside 0..{n}")]
    VertexOutOfRange { u: usize, v: usize, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("graph is disconnected: no path from {from} to {to}")]
    Disconnected { from: usize, to: usize },
    #[error("edge probability {0} outside [0, 1]")]
    Probability(f64),
    #[error("unknown topology `{0}`")]
    Topology(String),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClockError {
    #[error("clock parameters require alpha >= 1 and K >= 2 (got alpha={alpha}, K={k})")]
    Params { alpha: i64, k: i64 },
    #[error("ring size K={0} is below 2")]
    RingSize(i64),
    #[error("value {value} outside cherry(-{alpha}..{k})")]
    OutOfRange { value: i64, alpha: i64, k: i64 },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProtocolError {
    #[error("Dijkstra's ring needs K > n (got K={k}, n={n})")]
    TooFewStates { n: usize, k: i64 },
    #[error("graph lacks ring edge ({0}, {1}) required by Dijkstra's protocol")]
    NotARing(usize, usize),
    #[error("unknown protocol `{0}`")]
    Unknown(String),
}

#[derive(Debug, Error, PartialEq)]
pub enum DaemonError {
    #[error("daemon asked to select from an empty enabled set")]
    NothingEnabled,
    #[error("enabled set of size {size} exceeds the branching cap {cap}")]
    BranchingCap { size: usize, cap: usize },
    #[error("exhaustive daemon branches; use enumerate_choices instead of select")]
    Branching,
    #[error("probability {0} outside (0, 1]")]
    Probability(f64),
    #[error("unknown daemon `{0}`")]
    Unknown(String),
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("vertex {0} activated but not enabled")]
    NotEnabled(usize),
    #[error("empty activation set")]
    EmptyActivation,
    #[error("configuration has {got} entries, graph has {expected} vertices")]
    Arity { expected: usize, got: usize },
    #[error("vertex {vertex} holds {value}, outside the protocol domain")]
    OutOfDomain { vertex: usize, value: i64 },
    #[error("search budget of {budget} exceeded ({needed} required)")]
    Budget { budget: u64, needed: u64 },
    #[error("cycle outside the legitimate set through {} configurations", cycle.len())]
    Cycle { cycle: Vec<Vec<i64>> },
    #[error("terminal configuration outside the legitimate set: {config:?}")]
    Deadlock { config: Vec<i64> },
    #[error("witness construction failed: {0}")]
    Witness(String),
    #[error(transparent)]
    Daemon(#[from] DaemonError),
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Daemon(#[from] DaemonError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl HarnessError {
    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
