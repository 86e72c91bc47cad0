//! Simulation laboratory for speculatively stabilizing mutual exclusion.
//!
//! The crate runs guarded-rule protocols on arbitrary connected graphs under
//! pluggable schedulers and measures how fast they recover from arbitrary
//! initial configurations:
//!
//! - [`graph`]: communication graphs, generators and hop metrics;
//! - [`clock`]: the bounded cherry clock algebra;
//! - [`protocol`]: SSME (asynchronous unison with clock-value privileges) and
//!   Dijkstra's K-state token ring;
//! - [`daemon`]: synchronous, central, random distributed and exhaustive
//!   schedulers;
//! - [`engine`]: execution traces, convergence indices, islands, lemma
//!   checks and the worst-case search oracles;
//! - [`harness`]: experiment specs, exports, property suites and the
//!   command-line front end.
//!
//! ```
//! use ssme::daemon::DaemonPolicy;
//! use ssme::engine::{convergence_index_me, run, Configuration, RunOptions, StopCondition};
//! use ssme::graph::{Graph, Topology};
//! use ssme::protocol::Ssme;
//!
//! let ssme = Ssme::new(Graph::generate(&Topology::Path(2)).unwrap());
//! // Both vertices sit on their critical-section thresholds.
//! let init = Configuration::new(vec![4, 6]);
//! let trace = run(
//!     &ssme,
//!     &init,
//!     &mut DaemonPolicy::synchronous(),
//!     RunOptions::new(100, StopCondition::OnLegitimate { tail: 0 }),
//! )
//! .unwrap();
//! assert_eq!(convergence_index_me(&trace).value(), Some(1));
//! ```

pub mod clock;
pub mod daemon;
pub mod engine;
pub mod error;
pub mod graph;
pub mod harness;
pub mod protocol;

pub use clock::{ClockParams, ClockValue};
pub use daemon::{DaemonKind, DaemonPolicy};
pub use engine::{Configuration, Trace};
pub use graph::{Graph, Topology};
pub use protocol::{Dijkstra, Protocol, ProtocolKind, Rule, Ssme};
