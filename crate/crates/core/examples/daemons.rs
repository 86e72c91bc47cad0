//! The same start under every scheduler: steps to mutual exclusion and to
//! unison legitimacy.

use ssme::daemon::{DaemonKind, DaemonPolicy};
use ssme::engine::{convergence_index_au, convergence_index_me, run, Configuration, RunOptions, StopCondition};
use ssme::graph::{Graph, Topology};
use ssme::protocol::Ssme;

fn main() {
    let ssme = Ssme::new(Graph::generate(&Topology::Ring(5)).unwrap());
    let init = Configuration::new(vec![10, 3, 27, -2, 18]);
    let budget = ssme.unfair_step_bound() as usize;
    println!("ring:5 from {init}, step budget {budget}");

    let kinds = [
        DaemonKind::Synchronous,
        DaemonKind::CentralRoundRobin,
        DaemonKind::CentralRandom,
        DaemonKind::CentralAdversarial,
        DaemonKind::RandomDistributed { p: 0.3 },
        DaemonKind::RandomDistributed { p: 0.7 },
    ];
    for kind in kinds {
        for seed in [1, 2] {
            let mut policy = DaemonPolicy::new(kind, seed).unwrap();
            let trace = run(&ssme, &init, &mut policy, RunOptions::new(budget, StopCondition::OnLegitimate { tail: 0 })).unwrap();
            println!(
                "{:<14} seed {seed}: conv_me {:>3} conv_au {:>3} end {}",
                kind.to_string(),
                convergence_index_me(&trace),
                convergence_index_au(&trace),
                trace.last()
            );
        }
    }
}
