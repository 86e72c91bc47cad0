//! Exact worst case under the unfair distributed daemon by longest-path
//! search over the whole transition relation.

use ssme::engine::worst_case_unfair;
use ssme::graph::{Graph, Topology};
use ssme::protocol::{Dijkstra, Protocol, Ssme};

fn main() {
    for t in [Topology::Path(2), Topology::Path(3)] {
        let ssme = Ssme::new(Graph::generate(&t).unwrap());
        let w = worst_case_unfair(&ssme, 1_000_000).unwrap();
        println!(
            "ssme {t}: {} states ({} legitimate), worst {} steps from {} (bound {})",
            w.states,
            w.legitimate_states,
            w.max_steps,
            w.witness,
            ssme.unfair_step_bound()
        );
    }
    for n in 3..=5 {
        let d = Dijkstra::with_default_states(Graph::generate(&Topology::Ring(n)).unwrap()).unwrap();
        let w = worst_case_unfair(&d, 1_000_000).unwrap();
        println!(
            "{} ring:{n} K={}: worst {} steps from {}",
            d.name(),
            d.k(),
            w.max_steps,
            w.witness
        );
    }
}
