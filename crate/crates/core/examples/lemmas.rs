//! Islands of a configuration and the structural lemma checks on sampled
//! synchronous traces.

use ssme::engine::islands;
use ssme::graph::{Graph, Topology};
use ssme::harness::verify::{run_suite, Scope, Suite};
use ssme::protocol::Ssme;

fn main() {
    let ring = Graph::generate(&Topology::Ring(4)).unwrap();
    let ssme = Ssme::new(ring.clone());
    // Three correct edges around the ring, one incorrect: two overlapping islands.
    let config = [21, 22, 0, 20];
    let report = islands(&config, &ring, ssme.params());
    println!("islands of {config:?} on ring:4 (K={}):", ssme.params().k());
    for isl in &report.islands {
        println!(
            "  members {:?} zero {} border {:?} depth {}",
            isl.members, isl.zero, isl.border, isl.depth
        );
    }

    for t in [Topology::Ring(4), Topology::Ring(6), Topology::Path(5), Topology::Ring(5)] {
        let mut scope = Scope::new(Graph::generate(&t).unwrap(), t.to_string());
        scope.samples = 20_000;
        println!();
        for check in run_suite(Suite::Lemmas, &scope).unwrap() {
            println!("{check}");
        }
    }
}
