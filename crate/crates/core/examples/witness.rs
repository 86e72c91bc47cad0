//! Lower-bound witnesses: configurations whose synchronous execution keeps
//! two distant vertices privileged for ceil(diam/2) steps.

use ssme::engine::lower_bound_witness;
use ssme::graph::{Graph, Topology};
use ssme::protocol::Ssme;

fn main() {
    for t in [
        Topology::Path(2),
        Topology::Ring(4),
        Topology::Path(5),
        Topology::Ring(8),
        Topology::Grid { rows: 3, cols: 3 },
    ] {
        let g = Graph::generate(&t).unwrap();
        let diam = g.diam();
        let w = lower_bound_witness(&Ssme::new(g)).unwrap();
        println!(
            "{t:<8} diam {diam}: {} index {} (ceil(diam/2) = {}) via ({},{}) radius {}{}",
            w.config,
            w.index,
            diam.div_ceil(2),
            w.u,
            w.v,
            w.radius,
            if w.searched { " [search]" } else { "" }
        );
    }
}
