//! Synchronous against strong-daemon worst cases for SSME and Dijkstra's
//! K-state ring.

use ssme::graph::{Graph, Topology};
use ssme::harness::compare::{compare_graph, CompareOptions};

fn main() {
    let opts = CompareOptions {
        samples: 20_000,
        runs: 200,
        unfair_budget: 200_000,
        ..Default::default()
    };
    println!("graph     protocol   sync  unfair  ratio  predicted_f");
    for t in [Topology::Ring(3), Topology::Ring(4), Topology::Ring(5), Topology::Ring(6)] {
        let g = Graph::generate(&t).unwrap();
        for r in compare_graph(&t.to_string(), &g, &opts).unwrap() {
            println!(
                "{:<9} {:<9} {:>5} {:>7} {:>6} {:>12.1}{}",
                r.graph,
                r.protocol,
                r.sync_worst.map_or("-".into(), |v| v.to_string()),
                r.unfair_worst.map_or("-".into(), |v| format!("{v}{}", if r.unfair_exact { "" } else { "~" })),
                r.ratio.map_or("-".into(), |x| format!("{x:.2}")),
                r.predicted_f,
                if r.note.is_empty() { String::new() } else { format!("  ({})", r.note) }
            );
        }
    }
}
