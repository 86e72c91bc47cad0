//! Generate graphs, inspect their metrics and round-trip the text format.

use ssme::graph::{Graph, Topology};

fn main() {
    for spec in ["ring:6", "path:5", "complete:4", "grid:2x3", "random:8:0.3:42"] {
        let t: Topology = spec.parse().unwrap();
        let g = Graph::generate(&t).unwrap();
        let (u, v) = g.diametral_pair();
        println!(
            "{spec:<16} n={} m={} diam={} diametral pair ({u},{v}) ball(0,1)={:?}",
            g.n(),
            g.m(),
            g.diam(),
            g.ball(0, 1)
        );
    }

    let text = "# a triangle with a tail\n4 4\n0 1\n1 2\n2 0\n2 3\n";
    let g = Graph::parse(text).unwrap();
    println!("\nparsed: diam {} dist(0,3) {}", g.diam(), g.dist(0, 3));
    print!("{}", g.to_text());

    match Graph::new(4, &[(0, 1), (2, 3)]) {
        Ok(_) => unreachable!(),
        Err(e) => println!("rejected: {e}"),
    }
}
