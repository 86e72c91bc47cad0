//! The cherry clock: a stem of initial values feeding a ring of K values.

use ssme::clock::ClockParams;

fn main() {
    let p = ClockParams::new(3, 12).unwrap();
    let mut c = p.reset();
    let mut walk = vec![c];
    for _ in 0..16 {
        c = p.increment(c);
        walk.push(c);
    }
    println!("cherry(3,12) from reset: {walk:?}");

    for (a, b) in [(11, 0), (0, 11), (3, 9), (5, 5), (5, 7)] {
        println!(
            "d({a},{b}) = {}  comparable {}  {a} <=_l {b}: {}",
            p.distance(a, b),
            p.locally_comparable(a, b),
            p.leq_local(a, b)
        );
    }

    let ssme = ClockParams::for_ssme(6, 3);
    println!(
        "\nSSME clock on a 6-ring: alpha={} K={} domain {}..={}",
        ssme.alpha(),
        ssme.k(),
        ssme.min_value(),
        ssme.max_value()
    );
    for v in [-6, -1, 0, 1, 45] {
        println!("  {v:>3}: {:?}", ssme.classify(v));
    }
}
