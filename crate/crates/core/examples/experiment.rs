//! Experiment files, flag-style overrides and append-only summaries.

use ssme::harness::export::{append_summary, read_summary};
use ssme::harness::ExperimentSpec;

fn main() {
    let dir = std::env::temp_dir().join("ssme-experiment-example");
    let _ = std::fs::remove_dir_all(&dir);

    let mut spec = ExperimentSpec::default();
    spec.apply_text(
        "# central random daemon on a 5-ring
graph = ring:5
daemon = central-rand
init = random:200:3
",
    )
    .unwrap();
    spec.out = dir.clone();

    let mut rows = Vec::new();
    for seed in 1..=3 {
        let mut s = spec.clone();
        s.seed = seed;
        let exp = s.resolve().unwrap();
        if seed == 1 {
            println!("{}\n", exp.spec);
        }
        let outcomes = exp.run_all().unwrap();
        let worst = outcomes.iter().map(|o| o.summary.conv_au).max().unwrap();
        println!("seed {seed}: {} runs, worst steps to legitimacy {worst}", outcomes.len());
        rows.extend(outcomes.into_iter().map(|o| o.summary));
    }
    let path = append_summary(&dir, spec.format, &rows).unwrap();
    let back = read_summary(&path).unwrap();
    println!("\n{} rows in {}; first: {:?}", back.len(), path.display(), back[0]);
}
