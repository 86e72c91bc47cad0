//! Run SSME under the synchronous daemon, measure convergence and export the
//! trace as JSON.

use ssme::harness::export::trace_json;
use ssme::harness::{ExperimentSpec, InitSource};

fn main() {
    let mut spec = ExperimentSpec::default();
    spec.apply_text("graph = path:2\ndaemon = sync\ntail = 4\n").unwrap();
    spec.init = InitSource::Witness;
    let exp = spec.resolve().unwrap();
    println!("{}\n", exp.spec);

    let outcome = &exp.run_all().unwrap()[0];
    let t = &outcome.trace;
    for (i, c) in t.configs.iter().enumerate() {
        let rules: Vec<String> = t
            .steps
            .get(i)
            .map(|s| s.activated.iter().zip(&s.rules).map(|(v, r)| format!("{v}:{r}")).collect())
            .unwrap_or_default();
        println!(
            "gamma_{i:<2} {c:<10} privileged {:?} legitimate {} {}",
            t.privileged[i],
            t.legitimate[i],
            rules.join(" ")
        );
    }
    println!("\nconv_me {} conv_au {}", outcome.conv_me, outcome.conv_au);

    let json = trace_json(&exp, outcome).unwrap();
    println!("\ntrace export: {} bytes, starts {}", json.len(), &json[..json.find(',').unwrap()]);
}
