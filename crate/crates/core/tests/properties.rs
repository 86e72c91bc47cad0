use std::collections::VecDeque;

use proptest::prelude::*;

use ssme::engine::{islands, run, ConfigSpace, RunOptions, StopCondition};
use ssme::harness::verify::lemma5_pairs;
use ssme::{Configuration, DaemonKind, DaemonPolicy, Graph, Protocol, Ssme, Topology};

fn random_graph() -> impl Strategy<Value = Graph> {
    (1usize..9, 0.0f64..1.0, any::<u64>())
        .prop_map(|(n, p, seed)| Graph::generate(&Topology::RandomConnected { n, p, seed }).unwrap())
}

fn daemon() -> impl Strategy<Value = DaemonKind> {
    prop_oneof![
        Just(DaemonKind::Synchronous),
        Just(DaemonKind::CentralRoundRobin),
        Just(DaemonKind::CentralRandom),
        Just(DaemonKind::CentralAdversarial),
        (0.05f64..1.0).prop_map(|p| DaemonKind::RandomDistributed { p }),
    ]
}

fn config_for(p: &Ssme, raw: &[u64]) -> Vec<i64> {
    let (lo, size) = (-p.params().alpha(), p.domain_size() as u64);
    (0..p.graph().n()).map(|v| lo + (raw[v % raw.len()] % size) as i64).collect()
}

fn bfs(g: &Graph, s: usize) -> Vec<usize> {
    let mut d = vec![usize::MAX; g.n()];
    d[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &w in g.neighbors(u) {
            if d[w] == usize::MAX {
                d[w] = d[u] + 1;
                q.push_back(w);
            }
        }
    }
    d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distances_match_bfs(g in random_graph()) {
        let mut diam = 0;
        for u in 0..g.n() {
            let d = bfs(&g, u);
            for (v, &dv) in d.iter().enumerate() {
                prop_assert_eq!(g.dist(u, v), dv);
                prop_assert_eq!(g.dist(u, v), g.dist(v, u));
                diam = diam.max(dv);
            }
        }
        prop_assert_eq!(g.diam(), diam);
    }

    #[test]
    fn legitimate_set_is_closed_and_safe(
        g in random_graph(),
        kind in daemon(),
        raw in prop::collection::vec(any::<u64>(), 1..9),
        seed in any::<u64>(),
    ) {
        let p = Ssme::new(g);
        let init = Configuration::new(config_for(&p, &raw));
        let mut policy = DaemonPolicy::new(kind, seed).unwrap();
        let max = p.unfair_step_bound() as usize + 200;
        let trace = run(&p, &init, &mut policy, RunOptions::new(max, StopCondition::OnLegitimate { tail: 100 })).unwrap();
        let first = trace.first_legitimate();
        prop_assert!(first.is_some_and(|i| i <= p.unfair_step_bound() as usize));
        let first = first.unwrap();
        prop_assert!(trace.legitimate[first..].iter().all(|&b| b));
        prop_assert!(trace.privileged[first..].iter().all(|pr| pr.len() <= 1));
    }

    #[test]
    fn seeded_runs_are_deterministic(
        g in random_graph(),
        kind in daemon(),
        raw in prop::collection::vec(any::<u64>(), 1..9),
        seed in any::<u64>(),
    ) {
        let p = Ssme::new(g);
        let init = Configuration::new(config_for(&p, &raw));
        let go = || {
            let mut policy = DaemonPolicy::new(kind, seed).unwrap();
            run(&p, &init, &mut policy, RunOptions::new(60, StopCondition::Never)).unwrap()
        };
        prop_assert_eq!(go(), go());
    }

    #[test]
    fn synchronous_local_view_depends_only_on_the_ball(g in random_graph(), seed in any::<u64>()) {
        let p = Ssme::new(g);
        for pair in lemma5_pairs(&p, 20, seed).unwrap() {
            prop_assert_eq!(&pair.left, &pair.right, "{}", pair);
            prop_assert_eq!(pair.left.len(), pair.k + 1);
        }
    }

    #[test]
    fn islands_are_maximal_connected_and_correct(
        g in random_graph(),
        raw in prop::collection::vec(any::<u64>(), 1..9),
        drift in any::<bool>(),
    ) {
        let p = Ssme::new(g);
        let params = *p.params();
        let mut c = config_for(&p, &raw);
        if drift {
            // Nearby values make large, interesting islands.
            let base = c[0].rem_euclid(params.k());
            for (v, x) in c.iter_mut().enumerate() {
                *x = if raw[v % raw.len()] % 5 == 0 { *x } else { (base + (raw[v % raw.len()] % 3) as i64) % params.k() };
            }
        }
        let g = p.graph();
        let report = islands(&c, g, &params);
        prop_assert_eq!(report.legitimate, p.is_legitimate(&c));
        if report.legitimate {
            prop_assert!(report.islands.is_empty());
            return Ok(());
        }
        for isl in &report.islands {
            let inside = |v: usize| isl.members.binary_search(&v).is_ok();
            prop_assert!(isl.members.len() < g.n());
            prop_assert!(isl.members.iter().all(|&v| params.is_stab(c[v])));
            for &u in &isl.members {
                for &w in g.neighbors(u) {
                    if inside(w) {
                        prop_assert!(p.correct(&c, u, w));
                    }
                }
            }
            let mut reached = vec![isl.members[0]];
            let mut i = 0;
            while i < reached.len() {
                for &w in g.neighbors(reached[i]) {
                    if inside(w) && !reached.contains(&w) {
                        reached.push(w);
                    }
                }
                i += 1;
            }
            prop_assert_eq!(reached.len(), isl.members.len());
            for w in (0..g.n()).filter(|&w| !inside(w)) {
                let touching: Vec<usize> = g.neighbors(w).iter().copied().filter(|&u| inside(u)).collect();
                let extendable = params.is_stab(c[w])
                    && !touching.is_empty()
                    && touching.iter().all(|&u| p.correct(&c, w, u));
                prop_assert!(!extendable, "island {:?} extends by {}", isl.members, w);
            }
            prop_assert_eq!(isl.zero, isl.members.iter().any(|&v| c[v] == 0));
            for &b in &isl.border {
                prop_assert!(g.neighbors(b).iter().any(|&w| !inside(w)));
            }
        }
        for (v, &x) in c.iter().enumerate() {
            prop_assert_eq!(report.islands_of(v).next().is_some(), params.is_stab(x));
        }
    }

    #[test]
    fn sampling_is_in_domain_and_encodable(g in random_graph(), seed in any::<u64>(), i in 0u64..1000) {
        let p = Ssme::new(g);
        let space = ConfigSpace::of(&p);
        let c = space.sample(seed, i);
        prop_assert!(c.iter().all(|x| p.domain().contains(x)));
        if space.size().is_some() {
            prop_assert_eq!(space.decode(space.encode(&c)), c);
        }
    }
}
