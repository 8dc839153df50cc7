use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use braess::equilibrium::{is_nash_flow, optimal_bottleneck_cost, worst_nash_flow};
use braess::model::path_bottleneck;
use braess::random::{random_dag, random_flow, random_series_parallel};
use braess::rational::{parse_q, q, qi, to_pq, zero, Q};
use braess::search::{count_candidate_flows, enumerate_candidate_flows, sparsify_flow_with, LogBase};
use braess::topology::{enumerate_paths, enumerate_st_cuts, max_flow, series_parallel_decompose};
use braess::{Flow, RoutingInstance};

fn slopes() -> Vec<Q> {
    vec![q(1, 3), q(1, 2), qi(1), qi(2), qi(3)]
}

fn dag(seed: u64, max_nodes: usize, max_extra: usize) -> (ChaCha8Rng, RoutingInstance) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nodes = rng.gen_range(2..=max_nodes);
    let extra = rng.gen_range(0..=max_extra);
    let rate = qi(rng.gen_range(1..=4)) / qi(rng.gen_range(1..=3));
    let g = random_dag(&mut rng, nodes, extra, &slopes(), rate);
    (rng, g)
}

/// Path flows on a grid of `1/n` fractions of the rate.
fn grid_flows(g: &RoutingInstance, n: u32) -> Vec<Flow> {
    let paths = enumerate_paths(g).unwrap();
    let mut out = Vec::new();
    let mut counts = vec![0u32; paths.len()];
    fn rec(i: usize, left: u32, counts: &mut Vec<u32>, f: &mut dyn FnMut(&[u32])) {
        if i + 1 == counts.len() {
            counts[i] = left;
            f(counts);
            return;
        }
        for c in 0..=left {
            counts[i] = c;
            rec(i + 1, left - c, counts, f);
        }
    }
    rec(0, n, &mut counts, &mut |c| {
        let flows = paths
            .iter()
            .zip(c)
            .filter(|(_, &k)| k > 0)
            .map(|(p, &k)| (p.clone(), g.rate() * qi(k as i64) / qi(n as i64)))
            .collect();
        out.push(Flow::new(g, flows).unwrap());
    });
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rationals_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
        let x = q(n, d);
        prop_assert_eq!(parse_q(&to_pq(&x)), Some(x));
    }

    #[test]
    fn max_flow_equals_min_cut(seed in any::<u64>()) {
        let (mut rng, g) = dag(seed, 6, 8);
        let caps: Vec<Q> = (0..g.edge_count()).map(|_| qi(rng.gen_range(1..=9)) / qi(rng.gen_range(1..=4))).collect();
        let mf = max_flow(&g, &caps);
        let min_cut = enumerate_st_cuts(&g).unwrap().iter().map(|c| c.iter().map(|&e| caps[e].clone()).sum::<Q>()).min().unwrap();
        prop_assert_eq!(&mf.value, &min_cut);
        for (f, c) in mf.edge_flows.iter().zip(&caps) {
            prop_assert!(f >= &zero() && f <= c);
        }
    }

    #[test]
    fn nash_check_matches_path_definition(seed in any::<u64>()) {
        let (mut rng, g) = dag(seed, 6, 6);
        let paths = enumerate_paths(&g).unwrap();
        let f = random_flow(&mut rng, &g, &paths, 4).unwrap();
        let report = f.bottleneck_cost();
        let best = paths.iter().map(|p| path_bottleneck(&report.edge_latencies, p)).min().unwrap();
        let by_paths = report.path_bottlenecks.iter().all(|(_, b)| *b <= best);
        let cert = is_nash_flow(&f);
        prop_assert_eq!(cert.verdict, by_paths);
        if let Some(cut) = cert.blocking_cut {
            // the blocking cut separates s from t and every edge in it is saturated
            prop_assert!(g.find_path(|e| !cut.contains(&e)).is_none());
            for e in cut {
                prop_assert!(report.edge_latencies[e] >= report.bottleneck);
            }
        }
    }

    #[test]
    fn optimum_and_worst_nash_bracket_grid_flows(seed in any::<u64>()) {
        let (_, g) = dag(seed, 4, 3);
        let (opt, of) = optimal_bottleneck_cost(&g).unwrap();
        prop_assert_eq!(of.cost(), opt.clone());
        let worst = worst_nash_flow(&g).unwrap();
        prop_assert!(is_nash_flow(&worst.flow).verdict);
        prop_assert!(worst.cost >= opt);
        for f in grid_flows(&g, 6) {
            prop_assert!(f.cost() >= opt);
            if is_nash_flow(&f).verdict {
                prop_assert!(f.cost() <= worst.cost);
            }
        }
    }

    #[test]
    fn series_parallel_recognition(seed in any::<u64>(), edges in 1usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_series_parallel(&mut rng, edges, &slopes(), qi(1));
        let tree = series_parallel_decompose(&g);
        prop_assert!(tree.is_some_and(|t| t.reproduces(&g)));
    }

    #[test]
    fn sparsified_flows_meet_the_bound(seed in any::<u64>(), eps_den in 2i64..5) {
        let (mut rng, g) = dag(seed, 7, 10);
        let g = g.with_rate(qi(1)).unwrap();
        let paths = enumerate_paths(&g).unwrap();
        let f = random_flow(&mut rng, &g, &paths, 50).unwrap();
        let eps = q(1, eps_den);
        let c = sparsify_flow_with(&f, &eps, seed, LogBase::Natural).unwrap();
        prop_assert!(c.deviation(&f) <= eps);
        for (p, _) in c.flow.paths() {
            prop_assert!(f.path_flow(p) > zero());
        }
    }

    #[test]
    fn candidate_stream_size(p in 1usize..5, k in 1u64..6) {
        let g = braess::fixtures::parallel_links(&vec![qi(1); p], qi(1));
        let paths = enumerate_paths(&g).unwrap();
        let stream = enumerate_candidate_flows(&paths, k, u128::MAX).unwrap();
        let total = stream.total();
        let all: Vec<Vec<u32>> = stream.collect();
        prop_assert_eq!(all.len() as u128, total);
        prop_assert_eq!(total, count_candidate_flows(p, k));
        let distinct: std::collections::BTreeSet<_> = all.iter().collect();
        prop_assert_eq!(distinct.len(), all.len());
        prop_assert!(all.iter().all(|c| (1..=k).contains(&c.iter().map(|&x| x as u64).sum())));
    }

    #[test]
    fn path_count_matches_dynamic_programme(seed in any::<u64>()) {
        let (_, g) = dag(seed, 8, 12);
        // nodes are added in topological order by the generator
        let mut ways = vec![0u64; g.node_count()];
        let order: Vec<usize> = std::iter::once(g.source())
            .chain((0..g.node_count()).filter(|&v| v != g.source() && v != g.sink()))
            .chain(std::iter::once(g.sink()))
            .collect();
        ways[g.source()] = 1;
        for &v in &order {
            for &e in g.out_edges(v) {
                ways[g.edge(e).head] += ways[v];
            }
        }
        prop_assert_eq!(enumerate_paths(&g).unwrap().len() as u64, ways[g.sink()]);
    }
}
