//! Random instances and flows for property tests and experiments.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::latency::LatencyFunction;
use crate::model::{Flow, InstanceBuilder, RoutingInstance};
use crate::rational::{qi, Q};
use crate::topology::PathSet;

fn pick<'a, R: Rng + ?Sized>(rng: &mut R, slopes: &'a [Q]) -> &'a Q {
    slopes.choose(rng).expect("at least one slope")
}

fn lin(a: &Q) -> LatencyFunction {
    LatencyFunction::linear(a.clone()).expect("positive slope")
}

fn node_name(i: usize, n: usize) -> String {
    match i {
        0 => "s".into(),
        i if i + 1 == n => "t".into(),
        i => format!("x{i}"),
    }
}

/// A random DAG on `nodes` nodes in topological order `s = 0 < … < t`: a
/// backbone `s → … → t` plus up to `extra_edges` random forward edges, with
/// linear slopes drawn from `slopes`.
pub fn random_dag<R: Rng + ?Sized>(rng: &mut R, nodes: usize, extra_edges: usize, slopes: &[Q], rate: Q) -> RoutingInstance {
    assert!(nodes >= 2);
    let mut b = InstanceBuilder::new("s", "t");
    for i in 1..nodes - 1 {
        b = b.node(&node_name(i, nodes));
    }
    let mut count = 0;
    let mut edge = |b: InstanceBuilder, i: usize, j: usize, rng: &mut R| {
        count += 1;
        b.edge(&format!("e{count:02}"), &node_name(i, nodes), &node_name(j, nodes), lin(pick(rng, slopes)))
    };
    for i in 0..nodes - 1 {
        b = edge(b, i, i + 1, rng);
    }
    for _ in 0..extra_edges {
        let i = rng.gen_range(0..nodes - 1);
        let j = rng.gen_range(i + 1..nodes);
        b = edge(b, i, j, rng);
    }
    b.rate(rate).build().expect("backbone keeps t reachable")
}

/// A random two-terminal series-parallel network with `edges` edges, grown
/// from a single `s → t` edge by repeatedly splitting a random edge in
/// series or doubling it in parallel.
pub fn random_series_parallel<R: Rng + ?Sized>(rng: &mut R, edges: usize, slopes: &[Q], rate: Q) -> RoutingInstance {
    assert!(edges >= 1);
    let mut list: Vec<(usize, usize)> = vec![(0, 1)];
    let mut next_node = 2;
    while list.len() < edges {
        let k = rng.gen_range(0..list.len());
        let (a, b) = list[k];
        if rng.gen_bool(0.5) {
            list[k] = (a, next_node);
            list.push((next_node, b));
            next_node += 1;
        } else {
            list.push((a, b));
        }
    }
    let name = |i: usize| match i {
        0 => "s".to_string(),
        1 => "t".to_string(),
        i => format!("x{i}"),
    };
    let mut b = InstanceBuilder::new("s", "t");
    for i in 2..next_node {
        b = b.node(&name(i));
    }
    for (i, (x, y)) in list.iter().enumerate() {
        b = b.edge(&format!("e{i:02}"), &name(*x), &name(*y), lin(pick(rng, slopes)));
    }
    b.rate(rate).build().expect("series-parallel networks connect s to t")
}

/// A random feasible flow on a random nonempty subset of `paths`, with
/// amounts proportional to integers in `1..=weight_max`.
pub fn random_flow<R: Rng + ?Sized>(rng: &mut R, instance: &RoutingInstance, paths: &PathSet, weight_max: u32) -> Result<Flow> {
    let mut chosen: Vec<usize> = (0..paths.len()).filter(|_| rng.gen_bool(0.5)).collect();
    if chosen.is_empty() {
        chosen.push(rng.gen_range(0..paths.len()));
    }
    let weights: Vec<u32> = chosen.iter().map(|_| rng.gen_range(1..=weight_max)).collect();
    let total: u32 = weights.iter().sum();
    let r = instance.rate();
    let flows = chosen
        .iter()
        .zip(&weights)
        .map(|(&i, &w)| (paths.paths[i].clone(), r * qi(w as i64) / qi(total as i64)))
        .collect();
    Flow::new(instance, flows)
}

/// A random subnetwork: the union of a random nonempty set of s-t paths.
pub fn random_subnetwork<R: Rng + ?Sized>(rng: &mut R, instance: &RoutingInstance, paths: &PathSet) -> Result<RoutingInstance> {
    let mut keep = vec![false; instance.edge_count()];
    let first = rng.gen_range(0..paths.len());
    for (i, p) in paths.iter().enumerate() {
        if i == first || rng.gen_bool(0.3) {
            for &e in p {
                keep[e] = true;
            }
        }
    }
    instance.subnetwork(|e| keep[e])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::topology::{enumerate_paths, series_parallel_decompose};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_are_valid_and_reproducible() {
        let slopes = [q(1, 2), qi(1), qi(2)];
        let a = random_dag(&mut ChaCha8Rng::seed_from_u64(7), 6, 8, &slopes, qi(1));
        let b = random_dag(&mut ChaCha8Rng::seed_from_u64(7), 6, 8, &slopes, qi(1));
        assert_eq!(a, b);
        assert_eq!(a.edge_count(), 13);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let g = random_series_parallel(&mut rng, 7, &slopes, qi(1));
            assert_eq!(g.edge_count(), 7);
            assert!(series_parallel_decompose(&g).is_some());
            let paths = enumerate_paths(&g).unwrap();
            let f = random_flow(&mut rng, &g, &paths, 5).unwrap();
            assert_eq!(f.paths().iter().map(|(_, x)| x.clone()).sum::<Q>(), qi(1));
            assert!(random_subnetwork(&mut rng, &g, &paths).is_ok());
        }
    }
}
