use crate::error::{Error, Result};
use crate::model::{Path, RoutingInstance};

/// Default cap on the number of enumerated paths.
pub const DEFAULT_MAX_PATHS: usize = 1_000_000;

/// All simple s-t paths of an instance, sorted lexicographically by edge-id
/// sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSet {
    pub paths: Vec<Path>,
}

impl PathSet {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Path> {
        self.paths.iter()
    }

    /// Bit `i` set when path `i` uses only edges accepted by `keep`.
    /// Only meaningful for at most 128 paths.
    pub fn mask_within(&self, keep: impl Fn(usize) -> bool) -> u128 {
        self.paths
            .iter()
            .enumerate()
            .filter(|(_, p)| p.iter().all(|&e| keep(e)))
            .fold(0u128, |m, (i, _)| m | (1u128 << i))
    }
}

/// Simple s-t paths with the default cap.
pub fn enumerate_paths(instance: &RoutingInstance) -> Result<PathSet> {
    enumerate_paths_with_cap(instance, DEFAULT_MAX_PATHS)
}

/// Simple s-t paths, failing once more than `max_paths` are found.
pub fn enumerate_paths_with_cap(instance: &RoutingInstance, max_paths: usize) -> Result<PathSet> {
    let n = instance.node_count();
    // prune nodes that cannot reach the sink
    let mut reaches_sink = vec![false; n];
    let mut stack = vec![instance.sink()];
    reaches_sink[instance.sink()] = true;
    while let Some(v) = stack.pop() {
        for &e in instance.in_edges(v) {
            let u = instance.edge(e).tail;
            if !reaches_sink[u] {
                reaches_sink[u] = true;
                stack.push(u);
            }
        }
    }

    let mut out = Vec::new();
    let mut on_path = vec![false; n];
    let mut current = Vec::new();
    // explicit DFS stack of (node, next out-edge position)
    let mut frames = vec![(instance.source(), 0usize)];
    on_path[instance.source()] = true;
    while let Some(frame) = frames.last_mut() {
        let (u, pos) = *frame;
        let outs = instance.out_edges(u);
        if pos == outs.len() {
            frames.pop();
            on_path[u] = false;
            current.pop();
            continue;
        }
        frame.1 += 1;
        let e = outs[pos];
        let h = instance.edge(e).head;
        if on_path[h] || !reaches_sink[h] {
            continue;
        }
        if h == instance.sink() {
            let mut p = current.clone();
            p.push(e);
            out.push(p);
            if out.len() > max_paths {
                return Err(Error::capacity("number of simple s-t paths", out.len() as u128, max_paths as u128));
            }
            continue;
        }
        on_path[h] = true;
        current.push(e);
        frames.push((h, 0));
    }
    out.sort_by(|a, b| instance.cmp_paths(a, b));
    out.dedup();
    Ok(PathSet { paths: out })
}
