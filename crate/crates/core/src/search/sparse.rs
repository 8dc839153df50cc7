use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Flow, Path, RoutingInstance};
use crate::rational::{abs_diff, to_f64, to_short, zero, Q};
use crate::topology::PathSet;

/// Logarithm used in the sparsity bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    #[default]
    Natural,
    Two,
}

impl LogBase {
    fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Two => x.log2(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LogBase::Natural => "natural",
            LogBase::Two => "base-2",
        }
    }
}

/// `⌊log(2m) / (2ε²)⌋ + 1`, the number of sampled paths that suffices for a
/// per-edge deviation of at most `ε`.
///
/// ```
/// use braess::search::{k_of_eps, LogBase};
/// use braess::rational::{q, qi};
///
/// assert_eq!(k_of_eps(&qi(1), 1, LogBase::Natural).unwrap(), 1);
/// assert_eq!(k_of_eps(&q(1, 2), 8, LogBase::Natural).unwrap(), 6);
/// assert_eq!(k_of_eps(&q(1, 10), 100, LogBase::Natural).unwrap(), 265);
/// ```
pub fn k_of_eps(eps: &Q, m: usize, base: LogBase) -> Result<u64> {
    if eps <= &zero() {
        return Err(Error::Domain(format!("eps must be positive, got {}", to_short(eps))));
    }
    if m == 0 {
        return Err(Error::Domain("edge count must be positive".into()));
    }
    let e = to_f64(eps);
    let bound = base.log(2.0 * m as f64) / (2.0 * e * e);
    if !bound.is_finite() || bound >= u64::MAX as f64 {
        return Err(Error::capacity("sparsity bound k", u128::MAX, u64::MAX as u128));
    }
    Ok(bound.floor() as u64 + 1)
}

/// A flow induced by a multiset of paths: `g_p = |P(p)| / |P|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateFlow {
    /// Multiplicity of each path in the multiset, canonical path order.
    pub counts: Vec<(Path, u64)>,
    /// `|P|`.
    pub size: u64,
    pub flow: Flow,
}

impl CandidateFlow {
    /// Builds the candidate on a rate-1 instance from multiplicities indexed
    /// like `paths`.
    pub fn from_counts(instance: &RoutingInstance, paths: &PathSet, counts: &[u32]) -> Result<Self> {
        let size: u64 = counts.iter().map(|&c| c as u64).sum();
        if size == 0 {
            return Err(Error::Domain("empty multiset".into()));
        }
        let pairs: Vec<(Path, u64)> = paths
            .iter()
            .zip(counts)
            .filter(|(_, &c)| c > 0)
            .map(|(p, &c)| (p.clone(), c as u64))
            .collect();
        Self::from_pairs(instance, pairs)
    }

    fn from_pairs(instance: &RoutingInstance, mut counts: Vec<(Path, u64)>) -> Result<Self> {
        counts.sort_by(|a, b| instance.cmp_paths(&a.0, &b.0));
        let size: u64 = counts.iter().map(|(_, c)| c).sum();
        let total = Q::from_integer(size.into());
        let flow = Flow::new(
            instance,
            counts.iter().map(|(p, c)| (p.clone(), Q::from_integer((*c).into()) / &total)).collect(),
        )?;
        Ok(Self { counts, size, flow })
    }

    /// `max_e |g_e − f_e|` over all edges.
    pub fn deviation(&self, reference: &Flow) -> Q {
        edge_deviation(&self.flow.edge_loads(), &reference.edge_loads())
    }
}

fn edge_deviation(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| abs_diff(x, y)).max().unwrap_or_else(zero)
}

/// [`sparsify_flow_with`] with seed 0 and the natural logarithm.
pub fn sparsify_flow(flow: &Flow, eps: &Q) -> Result<CandidateFlow> {
    sparsify_flow_with(flow, eps, 0, LogBase::Natural)
}

/// A sparse flow on at most `k(ε)` paths of `flow`'s support whose edge loads
/// deviate from `flow`'s by at most `ε`.
///
/// A flow whose path amounts share a denominator of at most `k` is returned
/// exactly. Otherwise `k` paths are drawn independently in proportion to
/// their flow and the draw is kept once it meets the bound; the search gives
/// up after `10·k·m` draws.
pub fn sparsify_flow_with(flow: &Flow, eps: &Q, seed: u64, base: LogBase) -> Result<CandidateFlow> {
    let g = flow.instance();
    if !g.rate().is_one() {
        return Err(Error::Domain(format!("sparsification needs rate 1, got {}", to_short(g.rate()))));
    }
    let m = g.edge_count();
    let k = k_of_eps(eps, m, base)?;
    let support = flow.paths();

    let lcm = support.iter().fold(num_bigint::BigInt::one(), |l, (_, x)| l.lcm(x.denom()));
    if lcm <= k.into() {
        let pairs = support
            .iter()
            .map(|(p, x)| {
                let c = (x * Q::from_integer(lcm.clone())).to_integer().to_u64().expect("bounded by k");
                (p.clone(), c)
            })
            .collect();
        return CandidateFlow::from_pairs(g, pairs);
    }

    let weights: Vec<f64> = support.iter().map(|(_, x)| to_f64(x)).collect();
    let sampler = WeightedIndex::new(&weights).map_err(|e| Error::Domain(format!("sampling weights: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = flow.edge_loads();
    let budget = 10 * k * m as u64;
    let k_q = Q::from_integer(k.into());
    let mut best: Option<Q> = None;
    for _ in 0..budget {
        let mut counts = vec![0u64; support.len()];
        for _ in 0..k {
            counts[sampler.sample(&mut rng)] += 1;
        }
        let mut loads = vec![zero(); m];
        for ((p, _), &c) in support.iter().zip(&counts) {
            if c > 0 {
                let share = Q::from_integer(c.into()) / &k_q;
                for &e in p {
                    loads[e] += &share;
                }
            }
        }
        let dev = edge_deviation(&loads, &target);
        if &dev <= eps {
            let pairs = support.iter().zip(counts).filter(|(_, c)| *c > 0).map(|((p, _), c)| (p.clone(), c)).collect();
            return CandidateFlow::from_pairs(g, pairs);
        }
        if best.as_ref().is_none_or(|b| &dev < b) {
            best = Some(dev);
        }
    }
    Err(Error::SearchFailure { attempts: budget, best_deviation: best.map(|b| to_short(&b)).unwrap_or_default() })
}

/// `C(p + k, k) − 1`, the number of nonempty multisets of size at most `k`
/// over `p` paths. Saturates at `u128::MAX`.
pub fn count_candidate_flows(p: usize, k: u64) -> u128 {
    // C(p+k, p) computed as a running product over i = 1..p
    let mut c: u128 = 1;
    for i in 1..=p as u128 {
        let Some(next) = c.checked_mul(k as u128 + i) else { return u128::MAX };
        c = next / i;
    }
    c - 1
}

/// Every nonempty multiset of at most `k` paths, as multiplicities indexed by
/// path. Ordered by size, then lexicographically by sorted path indices.
pub struct CandidateStream {
    paths: usize,
    k: u64,
    seq: Vec<usize>,
    total: u128,
}

impl CandidateStream {
    /// Number of multisets the stream yields in total.
    pub fn total(&self) -> u128 {
        self.total
    }
}

impl Iterator for CandidateStream {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.paths == 0 {
            return None;
        }
        if self.seq.is_empty() {
            self.seq.push(0);
        } else if let Some(i) = self.seq.iter().rposition(|&x| x + 1 < self.paths) {
            let v = self.seq[i] + 1;
            for x in &mut self.seq[i..] {
                *x = v;
            }
        } else {
            if self.seq.len() as u64 >= self.k {
                return None;
            }
            self.seq = vec![0; self.seq.len() + 1];
        }
        let mut counts = vec![0u32; self.paths];
        for &i in &self.seq {
            counts[i] += 1;
        }
        Some(counts)
    }
}

/// Streams all candidate multisets of size `1..=k` over `paths`, refusing
/// when more than `max_count` would be produced.
pub fn enumerate_candidate_flows(paths: &PathSet, k: u64, max_count: u128) -> Result<CandidateStream> {
    let total = count_candidate_flows(paths.len(), k);
    if total > max_count {
        return Err(Error::capacity("candidate flow count", total, max_count));
    }
    Ok(CandidateStream { paths: paths.len(), k, seq: Vec::new(), total })
}
