//! Embedding large trees into almost-complete (bipartite) hosts, and the
//! case analysis that turns an extremal colouring into a monochromatic copy.
//!
//! The underlying lemmas are asymptotic. Every routine checks its hypotheses
//! at runtime, retries with derived seeds, verifies what it returns, and
//! reports the stage that failed otherwise.

mod bipartite;
mod clique;
mod hosts;
mod strategy;

pub use bipartite::{
    embed_bipartite_any, embed_bipartite_bare_paths, embed_bipartite_leaves, verify_bipartite_embedding,
    BipartiteHost,
};
pub use clique::{embed_bare_paths, embed_many_leaves};
pub use hosts::{almost_complete_bipartite_host, almost_complete_host, subdivided_tree};
pub use strategy::{extremal_strategy, BranchAttempt, StrategyFailure, StrategyOutcome};

use crate::graph::{Graph, VertexSet};
use crate::tree::{chains, Tree};
use num_rational::Rational64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EmbedderConfig {
    #[serde(with = "crate::rational::r64")]
    pub mu: Rational64,
    #[serde(with = "crate::rational::r64")]
    pub xi: Rational64,
    #[serde(with = "crate::rational::r64")]
    pub c: Rational64,
    pub retry_budget: u32,
    pub seed: u64,
    /// Required gap `mu * separation <= xi`.
    #[serde(with = "crate::rational::r64")]
    pub separation: Rational64,
    #[serde(with = "crate::rational::r64")]
    pub xi_max: Rational64,
    /// Bare paths needed: `bare_path_factor * mu * n`.
    pub bare_path_factor: u64,
    /// Leaves needed: `xi * n / leaf_divisor`.
    pub leaf_divisor: u64,
    /// Size of the deferred leaf set: `max(xi n / leaf_set_divisor, leaf_floor_factor * ceil(mu n))`.
    pub leaf_set_divisor: u64,
    pub leaf_floor_factor: u64,
    /// Leaves in the small class needed by the bipartite leaf embedder: `xi * n / bipartite_leaf_divisor`.
    pub bipartite_leaf_divisor: u64,
    /// Bipartite leaf embedder requires `|V1| + n / u1_slack_divisor <= |U1|`.
    pub u1_slack_divisor: u64,
    /// Node cap for exact searches used by the strategy.
    pub exact_budget: u64,
}

impl EmbedderConfig {
    pub fn new(mu: Rational64, xi: Rational64, c: Rational64, seed: u64) -> Self {
        Self {
            mu,
            xi,
            c,
            retry_budget: 20,
            seed,
            separation: Rational64::from_integer(100),
            xi_max: Rational64::new(1, 100),
            bare_path_factor: 10,
            leaf_divisor: 1_000,
            leaf_set_divisor: 10_000,
            leaf_floor_factor: 4,
            bipartite_leaf_divisor: 100_000,
            u1_slack_divisor: 10,
            exact_budget: 5_000_000,
        }
    }

    pub fn validate(&self) -> Result<(), EmbedFailure> {
        let zero = Rational64::from_integer(0);
        if self.mu <= zero || self.mu * self.separation > self.xi || self.xi > self.xi_max {
            return Err(hyp("config: need 0 < mu, mu * separation <= xi <= xi_max"));
        }
        if self.c <= zero || self.retry_budget == 0 {
            return Err(hyp("config: need c > 0 and retry_budget >= 1"));
        }
        if self.leaf_divisor == 0 || self.leaf_set_divisor == 0 || self.bipartite_leaf_divisor == 0 || self.u1_slack_divisor == 0 {
            return Err(hyp("config: divisors must be positive"));
        }
        Ok(())
    }

    fn rng(&self, attempt: u32) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ u64::from(attempt).wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }

    fn mu_n(&self, n: usize) -> Rational64 {
        self.mu * rat(n)
    }

    fn xi_n(&self, n: usize) -> Rational64 {
        self.xi * rat(n)
    }

    fn bare_paths_needed(&self, n: usize) -> usize {
        ceil(self.mu_n(n) * rat(self.bare_path_factor as usize)).max(1)
    }

    fn degree_cap(&self, n: usize) -> f64 {
        let c = *self.c.numer() as f64 / *self.c.denom() as f64;
        c * n as f64 / (n.max(2) as f64).ln()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
#[serde(rename_all = "camelCase", tag = "kind")]
pub enum EmbedFailure {
    #[error("hypothesis failed: {which}")]
    HypothesisFailed { which: String },
    #[error("stage `{stage}` failed in all {attempts} attempts")]
    StepFailed { stage: String, attempts: u32 },
    #[error("{attempts} attempts exhausted, last failing stage `{stage}`")]
    RetriesExhausted { stage: String, attempts: u32 },
}

fn hyp(which: &str) -> EmbedFailure {
    EmbedFailure::HypothesisFailed { which: which.into() }
}

type Stage = &'static str;

fn rat(n: usize) -> Rational64 {
    Rational64::from_integer(n as i64)
}

fn ceil(r: Rational64) -> usize {
    r.ceil().to_integer().max(0) as usize
}

/// Vertex-disjoint bare paths with four edges whose ends satisfy `end_ok`
/// and which avoid `avoid`, taken greedily along maximal chains.
fn select_bare_paths(tree: &Tree, end_ok: impl Fn(usize) -> bool, avoid: Option<usize>) -> Vec<[usize; 5]> {
    let mut used = vec![false; tree.n()];
    if let Some(a) = avoid {
        used[a] = true;
    }
    let mut out = Vec::new();
    for chain in chains(tree) {
        let mut i = 0;
        while i + 4 < chain.len() {
            let w = &chain[i..i + 5];
            if end_ok(w[0]) && end_ok(w[4]) && w.iter().all(|&v| !used[v]) {
                for &v in w {
                    used[v] = true;
                }
                out.push([w[0], w[1], w[2], w[3], w[4]]);
                i += 5;
            } else {
                i += 1;
            }
        }
    }
    out
}

/// Partial embedding under construction.
struct Placement {
    map: Vec<usize>,
    used: VertexSet,
}

impl Placement {
    fn new(n: usize, m: usize) -> Self {
        Self {
            map: vec![usize::MAX; n],
            used: VertexSet::new(m),
        }
    }

    fn put(&mut self, p: usize, h: usize) {
        self.map[p] = h;
        self.used.insert(h);
    }
}

/// Randomized BFS-order greedy embedding of the vertices with `keep[v]`.
/// Components are started from `starts` in order (already placed vertices
/// are used as they are); `allowed(v)` bounds the images of `v`.
fn greedy<'s, R: Rng>(
    host: &Graph,
    tree: &Tree,
    keep: &[bool],
    starts: &[usize],
    allowed: impl Fn(usize) -> &'s VertexSet,
    pl: &mut Placement,
    rng: &mut R,
) -> Result<(), Stage> {
    let n = tree.n();
    let mut seeds: Vec<usize> = starts.to_vec();
    seeds.extend(0..n);
    let mut queue = std::collections::VecDeque::new();
    let mut seen = vec![false; n];
    for s in seeds {
        if !keep[s] || seen[s] {
            continue;
        }
        if pl.map[s] == usize::MAX {
            let cands: Vec<usize> = allowed(s).iter().filter(|&h| !pl.used.contains(h)).collect();
            let &h = cands.choose(rng).ok_or("greedy")?;
            pl.put(s, h);
        }
        seen[s] = true;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &w in tree.neighbours(u) {
                if !keep[w] || seen[w] {
                    continue;
                }
                seen[w] = true;
                if pl.map[w] == usize::MAX {
                    let dom = allowed(w);
                    let cands: Vec<usize> = host
                        .neighbours(pl.map[u])
                        .filter(|&h| !pl.used.contains(h) && dom.contains(h))
                        .collect();
                    let &h = cands.choose(rng).ok_or("greedy")?;
                    pl.put(w, h);
                } else if !host.has_edge(pl.map[u], pl.map[w]) {
                    return Err("greedy");
                }
                queue.push_back(w);
            }
        }
    }
    Ok(())
}

/// Hamilton cycle of `host[vertices]` by rotation and extension, attempted
/// only when the induced minimum degree is at least half the order.
pub fn dirac_hamilton_cycle(host: &Graph, vertices: &[usize]) -> Option<Vec<usize>> {
    let k = vertices.len();
    if k < 3 {
        return None;
    }
    let inside = VertexSet::from_iter_with_capacity(host.n(), vertices.iter().copied());
    if vertices.iter().any(|&v| 2 * host.degree_into(v, &inside) < k) {
        return None;
    }
    let mut on_path = VertexSet::new(host.n());
    let mut path = vec![vertices[0]];
    on_path.insert(vertices[0]);
    let outside_nb = |v: usize, on_path: &VertexSet| host.neighbours(v).find(|&u| inside.contains(u) && !on_path.contains(u));
    loop {
        let last = *path.last().expect("nonempty");
        if let Some(u) = outside_nb(last, &on_path) {
            path.push(u);
            on_path.insert(u);
            continue;
        }
        if let Some(u) = outside_nb(path[0], &on_path) {
            path.reverse();
            path.push(u);
            on_path.insert(u);
            continue;
        }
        let l = path.len();
        if l < 3 {
            return None;
        }
        let cycle = if host.has_edge(path[0], path[l - 1]) {
            path.clone()
        } else {
            let i = (0..l - 1).find(|&i| host.has_edge(path[0], path[i + 1]) && host.has_edge(path[i], path[l - 1]))?;
            let mut c = path[..=i].to_vec();
            c.extend(path[i + 1..].iter().rev());
            c
        };
        if l == k {
            return Some(cycle);
        }
        let (j, u) = cycle
            .iter()
            .enumerate()
            .find_map(|(j, &c)| outside_nb(c, &on_path).map(|u| (j, u)))?;
        path = cycle[j + 1..].iter().chain(&cycle[..=j]).copied().collect();
        path.push(u);
        on_path.insert(u);
    }
}
