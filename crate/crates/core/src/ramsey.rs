//! The four-construction lower bound, exact Ramsey numbers of small tree
//! pairs by exhaustive colouring search, and classical test vectors.

use crate::colouring::{Colour, TwoColouring};
use crate::embed::{decide_arrows, search, Arrow, Search, SearchProblem};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::tree::{Tree, TreeProfile};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;

/// `max{n + tau2, nu + min{t2, nu}, min{2 t1, 2 nu}, 2 tau1} - 1` with `n >= nu`.
pub fn lower_bound(pt: &TreeProfile, ps: &TreeProfile) -> Result<usize> {
    let (t1, t2) = (pt.t1, pt.t2);
    let (tau1, tau2) = (ps.t1, ps.t2);
    let (n, nu) = (t1 + t2, tau1 + tau2);
    if n < nu {
        return Err(Error::Precondition(format!("|T| = {n} < |S| = {nu}; order the pair")));
    }
    let best = [n + tau2, nu + t2.min(nu), (2 * t1).min(2 * nu), 2 * tau1]
        .into_iter()
        .max()
        .unwrap_or(0);
    Ok(best.saturating_sub(1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Provenance {
    /// Structure-exploiting oracle.
    Oracle,
    /// Exhaustive subgraph search.
    Exact,
}

/// A colouring of `K_N` with neither a red `T` nor a blue `S`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Certificate {
    #[serde(rename = "N")]
    pub n: usize,
    pub colouring: TwoColouring,
    pub red_t_absent: bool,
    pub blue_s_absent: bool,
    pub provenance: Provenance,
}

impl Certificate {
    pub fn reverify(&self, t: &Tree, s: &Tree, budget: u64) -> bool {
        self.red_t_absent
            && self.blue_s_absent
            && self.colouring.n() == self.n
            && decide_arrows(&self.colouring, t, s, budget) == Arrow::Neither
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    /// Cap on colouring-search nodes (one per placed vertex row).
    pub budget: u64,
    /// Worker threads; 1 keeps node counts reproducible.
    pub jobs: usize,
    /// Cap per anchored subtree search.
    pub embed_budget: u64,
}

impl SearchConfig {
    pub fn new(budget: u64) -> Self {
        Self {
            budget,
            jobs: 1,
            embed_budget: 1_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "verdict", content = "colouring")]
pub enum Avoidance {
    Found(TwoColouring),
    None,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AvoidanceOutcome {
    pub result: Avoidance,
    pub nodes: u64,
}

pub fn avoiding_colouring_search(t: &Tree, s: &Tree, n: usize, budget: u64) -> AvoidanceOutcome {
    avoiding_colouring_search_with(t, s, n, &SearchConfig::new(budget))
}

/// Vertex-incremental backtracking. Vertex 0 is taken to have the largest red
/// degree `d` and red neighbourhood `{1..d}`; rows inside each of the blocks
/// `{1..d}` and `{d+1..N-1}` are lexicographically ordered; after each row only
/// monochromatic copies through the new vertex are searched for.
pub fn avoiding_colouring_search_with(t: &Tree, s: &Tree, n: usize, cfg: &SearchConfig) -> AvoidanceOutcome {
    assert!(n <= 64, "colouring search supports at most 64 vertices");
    if n == 0 {
        return AvoidanceOutcome {
            result: Avoidance::Found(TwoColouring::all_red(0)),
            nodes: 0,
        };
    }
    let shared = Shared {
        nodes: AtomicU64::new(0),
        stop: AtomicBool::new(false),
        incomplete: AtomicBool::new(false),
        found: Mutex::new(None),
    };
    let t_reps = orbit_representatives(t);
    let s_reps = orbit_representatives(s);
    let run = |d: usize| {
        let mut w = Worker {
            n,
            d,
            t,
            s,
            t_reps: &t_reps,
            s_reps: &s_reps,
            red: Graph::empty(n),
            blue: Graph::empty(n),
            rows: vec![0; n],
            red_deg: vec![0; n],
            cfg,
            shared: &shared,
        };
        w.place(0);
    };
    if cfg.jobs <= 1 {
        for d in 0..n {
            if shared.stop.load(Ordering::Relaxed) {
                break;
            }
            run(d);
        }
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .expect("thread pool");
        pool.install(|| (0..n).into_par_iter().for_each(run));
    }
    let nodes = shared.nodes.load(Ordering::Relaxed);
    let found = shared.found.into_inner().expect("no poisoned lock");
    let result = match found {
        Some(c) => Avoidance::Found(c),
        None if shared.incomplete.load(Ordering::Relaxed) => Avoidance::Unknown,
        None => Avoidance::None,
    };
    AvoidanceOutcome { result, nodes }
}

/// One vertex per class of equal rooted forms.
fn orbit_representatives(t: &Tree) -> Vec<usize> {
    let mut seen = HashSet::new();
    (0..t.n()).filter(|&v| seen.insert(t.rooted_form(v))).collect()
}

struct Shared {
    nodes: AtomicU64,
    stop: AtomicBool,
    incomplete: AtomicBool,
    found: Mutex<Option<TwoColouring>>,
}

struct Worker<'a> {
    n: usize,
    d: usize,
    t: &'a Tree,
    s: &'a Tree,
    t_reps: &'a [usize],
    s_reps: &'a [usize],
    /// Colour graphs restricted to the placed prefix.
    red: Graph,
    blue: Graph,
    /// Red neighbours of each vertex among earlier vertices, as a bitmask.
    rows: Vec<u64>,
    red_deg: Vec<usize>,
    cfg: &'a SearchConfig,
    shared: &'a Shared,
}

enum Through {
    Clear,
    Hit,
    Unknown,
}

impl Worker<'_> {
    fn same_block(&self, u: usize, v: usize) -> bool {
        u >= 1 && v >= 1 && (u <= self.d) == (v <= self.d)
    }

    fn place(&mut self, k: usize) {
        if self.shared.stop.load(Ordering::Relaxed) {
            return;
        }
        if k == self.n {
            let mut c = TwoColouring::all_blue(self.n);
            for (u, v) in self.red.edges() {
                c.set_colour(u, v, Colour::Red);
            }
            *self.shared.found.lock().expect("no poisoned lock") = Some(c);
            self.shared.stop.store(true, Ordering::Relaxed);
            return;
        }
        let base: u64 = if k >= 1 && k <= self.d { 1 } else { 0 };
        let free_bits = k.saturating_sub(1);
        let prev_mask = if k >= 2 { (1u64 << (k - 1)) - 1 } else { 0 };
        for free in 0..(1u64 << free_bits) {
            let row = base | (free << 1);
            if k >= 2 && self.same_block(k - 1, k) {
                let diff = (self.rows[k - 1] ^ row) & prev_mask;
                if diff != 0 && row & (diff & diff.wrapping_neg()) == 0 {
                    continue;
                }
            }
            if row.count_ones() as usize > self.d || (1..k).any(|j| row >> j & 1 == 1 && self.red_deg[j] >= self.d) {
                continue;
            }
            if self.shared.nodes.fetch_add(1, Ordering::Relaxed) >= self.cfg.budget {
                self.shared.incomplete.store(true, Ordering::Relaxed);
                self.shared.stop.store(true, Ordering::Relaxed);
                return;
            }
            self.apply(k, row, true);
            match self.through(k) {
                Through::Clear => self.place(k + 1),
                Through::Hit => {}
                Through::Unknown => self.shared.incomplete.store(true, Ordering::Relaxed),
            }
            self.apply(k, row, false);
            if self.shared.stop.load(Ordering::Relaxed) {
                return;
            }
        }
    }

    fn apply(&mut self, k: usize, row: u64, on: bool) {
        for j in 0..k {
            let red = row >> j & 1 == 1;
            let g = if red { &mut self.red } else { &mut self.blue };
            if on {
                g.add_edge(j, k);
            } else {
                g.remove_edge(j, k);
            }
            if red {
                if on {
                    self.red_deg[j] += 1;
                } else {
                    self.red_deg[j] -= 1;
                }
            }
        }
        self.rows[k] = if on { row } else { 0 };
        self.red_deg[k] = if on { row.count_ones() as usize } else { 0 };
    }

    /// Monochromatic copy using vertex `k` in the prefix `0..=k`?
    fn through(&self, k: usize) -> Through {
        let mut unknown = false;
        for (host, pattern, reps) in [(&self.red, self.t, self.t_reps), (&self.blue, self.s, self.s_reps)] {
            if pattern.n() > k + 1 {
                continue;
            }
            for &p in reps {
                if pattern.degree(p) > host.degree(k) {
                    continue;
                }
                let fixed = [(p, k)];
                let problem = SearchProblem {
                    host,
                    pattern,
                    domains: None,
                    fixed: &fixed,
                    budget: self.cfg.embed_budget,
                };
                match search(problem).search {
                    Search::Found(_) => return Through::Hit,
                    Search::Unknown => unknown = true,
                    Search::No => {}
                }
            }
        }
        if unknown {
            Through::Unknown
        } else {
            Through::Clear
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RamseyOutcome {
    /// `None` when the search was cut off by the budget or by `nmax`.
    #[serde(rename = "R")]
    pub value: Option<usize>,
    /// Avoiding colouring on `R - 1` vertices.
    pub certificate: Option<Certificate>,
    pub nodes: u64,
    pub nmax: usize,
    pub budget: u64,
    /// Some order up to `nmax` was left undecided by the budget.
    pub budget_exhausted: bool,
}

pub fn ramsey_exact(t: &Tree, s: &Tree, nmax: usize, budget: u64) -> RamseyOutcome {
    ramsey_exact_with(t, s, nmax, &SearchConfig::new(budget))
}

/// Smallest `N <= nmax` with no avoiding colouring of `K_N`.
pub fn ramsey_exact_with(t: &Tree, s: &Tree, nmax: usize, cfg: &SearchConfig) -> RamseyOutcome {
    let mut out = RamseyOutcome {
        value: None,
        certificate: None,
        nodes: 0,
        nmax,
        budget: cfg.budget,
        budget_exhausted: false,
    };
    for n in 1..=nmax {
        let step = avoiding_colouring_search_with(t, s, n, cfg);
        out.nodes += step.nodes;
        match step.result {
            Avoidance::Found(colouring) => {
                out.certificate = Some(Certificate {
                    n,
                    colouring,
                    red_t_absent: true,
                    blue_s_absent: true,
                    provenance: Provenance::Exact,
                });
            }
            Avoidance::None => {
                out.value = Some(n);
                return out;
            }
            Avoidance::Unknown => {
                out.certificate = None;
                out.budget_exhausted = true;
                return out;
            }
        }
    }
    out.certificate = None;
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ValueSource {
    /// Closed formula for paths, `R(P_n, P_m) = n + floor(m/2) - 1` for `n >= m >= 2` vertices.
    PathFormula,
    /// Exhaustive search only.
    BruteForce,
}

#[derive(Clone, Debug)]
pub struct KnownValue {
    pub label: &'static str,
    pub t: Tree,
    pub s: Tree,
    pub r: usize,
    pub source: ValueSource,
}

pub fn known_values() -> Vec<KnownValue> {
    let path = |k: usize| Tree::path(k).expect("k >= 1");
    let entry = |label, t, s, r, source| KnownValue { label, t, s, r, source };
    vec![
        entry("path4-path4", path(4), path(4), 5, ValueSource::PathFormula),
        entry("path5-path4", path(5), path(4), 6, ValueSource::PathFormula),
        entry("path5-path5", path(5), path(5), 6, ValueSource::PathFormula),
        entry("path6-path6", path(6), path(6), 8, ValueSource::PathFormula),
        entry("star2-star2", Tree::star(2), Tree::star(2), 3, ValueSource::BruteForce),
        entry("star3-star2", Tree::star(3), Tree::star(2), 5, ValueSource::BruteForce),
        entry("star3-star3", Tree::star(3), Tree::star(3), 6, ValueSource::BruteForce),
        entry("path4-star2", path(4), Tree::star(2), 4, ValueSource::BruteForce),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prof(t1: usize, t2: usize) -> TreeProfile {
        TreeProfile {
            n: t1 + t2,
            t1,
            t2,
            max_degree: 0,
            leaf_count: 0,
        }
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(lower_bound(&prof(1, 1), &prof(1, 1)).unwrap(), 2);
        assert_eq!(lower_bound(&prof(2, 2), &prof(2, 2)).unwrap(), 5);
        assert_eq!(lower_bound(&prof(8, 5), &prof(8, 3)).unwrap(), 15);
        assert!(lower_bound(&prof(2, 1), &prof(2, 2)).is_err());
    }

    #[test]
    fn avoiding_examples() {
        let edge = Tree::path(2).unwrap();
        let p4 = Tree::path(4).unwrap();
        match avoiding_colouring_search(&edge, &edge, 1, 1000).result {
            Avoidance::Found(c) => assert_eq!(c.n(), 1),
            other => panic!("{other:?}"),
        }
        match avoiding_colouring_search(&p4, &p4, 4, 10_000).result {
            Avoidance::Found(c) => assert_eq!(decide_arrows(&c, &p4, &p4, 10_000), Arrow::Neither),
            other => panic!("{other:?}"),
        }
        assert_eq!(avoiding_colouring_search(&p4, &p4, 5, 100_000).result, Avoidance::None);
        assert_eq!(avoiding_colouring_search(&p4, &p4, 6, 1).result, Avoidance::Unknown);
    }

    #[test]
    fn small_values() {
        let edge = Tree::path(2).unwrap();
        let r = ramsey_exact(&edge, &edge, 5, 1000);
        assert_eq!(r.value, Some(2));
        let p4 = Tree::path(4).unwrap();
        let r = ramsey_exact(&p4, &p4, 8, 100_000);
        assert_eq!(r.value, Some(5));
        let cert = r.certificate.unwrap();
        assert_eq!(cert.n, 4);
        assert!(cert.reverify(&p4, &p4, 10_000));
        let k12 = Tree::star(2);
        assert_eq!(ramsey_exact(&k12, &k12, 6, 10_000).value, Some(3));
        assert_eq!(ramsey_exact(&p4, &p4, 3, 10_000).value, None);
    }

    #[test]
    fn parallel_agrees() {
        let p4 = Tree::path(4).unwrap();
        let s3 = Tree::star(3);
        let cfg = SearchConfig { jobs: 3, ..SearchConfig::new(1_000_000) };
        assert_eq!(ramsey_exact_with(&p4, &s3, 8, &cfg).value, ramsey_exact(&p4, &s3, 8, 1_000_000).value);
    }

    #[test]
    fn certificate_json() {
        let p4 = Tree::path(4).unwrap();
        let cert = ramsey_exact(&p4, &p4, 8, 100_000).certificate.unwrap();
        let v = serde_json::to_value(&cert).unwrap();
        assert_eq!(v["N"], 4);
        assert_eq!(v["provenance"], "exact");
        assert_eq!(serde_json::from_value::<Certificate>(v).unwrap(), cert);
    }
}
