//! Exact tree-in-graph embedding search with a node budget.
//!
//! The pattern is laid out in BFS order from a maximum-degree root (or from a
//! fixed anchor). Each later vertex is placed on an unused host neighbour of its
//! parent's image. Candidates come in host-degree-descending order and are
//! pruned by residual degree. At every level only one unused member of each
//! host twin class is tried: swapping two unused twins is an automorphism
//! fixing the partial map.

use crate::colouring::{Colour, TwoColouring};
use crate::graph::{Graph, VertexSet};
use crate::tree::Tree;
use serde::{Deserialize, Serialize};

/// Injective map from pattern vertices to host vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub map: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "verdict", content = "embedding")]
pub enum Search {
    Found(Embedding),
    No,
    Unknown,
}

impl Search {
    pub fn is_found(&self) -> bool {
        matches!(self, Search::Found(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub search: Search,
    pub nodes: u64,
}

/// Default node budget used by convenience wrappers.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// Full description of a constrained search.
#[derive(Clone, Copy)]
pub struct SearchProblem<'a> {
    pub host: &'a Graph,
    pub pattern: &'a Tree,
    /// Allowed host vertices per pattern vertex.
    pub domains: Option<&'a [VertexSet]>,
    /// Pattern vertices pinned to host vertices.
    pub fixed: &'a [(usize, usize)],
    pub budget: u64,
}

impl<'a> SearchProblem<'a> {
    pub fn new(host: &'a Graph, pattern: &'a Tree, budget: u64) -> Self {
        Self {
            host,
            pattern,
            domains: None,
            fixed: &[],
            budget,
        }
    }
}

struct Searcher<'a> {
    p: SearchProblem<'a>,
    order: Vec<usize>,
    parent: Vec<usize>,
    children_left: Vec<usize>,
    fixed_of: Vec<usize>,
    reserved: VertexSet,
    used: VertexSet,
    map: Vec<usize>,
    by_degree: Vec<Vec<usize>>,
    twin: Vec<usize>,
    nodes: u64,
    out_of_budget: bool,
}

pub fn search(p: SearchProblem<'_>) -> SearchOutcome {
    let n = p.pattern.n();
    let hn = p.host.n();
    let no = |nodes| SearchOutcome {
        search: Search::No,
        nodes,
    };
    if n > hn {
        return no(0);
    }
    let mut fixed_of = vec![usize::MAX; n];
    let mut reserved = VertexSet::new(hn);
    for &(pv, hv) in p.fixed {
        if pv >= n || hv >= hn || reserved.contains(hv) || fixed_of[pv] != usize::MAX {
            return no(0);
        }
        fixed_of[pv] = hv;
        reserved.insert(hv);
    }
    let root = match p.fixed.first() {
        Some(&(pv, _)) => pv,
        None => (0..n).max_by_key(|&v| (p.pattern.degree(v), std::cmp::Reverse(v))).unwrap(),
    };
    let (order, parent) = p.pattern.bfs_order(root);
    let children_left: Vec<usize> = (0..n)
        .map(|v| p.pattern.degree(v) - usize::from(v != root))
        .collect();

    let degree: Vec<usize> = (0..hn).map(|v| p.host.degree(v)).collect();
    let by_degree: Vec<Vec<usize>> = (0..hn)
        .map(|v| {
            let mut nb: Vec<usize> = p.host.neighbours(v).collect();
            nb.sort_by_key(|&u| (std::cmp::Reverse(degree[u]), u));
            nb
        })
        .collect();
    let mut twin = p.host.twin_classes();
    if let Some(domains) = p.domains {
        // twins are only interchangeable when every domain treats them alike
        let mut keys: Vec<(usize, Vec<bool>)> = Vec::new();
        for (h, t) in twin.iter_mut().enumerate() {
            let key = (*t, domains.iter().map(|d| d.contains(h)).collect::<Vec<_>>());
            *t = match keys.iter().position(|k| *k == key) {
                Some(i) => i,
                None => {
                    keys.push(key);
                    keys.len() - 1
                }
            };
        }
    }

    let mut s = Searcher {
        p,
        order,
        parent,
        children_left,
        fixed_of,
        reserved,
        used: VertexSet::new(hn),
        map: vec![usize::MAX; n],
        by_degree,
        twin,
        nodes: 0,
        out_of_budget: false,
    };

    let root_candidates: Vec<usize> = if s.fixed_of[root] != usize::MAX {
        vec![s.fixed_of[root]]
    } else {
        let mut c: Vec<usize> = (0..hn).collect();
        c.sort_by_key(|&u| (std::cmp::Reverse(degree[u]), u));
        c
    };
    let comps = p.host.components();
    let mut comp_size = vec![0usize; hn];
    for &c in &comps {
        comp_size[c] += 1;
    }
    // side counts per component, when the host is bipartite
    let sides = p.host.two_colouring();
    let psides = p.pattern.sides();
    let root_class = (0..n).filter(|&v| psides[v] == psides[root]).count();
    let other_class = n - root_class;
    let mut side_count = vec![[0usize; 2]; hn];
    if let Some(sides) = &sides {
        for v in 0..hn {
            side_count[comps[v]][sides[v] as usize] += 1;
        }
    }

    let mut tried: Vec<usize> = Vec::new();
    for r in root_candidates {
        if !s.allowed(root, r) || degree[r] < s.children_left[root] {
            continue;
        }
        if comp_size[comps[r]] < n {
            continue;
        }
        if p.domains.is_none() {
            if let Some(sides) = &sides {
                let cnt = side_count[comps[r]];
                let mine = sides[r] as usize;
                if cnt[mine] < root_class || cnt[1 - mine] < other_class {
                    continue;
                }
            }
        }
        if tried.contains(&s.twin[r]) {
            continue;
        }
        tried.push(s.twin[r]);
        s.place(root, r);
        if s.extend(1) {
            return SearchOutcome {
                search: Search::Found(Embedding { map: s.map.clone() }),
                nodes: s.nodes,
            };
        }
        s.unplace(root, r);
        if s.out_of_budget {
            break;
        }
    }
    SearchOutcome {
        search: if s.out_of_budget { Search::Unknown } else { Search::No },
        nodes: s.nodes,
    }
}

impl Searcher<'_> {
    fn allowed(&self, pv: usize, hv: usize) -> bool {
        if self.used.contains(hv) {
            return false;
        }
        if self.reserved.contains(hv) && self.fixed_of[pv] != hv {
            return false;
        }
        if self.fixed_of[pv] != usize::MAX && self.fixed_of[pv] != hv {
            return false;
        }
        match self.p.domains {
            Some(d) => d[pv].contains(hv),
            None => true,
        }
    }

    fn free_neighbours(&self, hv: usize) -> usize {
        self.p.host.degree(hv) - self.p.host.degree_into(hv, &self.used)
    }

    fn place(&mut self, pv: usize, hv: usize) {
        self.map[pv] = hv;
        self.used.insert(hv);
        self.nodes += 1;
    }

    fn unplace(&mut self, pv: usize, hv: usize) {
        self.map[pv] = usize::MAX;
        self.used.remove(hv);
    }

    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        if self.nodes >= self.p.budget {
            self.out_of_budget = true;
            return false;
        }
        let pv = self.order[depth];
        let q = self.parent[pv];
        let anchor = self.map[q];
        let need = self.children_left[pv];
        let mut tried: Vec<usize> = Vec::new();
        for i in 0..self.by_degree[anchor].len() {
            let hv = self.by_degree[anchor][i];
            if !self.allowed(pv, hv) {
                continue;
            }
            if self.p.host.degree(hv) < need + 1 {
                // sorted by degree, nothing later fits either
                break;
            }
            if tried.contains(&self.twin[hv]) {
                continue;
            }
            tried.push(self.twin[hv]);
            self.place(pv, hv);
            self.children_left[q] -= 1;
            let ok = self.free_neighbours(hv) >= need
                && self.free_neighbours(anchor) >= self.children_left[q];
            if ok && self.extend(depth + 1) {
                return true;
            }
            self.children_left[q] += 1;
            self.unplace(pv, hv);
            if self.out_of_budget {
                return false;
            }
        }
        false
    }
}

pub fn contains_tree(host: &Graph, pattern: &Tree, budget: u64) -> SearchOutcome {
    search(SearchProblem::new(host, pattern, budget))
}

pub fn contains_mono(c: &TwoColouring, pattern: &Tree, colour: Colour, budget: u64) -> SearchOutcome {
    contains_tree(&c.graph(colour), pattern, budget)
}

/// Independent check: injective, in range, every pattern edge lands on a host edge.
pub fn verify_embedding(host: &Graph, pattern: &Tree, e: &Embedding) -> bool {
    if e.map.len() != pattern.n() || e.map.iter().any(|&h| h >= host.n()) {
        return false;
    }
    let mut seen = vec![false; host.n()];
    for &h in &e.map {
        if std::mem::replace(&mut seen[h], true) {
            return false;
        }
    }
    pattern
        .edges()
        .iter()
        .all(|&(u, v)| host.has_edge(e.map[u], e.map[v]))
}

pub fn verify_mono(c: &TwoColouring, pattern: &Tree, colour: Colour, e: &Embedding) -> bool {
    if e.map.len() != pattern.n() || e.map.iter().any(|&h| h >= c.n()) {
        return false;
    }
    let mut seen = vec![false; c.n()];
    for &h in &e.map {
        if std::mem::replace(&mut seen[h], true) {
            return false;
        }
    }
    pattern
        .edges()
        .iter()
        .all(|&(u, v)| c.has(colour, e.map[u], e.map[v]))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "verdict", content = "embedding")]
pub enum Arrow {
    RedT(Embedding),
    BlueS(Embedding),
    Neither,
    Unknown,
}

/// Red `t` or blue `s`? `Neither` only when both searches were exhausted.
pub fn decide_arrows(c: &TwoColouring, t: &Tree, s: &Tree, budget: u64) -> Arrow {
    let red = contains_mono(c, t, Colour::Red, budget).search;
    if let Search::Found(e) = red {
        return Arrow::RedT(e);
    }
    let blue = contains_mono(c, s, Colour::Blue, budget).search;
    match (red, blue) {
        (_, Search::Found(e)) => Arrow::BlueS(e),
        (Search::No, Search::No) => Arrow::Neither,
        _ => Arrow::Unknown,
    }
}

/// Reference oracle: tries every injective map of the pattern into the host.
pub fn permutation_oracle(host: &Graph, pattern: &Tree) -> bool {
    fn go(host: &Graph, pattern: &Tree, map: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let i = map.len();
        if i == pattern.n() {
            return pattern.edges().iter().all(|&(u, v)| host.has_edge(map[u], map[v]));
        }
        for h in 0..host.n() {
            if !used[h] {
                used[h] = true;
                map.push(h);
                if go(host, pattern, map, used) {
                    return true;
                }
                map.pop();
                used[h] = false;
            }
        }
        false
    }
    pattern.n() <= host.n() && go(host, pattern, &mut Vec::new(), &mut vec![false; host.n()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::make_caterpillar;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_examples() {
        let p3 = Tree::path(3).unwrap();
        let k3 = Graph::complete(3);
        let found = contains_tree(&k3, &p3, 1000);
        match &found.search {
            Search::Found(e) => assert!(verify_embedding(&k3, &p3, e)),
            other => panic!("{other:?}"),
        }
        let matching = Graph::from_edges(4, &[(0, 1), (2, 3)]);
        assert_eq!(contains_tree(&matching, &p3, 1000).search, Search::No);
    }

    #[test]
    fn b1_red_graph_has_no_caterpillar() {
        // red cliques of sizes 4 and 1 on 5 vertices
        let mut red = Graph::empty(5);
        for u in 0..4 {
            for v in (u + 1)..4 {
                red.add_edge(u, v);
            }
        }
        let cat = make_caterpillar(3, 2).unwrap();
        assert_eq!(contains_tree(&red, &cat, 10_000).search, Search::No);
    }

    #[test]
    fn mono_and_arrows() {
        let k5 = TwoColouring::all_red(5);
        let t = Tree::spider(2, 2);
        assert!(contains_mono(&k5, &t, Colour::Red, 1000).search.is_found());
        assert_eq!(contains_mono(&k5, &Tree::path(2).unwrap(), Colour::Blue, 1000).search, Search::No);
        let edge = Tree::path(2).unwrap();
        assert!(matches!(decide_arrows(&TwoColouring::all_red(2), &edge, &edge, 10), Arrow::RedT(_)));
        let big = Tree::path(30).unwrap();
        let mut c = TwoColouring::all_blue(40);
        for v in 1..40 {
            c.set_colour(0, v, Colour::Red);
        }
        assert_eq!(decide_arrows(&c, &big, &Tree::star(35), 5), Arrow::Unknown);
    }

    #[test]
    fn anchored_and_constrained() {
        let host = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        let p3 = Tree::path(3).unwrap();
        let mut prob = SearchProblem::new(&host, &p3, 1000);
        prob.fixed = &[(1, 0)];
        assert_eq!(search(prob).search, Search::No);
        prob.fixed = &[(0, 0)];
        assert!(search(prob).search.is_found());
        let doms = vec![VertexSet::from_iter_with_capacity(5, [3, 4]); 3];
        prob.fixed = &[];
        prob.domains = Some(&doms);
        assert_eq!(search(prob).search, Search::No);
    }

    #[test]
    fn agrees_with_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..150 {
            let hn = rng.gen_range(1..=7);
            let mut host = Graph::empty(hn);
            for u in 0..hn {
                for v in (u + 1)..hn {
                    if rng.gen_bool(0.5) {
                        host.add_edge(u, v);
                    }
                }
            }
            let pn = rng.gen_range(1..=6);
            let pattern = Tree::random(pn, &mut rng);
            let got = contains_tree(&host, &pattern, u64::MAX);
            if let Search::Found(e) = &got.search {
                assert!(verify_embedding(&host, &pattern, e));
            }
            assert_eq!(got.search.is_found(), permutation_oracle(&host, &pattern));
        }
    }
}
