use super::clique::{close_paths, complete_leaves};
use super::{ceil, greedy, hyp, rat, select_bare_paths, EmbedFailure, EmbedderConfig, Placement, Stage};
use crate::embed::{verify_embedding, Embedding};
use crate::error::Error;
use crate::graph::{Graph, VertexSet};
use crate::matching::{star_packing, BipartiteGraph, StarPacking};
use crate::tree::Tree;
use rand::seq::SliceRandom;
use rand::Rng;

/// Host with classes `U1 = 0..u1` and `U2 = u1..u1+u2` and no edge inside a class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteHost {
    pub graph: Graph,
    pub u1: usize,
    pub u2: usize,
}

impl BipartiteHost {
    pub fn new(graph: Graph, u1: usize) -> crate::Result<Self> {
        let m = graph.n();
        if u1 > m {
            return Err(Error::InvalidInput(format!("U1 of size {u1} in a host of order {m}")));
        }
        if graph.edges().iter().any(|&(a, b)| (a < u1) == (b < u1)) {
            return Err(Error::InvalidInput("edge inside a class".into()));
        }
        Ok(Self { graph, u1, u2: m - u1 })
    }

    /// Side A becomes `U1`, side B becomes `U2`.
    pub fn from_bipartite(g: &BipartiteGraph) -> Self {
        let (a, b) = (g.side_a(), g.side_b());
        let mut graph = Graph::empty(a + b);
        for (x, y) in g.edges() {
            graph.add_edge(x, a + y);
        }
        Self { graph, u1: a, u2: b }
    }

    pub fn in_u1(&self, h: usize) -> bool {
        h < self.u1
    }

    fn class(&self, first: bool) -> VertexSet {
        let m = self.graph.n();
        if first {
            VertexSet::from_iter_with_capacity(m, 0..self.u1)
        } else {
            VertexSet::from_iter_with_capacity(m, self.u1..m)
        }
    }
}

/// Checks the embedding and that the tree side `v1` lands in `U1` and the other side in `U2`.
pub fn verify_bipartite_embedding(host: &BipartiteHost, tree: &Tree, v1: u8, e: &Embedding) -> bool {
    if !verify_embedding(&host.graph, tree, e) {
        return false;
    }
    let sides = tree.sides();
    (0..tree.n()).all(|v| (sides[v] == v1) == host.in_u1(e.map[v]))
}

struct Shape {
    sides: Vec<u8>,
    v1: usize,
    v2: usize,
}

fn shape(tree: &Tree, v1: u8) -> Result<Shape, EmbedFailure> {
    if v1 > 1 {
        return Err(hyp("tree side must be 0 or 1"));
    }
    let sides = tree.sides();
    let a = sides.iter().filter(|&&s| s == v1).count();
    Ok(Shape {
        v1: a,
        v2: tree.n() - a,
        sides,
    })
}

fn finish(host: &BipartiteHost, tree: &Tree, v1: u8, pl: Placement) -> Result<Embedding, Stage> {
    let e = Embedding { map: pl.map };
    if verify_bipartite_embedding(host, tree, v1, &e) {
        Ok(e)
    } else {
        Err("verify")
    }
}

/// Class-respecting bare-path embedder: `V_{v1} -> U1`, the other side into
/// `U2`. Low-degree `U2` vertices are used only as centres of bare paths
/// whose ends lie in the `U2` side.
pub fn embed_bipartite_bare_paths(host: &BipartiteHost, tree: &Tree, v1: u8, cfg: &EmbedderConfig) -> Result<Embedding, EmbedFailure> {
    cfg.validate()?;
    let sh = shape(tree, v1)?;
    let n = tree.n();
    if sh.v1 > host.u1 {
        return Err(hyp("|V1| > |U1|"));
    }
    if sh.v2 > host.u2 {
        return Err(hyp("|V2| > |U2|"));
    }
    let g = &host.graph;
    let mu_n = cfg.mu_n(n);
    let m = g.n();
    if (0..m).any(|h| rat(g.degree(h)) < cfg.xi_n(n)) {
        return Err(hyp("host minimum degree below xi n"));
    }
    if (0..host.u1).any(|h| rat(g.degree(h)) + mu_n < rat(host.u2)) {
        return Err(hyp("a U1 vertex has degree below |U2| - mu n"));
    }
    let low: Vec<usize> = (host.u1..m).filter(|&h| rat(g.degree(h)) + mu_n < rat(host.u1)).collect();
    if rat(low.len()) > mu_n {
        return Err(hyp("more than mu n low-degree U2 vertices"));
    }
    if rat(tree.max_degree()) > mu_n {
        return Err(hyp("tree maximum degree above mu n"));
    }
    let k = cfg.bare_paths_needed(n);
    let mut paths = select_bare_paths(tree, |v| sh.sides[v] != v1, None);
    if paths.len() < k {
        return Err(hyp("fewer than 10 mu n disjoint bare paths of length 4 with ends in V2"));
    }
    paths.truncate(k);
    let mut stage = "";
    for attempt in 0..cfg.retry_budget {
        let mut rng = cfg.rng(attempt);
        match bipartite_paths_attempt(host, tree, v1, &sh, &paths, &low, &mut rng) {
            Ok(e) => return Ok(e),
            Err(s) => stage = s,
        }
    }
    Err(EmbedFailure::StepFailed {
        stage: stage.into(),
        attempts: cfg.retry_budget,
    })
}

fn bipartite_paths_attempt<R: Rng>(
    host: &BipartiteHost,
    tree: &Tree,
    v1: u8,
    sh: &Shape,
    paths: &[[usize; 5]],
    low: &[usize],
    rng: &mut R,
) -> Result<Embedding, Stage> {
    let g = &host.graph;
    let (n, m) = (tree.n(), g.n());
    let first = host.class(true);
    let mut good2 = host.class(false);
    for &w in low {
        good2.remove(w);
    }
    let mut pl = Placement::new(n, m);
    let mut gadgets: Vec<[usize; 3]> = Vec::new();
    let mut to_fix = low.to_vec();
    to_fix.shuffle(rng);
    for w in to_fix {
        let mut cands: Vec<usize> = g.neighbours(w).filter(|&y| !pl.used.contains(y)).collect();
        if cands.len() < 2 {
            return Err("repair");
        }
        cands.shuffle(rng);
        for &v in &[cands[0], w, cands[1]] {
            pl.used.insert(v);
        }
        gadgets.push([cands[0], w, cands[1]]);
    }
    if gadgets.len() > paths.len() {
        return Err("repair");
    }
    let mut keep = vec![true; n];
    for p in paths {
        for &v in &p[1..4] {
            keep[v] = false;
        }
    }
    let start: Vec<usize> = (0..n).filter(|&v| keep[v]).max_by_key(|&v| tree.degree(v)).into_iter().collect();
    greedy(g, tree, &keep, &start, |v| if sh.sides[v] == v1 { &first } else { &good2 }, &mut pl, rng)?;

    let need = paths.len() - gadgets.len();
    if need > 0 {
        let mut centres: Vec<usize> = good2.iter().filter(|&h| !pl.used.contains(h)).collect();
        centres.shuffle(rng);
        if centres.len() < need {
            return Err("residual");
        }
        centres.truncate(need);
        let rest: Vec<usize> = first.iter().filter(|&h| !pl.used.contains(h)).collect();
        let adj: Vec<Vec<usize>> = centres
            .iter()
            .map(|&c| (0..rest.len()).filter(|&j| g.has_edge(c, rest[j])).collect())
            .collect();
        let aux = BipartiteGraph::from_adjacency(rest.len(), adj);
        match star_packing(&aux, &vec![2; need]).map_err(|_| "gadgets")? {
            StarPacking::Packed(stars) => {
                gadgets.extend(centres.iter().zip(&stars).map(|(&c, s)| [rest[s[0]], c, rest[s[1]]]));
            }
            StarPacking::Violated(_) => return Err("gadgets"),
        }
    }
    close_paths(g, paths, &gadgets, &mut pl)?;
    finish(host, tree, v1, pl)
}

/// Class-respecting leaf embedder: a set `L` of leaves in the `U2` side is
/// held back, their parents are placed in a random reservoir inside `U1`,
/// and `L` is completed by a star packing into the rest of `U2`.
pub fn embed_bipartite_leaves(host: &BipartiteHost, tree: &Tree, v1: u8, cfg: &EmbedderConfig) -> Result<Embedding, EmbedFailure> {
    cfg.validate()?;
    let sh = shape(tree, v1)?;
    let n = tree.n();
    let slack = n / cfg.u1_slack_divisor as usize;
    if sh.v1 + slack > host.u1 {
        return Err(hyp("|V1| + n/10 > |U1|"));
    }
    if sh.v2 > host.u2 {
        return Err(hyp("|V2| > |U2|"));
    }
    let g = &host.graph;
    let mu_n = cfg.mu_n(n);
    let m = g.n();
    if (0..host.u1).any(|h| rat(g.degree(h)) + mu_n < rat(host.u2)) {
        return Err(hyp("a U1 vertex has degree below |U2| - mu n"));
    }
    if (host.u1..m).any(|h| rat(g.degree(h)) < cfg.xi_n(n)) {
        return Err(hyp("a U2 vertex has degree below xi n"));
    }
    let low: Vec<usize> = (host.u1..m).filter(|&h| rat(g.degree(h)) + mu_n < rat(host.u1)).collect();
    if rat(low.len()) > mu_n {
        return Err(hyp("more than mu n low-degree U2 vertices"));
    }
    if tree.max_degree() as f64 > cfg.degree_cap(n) {
        return Err(hyp("tree maximum degree above c n / log n"));
    }
    let cands: Vec<usize> = tree
        .leaves()
        .into_iter()
        .filter(|&l| sh.sides[l] != v1 && tree.degree(tree.neighbours(l)[0]) >= 2)
        .collect();
    if rat(cands.len() * cfg.bipartite_leaf_divisor as usize) < cfg.xi_n(n) {
        return Err(hyp("fewer than xi n / 10^5 leaves in V2"));
    }
    let size = ceil(cfg.xi_n(n) / rat(cfg.leaf_set_divisor as usize))
        .max(cfg.leaf_floor_factor as usize * ceil(mu_n))
        .max(low.len())
        .max(1)
        .min(cands.len());
    if size < low.len() && host.u2 == sh.v2 {
        return Err(hyp("too few V2 leaves to cover the low-degree U2 vertices"));
    }
    let mut stage = "";
    for attempt in 0..cfg.retry_budget {
        let mut rng = cfg.rng(attempt);
        match bipartite_leaves_attempt(host, tree, v1, &sh, &cands, size, slack, &low, &mut rng) {
            Ok(e) => return Ok(e),
            Err(s) => stage = s,
        }
    }
    Err(EmbedFailure::RetriesExhausted {
        stage: stage.into(),
        attempts: cfg.retry_budget,
    })
}

#[allow(clippy::too_many_arguments)]
fn bipartite_leaves_attempt<R: Rng>(
    host: &BipartiteHost,
    tree: &Tree,
    v1: u8,
    sh: &Shape,
    cands: &[usize],
    size: usize,
    slack: usize,
    low: &[usize],
    rng: &mut R,
) -> Result<Embedding, Stage> {
    let g = &host.graph;
    let (n, m) = (tree.n(), g.n());
    let chosen: Vec<usize> = cands.choose_multiple(rng, size).copied().collect();
    let mut keep = vec![true; n];
    let mut is_parent = vec![false; n];
    for &l in &chosen {
        keep[l] = false;
        is_parent[tree.neighbours(l)[0]] = true;
    }
    let parents = is_parent.iter().filter(|&&p| p).count();
    let mut u1: Vec<usize> = (0..host.u1).collect();
    u1.shuffle(rng);
    let reservoir_size = (parents + slack / 2).min(host.u1 - (sh.v1 - parents));
    let reservoir = VertexSet::from_iter_with_capacity(m, u1[..reservoir_size].iter().copied());
    let others = VertexSet::from_iter_with_capacity(m, u1[reservoir_size..].iter().copied());
    let mut good2 = host.class(false);
    for &w in low {
        good2.remove(w);
    }
    let allowed = |v: usize| {
        if sh.sides[v] != v1 {
            &good2
        } else if is_parent[v] {
            &reservoir
        } else {
            &others
        }
    };
    let mut pl = Placement::new(n, m);
    let start: Vec<usize> = (0..n).filter(|&v| is_parent[v]).take(1).collect();
    greedy(g, tree, &keep, &start, allowed, &mut pl, rng)?;
    complete_leaves(g, tree, &chosen, &host.class(false), &mut pl)?;
    finish(host, tree, v1, pl)
}

/// Dispatches on the bare-paths-or-leaves dichotomy, inside the window
/// `n/4 <= |V1| + n/5 <= |U1|` and `n/100 <= |V2| <= |U2|`.
pub fn embed_bipartite_any(host: &BipartiteHost, tree: &Tree, v1: u8, cfg: &EmbedderConfig) -> Result<Embedding, EmbedFailure> {
    cfg.validate()?;
    let sh = shape(tree, v1)?;
    let n = tree.n();
    if 4 * (sh.v1 + n / 5) < n || sh.v1 + n / 5 > host.u1 || 100 * sh.v2 < n || sh.v2 > host.u2 {
        return Err(hyp("size window n/4 <= |V1| + n/5 <= |U1|, n/100 <= |V2| <= |U2|"));
    }
    let k = cfg.bare_paths_needed(n);
    let enough_paths = select_bare_paths(tree, |v| sh.sides[v] != v1, None).len() >= k;
    let first = if enough_paths {
        embed_bipartite_bare_paths(host, tree, v1, cfg)
    } else {
        embed_bipartite_leaves(host, tree, v1, cfg)
    };
    match first {
        Ok(e) => Ok(e),
        Err(err) => {
            let second = if enough_paths {
                embed_bipartite_leaves(host, tree, v1, cfg)
            } else {
                embed_bipartite_bare_paths(host, tree, v1, cfg)
            };
            second.map_err(|_| err)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal_embed::almost_complete_bipartite_host;
    use num_rational::Rational64;

    fn cfg(mu: Rational64, c: i64) -> EmbedderConfig {
        EmbedderConfig {
            separation: Rational64::from_integer(1),
            ..EmbedderConfig::new(mu, Rational64::new(1, 100), Rational64::from_integer(c), 3)
        }
    }

    fn complete(u1: usize, u2: usize) -> BipartiteHost {
        BipartiteHost::new(almost_complete_bipartite_host(u1, u2, 0, 0), u1).unwrap()
    }

    /// Spine of `len` vertices with a pendant leaf on every `gap`-th even spine vertex.
    fn sparse_caterpillar(len: usize, gap: usize) -> Tree {
        let mut edges: Vec<(usize, usize)> = (1..len).map(|i| (i - 1, i)).collect();
        let mut next = len;
        for i in (gap..len - 1).step_by(gap) {
            edges.push((i, next));
            next += 1;
        }
        Tree::new(next, edges).unwrap()
    }

    #[test]
    fn bare_paths_examples() {
        let c = cfg(Rational64::new(1, 100), 1);
        let p = Tree::path(200).unwrap();
        let host = complete(100, 100);
        let e = embed_bipartite_bare_paths(&host, &p, 1, &c).unwrap();
        assert!(verify_bipartite_embedding(&host, &p, 1, &e));

        let t = sparse_caterpillar(300, 20);
        assert_eq!(t.n(), 314);
        let v1 = 1 - t.sides()[0];
        let c = cfg(Rational64::new(1, 104), 1);
        assert!(select_bare_paths(&t, |v| t.sides()[v] != v1, None).len() >= c.bare_paths_needed(t.n()));
        let host = BipartiteHost::new(almost_complete_bipartite_host(200, 150, 1, 4), 200).unwrap();
        let e = embed_bipartite_bare_paths(&host, &t, v1, &c).unwrap();
        assert!(verify_bipartite_embedding(&host, &t, v1, &e));

        assert!(matches!(
            embed_bipartite_bare_paths(&complete(60, 200), &p, 1, &c),
            Err(EmbedFailure::HypothesisFailed { .. })
        ));
    }

    #[test]
    fn leaves_examples() {
        let c = cfg(Rational64::new(1, 100), 3);
        let broom = Tree::broom(80, 80).unwrap();
        let v1 = broom.sides()[79];
        let host = complete(60, 120);
        let e = embed_bipartite_leaves(&host, &broom, v1, &c).unwrap();
        assert!(verify_bipartite_embedding(&host, &broom, v1, &e));

        let host = BipartiteHost::new(almost_complete_bipartite_host(250, 120, 1, 8), 250).unwrap();
        let e = embed_bipartite_leaves(&host, &broom, v1, &c).unwrap();
        assert!(verify_bipartite_embedding(&host, &broom, v1, &e));

        assert!(matches!(
            embed_bipartite_leaves(&complete(250, 100), &broom, v1, &c),
            Err(EmbedFailure::HypothesisFailed { .. })
        ));
    }

    #[test]
    fn dispatcher() {
        let c = cfg(Rational64::new(1, 100), 3);
        let broom = Tree::broom(80, 80).unwrap();
        let v1 = broom.sides()[79];
        let e = embed_bipartite_any(&complete(150, 130), &broom, v1, &c).unwrap();
        assert!(verify_bipartite_embedding(&complete(150, 130), &broom, v1, &e));

        let t = sparse_caterpillar(290, 14);
        assert_eq!(t.n(), 310);
        let v1 = 1 - t.sides()[0];
        assert!(select_bare_paths(&t, |v| t.sides()[v] != v1, None).len() >= c.bare_paths_needed(t.n()));
        let host = BipartiteHost::new(almost_complete_bipartite_host(230, 150, 1, 2), 230).unwrap();
        let e = embed_bipartite_any(&host, &t, v1, &c).unwrap();
        assert!(verify_bipartite_embedding(&host, &t, v1, &e));

        assert!(matches!(
            embed_bipartite_any(&complete(100, 100), &t, v1, &c),
            Err(EmbedFailure::HypothesisFailed { .. })
        ));
    }

    #[test]
    fn host_constructors() {
        let b = BipartiteGraph::new(2, 3, &[(0, 0), (1, 2)]).unwrap();
        let h = BipartiteHost::from_bipartite(&b);
        assert!(h.graph.has_edge(1, 4) && h.u1 == 2 && h.u2 == 3);
        assert!(BipartiteHost::new(Graph::complete(3), 1).is_err());
    }
}
