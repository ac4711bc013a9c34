use super::{ceil, dirac_hamilton_cycle, greedy, hyp, rat, select_bare_paths, EmbedFailure, EmbedderConfig, Placement, Stage};
use crate::embed::{verify_embedding, Embedding};
use crate::graph::{Graph, VertexSet};
use crate::matching::{max_matching, star_packing, BipartiteGraph, StarPacking};
use crate::tree::Tree;
use rand::seq::SliceRandom;
use rand::Rng;

fn check_anchor(host: &Graph, tree: &Tree, anchor: (usize, usize)) -> Result<(), EmbedFailure> {
    if host.n() < tree.n() {
        return Err(hyp("host has fewer vertices than the tree"));
    }
    if anchor.0 >= tree.n() || anchor.1 >= host.n() {
        return Err(hyp("anchor out of range"));
    }
    Ok(())
}

/// Embeds `tree` with `anchor.0 -> anchor.1`: low-degree host vertices become
/// centres of bare paths, the rest of the tree is placed greedily, and the
/// bare paths are closed through a Hamilton cycle of the leftover vertices
/// and a perfect matching of path ends to cycle segments.
pub fn embed_bare_paths(host: &Graph, tree: &Tree, anchor: (usize, usize), cfg: &EmbedderConfig) -> Result<Embedding, EmbedFailure> {
    cfg.validate()?;
    check_anchor(host, tree, anchor)?;
    let (n, m) = (tree.n(), host.n());
    let mu_n = cfg.mu_n(n);
    if (0..m).any(|v| rat(host.degree(v)) < cfg.xi_n(n)) {
        return Err(hyp("host minimum degree below xi n"));
    }
    let low: Vec<usize> = (0..m).filter(|&v| rat(host.degree(v)) + mu_n < rat(m)).collect();
    if rat(low.len()) > mu_n {
        return Err(hyp("more than mu n host vertices of degree below |host| - mu n"));
    }
    if rat(tree.max_degree()) > mu_n {
        return Err(hyp("tree maximum degree above mu n"));
    }
    let k = cfg.bare_paths_needed(n);
    let mut paths = select_bare_paths(tree, |_| true, Some(anchor.0));
    if paths.len() < k {
        return Err(hyp("fewer than 10 mu n disjoint bare paths of length 4 off the anchor"));
    }
    paths.truncate(k);
    let mut stage = "";
    for attempt in 0..cfg.retry_budget {
        let mut rng = cfg.rng(attempt);
        match bare_paths_attempt(host, tree, anchor, &paths, &low, &mut rng) {
            Ok(e) if verify_embedding(host, tree, &e) => return Ok(e),
            Ok(_) => stage = "verify",
            Err(s) => stage = s,
        }
    }
    Err(EmbedFailure::StepFailed {
        stage: stage.into(),
        attempts: cfg.retry_budget,
    })
}

fn bare_paths_attempt<R: Rng>(
    host: &Graph,
    tree: &Tree,
    anchor: (usize, usize),
    paths: &[[usize; 5]],
    low: &[usize],
    rng: &mut R,
) -> Result<Embedding, Stage> {
    let (n, m) = (tree.n(), host.n());
    let low_set = VertexSet::from_iter_with_capacity(m, low.iter().copied());
    let mut good = VertexSet::full(m);
    good.difference_with(&low_set);
    let mut pl = Placement::new(n, m);
    pl.put(anchor.0, anchor.1);

    let mut gadgets: Vec<[usize; 3]> = Vec::new();
    let mut to_fix: Vec<usize> = low.iter().copied().filter(|&w| w != anchor.1).collect();
    to_fix.shuffle(rng);
    for w in to_fix {
        let mut cands: Vec<usize> = host
            .neighbours(w)
            .filter(|&v| good.contains(v) && !pl.used.contains(v))
            .collect();
        if cands.len() < 2 {
            return Err("repair");
        }
        cands.shuffle(rng);
        let (y, z) = (cands[0], cands[1]);
        for v in [y, w, z] {
            pl.used.insert(v);
        }
        gadgets.push([y, w, z]);
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
    greedy(host, tree, &keep, &[anchor.0], |_| &good, &mut pl, rng)?;

    let need = paths.len() - gadgets.len();
    if need > 0 {
        let mut residual: Vec<usize> = good.iter().filter(|&v| !pl.used.contains(v)).collect();
        if residual.len() < 3 * need {
            return Err("residual");
        }
        residual.shuffle(rng);
        let mut cycle = dirac_hamilton_cycle(host, &residual).ok_or("hamilton")?;
        let shift = rng.gen_range(0..cycle.len());
        cycle.rotate_left(shift);
        gadgets.extend(cycle.chunks_exact(3).map(|c| [c[0], c[1], c[2]]));
    }

    close_paths(host, paths, &gadgets, &mut pl)?;
    Ok(Embedding { map: pl.map })
}

/// Matches each path (ends already placed) to a disjoint host path `y-c-z`
/// with the ends adjacent in either orientation, then fills the interiors.
pub(super) fn close_paths(host: &Graph, paths: &[[usize; 5]], gadgets: &[[usize; 3]], pl: &mut Placement) -> Result<(), Stage> {
    let fits = |p: &[usize; 5], g: &[usize; 3]| {
        let (a, b) = (pl.map[p[0]], pl.map[p[4]]);
        let fwd = host.has_edge(a, g[0]) && host.has_edge(g[2], b);
        let rev = host.has_edge(a, g[2]) && host.has_edge(g[0], b);
        (fwd, rev)
    };
    let adj: Vec<Vec<usize>> = paths
        .iter()
        .map(|p| {
            (0..gadgets.len())
                .filter(|&j| {
                    let (f, r) = fits(p, &gadgets[j]);
                    f || r
                })
                .collect()
        })
        .collect();
    let aux = BipartiteGraph::from_adjacency(gadgets.len(), adj);
    let matching = max_matching(&aux);
    if matching.size() < paths.len() {
        return Err("matching");
    }
    let fills: Vec<([usize; 5], [usize; 3])> = matching
        .pairs()
        .into_iter()
        .map(|(i, j)| {
            let g = gadgets[j];
            let seq = if fits(&paths[i], &g).0 { g } else { [g[2], g[1], g[0]] };
            (paths[i], seq)
        })
        .collect();
    for (p, seq) in fills {
        for (&slot, h) in p[1..4].iter().zip(seq) {
            pl.put(slot, h);
        }
    }
    Ok(())
}

/// Embeds `tree` with `anchor.0 -> anchor.1`: a random set `L` of leaves away
/// from the anchor is held back, `T - L` is placed greedily in random BFS
/// order, and `L` is completed by a star packing into the unused vertices.
pub fn embed_many_leaves(host: &Graph, tree: &Tree, anchor: (usize, usize), cfg: &EmbedderConfig) -> Result<Embedding, EmbedFailure> {
    cfg.validate()?;
    check_anchor(host, tree, anchor)?;
    let (n, m) = (tree.n(), host.n());
    let mu_n = cfg.mu_n(n);
    if (0..m).any(|v| v != anchor.1 && rat(host.degree(v)) + mu_n < rat(m)) {
        return Err(hyp("a host vertex other than the anchor target has degree below |host| - mu n"));
    }
    if rat(host.degree(anchor.1)) < cfg.xi_n(n) {
        return Err(hyp("anchor target degree below xi n"));
    }
    let leaves = tree.leaves();
    if rat(leaves.len() * cfg.leaf_divisor as usize) < cfg.xi_n(n) {
        return Err(hyp("fewer than xi n / 10^3 leaves"));
    }
    if tree.max_degree() as f64 > cfg.degree_cap(n) {
        return Err(hyp("tree maximum degree above c n / log n"));
    }
    let near = tree.neighbours(anchor.0);
    let cands: Vec<usize> = leaves
        .into_iter()
        .filter(|&l| l != anchor.0 && !near.contains(&l) && tree.degree(tree.neighbours(l)[0]) >= 2)
        .collect();
    let size = ceil(cfg.xi_n(n) / rat(cfg.leaf_set_divisor as usize))
        .max(cfg.leaf_floor_factor as usize * ceil(mu_n))
        .max(1)
        .min(cands.len());
    if size == 0 {
        return Err(hyp("no leaf away from the anchor"));
    }
    let all = VertexSet::full(m);
    let mut stage = "";
    for attempt in 0..cfg.retry_budget {
        let mut rng = cfg.rng(attempt);
        let chosen: Vec<usize> = cands.choose_multiple(&mut rng, size).copied().collect();
        let mut keep = vec![true; n];
        for &l in &chosen {
            keep[l] = false;
        }
        let mut pl = Placement::new(n, m);
        pl.put(anchor.0, anchor.1);
        let res = greedy(host, tree, &keep, &[anchor.0], |_| &all, &mut pl, &mut rng)
            .and_then(|()| complete_leaves(host, tree, &chosen, &all, &mut pl));
        match res {
            Ok(()) => {
                let e = Embedding { map: pl.map };
                if verify_embedding(host, tree, &e) {
                    return Ok(e);
                }
                stage = "verify";
            }
            Err(s) => stage = s,
        }
    }
    Err(EmbedFailure::RetriesExhausted {
        stage: stage.into(),
        attempts: cfg.retry_budget,
    })
}

/// Places the held-back leaves by a star packing from their parents' images into `targets`.
pub(super) fn complete_leaves(host: &Graph, tree: &Tree, leaves: &[usize], targets: &VertexSet, pl: &mut Placement) -> Result<(), Stage> {
    let mut parents: Vec<usize> = Vec::new();
    let mut kids: Vec<Vec<usize>> = Vec::new();
    for &l in leaves {
        let p = tree.neighbours(l)[0];
        match parents.iter().position(|&q| q == p) {
            Some(i) => kids[i].push(l),
            None => {
                parents.push(p);
                kids.push(vec![l]);
            }
        }
    }
    let free: Vec<usize> = targets.iter().filter(|&h| !pl.used.contains(h)).collect();
    let adj: Vec<Vec<usize>> = parents
        .iter()
        .map(|&p| (0..free.len()).filter(|&j| host.has_edge(pl.map[p], free[j])).collect())
        .collect();
    let aux = BipartiteGraph::from_adjacency(free.len(), adj);
    let demands: Vec<usize> = kids.iter().map(Vec::len).collect();
    match star_packing(&aux, &demands).map_err(|_| "hall")? {
        StarPacking::Packed(stars) => {
            for (i, star) in stars.iter().enumerate() {
                for (&l, &j) in kids[i].iter().zip(star) {
                    pl.put(l, free[j]);
                }
            }
            Ok(())
        }
        StarPacking::Violated(_) => Err("hall"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal_embed::almost_complete_host;
    use num_rational::Rational64;

    fn cfg(mu: Rational64, xi: Rational64) -> EmbedderConfig {
        EmbedderConfig {
            separation: Rational64::from_integer(1),
            ..EmbedderConfig::new(mu, xi, Rational64::from_integer(2), 11)
        }
    }

    #[test]
    fn complete_host_long_path() {
        let c = cfg(Rational64::new(1, 100), Rational64::new(1, 100));
        let p = Tree::path(200).unwrap();
        let host = Graph::complete(200);
        let e = embed_bare_paths(&host, &p, (0, 5), &c).unwrap();
        assert!(verify_embedding(&host, &p, &e));
        assert_eq!(e.map[0], 5);
    }

    #[test]
    fn noisy_host_path() {
        let c = cfg(Rational64::new(1, 100), Rational64::new(1, 100));
        let n = 400;
        let host = almost_complete_host(n, 2, &[(7, 10)], 3);
        let p = Tree::path(n).unwrap();
        let e = embed_bare_paths(&host, &p, (0, 0), &c).unwrap();
        assert!(verify_embedding(&host, &p, &e));
    }

    #[test]
    fn bare_paths_hypotheses() {
        let c = cfg(Rational64::new(1, 100), Rational64::new(1, 100));
        let star = Tree::star(150);
        let host = Graph::complete(151);
        assert!(matches!(embed_bare_paths(&host, &star, (0, 0), &c), Err(EmbedFailure::HypothesisFailed { .. })));
    }

    #[test]
    fn many_leaves_examples() {
        let c = cfg(Rational64::new(1, 100), Rational64::new(1, 100));
        let c = EmbedderConfig { c: Rational64::from_integer(4), ..c };
        let spider = Tree::spider(100, 2);
        let host = almost_complete_host(300, 1, &[], 5);
        let e = embed_many_leaves(&host, &spider, (0, 0), &c).unwrap();
        assert!(verify_embedding(&host, &spider, &e));

        let mut weak = Graph::complete(300);
        for v in 2..300 {
            weak.remove_edge(0, v);
        }
        assert!(matches!(embed_many_leaves(&weak, &spider, (0, 0), &c), Err(EmbedFailure::HypothesisFailed { .. })));
    }
}
