//! Bipartite matchings, Hall violators, star packings and the cascading partition.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

const NIL: usize = usize::MAX;

/// Bipartite graph with classes `0..a` and `0..b`; adjacency is stored from the A side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    a: usize,
    b: usize,
    adj: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct BipartiteJson {
    a: usize,
    b: usize,
    edges: Vec<[usize; 2]>,
}

impl BipartiteGraph {
    pub fn new(a: usize, b: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); a];
        for &(x, y) in edges {
            if x >= a || y >= b {
                return Err(Error::InvalidInput(format!("edge ({x},{y}) out of range")));
            }
            if adj[x].contains(&y) {
                return Err(Error::InvalidInput(format!("duplicate edge ({x},{y})")));
            }
            adj[x].push(y);
        }
        Ok(Self { a, b, adj })
    }

    /// Builds from adjacency lists without the duplicate scan; lists must be duplicate-free.
    pub fn from_adjacency(b: usize, adj: Vec<Vec<usize>>) -> Self {
        debug_assert!(adj.iter().flatten().all(|&y| y < b));
        Self { a: adj.len(), b, adj }
    }

    pub fn side_a(&self) -> usize {
        self.a
    }

    pub fn side_b(&self) -> usize {
        self.b
    }

    pub fn neighbours(&self, x: usize) -> &[usize] {
        &self.adj[x]
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        self.adj[x].contains(&y)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(x, ys)| ys.iter().map(move |&y| (x, y)))
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(BipartiteJson {
            a: self.a,
            b: self.b,
            edges: self.edges().into_iter().map(|(x, y)| [x, y]).collect(),
        })
        .expect("serializable")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let j: BipartiteJson =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let edges: Vec<_> = j.edges.into_iter().map(|[x, y]| (x, y)).collect();
        Self::new(j.a, j.b, &edges)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    pub mate_a: Vec<Option<usize>>,
    pub mate_b: Vec<Option<usize>>,
}

impl Matching {
    pub fn empty(a: usize, b: usize) -> Self {
        Self {
            mate_a: vec![None; a],
            mate_b: vec![None; b],
        }
    }

    /// Builds a matching from pairs, rejecting reused vertices and non-edges.
    pub fn from_pairs(g: &BipartiteGraph, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut m = Self::empty(g.a, g.b);
        for &(x, y) in pairs {
            if x >= g.a || y >= g.b || !g.has_edge(x, y) {
                return Err(Error::InvalidInput(format!("({x},{y}) is not an edge")));
            }
            if m.mate_a[x].is_some() || m.mate_b[y].is_some() {
                return Err(Error::InvalidInput(format!("({x},{y}) reuses a vertex")));
            }
            m.mate_a[x] = Some(y);
            m.mate_b[y] = Some(x);
        }
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.mate_a.iter().flatten().count()
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.mate_a
            .iter()
            .enumerate()
            .filter_map(|(x, y)| y.map(|y| (x, y)))
            .collect()
    }
}

/// Maximum matching by Hopcroft-Karp.
pub fn max_matching(g: &BipartiteGraph) -> Matching {
    let mut mate_a = vec![NIL; g.a];
    let mut mate_b = vec![NIL; g.b];
    let mut dist = vec![0usize; g.a];
    loop {
        // layered BFS from free A vertices
        let mut queue = VecDeque::new();
        for x in 0..g.a {
            if mate_a[x] == NIL {
                dist[x] = 0;
                queue.push_back(x);
            } else {
                dist[x] = NIL;
            }
        }
        let mut found = false;
        while let Some(x) = queue.pop_front() {
            for &y in &g.adj[x] {
                let z = mate_b[y];
                if z == NIL {
                    found = true;
                } else if dist[z] == NIL {
                    dist[z] = dist[x] + 1;
                    queue.push_back(z);
                }
            }
        }
        if !found {
            break;
        }
        let mut next_edge = vec![0usize; g.a];
        for x in 0..g.a {
            if mate_a[x] == NIL {
                augment(g, x, &mut mate_a, &mut mate_b, &mut dist, &mut next_edge);
            }
        }
    }
    Matching {
        mate_a: mate_a.into_iter().map(|y| (y != NIL).then_some(y)).collect(),
        mate_b: mate_b.into_iter().map(|x| (x != NIL).then_some(x)).collect(),
    }
}

fn augment(
    g: &BipartiteGraph,
    root: usize,
    mate_a: &mut [usize],
    mate_b: &mut [usize],
    dist: &mut [usize],
    next_edge: &mut [usize],
) -> bool {
    // iterative DFS along the layered graph
    let mut stack = vec![root];
    while let Some(&x) = stack.last() {
        if next_edge[x] == g.adj[x].len() {
            dist[x] = NIL;
            stack.pop();
            continue;
        }
        let y = g.adj[x][next_edge[x]];
        next_edge[x] += 1;
        let z = mate_b[y];
        if z == NIL {
            // flip the path recorded on the stack
            let mut y = y;
            while let Some(x) = stack.pop() {
                let prev = mate_a[x];
                mate_a[x] = y;
                mate_b[y] = x;
                y = prev;
            }
            return true;
        }
        if dist[z] != NIL && dist[z] == dist[x] + 1 {
            stack.push(z);
        }
    }
    false
}

/// Vertices reachable by alternating paths from the free A vertices: (A set, B set).
fn alternating_from_free_a(g: &BipartiteGraph, m: &Matching) -> (Vec<bool>, Vec<bool>) {
    let mut seen_a = vec![false; g.a];
    let mut seen_b = vec![false; g.b];
    let mut queue: VecDeque<usize> = (0..g.a).filter(|&x| m.mate_a[x].is_none()).collect();
    for &x in &queue {
        seen_a[x] = true;
    }
    while let Some(x) = queue.pop_front() {
        for &y in &g.adj[x] {
            if seen_b[y] {
                continue;
            }
            seen_b[y] = true;
            if let Some(z) = m.mate_b[y] {
                if !seen_a[z] {
                    seen_a[z] = true;
                    queue.push_back(z);
                }
            }
        }
    }
    (seen_a, seen_b)
}

/// Vertices reachable by alternating paths from the free B vertices: (A set, B set).
fn alternating_from_free_b(g: &BipartiteGraph, m: &Matching) -> (Vec<bool>, Vec<bool>) {
    let mut radj = vec![Vec::new(); g.b];
    for (x, ys) in g.adj.iter().enumerate() {
        for &y in ys {
            radj[y].push(x);
        }
    }
    let mut seen_a = vec![false; g.a];
    let mut seen_b = vec![false; g.b];
    let mut queue: VecDeque<usize> = (0..g.b).filter(|&y| m.mate_b[y].is_none()).collect();
    for &y in &queue {
        seen_b[y] = true;
    }
    while let Some(y) = queue.pop_front() {
        for &x in &radj[y] {
            if seen_a[x] {
                continue;
            }
            seen_a[x] = true;
            if let Some(z) = m.mate_a[x] {
                if !seen_b[z] {
                    seen_b[z] = true;
                    queue.push_back(z);
                }
            }
        }
    }
    (seen_a, seen_b)
}

/// Some `I` with `|N(I)| < |I|`, or `None` when an A-saturating matching exists.
pub fn hall_violator(g: &BipartiteGraph) -> Option<Vec<usize>> {
    let m = max_matching(g);
    if m.size() == g.a {
        return None;
    }
    let (seen_a, _) = alternating_from_free_a(g, &m);
    Some((0..g.a).filter(|&x| seen_a[x]).collect())
}

/// Neighbourhood of an A-subset.
pub fn neighbourhood(g: &BipartiteGraph, set: &[usize]) -> Vec<usize> {
    let mut hit = vec![false; g.b];
    for &x in set {
        for &y in &g.adj[x] {
            hit[y] = true;
        }
    }
    (0..g.b).filter(|&y| hit[y]).collect()
}

/// Result of a star packing request.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StarPacking {
    /// `stars[a]` lists the leaves of the star centred at `a`.
    Packed(Vec<Vec<usize>>),
    /// An A-subset whose neighbourhood is smaller than its total demand.
    Violated(Vec<usize>),
}

/// Vertex-disjoint stars centred at each `a` with exactly `demands[a]` leaves,
/// via cloning every `a` `demands[a]` times and matching.
pub fn star_packing(g: &BipartiteGraph, demands: &[usize]) -> Result<StarPacking> {
    if demands.len() != g.a {
        return Err(Error::InvalidInput(format!(
            "{} demands for {} A-vertices",
            demands.len(),
            g.a
        )));
    }
    let mut owner = Vec::new();
    let mut adj = Vec::new();
    for (x, &d) in demands.iter().enumerate() {
        for _ in 0..d {
            owner.push(x);
            adj.push(g.adj[x].clone());
        }
    }
    let clones = BipartiteGraph::from_adjacency(g.b, adj);
    let m = max_matching(&clones);
    if m.size() == clones.a {
        let mut stars = vec![Vec::new(); g.a];
        for (c, y) in m.mate_a.iter().enumerate() {
            stars[owner[c]].push(y.expect("saturating"));
        }
        return Ok(StarPacking::Packed(stars));
    }
    let (seen, _) = alternating_from_free_a(&clones, &m);
    let mut set: Vec<usize> = (0..clones.a).filter(|&c| seen[c]).map(|c| owner[c]).collect();
    set.dedup();
    Ok(StarPacking::Violated(set))
}

/// Partition of the matched vertices from the cascading lemma.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CascadePartition {
    pub a_plus: Vec<usize>,
    pub a_minus: Vec<usize>,
    pub a_bar: Vec<usize>,
    pub a_prime: Vec<usize>,
    pub b_plus: Vec<usize>,
    pub b_minus: Vec<usize>,
    pub b_bar: Vec<usize>,
    pub b_prime: Vec<usize>,
}

/// `A^- / B^+` are reached by alternating paths from free A vertices,
/// `A^+ / B^-` from free B vertices; the rest of the matching is `A-bar / B-bar`.
pub fn cascade_partition(g: &BipartiteGraph, m: &Matching) -> Result<CascadePartition> {
    if m.mate_a.len() != g.a || m.mate_b.len() != g.b {
        return Err(Error::InvalidInput("matching does not fit the graph".into()));
    }
    for (x, y) in m.pairs() {
        if !g.has_edge(x, y) || m.mate_b[y] != Some(x) {
            return Err(Error::InvalidInput(format!("({x},{y}) is not a consistent matching edge")));
        }
    }
    if m.size() != max_matching(g).size() {
        return Err(Error::Precondition("matching is not maximum".into()));
    }
    let (from_a_side, from_a_b) = alternating_from_free_a(g, m);
    let (from_b_a, _) = alternating_from_free_b(g, m);
    let mut p = CascadePartition {
        a_plus: vec![],
        a_minus: vec![],
        a_bar: vec![],
        a_prime: vec![],
        b_plus: vec![],
        b_minus: vec![],
        b_bar: vec![],
        b_prime: vec![],
    };
    for x in 0..g.a {
        match m.mate_a[x] {
            None => p.a_prime.push(x),
            Some(y) => {
                if from_a_b[y] {
                    debug_assert!(from_a_side[x]);
                    if from_b_a[x] {
                        return Err(Error::Internal(format!("vertex {x} closes an augmenting path")));
                    }
                    p.a_minus.push(x);
                    p.b_plus.push(y);
                } else if from_b_a[x] {
                    p.a_plus.push(x);
                    p.b_minus.push(y);
                } else {
                    p.a_bar.push(x);
                    p.b_bar.push(y);
                }
            }
        }
    }
    p.b_plus.sort_unstable();
    p.b_minus.sort_unstable();
    p.b_bar.sort_unstable();
    p.b_prime = (0..g.b).filter(|&y| m.mate_b[y].is_none()).collect();
    if !cascade_holds(g, m, &p) {
        return Err(Error::Internal("cascading partition failed its own check".into()));
    }
    Ok(p)
}

/// Independent check of the partition and of both emptiness claims.
pub fn cascade_holds(g: &BipartiteGraph, m: &Matching, p: &CascadePartition) -> bool {
    let mark = |len: usize, sets: &[&Vec<usize>]| -> Option<Vec<u8>> {
        let mut label = vec![u8::MAX; len];
        for (i, s) in sets.iter().enumerate() {
            for &v in s.iter() {
                if v >= len || label[v] != u8::MAX {
                    return None;
                }
                label[v] = i as u8;
            }
        }
        (!label.contains(&u8::MAX)).then_some(label)
    };
    // A labels: 0 plus, 1 minus, 2 bar, 3 prime; B the same
    let (Some(la), Some(lb)) = (
        mark(g.a, &[&p.a_plus, &p.a_minus, &p.a_bar, &p.a_prime]),
        mark(g.b, &[&p.b_plus, &p.b_minus, &p.b_bar, &p.b_prime]),
    ) else {
        return false;
    };
    for x in 0..g.a {
        let ok = match (la[x], m.mate_a[x]) {
            (3, None) => true,
            (0, Some(y)) => lb[y] == 1,
            (1, Some(y)) => lb[y] == 0,
            (2, Some(y)) => lb[y] == 2,
            _ => false,
        };
        if !ok {
            return false;
        }
    }
    if (0..g.b).any(|y| (lb[y] == 3) != m.mate_b[y].is_none()) {
        return false;
    }
    for (x, y) in g.edges() {
        let first = matches!(la[x], 3 | 1) && matches!(lb[y], 1..=3);
        let second = matches!(la[x], 1..=3) && matches!(lb[y], 3 | 1);
        if first || second {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(a: usize, b: usize) -> BipartiteGraph {
        let edges: Vec<_> = (0..a).flat_map(|x| (0..b).map(move |y| (x, y))).collect();
        BipartiteGraph::new(a, b, &edges).unwrap()
    }

    #[test]
    fn matching_examples() {
        assert_eq!(max_matching(&complete(3, 3)).size(), 3);
        assert_eq!(max_matching(&BipartiteGraph::new(3, 3, &[]).unwrap()).size(), 0);
    }

    #[test]
    fn violator_examples() {
        assert_eq!(hall_violator(&complete(2, 2)), None);
        assert_eq!(hall_violator(&complete(2, 1)), Some(vec![0, 1]));
    }

    #[test]
    fn star_examples() {
        let k22 = complete(2, 2);
        assert_eq!(star_packing(&k22, &[0, 0]).unwrap(), StarPacking::Packed(vec![vec![], vec![]]));
        match star_packing(&k22, &[1, 1]).unwrap() {
            StarPacking::Packed(s) => {
                assert_eq!(s[0].len() + s[1].len(), 2);
                assert_ne!(s[0], s[1]);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(star_packing(&k22, &[2, 2]).unwrap(), StarPacking::Violated(vec![0, 1]));
    }

    #[test]
    fn cascade_examples() {
        let k11 = complete(1, 1);
        let p = cascade_partition(&k11, &max_matching(&k11)).unwrap();
        assert_eq!((p.a_bar, p.b_bar), (vec![0], vec![0]));

        // a1 - b1 - a2 with a1 matched to b1 (a1 = 0, a2 = 1, b1 = 0)
        let path = BipartiteGraph::new(2, 1, &[(0, 0), (1, 0)]).unwrap();
        let m = Matching::from_pairs(&path, &[(0, 0)]).unwrap();
        let p = cascade_partition(&path, &m).unwrap();
        assert_eq!((p.a_minus, p.b_plus, p.a_prime), (vec![0], vec![0], vec![1]));

        let empty = BipartiteGraph::new(2, 3, &[]).unwrap();
        let p = cascade_partition(&empty, &Matching::empty(2, 3)).unwrap();
        assert_eq!((p.a_prime.len(), p.b_prime.len()), (2, 3));
    }

    #[test]
    fn rejects_non_maximum() {
        let k22 = complete(2, 2);
        let m = Matching::from_pairs(&k22, &[(0, 0)]).unwrap();
        assert!(matches!(cascade_partition(&k22, &m), Err(Error::Precondition(_))));
    }

    #[test]
    fn json_roundtrip() {
        let g = BipartiteGraph::new(2, 3, &[(0, 2), (1, 0)]).unwrap();
        assert_eq!(BipartiteGraph::from_json(&g.to_json()).unwrap(), g);
    }
}
