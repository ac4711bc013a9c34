//! Labelled trees, their bipartition profiles, generators and the
//! constructive tree lemmas used by the embedders.

mod build;
mod lemmas;

pub(crate) use lemmas::chains;
pub use build::{glue_trees, make_caterpillar, make_perfect_ternary, pad_large_class};
pub use lemmas::{
    bare_paths, cut_with_small_boundary, decompose_balanced, decompose_bipartite_skew,
    class_surplus, verify_paths_leaf_dichotomy, CutPartition, DichotomyWitness, TreeDecomposition,
};

use crate::error::{Error, Result};
use crate::graph::Graph;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use std::fmt::Write as _;

/// A tree on vertices `0..n`. Validity (n-1 edges, connected, acyclic) is
/// checked on construction, so every `Tree` value is a tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tree {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

/// Bipartition and degree summary of a tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TreeProfile {
    pub n: usize,
    pub t1: usize,
    pub t2: usize,
    pub max_degree: usize,
    pub leaf_count: usize,
}

#[derive(Serialize, Deserialize)]
struct TreeJson {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl Tree {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidTree("a tree needs at least one vertex".into()));
        }
        if edges.len() != n - 1 {
            return Err(Error::InvalidTree(format!(
                "{} edges on {} vertices (expected {})",
                edges.len(),
                n,
                n - 1
            )));
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(Error::InvalidTree(format!("edge ({u},{v}) out of range 0..{n}")));
            }
            if u == v {
                return Err(Error::InvalidTree(format!("loop at {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        // n-1 edges + connected => acyclic
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        if count != n {
            return Err(Error::InvalidTree("edge set is not connected".into()));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Self { n, edges, adj })
    }

    pub fn single_vertex() -> Self {
        Self::new(1, vec![]).expect("K1 is a tree")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.adj[v].len() == 1
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.is_leaf(v)).collect()
    }

    /// Side (0 or 1) of every vertex in the unique proper 2-colouring with vertex 0 on side 0.
    pub fn sides(&self) -> Vec<u8> {
        let mut side = vec![u8::MAX; self.n];
        side[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if side[v] == u8::MAX {
                    side[v] = 1 - side[u];
                    queue.push_back(v);
                }
            }
        }
        side
    }

    /// Which side is the larger bipartition class (ties go to vertex 0's side).
    pub fn large_side(&self) -> u8 {
        let sides = self.sides();
        let ones = sides.iter().filter(|&&s| s == 1).count();
        if ones > self.n - ones {
            1
        } else {
            0
        }
    }

    /// `true` for vertices in the larger class (`V1`), `false` for the smaller (`V2`).
    pub fn in_large_class(&self) -> Vec<bool> {
        let big = self.large_side();
        self.sides().into_iter().map(|s| s == big).collect()
    }

    pub fn profile(&self) -> TreeProfile {
        let sides = self.sides();
        let ones = sides.iter().filter(|&&s| s == 1).count();
        let zeros = self.n - ones;
        TreeProfile {
            n: self.n,
            t1: zeros.max(ones),
            t2: zeros.min(ones),
            max_degree: self.max_degree(),
            leaf_count: self.leaves().len(),
        }
    }

    pub fn to_graph(&self) -> Graph {
        Graph::from_edges(self.n, &self.edges)
    }

    /// BFS order from `root` together with each vertex's parent (`usize::MAX` for the root).
    pub fn bfs_order(&self, root: usize) -> (Vec<usize>, Vec<usize>) {
        let mut parent = vec![usize::MAX; self.n];
        let mut order = Vec::with_capacity(self.n);
        let mut seen = vec![false; self.n];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        (order, parent)
    }

    /// Components of the forest obtained by deleting `removed`, as vertex lists.
    pub fn components_without(&self, removed: &[usize]) -> Vec<Vec<usize>> {
        let mut gone = vec![false; self.n];
        for &r in removed {
            gone[r] = true;
        }
        let mut seen = gone.clone();
        let mut comps = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                    }
                }
            }
            comps.push(comp);
        }
        comps
    }

    /// Whether the subgraph induced by `vertices` is connected (and so a subtree).
    pub fn induces_subtree(&self, vertices: &[usize]) -> bool {
        if vertices.is_empty() {
            return false;
        }
        let mut inside = vec![false; self.n];
        for &v in vertices {
            inside[v] = true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![vertices[0]];
        seen[vertices[0]] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.adj[u] {
                if inside[v] && !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == vertices.len()
    }

    /// Induced subtree on `vertices`, relabelled in the given order.
    pub fn induced_subtree(&self, vertices: &[usize]) -> Result<Tree> {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| (index[u], index[v]))
            .collect();
        Tree::new(vertices.len(), edges)
    }

    // ---- generators ----

    pub fn path(n: usize) -> Result<Tree> {
        Tree::new(n, (1..n).map(|i| (i - 1, i)).collect())
    }

    /// The star `K_{1,leaves}` with centre 0.
    pub fn star(leaves: usize) -> Tree {
        Tree::new(leaves + 1, (1..=leaves).map(|i| (0, i)).collect()).expect("stars are trees")
    }

    /// Centre 0 with `legs` paths of `leg_len` edges each.
    pub fn spider(legs: usize, leg_len: usize) -> Tree {
        let mut edges = Vec::new();
        let mut next = 1;
        for _ in 0..legs {
            let mut prev = 0;
            for _ in 0..leg_len {
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
        }
        Tree::new(next, edges).expect("spiders are trees")
    }

    /// A path on `path_len` vertices with `leaves` extra leaves on its last vertex.
    pub fn broom(path_len: usize, leaves: usize) -> Result<Tree> {
        if path_len == 0 {
            return Err(Error::InvalidInput("broom handle needs a vertex".into()));
        }
        let mut edges: Vec<_> = (1..path_len).map(|i| (i - 1, i)).collect();
        for j in 0..leaves {
            edges.push((path_len - 1, path_len + j));
        }
        Tree::new(path_len + leaves, edges)
    }

    /// Double star `D_{a,b}`: adjacent centres with `a-1` and `b-1` pendant leaves.
    pub fn double_star(a: usize, b: usize) -> Result<Tree> {
        if a == 0 || b == 0 {
            return Err(Error::InvalidInput("double star sides must be positive".into()));
        }
        let mut edges = vec![(0, 1)];
        let mut next = 2;
        for _ in 1..a {
            edges.push((0, next));
            next += 1;
        }
        for _ in 1..b {
            edges.push((1, next));
            next += 1;
        }
        Tree::new(next, edges)
    }

    /// Decodes a Prüfer sequence over `0..n` where `n = code.len() + 2`.
    pub fn from_prufer(code: &[usize]) -> Result<Tree> {
        let n = code.len() + 2;
        if let Some(&bad) = code.iter().find(|&&c| c >= n) {
            return Err(Error::InvalidInput(format!("prufer entry {bad} out of range 0..{n}")));
        }
        let mut degree = vec![1usize; n];
        for &c in code {
            degree[c] += 1;
        }
        let mut leaves: std::collections::BTreeSet<usize> =
            (0..n).filter(|&v| degree[v] == 1).collect();
        let mut edges = Vec::with_capacity(n - 1);
        for &c in code {
            let leaf = *leaves.iter().next().expect("a leaf always exists");
            leaves.remove(&leaf);
            edges.push((leaf, c));
            degree[c] -= 1;
            if degree[c] == 1 {
                leaves.insert(c);
            }
        }
        let rest: Vec<usize> = leaves.into_iter().collect();
        edges.push((rest[0], rest[1]));
        Tree::new(n, edges)
    }

    /// Uniform labelled tree on `n` vertices (random Prüfer code).
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Tree {
        match n {
            0 | 1 => Tree::single_vertex(),
            2 => Tree::new(2, vec![(0, 1)]).expect("edge"),
            _ => {
                let code: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
                Tree::from_prufer(&code).expect("valid prufer code")
            }
        }
    }

    /// All trees on `n` vertices up to isomorphism, one representative each.
    pub fn all_unlabelled(n: usize) -> Vec<Tree> {
        if n <= 2 {
            return vec![Tree::path(n.max(1)).expect("path")];
        }
        let mut seen = std::collections::BTreeMap::new();
        let mut code = vec![0usize; n - 2];
        loop {
            let t = Tree::from_prufer(&code).expect("valid code");
            seen.entry(t.canonical_form()).or_insert(t);
            let mut i = 0;
            loop {
                if i == code.len() {
                    return seen.into_values().collect();
                }
                code[i] += 1;
                if code[i] < n {
                    break;
                }
                code[i] = 0;
                i += 1;
            }
        }
    }

    /// Isomorphism-invariant string (AHU encoding rooted at the centre, the
    /// lexicographically smaller of the two encodings for bicentral trees).
    pub fn canonical_form(&self) -> String {
        self.centres()
            .into_iter()
            .map(|c| self.ahu(c, usize::MAX))
            .min()
            .expect("a tree has a centre")
    }

    /// AHU encoding of the tree rooted at `root`; equal strings mean some
    /// automorphism maps one root to the other.
    pub fn rooted_form(&self, root: usize) -> String {
        self.ahu(root, usize::MAX)
    }

    fn ahu(&self, v: usize, parent: usize) -> String {
        let mut kids: Vec<String> = self.adj[v]
            .iter()
            .filter(|&&w| w != parent)
            .map(|&w| self.ahu(w, v))
            .collect();
        kids.sort();
        format!("({})", kids.concat())
    }

    fn centres(&self) -> Vec<usize> {
        if self.n <= 2 {
            return (0..self.n).collect();
        }
        let mut degree: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        let mut layer: Vec<usize> = (0..self.n).filter(|&v| degree[v] == 1).collect();
        let mut remaining = self.n;
        while remaining > 2 {
            remaining -= layer.len();
            let mut next = Vec::new();
            for &leaf in &layer {
                for &w in &self.adj[leaf] {
                    if degree[w] > 1 {
                        degree[w] -= 1;
                        if degree[w] == 1 {
                            next.push(w);
                        }
                    }
                }
                degree[leaf] = 0;
            }
            layer = next;
        }
        layer
    }

    // ---- I/O ----

    /// Text format: first line `n`, then one `u v` line per edge.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for &(u, v) in &self.edges {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Tree> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let n: usize = lines
            .next()
            .ok_or_else(|| Error::Parse("empty tree file".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("vertex count: {e}")))?;
        let mut edges = Vec::new();
        for line in lines {
            let mut it = line.split_whitespace();
            let mut next = || -> Result<usize> {
                it.next()
                    .ok_or_else(|| Error::Parse(format!("bad edge line `{line}`")))?
                    .parse()
                    .map_err(|e| Error::Parse(format!("bad edge line `{line}`: {e}")))
            };
            let u = next()?;
            let v = next()?;
            edges.push((u, v));
        }
        Tree::new(n, edges)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(TreeJson {
            n: self.n,
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
        })
        .expect("serializable")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Tree> {
        let parsed: TreeJson =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        Tree::new(parsed.n, parsed.edges.into_iter().map(|[u, v]| (u, v)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_non_trees() {
        assert!(Tree::new(3, vec![(0, 1)]).is_err());
        assert!(Tree::new(4, vec![(0, 1), (1, 0), (2, 3)]).is_err());
        assert!(Tree::new(3, vec![(0, 1), (1, 3)]).is_err());
        assert!(Tree::new(2, vec![(1, 1)]).is_err());
        assert!(Tree::new(0, vec![]).is_err());
    }

    #[test]
    fn profile_examples() {
        let edge = Tree::path(2).unwrap().profile();
        assert_eq!((edge.t1, edge.t2, edge.max_degree, edge.leaf_count), (1, 1, 1, 2));
        let p5 = Tree::path(5).unwrap().profile();
        assert_eq!((p5.t1, p5.t2, p5.max_degree, p5.leaf_count), (3, 2, 2, 2));
    }

    #[test]
    fn tree_counts_up_to_eight() {
        // OEIS A000055
        let counts: Vec<usize> = (1..=8).map(|n| Tree::all_unlabelled(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 3, 6, 11, 23]);
    }

    #[test]
    fn prufer_roundtrip_is_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..30 {
            let t = Tree::random(n, &mut rng);
            assert_eq!(t.n(), n);
            assert_eq!(t.edges().len(), n - 1);
        }
    }

    #[test]
    fn text_and_json_formats() {
        let t = Tree::spider(3, 2);
        assert_eq!(Tree::from_text(&t.to_text()).unwrap(), t);
        assert_eq!(Tree::from_json(&t.to_json()).unwrap(), t);
        assert!(Tree::from_text("3\n0 1\n").is_err());
        assert!(Tree::from_text("x").is_err());
    }

    #[test]
    fn canonical_form_ignores_labels() {
        let a = Tree::new(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        let b = Tree::new(4, vec![(3, 0), (0, 2), (2, 1)]).unwrap();
        let star = Tree::star(3);
        assert_eq!(a.canonical_form(), b.canonical_form());
        assert_ne!(a.canonical_form(), star.canonical_form());
    }
}
