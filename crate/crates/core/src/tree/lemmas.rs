use super::Tree;
use crate::error::{Error, Result};
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

/// Two subtrees covering the tree and sharing exactly one vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TreeDecomposition {
    pub part1: Vec<usize>,
    pub part2: Vec<usize>,
    pub shared_vertex: usize,
}

impl TreeDecomposition {
    pub fn verify(&self, tree: &Tree) -> bool {
        let mut count = vec![0u8; tree.n()];
        for &v in self.part1.iter().chain(&self.part2) {
            if v >= tree.n() {
                return false;
            }
            count[v] += 1;
        }
        (0..tree.n()).all(|v| {
            let want = if v == self.shared_vertex { 2 } else { 1 };
            count[v] == want
        }) && tree.induces_subtree(&self.part1)
            && tree.induces_subtree(&self.part2)
    }
}

/// `set_a` induces a subtree and meets `set_b` only through the edges at `boundary`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CutPartition {
    pub set_a: Vec<usize>,
    pub set_b: Vec<usize>,
    pub boundary: Vec<usize>,
}

impl CutPartition {
    pub fn verify(&self, tree: &Tree) -> bool {
        let n = tree.n();
        let mut side = vec![u8::MAX; n];
        for &v in &self.set_a {
            if v >= n || side[v] != u8::MAX {
                return false;
            }
            side[v] = 0;
        }
        for &v in &self.set_b {
            if v >= n || side[v] != u8::MAX {
                return false;
            }
            side[v] = 1;
        }
        if side.contains(&u8::MAX) || self.boundary.len() > 2 {
            return false;
        }
        if self.boundary.iter().any(|&b| b >= n || side[b] != 0) {
            return false;
        }
        if let [x, y] = self.boundary[..] {
            if x == y || tree.neighbours(x).contains(&y) {
                return false;
            }
        }
        tree.induces_subtree(&self.set_a)
            && tree.edges().iter().all(|&(u, v)| {
                side[u] == side[v] || self.boundary.contains(&u) || self.boundary.contains(&v)
            })
    }
}

/// Outcome of the paths-or-leaves dichotomy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "kind")]
pub enum DichotomyWitness {
    Leaves { leaves: Vec<usize> },
    BarePaths { paths: Vec<Vec<usize>> },
}

/// Maximal chains: vertex sequences whose interior vertices all have degree 2
/// and whose ends do not. A chain with a leaf end starts at that leaf.
pub(crate) fn chains(tree: &Tree) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for start in 0..tree.n() {
        if tree.degree(start) == 2 {
            continue;
        }
        for &first in tree.neighbours(start) {
            let mut chain = vec![start, first];
            let (mut prev, mut cur) = (start, first);
            while tree.degree(cur) == 2 {
                let next = tree.neighbours(cur).iter().copied().find(|&w| w != prev).unwrap();
                chain.push(next);
                prev = cur;
                cur = next;
            }
            let end = cur;
            let keep = match (tree.is_leaf(start), tree.is_leaf(end)) {
                (true, false) => true,
                (false, true) => false,
                _ => start < end,
            };
            if keep {
                out.push(chain);
            }
        }
    }
    out
}

/// Vertex-disjoint bare paths with `k` edges, taken greedily along maximal chains.
pub fn bare_paths(tree: &Tree, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return Vec::new();
    }
    let mut used = vec![false; tree.n()];
    let mut out = Vec::new();
    for chain in chains(tree) {
        let mut i = 0;
        while i + k < chain.len() {
            let window = &chain[i..=i + k];
            if let Some(pos) = window.iter().rposition(|&v| used[v]) {
                i += pos + 1;
                continue;
            }
            for &v in window {
                used[v] = true;
            }
            out.push(window.to_vec());
            i += k + 1;
        }
    }
    out
}

/// Returns at least `ell` leaves, or at least `n/(k+1) - (2 ell - 2)` disjoint bare paths of length `k`.
pub fn verify_paths_leaf_dichotomy(tree: &Tree, k: usize, ell: usize) -> Result<DichotomyWitness> {
    if k == 0 || ell == 0 {
        return Err(Error::InvalidInput("k and ell must be positive".into()));
    }
    let leaves = tree.leaves();
    if leaves.len() >= ell {
        return Ok(DichotomyWitness::Leaves { leaves });
    }
    let paths = bare_paths(tree, k);
    // |P| >= n/(k+1) - (2 ell - 2)  <=>  (|P| + 2 ell - 2)(k+1) >= n
    if (paths.len() + 2 * ell - 2) * (k + 1) >= tree.n() {
        Ok(DichotomyWitness::BarePaths { paths })
    } else {
        Err(Error::Internal(format!(
            "{} leaves < {ell} and only {} bare paths of length {k} on {} vertices",
            leaves.len(),
            paths.len(),
            tree.n()
        )))
    }
}

/// Subset-sum table over possibly negative integer weights, with traceback.
struct SubsetSum {
    weights: Vec<i64>,
    offset: i64,
    // table[i][s]: sum s - offset reachable from the first i items
    table: Vec<Vec<bool>>,
}

impl SubsetSum {
    fn new(weights: &[i64]) -> Self {
        let neg: i64 = weights.iter().filter(|&&w| w < 0).sum();
        let pos: i64 = weights.iter().filter(|&&w| w > 0).sum();
        let offset = -neg;
        let width = (pos - neg + 1) as usize;
        let mut table = vec![vec![false; width]; weights.len() + 1];
        table[0][offset as usize] = true;
        for (i, &w) in weights.iter().enumerate() {
            for s in 0..width {
                if table[i][s] {
                    table[i + 1][s] = true;
                    table[i + 1][(s as i64 + w) as usize] = true;
                }
            }
        }
        Self {
            weights: weights.to_vec(),
            offset,
            table,
        }
    }

    fn reachable(&self, sum: i64) -> bool {
        let s = sum + self.offset;
        s >= 0
            && (s as usize) < self.table[0].len()
            && self.table[self.weights.len()][s as usize]
    }

    fn sums(&self) -> Vec<i64> {
        (0..self.table[0].len() as i64)
            .map(|s| s - self.offset)
            .filter(|&s| self.reachable(s))
            .collect()
    }

    /// Which items to take to hit `sum` (must be reachable).
    fn select(&self, sum: i64) -> Vec<bool> {
        let mut take = vec![false; self.weights.len()];
        let mut s = sum + self.offset;
        for i in (0..self.weights.len()).rev() {
            if self.table[i][s as usize] {
                continue;
            }
            take[i] = true;
            s -= self.weights[i];
        }
        take
    }
}

fn split_parts(tree: &Tree, v: usize, comps: &[Vec<usize>], take: &[bool]) -> (Vec<usize>, Vec<usize>) {
    let mut a = vec![v];
    let mut b = vec![v];
    for (comp, &t) in comps.iter().zip(take) {
        if t {
            a.extend(comp);
        } else {
            b.extend(comp);
        }
    }
    debug_assert!(tree.induces_subtree(&a) && tree.induces_subtree(&b));
    a.sort_unstable();
    b.sort_unstable();
    (a, b)
}

/// Split into two subtrees sharing one vertex with sizes in `[ceil(n/3), ceil(2n/3)]`.
/// Picks the split minimizing the larger part, smallest shared vertex on ties.
pub fn decompose_balanced(tree: &Tree) -> Result<TreeDecomposition> {
    let n = tree.n();
    if n < 2 {
        return Err(Error::InvalidInput("balanced split needs n >= 2".into()));
    }
    let mut best: Option<(usize, TreeDecomposition)> = None;
    for v in 0..n {
        let comps = tree.components_without(&[v]);
        let sizes: Vec<i64> = comps.iter().map(|c| c.len() as i64).collect();
        let table = SubsetSum::new(&sizes);
        // part sizes are s + 1 and n - s
        let s = table
            .sums()
            .into_iter()
            .min_by_key(|&s| (s + 1).max(n as i64 - s))
            .expect("empty sum is reachable");
        let larger = ((s + 1).max(n as i64 - s)) as usize;
        if best.as_ref().is_some_and(|(b, _)| *b <= larger) {
            continue;
        }
        let (a, b) = split_parts(tree, v, &comps, &table.select(s));
        let (part1, part2) = if a.len() <= b.len() { (a, b) } else { (b, a) };
        best = Some((
            larger,
            TreeDecomposition {
                part1,
                part2,
                shared_vertex: v,
            },
        ));
    }
    let (_, dec) = best.expect("n >= 2");
    let (lo, hi) = (n.div_ceil(3), (2 * n).div_ceil(3));
    let ok = |len: usize| (lo..=hi).contains(&len);
    if ok(dec.part1.len()) && ok(dec.part2.len()) && dec.verify(tree) {
        Ok(dec)
    } else {
        Err(Error::Internal(format!("no balanced split found for n = {n}")))
    }
}

/// Split whose first part has large-minus-small class surplus in `[10 mu n, 25 mu n]`.
pub fn decompose_bipartite_skew(tree: &Tree, mu: Rational64) -> Result<TreeDecomposition> {
    let p = tree.profile();
    if mu <= Rational64::from_integer(0) || mu >= Rational64::from_integer(1) {
        return Err(Error::InvalidInput(format!("mu = {mu} outside (0, 1)")));
    }
    if 10 * p.t1 < 11 * p.t2 {
        return Err(Error::NotFound(format!(
            "profile ({}, {}) is not skewed enough (need t1 >= 1.1 t2)",
            p.t1, p.t2
        )));
    }
    let n = Rational64::from_integer(p.n as i64);
    let lo = (mu * n * 10).ceil().to_integer();
    let hi = (mu * n * 25).floor().to_integer();
    let large = tree.in_large_class();
    let sign = |v: usize| if large[v] { 1i64 } else { -1 };
    for v in 0..tree.n() {
        let comps = tree.components_without(&[v]);
        let skews: Vec<i64> = comps.iter().map(|c| c.iter().map(|&u| sign(u)).sum()).collect();
        let table = SubsetSum::new(&skews);
        let hit = (lo..=hi).find(|&target| table.reachable(target - sign(v)));
        if let Some(target) = hit {
            let (part1, part2) = split_parts(tree, v, &comps, &table.select(target - sign(v)));
            return Ok(TreeDecomposition {
                part1,
                part2,
                shared_vertex: v,
            });
        }
    }
    Err(Error::NotFound(format!(
        "no split with surplus in [{lo}, {hi}] on {} vertices",
        p.n
    )))
}

/// Surplus of large-class over small-class vertices in `part`.
pub fn class_surplus(tree: &Tree, part: &[usize]) -> i64 {
    let large = tree.in_large_class();
    part.iter().map(|&v| if large[v] { 1 } else { -1 }).sum()
}

/// Cut with an independent boundary of at most two vertices and both sides of
/// size at most `(2/3 - eps) n`. Singletons are tried before pairs.
pub fn cut_with_small_boundary(tree: &Tree, eps: Rational64) -> Result<CutPartition> {
    let n = tree.n();
    let cap = ((Rational64::new(2, 3) - eps) * Rational64::from_integer(n as i64))
        .floor()
        .to_integer();
    if cap < 1 {
        return Err(Error::NotFound(format!("size bound below 1 at n = {n}")));
    }
    let cap = cap as usize;
    let fits = |a: usize| a <= cap && n - a <= cap;

    for x in 0..n {
        let comps = tree.components_without(&[x]);
        let sizes: Vec<i64> = comps.iter().map(|c| c.len() as i64).collect();
        let table = SubsetSum::new(&sizes);
        if let Some(s) = table.sums().into_iter().find(|&s| fits(s as usize + 1)) {
            let take = table.select(s);
            return Ok(assemble_cut(vec![x], vec![], &comps, &take));
        }
    }

    for x in 0..n {
        for y in (x + 1)..n {
            if tree.neighbours(x).contains(&y) {
                continue;
            }
            let comps = tree.components_without(&[x, y]);
            let mut forced = Vec::new();
            let mut free = Vec::new();
            for comp in comps {
                let touches = |z: usize| comp.iter().any(|&u| tree.neighbours(u).contains(&z));
                if touches(x) && touches(y) {
                    forced.extend(comp);
                } else {
                    free.push(comp);
                }
            }
            let base = 2 + forced.len();
            let sizes: Vec<i64> = free.iter().map(|c| c.len() as i64).collect();
            let table = SubsetSum::new(&sizes);
            if let Some(s) = table.sums().into_iter().find(|&s| fits(base + s as usize)) {
                let take = table.select(s);
                return Ok(assemble_cut(vec![x, y], forced, &free, &take));
            }
        }
    }
    Err(Error::NotFound(format!(
        "no cut with boundary <= 2 and sides <= {cap} on {n} vertices"
    )))
}

fn assemble_cut(boundary: Vec<usize>, forced: Vec<usize>, comps: &[Vec<usize>], take: &[bool]) -> CutPartition {
    let mut set_a: Vec<usize> = boundary.iter().copied().chain(forced).collect();
    let mut set_b = Vec::new();
    for (comp, &t) in comps.iter().zip(take) {
        if t {
            set_a.extend(comp);
        } else {
            set_b.extend(comp);
        }
    }
    set_a.sort_unstable();
    set_b.sort_unstable();
    CutPartition {
        set_a,
        set_b,
        boundary,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::make_caterpillar;

    fn disjoint(paths: &[Vec<usize>]) -> bool {
        let mut all: Vec<usize> = paths.concat();
        let len = all.len();
        all.sort_unstable();
        all.dedup();
        all.len() == len
    }

    fn is_bare(tree: &Tree, path: &[usize]) -> bool {
        path.windows(2).all(|w| tree.neighbours(w[0]).contains(&w[1]))
            && path[1..path.len() - 1].iter().all(|&v| tree.degree(v) == 2)
    }

    #[test]
    fn bare_path_examples() {
        let p9 = Tree::path(9).unwrap();
        assert_eq!(bare_paths(&p9, 4).len(), 1);
        assert_eq!(bare_paths(&Tree::path(10).unwrap(), 4).len(), 2);
        assert!(bare_paths(&Tree::star(5), 4).is_empty());
        let spider = Tree::spider(3, 5);
        let paths = bare_paths(&spider, 4);
        assert_eq!(paths.len(), 3);
        assert!(disjoint(&paths));
        assert!(paths.iter().all(|p| p.len() == 5 && is_bare(&spider, p)));
    }

    #[test]
    fn dichotomy_examples() {
        match verify_paths_leaf_dichotomy(&Tree::path(20).unwrap(), 4, 3).unwrap() {
            DichotomyWitness::BarePaths { paths } => assert_eq!(paths.len(), 4),
            other => panic!("{other:?}"),
        }
        match verify_paths_leaf_dichotomy(&Tree::star(9), 2, 5).unwrap() {
            DichotomyWitness::Leaves { leaves } => assert_eq!(leaves.len(), 9),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn balanced_examples() {
        let edge = decompose_balanced(&Tree::path(2).unwrap()).unwrap();
        assert_eq!((edge.part1.len(), edge.part2.len()), (1, 2));
        let p9 = decompose_balanced(&Tree::path(9).unwrap()).unwrap();
        assert_eq!((p9.part1.len(), p9.part2.len(), p9.shared_vertex), (5, 5, 4));
        let star = decompose_balanced(&Tree::star(8)).unwrap();
        assert_eq!((star.part1.len(), star.part2.len(), star.shared_vertex), (5, 5, 0));
    }

    #[test]
    fn skew_examples() {
        let mu = Rational64::new(1, 100);
        let broom = Tree::broom(10, 30).unwrap();
        let dec = decompose_bipartite_skew(&broom, mu).unwrap();
        assert!(dec.verify(&broom));
        let s = class_surplus(&broom, &dec.part1);
        assert!((4..=10).contains(&s), "surplus {s}");

        assert!(matches!(
            decompose_bipartite_skew(&Tree::path(10).unwrap(), mu),
            Err(Error::NotFound(_))
        ));

        let star = Tree::star(40);
        let dec = decompose_bipartite_skew(&star, mu).unwrap();
        assert!(dec.verify(&star));
        let s = class_surplus(&star, &dec.part1);
        assert!((5..=10).contains(&s), "surplus {s}");
    }

    #[test]
    fn cut_examples() {
        let eps = Rational64::new(1, 100);
        let p30 = Tree::path(30).unwrap();
        let cut = cut_with_small_boundary(&p30, eps).unwrap();
        assert!(cut.verify(&p30));
        assert!(cut.set_a.len() <= 19 && cut.set_b.len() <= 19);

        let star = Tree::star(5);
        if let Ok(cut) = cut_with_small_boundary(&star, eps) {
            assert!(cut.verify(&star));
        }
        assert!(matches!(
            cut_with_small_boundary(&Tree::path(3).unwrap(), eps),
            Err(Error::NotFound(_))
        ));
        // two vertices: {0} | {1} meets the bound
        let edge = Tree::path(2).unwrap();
        assert!(cut_with_small_boundary(&edge, eps).unwrap().verify(&edge));
    }

    #[test]
    fn caterpillar_decomposes() {
        let cat = make_caterpillar(12, 5).unwrap();
        assert!(decompose_balanced(&cat).unwrap().verify(&cat));
    }
}
