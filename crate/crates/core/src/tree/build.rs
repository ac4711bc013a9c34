use super::Tree;
use crate::error::{Error, Result};

/// Caterpillar with bipartition classes `t1 >= t2`: a spine of `2*t2 - 1`
/// vertices with `t1 - t2 + 1` leaves spread over the spine's even positions.
pub fn make_caterpillar(t1: usize, t2: usize) -> Result<Tree> {
    if t2 == 0 || t1 < t2 {
        return Err(Error::InvalidInput(format!(
            "caterpillar needs t1 >= t2 >= 1, got ({t1}, {t2})"
        )));
    }
    let spine = 2 * t2 - 1;
    let mut edges: Vec<(usize, usize)> = (1..spine).map(|i| (i - 1, i)).collect();
    let mut degree = vec![0usize; spine];
    for &(u, v) in &edges {
        degree[u] += 1;
        degree[v] += 1;
    }
    let mut next = spine;
    for _ in 0..(t1 - t2 + 1) {
        let host = (0..spine)
            .step_by(2)
            .min_by_key(|&i| (degree[i], i))
            .expect("spine is nonempty");
        degree[host] += 1;
        edges.push((host, next));
        next += 1;
    }
    Tree::new(next, edges)
}

/// Attaches a new pendant leaf to `k` leaves of the larger class (smallest labels first).
pub fn pad_large_class(tree: &Tree, k: usize) -> Result<Tree> {
    let large = tree.in_large_class();
    let candidates: Vec<usize> = tree.leaves().into_iter().filter(|&v| large[v]).collect();
    if k > candidates.len() {
        return Err(Error::InvalidInput(format!(
            "asked to pad {k} leaves but the larger class has only {}",
            candidates.len()
        )));
    }
    let mut edges = tree.edges().to_vec();
    for (i, &leaf) in candidates.iter().take(k).enumerate() {
        edges.push((leaf, tree.n() + i));
    }
    Tree::new(tree.n() + k, edges)
}

/// Perfect ternary tree with `depth + 1` levels rooted at 0, labelled level by level.
pub fn make_perfect_ternary(depth: u32) -> Tree {
    let mut edges = Vec::new();
    let mut level = vec![0usize];
    let mut next = 1;
    for _ in 0..depth {
        let mut below = Vec::with_capacity(level.len() * 3);
        for &p in &level {
            for _ in 0..3 {
                edges.push((p, next));
                below.push(next);
                next += 1;
            }
        }
        level = below;
    }
    Tree::new(next, edges).expect("ternary construction is a tree")
}

/// Identifies the root of each glued tree with the matching leaf of `base`.
/// Base labels are kept; the other glued vertices are appended in order.
pub fn glue_trees(base: &Tree, leaf_list: &[usize], glued: &[(Tree, usize)]) -> Result<Tree> {
    if leaf_list.len() != glued.len() {
        return Err(Error::InvalidInput(format!(
            "{} attachment points for {} glued trees",
            leaf_list.len(),
            glued.len()
        )));
    }
    let mut seen = vec![false; base.n()];
    for &l in leaf_list {
        if l >= base.n() || base.degree(l) > 1 {
            return Err(Error::InvalidInput(format!("vertex {l} is not a leaf of the base")));
        }
        if std::mem::replace(&mut seen[l], true) {
            return Err(Error::InvalidInput(format!("leaf {l} listed twice")));
        }
    }
    let mut edges = base.edges().to_vec();
    let mut next = base.n();
    for (&leaf, (piece, root)) in leaf_list.iter().zip(glued) {
        if *root >= piece.n() {
            return Err(Error::InvalidInput(format!("root {root} out of range")));
        }
        let mut label = vec![0usize; piece.n()];
        for (v, slot) in label.iter_mut().enumerate() {
            if v == *root {
                *slot = leaf;
            } else {
                *slot = next;
                next += 1;
            }
        }
        edges.extend(piece.edges().iter().map(|&(u, v)| (label[u], label[v])));
    }
    Tree::new(next, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caterpillar_examples() {
        assert_eq!(make_caterpillar(1, 1).unwrap().n(), 2);
        let star = make_caterpillar(3, 1).unwrap().profile();
        assert_eq!((star.t1, star.t2, star.max_degree), (3, 1, 3));
        let c = make_caterpillar(5, 3).unwrap().profile();
        assert_eq!((c.n, c.t1, c.t2), (8, 5, 3));
        assert!(c.max_degree <= 3);
        assert!(make_caterpillar(2, 3).is_err());
    }

    #[test]
    fn padding() {
        let star = Tree::star(4);
        assert_eq!(pad_large_class(&star, 0).unwrap(), star);
        let p = pad_large_class(&star, 3).unwrap().profile();
        assert_eq!((p.t1, p.t2, p.max_degree), (4, 4, 4));
        // the 4-vertex path has a single leaf in its (tied) larger class
        assert!(pad_large_class(&Tree::path(4).unwrap(), 2).is_err());
        let q = pad_large_class(&Tree::path(4).unwrap(), 1).unwrap().profile();
        assert_eq!((q.n, q.t1, q.t2), (5, 3, 2));
    }

    #[test]
    fn ternary_sizes() {
        assert_eq!(make_perfect_ternary(0).n(), 1);
        let t1 = make_perfect_ternary(1);
        assert_eq!((t1.n(), t1.degree(0)), (4, 3));
        let t2 = make_perfect_ternary(2);
        assert_eq!((t2.n(), t2.leaves().len()), (13, 9));
        assert!((1..4).all(|v| t2.degree(v) == 4));
    }

    #[test]
    fn gluing() {
        let base = make_perfect_ternary(1);
        assert_eq!(glue_trees(&base, &[], &[]).unwrap(), base);
        let p4 = Tree::path(4).unwrap();
        let g = glue_trees(&base, &[1, 2, 3], &vec![(p4.clone(), 0); 3]).unwrap();
        assert_eq!(g.n(), 13);
        let same = glue_trees(&base, &[1, 2], &vec![(Tree::single_vertex(), 0); 2]).unwrap();
        assert_eq!(same, base);
        assert!(glue_trees(&base, &[0], &[(p4, 0)]).is_err());
    }
}
