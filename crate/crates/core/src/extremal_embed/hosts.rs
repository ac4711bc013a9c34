use crate::graph::Graph;
use crate::tree::Tree;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `K_m` where each `(v, d)` in `low` keeps only `d` random neighbours,
/// minus random noise. Every other vertex loses at most
/// `max(noise_degree, low.len())` edges.
pub fn almost_complete_host(m: usize, noise_degree: usize, low: &[(usize, usize)], seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::complete(m);
    let mut removed = vec![0usize; m];
    for &(v, d) in low {
        let mut nb: Vec<usize> = g.neighbours(v).collect();
        nb.shuffle(&mut rng);
        for &u in nb.iter().skip(d) {
            g.remove_edge(v, u);
            removed[u] = removed[u].saturating_add(1);
        }
        removed[v] = usize::MAX;
    }
    let order: Vec<usize> = (0..m).filter(|&v| removed[v] != usize::MAX).collect();
    remove_noise(&mut g, order, noise_degree, &mut removed, &mut rng);
    g
}

/// `K_{u1,u2}` (classes `0..u1` and `u1..u1+u2`) minus a random graph of
/// maximum degree `noise_degree`.
pub fn almost_complete_bipartite_host(u1: usize, u2: usize, noise_degree: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::empty(u1 + u2);
    for a in 0..u1 {
        for b in u1..u1 + u2 {
            g.add_edge(a, b);
        }
    }
    let mut removed = vec![0usize; u1 + u2];
    remove_noise(&mut g, (0..u1 + u2).collect(), noise_degree, &mut removed, &mut rng);
    g
}

/// Removes edges between vertices of `order` while both have lost fewer than `noise_degree`.
fn remove_noise<R: Rng>(g: &mut Graph, mut order: Vec<usize>, noise_degree: usize, removed: &mut [usize], rng: &mut R) {
    for _ in 0..noise_degree {
        order.shuffle(rng);
        for &v in &order {
            if removed[v] >= noise_degree {
                continue;
            }
            let cands: Vec<usize> = g.neighbours(v).filter(|&u| removed[u] < noise_degree).collect();
            if let Some(&u) = cands.choose(rng) {
                g.remove_edge(v, u);
                removed[v] += 1;
                removed[u] += 1;
            }
        }
    }
}

/// A tree on exactly `n` vertices with maximum degree at most `max_degree`
/// (at least 2): a random skeleton on about `n / 5` vertices whose edges are
/// subdivided, so it has many bare paths.
pub fn subdivided_tree(n: usize, max_degree: usize, seed: u64) -> Tree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_degree = max_degree.max(2);
    let k = (n / 5).max(1);
    let mut deg = vec![0usize; k];
    let mut skeleton = Vec::new();
    for v in 1..k {
        let cands: Vec<usize> = (0..v).filter(|&u| deg[u] < max_degree).collect();
        let &u = cands.choose(&mut rng).expect("the newest vertex has spare degree");
        deg[u] += 1;
        deg[v] += 1;
        skeleton.push((u, v));
    }
    let spare = n - k;
    let mut lens = vec![0usize; skeleton.len()];
    for i in 0..spare {
        if skeleton.is_empty() {
            break;
        }
        lens[i % skeleton.len()] += 1;
    }
    let mut edges = Vec::new();
    let mut next = k;
    for (&(u, v), &len) in skeleton.iter().zip(&lens) {
        let mut prev = u;
        for _ in 0..len {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        edges.push((prev, v));
    }
    // only when the skeleton is a single vertex
    let mut prev = 0;
    while next < n {
        edges.push((prev, next));
        prev = next;
        next += 1;
    }
    Tree::new(n, edges).expect("subdivided trees are trees")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_hosts() {
        let g = almost_complete_host(50, 3, &[(4, 7)], 1);
        assert_eq!(g.degree(4), 7);
        assert!((0..50).filter(|&v| v != 4).all(|v| g.degree(v) + 4 >= 49));
        let b = almost_complete_bipartite_host(10, 12, 2, 1);
        assert!((0..10).all(|v| b.degree(v) + 2 >= 12 && b.neighbours(v).all(|u| u >= 10)));
        for (n, d) in [(1, 3), (2, 3), (7, 2), (100, 3), (333, 4)] {
            let t = subdivided_tree(n, d, 9);
            assert_eq!(t.n(), n);
            assert!(t.max_degree() <= d.max(2));
        }
    }
}
