use super::TwoColouring;
use crate::graph::{Graph, VertexSet};
use num_rational::Rational64;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Every pair is red independently with probability `red_prob` (compared exactly).
pub fn sample_random_colouring(n: usize, red_prob: Rational64, seed: u64) -> TwoColouring {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (num, den) = (*red_prob.numer(), *red_prob.denom());
    let mut red = Graph::empty(n);
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_range(0..den) < num {
                red.add_edge(u, v);
            }
        }
    }
    TwoColouring::from_red(red)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExpansionCheck {
    /// A `t`-set `U` with `|N_red(U) ∪ U| >= bound`, if one was found.
    pub violator: Option<Vec<usize>>,
    /// `true` when all `t`-sets were examined, `false` when sets were sampled.
    pub exhaustive: bool,
    pub sets_examined: u64,
}

fn binomial(n: usize, k: usize) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let mut acc: u64 = 1;
    for i in 0..k.min(n - k) {
        acc = acc.checked_mul((n - i) as u64)? / (i as u64 + 1);
    }
    Some(acc)
}

/// Searches for a `t`-set whose closed red neighbourhood has at least `bound` vertices.
/// Enumerates all sets when there are at most `max_sets`, otherwise samples that many.
pub fn check_neighbourhood_expansion(
    c: &TwoColouring,
    t: usize,
    bound: usize,
    max_sets: u64,
    seed: u64,
) -> ExpansionCheck {
    let n = c.n();
    let reach = |set: &[usize]| {
        let mut acc = VertexSet::from_iter_with_capacity(n, set.iter().copied());
        for &u in set {
            acc.union_with(&c.red_graph().neighbour_set(u));
        }
        acc.len()
    };
    if t > n {
        return ExpansionCheck { violator: None, exhaustive: true, sets_examined: 0 };
    }
    let total = binomial(n, t);
    if total.is_some_and(|x| x <= max_sets) {
        let mut idx: Vec<usize> = (0..t).collect();
        let mut examined = 0;
        loop {
            examined += 1;
            if reach(&idx) >= bound {
                return ExpansionCheck { violator: Some(idx), exhaustive: true, sets_examined: examined };
            }
            // next combination in lexicographic order
            let Some(i) = (0..t).rev().find(|&i| idx[i] < n - t + i) else {
                return ExpansionCheck { violator: None, exhaustive: true, sets_examined: examined };
            };
            idx[i] += 1;
            for j in (i + 1)..t {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for examined in 1..=max_sets {
        let mut set = sample(&mut rng, n, t).into_vec();
        set.sort_unstable();
        if reach(&set) >= bound {
            return ExpansionCheck { violator: Some(set), exhaustive: false, sets_examined: examined };
        }
    }
    ExpansionCheck { violator: None, exhaustive: false, sets_examined: max_sets }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extremes_of_probability() {
        assert_eq!(sample_random_colouring(6, Rational64::from_integer(1), 1), TwoColouring::all_red(6));
        assert_eq!(sample_random_colouring(6, Rational64::from_integer(0), 1), TwoColouring::all_blue(6));
    }

    #[test]
    fn red_count_is_binomial() {
        let c = sample_random_colouring(50, Rational64::new(9, 10), 7);
        let pairs = 50.0 * 49.0 / 2.0;
        let mean = 0.9 * pairs;
        let sd = (pairs * 0.9 * 0.1f64).sqrt();
        let got = c.red_graph().edge_count() as f64;
        assert!((got - mean).abs() <= 4.0 * sd, "{got} vs {mean}");
        assert_eq!(c, sample_random_colouring(50, Rational64::new(9, 10), 7));
    }

    #[test]
    fn expansion_examples() {
        let blue = TwoColouring::all_blue(8);
        let r = check_neighbourhood_expansion(&blue, 3, 4, 1_000_000, 0);
        assert!(r.violator.is_none() && r.exhaustive);
        let red = TwoColouring::all_red(10);
        let r = check_neighbourhood_expansion(&red, 1, 10, 1_000_000, 0);
        assert_eq!(r.violator, Some(vec![0]));
        let g = sample_random_colouring(40, Rational64::new(9, 10), 3);
        let r = check_neighbourhood_expansion(&g, 3, 40, 1_000_000, 0);
        assert!(r.exhaustive);
        if let Some(u) = r.violator {
            let mut acc = VertexSet::from_iter_with_capacity(40, u.iter().copied());
            for &x in &u {
                acc.union_with(&g.red_graph().neighbour_set(x));
            }
            assert!(acc.len() >= 40);
        }
    }
}
