use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use treeramsey::colouring::{Colour, TwoColouring};
use treeramsey::embed::{contains_tree, decide_arrows, permutation_oracle, verify_embedding, Arrow, Search};
use treeramsey::graph::Graph;
use treeramsey::ramsey::{lower_bound, ramsey_exact};
use treeramsey::tree::Tree;

fn colouring_from_mask(n: usize, mask: u32) -> TwoColouring {
    let mut red = Graph::empty(n);
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> bit & 1 == 1 {
                red.add_edge(u, v);
            }
            bit += 1;
        }
    }
    TwoColouring::from_red(red)
}

fn avoids(c: &TwoColouring, t: &Tree, s: &Tree) -> bool {
    !permutation_oracle(&c.graph(Colour::Red), t) && !permutation_oracle(&c.graph(Colour::Blue), s)
}

/// Smallest `N <= nmax` where every colouring of `K_N` contains red `t` or blue `s`.
fn brute_ramsey(t: &Tree, s: &Tree, nmax: usize) -> Option<usize> {
    (1..=nmax).find(|&n| {
        let pairs = n * (n - 1) / 2;
        (0..1u32 << pairs).all(|m| !avoids(&colouring_from_mask(n, m), t, s))
    })
}

#[test]
fn small_ramsey_numbers_match_brute_force() {
    let trees: Vec<Tree> = (2..=4).flat_map(Tree::all_unlabelled).collect();
    for t in &trees {
        for s in &trees {
            let exact = ramsey_exact(t, s, 6, 10_000_000);
            assert!(!exact.budget_exhausted);
            assert_eq!(exact.value, brute_ramsey(t, s, 6), "{} vs {}", t.canonical_form(), s.canonical_form());
            if let Some(cert) = &exact.certificate {
                assert!(avoids(&cert.colouring, t, s));
            }
            if t.n() >= 2 && s.n() >= 2 {
                let lb = lower_bound(&t.profile(), &s.profile());
                if let (Ok(lb), Some(r)) = (lb, exact.value) {
                    assert!(lb <= r);
                }
            }
        }
    }
}

fn random_tree(n: usize, seed: u64) -> Tree {
    Tree::random(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tree_serializations_round_trip(n in 1usize..40, seed: u64) {
        let t = random_tree(n, seed);
        prop_assert_eq!(&Tree::from_json(&t.to_json()).unwrap(), &t);
        prop_assert_eq!(&Tree::from_text(&t.to_text()).unwrap(), &t);
        let sides = t.sides();
        prop_assert!(t.edges().iter().all(|&(u, v)| sides[u] != sides[v]));
    }

    #[test]
    fn colouring_json_round_trips(n in 1usize..9, mask: u32) {
        let c = colouring_from_mask(n, mask);
        prop_assert_eq!(TwoColouring::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn search_agrees_with_oracle(n in 2usize..8, k in 1usize..6, mask: u32, seed: u64) {
        let host = colouring_from_mask(n, mask).graph(Colour::Red).into_owned();
        let t = random_tree(k, seed);
        let out = contains_tree(&host, &t, 1_000_000);
        match out.search {
            Search::Found(e) => prop_assert!(verify_embedding(&host, &t, &e)),
            Search::No => prop_assert!(!permutation_oracle(&host, &t)),
            Search::Unknown => prop_assert!(false, "budget too small"),
        }
    }

    #[test]
    fn arrows_agree_with_oracle(n in 2usize..7, mask: u32, a in 2usize..5, b in 2usize..5, seed: u64) {
        let c = colouring_from_mask(n, mask);
        let t = random_tree(a, seed);
        let s = random_tree(b, seed.wrapping_add(1));
        match decide_arrows(&c, &t, &s, 1_000_000) {
            Arrow::Neither => prop_assert!(avoids(&c, &t, &s)),
            Arrow::Unknown => prop_assert!(false, "budget too small"),
            _ => prop_assert!(!avoids(&c, &t, &s)),
        }
    }
}
