//! Tree pairs whose Ramsey number exceeds the four-construction bound, the
//! structured host colourings that witness it, and exact oracles for those hosts.

use crate::colouring::{check_neighbourhood_expansion, sample_random_colouring, Colour, TwoColouring};
use crate::embed::{contains_mono, Search};
use crate::error::{Error, Result};
use crate::ramsey::{lower_bound, Certificate, Provenance};
use crate::tree::{glue_trees, make_caterpillar, make_perfect_ternary, Tree, TreeProfile};
use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

const MAX_C: usize = 8;

fn pow3(c: usize) -> usize {
    3usize.pow(c as u32)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum HostKind {
    /// Cliques on `U1`, `U2`, everything between `U1 ∪ U2` and `W`.
    CliquePair,
    /// Complete `U1`-`U2` and `(U1 ∪ U2)`-`W`.
    BipartitePair,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StructuredHost {
    pub kind: HostKind,
    pub u1_size: usize,
    pub u2_size: usize,
    pub w_size: usize,
}

impl StructuredHost {
    /// `U1 = 0..u1`, `U2` next, `W` last. The host graph is red, the rest blue.
    pub fn colouring(&self) -> TwoColouring {
        let (a, b) = (self.u1_size, self.u1_size + self.u2_size);
        let n = b + self.w_size;
        let part = |v: usize| usize::from(v >= a) + usize::from(v >= b);
        let mut c = TwoColouring::all_blue(n);
        for u in 0..n {
            for v in (u + 1)..n {
                let red = match (self.kind, part(u), part(v)) {
                    (_, 2, 2) => false,
                    (_, _, 2) => true,
                    (HostKind::CliquePair, x, y) => x == y,
                    (HostKind::BipartitePair, x, y) => x != y,
                };
                if red {
                    c.set_colour(u, v, Colour::Red);
                }
            }
        }
        c
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub t: Tree,
    pub s: Tree,
    pub host: StructuredHost,
    pub colouring: TwoColouring,
}

/// Rooted tree on `even + odd` vertices with `even` vertices at even distance
/// from the root, built from a caterpillar; root is a minimum-degree vertex of its class.
fn rooted_piece(even: usize, odd: usize) -> Result<(Tree, usize)> {
    let tree = make_caterpillar(even.max(odd), even.min(odd))?;
    let large = tree.in_large_class();
    let want_large = even >= odd;
    let root = (0..tree.n())
        .filter(|&v| large[v] == want_large)
        .min_by_key(|&v| (tree.degree(v), v))
        .expect("both classes are nonempty");
    Ok((tree, root))
}

/// Maximum degree of a piece once its root also meets its parent.
fn glued_degree(piece: &(Tree, usize)) -> usize {
    piece.0.max_degree().max(piece.0.degree(piece.1) + 1)
}

/// Vertices per parity class among the internal levels of the ternary backbone.
fn backbone_parities(c: usize) -> [usize; 2] {
    let mut out = [0, 0];
    for i in 0..c {
        out[i % 2] += pow3(i);
    }
    out
}

/// `k` values from `allowed` summing to `target`, if any.
fn pick_exact(allowed: &[usize], k: usize, target: usize) -> Option<Vec<usize>> {
    let mut reach = vec![vec![None::<usize>; target + 1]; k + 1];
    reach[0][0] = Some(0);
    for count in 0..k {
        for sum in 0..=target {
            if reach[count][sum].is_none() {
                continue;
            }
            for &e in allowed {
                if sum + e <= target && reach[count + 1][sum + e].is_none() {
                    reach[count + 1][sum + e] = Some(e);
                }
            }
        }
    }
    reach[k][target]?;
    let mut picks = Vec::with_capacity(k);
    let mut sum = target;
    for count in (1..=k).rev() {
        let e = reach[count][sum].expect("reconstructible");
        picks.push(e);
        sum -= e;
    }
    Some(picks)
}

/// The tree `T` and host of the additive counterexample family with `C` ternary levels
/// and glued pieces of size `2r`.
pub fn gen_thm13(c: usize, r: usize) -> Result<Instance> {
    if c == 0 || r == 0 || c > MAX_C {
        return Err(Error::Precondition(format!("need 1 <= C <= {MAX_C} and r >= 1, got C={c}, r={r}")));
    }
    let k = pow3(c);
    let half = (k - 1) / 2;
    let (t1, t2) = ((k + 1) * r, (k - 1) * r + half);
    let (tau1, tau2) = ((k + 1) * r, (2 * r) as i64 - half as i64);
    if tau2 <= 0 {
        return Err(Error::Infeasible(format!("tau2 = 2r - (3^C-1)/2 = {tau2} at C={c}, r={r}")));
    }
    let g = 2 * r;
    let pieces: Vec<(Tree, usize)> = (1..g).map(|e| rooted_piece(e, g - e)).collect::<Result<_>>()?;
    let costs: Vec<usize> = pieces.iter().map(glued_degree).collect();
    let inner = backbone_parities(c);
    let mut levels = costs.clone();
    levels.sort_unstable();
    levels.dedup();
    let mut choice = None;
    'outer: for &cap in &levels {
        let allowed: Vec<usize> = (1..g).filter(|&e| costs[e - 1] <= cap).collect();
        for class_size in [t1, t2] {
            if let Some(target) = class_size.checked_sub(inner[c % 2]) {
                if let Some(picks) = pick_exact(&allowed, k, target) {
                    choice = Some(picks);
                    break 'outer;
                }
            }
        }
    }
    let picks = choice.ok_or_else(|| {
        Error::Infeasible(format!("no multiset of {k} rooted {g}-vertex trees realizes ({t1}, {t2})"))
    })?;
    let backbone = make_perfect_ternary(c as u32);
    let leaves: Vec<usize> = (backbone.n() - k..backbone.n()).collect();
    let glued: Vec<(Tree, usize)> = picks.iter().map(|&e| pieces[e - 1].clone()).collect();
    let t = glue_trees(&backbone, &leaves, &glued)?;
    let s = make_caterpillar(tau1, tau2 as usize)?;
    check_profile(&t, t1, t2)?;
    let bound = 3 * k;
    if t.max_degree() > bound || s.max_degree() > bound {
        return Err(Error::Infeasible(format!("maximum degree exceeds {bound}")));
    }
    let host = StructuredHost {
        kind: HostKind::CliquePair,
        u1_size: (k + 1) * r - 1,
        u2_size: (k + 1) * r - 1,
        w_size: c,
    };
    Ok(Instance {
        colouring: host.colouring(),
        t,
        s,
        host,
    })
}

fn check_profile(t: &Tree, t1: usize, t2: usize) -> Result<()> {
    let p = t.profile();
    if (p.t1, p.t2) != (t1, t2) {
        return Err(Error::Internal(format!("built profile ({}, {}) instead of ({t1}, {t2})", p.t1, p.t2)));
    }
    Ok(())
}

/// The multiplicative-in-`rho` family: the same caterpillar with classes `rho r`
/// and `r` glued (by a large-class leaf) to each leaf of the ternary backbone.
pub fn gen_thm14(c: usize, rho: usize, r: usize) -> Result<Instance> {
    if c < 2 || rho < 2 || r == 0 || c > MAX_C {
        return Err(Error::Precondition(format!(
            "need 2 <= C <= {MAX_C}, rho >= 2, r >= 1; got C={c}, rho={rho}, r={r}"
        )));
    }
    let k = pow3(c);
    let piece = make_caterpillar(rho * r, r)?;
    let large = piece.in_large_class();
    let root = (0..piece.n())
        .filter(|&v| large[v])
        .min_by_key(|&v| (piece.degree(v), v))
        .expect("large class is nonempty");
    let backbone = make_perfect_ternary(c as u32);
    let leaves: Vec<usize> = (backbone.n() - k..backbone.n()).collect();
    let t = glue_trees(&backbone, &leaves, &vec![(piece, root); k])?;
    let n = t.n();
    let nu = ((k + 3) * rho * r + (k - 3) * r) / 2;
    let tau1 = n as i64 - nu as i64;
    let tau2 = n as i64 - 2 * tau1;
    let vacuous = n > 2 * nu + c - 3;
    if tau2 <= 0 || tau1 < tau2 {
        return Err(Error::Infeasible(format!(
            "tau = ({tau1}, {tau2}) at C={c}, rho={rho}, r={r}{}",
            if vacuous { "; also |T| > N (vacuous)" } else { "" }
        )));
    }
    let s = make_caterpillar(tau1 as usize, tau2 as usize)?;
    let host = StructuredHost {
        kind: HostKind::BipartitePair,
        u1_size: nu - 1,
        u2_size: nu - 1,
        w_size: c - 1,
    };
    Ok(Instance {
        colouring: host.colouring(),
        t,
        s,
        host,
    })
}

/// Independent sets of `t` with at most `w` vertices, the empty set included.
fn small_independent_sets(t: &Tree, w: usize) -> Vec<Vec<usize>> {
    fn go(t: &Tree, w: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        if cur.len() == w {
            return;
        }
        for v in start..t.n() {
            if cur.iter().all(|&u| !t.neighbours(v).contains(&u)) {
                cur.push(v);
                go(t, w, v + 1, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(t, w, 0, &mut Vec::new(), &mut out);
    out
}

/// Least `max(L, total - L)` over `L` reachable by picking one option per item.
fn balanced_load(items: &[(usize, usize)]) -> usize {
    let total: usize = items.iter().map(|&(a, b)| a + b).sum();
    let mut reach = vec![false; total + 1];
    reach[0] = true;
    for &(a, b) in items {
        let mut next = vec![false; total + 1];
        for (l, _) in reach.iter().enumerate().filter(|(_, &on)| on) {
            next[l + a] = true;
            next[l + b] = true;
        }
        reach = next;
    }
    (0..=total)
        .filter(|&l| reach[l])
        .map(|l| l.max(total - l))
        .min()
        .unwrap_or(0)
}

fn min_over_removals(t: &Tree, w: usize, cost: impl Fn(&[Vec<usize>]) -> usize + Sync) -> usize {
    small_independent_sets(t, w)
        .par_iter()
        .map(|removed| cost(&t.components_without(removed)))
        .min()
        .unwrap_or(0)
}

/// Least `|U1| = |U2|` for which `t` embeds in the clique-pair host with `|W| = w`.
pub fn min_u1_clique_host(t: &Tree, w: usize) -> usize {
    min_over_removals(t, w, |comps| {
        let items: Vec<(usize, usize)> = comps.iter().map(|c| (c.len(), 0)).collect();
        balanced_load(&items)
    })
}

/// Least `|U1| = |U2|` for which `t` embeds in the bipartite-pair host with `|W| = w`.
pub fn min_u1_bipartite_host(t: &Tree, w: usize) -> usize {
    let sides = t.sides();
    min_over_removals(t, w, |comps| {
        let items: Vec<(usize, usize)> = comps
            .iter()
            .map(|c| {
                let zero = c.iter().filter(|&&v| sides[v] == 0).count();
                (zero, c.len() - zero)
            })
            .collect();
        balanced_load(&items)
    })
}

/// Blue copy of `s` decided from the component structure when every blue
/// component is a clique or a complete bipartite graph; `None` otherwise.
pub fn structural_blue_contains(c: &TwoColouring, s: &Tree) -> Option<bool> {
    let blue = c.graph(Colour::Blue).into_owned();
    let labels = blue.components();
    let p = s.profile();
    let count = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut found = false;
    for comp in 0..count {
        let members: Vec<usize> = (0..c.n()).filter(|&v| labels[v] == comp).collect();
        let sub = blue.induced(&members);
        let m = members.len();
        if sub.edge_count() == m * (m - 1) / 2 {
            found |= p.n <= m;
        } else {
            let col = sub.two_colouring()?;
            let a = col.iter().filter(|&&x| x == 0).count();
            let b = m - a;
            if sub.edge_count() != a * b {
                return None;
            }
            found |= (p.t1 <= a && p.t2 <= b) || (p.t1 <= b && p.t2 <= a);
        }
    }
    Some(found)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum ExactCheck {
    Absent,
    Present,
    Unknown,
}

impl From<&Search> for ExactCheck {
    fn from(s: &Search) -> Self {
        match s {
            Search::Found(_) => ExactCheck::Present,
            Search::No => ExactCheck::Absent,
            Search::Unknown => ExactCheck::Unknown,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CounterexampleCertificate {
    pub theorem: String,
    #[serde(rename = "C")]
    pub c: usize,
    pub r: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rho: Option<usize>,
    pub t_profile: TreeProfile,
    pub s_profile: TreeProfile,
    pub host: StructuredHost,
    #[serde(flatten)]
    pub certificate: Certificate,
    pub red_t: bool,
    pub blue_s: bool,
    /// Smallest `|U1|` admitting a red `T`, from the host oracle.
    pub oracle_min_u1: usize,
    pub exact_red: ExactCheck,
    pub exact_blue: ExactCheck,
    pub exact_budget: u64,
    pub lower_bound_formula: usize,
    pub implied_lower_bound: usize,
    pub vacuous: bool,
}

fn certify(theorem: &str, inst: &Instance, oracle: usize, params: (usize, usize, Option<usize>), budget: u64) -> Result<CounterexampleCertificate> {
    let (pt, ps) = (inst.t.profile(), inst.s.profile());
    let red_t = oracle <= inst.host.u1_size;
    let blue_s = structural_blue_contains(&inst.colouring, &inst.s)
        .ok_or_else(|| Error::Internal("blue graph is not a union of cliques and bicliques".into()))?;
    let exact_red = ExactCheck::from(&contains_mono(&inst.colouring, &inst.t, Colour::Red, budget).search);
    let exact_blue = ExactCheck::from(&contains_mono(&inst.colouring, &inst.s, Colour::Blue, budget).search);
    let disagree = |exact: &ExactCheck, claim: bool| match exact {
        ExactCheck::Present => !claim,
        ExactCheck::Absent => claim,
        ExactCheck::Unknown => false,
    };
    if disagree(&exact_red, red_t) || disagree(&exact_blue, blue_s) {
        return Err(Error::Internal("oracle and exact search disagree".into()));
    }
    let n = inst.colouring.n();
    Ok(CounterexampleCertificate {
        theorem: theorem.into(),
        c: params.0,
        r: params.1,
        rho: params.2,
        t_profile: pt,
        s_profile: ps,
        host: inst.host,
        certificate: Certificate {
            n,
            colouring: inst.colouring.clone(),
            red_t_absent: !red_t,
            blue_s_absent: !blue_s,
            provenance: Provenance::Oracle,
        },
        red_t,
        blue_s,
        oracle_min_u1: oracle,
        exact_red,
        exact_blue,
        exact_budget: budget,
        lower_bound_formula: lower_bound(&pt, &ps)?,
        implied_lower_bound: n + 1,
        vacuous: inst.t.n() > n,
    })
}

pub fn verify_thm13(c: usize, r: usize, budget: u64) -> Result<CounterexampleCertificate> {
    let inst = gen_thm13(c, r)?;
    let oracle = min_u1_clique_host(&inst.t, c);
    certify("1.3", &inst, oracle, (c, r, None), budget)
}

pub fn verify_thm14(c: usize, rho: usize, r: usize, budget: u64) -> Result<CounterexampleCertificate> {
    let inst = gen_thm14(c, rho, r)?;
    let oracle = min_u1_bipartite_host(&inst.t, c - 1);
    certify("1.4", &inst, oracle, (c, r, Some(rho)), budget)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Thm62Trial {
    pub seed: u64,
    pub min_red_degree: usize,
    pub degree_ok: bool,
    pub expansion_violator: Option<Vec<usize>>,
    pub exhaustive: bool,
    pub sets_examined: u64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Thm62Report {
    pub n: usize,
    #[serde(with = "crate::rational::r64")]
    pub c: Rational64,
    #[serde(with = "crate::rational::big")]
    pub mu: BigRational,
    #[serde(rename = "N")]
    pub big_n: usize,
    pub t: usize,
    pub tree_size: usize,
    #[serde(with = "crate::rational::r64")]
    pub red_prob: Rational64,
    #[serde(with = "crate::rational::big")]
    pub degree_bound: BigRational,
    pub max_sets: u64,
    pub trials: Vec<Thm62Trial>,
}

#[derive(Clone, Copy, Debug)]
pub struct Thm62Params {
    pub n: usize,
    pub c: Rational64,
    pub seed: u64,
    pub trials: usize,
    /// Defaults to `1 - c/10`.
    pub red_prob: Option<Rational64>,
    pub max_sets: u64,
}

impl Thm62Params {
    pub fn new(n: usize, c: Rational64, seed: u64, trials: usize) -> Self {
        Self {
            n,
            c,
            seed,
            trials,
            red_prob: None,
            max_sets: 1_000_000,
        }
    }
}

/// Samples red `G(N, p)` colourings and checks the minimum red degree and the
/// absence of `t`-sets with `|N(U) ∪ U| >= |T|`. `mu = (c/10)^t / 100` with `t = ceil(10/c)`.
pub fn demo_thm62(p: &Thm62Params) -> Result<Thm62Report> {
    let zero = Rational64::from_integer(0);
    let ten = Rational64::from_integer(10);
    if p.c <= zero || p.c > ten || p.n == 0 {
        return Err(Error::Precondition(format!("need 0 < c <= 10 and n >= 1, got c={}, n={}", p.c, p.n)));
    }
    let t = (ten / p.c).ceil().to_integer() as usize;
    let big = |r: Rational64| BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()));
    let q = big(p.c / ten);
    let mut mu = BigRational::one() / BigRational::from_integer(BigInt::from(100));
    for _ in 0..t {
        mu *= &q;
    }
    let n_big = BigRational::from_integer(BigInt::from(p.n));
    let big_n = ((BigRational::from_integer(BigInt::from(4)) + &mu) * &n_big)
        .floor()
        .to_integer()
        .to_usize()
        .expect("fits");
    let mu_n = (&mu * &n_big).floor().to_integer().to_usize().expect("fits");
    let tree_size = 4 * p.n - mu_n;
    let red_prob = p.red_prob.unwrap_or(Rational64::from_integer(1) - p.c / ten);
    let degree_bound = (BigRational::from_integer(BigInt::from(4)) + &mu) * &n_big - big(p.c) * &n_big / BigRational::from_integer(BigInt::from(2));
    let trials = (0..p.trials)
        .map(|i| {
            let seed = p.seed.wrapping_add(i as u64);
            let g = sample_random_colouring(big_n, red_prob, seed);
            let min_red_degree = (0..big_n).map(|v| g.degree(v, Colour::Red)).min().unwrap_or(0);
            let degree_ok = BigRational::from_integer(BigInt::from(min_red_degree)) >= degree_bound;
            let exp = check_neighbourhood_expansion(&g, t, tree_size, p.max_sets, seed);
            Thm62Trial {
                seed,
                min_red_degree,
                degree_ok,
                pass: degree_ok && exp.violator.is_none() && exp.exhaustive,
                expansion_violator: exp.violator,
                exhaustive: exp.exhaustive,
                sets_examined: exp.sets_examined,
            }
        })
        .collect();
    Ok(Thm62Report {
        n: p.n,
        c: p.c,
        mu,
        big_n,
        t,
        tree_size,
        red_prob,
        degree_bound,
        max_sets: p.max_sets,
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thm13_small() {
        let inst = gen_thm13(1, 2).unwrap();
        let pt = inst.t.profile();
        assert_eq!((pt.n, pt.t1, pt.t2), (13, 8, 5));
        let ps = inst.s.profile();
        assert_eq!((ps.t1, ps.t2), (8, 3));
        assert_eq!(inst.colouring.n(), 15);
        assert_eq!((inst.host.u1_size, inst.host.w_size), (7, 1));
        assert_eq!(min_u1_clique_host(&inst.t, 1), 8);

        let feasible = gen_thm13(1, 1).unwrap();
        assert_eq!(feasible.t.profile().t1, 4);
        assert!(matches!(gen_thm13(2, 2), Err(Error::Infeasible(_))));
    }

    #[test]
    fn oracle_examples() {
        let edge = Tree::path(2).unwrap();
        assert_eq!(min_u1_clique_host(&edge, 0), 2);
        assert_eq!(min_u1_clique_host(&Tree::star(6), 1), 3);
        assert_eq!(min_u1_bipartite_host(&edge, 0), 1);
        assert_eq!(min_u1_bipartite_host(&Tree::path(4).unwrap(), 0), 2);
    }

    #[test]
    fn thm14_shapes() {
        let inst = gen_thm14(2, 2, 2).unwrap();
        let pt = inst.t.profile();
        assert_eq!((pt.n, pt.t1, pt.t2), (58, 37, 21));
        let ps = inst.s.profile();
        assert_eq!((ps.t1, ps.t2), (28, 2));
        assert_eq!(inst.colouring.n(), 59);
        assert!(matches!(gen_thm14(2, 2, 1), Err(Error::Infeasible(_))));
        assert!(matches!(gen_thm14(1, 2, 2), Err(Error::Precondition(_))));
    }

    #[test]
    fn structural_blue() {
        let inst = gen_thm13(1, 2).unwrap();
        assert_eq!(structural_blue_contains(&inst.colouring, &inst.s), Some(false));
        let smaller = make_caterpillar(7, 3).unwrap();
        assert_eq!(structural_blue_contains(&inst.colouring, &smaller), Some(true));
    }

    #[test]
    fn demo_reproducible() {
        let p = Thm62Params::new(3, Rational64::from_integer(1), 7, 2);
        let a = demo_thm62(&p).unwrap();
        assert_eq!(a, demo_thm62(&p).unwrap());
        assert_eq!((a.big_n, a.t, a.tree_size), (12, 10, 12));
        let all_red = demo_thm62(&Thm62Params { red_prob: Some(Rational64::from_integer(1)), ..p }).unwrap();
        assert!(all_red.trials.iter().all(|t| t.expansion_violator.is_some() && !t.pass));
    }
}
