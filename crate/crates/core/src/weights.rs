//! α-weight functions on digraphs: maximum weight by exact LP, the A/B/C
//! decomposition, the Q/R structure of link digraphs and the biclique finder.

use crate::colouring::{Colour, TwoColouring};
use crate::error::{Error, Result};
use crate::lp::{qi, Constraint, LinearProgram, LpOutcome, Sense, Q};
use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    arcs: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct DigraphJson {
    n: usize,
    arcs: Vec<[usize; 2]>,
}

impl Digraph {
    pub fn new(n: usize, arcs: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in &arcs {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidInput(format!("bad arc ({u},{v}) on {n} vertices")));
            }
            if !seen.insert((u, v)) {
                return Err(Error::InvalidInput(format!("duplicate arc ({u},{v})")));
            }
        }
        Ok(Self { n, arcs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(DigraphJson {
            n: self.n,
            arcs: self.arcs.iter().map(|&(u, v)| [u, v]).collect(),
        })
        .expect("serializable")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let j: DigraphJson =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(j.n, j.arcs.into_iter().map(|[u, v]| (u, v)).collect())
    }
}

pub fn to_big(r: Rational64) -> Q {
    Q::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

#[derive(Clone, Debug)]
pub struct WeightProblem {
    pub digraph: Digraph,
    pub alpha: Q,
}

impl WeightProblem {
    pub fn new(digraph: Digraph, alpha: Rational64) -> Result<Self> {
        if alpha < Rational64::from_integer(1) {
            return Err(Error::InvalidInput(format!("alpha = {alpha} must be at least 1")));
        }
        Ok(Self {
            digraph,
            alpha: to_big(alpha),
        })
    }

    /// `w_alpha(v, f) = out(v) / alpha + in(v)`.
    pub fn vertex_weight(&self, v: usize, f: &[Q]) -> Q {
        let mut w = Q::zero();
        for (e, &(a, b)) in self.digraph.arcs.iter().enumerate() {
            if a == v {
                w += &f[e] / &self.alpha;
            }
            if b == v {
                w += &f[e];
            }
        }
        w
    }

    fn vertex_rows(&self) -> Vec<Constraint> {
        let inv = Q::one() / &self.alpha;
        (0..self.digraph.n)
            .map(|v| Constraint {
                coeffs: self
                    .digraph
                    .arcs
                    .iter()
                    .map(|&(a, b)| {
                        if a == v {
                            inv.clone()
                        } else if b == v {
                            Q::one()
                        } else {
                            Q::zero()
                        }
                    })
                    .collect(),
                sense: Sense::Le,
                rhs: Q::one(),
            })
            .collect()
    }
}

/// An optimal weight function with a matching dual certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WeightSolution {
    #[serde(with = "crate::rational::big")]
    pub w_max: Q,
    /// Weight per arc, in arc order.
    #[serde(with = "crate::rational::big_vec")]
    pub f: Vec<Q>,
    /// Dual price per vertex.
    #[serde(with = "crate::rational::big_vec")]
    pub dual: Vec<Q>,
}

pub fn max_weight(p: &WeightProblem) -> WeightSolution {
    let m = p.digraph.arcs.len();
    if m == 0 {
        return WeightSolution {
            w_max: Q::zero(),
            f: vec![],
            dual: vec![Q::zero(); p.digraph.n],
        };
    }
    let lp = LinearProgram {
        objective: vec![Q::one(); m],
        constraints: p.vertex_rows(),
    };
    match lp.solve() {
        LpOutcome::Optimal { x, value, dual } => WeightSolution {
            w_max: value,
            f: x,
            dual,
        },
        other => unreachable!("weight LP is feasible and bounded, got {other:?}"),
    }
}

/// Primal feasibility, dual feasibility and equal objectives, all exact.
pub fn verify_solution(p: &WeightProblem, s: &WeightSolution) -> bool {
    let arcs = &p.digraph.arcs;
    if s.f.len() != arcs.len() || s.dual.len() != p.digraph.n {
        return false;
    }
    if s.f.iter().any(|x| x.is_negative()) || s.dual.iter().any(|y| y.is_negative()) {
        return false;
    }
    if (0..p.digraph.n).any(|v| p.vertex_weight(v, &s.f) > Q::one()) {
        return false;
    }
    let primal: Q = s.f.iter().sum();
    let dual: Q = s.dual.iter().sum();
    primal == s.w_max
        && dual == s.w_max
        && arcs
            .iter()
            .all(|&(a, b)| &s.dual[a] / &p.alpha + &s.dual[b] >= Q::one())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AbcPartition {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub c: Vec<usize>,
    #[serde(with = "crate::rational::big")]
    pub w_max: Q,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AbcChecks {
    /// `|B| <= wMax / alpha`
    pub abc5: bool,
    /// `|C| <= (1 + 1/alpha) wMax - (1 + alpha)|B|`
    pub abc6: bool,
    /// `|A| >= |V| - (1 + 1/alpha) wMax`
    pub abc8: bool,
    /// `|A| > |V| - (1 + 1/alpha) wMax`
    pub abc8_strict: bool,
}

impl AbcChecks {
    pub fn all(&self) -> bool {
        self.abc5 && self.abc6 && self.abc8
    }
}

impl AbcPartition {
    pub fn checks(&self, p: &WeightProblem) -> AbcChecks {
        let n = |len: usize| qi(len as i64);
        let scale = Q::one() + Q::one() / &p.alpha;
        let bound8 = n(p.digraph.n) - &scale * &self.w_max;
        AbcChecks {
            abc5: n(self.b.len()) <= &self.w_max / &p.alpha,
            abc6: n(self.c.len()) <= &scale * &self.w_max - (Q::one() + &p.alpha) * n(self.b.len()),
            abc8: n(self.a.len()) >= bound8,
            abc8_strict: n(self.a.len()) > bound8,
        }
    }
}

/// `A` = vertices with slack under some maximum weight function (decided by
/// one LP per vertex that is tight in the first optimum), `B` = tails of arcs
/// into `A`, `C` = the rest. Errors if one of the checked inequalities fails.
pub fn abc_partition(p: &WeightProblem) -> Result<AbcPartition> {
    let part = abc_sets(p);
    let checks = part.checks(p);
    if !checks.all() {
        return Err(Error::Internal(format!("A/B/C inequalities failed: {checks:?}")));
    }
    Ok(part)
}

/// The A/B/C sets without asserting the inequalities.
pub fn abc_sets(p: &WeightProblem) -> AbcPartition {
    let n = p.digraph.n;
    let arcs = &p.digraph.arcs;
    let best = max_weight(p);
    let mut in_a = vec![false; n];
    let mark_slack = |f: &[Q], in_a: &mut Vec<bool>| {
        for (v, slot) in in_a.iter_mut().enumerate() {
            if !*slot && p.vertex_weight(v, f) < Q::one() {
                *slot = true;
            }
        }
    };
    mark_slack(&best.f, &mut in_a);
    if !arcs.is_empty() {
        let rows = p.vertex_rows();
        for v in 0..n {
            if in_a[v] {
                continue;
            }
            let mut constraints = rows.clone();
            constraints.push(Constraint {
                coeffs: vec![Q::one(); arcs.len()],
                sense: Sense::Ge,
                rhs: best.w_max.clone(),
            });
            let lp = LinearProgram {
                objective: rows[v].coeffs.iter().map(|c| -c).collect(),
                constraints,
            };
            if let LpOutcome::Optimal { x, .. } = lp.solve() {
                mark_slack(&x, &mut in_a);
            }
        }
    }
    let mut in_b = vec![false; n];
    for &(u, v) in arcs {
        if in_a[v] {
            in_b[u] = true;
        }
    }
    AbcPartition {
        a: (0..n).filter(|&v| in_a[v]).collect(),
        b: (0..n).filter(|&v| in_b[v]).collect(),
        c: (0..n).filter(|&v| !in_a[v] && !in_b[v]).collect(),
        w_max: best.w_max,
    }
}

/// Digraph on `V \ {x}` with an arc `y -> z` whenever `xy` and `yz` both have `colour`.
/// Returns the digraph and the original label of each of its vertices.
pub fn colour_link_digraph(c: &TwoColouring, x: usize, colour: Colour) -> (Digraph, Vec<usize>) {
    let labels: Vec<usize> = (0..c.n()).filter(|&v| v != x).collect();
    let mut arcs = Vec::new();
    for (i, &y) in labels.iter().enumerate() {
        if !c.has(colour, x, y) {
            continue;
        }
        for (j, &z) in labels.iter().enumerate() {
            if i != j && c.has(colour, y, z) {
                arcs.push((i, j));
            }
        }
    }
    (Digraph { n: labels.len(), arcs }, labels)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct QrReport {
    pub x: usize,
    pub colour: Colour,
    pub q: Vec<usize>,
    pub r: Vec<usize>,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub c: Vec<usize>,
    #[serde(with = "crate::rational::big")]
    pub w_max: Q,
    pub qr1: bool,
    pub qr2: bool,
    pub qr3: bool,
}

impl QrReport {
    pub fn holds(&self) -> bool {
        self.qr1 && self.qr2 && self.qr3
    }
}

pub fn qr_report(col: &TwoColouring, x: usize, colour: Colour, alpha: Rational64) -> Result<QrReport> {
    if x >= col.n() {
        return Err(Error::InvalidInput(format!("vertex {x} out of range")));
    }
    let (digraph, labels) = colour_link_digraph(col, x, colour);
    let problem = WeightProblem::new(digraph, alpha)?;
    let abc = abc_sets(&problem);
    let relabel = |s: &[usize]| s.iter().map(|&i| labels[i]).collect::<Vec<_>>();
    let (a, b, c) = (relabel(&abc.a), relabel(&abc.b), relabel(&abc.c));
    let q: Vec<usize> = col.neighbours(x, colour);
    let r: Vec<usize> = (0..col.n()).filter(|&v| v != x && !q.contains(&v)).collect();
    let inter = |s: &[usize], t: &[usize]| s.iter().copied().filter(|v| t.contains(v)).collect::<Vec<_>>();
    let (qa, qc, ra) = (inter(&q, &a), inter(&q, &c), inter(&r, &a));
    let none_between = |s: &[usize], t: &[usize]| {
        s.iter().all(|&u| t.iter().all(|&v| u == v || !col.has(colour, u, v)))
    };
    let qr1 = inter(&b, &r).is_empty();
    let qr2 = none_between(&qa, &qa) && none_between(&qa, &qc) && none_between(&qa, &ra) && none_between(&qc, &ra);
    let qr3 = qi((inter(&q, &b).len() + inter(&r, &c).len()) as i64) <= abc.w_max;
    Ok(QrReport {
        x,
        colour,
        q,
        r,
        a,
        b,
        c,
        w_max: abc.w_max,
        qr1,
        qr2,
        qr3,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum BicliqueRejection {
    DegreeHypothesis,
    WeightTooLarge,
    EmptyQA,
    SizeBounds,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "outcome")]
pub enum BicliqueOutcome {
    Found { z: usize, x: Vec<usize>, y: Vec<usize> },
    Rejected { reason: BicliqueRejection },
}

/// Follows the construction of a blue biclique situation around a vertex `v` of high red degree.
pub fn find_biclique_situation(
    col: &TwoColouring,
    v: usize,
    alpha: Rational64,
    beta: Rational64,
    eps: Rational64,
) -> Result<BicliqueOutcome> {
    let one = Rational64::from_integer(1);
    if !(one < beta && beta <= alpha) || v >= col.n() {
        return Err(Error::InvalidInput("need 1 < beta <= alpha and v in range".into()));
    }
    let (al, be, ep) = (to_big(alpha), to_big(beta), to_big(eps));
    let inv_a = Q::one() / &al;
    let inv_b = Q::one() / &be;
    let k = qi(col.n() as i64) / (Q::one() + &inv_a + &inv_b - qi(2) * &ep);
    let reject = |reason| Ok(BicliqueOutcome::Rejected { reason });

    if qi(col.degree(v, Colour::Red) as i64) < (&inv_a + &inv_b - qi(5) * &ep) * &k {
        return reject(BicliqueRejection::DegreeHypothesis);
    }
    let qr = qr_report(col, v, Colour::Red, alpha)?;
    if qr.w_max >= (Q::one() + &ep) * &k {
        return reject(BicliqueRejection::WeightTooLarge);
    }
    let inter = |s: &[usize], t: &[usize]| s.iter().copied().filter(|x| t.contains(x)).collect::<Vec<_>>();
    let qa = inter(&qr.q, &qr.a);
    let qc = inter(&qr.q, &qr.c);
    let ra = inter(&qr.r, &qr.a);
    let Some(&z) = qa.first() else {
        return reject(BicliqueRejection::EmptyQA);
    };
    let blue_of_z = |s: &[usize]| s.iter().copied().filter(|&u| col.is_blue(z, u)).collect::<Vec<_>>();
    let qa_ra: Vec<usize> = qa.iter().chain(&ra).copied().collect();
    let (x, y) = if qi(qc.len() as i64) >= (&inv_a - qi(6) * &ep) * &k {
        (blue_of_z(&qc), blue_of_z(&qa_ra))
    } else {
        let target = ((&inv_a - qi(10) * &ep) * &k).ceil().to_integer();
        let target: usize = target.try_into().unwrap_or(0);
        let mut x = blue_of_z(&qc);
        for u in blue_of_z(&qa) {
            if x.len() >= target {
                break;
            }
            x.push(u);
        }
        let y: Vec<usize> = blue_of_z(&qa_ra).into_iter().filter(|u| !x.contains(u)).collect();
        (x, y)
    };
    let small = (&inv_a - qi(10) * &ep) * &k;
    let total = (&inv_a + &inv_b - qi(10) * &ep) * &k;
    let sizes_ok = qi(x.len() as i64) >= small
        && qi(y.len() as i64) >= small
        && qi((x.len() + y.len()) as i64) >= total;
    if !sizes_ok || !biclique_holds(col, v, z, &x, &y) {
        return reject(BicliqueRejection::SizeBounds);
    }
    Ok(BicliqueOutcome::Found { z, x, y })
}

/// Edge-by-edge check: `X`, `Y`, `{v, z}` disjoint, `z` blue to `X ∪ Y`, all `X`-`Y` edges blue.
pub fn biclique_holds(col: &TwoColouring, v: usize, z: usize, x: &[usize], y: &[usize]) -> bool {
    let mut seen = vec![false; col.n()];
    for &u in x.iter().chain(y).chain([v, z].iter()) {
        if u >= col.n() || std::mem::replace(&mut seen[u], true) {
            return false;
        }
    }
    x.iter().chain(y).all(|&u| col.is_blue(z, u)) && x.iter().all(|&a| y.iter().all(|&b| col.is_blue(a, b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::q;

    fn problem(n: usize, arcs: &[(usize, usize)], alpha: Rational64) -> WeightProblem {
        WeightProblem::new(Digraph::new(n, arcs.to_vec()).unwrap(), alpha).unwrap()
    }

    #[test]
    fn max_weight_examples() {
        let two = Rational64::from_integer(2);
        let empty = problem(3, &[], two);
        assert_eq!(max_weight(&empty).w_max, Q::zero());
        let arc = problem(2, &[(0, 1)], two);
        let s = max_weight(&arc);
        assert_eq!(s.w_max, qi(1));
        assert!(verify_solution(&arc, &s));
        let cycle = problem(2, &[(0, 1), (1, 0)], two);
        let s = max_weight(&cycle);
        assert_eq!(s.w_max, q(4, 3));
        assert_eq!(s.f, vec![q(2, 3), q(2, 3)]);
        assert!(verify_solution(&cycle, &s));
    }

    #[test]
    fn abc_examples() {
        let two = Rational64::from_integer(2);
        let empty = problem(3, &[], two);
        let p = abc_sets(&empty);
        assert_eq!((p.a.len(), p.b.len(), p.c.len()), (3, 0, 0));
        let checks = p.checks(&empty);
        // the strict form fails when wMax = 0
        assert!(checks.all() && !checks.abc8_strict);

        let arc = problem(2, &[(0, 1)], two);
        let p = abc_partition(&arc).unwrap();
        assert_eq!((p.a, p.b, p.c), (vec![0], vec![], vec![1]));

        let cycle = problem(2, &[(0, 1), (1, 0)], two);
        let p = abc_sets(&cycle);
        assert!(p.a.is_empty());
        assert!(!p.checks(&cycle).abc8_strict);
    }

    #[test]
    fn link_digraphs() {
        let red = TwoColouring::all_red(3);
        let (d, labels) = colour_link_digraph(&red, 0, Colour::Red);
        assert_eq!(labels, vec![1, 2]);
        assert_eq!(d.arcs(), &[(0, 1), (1, 0)]);
        assert!(colour_link_digraph(&red, 0, Colour::Blue).0.arcs().is_empty());
    }

    #[test]
    fn qr_examples() {
        let two = Rational64::from_integer(2);
        let blue = TwoColouring::all_blue(4);
        let r = qr_report(&blue, 0, Colour::Red, two).unwrap();
        assert!(r.q.is_empty() && r.holds());
        let red = TwoColouring::all_red(4);
        assert!(qr_report(&red, 1, Colour::Red, two).unwrap().holds());
    }

    /// `v` red to `X ∪ {z}`, blue to `Y`; red cliques on `X` and `Y`; blue `X`-`Y`; `z` blue elsewhere.
    fn situation(a: usize) -> TwoColouring {
        let n = 2 * a + 2;
        let (v, z) = (0, 1);
        let xs: Vec<usize> = (2..2 + a).collect();
        let ys: Vec<usize> = (2 + a..n).collect();
        let mut c = TwoColouring::all_blue(n);
        c.set_colour(v, z, Colour::Red);
        for &x in &xs {
            c.set_colour(v, x, Colour::Red);
        }
        for set in [&xs, &ys] {
            for &p in set.iter() {
                for &q in set.iter() {
                    if p < q {
                        c.set_colour(p, q, Colour::Red);
                    }
                }
            }
        }
        c
    }

    #[test]
    fn biclique_examples() {
        let two = Rational64::from_integer(2);
        let zero = Rational64::from_integer(0);
        let red = TwoColouring::all_red(8);
        assert_eq!(
            find_biclique_situation(&red, 0, two, two, zero).unwrap(),
            BicliqueOutcome::Rejected { reason: BicliqueRejection::WeightTooLarge }
        );
        let c = situation(5);
        match find_biclique_situation(&c, 0, two, two, zero).unwrap() {
            BicliqueOutcome::Found { z, x, y } => {
                assert_eq!(z, 1);
                assert!(biclique_holds(&c, 0, z, &x, &y));
                assert_eq!((x.len(), y.len()), (5, 5));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            find_biclique_situation(&c, 7, two, two, zero).unwrap(),
            BicliqueOutcome::Rejected { reason: BicliqueRejection::DegreeHypothesis }
        );
    }
}
