use super::{
    embed_bare_paths, embed_bipartite_any, embed_many_leaves, rat, BipartiteHost, EmbedFailure, EmbedderConfig,
};
use crate::colouring::{verify_extremal, Colour, ExtremalType, ExtremalWitness, TwoColouring};
use crate::embed::{decide_arrows, search, verify_mono, Arrow, Embedding, Search, SearchProblem};
use crate::graph::{Graph, VertexSet};
use crate::tree::Tree;
use serde::{Deserialize, Serialize};

/// One embedder or search tried inside a branch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BranchAttempt {
    pub branch: String,
    pub method: String,
    pub result: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StrategyOutcome {
    pub colour: Colour,
    pub embedding: Embedding,
    pub branch: String,
    pub attempts: Vec<BranchAttempt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
#[serde(rename_all = "camelCase", tag = "kind")]
pub enum StrategyFailure {
    #[error("precondition: {reason}")]
    Precondition { reason: String },
    #[error("every branch failed ({} attempts)", attempts.len())]
    CaseFailed { attempts: Vec<BranchAttempt> },
}

/// Where a pattern has to go: the colour, the host vertices and how they are split.
enum Target {
    /// Pattern inside `colour[vs]`.
    Clique(Vec<usize>),
    /// Pattern side `side` into `a`, the other side into `b`, edges between only.
    Bipartite { a: Vec<usize>, b: Vec<usize>, side: u8 },
    /// Like `Bipartite`, but `x` may join the side going into `a`.
    Outside { a: Vec<usize>, b: Vec<usize>, side: u8, x: usize },
}

struct Run<'a> {
    col: &'a TwoColouring,
    cfg: &'a EmbedderConfig,
    attempts: Vec<BranchAttempt>,
}

impl Run<'_> {
    fn note(&mut self, branch: &str, method: &str, result: String) {
        self.attempts.push(BranchAttempt {
            branch: branch.into(),
            method: method.into(),
            result,
        });
    }

    fn note_embedder(&mut self, branch: &str, method: &str, r: &Result<Embedding, EmbedFailure>) {
        let text = match r {
            Ok(_) => "found".to_string(),
            Err(e) => e.to_string(),
        };
        self.note(branch, method, text);
    }

    fn try_target(&mut self, branch: &str, colour: Colour, pattern: &Tree, target: &Target) -> Option<Embedding> {
        let full = self.col.graph(colour);
        let found = match target {
            Target::Clique(vs) => self.clique(branch, &full, pattern, vs),
            Target::Bipartite { a, b, side } => self.bipartite(branch, &full, pattern, a, b, *side),
            Target::Outside { a, b, side, x } => self.outside(branch, &full, pattern, a, b, *side, *x),
        }?;
        verify_mono(self.col, pattern, colour, &found).then_some(found)
    }

    fn exact(&mut self, branch: &str, p: SearchProblem<'_>) -> Option<Embedding> {
        let out = search(p);
        let text = match &out.search {
            Search::Found(_) => "found",
            Search::No => "no",
            Search::Unknown => "unknown",
        };
        self.note(branch, "exact", format!("{text} after {} nodes", out.nodes));
        match out.search {
            Search::Found(e) => Some(e),
            _ => None,
        }
    }

    fn clique(&mut self, branch: &str, full: &Graph, pattern: &Tree, vs: &[usize]) -> Option<Embedding> {
        if vs.len() < pattern.n() {
            self.note(branch, "size", format!("{} host vertices for {}", vs.len(), pattern.n()));
            return None;
        }
        let host = full.induced(vs);
        let pv = (0..pattern.n()).max_by_key(|&v| pattern.degree(v)).unwrap_or(0);
        let hv = (0..host.n()).max_by_key(|&h| host.degree(h)).unwrap_or(0);
        let back = |e: Embedding| Embedding {
            map: e.map.iter().map(|&h| vs[h]).collect(),
        };
        let r = embed_bare_paths(&host, pattern, (pv, hv), self.cfg);
        self.note_embedder(branch, "bare-paths", &r);
        if let Ok(e) = r {
            return Some(back(e));
        }
        let r = embed_many_leaves(&host, pattern, (pv, hv), self.cfg);
        self.note_embedder(branch, "many-leaves", &r);
        if let Ok(e) = r {
            return Some(back(e));
        }
        self.exact(branch, SearchProblem::new(&host, pattern, self.cfg.exact_budget)).map(back)
    }

    fn bipartite(&mut self, branch: &str, full: &Graph, pattern: &Tree, a: &[usize], b: &[usize], side: u8) -> Option<Embedding> {
        let vs: Vec<usize> = a.iter().chain(b).copied().collect();
        let mut host = Graph::empty(vs.len());
        for i in 0..a.len() {
            for j in a.len()..vs.len() {
                if full.has_edge(vs[i], vs[j]) {
                    host.add_edge(i, j);
                }
            }
        }
        let back = |e: Embedding| Embedding {
            map: e.map.iter().map(|&h| vs[h]).collect(),
        };
        let bh = BipartiteHost::new(host, a.len()).expect("edges only run between the classes");
        let r = embed_bipartite_any(&bh, pattern, side, self.cfg);
        self.note_embedder(branch, "bipartite", &r);
        if let Ok(e) = r {
            return Some(back(e));
        }
        let sides = pattern.sides();
        let m = vs.len();
        let first = VertexSet::from_iter_with_capacity(m, 0..a.len());
        let second = VertexSet::from_iter_with_capacity(m, a.len()..m);
        let domains: Vec<VertexSet> = sides
            .iter()
            .map(|&s| if s == side { first.clone() } else { second.clone() })
            .collect();
        let p = SearchProblem {
            domains: Some(&domains),
            ..SearchProblem::new(&bh.graph, pattern, self.cfg.exact_budget)
        };
        self.exact(branch, p).map(back)
    }

    #[allow(clippy::too_many_arguments)]
    fn outside(&mut self, branch: &str, full: &Graph, pattern: &Tree, a: &[usize], b: &[usize], side: u8, x: usize) -> Option<Embedding> {
        let mut vs: Vec<usize> = vec![x];
        vs.extend(a.iter().chain(b).copied());
        let host = full.induced(&vs);
        let m = vs.len();
        let first = VertexSet::from_iter_with_capacity(m, 0..=a.len());
        let second = VertexSet::from_iter_with_capacity(m, a.len() + 1..m);
        let domains: Vec<VertexSet> = pattern
            .sides()
            .iter()
            .map(|&s| if s == side { first.clone() } else { second.clone() })
            .collect();
        let p = SearchProblem {
            domains: Some(&domains),
            ..SearchProblem::new(&host, pattern, self.cfg.exact_budget)
        };
        let e = self.exact(branch, p)?;
        Some(Embedding {
            map: e.map.iter().map(|&h| vs[h]).collect(),
        })
    }
}

/// Closures `U1+`, `U2+` and the vertices in neither.
struct Closures {
    u1: Vec<usize>,
    u2: Vec<usize>,
    outside: Vec<usize>,
}

fn closures(col: &TwoColouring, w: &ExtremalWitness, n: usize, xi: num_rational::Rational64) -> Closures {
    let nn = col.n();
    let s1 = VertexSet::from_iter_with_capacity(nn, w.u1.iter().copied());
    let s2 = VertexSet::from_iter_with_capacity(nn, w.u2.iter().copied());
    let (inner, cross) = match w.kind {
        ExtremalType::Type1 | ExtremalType::Type4 => (Colour::Red, Colour::Blue),
        ExtremalType::Type2 | ExtremalType::Type3 => (Colour::Blue, Colour::Red),
    };
    let both_inner = matches!(w.kind, ExtremalType::Type3 | ExtremalType::Type4);
    let slack = xi * rat(n);
    let close = |v: usize, set: &VertexSet, colour: Colour| rat(col.degree_into(v, set, colour)) + slack >= rat(set.len());
    let mut out = Closures {
        u1: w.u1.clone(),
        u2: w.u2.clone(),
        outside: Vec::new(),
    };
    for v in (0..nn).filter(|&v| !s1.contains(v) && !s2.contains(v)) {
        let like1 = close(v, &s1, inner);
        let like2 = if both_inner { close(v, &s2, inner) } else { close(v, &s1, cross) };
        match (like1, like2) {
            (true, false) => out.u1.push(v),
            (false, true) => out.u2.push(v),
            _ => out.outside.push(v),
        }
    }
    out
}

/// Runs the case analysis for an extremal colouring: each branch first tries
/// the asymptotic embedders on its dense host and then an exact search
/// restricted to that host; an unrestricted exact search comes last.
/// Every returned embedding has been verified.
pub fn extremal_strategy(
    col: &TwoColouring,
    t: &Tree,
    s: &Tree,
    w: &ExtremalWitness,
    cfg: &EmbedderConfig,
) -> Result<StrategyOutcome, StrategyFailure> {
    if !verify_extremal(col, w, t, s) {
        return Err(StrategyFailure::Precondition {
            reason: "witness does not verify".into(),
        });
    }
    if let Err(e) = cfg.validate() {
        return Err(StrategyFailure::Precondition { reason: e.to_string() });
    }
    let cl = closures(col, w, t.n(), cfg.xi);
    let (lt, ls) = (t.large_side(), s.large_side());
    let bip = |a: &Vec<usize>, b: &Vec<usize>, side: u8| Target::Bipartite { a: a.clone(), b: b.clone(), side };
    let mut plan: Vec<(String, Colour, &Tree, Target)> = Vec::new();
    let (red, blue) = (Colour::Red, Colour::Blue);
    match w.kind {
        ExtremalType::Type1 => {
            plan.push(("1.clique".into(), red, t, Target::Clique(cl.u1.clone())));
            plan.push(("1.bipartite".into(), blue, s, bip(&cl.u1, &cl.u2, ls)));
            plan.push(("1.bipartite".into(), blue, s, bip(&cl.u1, &cl.u2, 1 - ls)));
        }
        ExtremalType::Type2 => {
            plan.push(("2.clique".into(), blue, s, Target::Clique(cl.u1.clone())));
            plan.push(("2.bipartite".into(), red, t, bip(&cl.u1, &cl.u2, lt)));
            plan.push(("2.bipartite".into(), red, t, bip(&cl.u1, &cl.u2, 1 - lt)));
        }
        ExtremalType::Type3 | ExtremalType::Type4 => {
            let (digit, cross_colour, cross_tree, inner_colour, inner_tree) = if w.kind == ExtremalType::Type3 {
                ("3", red, t, blue, s)
            } else {
                ("4", blue, s, red, t)
            };
            let side = cross_tree.large_side();
            for (a, b) in [(&cl.u1, &cl.u2), (&cl.u2, &cl.u1)] {
                for sd in [side, 1 - side] {
                    plan.push((format!("{digit}.bipartite"), cross_colour, cross_tree, bip(a, b, sd)));
                }
            }
            for vs in [&cl.u1, &cl.u2] {
                plan.push((format!("{digit}.clique"), inner_colour, inner_tree, Target::Clique(vs.clone())));
            }
            for &x in &cl.outside {
                for (a, b) in [(&cl.u1, &cl.u2), (&cl.u2, &cl.u1)] {
                    for sd in [side, 1 - side] {
                        let target = Target::Outside {
                            a: a.clone(),
                            b: b.clone(),
                            side: sd,
                            x,
                        };
                        plan.push((format!("{digit}.outside"), cross_colour, cross_tree, target));
                    }
                }
            }
        }
    }
    let mut run = Run {
        col,
        cfg,
        attempts: Vec::new(),
    };
    for (branch, colour, pattern, target) in &plan {
        if let Some(embedding) = run.try_target(branch, *colour, pattern, target) {
            return Ok(StrategyOutcome {
                colour: *colour,
                embedding,
                branch: branch.clone(),
                attempts: run.attempts,
            });
        }
    }
    let found = match decide_arrows(col, t, s, cfg.exact_budget) {
        Arrow::RedT(e) if verify_mono(col, t, red, &e) => Some((red, e)),
        Arrow::BlueS(e) if verify_mono(col, s, blue, &e) => Some((blue, e)),
        other => {
            let text = match other {
                Arrow::Neither => "neither",
                _ => "unknown",
            };
            run.note("fallback.exact", "decide-arrows", text.into());
            None
        }
    };
    match found {
        Some((colour, embedding)) => {
            run.note("fallback.exact", "decide-arrows", "found".into());
            Ok(StrategyOutcome {
                colour,
                embedding,
                branch: "fallback.exact".into(),
                attempts: run.attempts,
            })
        }
        None => Err(StrategyFailure::CaseFailed { attempts: run.attempts }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::{canonical_witness, make_construction, ConstructionKind, ConstructionParams};
    use crate::tree::make_caterpillar;
    use num_rational::Rational64;

    fn cfg() -> EmbedderConfig {
        EmbedderConfig::new(Rational64::new(1, 10_000), Rational64::new(1, 100), Rational64::from_integer(1), 0)
    }

    #[test]
    fn padded_type_one() {
        let t = make_caterpillar(5, 3).unwrap();
        let s = Tree::path(6).unwrap();
        let p = ConstructionParams {
            kind: ConstructionKind::B1,
            t1: 5,
            t2: 3,
            tau1: 3,
            tau2: 3,
        };
        let base = make_construction(&p).unwrap();
        // one more vertex red to the first clique, blue to the second
        let nn = base.n() + 1;
        let mut red = Graph::empty(nn);
        for (u, v) in base.red_graph().edges() {
            let (u, v) = (u + usize::from(u >= 7), v + usize::from(v >= 7));
            red.add_edge(u, v);
        }
        for u in 0..7 {
            red.add_edge(u, 7);
        }
        let col = TwoColouring::from_red(red);
        let mut w = canonical_witness(&p, Rational64::new(1, 2)).unwrap();
        w.u1.push(7);
        w.u2 = w.u2.iter().map(|&v| v + 1).collect();
        let out = extremal_strategy(&col, &t, &s, &w, &cfg()).unwrap();
        assert_eq!(out.colour, Colour::Red);
        assert_eq!(out.branch, "1.clique");
        assert!(verify_mono(&col, &t, Colour::Red, &out.embedding));
    }

    #[test]
    fn type_three_outside_vertex() {
        let t = make_caterpillar(5, 3).unwrap();
        let s = Tree::path(8).unwrap();
        let p = ConstructionParams {
            kind: ConstructionKind::B3,
            t1: 5,
            t2: 3,
            tau1: 4,
            tau2: 4,
        };
        let base = make_construction(&p).unwrap();
        assert_eq!(base.n(), 8);
        let mut red = base.red_graph().clone();
        let mut bigger = Graph::empty(9);
        for (u, v) in red.edges() {
            bigger.add_edge(u, v);
        }
        for u in 0..8 {
            bigger.add_edge(u, 8);
        }
        red = bigger;
        let col = TwoColouring::from_red(red);
        let w = canonical_witness(&p, Rational64::new(1, 4)).unwrap();
        let out = extremal_strategy(&col, &t, &s, &w, &cfg()).unwrap();
        assert_eq!(out.branch, "3.outside");
        assert_eq!(out.colour, Colour::Red);
        assert!(out.embedding.map.contains(&8));
        assert!(out.attempts.iter().any(|a| a.branch == "3.bipartite"));
    }

    #[test]
    fn unverified_witness() {
        let t = Tree::path(4).unwrap();
        let col = TwoColouring::all_blue(6);
        let w = ExtremalWitness {
            kind: ExtremalType::Type1,
            u1: vec![0, 1, 2, 3],
            u2: vec![4, 5],
            mu: Rational64::new(1, 10),
        };
        assert!(matches!(
            extremal_strategy(&col, &t, &t, &w, &cfg()),
            Err(StrategyFailure::Precondition { .. })
        ));
    }
}
