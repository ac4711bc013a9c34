use super::{Colour, TwoColouring};
use crate::graph::VertexSet;
use crate::tree::Tree;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExtremalType {
    #[serde(rename = "1")]
    Type1,
    #[serde(rename = "2")]
    Type2,
    #[serde(rename = "3")]
    Type3,
    #[serde(rename = "4")]
    Type4,
}

impl ExtremalType {
    pub const ALL: [ExtremalType; 4] = [Self::Type1, Self::Type2, Self::Type3, Self::Type4];

    pub fn from_index(i: u8) -> Option<Self> {
        Self::ALL.get(usize::from(i).checked_sub(1)?).copied()
    }

    /// Colour that must be sparse inside `U1` (and inside `U2` for types 3 and 4).
    fn inner_sparse(self) -> Colour {
        match self {
            Self::Type1 | Self::Type4 => Colour::Blue,
            Self::Type2 | Self::Type3 => Colour::Red,
        }
    }

    /// Colour that must be sparse between `U1` and `U2`.
    fn cross_sparse(self) -> Colour {
        match self {
            Self::Type1 | Self::Type4 => Colour::Red,
            Self::Type2 | Self::Type3 => Colour::Blue,
        }
    }

    fn both_inner(self) -> bool {
        matches!(self, Self::Type3 | Self::Type4)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExtremalWitness {
    #[serde(rename = "type")]
    pub kind: ExtremalType,
    pub u1: Vec<usize>,
    pub u2: Vec<usize>,
    #[serde(with = "crate::rational::r64")]
    pub mu: Rational64,
}

/// Lower bounds on `|U1|, |U2|` before the `(1 - mu)` factor.
fn size_targets(kind: ExtremalType, t: &Tree, s: &Tree) -> (usize, usize) {
    let pt = t.profile();
    let ps = s.profile();
    match kind {
        ExtremalType::Type1 => (pt.n, ps.t2),
        ExtremalType::Type2 => (ps.n, pt.t2),
        ExtremalType::Type3 => (pt.t1, pt.t1),
        ExtremalType::Type4 => (ps.t1, ps.t1),
    }
}

fn at_least(size: usize, mu: Rational64, target: usize) -> bool {
    Rational64::from_integer(size as i64) >= (Rational64::from_integer(1) - mu) * Rational64::from_integer(target as i64)
}

fn at_most(deg: usize, slack: Rational64) -> bool {
    Rational64::from_integer(deg as i64) <= slack
}

/// Checks every size and degree condition of the claimed type exactly; slack is `mu * |T|`.
pub fn verify_extremal(c: &TwoColouring, w: &ExtremalWitness, t: &Tree, s: &Tree) -> bool {
    let nn = c.n();
    if w.u1.iter().chain(&w.u2).any(|&v| v >= nn) {
        return false;
    }
    let u1 = VertexSet::from_iter_with_capacity(nn, w.u1.iter().copied());
    let u2 = VertexSet::from_iter_with_capacity(nn, w.u2.iter().copied());
    if u1.len() != w.u1.len() || u2.len() != w.u2.len() || u1.intersection_len(&u2) > 0 {
        return false;
    }
    let (a, b) = size_targets(w.kind, t, s);
    if !at_least(u1.len(), w.mu, a) || !at_least(u2.len(), w.mu, b) {
        return false;
    }
    let slack = w.mu * Rational64::from_integer(t.n() as i64);
    let inner = w.kind.inner_sparse();
    let cross = w.kind.cross_sparse();
    let inner_ok = |set: &VertexSet| set.iter().all(|u| at_most(c.degree_into(u, set, inner), slack));
    if !inner_ok(&u1) || (w.kind.both_inner() && !inner_ok(&u2)) {
        return false;
    }
    u1.iter().all(|u| at_most(c.degree_into(u, &u2, cross), slack))
        && u2.iter().all(|u| at_most(c.degree_into(u, &u1, cross), slack))
}

/// Heuristic search for a witness: grows `U1` from each seed's neighbourhood in
/// the dense colour, prunes violators, then collects `U2` from the rest.
/// Only a verified witness is returned; `None` proves nothing.
pub fn find_extremal_witness(c: &TwoColouring, t: &Tree, s: &Tree, mu: Rational64) -> Option<ExtremalWitness> {
    let nn = c.n();
    let slack = (mu * Rational64::from_integer(t.n() as i64)).floor().to_integer().max(0) as usize;
    for kind in ExtremalType::ALL {
        let inner = kind.inner_sparse();
        let cross = kind.cross_sparse();
        for seed in 0..nn {
            let mut u1 = VertexSet::from_iter_with_capacity(nn, c.neighbours(seed, inner.other()));
            u1.insert(seed);
            prune(c, &mut u1, None, inner, slack);

            let mut u2 = VertexSet::new(nn);
            for v in 0..nn {
                if !u1.contains(v) && c.degree_into(v, &u1, cross) <= slack {
                    u2.insert(v);
                }
            }
            if kind.both_inner() {
                prune(c, &mut u2, None, inner, slack);
            }
            // cross conditions may now fail on U1 because U2 grew
            loop {
                let before = u1.len() + u2.len();
                prune(c, &mut u1, Some(&u2), cross, slack);
                prune(c, &mut u2, Some(&u1), cross, slack);
                if u1.len() + u2.len() == before {
                    break;
                }
            }
            for (a, b) in [(&u1, &u2), (&u2, &u1)] {
                let w = ExtremalWitness {
                    kind,
                    u1: a.to_vec(),
                    u2: b.to_vec(),
                    mu,
                };
                if verify_extremal(c, &w, t, s) {
                    return Some(w);
                }
            }
        }
    }
    None
}

/// Repeatedly removes the member of `set` with the largest `colour`-degree into
/// `against` (default: `set` itself) while that degree exceeds `slack`.
fn prune(c: &TwoColouring, set: &mut VertexSet, against: Option<&VertexSet>, colour: Colour, slack: usize) {
    loop {
        let target = against.unwrap_or(set);
        let worst = set
            .iter()
            .map(|u| (c.degree_into(u, target, colour), u))
            .max();
        match worst {
            Some((d, u)) if d > slack => set.remove(u),
            _ => return,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::{canonical_witness, make_construction, ConstructionKind, ConstructionParams};
    use crate::tree::make_caterpillar;

    fn setup(kind: ConstructionKind) -> (TwoColouring, ConstructionParams, Tree, Tree) {
        let p = ConstructionParams { kind, t1: 5, t2: 3, tau1: 4, tau2: 4 };
        (
            make_construction(&p).unwrap(),
            p,
            make_caterpillar(5, 3).unwrap(),
            make_caterpillar(4, 4).unwrap(),
        )
    }

    #[test]
    fn canonical_witnesses_verify() {
        for kind in [ConstructionKind::B1, ConstructionKind::B2, ConstructionKind::B3, ConstructionKind::B4] {
            let (c, p, t, s) = setup(kind);
            // every clique is one vertex short of its target
            let w = canonical_witness(&p, Rational64::new(1, 3)).unwrap();
            assert!(verify_extremal(&c, &w, &t, &s), "{kind:?}");
            let exact = canonical_witness(&p, Rational64::from_integer(0)).unwrap();
            assert!(!verify_extremal(&c, &exact, &t, &s), "{kind:?} at mu = 0");
        }
    }

    #[test]
    fn overlap_rejected() {
        let (c, p, t, s) = setup(ConstructionKind::B1);
        let mut w = canonical_witness(&p, Rational64::new(1, 2)).unwrap();
        w.u2 = w.u1.clone();
        assert!(!verify_extremal(&c, &w, &t, &s));
    }

    #[test]
    fn finder_on_constructions() {
        for (kind, want) in [(ConstructionKind::B1, ExtremalType::Type1), (ConstructionKind::B4, ExtremalType::Type4)] {
            let (c, _, t, s) = setup(kind);
            let w = find_extremal_witness(&c, &t, &s, Rational64::new(1, 3)).expect("witness");
            assert!(verify_extremal(&c, &w, &t, &s));
            if kind == ConstructionKind::B1 {
                assert_eq!(w.kind, want);
            }
        }
    }

    #[test]
    fn witness_json() {
        let w = ExtremalWitness { kind: ExtremalType::Type3, u1: vec![0], u2: vec![1], mu: Rational64::new(1, 20) };
        let v = serde_json::to_value(&w).unwrap();
        assert_eq!(v["type"], "3");
        assert_eq!(v["mu"], "1/20");
        assert_eq!(serde_json::from_value::<ExtremalWitness>(v).unwrap(), w);
    }
}
