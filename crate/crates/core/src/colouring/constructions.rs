use super::{Colour, ExtremalType, ExtremalWitness, TwoColouring};
use crate::embed::{contains_mono, Search};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::tree::Tree;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConstructionKind {
    A1,
    A2,
    B1,
    B2,
    B3,
    B4,
}

impl ConstructionKind {
    pub const ALL: [ConstructionKind; 6] = [
        ConstructionKind::A1,
        ConstructionKind::A2,
        ConstructionKind::B1,
        ConstructionKind::B2,
        ConstructionKind::B3,
        ConstructionKind::B4,
    ];
}

impl FromStr for ConstructionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A1" => Ok(Self::A1),
            "A2" => Ok(Self::A2),
            "B1" => Ok(Self::B1),
            "B2" => Ok(Self::B2),
            "B3" => Ok(Self::B3),
            "B4" => Ok(Self::B4),
            _ => Err(Error::Parse(format!("unknown construction `{s}`"))),
        }
    }
}

/// Profiles `(t1, t2)` of `T` and `(tau1, tau2)` of `S`. A1 and A2 only read `t1, t2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConstructionParams {
    pub kind: ConstructionKind,
    pub t1: usize,
    pub t2: usize,
    pub tau1: usize,
    pub tau2: usize,
}

impl ConstructionParams {
    pub fn n(&self) -> usize {
        self.t1 + self.t2
    }

    pub fn nu(&self) -> usize {
        self.tau1 + self.tau2
    }

    /// Sizes of the two cliques and the colour inside them; the other colour runs between.
    pub fn parts(&self) -> Result<(usize, usize, Colour)> {
        if self.t2 == 0 || self.t1 < self.t2 || self.tau2 == 0 || self.tau1 < self.tau2 {
            return Err(Error::InvalidInput(format!(
                "need t1 >= t2 >= 1 and tau1 >= tau2 >= 1, got {self:?}"
            )));
        }
        let (n, nu) = (self.n(), self.nu());
        let (a, b, colour) = match self.kind {
            ConstructionKind::A1 => (self.t1 + self.t2 - 1, self.t2 - 1, Colour::Red),
            ConstructionKind::A2 => (self.t1 - 1, self.t1 - 1, Colour::Red),
            ConstructionKind::B1 => (n - 1, self.tau2 - 1, Colour::Red),
            ConstructionKind::B2 => (nu - 1, self.t2.min(nu) - 1, Colour::Blue),
            ConstructionKind::B3 => {
                let m = self.t1.min(nu) - 1;
                (m, m, Colour::Blue)
            }
            ConstructionKind::B4 => (self.tau1 - 1, self.tau1 - 1, Colour::Red),
        };
        if a + b == 0 {
            return Err(Error::InvalidInput(format!("{:?} is empty at {self:?}", self.kind)));
        }
        Ok((a, b, colour))
    }
}

/// Vertices `0..a` form the first clique and `a..a+b` the second.
pub fn make_construction(p: &ConstructionParams) -> Result<TwoColouring> {
    let (a, b, colour) = p.parts()?;
    let n = a + b;
    let mut red = Graph::empty(n);
    for u in 0..n {
        for v in (u + 1)..n {
            let same = (u < a) == (v < a);
            if same == (colour == Colour::Red) {
                red.add_edge(u, v);
            }
        }
    }
    Ok(TwoColouring::from_red(red))
}

/// The two cliques of a B construction as an extremal witness of the matching type.
pub fn canonical_witness(p: &ConstructionParams, mu: Rational64) -> Result<ExtremalWitness> {
    let (a, b, _) = p.parts()?;
    let kind = match p.kind {
        ConstructionKind::B1 => ExtremalType::Type1,
        ConstructionKind::B2 => ExtremalType::Type2,
        ConstructionKind::B3 => ExtremalType::Type3,
        ConstructionKind::B4 => ExtremalType::Type4,
        other => {
            return Err(Error::InvalidInput(format!("{other:?} has no extremal type")));
        }
    };
    Ok(ExtremalWitness {
        kind,
        u1: (0..a).collect(),
        u2: (a..a + b).collect(),
        mu,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AvoidanceReport {
    pub red_t: Search,
    pub blue_s: Search,
}

impl AvoidanceReport {
    /// Both searches exhausted without a copy.
    pub fn avoids(&self) -> bool {
        self.red_t == Search::No && self.blue_s == Search::No
    }
}

pub fn verify_avoids(c: &TwoColouring, t: &Tree, s: &Tree, budget: u64) -> AvoidanceReport {
    AvoidanceReport {
        red_t: contains_mono(c, t, Colour::Red, budget).search,
        blue_s: contains_mono(c, s, Colour::Blue, budget).search,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::make_caterpillar;

    fn params(kind: ConstructionKind, t1: usize, t2: usize, tau1: usize, tau2: usize) -> ConstructionParams {
        ConstructionParams { kind, t1, t2, tau1, tau2 }
    }

    #[test]
    fn b1_sizes() {
        let p = params(ConstructionKind::B1, 3, 2, 2, 2);
        assert_eq!(p.parts().unwrap(), (4, 1, Colour::Red));
        let c = make_construction(&p).unwrap();
        assert_eq!(c.n(), 5);
        assert_eq!(c.red_graph().edge_count(), 6);
    }

    #[test]
    fn b3_sizes() {
        // t1 = 3, nu = 4
        let p = params(ConstructionKind::B3, 3, 1, 2, 2);
        let c = make_construction(&p).unwrap();
        assert_eq!(c.n(), 4);
        assert!(c.is_blue(0, 1) && c.is_blue(2, 3));
        assert!((0..2).all(|u| (2..4).all(|v| c.is_red(u, v))));
    }

    #[test]
    fn degenerate_rejected() {
        assert!(make_construction(&params(ConstructionKind::B4, 1, 1, 1, 1)).is_err());
        assert!(make_construction(&params(ConstructionKind::B1, 2, 3, 1, 1)).is_err());
    }

    #[test]
    fn small_avoidance() {
        let t = make_caterpillar(3, 2).unwrap();
        let s = make_caterpillar(2, 2).unwrap();
        for kind in [ConstructionKind::B1, ConstructionKind::B2, ConstructionKind::B3, ConstructionKind::B4] {
            let c = make_construction(&params(kind, 3, 2, 2, 2)).unwrap();
            assert!(verify_avoids(&c, &t, &s, 100_000).avoids(), "{kind:?}");
        }
        let k5 = TwoColouring::all_red(5);
        assert!(verify_avoids(&k5, &Tree::path(3).unwrap(), &s, 100).red_t.is_found());
    }
}
