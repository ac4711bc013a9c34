//! Red/blue colourings of complete graphs. Only red adjacency is stored;
//! blue is its complement.

mod constructions;
mod extremal;
mod random;

pub use constructions::{
    canonical_witness, make_construction, verify_avoids, AvoidanceReport,
    ConstructionKind, ConstructionParams,
};
pub use extremal::{find_extremal_witness, verify_extremal, ExtremalType, ExtremalWitness};
pub use random::{check_neighbourhood_expansion, sample_random_colouring, ExpansionCheck};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use serde::{Deserialize, Serialize};
use std::borrow::Cow;
use std::fmt::{self, Write as _};
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Colour {
    Red,
    Blue,
}

impl Colour {
    pub fn other(self) -> Colour {
        match self {
            Colour::Red => Colour::Blue,
            Colour::Blue => Colour::Red,
        }
    }
}

impl fmt::Display for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Colour::Red => "red",
            Colour::Blue => "blue",
        })
    }
}

impl FromStr for Colour {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "red" => Ok(Colour::Red),
            "blue" => Ok(Colour::Blue),
            _ => Err(Error::Parse(format!("unknown colour `{s}`"))),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ColouringJson", into = "ColouringJson")]
pub struct TwoColouring {
    red: Graph,
}

#[derive(Clone, Serialize, Deserialize)]
struct ColouringJson {
    n: usize,
    red: Vec<[usize; 2]>,
}

impl TryFrom<ColouringJson> for TwoColouring {
    type Error = Error;
    fn try_from(j: ColouringJson) -> Result<Self> {
        let edges: Vec<_> = j.red.into_iter().map(|[u, v]| (u, v)).collect();
        Self::from_red_edges(j.n, &edges)
    }
}

impl From<TwoColouring> for ColouringJson {
    fn from(c: TwoColouring) -> Self {
        ColouringJson {
            n: c.n(),
            red: c.red.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl TwoColouring {
    pub fn from_red(red: Graph) -> Self {
        Self { red }
    }

    pub fn from_red_edges(n: usize, red: &[(usize, usize)]) -> Result<Self> {
        for &(u, v) in red {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidInput(format!("bad red edge ({u},{v}) on {n} vertices")));
            }
        }
        Ok(Self::from_red(Graph::from_edges(n, red)))
    }

    pub fn all_red(n: usize) -> Self {
        Self::from_red(Graph::complete(n))
    }

    pub fn all_blue(n: usize) -> Self {
        Self::from_red(Graph::empty(n))
    }

    pub fn n(&self) -> usize {
        self.red.n()
    }

    pub fn is_red(&self, u: usize, v: usize) -> bool {
        self.red.has_edge(u, v)
    }

    pub fn is_blue(&self, u: usize, v: usize) -> bool {
        u != v && !self.red.has_edge(u, v)
    }

    pub fn has(&self, colour: Colour, u: usize, v: usize) -> bool {
        match colour {
            Colour::Red => self.is_red(u, v),
            Colour::Blue => self.is_blue(u, v),
        }
    }

    pub fn colour(&self, u: usize, v: usize) -> Colour {
        if self.is_red(u, v) {
            Colour::Red
        } else {
            Colour::Blue
        }
    }

    pub fn red_graph(&self) -> &Graph {
        &self.red
    }

    /// The graph of one colour; blue is materialized on demand.
    pub fn graph(&self, colour: Colour) -> Cow<'_, Graph> {
        match colour {
            Colour::Red => Cow::Borrowed(&self.red),
            Colour::Blue => Cow::Owned(self.red.complement()),
        }
    }

    pub fn set_colour(&mut self, u: usize, v: usize, colour: Colour) {
        match colour {
            Colour::Red => self.red.add_edge(u, v),
            Colour::Blue => self.red.remove_edge(u, v),
        }
    }

    pub fn degree(&self, v: usize, colour: Colour) -> usize {
        match colour {
            Colour::Red => self.red.degree(v),
            Colour::Blue => self.n() - 1 - self.red.degree(v),
        }
    }

    /// Degree of `v` into `set` in the given colour (`v` itself never counts).
    pub fn degree_into(&self, v: usize, set: &VertexSet, colour: Colour) -> usize {
        let red = self.red.degree_into(v, set);
        match colour {
            Colour::Red => red,
            Colour::Blue => set.len() - red - usize::from(set.contains(v)),
        }
    }

    pub fn neighbours(&self, v: usize, colour: Colour) -> Vec<usize> {
        (0..self.n()).filter(|&u| self.has(colour, v, u)).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph G {\n");
        for v in 0..self.n() {
            let _ = writeln!(s, "  {v};");
        }
        for u in 0..self.n() {
            for v in (u + 1)..self.n() {
                let _ = writeln!(s, "  {u} -- {v} [color={}];", self.colour(u, v));
            }
        }
        s.push_str("}\n");
        s
    }
}

impl fmt::Debug for TwoColouring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TwoColouring")
            .field("n", &self.n())
            .field("red", &self.red.edges())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blue_is_complement() {
        let c = TwoColouring::from_red_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(c.is_blue(0, 2) && !c.is_blue(0, 0) && c.is_red(1, 0));
        assert_eq!(c.degree(0, Colour::Blue), 2);
        assert_eq!(c.graph(Colour::Blue).edge_count(), 4);
        let set = VertexSet::from_iter_with_capacity(4, [0, 1, 2]);
        assert_eq!(c.degree_into(0, &set, Colour::Blue), 1);
        assert_eq!(c.degree_into(0, &set, Colour::Red), 1);
    }

    #[test]
    fn json_and_dot() {
        let c = TwoColouring::from_red_edges(3, &[(0, 2)]).unwrap();
        let back = TwoColouring::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
        assert!(c.to_dot().contains("0 -- 2 [color=red]"));
        assert!(TwoColouring::from_red_edges(2, &[(0, 2)]).is_err());
    }
}
