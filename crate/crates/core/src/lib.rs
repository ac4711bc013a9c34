//! Ramsey numbers of pairs of trees: extremal colourings, counterexample
//! families, embedding algorithms and exact small-scale computation.

pub mod colouring;
pub mod counterexamples;
pub mod embed;
pub mod error;
pub mod extremal_embed;
pub mod graph;
pub mod lp;
pub mod matching;
pub mod ramsey;
pub mod rational;
pub mod tree;
pub mod weights;

pub use error::{Error, Result};
