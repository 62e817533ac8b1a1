//! Maximum r-degenerate matchings in chordal graphs and greedy r-degenerate
//! edge colorings.
//!
//! A matching `M` is *r-degenerate* when the subgraph induced by its
//! endpoints is r-degenerate. [`nu_r`] computes the largest one in a chordal
//! graph by dynamic programming over a nice clique-tree decomposition;
//! [`greedy_color`] partitions the edges of any graph into r-degenerate
//! matchings using a bounded palette. The [`oracle`] module holds exhaustive
//! reference solvers for small graphs.
//!
//! ```
//! use degmatch::{graph::named, nu_r, greedy_color, GreedyOptions};
//!
//! let p6 = named::path(6);
//! assert_eq!(nu_r(&p6, 1).unwrap().value, 3);
//!
//! let c = greedy_color(&named::complete(4), 1, &GreedyOptions::default()).unwrap();
//! assert!(c.coloring.max_color() <= c.palette.k);
//! ```

pub mod chordal;
pub mod coloring;
pub mod decomposition;
pub mod degeneracy;
pub mod dp;
pub mod error;
pub mod generate;
pub mod graph;
pub mod io;
pub mod matching;
pub mod oracle;
pub mod survey;

pub use chordal::{is_chordal, mcs_order, EliminationOrder};
pub use coloring::{
    greedy_color, palette_size, verify_coloring, EdgeColoring, EdgeOrder, GreedyOptions,
};
pub use decomposition::{build_nice_decomposition, validate_decomposition, NiceTreeDecomposition};
pub use degeneracy::{degeneracy, is_r_degenerate};
pub use dp::{nu_r, nu_r_weighted, DpSolution, WeightedGraph};
pub use error::{Error, Result};
pub use generate::{generate, Family, GeneratorSpec};
pub use graph::{Edge, Graph};
pub use matching::{classify_matching, Matching, MatchingClass};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/degeneracy.md")]
    mod degeneracy {}
    #[doc = include_str!("../../../book/src/decompositions.md")]
    mod decompositions {}
    #[doc = include_str!("../../../book/src/dynamic-program.md")]
    mod dynamic_program {}
    #[doc = include_str!("../../../book/src/coloring.md")]
    mod coloring {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    mod oracles {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
