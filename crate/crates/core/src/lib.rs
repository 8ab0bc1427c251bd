//! Finite geometry of `2m`-subsets of `[2^k - 1]` (with `m = 2^(k-2)`), the
//! maximal cliques of its collinearity graph, and the symmetric designs and
//! Hadamard matrices they give rise to.

pub mod cli;
pub mod cliques;
pub mod combinatorics;
pub mod constructions;
pub mod designs;
pub mod error;
pub mod fano;
pub mod geometry;

pub use cliques::{classify_clique, Clique, CliqueClass, CliqueTag, CollinearityGraph};
pub use combinatorics::{ElementSet, Permutation};
pub use constructions::{
    decompose, hyperplane_complement_clique, non_centered_clique, product_clique,
};
pub use error::{Error, Result};
pub use fano::{FanoBijection, FanoPlane};
pub use geometry::{Geometry, GeometryParams};
