//! m2lab: exact graphs, spectra, and expansion experiments over the 2x2
//! matrix ring M2(F_q) and its special linear group SL2(F_q).
//!
//! The crate builds the difference Cayley graphs and sum-product digraphs
//! on these rings, measures their (n, d, lambda) parameters by direct
//! eigenvalue computation at small q, verifies the structural identities
//! behind those parameters (normality, common-neighbor counts, walk-matrix
//! decompositions, determinant-slice scaling), and measures how fast the
//! images of the polynomials x+y, xy, x+yz, x(y+z), and xy+z+t fill
//! M2(F_q) on random subsets.
//!
//! Every runnable capability has a worked example under `examples/`; the
//! `m2lab` binary exposes the same operations as subcommands (`enumerate`,
//! `spectrum`, `verify`, `experiment`, `sweep`, `report`).

pub mod cli;
pub mod error;
pub mod expand;
pub mod field;
pub mod graph;
pub mod matrix;
pub mod rng;
pub mod spectral;
pub mod tables;
pub mod verify;

pub use error::{Error, Result};
pub use field::{Fe, Field};
pub use graph::{build_graph, GraphSpec, RegularGraph};
pub use matrix::{Mat2, Rank1Profile};
pub use spectral::{second_eigenvalue, SpectralReport};
pub use tables::{Domain, GroupTable, MatIdx};
