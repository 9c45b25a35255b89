//! Eigenvalue spectra of H-products of commuting graphs.
//!
//! The library reduces the `(n l)`-dimensional eigenproblem of an H-product
//! to `n` independent `l`-dimensional ones through a generalized Fiedler
//! construction ([`fiedler`]), using a common eigenbasis of the commuting
//! factors ([`linalg::common_eigenbasis`]). Every structured result can be
//! checked against a dense eigensolve ([`spectra::dense_oracle_spectrum`]).

pub mod bench;
pub mod error;
pub mod fiedler;
pub mod generate;
pub mod graphs;
pub mod linalg;
pub mod spectra;
pub mod spectrum;

pub use error::{Error, Result};
pub use fiedler::{CouplingSpec, Eigenpair, FiedlerInput};
pub use graphs::{Graph, UniversalParams};
pub use linalg::{CommonBasis, EigenDecomposition, SymMatrix};
pub use spectra::{HProductJob, MatrixKind, SpectrumReport};
pub use spectrum::{Provenance, Spectrum};
