//! Mod-2 Dyer-Lashof and Steenrod calculus on free homology models of
//! iterated loop spaces of spheres and of stunted projective spectra,
//! together with sweeps that check generator-set, kernel and suspension
//! statements about the Hurewicz image of Mahowald's `η_i` family.

pub mod action;
pub mod cli;
pub mod element;
pub mod error;
pub mod eta;
pub mod f2;
pub mod model;
pub mod opseq;
pub mod parse;
pub mod report;
pub mod steenrod;

pub use element::{graded_rank, Decorated, Element, Generator, Monomial};
pub use error::{Error, Result};
pub use model::{LoopBound, Model, ModelKind};
pub use opseq::{Excess, FormalOpSum, Indexing, OpSequence};
