//! Gain graphs over finite groups and the matroids induced by lifted
//! `(k, l)`-count functions.
//!
//! The crate covers finite group arithmetic ([`group`]), polymatroidal
//! functions on group subsets ([`alpha`]), group-labeled multigraphs with
//! switching and near-balance detection ([`graph`]), sparsity checking,
//! independence and rank ([`count`]), exhaustive verification
//! ([`verifier`]) and a text file format ([`format`]).

pub mod alpha;
pub mod count;
pub mod error;
pub mod format;
pub mod graph;
pub mod group;
pub mod verifier;

pub use alpha::{AlphaFunction, AxiomOptions, AxiomReport, BuiltinAlpha};
pub use count::{CountRule, CountVerdict, PartitionCertificate, SparsityParams};
pub use error::{Error, Result};
pub use graph::{EdgeSet, GainGraph, NearBalanceCertificate};
pub use group::{Elem, ElemSet, Group, GroupSpec};
