//! The lifted count function, sparsity checking, independence and rank.

pub mod circuits;
pub mod pebble;
mod rank;
mod sparsity;

pub use circuits::{circuits_from_oracle, enumerate_circuits};
pub use pebble::{count_independent, count_matroid_rank, k0_orientation, PebbleGame};
pub use rank::{greedy_basis, is_full, matroid_rank, rank_certificate, tight_sets, PartitionCertificate, CERTIFICATE_BOUND, SUBSET_BOUND};
pub use sparsity::{
    beta, check_sparse, check_sparse_in, check_sparse_naive, f_alpha, independent, CountRule,
    CountVerdict, SparsityChecker, SparsityParams, NAIVE_BOUND,
};
