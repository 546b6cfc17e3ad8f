//! Executable fine-grained reductions from Orthogonal Vectors to
//! approximate Bichromatic Closest Pair.
//!
//! The crate is organised bottom-up:
//!
//! - [`algebra`]: finite fields and systematic product-closed code pairs
//!   (Reed–Solomon and one-point Hermitian backends).
//! - [`protocol`]: MA and AMA communication protocols for Set Disjointness,
//!   with exact acceptance-probability measurement.
//! - [`cp_reduction`]: the protocol-to-vectors gadget turning an OV instance
//!   into a closest-pair instance with an exact distance gap.
//! - [`edit_reduction`]: the Hamming-to-edit-distance gadget embedding and its
//!   statistics.
//! - [`solvers`]: brute-force ground truth.
//! - [`ann_harness`]: closest pair through an approximate nearest neighbour
//!   interface via the partition scheme.
//! - [`formats`]: line-oriented instance, certificate and report files.

pub mod algebra;
pub mod ann_harness;
pub mod bits;
pub mod cp_reduction;
pub mod edit_reduction;
pub mod error;
pub mod formats;
pub mod instances;
pub mod protocol;
pub mod seed;
pub mod solvers;

pub use error::{Error, Result};
