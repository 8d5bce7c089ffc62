//! Colored complete graphs with weights in `{0, 1, 2}` (green, blue, red):
//! forbidden-family containment, homomorphism certificates into `RK_r` and
//! `RK_r^-`, extremal constructions, and exhaustive verification engines.

pub mod analysis;
pub mod canon;
pub mod constructions;
pub mod embedding;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod homomorphism;
pub mod search;
pub mod threshold;
mod util;

pub use canon::{canonical_form, CanonicalForm};
pub use error::{Error, Result};
pub use graph::{ColoredGraph, BLUE, GREEN, RED};
pub use threshold::{exceeds_threshold, Threshold};
