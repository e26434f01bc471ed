//! Tools for studying online multiclass learning with bandit feedback on
//! finite classes.
//!
//! - [`field`]: arithmetic and row reduction over GF(p).
//! - [`hypotheses`]: the linear class `F_L(p,n)` and explicit label tables.
//! - [`lemmas`]: exact pairwise-independence probabilities, bucket counts and
//!   the balanced-vector search.
//! - [`verify`]: exhaustive and sampled sweeps producing JSON reports.
//! - [`game`]: the round protocol for standard and bandit feedback.
//! - [`strategies`]: learners, adversaries and the explicit round bound.
//! - [`opt`]: exact optimal mistake counts by memoized minimax.

pub mod error;
pub mod field;
pub mod game;
pub mod hypotheses;
pub mod lemmas;
pub mod opt;
pub mod strategies;
pub mod verify;

pub use error::{Error, Result};
