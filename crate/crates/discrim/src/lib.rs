//! Multiple-copy discrimination of two qubit mixed states.
//!
//! Given `N` identical copies of one of two candidate qubit states, this
//! crate computes exact finite-`N` error probabilities and asymptotic error
//! rates for four measurement protocols:
//!
//! - **collective**: the optimal unconstrained joint measurement on all
//!   copies (Helstrom bound), evaluated block-by-block in the total-spin
//!   decomposition ([`helstrom`]);
//! - **ppt**: a lower bound on every LOCC protocol, obtained by relaxing
//!   the measurement constraints to positivity under partial transposition
//!   and solved as a small SDP over the permutation+PT invariant operator
//!   parametrization ([`sdp`]);
//! - **repeated**: the best fixed local projective measurement applied to
//!   every copy, with Bayes decision on the outcome counts ([`local`]);
//! - **adaptive**: the optimal one-way adaptive local protocol, found by
//!   backward dynamic programming over the posterior ([`adaptive`]).
//!
//! The block-diagonalization machinery for permutation and partial-transpose
//! invariant operators lives in [`blocks`], together with dense brute-force
//! oracles used for verification. Parameter sweeps, rate fits and CSV/JSON
//! emission live in [`runner`]; the `discrim` binary is a thin CLI over it.
//!
//! See the crate `examples/` directory for one runnable example per
//! capability.

pub mod adaptive;
pub mod blocks;
pub mod error;
pub mod helstrom;
pub mod local;
mod math;
pub mod qubit;
pub mod runner;
pub mod sdp;

pub use error::{Error, Result};
pub use qubit::StatePair;
