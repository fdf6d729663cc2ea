//! Optimal collective (unconstrained) discrimination error probability.
//!
//! `P_e = (1/2)(1 - (1/2)||rho0^N - rho1^N||_1)` at equal priors. The block
//! route sums the trace norms of the per-sector differences weighted by their
//! multiplicities; the dense route diagonalizes the full 2^N difference and
//! exists for verification only.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::blocks::{self, spin_values};
use crate::error::Result;
use crate::qubit::StatePair;

fn trace_norm_sym(m: DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m)
        .eigenvalues
        .iter()
        .map(|l| l.abs())
        .sum()
}

/// Error probability of the optimal collective measurement on N copies.
pub fn collective_error(pair: &StatePair, n: u32) -> Result<f64> {
    let mut total = 0.0;
    for two_j in spin_values(n) {
        let diff = blocks::sigma_block(pair, 0, n, two_j)?
            - blocks::sigma_block(pair, 1, n, two_j)?;
        let deg = blocks::degeneracy(n, two_j)? as f64;
        total += deg * trace_norm_sym(diff);
    }
    Ok((0.5 * (1.0 - 0.5 * total)).clamp(0.0, 0.5))
}

/// Dense-eigenvalue oracle for [`collective_error`], N <= 12.
pub fn collective_error_dense(pair: &StatePair, n: u32) -> Result<f64> {
    let diff = blocks::sigma_dense(pair, 0, n)? - blocks::sigma_dense(pair, 1, n)?;
    Ok((0.5 * (1.0 - 0.5 * trace_norm_sym(diff))).clamp(0.0, 0.5))
}

/// Single-copy Helstrom probability in closed form,
/// `(1 - |r0 - r1 vectors| / 2) / 2`.
pub fn single_copy_closed_form(pair: &StatePair) -> f64 {
    let d = (pair.r0 * pair.r0 + pair.r1 * pair.r1
        - 2.0 * pair.r0 * pair.r1 * pair.theta.cos())
    .max(0.0)
    .sqrt();
    0.5 * (1.0 - 0.5 * d)
}
