//! Single-qubit state pairs: Bloch construction, fidelity, and per-copy
//! asymptotic exponents.
//!
//! Both candidate states can always be taken real in a common basis, so the
//! whole crate works with real symmetric 2x2 density matrices. Angles are
//! polar angles measured from the bisector of the two Bloch vectors: state 0
//! sits at +theta/2 and state 1 at -theta/2.

use nalgebra::Matrix2;

use crate::error::{Error, Result};
use crate::math::golden_min;

/// The two candidate single-qubit states.
#[derive(Debug, Clone, PartialEq)]
pub struct StatePair {
    /// Purity (Bloch-vector length) of state 0, in [0, 1].
    pub r0: f64,
    /// Purity of state 1, in [0, 1].
    pub r1: f64,
    /// Relative Bloch angle between the two states, in [0, pi].
    pub theta: f64,
    /// Density matrix of state 0 (real symmetric, unit trace).
    pub rho0: Matrix2<f64>,
    /// Density matrix of state 1.
    pub rho1: Matrix2<f64>,
}

fn rho_from_bloch(r: f64, theta: f64, which: usize) -> Matrix2<f64> {
    let c = r * (theta / 2.0).cos();
    let sign = if which == 0 { 1.0 } else { -1.0 };
    let s = sign * r * (theta / 2.0).sin() / 2.0;
    Matrix2::new((1.0 + c) / 2.0, s, s, (1.0 - c) / 2.0)
}

impl StatePair {
    /// Builds a pair from Bloch data.
    pub fn new(r0: f64, r1: f64, theta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r0) || !r0.is_finite() {
            return Err(Error::domain("r0", format!("purity {r0} outside [0, 1]")));
        }
        if !(0.0..=1.0).contains(&r1) || !r1.is_finite() {
            return Err(Error::domain("r1", format!("purity {r1} outside [0, 1]")));
        }
        if !(0.0..=std::f64::consts::PI).contains(&theta) || !theta.is_finite() {
            return Err(Error::domain(
                "theta",
                format!("angle {theta} outside [0, pi]"),
            ));
        }
        Ok(StatePair {
            r0,
            r1,
            theta,
            rho0: rho_from_bloch(r0, theta, 0),
            rho1: rho_from_bloch(r1, theta, 1),
        })
    }

    pub fn rho(&self, which: usize) -> &Matrix2<f64> {
        if which == 0 {
            &self.rho0
        } else {
            &self.rho1
        }
    }

    pub fn purity(&self, which: usize) -> f64 {
        if which == 0 {
            self.r0
        } else {
            self.r1
        }
    }

    /// True when the two density matrices coincide (discrimination is
    /// impossible and every error probability equals 1/2).
    pub fn is_degenerate(&self) -> bool {
        (self.rho0 - self.rho1).norm() < 1e-14
    }

    /// The pair with the two roles exchanged.
    pub fn swapped(&self) -> Self {
        StatePair::new(self.r1, self.r0, self.theta).expect("valid pair stays valid")
    }

    /// Fidelity F(rho0, rho1) = (tr |sqrt(rho0) sqrt(rho1)|)^2.
    ///
    /// For 2x2 states this reduces to the closed form
    /// tr(rho0 rho1) + 2 sqrt(det rho0 * det rho1).
    pub fn fidelity(&self) -> f64 {
        let cross = (self.rho0 * self.rho1).trace();
        let d0 = self.rho0.determinant().max(0.0);
        let d1 = self.rho1.determinant().max(0.0);
        (cross + 2.0 * (d0 * d1).sqrt()).clamp(0.0, 1.0)
    }

    /// Asymptotic error-rate exponent of the optimal collective strategy,
    /// -log min_{s in [0,1]} tr(rho0^s rho1^(1-s)).
    pub fn quantum_chernoff_exponent(&self) -> f64 {
        if self.is_degenerate() {
            return 0.0;
        }
        let overlap = |s: f64| (mat_pow_sym2(&self.rho0, s) * mat_pow_sym2(&self.rho1, 1.0 - s))
            .trace();
        // The overlap is convex in s with value 1 at both endpoints, but at
        // purity 1 the infimum can sit at an (open) endpoint; sample near the
        // edges as a guard.
        let (_, q) = golden_min(overlap, 0.0, 1.0, 1e-12);
        let q = q.min(overlap(1e-9)).min(overlap(1.0 - 1e-9));
        (-q.ln()).max(0.0)
    }

    /// Fidelity bounds on the collective exponent,
    /// (-(1/2) log F, -log F); the upper bound is exactly twice the lower.
    ///
    /// Orthogonal pure states have F = 0; both bounds are then returned as
    /// `f64::INFINITY`.
    pub fn fidelity_exponent_bounds(&self) -> (f64, f64) {
        let f = self.fidelity();
        if f <= 0.0 {
            return (f64::INFINITY, f64::INFINITY);
        }
        let upper = -f.ln();
        (0.5 * upper, upper)
    }
}

/// `m^s` for a real symmetric PSD 2x2 matrix, by closed-form eigendecomposition.
pub(crate) fn mat_pow_sym2(m: &Matrix2<f64>, s: f64) -> Matrix2<f64> {
    let a = m[(0, 0)];
    let d = m[(1, 1)];
    let b = m[(0, 1)];
    let mean = 0.5 * (a + d);
    let rad = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    let l1 = (mean + rad).max(0.0);
    let mut l2 = (mean - rad).max(0.0);
    // an eigenvalue that is zero up to roundoff must stay zero: a stray
    // 1e-17 raised to a small fractional power is order one, not small
    if l2 < 1e-14 * l1 {
        l2 = 0.0;
    }
    if rad < 1e-15 {
        return Matrix2::identity() * l1.powf(s);
    }
    // eigenvector for l1; pick the better-conditioned formula
    let (vx, vy) = if (l1 - d).abs() >= (l1 - a).abs() {
        (l1 - d, b)
    } else {
        (b, l1 - a)
    };
    let norm = (vx * vx + vy * vy).sqrt();
    let (vx, vy) = (vx / norm, vy / norm);
    let p1 = Matrix2::new(vx * vx, vx * vy, vx * vy, vy * vy);
    let p2 = Matrix2::identity() - p1;
    p1 * l1.powf(s) + p2 * l2.powf(s)
}
