//! Fixed ("repeated") local strategy: the same two-outcome projective
//! measurement on every copy, Bayes decision on the outcome counts.
//!
//! The measurement is a rank-one projector pair along a Bloch direction at
//! polar angle `Theta` from the bisector of the two states. The Bayes rule
//! on counts subsumes the majority-vote and unanimity-vote rules as the two
//! limiting threshold positions; [`decision_rule`] reports which one the
//! exact rule coincides with.

use crate::error::{Error, Result};
use crate::math::{binomial, golden_max, golden_min};
use crate::qubit::StatePair;

use std::f64::consts::PI;

/// A fixed two-outcome projective measurement with its per-state outcome
/// probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measurement1D {
    /// Polar angle of the measurement Bloch vector, in [0, pi].
    pub theta_meas: f64,
    /// Probability of the "+" outcome under state 0.
    pub p0: f64,
    /// Probability of the "+" outcome under state 1.
    pub p1: f64,
}

impl Measurement1D {
    pub fn new(pair: &StatePair, theta_meas: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta_meas) || !theta_meas.is_finite() {
            return Err(Error::domain(
                "theta_meas",
                format!("angle {theta_meas} outside [0, pi]"),
            ));
        }
        let (p0, p1) = outcome_probs(pair, theta_meas);
        Ok(Measurement1D { theta_meas, p0, p1 })
    }
}

/// Born-rule outcome probabilities (p0, p1) of the "+" projector at angle
/// `Theta`: `p_a = (1 + r_a cos(Theta -/+ theta/2)) / 2`.
pub fn outcome_probs(pair: &StatePair, theta_meas: f64) -> (f64, f64) {
    let p0 = 0.5 * (1.0 + pair.r0 * (theta_meas - pair.theta / 2.0).cos());
    let p1 = 0.5 * (1.0 + pair.r1 * (theta_meas + pair.theta / 2.0).cos());
    (p0, p1)
}

fn ln_pow(p: f64, k: u32) -> f64 {
    if k == 0 {
        0.0
    } else if p <= 0.0 {
        f64::NEG_INFINITY
    } else {
        k as f64 * p.ln()
    }
}

/// Error probability of repeating the measurement at `theta_meas` on all N
/// copies, with the exact Bayes decision on the "+" count.
///
/// `P_e = (1/2) sum_k C(N,k) min(p0^k q0^{N-k}, p1^k q1^{N-k})`, evaluated
/// in the log domain so large N stays stable.
pub fn repeated_error(pair: &StatePair, n: u32, theta_meas: f64) -> f64 {
    let (p0, p1) = outcome_probs(pair, theta_meas);
    let mut total = 0.0;
    for k in 0..=n {
        let ln_c = binomial(n as i64, k as i64).ln();
        let t0 = ln_pow(p0, k) + ln_pow(1.0 - p0, n - k);
        let t1 = ln_pow(p1, k) + ln_pow(1.0 - p1, n - k);
        let ln_min = t0.min(t1);
        if ln_min.is_finite() {
            total += (ln_c + ln_min).exp();
        }
    }
    (0.5 * total).clamp(0.0, 0.5)
}

pub(crate) const COARSE_ANGLES: usize = 181;

/// Local maxima/minima basins of a sampled function on [0, pi].
fn basin_indices(values: &[f64], minimize: bool) -> Vec<usize> {
    let better = |a: f64, b: f64| if minimize { a <= b } else { a >= b };
    let mut idx: Vec<usize> = (0..values.len())
        .filter(|&i| {
            (i == 0 || better(values[i], values[i - 1]))
                && (i + 1 == values.len() || better(values[i], values[i + 1]))
        })
        .collect();
    idx.sort_by(|&a, &b| {
        if minimize {
            values[a].total_cmp(&values[b])
        } else {
            values[b].total_cmp(&values[a])
        }
    });
    idx.truncate(3);
    idx
}

pub(crate) fn optimize_angle<F: Fn(f64) -> f64>(f: F, minimize: bool, xtol: f64) -> (f64, f64) {
    let step = PI / (COARSE_ANGLES - 1) as f64;
    let grid: Vec<f64> = (0..COARSE_ANGLES).map(|i| i as f64 * step).collect();
    let values: Vec<f64> = grid.iter().map(|&t| f(t)).collect();
    let mut best: Option<(f64, f64)> = None;
    for i in basin_indices(&values, minimize) {
        let lo = if i == 0 { 0.0 } else { grid[i - 1] };
        let hi = if i + 1 == grid.len() { PI } else { grid[i + 1] };
        let (x, fx) = if minimize {
            golden_min(&f, lo, hi, xtol)
        } else {
            golden_max(&f, lo, hi, xtol)
        };
        let keep = match best {
            None => true,
            Some((_, fb)) => {
                if minimize {
                    fx < fb
                } else {
                    fx > fb
                }
            }
        };
        if keep {
            best = Some((x, fx));
        }
    }
    best.expect("grid is non-empty")
}

/// Canonical branch for the mirror symmetry Theta -> pi - Theta present at
/// equal purities.
fn canonicalize_angle(pair: &StatePair, theta: f64) -> f64 {
    if pair.r0 == pair.r1 && theta > PI / 2.0 + 1e-12 {
        PI - theta
    } else {
        theta
    }
}

/// Globally optimal repeated strategy: error probability and the best
/// measurement angle (coarse 181-point scan plus golden-section refinement
/// of the best basins).
pub fn repeated_error_opt(pair: &StatePair, n: u32) -> (f64, f64) {
    let (theta, pe) = optimize_angle(|t| repeated_error(pair, n, t), true, 1e-9);
    let theta = canonicalize_angle(pair, theta);
    (pe, theta)
}

/// Classical Chernoff exponent of the two outcome distributions at a fixed
/// measurement angle:
/// `-log min_s [p0^s p1^{1-s} + (1-p0)^s (1-p1)^{1-s}]`.
pub fn classical_chernoff_exponent(pair: &StatePair, theta_meas: f64) -> f64 {
    let (p0, p1) = outcome_probs(pair, theta_meas);
    if (p0 - p1).abs() < 1e-15 {
        return 0.0;
    }
    let q = |s: f64| {
        let a = p0.powf(s) * p1.powf(1.0 - s);
        let b = (1.0 - p0).powf(s) * (1.0 - p1).powf(1.0 - s);
        a + b
    };
    // deterministic outcomes (p = 0 or 1) make the infimum sit at an open
    // endpoint; sample just inside
    let (_, m) = golden_min(q, 0.0, 1.0, 1e-12);
    let m = m.min(q(1e-12)).min(q(1.0 - 1e-12));
    (-m.ln()).max(0.0)
}

/// Best classical Chernoff exponent over the measurement angle, with the
/// maximizing angle on the canonical branch.
pub fn repeated_exponent_opt(pair: &StatePair) -> (f64, f64) {
    let (theta, c) = optimize_angle(|t| classical_chernoff_exponent(pair, t), false, 1e-10);
    (c.max(0.0), canonicalize_angle(pair, theta))
}

/// Angular tolerance used to decide that the optimal angle has left the
/// perpendicular-bisector direction.
pub const ANGLE_DEPARTURE_TOL: f64 = 1e-4;

/// Smallest purity r (at r0 = r1 = r) for which the exponent-maximizing
/// measurement angle departs from `Theta = pi/2` by more than
/// [`ANGLE_DEPARTURE_TOL`], located by bisection to `tol` in r.
pub fn critical_purity(theta: f64, tol: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < PI) {
        return Err(Error::domain(
            "theta",
            format!("angle {theta} outside (0, pi)"),
        ));
    }
    let departed = |r: f64| -> Result<bool> {
        let pair = StatePair::new(r, r, theta)?;
        let (_, t_star) = repeated_exponent_opt(&pair);
        Ok((t_star - PI / 2.0).abs() > ANGLE_DEPARTURE_TOL)
    };
    let mut lo = 0.5;
    let mut hi = 1.0 - 1e-6;
    if departed(lo)? {
        return Err(Error::Solver(
            "optimal angle already departed at r = 0.5; no transition bracket".into(),
        ));
    }
    if !departed(hi)? {
        return Err(Error::Solver(
            "no departure from Theta = pi/2 found below r = 1".into(),
        ));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if departed(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Which classical counting rule the exact Bayes rule coincides with at this
/// angle: an interior threshold acts as a majority-style vote, an endpoint
/// threshold as a unanimity vote.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecisionRule {
    /// Bayes decision flips at an interior count threshold.
    Majority { threshold: u32 },
    /// Only an unanimous count decides for one of the states.
    Unanimity,
    /// The two likelihoods never separate (identical outcome statistics).
    Degenerate,
}

/// Classifies the Bayes decision rule on counts for the given angle.
pub fn decision_rule(pair: &StatePair, n: u32, theta_meas: f64) -> DecisionRule {
    let (p0, p1) = outcome_probs(pair, theta_meas);
    let prefer0: Vec<bool> = (0..=n)
        .map(|k| {
            let t0 = ln_pow(p0, k) + ln_pow(1.0 - p0, n - k);
            let t1 = ln_pow(p1, k) + ln_pow(1.0 - p1, n - k);
            t0 > t1
        })
        .collect();
    let flips: Vec<u32> = (1..=n).filter(|&k| prefer0[k as usize] != prefer0[k as usize - 1]).collect();
    match flips.as_slice() {
        [] => DecisionRule::Degenerate,
        [k] if *k == 1 || *k == n => DecisionRule::Unanimity,
        [k] => DecisionRule::Majority { threshold: *k },
        _ => DecisionRule::Degenerate,
    }
}
