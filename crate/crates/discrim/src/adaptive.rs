//! One-way adaptive local strategy: each copy is measured projectively with
//! an angle chosen from the Bayesian posterior of all earlier outcomes.
//!
//! The optimal protocol is found by dynamic programming backward over the
//! number of consumed copies. The state of the protocol is the scalar prior
//! `pi = P(hypothesis 0)`, discretized on a uniform lattice; the value
//! `S*_n(pi)` is the best achievable success probability with `N - n` copies
//! left, and `P_e = 1 - S*_0(1/2)`. Two independent small-N oracles
//! (an exact-prior recursion and a likelihood-tree recursion) plus a seeded
//! Monte Carlo rollout verify the table.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::local::{optimize_angle, outcome_probs};
use crate::qubit::StatePair;

use std::io::Write;

/// Uniform lattice of prior values on [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct PriorGrid {
    nodes: Vec<f64>,
}

/// Lattice size used when none is requested.
pub const DEFAULT_GRID_POINTS: usize = 20_000;

impl PriorGrid {
    /// Uniform grid with `points` nodes including both endpoints.
    pub fn new(points: usize) -> Result<Self> {
        if points < 2 {
            return Err(Error::domain(
                "points",
                format!("need at least 2 lattice points, got {points}"),
            ));
        }
        let step = 1.0 / (points - 1) as f64;
        let mut nodes: Vec<f64> = (0..points).map(|i| i as f64 * step).collect();
        nodes[points - 1] = 1.0;
        Ok(PriorGrid { nodes })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Interpolation of a table sampled at the nodes: cubic Hermite with
    /// monotonicity-limited slopes, so values never overshoot the local
    /// data range and the error is third order away from kinks.
    pub fn interpolate(&self, table: &[f64], pi: f64) -> f64 {
        debug_assert_eq!(table.len(), self.nodes.len());
        let pi = pi.clamp(0.0, 1.0);
        let last = self.nodes.len() - 1;
        let scaled = pi * last as f64;
        let lo = (scaled.floor() as usize).min(last - 1);
        let t = scaled - lo as f64;
        if t == 0.0 {
            return table[lo];
        }
        let d = table[lo + 1] - table[lo];
        let d_prev = if lo > 0 { table[lo] - table[lo - 1] } else { d };
        let d_next = if lo + 2 <= last {
            table[lo + 2] - table[lo + 1]
        } else {
            d
        };
        let m0 = limited_slope(d_prev, d);
        let m1 = limited_slope(d, d_next);
        // cubic Hermite basis on the unit interval
        let t2 = t * t;
        let t3 = t2 * t;
        table[lo] * (2.0 * t3 - 3.0 * t2 + 1.0)
            + m0 * (t3 - 2.0 * t2 + t)
            + table[lo + 1] * (-2.0 * t3 + 3.0 * t2)
            + m1 * (t3 - t2)
    }
}

/// Average of two adjacent secant slopes, clamped so the cubic stays
/// monotone on the interval; zero across a local extremum.
fn limited_slope(a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let cap = 3.0 * a.abs().min(b.abs());
    m.clamp(-cap, cap)
}

impl Default for PriorGrid {
    fn default() -> Self {
        PriorGrid::new(DEFAULT_GRID_POINTS).expect("default size is valid")
    }
}

/// Success-probability tables S*_n over the prior grid, one row per stage
/// n = 0..=N (stage counts consumed copies; row N is the no-copies-left
/// decision value max(pi, 1 - pi)).
#[derive(Debug, Clone)]
pub struct ValueTable {
    pub stages: Vec<Vec<f64>>,
}

/// Optimal measurement angles Theta*_n over the prior grid, one row per
/// stage n = 0..N-1 (the angle applied to the (n+1)-th copy).
#[derive(Debug, Clone)]
pub struct Policy {
    pub n_copies: u32,
    pub grid: PriorGrid,
    pub stages: Vec<Vec<f64>>,
}

impl Policy {
    /// Measurement angle at the given stage and prior, interpolated between
    /// lattice nodes.
    pub fn angle(&self, stage: u32, pi: f64) -> f64 {
        self.grid.interpolate(&self.stages[stage as usize], pi)
    }
}

/// Everything the DP produces, plus a certificate that the value table
/// satisfies its stage-monotonicity invariant on the lattice.
#[derive(Debug, Clone)]
pub struct DpOutcome {
    pub values: ValueTable,
    pub policy: Policy,
    pub p_error: f64,
    /// False when S*_{n} < S*_{n+1} - 1e-12 was observed at some node, which
    /// signals a lattice too coarse for the value recursion.
    pub monotone: bool,
}

/// Posterior probability of hypothesis 0 after observing one outcome of the
/// projective measurement at `theta_meas`.
///
/// Outcome 0 is the "+" projector of the measurement; outcome 1 its
/// complement.
pub fn bayes_update(prior: f64, outcome: u8, theta_meas: f64, pair: &StatePair) -> Result<f64> {
    if !(0.0..=1.0).contains(&prior) {
        return Err(Error::domain("prior", format!("prior {prior} outside [0, 1]")));
    }
    let (p0, p1) = outcome_probs(pair, theta_meas);
    let (l0, l1) = if outcome == 0 {
        (p0, p1)
    } else {
        (1.0 - p0, 1.0 - p1)
    };
    let marginal = prior * l0 + (1.0 - prior) * l1;
    if marginal <= 0.0 {
        return Err(Error::domain(
            "outcome",
            "outcome has zero marginal probability at this prior",
        ));
    }
    Ok((prior * l0 / marginal).clamp(0.0, 1.0))
}

/// Expected continuation success at prior `pi` and angle `theta`, reading the
/// next-stage values through linear interpolation.
fn continuation(
    pair: &StatePair,
    grid: &PriorGrid,
    next: &[f64],
    pi: f64,
    theta: f64,
) -> f64 {
    let (p0, p1) = outcome_probs(pair, theta);
    let mut total = 0.0;
    for (l0, l1) in [(p0, p1), (1.0 - p0, 1.0 - p1)] {
        let marginal = pi * l0 + (1.0 - pi) * l1;
        if marginal > 0.0 {
            let posterior = (pi * l0 / marginal).clamp(0.0, 1.0);
            total += marginal * grid.interpolate(next, posterior);
        }
    }
    total
}

/// Optimal one-way adaptive protocol by backward dynamic programming.
///
/// Per node the angle search is a 181-point coarse scan refined by
/// golden-section in the best basins; nodes within a stage are independent
/// and evaluated in parallel.
pub fn dp_solve(pair: &StatePair, n: u32, grid: &PriorGrid) -> Result<DpOutcome> {
    if n == 0 {
        return Err(Error::domain("n", "need at least one copy"));
    }
    let terminal: Vec<f64> = grid.nodes().iter().map(|&p| p.max(1.0 - p)).collect();
    let mut values: Vec<Vec<f64>> = vec![terminal];
    let mut angles: Vec<Vec<f64>> = Vec::new();
    let mut monotone = true;
    for _ in 0..n {
        let next = &values[values.len() - 1];
        let solved: Vec<(f64, f64)> = grid
            .nodes()
            .par_iter()
            .map(|&pi| {
                let (theta, s) =
                    optimize_angle(|t| continuation(pair, grid, next, pi, t), false, 1e-9);
                (s, theta)
            })
            .collect();
        let stage_values: Vec<f64> = solved.iter().map(|&(s, _)| s).collect();
        if stage_values
            .iter()
            .zip(next)
            .any(|(cur, prev)| *cur < prev - 1e-12)
        {
            monotone = false;
        }
        values.push(stage_values);
        angles.push(solved.into_iter().map(|(_, t)| t).collect());
    }
    // recursion built the rows from stage N down to 0; store them by stage
    values.reverse();
    angles.reverse();
    let p_error = (1.0 - PriorGrid::interpolate(grid, &values[0], 0.5)).clamp(0.0, 0.5);
    Ok(DpOutcome {
        values: ValueTable { stages: values },
        policy: Policy {
            n_copies: n,
            grid: grid.clone(),
            stages: angles,
        },
        p_error,
        monotone,
    })
}

fn guard_tree_size(n: u32, grid_len: usize) -> Result<()> {
    if n > 3 {
        return Err(Error::domain("n", format!("exhaustive oracle limited to N <= 3, got {n}")));
    }
    let work = (2.0 * grid_len as f64).powi(n as i32);
    if work > 2e8 {
        return Err(Error::Resource(format!(
            "exhaustive adaptive tree needs ~{work:.1e} evaluations"
        )));
    }
    Ok(())
}

/// Small-N adaptive optimum by recursion on exact (undiscretized) priors,
/// restricted to a finite angle grid. Shares no prior lattice with
/// [`dp_solve`], so agreement between the two certifies the recursion.
pub fn dp_solve_exact(pair: &StatePair, n: u32, angle_grid: &[f64]) -> Result<f64> {
    guard_tree_size(n, angle_grid.len())?;
    if angle_grid.is_empty() {
        return Err(Error::domain("angle_grid", "empty angle grid"));
    }
    fn success(pair: &StatePair, pi: f64, left: u32, angle_grid: &[f64]) -> f64 {
        if left == 0 {
            return pi.max(1.0 - pi);
        }
        let mut best = f64::NEG_INFINITY;
        for &theta in angle_grid {
            let (p0, p1) = outcome_probs(pair, theta);
            let mut total = 0.0;
            for (l0, l1) in [(p0, p1), (1.0 - p0, 1.0 - p1)] {
                let marginal = pi * l0 + (1.0 - pi) * l1;
                if marginal > 0.0 {
                    let posterior = pi * l0 / marginal;
                    total += marginal * success(pair, posterior, left - 1, angle_grid);
                }
            }
            best = best.max(total);
        }
        best
    }
    Ok((1.0 - success(pair, 0.5, n, angle_grid)).clamp(0.0, 0.5))
}

/// Small-N adaptive optimum by direct recursion on the pair of joint
/// likelihoods, the nested max-sum form of the sequential protocol. No prior
/// variable appears at all; the final decision picks the larger likelihood.
pub fn brute_force_adaptive(pair: &StatePair, n: u32, angle_grid: &[f64]) -> Result<f64> {
    guard_tree_size(n, angle_grid.len())?;
    if angle_grid.is_empty() {
        return Err(Error::domain("angle_grid", "empty angle grid"));
    }
    fn value(pair: &StatePair, l0: f64, l1: f64, left: u32, angle_grid: &[f64]) -> f64 {
        if left == 0 {
            return l0.max(l1);
        }
        let mut best = f64::NEG_INFINITY;
        for &theta in angle_grid {
            let (p0, p1) = outcome_probs(pair, theta);
            let total = value(pair, l0 * p0, l1 * p1, left - 1, angle_grid)
                + value(pair, l0 * (1.0 - p0), l1 * (1.0 - p1), left - 1, angle_grid);
            best = best.max(total);
        }
        best
    }
    Ok((1.0 - value(pair, 0.5, 0.5, n, angle_grid)).clamp(0.0, 0.5))
}

/// Empirical performance of a policy under repeated play.
#[derive(Debug, Clone, Copy)]
pub struct SimulationResult {
    pub success_rate: f64,
    /// Binomial standard error sqrt(p(1-p)/trials).
    pub std_error: f64,
    pub trials: u64,
}

/// Monte Carlo rollout of a DP policy with the true state fixed.
///
/// Deterministic for a given seed: trial `t` uses an independent
/// counter-seeded generator stream, so the result is independent of the
/// parallel schedule.
pub fn simulate(
    policy: &Policy,
    pair: &StatePair,
    which_true: usize,
    trials: u64,
    seed: u64,
) -> Result<SimulationResult> {
    if trials == 0 {
        return Err(Error::domain("trials", "need at least one trial"));
    }
    if which_true > 1 {
        return Err(Error::domain("which_true", "hypothesis index must be 0 or 1"));
    }
    let successes: u64 = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(trial);
            let mut pi = 0.5;
            for stage in 0..policy.n_copies {
                let theta = policy.angle(stage, pi);
                let (p0, p1) = outcome_probs(pair, theta);
                let p_plus = if which_true == 0 { p0 } else { p1 };
                let outcome = if rng.gen::<f64>() < p_plus { 0 } else { 1 };
                pi = match bayes_update(pi, outcome, theta, pair) {
                    Ok(p) => p,
                    Err(_) => pi,
                };
            }
            let guess = if pi >= 0.5 { 0 } else { 1 };
            u64::from(guess == which_true)
        })
        .sum();
    let p = successes as f64 / trials as f64;
    Ok(SimulationResult {
        success_rate: p,
        std_error: (p * (1.0 - p) / trials as f64).sqrt(),
        trials,
    })
}

/// Writes the value table and policy as columnar text: one line per
/// (stage, node) with columns `stage pi S theta`; the terminal stage has no
/// angle and prints `-`.
pub fn write_policy_table<W: Write>(
    values: &ValueTable,
    policy: &Policy,
    mut out: W,
) -> std::io::Result<()> {
    writeln!(out, "stage pi S theta")?;
    for (stage, row) in values.stages.iter().enumerate() {
        for (node, s) in row.iter().enumerate() {
            let pi = policy.grid.nodes()[node];
            if stage < policy.stages.len() {
                writeln!(out, "{stage} {pi} {s} {}", policy.stages[stage][node])?;
            } else {
                writeln!(out, "{stage} {pi} {s} -")?;
            }
        }
    }
    Ok(())
}
