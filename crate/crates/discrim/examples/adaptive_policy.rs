//! Solve the adaptive dynamic program, inspect the optimal first-copy
//! measurement angles as a function of the prior, and verify the value by a
//! seeded Monte Carlo rollout.

use discrim::adaptive::{dp_solve, simulate, PriorGrid};
use discrim::StatePair;
use std::f64::consts::PI;

fn main() -> discrim::Result<()> {
    let pair = StatePair::new(0.8, 0.8, PI / 2.0)?;
    let n = 8;
    let grid = PriorGrid::new(8001)?;
    let dp = dp_solve(&pair, n, &grid)?;
    println!("N = {n}: P_e (adaptive) = {:.10}", dp.p_error);

    println!("first-copy measurement angle vs prior:");
    for pi0 in [0.1, 0.3, 0.5, 0.7, 0.9] {
        println!("  pi = {pi0:.1}: Theta* = {:.6}", dp.policy.angle(0, pi0));
    }

    let trials = 200_000;
    let s0 = simulate(&dp.policy, &pair, 0, trials, 1)?;
    let s1 = simulate(&dp.policy, &pair, 1, trials, 2)?;
    let empirical = 0.5 * (s0.success_rate + s1.success_rate);
    println!(
        "Monte Carlo ({trials} trials per state): success {empirical:.6} vs DP {:.6}",
        1.0 - dp.p_error
    );
    Ok(())
}
