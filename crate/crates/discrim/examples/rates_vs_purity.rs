//! Per-copy error rates -log(P_e)/N against the common purity r at fixed N.
//!
//! Three regimes appear as r grows: near-identical rates for very mixed
//! states, a widening collective advantage at intermediate purity, and a
//! split between the local strategies close to the pure limit.

use discrim::runner::{sweep_r, Strategy, SweepSpec};
use std::f64::consts::PI;

fn main() -> discrim::Result<()> {
    let n = 20;
    let spec = SweepSpec {
        n_min: n,
        n_max: n,
        grid_points: 8001,
        strategies: vec![Strategy::Collective, Strategy::Ppt, Strategy::Repeated],
        ..SweepSpec::default()
    };
    let r_list: Vec<f64> = (0..=19).map(|i| i as f64 * 0.05).collect();
    let table = sweep_r(PI / 2.0, n, &r_list, &spec)?;
    print!("{}", table.to_csv());
    Ok(())
}
