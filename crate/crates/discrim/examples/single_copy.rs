//! All four protocols on a single copy: with one copy there is nothing to
//! adapt or to entangle, so every strategy lands on the same optimum.

use discrim::adaptive::{dp_solve, PriorGrid};
use discrim::helstrom;
use discrim::local;
use discrim::sdp;
use discrim::StatePair;
use std::f64::consts::PI;

fn main() -> discrim::Result<()> {
    let pair = StatePair::new(0.8, 0.8, PI / 2.0)?;
    println!("states: r0 = r1 = 0.8, theta = pi/2");
    println!("closed form: {}", helstrom::single_copy_closed_form(&pair));
    println!("collective:  {}", helstrom::collective_error(&pair, 1)?);
    println!("ppt bound:   {}", sdp::ppt_error(&pair, 1, 1e-9)?.p_error);
    let (repeated, theta) = local::repeated_error_opt(&pair, 1);
    println!("repeated:    {repeated} (measurement angle {theta:.6})");
    let grid = PriorGrid::new(4001)?;
    println!("adaptive:    {}", dp_solve(&pair, 1, &grid)?.p_error);
    Ok(())
}
