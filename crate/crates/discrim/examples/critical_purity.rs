//! The purity threshold above which the best fixed measurement abandons the
//! perpendicular-bisector direction, and the exponent saturation below it.

use discrim::local;
use discrim::StatePair;
use std::f64::consts::PI;

fn main() -> discrim::Result<()> {
    for r in [0.5, 0.8, 0.95, 0.99, 1.0] {
        let pair = StatePair::new(r, r, PI / 2.0)?;
        let (c, theta) = local::repeated_exponent_opt(&pair);
        let fidelity_rate = -0.5 * pair.fidelity().ln();
        println!(
            "r = {r}: exponent {c:.9}, Theta* = {theta:.6}, -log(F)/2 = {fidelity_rate:.9}"
        );
    }
    let r_star = local::critical_purity(PI / 2.0, 1e-4)?;
    println!("critical purity at theta = pi/2: r* = {r_star:.4}");
    Ok(())
}
