//! Fit the finite-N rate model C(N) = C0 + C1 log(N)/N + C2/N to the
//! collective and repeated strategies and compare the extrapolated C0 with
//! the corresponding Chernoff exponents.

use discrim::helstrom;
use discrim::local;
use discrim::runner::fit_rate;
use discrim::StatePair;
use std::f64::consts::PI;

fn main() -> discrim::Result<()> {
    let pair = StatePair::new(0.8, 0.8, PI / 2.0)?;
    let window = (25, 35);

    let collective: Vec<(u32, f64)> = (window.0..=window.1)
        .map(|n| Ok((n, helstrom::collective_error(&pair, n)?)))
        .collect::<discrim::Result<_>>()?;
    let fit = fit_rate(&collective, window.0, window.1)?;
    println!(
        "collective: C0 = {:.6} (quantum Chernoff exponent {:.6})",
        fit.c0,
        pair.quantum_chernoff_exponent()
    );

    let repeated: Vec<(u32, f64)> = (window.0..=window.1)
        .map(|n| (n, local::repeated_error_opt(&pair, n).0))
        .collect();
    let fit = fit_rate(&repeated, window.0, window.1)?;
    let (classical, _) = local::repeated_exponent_opt(&pair);
    println!(
        "repeated:   C0 = {:.6} (classical Chernoff exponent {:.6})",
        fit.c0, classical
    );
    Ok(())
}
