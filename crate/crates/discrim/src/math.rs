//! Shared numeric helpers: factorials, binomials, scalar minimization.

use std::sync::LazyLock;

const LN_FACT_LEN: usize = 2049;

static LN_FACT: LazyLock<Vec<f64>> = LazyLock::new(|| {
    let mut table = vec![0.0; LN_FACT_LEN];
    for n in 1..LN_FACT_LEN {
        table[n] = table[n - 1] + (n as f64).ln();
    }
    table
});

/// ln(n!), or `None` for negative `n`.
pub(crate) fn ln_factorial(n: i64) -> Option<f64> {
    if n < 0 {
        None
    } else {
        Some(LN_FACT[n as usize])
    }
}

/// Exact binomial coefficient in 128-bit integer arithmetic.
///
/// Valid for every `n` where the result fits in a `u128` (comfortably so up
/// to n = 100 or more); returns 0 for `k > n`.
pub(crate) fn binomial_exact(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Binomial coefficient as f64; 0.0 outside the valid range.
pub(crate) fn binomial(n: i64, k: i64) -> f64 {
    if k < 0 || n < 0 || k > n {
        return 0.0;
    }
    if n <= 120 {
        binomial_exact(n as u64, k as u64) as f64
    } else {
        let ln = LN_FACT[n as usize] - LN_FACT[k as usize] - LN_FACT[(n - k) as usize];
        ln.exp()
    }
}

/// Golden-section minimization of a scalar function on `[a, b]`.
///
/// Returns the best abscissa/value seen; exact for unimodal functions to
/// `xtol` in the argument.
pub(crate) fn golden_min<F: FnMut(f64) -> f64>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    xtol: f64,
) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > xtol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    let mut best = (x, fx);
    if fc < best.1 {
        best = (c, fc);
    }
    if fd < best.1 {
        best = (d, fd);
    }
    best
}

/// Golden-section maximization on `[a, b]`.
pub(crate) fn golden_max<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, xtol: f64) -> (f64, f64) {
    let (x, neg) = golden_min(|x| -f(x), a, b, xtol);
    (x, -neg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials_are_exact() {
        assert_eq!(binomial_exact(40, 20), 137_846_528_820);
        assert_eq!(binomial_exact(4, 1), 4);
        assert_eq!(binomial_exact(3, 5), 0);
        assert_eq!(binomial(40, 20), 137_846_528_820.0);
        assert_eq!(binomial(5, -1), 0.0);
    }

    #[test]
    fn ln_factorial_matches_direct() {
        assert_eq!(ln_factorial(-1), None);
        assert_eq!(ln_factorial(0), Some(0.0));
        let expected = (2.0f64 * 3.0 * 4.0 * 5.0).ln();
        assert!((ln_factorial(5).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn golden_finds_quadratic_minimum() {
        let (x, fx) = golden_min(|x| (x - 0.3) * (x - 0.3) + 1.0, 0.0, 1.0, 1e-12);
        // argument accuracy near a quadratic minimum is sqrt(eps)-limited
        assert!((x - 0.3).abs() < 1e-6);
        assert!((fx - 1.0).abs() < 1e-14);
    }
}
