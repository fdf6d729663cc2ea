//! Shared helpers for the integration-test suites, including an
//! independent dense solver for the two-copy PPT problem.

use discrim::StatePair;
use nalgebra::{Cholesky, DMatrix, DVector, Matrix2};
use rand::Rng;

/// Random state pair with purities in [0, 1) and angle in [0, pi].
pub fn random_pair<R: Rng>(rng: &mut R) -> StatePair {
    StatePair::new(
        rng.gen::<f64>(),
        rng.gen::<f64>(),
        rng.gen::<f64>() * std::f64::consts::PI,
    )
    .expect("sampled parameters are in range")
}

fn kron2(a: &Matrix2<f64>, b: &Matrix2<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(4, 4);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Partial transpose on the second qubit of a 4x4 matrix.
fn partial_transpose(m: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(4, 4);
    for a in 0..2 {
        for b in 0..2 {
            for ap in 0..2 {
                for bp in 0..2 {
                    out[(2 * a + b, 2 * ap + bp)] = m[(2 * a + bp, 2 * ap + b)];
                }
            }
        }
    }
    out
}

/// Basis of real symmetric 4x4 matrices: 4 diagonal units then the 6
/// symmetrized off-diagonal pairs.
fn sym_basis() -> Vec<DMatrix<f64>> {
    let mut basis = Vec::with_capacity(10);
    for i in 0..4 {
        let mut b = DMatrix::zeros(4, 4);
        b[(i, i)] = 1.0;
        basis.push(b);
    }
    for i in 0..4 {
        for j in (i + 1)..4 {
            let mut b = DMatrix::zeros(4, 4);
            b[(i, j)] = 1.0;
            b[(j, i)] = 1.0;
            basis.push(b);
        }
    }
    basis
}

/// Independent two-copy PPT bound, solved in the raw 4x4 representation.
///
/// Minimizes tr[(sigma0 - sigma1) E] over all real symmetric E with
/// 0 <= E <= I and 0 <= E^Gamma <= I; no permutation or PT invariance is
/// imposed, so agreement with the block solver also certifies the
/// invariant-parametrization reduction. The method is a log-barrier descent
/// with analytic gradients and a finite-difference Hessian.
pub fn dense_ppt_two_copies(pair: &StatePair, tol: f64) -> f64 {
    let sigma0 = kron2(&pair.rho0, &pair.rho0);
    let sigma1 = kron2(&pair.rho1, &pair.rho1);
    let diff = sigma0 - sigma1;
    let basis = sym_basis();
    let c: Vec<f64> = basis.iter().map(|b| (&diff * b).trace()).collect();
    let scale = c.iter().fold(1e-30f64, |m, v| m.max(v.abs()));

    let assemble = |x: &[f64]| -> DMatrix<f64> {
        let mut e = DMatrix::zeros(4, 4);
        for (xi, b) in x.iter().zip(&basis) {
            e += b * *xi;
        }
        e
    };
    let eye = DMatrix::<f64>::identity(4, 4);

    // the four PSD constraint matrices at a point, or None outside the
    // strict interior
    let constraints = |x: &[f64]| -> Option<[DMatrix<f64>; 4]> {
        let e = assemble(x);
        let eg = partial_transpose(&e);
        let mats = [e.clone(), &eye - &e, eg.clone(), &eye - &eg];
        for m in &mats {
            Cholesky::new(m.clone())?;
        }
        Some(mats)
    };
    let barrier = |x: &[f64], mu: f64| -> Option<f64> {
        let mats = constraints(x)?;
        let mut logdet = 0.0;
        for m in mats {
            logdet += Cholesky::new(m)?
                .l_dirty()
                .diagonal()
                .iter()
                .map(|d| 2.0 * d.ln())
                .sum::<f64>();
        }
        let lin: f64 = c.iter().zip(x).map(|(ci, xi)| ci / scale * xi).sum();
        Some(lin - mu * logdet)
    };
    // gradient and Hessian of the barrier objective at an interior point
    let derivatives = |x: &[f64], mu: f64| -> (Vec<f64>, DMatrix<f64>) {
        let e = assemble(x);
        let eg = partial_transpose(&e);
        let inv = |m: DMatrix<f64>| m.try_inverse().expect("interior point is invertible");
        let s = inv(e.clone());
        let t = inv(&eye - &e);
        let sg = inv(eg.clone());
        let tg = inv(&eye - &eg);
        // tr(M^Gamma B) = tr(M B^Gamma): fold the PT onto the basis element
        let direct = &s - &t;
        let transposed = partial_transpose(&(&sg - &tg));
        let grad: Vec<f64> = basis
            .iter()
            .zip(&c)
            .map(|(b, ci)| ci / scale - mu * ((&direct * b).trace() + (&transposed * b).trace()))
            .collect();
        let bg: Vec<DMatrix<f64>> = basis.iter().map(partial_transpose).collect();
        let mut hess = DMatrix::zeros(10, 10);
        for k in 0..10 {
            for l in k..10 {
                let mut v = (&s * &basis[k] * &s * &basis[l]).trace();
                v += (&t * &basis[k] * &t * &basis[l]).trace();
                v += (&sg * &bg[k] * &sg * &bg[l]).trace();
                v += (&tg * &bg[k] * &tg * &bg[l]).trace();
                hess[(k, l)] = mu * v;
                hess[(l, k)] = mu * v;
            }
        }
        (grad, hess)
    };

    // start at E = I/2
    let mut x = vec![0.0; 10];
    for xi in x.iter_mut().take(4) {
        *xi = 0.5;
    }
    let mut mu = 1.0;
    let nu = 16.0;
    let tol_scaled = tol / scale;
    loop {
        for _ in 0..200 {
            let (g, h) = derivatives(&x, mu);
            let h = h + DMatrix::identity(10, 10) * 1e-13;
            let gvec = DVector::from_column_slice(&g);
            let step = h
                .lu()
                .solve(&-&gvec)
                .expect("regularized Hessian is invertible");
            let decrement = -gvec.dot(&step);
            if decrement <= 1e-14 {
                break;
            }
            let f0 = barrier(&x, mu).expect("current iterate is feasible");
            let mut t = 1.0;
            let mut moved = false;
            for _ in 0..60 {
                let xt: Vec<f64> = x.iter().zip(step.iter()).map(|(xi, si)| xi + t * si).collect();
                if let Some(ft) = barrier(&xt, mu) {
                    if ft <= f0 - 0.25 * t * decrement {
                        x = xt;
                        moved = true;
                        break;
                    }
                }
                t *= 0.5;
            }
            if !moved {
                break;
            }
        }
        if mu * nu < tol_scaled {
            break;
        }
        mu *= 0.2;
    }
    let value: f64 = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    (0.5 * (1.0 + value)).clamp(0.0, 0.5)
}
