//! Lanczos approximation of the matrix-exponential action exp(-iH dt) v.
//!
//! The Hermitian operator is projected onto a Krylov subspace; the small
//! real symmetric tridiagonal projection is exponentiated exactly through
//! its eigendecomposition. The subspace grows until the standard
//! a-posteriori estimate beta_m |y_m| drops below the tolerance. The
//! dense exponential is never formed.

use ndarray::Array2;
use ndarray_linalg::{Eigh, UPLO};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::timedep::hamiltonian::HermitianOp;

/// Default per-step tolerance on the exponential action.
pub const EXPM_TOL: f64 = 1e-10;

/// Hard cap on the Krylov dimension; exceeding it means dt is too large.
pub const MAX_KRYLOV_DIM: usize = 90;

/// y = exp(-i dt T_m) e1 for the current tridiagonal projection, returned
/// together with |y_m| (last component magnitude) for the error estimate.
fn small_exponential(alpha: &[f64], beta: &[f64], dt: f64) -> (Vec<Complex64>, f64) {
    let m = alpha.len();
    let mut t = Array2::<f64>::zeros((m, m));
    for j in 0..m {
        t[(j, j)] = alpha[j];
        if j + 1 < m {
            t[(j, j + 1)] = beta[j];
            t[(j + 1, j)] = beta[j];
        }
    }
    let (eigvals, eigvecs) = t.eigh(UPLO::Lower).expect("small symmetric eigensolve");
    let mut y = vec![Complex64::ZERO; m];
    for k in 0..m {
        let phase = (-Complex64::I * dt * eigvals[k]).exp();
        let w = phase * eigvecs[(0, k)];
        for j in 0..m {
            y[j] += eigvecs[(j, k)] * w;
        }
    }
    let tail = y[m - 1].norm();
    (y, tail)
}

/// Apply exp(-i dt H) to `v` within `tol` (relative to ||v||).
pub fn expm_action<H: HermitianOp>(
    op: &H,
    v: &[Complex64],
    dt: f64,
    tol: f64,
) -> Result<Vec<Complex64>> {
    let dim = op.dim();
    assert_eq!(v.len(), dim);
    let norm_v = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm_v == 0.0 {
        return Ok(v.to_vec());
    }

    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    basis.push(v.iter().map(|z| z / norm_v).collect());
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![Complex64::ZERO; dim];
    let mut last_estimate = f64::INFINITY;

    loop {
        let j = alpha.len();
        op.apply(&basis[j], &mut w);
        if j > 0 {
            let b = beta[j - 1];
            for (wi, pi) in w.iter_mut().zip(&basis[j - 1]) {
                *wi -= b * pi;
            }
        }
        let a: f64 = basis[j]
            .iter()
            .zip(&w)
            .map(|(p, q)| (p.conj() * q).re)
            .sum();
        alpha.push(a);
        for (wi, pi) in w.iter_mut().zip(&basis[j]) {
            *wi -= a * pi;
        }
        // full reorthogonalization keeps the basis orthonormal over long runs
        for prev in &basis {
            let overlap: Complex64 = prev.iter().zip(&w).map(|(p, q)| p.conj() * q).sum();
            for (wi, pi) in w.iter_mut().zip(prev) {
                *wi -= overlap * pi;
            }
        }
        let b: f64 = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();

        let m = alpha.len();
        let happy = b < 1e-13;
        if happy || m >= 2 {
            let (y, tail) = small_exponential(&alpha, &beta, dt);
            let estimate = if happy { 0.0 } else { b * tail };
            last_estimate = estimate;
            if happy || estimate < tol {
                let mut out = vec![Complex64::ZERO; dim];
                for (yj, pj) in y.iter().zip(&basis) {
                    let coeff = norm_v * yj;
                    for (oi, pi) in out.iter_mut().zip(pj) {
                        *oi += coeff * pi;
                    }
                }
                return Ok(out);
            }
        }
        if m >= MAX_KRYLOV_DIM {
            return Err(Error::ConvergenceFailure {
                dt,
                estimate: last_estimate,
            });
        }
        beta.push(b);
        basis.push(w.iter().map(|z| z / b).collect());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct ZeroOp(usize);
    impl HermitianOp for ZeroOp {
        fn dim(&self) -> usize {
            self.0
        }
        fn apply(&self, _x: &[Complex64], y: &mut [Complex64]) {
            y.fill(Complex64::ZERO);
        }
    }

    struct DiagOp(Vec<f64>);
    impl HermitianOp for DiagOp {
        fn dim(&self) -> usize {
            self.0.len()
        }
        fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
            for ((yi, xi), d) in y.iter_mut().zip(x).zip(&self.0) {
                *yi = d * xi;
            }
        }
    }

    #[test]
    fn zero_operator_is_identity() {
        let v: Vec<Complex64> = (0..8).map(|i| Complex64::new(i as f64, -1.0)).collect();
        let out = expm_action(&ZeroOp(8), &v, 0.7, 1e-12).unwrap();
        for (a, b) in out.iter().zip(&v) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn diagonal_operator_gets_exact_phases() {
        let d: Vec<f64> = (0..12).map(|i| (i as f64) * 0.37 - 1.1).collect();
        let v: Vec<Complex64> = (0..12)
            .map(|i| Complex64::new(1.0 / (i + 1) as f64, 0.2))
            .collect();
        let dt = 0.43;
        let out = expm_action(&DiagOp(d.clone()), &v, dt, 1e-12).unwrap();
        for i in 0..12 {
            let expect = (-Complex64::I * dt * d[i]).exp() * v[i];
            assert!((out[i] - expect).norm() < 1e-10);
        }
    }

    #[test]
    fn norm_is_preserved() {
        let d: Vec<f64> = (0..40).map(|i| (i as f64).sin() * 3.0).collect();
        let v: Vec<Complex64> = (0..40).map(|i| Complex64::new(1.0, i as f64 * 0.1)).collect();
        let n_in: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let out = expm_action(&DiagOp(d), &v, 1.3, 1e-11).unwrap();
        let n_out: f64 = out.iter().map(|z| z.norm_sqr()).sum();
        assert!((n_in - n_out).abs() / n_in < 1e-10);
    }
}
