//! Complex Hermitian eigen-decomposition by cyclic Jacobi rotations.
//!
//! Deliberately a different algorithm from the tridiagonal QL solver used for
//! band edges, so the two spectra check each other.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::Real;

const MAX_SWEEPS: usize = 100;

pub fn is_hermitian<T: Real>(a: &Matrix<Complex<T>>) -> bool {
    let n = a.order();
    let scale = a.as_slice().iter().fold(T::zero(), |m, z| m.max(z.norm()));
    let tol = T::lit(8.0) * T::epsilon() * scale;
    (0..n).all(|i| (0..=i).all(|j| (a[(i, j)] - a[(j, i)].conj()).norm() <= tol))
}

/// Eigenvalues (ascending) and unit eigenvectors (as matching columns).
pub fn hermitian_eigen<T: Real>(a: &Matrix<Complex<T>>) -> Result<(Vec<T>, Matrix<Complex<T>>)> {
    let n = a.order();
    if n == 0 {
        return Err(Error::invalid("matrix order must be >= 1"));
    }
    if !is_hermitian(a) {
        return Err(Error::invalid("matrix is not Hermitian"));
    }
    let mut a = a.clone();
    let mut v = Matrix::filled(n, Complex::zero());
    for i in 0..n {
        v[(i, i)] = Complex::new(T::one(), T::zero());
        a[(i, i)] = Complex::new(a[(i, i)].re, T::zero());
    }

    let total: T = a.as_slice().iter().map(|z| z.norm_sqr()).sum();
    let threshold = T::epsilon() * T::epsilon() * total;
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off: T = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum();
        if off <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence { order: n });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(i, i)]
            .re
            .partial_cmp(&a[(j, j)].re)
            .expect("finite eigenvalues")
    });
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = Matrix::filled(n, Complex::zero());
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors[(row, col)] = v[(row, src)];
        }
    }
    Ok((values, vectors))
}

/// One unitary rotation in the `(p, q)` plane that zeroes `a[p][q]`.
fn rotate<T: Real>(a: &mut Matrix<Complex<T>>, v: &mut Matrix<Complex<T>>, p: usize, q: usize) {
    let n = a.order();
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == T::zero() {
        return;
    }
    let w = apq / r;
    let wc = w.conj();
    let (app, aqq) = (a[(p, p)].re, a[(q, q)].re);
    let tau = (aqq - app) / (T::lit(2.0) * r);
    let t = if tau == T::zero() {
        T::one()
    } else {
        tau.signum() / (tau.abs() + (T::one() + tau * tau).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;

    // columns: A ← A·G with G = [[c, s], [−s·w̄, c·w̄]] in the (p, q) block
    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * c - akq * wc * s;
        a[(k, q)] = akp * s + akq * wc * c;
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * c - vkq * wc * s;
        v[(k, q)] = vkp * s + vkq * wc * c;
    }
    // rows: A ← G†·A
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = apk * c - aqk * w * s;
        a[(q, k)] = apk * s + aqk * w * c;
    }
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();
    a[(p, p)] = Complex::new(app - t * r, T::zero());
    a[(q, q)] = Complex::new(aqq + t * r, T::zero());
}
