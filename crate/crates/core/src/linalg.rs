//! Dense square matrices and the real symmetric eigenvalue solver.
//!
//! The solver is the classical two-stage method: Householder reduction to
//! tridiagonal form followed by implicit-shift QL sweeps. It returns
//! eigenvalues only; nothing in the spectrum path needs eigenvectors.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::Real;

/// Row-major square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    order: usize,
    data: Vec<S>,
}

impl<S: Copy> Matrix<S> {
    pub fn filled(order: usize, value: S) -> Self {
        Self {
            order,
            data: vec![value; order * order],
        }
    }

    pub fn from_rows(rows: &[Vec<S>]) -> Result<Self> {
        let order = rows.len();
        if rows.iter().any(|r| r.len() != order) {
            return Err(Error::invalid(
                "matrix rows must all have length equal to the row count",
            ));
        }
        Ok(Self {
            order,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn as_slice(&self) -> &[S] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.order..(i + 1) * self.order]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[S]> {
        self.data.chunks(self.order.max(1))
    }
}

impl<T: Real> Matrix<T> {
    pub fn zeros(order: usize) -> Self {
        Self::filled(order, T::zero())
    }

    pub fn identity(order: usize) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn diagonal(values: &[T]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn trace(&self) -> T {
        (0..self.order).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, &x| acc.max(x.abs()))
    }

    /// Symmetric up to a few ulps of the largest entry.
    pub fn is_symmetric(&self) -> bool {
        let tol = T::lit(8.0) * T::epsilon() * self.max_abs();
        (0..self.order).all(|i| (0..i).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= tol))
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.order + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.order + j]
    }
}

/// All eigenvalues of a real symmetric matrix, ascending.
pub fn symmetric_eigenvalues<T: Real>(matrix: &Matrix<T>) -> Result<Vec<T>> {
    let n = matrix.order();
    if n == 0 {
        return Err(Error::invalid("matrix order must be >= 1"));
    }
    if !matrix.is_symmetric() {
        return Err(Error::invalid("matrix is not symmetric"));
    }
    let (mut diag, mut off) = tridiagonalize(matrix);
    tridiagonal_ql(&mut diag, &mut off)?;
    diag.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    Ok(diag)
}

/// Householder reduction. Returns the diagonal and the sub-diagonal, with the
/// sub-diagonal stored in `off[1..]` (`off[0]` is zero).
fn tridiagonalize<T: Real>(matrix: &Matrix<T>) -> (Vec<T>, Vec<T>) {
    let n = matrix.order();
    let mut a = matrix.clone();
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];
    let two = T::lit(2.0);

    for i in (1..n).rev() {
        let l = i - 1;
        if l > 0 {
            let scale: T = (0..=l).map(|k| a[(i, k)].abs()).sum();
            if scale == T::zero() {
                e[i] = a[(i, l)];
            } else {
                let mut h = T::zero();
                for k in 0..=l {
                    a[(i, k)] = a[(i, k)] / scale;
                    h = h + a[(i, k)] * a[(i, k)];
                }
                let f = a[(i, l)];
                let g = if f >= T::zero() { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h = h - f * g;
                a[(i, l)] = f - g;
                let mut f = T::zero();
                for j in 0..=l {
                    let mut g = T::zero();
                    for k in 0..=j {
                        g = g + a[(j, k)] * a[(i, k)];
                    }
                    for k in (j + 1)..=l {
                        g = g + a[(k, j)] * a[(i, k)];
                    }
                    e[j] = g / h;
                    f = f + e[j] * a[(i, j)];
                }
                let hh = f / (h * two);
                for j in 0..=l {
                    let f = a[(i, j)];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[(j, k)] = a[(j, k)] - (f * e[k] + g * a[(i, k)]);
                    }
                }
            }
        } else {
            e[i] = a[(i, l)];
        }
    }
    for (i, di) in d.iter_mut().enumerate() {
        *di = a[(i, i)];
    }
    (d, e)
}

/// Implicit QL with Wilkinson-type shifts on a symmetric tridiagonal matrix.
/// On return `d` holds the (unsorted) eigenvalues.
fn tridiagonal_ql<T: Real>(d: &mut [T], e: &mut [T]) -> Result<()> {
    let n = d.len();
    if n == 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = T::zero();
    let two = T::lit(2.0);
    let max_sweeps = 60 * n;

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > max_sweeps {
                return Err(Error::NoConvergence { order: n });
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = T::zero();
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(())
}
