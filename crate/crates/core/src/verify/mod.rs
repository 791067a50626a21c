//! Independent numerical checks.
//!
//! Both checks work from the Bloch Hamiltonian of the `q`-site magnetic cell,
//! sampled on an `N×N` grid over the magnetic Brillouin zone
//! `[0, 2π/q) × [0, 2π)`:
//!
//! * [`spectrum_oracle`] takes the min/max of each eigenvalue branch over the
//!   grid, which brackets the band edges from the inside.
//! * [`band_chern_oracle`] integrates Berry curvature with gauge-invariant
//!   plaquette products of overlap links, giving an integer per band that can
//!   be compared with the Diophantine labels.
//!
//! The eigen-decomposition here is a complex Jacobi solver, independent of the
//! tridiagonal QL route used for the band edges.

mod hermitian;

use std::fmt;
use std::ops::RangeInclusive;

use num_complex::Complex;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::chern::{gap_labels, Regime};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rationals::ReducedFraction;
use crate::spectrum::{onsite, SpectrumAtFlux};
use crate::Real;

pub use hermitian::{hermitian_eigen, is_hermitian};

/// Smallest eigenvalue separation (and gap width) treated as an open gap.
pub const MIN_SEPARATION: f64 = 1e-8;

/// Largest distance of a raw curvature sum from an integer that still counts.
pub const MAX_RESIDUAL: f64 = 1e-2;

/// Bloch Hamiltonian of the magnetic cell at quasi-momenta `(k1, k2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlochHamiltonian<T> {
    pub flux: ReducedFraction,
    pub k1: T,
    pub k2: T,
    pub entries: Matrix<Complex<T>>,
}

/// Diagonal `2cos(k2 + 2πpn/q)`, unit hopping inside the cell, and the Bloch
/// phase `e^{iqk1}` on the bond that leaves the cell.
pub fn bloch_hamiltonian<T: Real>(f: ReducedFraction, k1: T, k2: T) -> BlochHamiltonian<T> {
    let q = f.order();
    let zero = Complex::zero();
    let mut h = Matrix::filled(q, zero);
    for n in 0..q {
        h[(n, n)] = Complex::new(onsite(f, n, k2), T::zero());
    }
    for n in 0..q.saturating_sub(1) {
        h[(n, n + 1)] = h[(n, n + 1)] + Complex::one();
        h[(n + 1, n)] = h[(n + 1, n)] + Complex::one();
    }
    let phase = Complex::from_polar(T::one(), T::int(f.q()) * k1);
    h[(q - 1, 0)] = h[(q - 1, 0)] + phase;
    h[(0, q - 1)] = h[(0, q - 1)] + phase.conj();
    BlochHamiltonian {
        flux: f,
        k1,
        k2,
        entries: h,
    }
}

fn grid_point<T: Real>(f: ReducedFraction, n: usize, i: usize, j: usize) -> (T, T) {
    let nn = T::count(n);
    let k1 = T::TAU() / T::int(f.q()) * T::count(i) / nn;
    let k2 = T::TAU() * T::count(j) / nn;
    (k1, k2)
}

/// Per-band `[min, max]` of the sorted eigenvalues over the `N×N` grid.
pub fn spectrum_oracle<T: Real>(f: ReducedFraction, n: usize) -> Result<Vec<(T, T)>> {
    if n < 16 {
        return Err(Error::invalid(format!("grid size must be >= 16, got {n}")));
    }
    let q = f.order();
    let init = || vec![(T::infinity(), T::neg_infinity()); q];
    let merge = |mut acc: Vec<(T, T)>, other: Vec<(T, T)>| {
        for (a, b) in acc.iter_mut().zip(other) {
            a.0 = a.0.min(b.0);
            a.1 = a.1.max(b.1);
        }
        acc
    };
    let rows: Vec<Result<Vec<(T, T)>>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = init();
            for j in 0..n {
                let (k1, k2) = grid_point::<T>(f, n, i, j);
                let (vals, _) = hermitian_eigen(&bloch_hamiltonian(f, k1, k2).entries)?;
                for (a, v) in acc.iter_mut().zip(vals) {
                    a.0 = a.0.min(v);
                    a.1 = a.1.max(v);
                }
            }
            Ok(acc)
        })
        .collect();
    rows.into_iter()
        .try_fold(init(), |acc, row| Ok(merge(acc, row?)))
}

/// Eigen-decompositions on the full `N×N` grid, row-major in `(i, j)`.
pub struct BlochGrid<T> {
    pub flux: ReducedFraction,
    pub size: usize,
    values: Vec<Vec<T>>,
    vectors: Vec<Matrix<Complex<T>>>,
}

impl<T: Real> BlochGrid<T> {
    pub fn compute(f: ReducedFraction, n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::invalid(format!("grid size must be >= 4, got {n}")));
        }
        let points: Vec<(Vec<T>, Matrix<Complex<T>>)> = (0..n * n)
            .into_par_iter()
            .map(|idx| {
                let (k1, k2) = grid_point::<T>(f, n, idx / n, idx % n);
                hermitian_eigen(&bloch_hamiltonian(f, k1, k2).entries)
            })
            .collect::<Result<_>>()?;
        let (values, vectors) = points.into_iter().unzip();
        Ok(Self {
            flux: f,
            size: n,
            values,
            vectors,
        })
    }

    fn at(&self, i: usize, j: usize) -> usize {
        (i % self.size) * self.size + (j % self.size)
    }

    /// Smallest eigenvalue separation between (1-based) bands `r` and `r+1`.
    pub fn separation(&self, r: usize) -> T {
        self.values
            .iter()
            .fold(T::infinity(), |m, v| m.min(v[r] - v[r - 1]))
    }

    /// Gauge-invariant overlap `det⟨u_a(k)|u_b(k')⟩` over the bands in `bands` (0-based).
    fn link(&self, from: usize, to: usize, bands: &RangeInclusive<usize>) -> Complex<T> {
        let (u, w) = (&self.vectors[from], &self.vectors[to]);
        let q = u.order();
        let size = bands.end() - bands.start() + 1;
        let mut overlap = Matrix::filled(size, Complex::zero());
        for (a, ba) in bands.clone().enumerate() {
            for (b, bb) in bands.clone().enumerate() {
                overlap[(a, b)] = (0..q).map(|k| u[(k, ba)].conj() * w[(k, bb)]).sum();
            }
        }
        let z = complex_det(overlap);
        let norm = z.norm();
        if norm > T::zero() {
            z / norm
        } else {
            Complex::one()
        }
    }

    /// Raw curvature sum over the grid divided by `2π`, for the (0-based)
    /// band multiplet `bands`.
    ///
    /// Orientation is fixed so that the lowest band at flux 1/3 comes out +1.
    pub fn raw_chern(&self, bands: RangeInclusive<usize>) -> T {
        let n = self.size;
        let row_sums: Vec<T> = (0..n)
            .into_par_iter()
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let a = self.at(i, j);
                        let b = self.at(i, j + 1);
                        let c = self.at(i + 1, j + 1);
                        let d = self.at(i + 1, j);
                        let loop_product = self.link(a, b, &bands)
                            * self.link(b, c, &bands)
                            * self.link(c, d, &bands)
                            * self.link(d, a, &bands);
                        loop_product.arg()
                    })
                    .fold(T::zero(), |s, x| s + x)
            })
            .collect();
        // fixed summation order regardless of scheduling
        row_sums.into_iter().fold(T::zero(), |s, x| s + x) / T::TAU()
    }
}

fn complex_det<T: Real>(mut m: Matrix<Complex<T>>) -> Complex<T> {
    let n = m.order();
    let mut det = Complex::one();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| {
                m[(x, col)]
                    .norm()
                    .partial_cmp(&m[(y, col)].norm())
                    .expect("finite overlaps")
            })
            .expect("non-empty column");
        if piv != col {
            for k in 0..n {
                let t = m[(piv, k)];
                m[(piv, k)] = m[(col, k)];
                m[(col, k)] = t;
            }
            det = -det;
        }
        let pv = m[(col, col)];
        if pv.norm() == T::zero() {
            return Complex::zero();
        }
        det = det * pv;
        for r in (col + 1)..n {
            let factor = m[(r, col)] / pv;
            for k in col..n {
                let sub = factor * m[(col, k)];
                m[(r, k)] = m[(r, k)] - sub;
            }
        }
    }
    det
}

/// Integer Chern number of a band (or multiplet) with its rounding residual.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleChern<T> {
    pub chern: i64,
    pub residual: T,
}

impl<T: Real> OracleChern<T> {
    fn from_raw(raw: T) -> Self {
        let rounded = raw.round();
        Self {
            chern: rounded.to_i64().expect("finite curvature sum"),
            residual: (raw - rounded).abs(),
        }
    }
}

/// Checks that the (1-based) band multiplet `first..=last` is isolated from its
/// neighbours both on the grid and in the exact band edges.
fn check_isolated<T: Real>(
    grid: &BlochGrid<T>,
    spectrum: &SpectrumAtFlux<T>,
    first: usize,
    last: usize,
) -> Result<()> {
    let q = grid.flux.order();
    let min_sep = T::lit(MIN_SEPARATION);
    for (r, gap) in [(first - 1, first - 1), (last, last)] {
        if r == 0 || r >= q {
            continue;
        }
        let sep = grid.separation(r).min(spectrum.gaps[gap - 1].width);
        if sep <= min_sep {
            return Err(Error::DegenerateBand {
                flux: grid.flux.to_string(),
                band: if r < first { first } else { last },
                separation: sep.to_f64().unwrap_or(0.0),
            });
        }
    }
    Ok(())
}

/// Chern number of band `band` (1-based) from lattice Berry curvature.
///
/// Refuses bands that touch a neighbour; use [`multiplet_chern_oracle`] for
/// the combined invariant of a touching group.
pub fn band_chern_oracle<T: Real>(
    f: ReducedFraction,
    band: usize,
    n: usize,
) -> Result<OracleChern<T>> {
    multiplet_chern_oracle(f, band..=band, n)
}

/// Chern number of the bands `bands` (1-based, inclusive) taken together.
pub fn multiplet_chern_oracle<T: Real>(
    f: ReducedFraction,
    bands: RangeInclusive<usize>,
    n: usize,
) -> Result<OracleChern<T>> {
    let (first, last) = (*bands.start(), *bands.end());
    if first < 1 || last > f.order() || first > last {
        return Err(Error::invalid(format!(
            "band range {first}..={last} outside 1..={} for {f}",
            f.q()
        )));
    }
    let grid = BlochGrid::compute(f, n)?;
    let spectrum = SpectrumAtFlux::compute(f)?;
    check_isolated(&grid, &spectrum, first, last)?;
    Ok(OracleChern::from_raw(grid.raw_chern(first - 1..=last - 1)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

/// Oracle result for a group of bands that are mutually touching (or a single band).
#[derive(Clone, Debug, PartialEq)]
pub struct Multiplet<T> {
    /// 1-based band indices.
    pub bands: RangeInclusive<usize>,
    pub chern: i64,
    pub residual: T,
}

/// Comparison at one open gap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GapCheck {
    pub index: usize,
    /// Sum of oracle Chern numbers of all bands below the gap.
    pub oracle: i64,
    /// Diophantine tight-binding label.
    pub label: i64,
}

impl GapCheck {
    pub fn agrees(&self) -> bool {
        self.oracle == self.label
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChernReport<T> {
    pub flux: ReducedFraction,
    pub grid: usize,
    pub multiplets: Vec<Multiplet<T>>,
    pub gaps: Vec<GapCheck>,
    pub verdict: Verdict,
}

impl<T: Real> ChernReport<T> {
    /// Per-multiplet Chern numbers (per band when nothing touches).
    pub fn band_cherns(&self) -> Vec<i64> {
        self.multiplets.iter().map(|m| m.chern).collect()
    }

    pub fn residuals(&self) -> Vec<T> {
        self.multiplets.iter().map(|m| m.residual).collect()
    }

    pub fn cumulative(&self) -> Vec<i64> {
        self.gaps.iter().map(|g| g.oracle).collect()
    }

    pub fn total(&self) -> i64 {
        self.multiplets.iter().map(|m| m.chern).sum()
    }
}

/// Compares cumulative oracle Chern numbers with the tight-binding gap labels.
///
/// Every gap at `f` must be open; otherwise the touching band is reported as
/// [`Error::DegenerateBand`].
pub fn verify_labels<T: Real>(f: ReducedFraction, n: usize) -> Result<ChernReport<T>> {
    verify_impl(f, n, false)
}

/// Like [`verify_labels`], but touching bands are merged into multiplets and
/// only the open gaps between multiplets are compared.
pub fn verify_labels_composite<T: Real>(f: ReducedFraction, n: usize) -> Result<ChernReport<T>> {
    verify_impl(f, n, true)
}

fn verify_impl<T: Real>(f: ReducedFraction, n: usize, composite: bool) -> Result<ChernReport<T>> {
    if n < 20 {
        return Err(Error::invalid(format!(
            "verification grid must be >= 20, got {n}"
        )));
    }
    let q = f.order();
    let grid = BlochGrid::<T>::compute(f, n)?;
    let spectrum = SpectrumAtFlux::<T>::compute(f)?;
    let min_sep = T::lit(MIN_SEPARATION);

    // open[r] is true when bands r and r+1 (1-based) are separated
    let mut open = vec![false; q];
    for (r, slot) in open.iter_mut().enumerate().skip(1) {
        let sep = grid.separation(r).min(spectrum.gaps[r - 1].width);
        *slot = sep > min_sep;
        if !*slot && !composite {
            return Err(Error::DegenerateBand {
                flux: f.to_string(),
                band: r,
                separation: sep.to_f64().unwrap_or(0.0),
            });
        }
    }

    let mut multiplets = Vec::new();
    let mut start = 1;
    let ends_multiplet = |r: usize| r == q || open[r];
    for r in 1..=q {
        if ends_multiplet(r) {
            let raw = grid.raw_chern(start - 1..=r - 1);
            let c = OracleChern::from_raw(raw);
            multiplets.push(Multiplet {
                bands: start..=r,
                chern: c.chern,
                residual: c.residual,
            });
            start = r + 1;
        }
    }

    let labels = gap_labels(f, Regime::TightBinding)?;
    let mut gaps = Vec::new();
    let mut below = 0;
    for m in &multiplets[..multiplets.len() - 1] {
        below += m.chern;
        let j = *m.bands.end();
        gaps.push(GapCheck {
            index: j,
            oracle: below,
            label: labels[j - 1].sigma,
        });
    }

    let report = ChernReport {
        flux: f,
        grid: n,
        verdict: Verdict::Pass,
        multiplets,
        gaps,
    };
    let ok = report.gaps.iter().all(GapCheck::agrees)
        && report.residuals().iter().all(|&r| r < T::lit(MAX_RESIDUAL))
        && report.total() == 0;
    Ok(ChernReport {
        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        ..report
    })
}
