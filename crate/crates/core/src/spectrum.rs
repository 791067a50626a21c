//! Harper spectrum at rational flux.
//!
//! At flux `p/q` the Harper equation `ψ(n+1) + ψ(n−1) + 2cos(2πΦn + ν)ψ(n) = Eψ(n)`
//! is `q`-periodic. Band edges are the eigenvalues of two `q×q` matrices: the
//! periodic one (`ψ(n+q) = ψ(n)`, `ν = 0`) and the antiperiodic one
//! (`ψ(n+q) = −ψ(n)`, `ν = π/q`). The transverse phase on the antiperiodic
//! matrix matters: with `ν = 0` it lands inside the bands instead of on their
//! edges (at `1/2` it gives `±2` instead of the touching point `0`).

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rationals::ReducedFraction;
use crate::Real;

pub use crate::linalg::symmetric_eigenvalues;

/// Boundary condition across one magnetic period.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Boundary {
    /// `ψ(n+q) = ψ(n)`
    Periodic,
    /// `ψ(n+q) = −ψ(n)`
    Antiperiodic,
}

impl Boundary {
    pub fn sign(self) -> i32 {
        match self {
            Boundary::Periodic => 1,
            Boundary::Antiperiodic => -1,
        }
    }
}

/// One of the two `q×q` Harper matrices at flux `p/q`.
#[derive(Clone, Debug, PartialEq)]
pub struct HarperMatrix<T> {
    pub flux: ReducedFraction,
    pub phase: T,
    pub boundary: Boundary,
    pub entries: Matrix<T>,
}

impl<T: Real> HarperMatrix<T> {
    pub fn order(&self) -> usize {
        self.entries.order()
    }

    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        symmetric_eigenvalues(&self.entries)
    }
}

/// `2cos(2π·(p·n mod q)/q + ν)`.
///
/// The product is reduced modulo `q` before going to floating point, so fluxes
/// that differ by an integer give bit-identical diagonals.
pub(crate) fn onsite<T: Real>(flux: ReducedFraction, site: usize, phase: T) -> T {
    let q = flux.q();
    let residue = ((flux.p() as i128 * site as i128) % q as i128) as i64;
    let angle = T::TAU() * T::int(residue) / T::int(q) + phase;
    T::lit(2.0) * angle.cos()
}

/// Builds the Harper matrix for flux `f`, transverse phase `phase` and the
/// given boundary condition.
///
/// Bonds `(n, n+1)` for `n < q−1` carry `1`; the wrap bond `(q−1, 0)` carries
/// `±1`. For `q = 2` the interior and wrap bonds land on the same entry and
/// add; for `q = 1` the wrap bond couples the only site to itself twice.
pub fn harper_matrix<T: Real>(f: ReducedFraction, phase: T, boundary: Boundary) -> HarperMatrix<T> {
    let q = f.order();
    let wrap = T::int(boundary.sign() as i64);
    let mut m = Matrix::zeros(q);
    for n in 0..q {
        m[(n, n)] = onsite(f, n, phase);
    }
    for n in 0..q.saturating_sub(1) {
        m[(n, n + 1)] = m[(n, n + 1)] + T::one();
        m[(n + 1, n)] = m[(n + 1, n)] + T::one();
    }
    // wrap bond q−1 → 0 and its mirror
    m[(q - 1, 0)] = m[(q - 1, 0)] + wrap;
    m[(0, q - 1)] = m[(0, q - 1)] + wrap;
    HarperMatrix {
        flux: f,
        phase,
        boundary,
        entries: m,
    }
}

/// The `2q` band edges at flux `f`, ascending.
pub fn band_edges<T: Real>(f: ReducedFraction) -> Result<Vec<T>> {
    let periodic = harper_matrix(f, T::zero(), Boundary::Periodic);
    let anti = harper_matrix(f, T::PI() / T::int(f.q()), Boundary::Antiperiodic);
    let mut edges = periodic.eigenvalues()?;
    edges.extend(anti.eigenvalues()?);
    edges.sort_by(|a, b| a.partial_cmp(b).expect("finite band edges"));
    Ok(edges)
}

/// Closed band interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Band<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Real> Band<T> {
    pub fn contains(&self, e: T) -> bool {
        self.lo <= e && e <= self.hi
    }

    pub fn width(&self) -> T {
        self.hi - self.lo
    }
}

/// Gap `j` (1-based) between bands `j` and `j+1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gap<T> {
    pub index: usize,
    pub lo: T,
    pub hi: T,
    /// `max(0, hi − lo)`; touching bands give a closed gap of width zero.
    pub width: T,
}

impl<T: Real> Gap<T> {
    pub fn is_open(&self) -> bool {
        self.width > T::zero()
    }

    /// Length of the intersection of the two open intervals.
    pub fn overlap(&self, other: &Gap<T>) -> T {
        (self.hi.min(other.hi) - self.lo.max(other.lo)).max(T::zero())
    }
}

/// Where an energy sits relative to a spectrum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Below,
    Above,
    /// Inside the closed band with this 1-based index.
    Band(usize),
    /// Strictly inside the open gap with this 1-based index.
    Gap(usize),
}

/// Band edges, bands and gaps at one flux.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumAtFlux<T> {
    pub flux: ReducedFraction,
    pub edges: Vec<T>,
    pub bands: Vec<Band<T>>,
    pub gaps: Vec<Gap<T>>,
}

impl<T: Real> SpectrumAtFlux<T> {
    pub fn compute(f: ReducedFraction) -> Result<Self> {
        bands_and_gaps(band_edges(f)?, f)
    }

    pub fn bottom(&self) -> T {
        self.edges[0]
    }

    pub fn top(&self) -> T {
        self.edges[self.edges.len() - 1]
    }

    pub fn open_gaps(&self) -> impl Iterator<Item = &Gap<T>> {
        self.gaps.iter().filter(|g| g.is_open())
    }

    pub fn locate(&self, e: T) -> Location {
        if e < self.bottom() {
            return Location::Below;
        }
        if e > self.top() {
            return Location::Above;
        }
        // first band whose upper edge is >= e
        let r = self.bands.partition_point(|b| b.hi < e);
        if self.bands[r].contains(e) {
            Location::Band(r + 1)
        } else {
            Location::Gap(r)
        }
    }
}

impl<T: Real> fmt::Display for SpectrumAtFlux<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "spectrum at {} ({} bands)", self.flux, self.bands.len())
    }
}

/// Groups sorted edges into bands `[e₂ᵣ₋₁, e₂ᵣ]` and the gaps between them.
pub fn bands_and_gaps<T: Real>(edges: Vec<T>, f: ReducedFraction) -> Result<SpectrumAtFlux<T>> {
    if edges.is_empty() || !edges.len().is_multiple_of(2) {
        return Err(Error::invalid(format!(
            "band edges must come in pairs, got {} values",
            edges.len()
        )));
    }
    // NaN compares as unordered and is rejected here too
    if edges.windows(2).any(|w| {
        !matches!(
            w[0].partial_cmp(&w[1]),
            Some(Ordering::Less | Ordering::Equal)
        )
    }) {
        return Err(Error::invalid("band edges must be sorted"));
    }
    let bands: Vec<_> = edges
        .chunks(2)
        .map(|c| Band { lo: c[0], hi: c[1] })
        .collect();
    let gaps = bands
        .windows(2)
        .enumerate()
        .map(|(i, w)| Gap {
            index: i + 1,
            lo: w[0].hi,
            hi: w[1].lo,
            width: (w[1].lo - w[0].hi).max(T::zero()),
        })
        .collect();
    Ok(SpectrumAtFlux {
        flux: f,
        edges,
        bands,
        gaps,
    })
}
