//! Colored Hofstadter butterflies.
//!
//! The crate computes the spectrum of the Harper equation at rational flux
//! `p/q`, labels every spectral gap with its quantized Hall conductance using
//! the Diophantine rule `k_j = j·m mod q`, checks those labels against a
//! lattice Berry-curvature integration, and renders the two colored butterfly
//! diagrams (a Bloch band split by a weak field, and a Landau level split by a
//! weak periodic potential).
//!
//! The floating-point layers ([`spectrum`], [`linalg`], [`verify`]) are generic
//! over [`Real`] so they run in `f32` or `f64`; integer number theory lives in
//! [`rationals`] and [`chern`]. The aliases below pin the `f64` instantiations
//! that the renderer and the command line use.

pub mod chern;
pub mod cli;
mod error;
pub mod linalg;
pub mod rationals;
pub mod render;
pub mod spectrum;
pub mod verify;

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};

pub use chern::{band_cherns, centered_residue, gap_labels, GapLabel, Regime};
pub use error::{Error, Result};
pub use rationals::{DiophantinePair, ReducedFraction};

/// Floating-point scalar used by the numerical layers.
pub trait Real:
    Float + FloatConst + FromPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Lossless-enough conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn count(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("usize representable")
    }

    fn int(n: i64) -> Self {
        <Self as FromPrimitive>::from_i64(n).expect("i64 representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub type HarperMatrix = spectrum::HarperMatrix<f64>;
pub type SpectrumAtFlux = spectrum::SpectrumAtFlux<f64>;
pub type Band = spectrum::Band<f64>;
pub type Gap = spectrum::Gap<f64>;
pub type BlochHamiltonian = verify::BlochHamiltonian<f64>;
pub type ChernReport = verify::ChernReport<f64>;
pub type Complex64 = num_complex::Complex<f64>;
