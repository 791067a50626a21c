//! Colored butterfly rasters.
//!
//! The horizontal axis is energy, the vertical axis the Harper parameter (flux
//! for tight binding, inverse flux for a split Landau level). Each pixel row is
//! assigned the best rational approximant of its center with denominator at
//! most `q_max`; the pixel is white outside that flux's spectrum, black inside
//! a band, and colored by the Hall conductance inside an open gap.

mod image;

use rayon::prelude::*;

use crate::chern::{gap_labels, Regime};
use crate::error::{Error, Result};
use crate::rationals::{best_approximant, best_approximant_exact, ReducedFraction};
use crate::spectrum::{Location, SpectrumAtFlux};

pub use image::{encode, encode_png, encode_ppm, encode_svg, write_image, ImageFormat};

pub type Rgb = [u8; 3];

pub const WHITE: Rgb = [255, 255, 255];
pub const BLACK: Rgb = [0, 0, 0];

/// Largest `q_max` a render accepts.
pub const MAX_RENDER_DENOMINATOR: i64 = 10_000;

#[derive(Clone, Debug, PartialEq)]
pub struct RenderConfig {
    pub regime: Regime,
    pub q_max: i64,
    pub width: usize,
    pub height: usize,
    pub e_min: f64,
    pub e_max: f64,
    /// Rows cover the Harper parameter range `[flux_offset, flux_offset + 1]`.
    pub flux_offset: i64,
    /// Saturation bound of the color ramp.
    pub clip: i64,
    pub format: ImageFormat,
    /// Worker threads for row rendering; 0 uses the global pool.
    pub threads: usize,
}

impl Default for RenderConfig {
    fn default() -> Self {
        Self {
            regime: Regime::TightBinding,
            q_max: 50,
            width: 512,
            height: 512,
            e_min: -4.0,
            e_max: 4.0,
            flux_offset: 0,
            clip: 8,
            format: ImageFormat::Ppm,
            threads: 0,
        }
    }
}

impl RenderConfig {
    pub fn validate(&self) -> Result<()> {
        if self.width < 2 || self.height < 2 {
            return Err(Error::invalid(format!(
                "image must be at least 2x2, got {}x{}",
                self.width, self.height
            )));
        }
        if !(self.e_min.is_finite() && self.e_max.is_finite() && self.e_min < self.e_max) {
            return Err(Error::invalid(format!(
                "energy range must satisfy emin < emax, got [{}, {}]",
                self.e_min, self.e_max
            )));
        }
        if !(1..=MAX_RENDER_DENOMINATOR).contains(&self.q_max) {
            return Err(Error::invalid(format!(
                "qmax must lie in 1..={MAX_RENDER_DENOMINATOR}, got {}",
                self.q_max
            )));
        }
        if self.clip < 1 {
            return Err(Error::invalid(format!(
                "clip must be >= 1, got {}",
                self.clip
            )));
        }
        if self.flux_offset < 0 {
            return Err(Error::invalid("flux offset must be >= 0"));
        }
        Ok(())
    }

    /// Energy at the center of pixel column `x`.
    ///
    /// Written as `center + half·(2x+1−W)/W` so that columns `x` and `W−1−x`
    /// map to exactly mirrored energies when the range is symmetric.
    pub fn energy_at(&self, x: usize) -> f64 {
        let center = 0.5 * (self.e_min + self.e_max);
        let half = 0.5 * (self.e_max - self.e_min);
        let t = (2 * x as i64 + 1 - self.width as i64) as f64 / self.width as f64;
        center + half * t
    }

    /// Exact Harper parameter at the center of row `y` (counted upward),
    /// as `(numerator, denominator)` relative to the offset.
    fn row_fraction(&self, y: usize) -> (i64, i64) {
        (2 * y as i64 + 1, 2 * self.height as i64)
    }

    pub fn flux_at(&self, y: usize) -> f64 {
        let (n, d) = self.row_fraction(y);
        self.flux_offset as f64 + n as f64 / d as f64
    }
}

/// Maps a Hall conductance to a color: white for 0, reds for positive values,
/// blues for negative ones, saturating at `|sigma| = clip`.
pub fn color_of(sigma: i64, clip: i64) -> Rgb {
    assert!(clip >= 1, "clip must be >= 1");
    if sigma == 0 {
        return WHITE;
    }
    let k = sigma.abs().min(clip);
    // round(230·(1 − k/clip)), halves rounded up
    let g = ((460 * (clip - k) + clip) / (2 * clip)) as u8;
    if sigma > 0 {
        [255, g, g]
    } else {
        [g, g, 255]
    }
}

/// What a pixel row needs: the spectrum and one label per gap.
#[derive(Clone, Debug)]
struct RowModel {
    spectrum: SpectrumAtFlux<f64>,
    sigmas: Vec<i64>,
}

impl RowModel {
    /// `None` for rows that render entirely white (Landau regime at inverse flux 0).
    fn build(f: ReducedFraction, regime: Regime) -> Result<Option<Self>> {
        if regime == Regime::LandauSplit && f.p() == 0 {
            return Ok(None);
        }
        let spectrum = SpectrumAtFlux::compute(f)?;
        let sigmas = gap_labels(f, regime)?.iter().map(|l| l.sigma).collect();
        Ok(Some(Self { spectrum, sigmas }))
    }

    fn color(&self, e: f64, clip: i64) -> Rgb {
        match self.spectrum.locate(e) {
            Location::Below | Location::Above => WHITE,
            Location::Band(_) => BLACK,
            Location::Gap(j) => color_of(self.sigmas[j - 1], clip),
        }
    }
}

/// Color of energy `e` on a row whose Harper parameter is `flux ∈ [0, 1]`.
pub fn pixel_color(e: f64, flux: f64, cfg: &RenderConfig) -> Result<Rgb> {
    cfg.validate()?;
    let f = best_approximant(flux, cfg.q_max)?;
    Ok(match RowModel::build(f, cfg.regime)? {
        None => WHITE,
        Some(model) => model.color(e, cfg.clip),
    })
}

/// Affine pixel-center to `(E, Φ)` calibration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisCalibration {
    pub e_min: f64,
    pub e_max: f64,
    pub flux_min: f64,
    pub flux_max: f64,
}

/// RGB pixels, row-major, top image row first.
#[derive(Clone, Debug, PartialEq)]
pub struct ButterflyRaster {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
    pub calibration: AxisCalibration,
    /// Distinct fluxes the rows were computed at, ascending.
    pub fractions: Vec<ReducedFraction>,
}

impl ButterflyRaster {
    /// Pixel in image coordinates (row 0 at the top).
    pub fn image_pixel(&self, x: usize, row: usize) -> Rgb {
        let i = 3 * (row * self.width + x);
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }

    /// Pixel in plot coordinates (`y = 0` is the bottom row, lowest flux).
    pub fn pixel(&self, x: usize, y: usize) -> Rgb {
        self.image_pixel(x, self.height - 1 - y)
    }

    pub fn energy_at(&self, x: usize) -> f64 {
        let c = &self.calibration;
        c.e_min + (x as f64 + 0.5) * (c.e_max - c.e_min) / self.width as f64
    }

    pub fn flux_at(&self, y: usize) -> f64 {
        let c = &self.calibration;
        c.flux_min + (y as f64 + 0.5) * (c.flux_max - c.flux_min) / self.height as f64
    }
}

pub fn render_butterfly(cfg: &RenderConfig) -> Result<ButterflyRaster> {
    cfg.validate()?;
    if cfg.threads == 0 {
        render_rows(cfg)
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
        pool.install(|| render_rows(cfg))
    }
}

fn render_rows(cfg: &RenderConfig) -> Result<ButterflyRaster> {
    let (w, h) = (cfg.width, cfg.height);
    let row_flux: Vec<ReducedFraction> = (0..h)
        .map(|y| {
            let (n, d) = cfg.row_fraction(y);
            best_approximant_exact(n, d, cfg.q_max).map(|f| f.shifted(cfg.flux_offset))
        })
        .collect::<Result<_>>()?;

    let mut fractions = row_flux.clone();
    fractions.sort();
    fractions.dedup();
    let models: Vec<Option<RowModel>> = fractions
        .par_iter()
        .map(|&f| RowModel::build(f, cfg.regime))
        .collect::<Result<_>>()?;

    let energies: Vec<f64> = (0..w).map(|x| cfg.energy_at(x)).collect();
    let mut pixels = vec![0u8; 3 * w * h];
    pixels
        .par_chunks_mut(3 * w)
        .enumerate()
        .for_each(|(row, out)| {
            let y = h - 1 - row;
            let idx = fractions
                .binary_search(&row_flux[y])
                .expect("row flux is among the computed fractions");
            for (x, px) in out.chunks_exact_mut(3).enumerate() {
                let c = match &models[idx] {
                    None => WHITE,
                    Some(m) => m.color(energies[x], cfg.clip),
                };
                px.copy_from_slice(&c);
            }
        });

    Ok(ButterflyRaster {
        width: w,
        height: h,
        pixels,
        calibration: AxisCalibration {
            e_min: cfg.e_min,
            e_max: cfg.e_max,
            flux_min: cfg.flux_offset as f64,
            flux_max: (cfg.flux_offset + 1) as f64,
        },
        fractions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(regime: Regime, q_max: i64, w: usize, h: usize) -> RenderConfig {
        RenderConfig {
            regime,
            q_max,
            width: w,
            height: h,
            ..RenderConfig::default()
        }
    }

    #[test]
    fn palette() {
        assert_eq!(color_of(0, 8), WHITE);
        assert_eq!(color_of(8, 8), [255, 0, 0]);
        assert_eq!(color_of(-4, 8), [115, 115, 255]);
        assert_eq!(color_of(-20, 8), [0, 0, 255]);
        assert_eq!(color_of(1, 1), [255, 0, 0]);
        // 230·(1 − 1/4) = 172.5 rounds up
        assert_eq!(color_of(1, 4), [255, 173, 173]);
        for clip in 1..20 {
            for s in -25..=25i64 {
                let g = (230.0 * (1.0 - s.abs().min(clip) as f64 / clip as f64)).round() as u8;
                let c = color_of(s, clip);
                match s.signum() {
                    0 => assert_eq!(c, WHITE),
                    1 => assert_eq!(c, [255, g, g]),
                    _ => assert_eq!(c, [g, g, 255]),
                }
            }
        }
    }

    #[test]
    fn pixel_color_examples() {
        let c = cfg(Regime::TightBinding, 10, 64, 64);
        assert_eq!(pixel_color(-3.99, 0.5, &c).unwrap(), WHITE);
        assert_eq!(pixel_color(0.0, 1.0 / 3.0 + 1e-6, &c).unwrap(), BLACK);
        assert_eq!(pixel_color(0.0, 1.0 / 3.0 - 1e-6, &c).unwrap(), BLACK);
        assert_eq!(pixel_color(1.9, 1.0 / 3.0, &c).unwrap(), color_of(-1, 8));
        let l = cfg(Regime::LandauSplit, 10, 64, 64);
        assert_eq!(pixel_color(0.0, 0.001, &l).unwrap(), WHITE);
        assert!(pixel_color(0.0, 1.5, &c).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(cfg(Regime::TightBinding, 0, 4, 4).validate().is_err());
        assert!(cfg(Regime::TightBinding, 10, 1, 4).validate().is_err());
        assert!(cfg(Regime::TightBinding, 20_000, 4, 4).validate().is_err());
        let mut c = cfg(Regime::TightBinding, 10, 4, 4);
        c.e_min = 4.0;
        assert!(c.validate().is_err());
        c.e_min = -4.0;
        c.clip = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn single_band_render() {
        let r = render_butterfly(&cfg(Regime::TightBinding, 1, 4, 4)).unwrap();
        for y in 0..4 {
            for x in 0..4 {
                let want = if r.energy_at(x).abs() <= 4.0 {
                    BLACK
                } else {
                    WHITE
                };
                assert_eq!(r.pixel(x, y), want);
            }
        }
        let mut wide = cfg(Regime::TightBinding, 1, 6, 2);
        wide.e_min = -6.0;
        wide.e_max = 6.0;
        let r = render_butterfly(&wide).unwrap();
        assert_eq!(r.pixel(0, 0), WHITE);
        assert_eq!(r.pixel(2, 0), BLACK);
        assert_eq!(r.pixel(5, 1), WHITE);
    }

    #[test]
    fn energy_axis_is_mirror_exact() {
        let c = cfg(Regime::TightBinding, 5, 400, 4);
        for x in 0..400 {
            assert_eq!(c.energy_at(x), -c.energy_at(399 - x));
            let naive = c.e_min + (x as f64 + 0.5) * 8.0 / 400.0;
            assert!((c.energy_at(x) - naive).abs() < 1e-14);
        }
    }
}
