//! PPM, PNG and SVG encoders for a [`ButterflyRaster`].

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

use super::{ButterflyRaster, Rgb};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ImageFormat {
    Ppm,
    Png,
    Svg,
}

impl FromStr for ImageFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ppm" => Ok(ImageFormat::Ppm),
            "png" => Ok(ImageFormat::Png),
            "svg" => Ok(ImageFormat::Svg),
            other => Err(Error::invalid(format!(
                "unknown image format `{other}` (expected ppm, png or svg)"
            ))),
        }
    }
}

/// Binary P6: `P6\n<w> <h>\n255\n` followed by RGB bytes, top row first.
pub fn encode_ppm(raster: &ButterflyRaster) -> Vec<u8> {
    let header = format!("P6\n{} {}\n255\n", raster.width, raster.height);
    let mut out = Vec::with_capacity(header.len() + raster.pixels.len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(&raster.pixels);
    out
}

/// 8-bit truecolor PNG.
pub fn encode_png(raster: &ButterflyRaster) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    {
        let mut encoder = png::Encoder::new(&mut out, raster.width as u32, raster.height as u32);
        encoder.set_color(png::ColorType::Rgb);
        encoder.set_depth(png::BitDepth::Eight);
        let mut writer = encoder
            .write_header()
            .map_err(|e| Error::Encoding(format!("png header: {e}")))?;
        writer
            .write_image_data(&raster.pixels)
            .map_err(|e| Error::Encoding(format!("png data: {e}")))?;
    }
    Ok(out)
}

fn hex(c: Rgb) -> String {
    format!("#{:02X}{:02X}{:02X}", c[0], c[1], c[2])
}

/// One rectangle per maximal horizontal run of equal pixels.
pub fn encode_svg(raster: &ButterflyRaster) -> String {
    let (w, h) = (raster.width, raster.height);
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" shape-rendering=\"crispEdges\">"
    );
    for row in 0..h {
        let mut x = 0;
        while x < w {
            let c = raster.image_pixel(x, row);
            let mut end = x + 1;
            while end < w && raster.image_pixel(end, row) == c {
                end += 1;
            }
            let _ = writeln!(
                s,
                "<rect x=\"{x}\" y=\"{row}\" width=\"{}\" height=\"1\" fill=\"{}\"/>",
                end - x,
                hex(c)
            );
            x = end;
        }
    }
    s.push_str("</svg>\n");
    s
}

pub fn encode(raster: &ButterflyRaster, format: ImageFormat) -> Result<Vec<u8>> {
    Ok(match format {
        ImageFormat::Ppm => encode_ppm(raster),
        ImageFormat::Png => encode_png(raster)?,
        ImageFormat::Svg => encode_svg(raster).into_bytes(),
    })
}

pub fn write_image(raster: &ButterflyRaster, format: ImageFormat, path: &Path) -> Result<()> {
    let bytes = encode(raster, format)?;
    fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
