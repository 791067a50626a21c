//! Command-line front end.
//!
//! Exit codes: 0 success, 1 I/O or internal failure, 2 usage error,
//! 3 verification failure, 4 refused because bands touch.

pub mod export;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::chern::{gap_labels, Regime};
use crate::error::{Error, Result};
use crate::rationals::ReducedFraction;
use crate::render::{render_butterfly, write_image, ImageFormat, RenderConfig};
use crate::spectrum::SpectrumAtFlux;
use crate::verify::{verify_labels, verify_labels_composite, Verdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FAIL: i32 = 3;
pub const EXIT_DEGENERATE: i32 = 4;

/// Magnitudes below this print as 0: they sit under the eigensolver's
/// absolute accuracy.
const ZERO_SNAP: f64 = 1e-10;

/// `x` to 12 significant digits, `%g` style.
pub fn fmt_sig(x: f64) -> String {
    if x.abs() < ZERO_SNAP {
        return "0".to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    trim_zeros(&format!("{:.*}", (11 - exp) as usize, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `x` rounded to the value [`fmt_sig`] prints.
pub fn round_sig(x: f64) -> f64 {
    fmt_sig(x).parse().expect("fmt_sig output parses")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RegimeArg {
    Tb,
    Landau,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::Tb => Regime::TightBinding,
            RegimeArg::Landau => Regime::LandauSplit,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Ppm,
    Png,
    Svg,
}

impl From<FormatArg> for ImageFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Ppm => ImageFormat::Ppm,
            FormatArg::Png => ImageFormat::Png,
            FormatArg::Svg => ImageFormat::Svg,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "hofstadter",
    version,
    about = "Colored Hofstadter butterflies and their Hall conductances"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Band edges, bands and gaps of the Harper equation at flux p/q.
    Spectrum { p: i64, q: i64 },
    /// Hall conductance of every gap at p/q.
    Labels {
        p: i64,
        q: i64,
        #[arg(long, value_enum, default_value = "tb")]
        regime: RegimeArg,
    },
    /// Render a colored butterfly.
    Butterfly {
        #[arg(long, value_enum, default_value = "tb")]
        regime: RegimeArg,
        #[arg(long, default_value_t = 50)]
        qmax: i64,
        #[arg(long, default_value_t = 512)]
        width: usize,
        #[arg(long, default_value_t = 512)]
        height: usize,
        #[arg(long, default_value_t = -4.0, allow_negative_numbers = true)]
        emin: f64,
        #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
        emax: f64,
        #[arg(long, default_value_t = 8)]
        clip: i64,
        /// Defaults to the extension of --out, else ppm.
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        #[arg(long)]
        out: PathBuf,
        /// Row-rendering threads (0 = one per core).
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
    /// Write every gap with q <= qmax to a .csv or .json file.
    Export {
        #[arg(long)]
        qmax: i64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare Diophantine labels with lattice Berry-curvature Chern numbers.
    Verify {
        p: i64,
        q: i64,
        #[arg(long, default_value_t = 30)]
        grid: usize,
        /// Merge touching bands instead of refusing them.
        #[arg(long)]
        composite: bool,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) => EXIT_USAGE,
        Error::DegenerateBand { .. } => EXIT_DEGENERATE,
        Error::Io { .. } | Error::NoConvergence { .. } | Error::Encoding(_) => EXIT_IO,
    }
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, A>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
                return EXIT_USAGE;
            }
            let _ = write!(out, "{text}");
            return EXIT_OK;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io {
        path: PathBuf::from("<stdout>"),
        source: e,
    }
}

fn fraction(p: i64, q: i64) -> Result<ReducedFraction> {
    ReducedFraction::new(p, q)
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Spectrum { p, q } => {
            let f = fraction(p, q)?;
            print_spectrum(&SpectrumAtFlux::compute(f)?, out).map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Command::Labels { p, q, regime } => {
            let f = fraction(p, q)?;
            let regime = Regime::from(regime);
            let labels = gap_labels(f, regime)?;
            let spectrum = SpectrumAtFlux::<f64>::compute(f)?;
            writeln!(out, "# flux {f} regime {regime}").map_err(io_err)?;
            writeln!(out, "j\tsigma\twidth\tambiguous").map_err(io_err)?;
            for (l, g) in labels.iter().zip(&spectrum.gaps) {
                writeln!(
                    out,
                    "{}\t{}\t{}\t{}",
                    l.index,
                    l.sigma,
                    fmt_sig(g.width),
                    l.ambiguous
                )
                .map_err(io_err)?;
            }
            Ok(EXIT_OK)
        }
        Command::Butterfly {
            regime,
            qmax,
            width,
            height,
            emin,
            emax,
            clip,
            format,
            out: path,
            threads,
        } => {
            let format = match format {
                Some(f) => f.into(),
                None => path
                    .extension()
                    .and_then(|e| e.to_str())
                    .and_then(|e| e.parse().ok())
                    .unwrap_or(ImageFormat::Ppm),
            };
            let cfg = RenderConfig {
                regime: regime.into(),
                q_max: qmax,
                width,
                height,
                e_min: emin,
                e_max: emax,
                flux_offset: 0,
                clip,
                format,
                threads,
            };
            let start = Instant::now();
            let raster = render_butterfly(&cfg)?;
            write_image(&raster, cfg.format, &path)?;
            let _ = writeln!(
                err,
                "rendered {}x{} {} butterfly from {} fractions in {:.3}s -> {}",
                width,
                height,
                cfg.regime,
                raster.fractions.len(),
                start.elapsed().as_secs_f64(),
                path.display()
            );
            Ok(EXIT_OK)
        }
        Command::Export { qmax, out: path } => {
            let format = export::ExportFormat::from_path(&path)?;
            let records = export::gap_records(qmax)?;
            let bytes = match format {
                export::ExportFormat::Csv => export::to_csv(&records)?,
                export::ExportFormat::Json => export::to_json(&records)?,
            };
            fs::write(&path, bytes).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            writeln!(
                out,
                "wrote {} gap records to {}",
                records.len(),
                path.display()
            )
            .map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            p,
            q,
            grid,
            composite,
        } => {
            let f = fraction(p, q)?;
            let report = if composite {
                verify_labels_composite::<f64>(f, grid)?
            } else {
                verify_labels::<f64>(f, grid)?
            };
            writeln!(out, "# flux {f} grid {grid}").map_err(io_err)?;
            writeln!(out, "bands\tchern\tresidual").map_err(io_err)?;
            for m in &report.multiplets {
                let bands = if m.bands.start() == m.bands.end() {
                    m.bands.start().to_string()
                } else {
                    format!("{}-{}", m.bands.start(), m.bands.end())
                };
                writeln!(out, "{bands}\t{}\t{:.3e}", m.chern, m.residual).map_err(io_err)?;
            }
            writeln!(out, "gap\tcumulative\tlabel\tmatch").map_err(io_err)?;
            for g in &report.gaps {
                writeln!(
                    out,
                    "{}\t{}\t{}\t{}",
                    g.index,
                    g.oracle,
                    g.label,
                    g.agrees()
                )
                .map_err(io_err)?;
            }
            writeln!(out, "verdict {}", report.verdict).map_err(io_err)?;
            Ok(match report.verdict {
                Verdict::Pass => EXIT_OK,
                Verdict::Fail => EXIT_FAIL,
            })
        }
    }
}

fn print_spectrum(s: &SpectrumAtFlux<f64>, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "# flux {}", s.flux)?;
    writeln!(out, "edges")?;
    for e in &s.edges {
        writeln!(out, "{}", fmt_sig(*e))?;
    }
    writeln!(out, "bands")?;
    for (r, b) in s.bands.iter().enumerate() {
        writeln!(out, "{}\t{}\t{}", r + 1, fmt_sig(b.lo), fmt_sig(b.hi))?;
    }
    writeln!(out, "gaps")?;
    for g in &s.gaps {
        writeln!(
            out,
            "{}\t{}\t{}\t{}",
            g.index,
            fmt_sig(g.lo),
            fmt_sig(g.hi),
            fmt_sig(g.width)
        )?;
    }
    Ok(())
}
