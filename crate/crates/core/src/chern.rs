//! Gap labels from the Diophantine equation.
//!
//! At flux `p/q` let `m` solve `p·m − q·n = 1`. The Hall conductance of the
//! `j`-th gap, in units of `e²/h`, is the representative of `j·m mod q` of
//! smallest magnitude. For a Landau level split by a weak potential the same
//! rule applies with `p` and `q` swapped.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rationals::{conjugate_pair, ReducedFraction};

/// Which physical limit the Harper parameter describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// Bloch band split by a weak magnetic field; the Harper parameter is the flux.
    TightBinding,
    /// Landau level split by a weak periodic potential; the Harper parameter is
    /// the inverse flux.
    LandauSplit,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::TightBinding => "tb",
            Regime::LandauSplit => "landau",
        })
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tb" | "tight-binding" => Ok(Regime::TightBinding),
            "landau" => Ok(Regime::LandauSplit),
            other => Err(Error::invalid(format!(
                "unknown regime `{other}` (expected tb or landau)"
            ))),
        }
    }
}

/// `a mod modulus` folded into `(−modulus/2, modulus/2]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CenteredResidue {
    pub value: i64,
    /// Set when `modulus` is even and the residue sits on `modulus/2`, where
    /// `−modulus/2` would be an equally small representative.
    pub ambiguous: bool,
}

pub fn centered_residue(a: i64, modulus: i64) -> CenteredResidue {
    assert!(modulus >= 1, "modulus must be >= 1");
    let mut r = a.rem_euclid(modulus);
    if 2 * r > modulus {
        r -= modulus;
    }
    CenteredResidue {
        value: r,
        ambiguous: modulus % 2 == 0 && 2 * r == modulus,
    }
}

/// Hall conductance attached to one gap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GapLabel {
    /// 1-based gap index.
    pub index: usize,
    pub sigma: i64,
    pub regime: Regime,
    pub ambiguous: bool,
}

/// Multiplier and modulus of the label rule for `regime`.
fn label_rule(f: ReducedFraction, regime: Regime) -> Result<(i64, i64)> {
    match regime {
        Regime::TightBinding => Ok((f.conjugate_pair().m, f.q())),
        Regime::LandauSplit => {
            if f.p() == 0 {
                return Err(Error::invalid(
                    "Landau-split labels are undefined at inverse flux 0 (p must be >= 1)",
                ));
            }
            // q·m̃ − p·ñ = 1
            Ok((conjugate_pair(f.q(), f.p())?.m, f.p()))
        }
    }
}

/// Labels of gaps `j = 1..q−1`, closed gaps included.
pub fn gap_labels(f: ReducedFraction, regime: Regime) -> Result<Vec<GapLabel>> {
    let (m, modulus) = label_rule(f, regime)?;
    Ok((1..f.q())
        .map(|j| {
            let r = centered_residue(j * m, modulus);
            GapLabel {
                index: j as usize,
                sigma: r.value,
                regime,
                ambiguous: r.ambiguous,
            }
        })
        .collect())
}

/// Band Chern numbers as differences of consecutive gap labels.
///
/// Below the spectrum the label is 0. Above it the label is `centered(q·m, q) = 0`
/// for tight binding and `centered(q·m̃, p)` for a split Landau level.
pub fn band_cherns(labels: &[GapLabel], f: ReducedFraction, regime: Regime) -> Result<Vec<i64>> {
    let q = f.q();
    if labels.len() as i64 != q - 1 {
        return Err(Error::invalid(format!(
            "expected {} gap labels for {f}, got {}",
            q - 1,
            labels.len()
        )));
    }
    let (m, modulus) = label_rule(f, regime)?;
    let top = centered_residue(q * m, modulus).value;
    let ladder: Vec<i64> = std::iter::once(0)
        .chain(labels.iter().map(|l| l.sigma))
        .chain(std::iter::once(top))
        .collect();
    Ok(ladder.windows(2).map(|w| w[1] - w[0]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rationals::{farey_sequence, gcd};

    fn frac(p: i64, q: i64) -> ReducedFraction {
        ReducedFraction::new(p, q).unwrap()
    }

    fn sigmas(f: ReducedFraction, regime: Regime) -> Vec<i64> {
        gap_labels(f, regime)
            .unwrap()
            .iter()
            .map(|l| l.sigma)
            .collect()
    }

    #[test]
    fn centered_residue_examples() {
        assert_eq!(
            centered_residue(6, 5),
            CenteredResidue {
                value: 1,
                ambiguous: false
            }
        );
        assert_eq!(
            centered_residue(9, 5),
            CenteredResidue {
                value: -1,
                ambiguous: false
            }
        );
        assert_eq!(
            centered_residue(1, 2),
            CenteredResidue {
                value: 1,
                ambiguous: true
            }
        );
        assert_eq!(
            centered_residue(-7, 1),
            CenteredResidue {
                value: 0,
                ambiguous: false
            }
        );
        assert_eq!(centered_residue(-1, 4).value, -1);
        assert_eq!(
            centered_residue(6, 4),
            CenteredResidue {
                value: 2,
                ambiguous: true
            }
        );
    }

    #[test]
    fn tight_binding_examples() {
        assert_eq!(sigmas(frac(1, 3), Regime::TightBinding), vec![1, -1]);
        assert_eq!(sigmas(frac(2, 5), Regime::TightBinding), vec![-2, 1, -1, 2]);
        assert!(sigmas(frac(1, 1), Regime::TightBinding).is_empty());
        let half = gap_labels(frac(1, 2), Regime::TightBinding).unwrap();
        assert_eq!(half[0].sigma, 1);
        assert!(half[0].ambiguous);
    }

    #[test]
    fn landau_examples() {
        assert_eq!(sigmas(frac(1, 2), Regime::LandauSplit), vec![0]);
        assert_eq!(sigmas(frac(1, 3), Regime::LandauSplit), vec![0, 0]);
        assert_eq!(sigmas(frac(4, 3), Regime::LandauSplit), vec![-1, 2]);
        assert!(gap_labels(frac(0, 1), Regime::LandauSplit).is_err());
        let l = gap_labels(frac(4, 5), Regime::LandauSplit).unwrap();
        assert!(l[1].ambiguous, "{l:?}");
    }

    #[test]
    fn band_chern_examples() {
        let f = frac(1, 3);
        let l = gap_labels(f, Regime::TightBinding).unwrap();
        assert_eq!(
            band_cherns(&l, f, Regime::TightBinding).unwrap(),
            vec![1, -2, 1]
        );
        let f = frac(1, 2);
        let l = gap_labels(f, Regime::TightBinding).unwrap();
        assert_eq!(
            band_cherns(&l, f, Regime::TightBinding).unwrap(),
            vec![1, -1]
        );
        for regime in [Regime::TightBinding, Regime::LandauSplit] {
            let f = frac(1, 1);
            let l = gap_labels(f, regime).unwrap();
            assert_eq!(band_cherns(&l, f, regime).unwrap(), vec![0]);
        }
        assert!(band_cherns(&[], frac(1, 3), Regime::TightBinding).is_err());
    }

    #[test]
    fn landau_top_label_is_residual_total() {
        // q·m̃ ≡ 1 (mod p), so the label above the spectrum is 1 for p >= 2
        let f = frac(4, 3);
        let l = gap_labels(f, Regime::LandauSplit).unwrap();
        let c = band_cherns(&l, f, Regime::LandauSplit).unwrap();
        assert_eq!(c, vec![-1, 3, -1]);
        assert_eq!(c.iter().sum::<i64>(), 1);
    }

    #[test]
    fn label_bounds() {
        for f in farey_sequence(60).unwrap() {
            for l in gap_labels(f, Regime::TightBinding).unwrap() {
                assert!(2 * l.sigma.abs() <= f.q());
            }
            if f.p() > 0 {
                for l in gap_labels(f, Regime::LandauSplit).unwrap() {
                    assert!(2 * l.sigma.abs() <= f.p());
                }
            }
        }
        for q in 1..40 {
            for p in (q + 1)..3 * q {
                if gcd(p, q) == 1 {
                    for l in gap_labels(frac(p, q), Regime::LandauSplit).unwrap() {
                        assert!(2 * l.sigma.abs() <= p);
                    }
                }
            }
        }
    }

    #[test]
    fn regime_parsing() {
        assert_eq!("tb".parse::<Regime>().unwrap(), Regime::TightBinding);
        assert_eq!("landau".parse::<Regime>().unwrap(), Regime::LandauSplit);
        assert!("bloch".parse::<Regime>().is_err());
    }
}
