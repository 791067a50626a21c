//! Exact rational flux values.
//!
//! Everything here is integer arithmetic. Denominators are capped at
//! [`MAX_DENOMINATOR`], which keeps every intermediate product inside `i64`
//! (cross-multiplications are widened to `i128` anyway).

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::Real;

/// Largest denominator accepted by the enumeration and approximation routines.
pub const MAX_DENOMINATOR: i64 = 1_000_000;

/// A non-negative rational `p/q` in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ReducedFraction {
    p: i64,
    q: i64,
}

impl ReducedFraction {
    /// Builds `p/q`, rejecting anything that is not already reduced.
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if q < 1 {
            return Err(Error::invalid(format!("denominator must be >= 1, got {q}")));
        }
        if p < 0 {
            return Err(Error::invalid(format!("numerator must be >= 0, got {p}")));
        }
        if gcd(p, q) != 1 {
            return Err(Error::invalid(format!(
                "{p}/{q} is not reduced: p and q must be coprime"
            )));
        }
        Ok(Self { p, q })
    }

    /// Builds `p/q` after dividing out the common factor.
    pub fn reduced(p: i64, q: i64) -> Result<Self> {
        if q < 1 || p < 0 {
            return Err(Error::invalid(format!(
                "{p}/{q} is not a non-negative fraction"
            )));
        }
        let g = gcd(p, q);
        Ok(Self { p: p / g, q: q / g })
    }

    pub const fn zero() -> Self {
        Self { p: 0, q: 1 }
    }

    pub const fn one() -> Self {
        Self { p: 1, q: 1 }
    }

    #[inline]
    pub fn p(&self) -> i64 {
        self.p
    }

    #[inline]
    pub fn q(&self) -> i64 {
        self.q
    }

    /// Denominator as a matrix order.
    #[inline]
    pub fn order(&self) -> usize {
        self.q as usize
    }

    pub fn value<T: Real>(&self) -> T {
        T::int(self.p) / T::int(self.q)
    }

    /// `p/q + k` for a non-negative integer shift `k`.
    pub fn shifted(&self, k: i64) -> Self {
        Self {
            p: self.p + k * self.q,
            q: self.q,
        }
    }

    /// `1 - p/q`, for fractions in `[0, 1]`.
    pub fn reflected(&self) -> Option<Self> {
        (self.p <= self.q).then(|| Self {
            p: self.q - self.p,
            q: self.q,
        })
    }

    /// The conjugate pair `(m, n)` with `p·m − q·n = 1`.
    pub fn conjugate_pair(&self) -> DiophantinePair {
        conjugate_pair(self.p, self.q).expect("reduced fraction always has a conjugate pair")
    }
}

impl fmt::Display for ReducedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl PartialOrd for ReducedFraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ReducedFraction {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.p as i128 * other.q as i128).cmp(&(other.p as i128 * self.q as i128))
    }
}

/// Solution `(m, n)` of `p·m − q·n = 1`, with `m` reduced into `[0, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiophantinePair {
    pub m: i64,
    pub n: i64,
}

pub fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended Euclid: returns `(g, x, y)` with `a·x + b·y = g = gcd(a, b)`.
pub fn extended_gcd(a: i64, b: i64) -> Result<(i64, i64, i64)> {
    if a < 0 || b < 0 {
        return Err(Error::invalid(format!(
            "extended_gcd needs non-negative inputs, got ({a}, {b})"
        )));
    }
    if a == 0 && b == 0 {
        return Err(Error::invalid("extended_gcd(0, 0) is undefined"));
    }
    let (mut old_r, mut r) = (a, b);
    let (mut old_x, mut x) = (1i64, 0i64);
    let (mut old_y, mut y) = (0i64, 1i64);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_x, x) = (x, old_x - quot * x);
        (old_y, y) = (y, old_y - quot * y);
    }
    Ok((old_r, old_x, old_y))
}

/// Solves `p·m − q·n = 1` with `0 ≤ m < q` (and `m = 0` when `q = 1`).
pub fn conjugate_pair(p: i64, q: i64) -> Result<DiophantinePair> {
    if q < 1 || p < 0 {
        return Err(Error::invalid(format!(
            "conjugate pair needs p >= 0 and q >= 1, got {p}/{q}"
        )));
    }
    let (g, x, _) = extended_gcd(p, q)?;
    if g != 1 {
        return Err(Error::invalid(format!(
            "p·m − q·n = 1 has no solution for {p}/{q}: p and q must be coprime"
        )));
    }
    let m = x.rem_euclid(q);
    let num = p as i128 * m as i128 - 1;
    debug_assert_eq!(num % q as i128, 0);
    let n = (num / q as i128) as i64;
    Ok(DiophantinePair { m, n })
}

fn check_q_max(q_max: i64) -> Result<()> {
    if q_max < 1 {
        return Err(Error::invalid(format!("q_max must be >= 1, got {q_max}")));
    }
    if q_max > MAX_DENOMINATOR {
        return Err(Error::invalid(format!(
            "q_max must be <= {MAX_DENOMINATOR}, got {q_max}"
        )));
    }
    Ok(())
}

/// All reduced fractions in `[0, 1]` with denominator at most `q_max`, increasing.
pub fn farey_sequence(q_max: i64) -> Result<Vec<ReducedFraction>> {
    check_q_max(q_max)?;
    let mut out = vec![ReducedFraction::zero()];
    let (mut a, mut b, mut c, mut d) = (0i64, 1i64, 1i64, q_max);
    while c <= q_max {
        out.push(ReducedFraction { p: c, q: d });
        let k = (q_max + b) / d;
        (a, b, c, d) = (c, d, k * c - a, k * d - b);
    }
    Ok(out)
}

/// Closest fraction to `x ∈ [0, 1]` with denominator at most `q_max`.
///
/// Ties go to the smaller denominator, then the smaller numerator.
pub fn best_approximant(x: f64, q_max: i64) -> Result<ReducedFraction> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::invalid(format!("x must lie in [0, 1], got {x}")));
    }
    check_q_max(q_max)?;
    let mut best = ReducedFraction::zero();
    let mut best_dist = x;
    for q in 1..=q_max {
        let lo = ((x * q as f64).floor() as i64).clamp(0, q);
        for p in [lo, (lo + 1).min(q)] {
            if gcd(p, q) != 1 {
                continue;
            }
            let dist = (x - p as f64 / q as f64).abs();
            if dist < best_dist {
                best = ReducedFraction { p, q };
                best_dist = dist;
            }
        }
    }
    Ok(best)
}

/// [`best_approximant`] for an exact rational target `num/den ∈ [0, 1]`.
///
/// Distances are compared by integer cross-multiplication, so the answer for
/// `1 − x` is the reflection of the answer for `x`.
pub fn best_approximant_exact(num: i64, den: i64, q_max: i64) -> Result<ReducedFraction> {
    if den < 1 || num < 0 || num > den {
        return Err(Error::invalid(format!("{num}/{den} must lie in [0, 1]")));
    }
    check_q_max(q_max)?;
    let (num, den) = (num as i128, den as i128);
    // distance of p/q from num/den is |num·q − p·den| / (den·q)
    let mut best = ReducedFraction::zero();
    let (mut best_err, mut best_q) = (num, 1i128);
    for q in 1..=q_max {
        let qi = q as i128;
        let lo = ((num * qi) / den) as i64;
        for p in [lo, (lo + 1).min(q)] {
            if gcd(p, q) != 1 {
                continue;
            }
            let err = (num * qi - p as i128 * den).abs();
            if err * best_q < best_err * qi {
                best = ReducedFraction { p, q };
                best_err = err;
                best_q = qi;
            }
        }
    }
    Ok(best)
}
