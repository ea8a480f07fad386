//! Exact rational scalars.
//!
//! All quantities in this crate (arc weights, moduli, potentials, cycle
//! ratios) are arbitrary-precision rationals; nothing is ever rounded.
//! The feasibility conditions rest on strict inequalities between mod-r
//! residues, so floating point is not an option anywhere.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::Error;

/// Exact rational number, always kept in reduced canonical form
/// (positive denominator, gcd of numerator and denominator 1).
pub type Rational = num_rational::BigRational;

/// Shorthand constructor used pervasively in tests and examples.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// The unique `t` in `[0, r)` with `t ≡ x (mod r)`, for `r > 0`.
pub fn mod_r(x: &Rational, r: &Rational) -> Result<Rational, Error> {
    if !r.is_positive() {
        return Err(Error::NonPositiveModulus(format_rational(r)));
    }
    let t = x - r * (x / r).floor();
    debug_assert!(!t.is_negative() && t < *r);
    Ok(t)
}

/// Parses `a/b`, a plain integer, or an exact decimal such as `2.5`.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("cannot parse rational from {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((numer, denom)) = s.split_once('/') {
        let n: BigInt = numer.trim().parse().map_err(|_| bad())?;
        let d: BigInt = denom.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::InvalidInput(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        // Exact decimal: 2.5 -> 25/10 -> 5/2.
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int_part.starts_with('-');
        let int: BigInt = if int_part == "-" {
            BigInt::zero()
        } else {
            int_part.parse().map_err(|_| bad())?
        };
        let frac: BigInt = frac_part.parse().map_err(|_| bad())?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let magnitude = int.abs() * &scale + frac;
        let signed = if negative { -magnitude } else { magnitude };
        return Ok(Rational::new(signed, scale));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Canonical text form: plain integer when the denominator is 1,
/// otherwise `a/b` in lowest terms. Never a decimal.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
