//! Exact rational scalars.
//!
//! All linear algebra in this crate runs over arbitrary-precision rationals;
//! there is no floating point anywhere. Values serialize as `"p/q"` or `"p"`
//! (when `q = 1`) with the sign carried by the numerator.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Scalar type: an arbitrary-precision rational, always stored canonically
/// (reduced, positive denominator, zero as `0/1`).
pub type Rat = BigRational;

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

pub fn from_i64(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rat {
    assert!(den != 0, "zero denominator");
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Formats canonically: `"p"` when the denominator is 1, `"p/q"` otherwise.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p"` or `"p/q"`. Rejects zero denominators and malformed input;
/// non-canonical input like `"2/4"` or `"1/-2"` is accepted and canonicalized.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Schema(format!("malformed rational `{s}`"));
    let parse_int = |t: &str| -> Result<BigInt> { t.trim().parse::<BigInt>().map_err(|_| bad()) };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((num, den)) => {
            let num = parse_int(num)?;
            let den = parse_int(den)?;
            if den.is_zero() {
                return Err(Error::Schema(format!("zero denominator in rational `{s}`")));
            }
            Ok(Rat::new(num, den))
        }
    }
}

/// Sign-aware rendering of `coeff * name`, used when pretty-printing sparse
/// vectors: `x`, `-x`, `2x`, `-1/2x`.
pub fn format_term(coeff: &Rat, name: &str) -> String {
    if coeff.is_one() {
        name.to_string()
    } else if (-coeff.clone()).is_one() {
        format!("-{name}")
    } else {
        format!("{}{}", format_rat(coeff), name)
    }
}

/// Renders a sorted list of (coefficient, name) terms as `a+2b-c`; `0` when empty.
pub fn format_combination<'a, I>(terms: I) -> String
where
    I: IntoIterator<Item = (&'a Rat, &'a str)>,
{
    let mut out = String::new();
    for (coeff, name) in terms {
        let t = format_term(coeff, name);
        if !out.is_empty() && !t.starts_with('-') {
            out.push('+');
        }
        out.push_str(&t);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
