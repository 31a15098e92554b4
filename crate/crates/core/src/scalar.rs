//! Scalar abstraction for host-graph lengths and metrics.
//!
//! Host metrics (weighted trees, outerplanar hosts) are generic over the
//! length type so the same shortest-path and distortion code serves exact
//! rationals, integers and floats. Anything that feeds a threshold decision
//! uses [`Rational`].

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, ToPrimitive};

use crate::error::ParseRationalError;

/// Exact rational number in lowest terms with a positive denominator.
pub type Rational = Ratio<i64>;

/// Length type of a host graph.
pub trait Scalar:
    Num + PartialOrd + Clone + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    fn from_hops(hops: u32) -> Self {
        Self::from_u32(hops).expect("hop count representable in scalar type")
    }

    /// Larger of two values; `a` wins on ties or incomparable inputs.
    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

impl<T> Scalar for T where
    T: Num + PartialOrd + Clone + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(numer, denom)
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(value)
}

/// Parses `"p/q"` or an integer. Decimals are rejected so that values at
/// strict thresholds are never rounded.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let text = text.trim();
    if text.contains('.') || text.contains('e') || text.contains('E') {
        return Err(ParseRationalError::Decimal(text.to_string()));
    }
    let (numer, denom) = match text.split_once('/') {
        Some((p, q)) => (parse_i64(p, text)?, parse_i64(q, text)?),
        None => (parse_i64(text, text)?, 1),
    };
    if denom == 0 {
        return Err(ParseRationalError::ZeroDenominator(text.to_string()));
    }
    Ok(Rational::new(numer, denom))
}

/// Parses `"p/q"`, an integer, or a finite decimal such as `"1.25"`; decimals
/// are converted exactly (`1.25` becomes `5/4`).
pub fn parse_rational_or_decimal(text: &str) -> Result<Rational, ParseRationalError> {
    let trimmed = text.trim();
    let Some((whole, frac)) = trimmed.split_once('.') else {
        return parse_rational(trimmed);
    };
    let bad = || ParseRationalError::Malformed(trimmed.to_string());
    if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 15 {
        return Err(bad());
    }
    let negative = whole.starts_with('-');
    let whole_digits = whole.trim_start_matches(['-', '+']);
    if !whole_digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let scale = 10i64.pow(frac.len() as u32);
    let whole_value = if whole_digits.is_empty() {
        0
    } else {
        i64::from_str(whole_digits).map_err(|_| bad())?
    };
    let frac_value = i64::from_str(frac).map_err(|_| bad())?;
    let magnitude = whole_value
        .checked_mul(scale)
        .and_then(|v| v.checked_add(frac_value))
        .ok_or_else(bad)?;
    let numer = if negative { -magnitude } else { magnitude };
    Ok(Rational::new(numer, scale))
}

fn parse_i64(part: &str, whole: &str) -> Result<i64, ParseRationalError> {
    i64::from_str(part.trim()).map_err(|_| ParseRationalError::Malformed(whole.to_string()))
}

/// Renders a rational as `p/q`, or `p` when integral.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Decimal rendering with six significant digits, for human-facing output only.
pub fn format_decimal(value: &Rational) -> String {
    let x = value.to_f64().unwrap_or(f64::NAN);
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}
