//! Rational helpers: construction shorthands, parsing and decimal rendering.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// `n / d` as a rational. Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, an integer, or a decimal such as `-0.125` or `2.5e-3`.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = parse_integer(p.trim()).ok_or_else(|| ParseRationalError::Malformed(s.into()))?;
        let q = parse_integer(q.trim()).ok_or_else(|| ParseRationalError::Malformed(s.into()))?;
        if q.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(s.into()));
        }
        return Ok(Rational::new(p, q));
    }
    parse_decimal(s).ok_or_else(|| ParseRationalError::Malformed(s.into()))
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (negative, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(k) => (&body[..k], parse_integer(&body[k + 1..])?.to_i64()?),
        None => (body, 0),
    };
    let (whole, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("0{whole}{frac}").parse().ok()?;
    let shift = exponent - frac.len() as i64;
    let ten = BigInt::from(10);
    let scale = num_traits::pow(ten, shift.unsigned_abs() as usize);
    let value = if shift >= 0 {
        Rational::from_integer(digits * scale)
    } else {
        Rational::new(digits, scale)
    };
    Some(if negative { -value } else { value })
}

/// Decimal rendering rounded half away from zero to `places` fractional digits.
pub fn to_decimal(r: &Rational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), places);
    let scaled = r.abs() * Rational::from_integer(scale.clone());
    let (q, rem) = scaled.numer().div_rem(scaled.denom());
    let rounded = if rem * BigInt::from(2) >= *scaled.denom() { q + 1 } else { q };
    let (whole, frac) = rounded.div_rem(&scale);
    let sign = if r.is_negative() && !rounded_is_zero(&whole, &frac) { "-" } else { "" };
    if places == 0 {
        return format!("{sign}{whole}");
    }
    format!("{sign}{whole}.{:0>width$}", frac.to_string(), width = places)
}

fn rounded_is_zero(whole: &BigInt, frac: &BigInt) -> bool {
    whole.is_zero() && frac.is_zero()
}

/// Exact value of a finite float.
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Smallest multiple of `1/denominator` that is not below `x`.
pub fn ceil_to_grid(x: f64, denominator: i64) -> Rational {
    let exact = from_f64(x).expect("finite value");
    let d = Rational::from_integer(BigInt::from(denominator));
    (exact * &d).ceil() / d
}

pub fn sum<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    accumulate(values.into_iter().map(|v| (v.numer().clone(), v.denom().clone())))
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    accumulate(a.iter().zip(b).map(|(x, y)| (x.numer() * y.numer(), x.denom() * y.denom())))
}

/// Sums fractions `(numerator, positive denominator)` without reducing
/// each partial sum.
fn accumulate(terms: impl Iterator<Item = (BigInt, BigInt)>) -> Rational {
    const REDUCE_BITS: u64 = 1 << 14;
    let mut num = BigInt::zero();
    let mut den = BigInt::from(1);
    for (n, d) in terms {
        if n.is_zero() {
            continue;
        }
        if d == den {
            num += n;
        } else {
            num = num * &d + n * &den;
            den *= d;
            if den.bits() > REDUCE_BITS {
                let reduced = Rational::new(num, den);
                (num, den) = reduced.into();
            }
        }
    }
    Rational::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_literal_forms() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("0.1").unwrap(), rat(1, 10));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("2.5e-3").unwrap(), rat(1, 400));
        assert_eq!(parse_rational("1E2").unwrap(), int(100));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn decimal_rendering_rounds() {
        assert_eq!(to_decimal(&rat(2, 3), 12), "0.666666666667");
        assert_eq!(to_decimal(&int(3), 3), "3.000");
        assert_eq!(to_decimal(&rat(-1, 8), 2), "-0.13");
        assert_eq!(to_decimal(&rat(-1, 1000), 2), "0.00");
    }

    #[test]
    fn grid_ceiling() {
        assert_eq!(ceil_to_grid(0.25, 4), rat(1, 4));
        assert_eq!(ceil_to_grid(0.26, 4), rat(1, 2));
    }
}
