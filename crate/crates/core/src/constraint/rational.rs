//! Arbitrary-precision rationals and the textual forms used across the crate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// Exact rational, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `12`, `-3`, `3/10` or `0.25` exactly.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    if body.is_empty() {
        return None;
    }
    let value = if let Some((n, d)) = body.split_once('/') {
        let n: BigInt = parse_digits(n)?;
        let d: BigInt = parse_digits(d)?;
        if d.is_zero() {
            return None;
        }
        Rational::new(n, d)
    } else if let Some((whole, frac)) = body.split_once('.') {
        if whole.is_empty() && frac.is_empty() {
            return None;
        }
        let whole = if whole.is_empty() {
            BigInt::zero()
        } else {
            parse_digits(whole)?
        };
        let frac_val = if frac.is_empty() {
            BigInt::zero()
        } else {
            parse_digits(frac)?
        };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        Rational::new(whole * &scale + frac_val, scale)
    } else {
        Rational::from_integer(parse_digits(body)?)
    };
    Some(if neg { -value } else { value })
}

fn parse_digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Renders as `n` or `n/d`.
pub fn render(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
