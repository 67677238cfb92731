//! Exact rational scalars.
//!
//! All probabilities and values in this crate are [`Rational`]s: arbitrary
//! precision fractions kept in lowest terms with a positive denominator.
//! This module adds the string forms used on the wire (`"p/q"`, integers,
//! exact decimals) and a fixed-precision decimal rendering for display.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact fraction; always normalized by `num_rational`.
pub type Rational = num_rational::BigRational;

/// Builds `num / den` from machine integers. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds an integer-valued rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exact conversion of a finite binary float. Every finite `f64` is a dyadic
/// rational, so no rounding takes place.
pub fn from_f64(x: f64) -> Result<Rational> {
    if !x.is_finite() {
        return Err(Error::NonFinite(x));
    }
    Rational::from_float(x).ok_or(Error::NonFinite(x))
}

/// Nearest `f64`; used only for display and for the numeric demo.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Parses `"p/q"`, an integer, or a decimal (optionally with an exponent,
/// e.g. `"-1.25e-3"`). Decimals are read as exact decimal fractions.
pub fn parse_rational(input: &str) -> Result<Rational> {
    let s = input.trim().replace('\u{2212}', "-");
    let bad = || Error::Parse(format!("not a rational number: {input:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let num: BigInt = n.trim().parse().map_err(|_| bad())?;
        let den: BigInt = d.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {input:?}")));
        }
        return Ok(Rational::new(num, den));
    }
    parse_decimal(&s).ok_or_else(bad)
}

fn parse_decimal(s: &str) -> Option<Rational> {
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first()? {
        b'-' => (true, &mantissa[1..]),
        b'+' => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let joined = format!("{whole}{frac}");
    let mut num: BigInt = joined.parse().ok()?;
    if negative {
        num = -num;
    }
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, scale.unsigned_abs() as usize))
    };
    Some(value)
}

/// Canonical wire form: `"p/q"`, or just `"p"` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal rendering rounded (half away from zero) to `sig` significant
/// digits. Plain notation for moderate magnitudes, scientific otherwise.
pub fn to_decimal_string(r: &Rational, sig: usize) -> String {
    assert!(sig > 0, "need at least one significant digit");
    if r.is_zero() {
        return "0".to_string();
    }
    let negative = r.is_negative();
    let abs = r.abs();
    let ten = BigInt::from(10);

    // exponent e with 10^e <= |r| < 10^(e+1)
    let mut e = abs.numer().to_string().len() as i64 - abs.denom().to_string().len() as i64;
    let pow10 = |k: i64| -> Rational {
        if k >= 0 {
            Rational::from_integer(num_traits::pow(ten.clone(), k as usize))
        } else {
            Rational::new(One::one(), num_traits::pow(ten.clone(), (-k) as usize))
        }
    };
    while abs < pow10(e) {
        e -= 1;
    }
    while abs >= pow10(e + 1) {
        e += 1;
    }

    // digits = round(|r| * 10^(sig-1-e))
    let shift = sig as i64 - 1 - e;
    let scaled = &abs * pow10(shift);
    let (q, rem) = scaled.numer().div_rem(scaled.denom());
    let mut digits = q;
    if (rem * 2u32).cmp(scaled.denom()) != Ordering::Less {
        digits += 1u32;
    }
    let mut exp10 = -shift;
    if digits.to_string().len() > sig {
        digits /= 10u32;
        exp10 += 1;
        e += 1;
    }
    let mut text = digits.to_string();
    // drop trailing zeros from the significand
    while text.len() > 1 && text.ends_with('0') {
        text.pop();
        exp10 += 1;
    }

    let body = if (-7..16).contains(&e) {
        place_point(&text, exp10)
    } else {
        let mut mant = text.clone();
        if mant.len() > 1 {
            mant.insert(1, '.');
        }
        format!("{mant}e{e}")
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// Renders `digits * 10^exp10` in plain positional notation.
fn place_point(digits: &str, exp10: i64) -> String {
    if exp10 >= 0 {
        let mut s = digits.to_string();
        s.extend(std::iter::repeat_n('0', exp10 as usize));
        return s;
    }
    let point = digits.len() as i64 + exp10;
    if point > 0 {
        let (a, b) = digits.split_at(point as usize);
        format!("{a}.{b}")
    } else {
        let zeros = "0".repeat((-point) as usize);
        format!("0.{zeros}{digits}")
    }
}

/// Least common multiple of the denominators of `values`.
pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    let mut acc = BigInt::one();
    for r in values {
        let d = r.denom();
        // cheap skip for the common case of a repeated denominator
        if d.is_one() || d == &acc || (&acc % d).is_zero() {
            continue;
        }
        acc = acc.lcm(d);
    }
    acc
}
