//! Exact decimal rendering for rationals and scaled integers.

use alloc::string::String;
use core::fmt::Write;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn pow10(exp: usize) -> BigInt {
    num_traits::pow(BigInt::from(10u32), exp)
}

/// Largest integer not exceeding `x`.
pub fn floor(x: &BigRational) -> BigInt {
    x.numer().div_floor(x.denom())
}

/// Fractional part `x - floor(x)`, always in `[0, 1)`.
pub fn fract(x: &BigRational) -> BigRational {
    x - BigRational::from_integer(floor(x))
}

/// Distance from `x` to the nearest integer, in `[0, 1/2]`.
pub fn dist_nearest_int(x: &BigRational) -> BigRational {
    let f = fract(x);
    let g = BigRational::one() - &f;
    if f <= g {
        f
    } else {
        g
    }
}

/// `num / den` rounded to an integer, ties to even. `den` must be positive.
pub fn round_half_even(num: &BigInt, den: &BigInt) -> BigInt {
    debug_assert!(den.is_positive());
    let (q, r) = num.div_mod_floor(den);
    let twice = &r * 2u32;
    match twice.cmp(den) {
        core::cmp::Ordering::Less => q,
        core::cmp::Ordering::Greater => q + 1u32,
        core::cmp::Ordering::Equal => {
            if q.is_even() {
                q
            } else {
                q + 1u32
            }
        }
    }
}

/// Renders `scaled / 10^digits` as a plain decimal string.
pub fn format_scaled(scaled: &BigInt, digits: usize) -> String {
    let mut out = String::new();
    if scaled.sign() == Sign::Minus {
        out.push('-');
    }
    let mag = scaled.abs();
    let unit = pow10(digits);
    let (int_part, frac_part) = mag.div_rem(&unit);
    let _ = write!(out, "{}", int_part);
    if digits > 0 {
        let frac = frac_part.to_str_radix(10);
        out.push('.');
        for _ in frac.len()..digits {
            out.push('0');
        }
        out.push_str(&frac);
    }
    out
}

/// `x` correctly rounded (half to even) to `digits` places after the point.
pub fn rational_to_decimal(x: &BigRational, digits: usize) -> String {
    let scaled = round_half_even(&(x.numer() * pow10(digits)), x.denom());
    format_scaled(&scaled, digits)
}

/// `x` truncated toward negative infinity to `digits` places.
pub fn rational_floor_decimal(x: &BigRational, digits: usize) -> String {
    let scaled = (x.numer() * pow10(digits)).div_floor(x.denom());
    format_scaled(&scaled, digits)
}

/// Parses `"p/q"`, an integer, or a finite decimal such as `"-0.125"` as an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    if let Some((int_part, frac_part)) = text.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        if !int_digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let mut joined = String::from(int_digits);
        joined.push_str(frac_part);
        let mut numer: BigInt = joined.parse().ok()?;
        if negative {
            numer = -numer;
        }
        return Some(BigRational::new(numer, pow10(frac_part.len())));
    }
    let n: BigInt = text.parse().ok()?;
    Some(BigRational::from_integer(n))
}
