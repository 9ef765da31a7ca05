//! Scalar types shared by the compiler, the Ising conversion and the oracles.
//!
//! Compilation runs on exact rationals; floating point only enters at the
//! simulator boundary or when a model is supplied as floats.

use core::fmt::Debug;
use core::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedDiv, CheckedMul, Float, One, Signed, ToPrimitive, Zero};

/// Exact rational used throughout compilation.
pub type Rational = Ratio<i128>;

/// Relative tolerance used to group floating-point energies into levels.
pub const FLOAT_LEVEL_TOLERANCE: f64 = 1e-9;

/// Arithmetic needed to evaluate QUBO and Ising energies.
///
/// Implemented for [`Rational`] (exact, levels compared with `==`) and `f64`
/// (levels compared with a relative tolerance of [`FLOAT_LEVEL_TOLERANCE`]).
pub trait Energy:
    Copy
    + Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    const EXACT: bool;

    fn half(self) -> Self;
    fn magnitude(self) -> Self;
    fn to_f64(self) -> f64;
    fn from_i64(v: i64) -> Self;

    /// Whether `a` and `b` fall into the same level, `scale` being the
    /// largest energy magnitude of the problem.
    fn same_level(a: Self, b: Self, scale: Self) -> bool;
}

impl Energy for Rational {
    const EXACT: bool = true;

    fn half(self) -> Self {
        self / Rational::from_integer(2)
    }
    fn magnitude(self) -> Self {
        self.abs()
    }
    fn to_f64(self) -> f64 {
        rational_to_f64(self)
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(v as i128)
    }
    fn same_level(a: Self, b: Self, _scale: Self) -> bool {
        a == b
    }
}

impl Energy for f64 {
    const EXACT: bool = false;

    fn half(self) -> Self {
        0.5 * self
    }
    fn magnitude(self) -> Self {
        Float::abs(self)
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn same_level(a: Self, b: Self, scale: Self) -> bool {
        Float::abs(a - b) <= FLOAT_LEVEL_TOLERANCE * Float::max(1.0, Float::abs(scale))
    }
}

pub fn rational_to_f64(r: Rational) -> f64 {
    let (n, d) = (*r.numer(), *r.denom());
    match (n.to_f64(), d.to_f64()) {
        (Some(n), Some(d)) => n / d,
        _ => f64::NAN,
    }
}

/// Exact conversion of a finite `f64` into a [`Rational`], if it fits.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    if x == 0.0 {
        return Some(Rational::zero());
    }
    let (mantissa, exponent, sign) = Float::integer_decode(x);
    let mut numer = mantissa as i128 * sign as i128;
    if exponent >= 0 {
        for _ in 0..exponent {
            numer = numer.checked_mul(2)?;
        }
        Some(Rational::from_integer(numer))
    } else {
        let shift = (-exponent) as u32;
        // Strip common factors of two before building the denominator.
        let tz = numer.trailing_zeros().min(shift);
        numer >>= tz;
        let denom = 1i128.checked_shl(shift - tz).filter(|d| *d > 0)?;
        Some(Rational::new(numer, denom))
    }
}

/// Parses `"3"`, `"-0.25"`, `"1e-3"` or `"2/3"` exactly.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d.is_zero() {
            return None;
        }
        return Some(n / d);
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let mut numer: i128 = 0;
    for c in int_part.chars().chain(frac_part.chars()) {
        let digit = c.to_digit(10)? as i128;
        numer = numer.checked_mul(10)?.checked_add(digit)?;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(10);
    let mut value = Rational::from_integer(numer);
    for _ in 0..scale.unsigned_abs() {
        value = if scale > 0 {
            value.checked_mul(&ten)?
        } else {
            value.checked_div(&ten)?
        };
    }
    Some(if negative { -value } else { value })
}

/// Number of bits needed to store every integer in `[0, range]`, never
/// less than one.
pub fn bit_width(range: u128) -> u32 {
    (128 - range.leading_zeros()).max(1)
}

/// Least common multiple of the denominators in `values`.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> i128 {
    values
        .into_iter()
        .fold(1i128, |acc, v| acc.lcm(v.denom()))
}

/// `true` when the rational has a finite decimal expansion.
pub fn is_finite_decimal(r: &Rational) -> bool {
    let mut d = *r.denom();
    while d % 2 == 0 {
        d /= 2;
    }
    while d % 5 == 0 {
        d /= 5;
    }
    d == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn parses_decimals_and_fractions() {
        assert_eq!(parse_rational("3"), Some(r(3, 1)));
        assert_eq!(parse_rational("-0.25"), Some(r(-1, 4)));
        assert_eq!(parse_rational("1e-3"), Some(r(1, 1000)));
        assert_eq!(parse_rational("2.5E2"), Some(r(250, 1)));
        assert_eq!(parse_rational("2/3"), Some(r(2, 3)));
        assert_eq!(parse_rational(".5"), Some(r(1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational(""), None);
    }

    #[test]
    fn float_conversion_is_exact() {
        assert_eq!(rational_from_f64(2.75), Some(r(11, 4)));
        assert_eq!(rational_from_f64(-1.25), Some(r(-5, 4)));
        assert_eq!(rational_from_f64(0.0), Some(r(0, 1)));
        assert_eq!(rational_from_f64(f64::NAN), None);
        let tenth = rational_from_f64(0.1).unwrap();
        assert_eq!(rational_to_f64(tenth), 0.1);
    }

    #[test]
    fn widths() {
        assert_eq!(bit_width(0), 1);
        assert_eq!(bit_width(1), 1);
        assert_eq!(bit_width(2), 2);
        assert_eq!(bit_width(3), 2);
        assert_eq!(bit_width(4), 3);
    }

    #[test]
    fn float_levels_use_relative_tolerance() {
        assert!(f64::same_level(100.0, 100.0 + 1e-8, 100.0));
        assert!(!f64::same_level(100.0, 100.0 + 1e-6, 100.0));
        assert!(!Rational::same_level(r(1, 3), r(1, 3) + r(1, 1000000000000), r(1, 1)));
    }
}
