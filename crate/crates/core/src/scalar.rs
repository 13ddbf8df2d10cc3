//! Length and coordinate arithmetic.
//!
//! Interval exchanges are generic over [`Scalar`], implemented for exact
//! rationals ([`Rational`]) and for `f64`. The mode is fixed by the type, so
//! exact and floating values can never be mixed inside one map.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact arbitrary precision rational.
pub type Rational = BigRational;

/// Relative tolerance used by float mode for tie detection and comparisons.
pub const FLOAT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

pub trait Scalar:
    Num + Signed + ToPrimitive + FromPrimitive + Clone + PartialOrd + Debug + Display + Send + Sync + 'static
{
    const MODE: Mode;

    /// True when `a` and `b` should be treated as equal at magnitude `scale`.
    fn ties(a: &Self, b: &Self, scale: &Self) -> bool;

    /// Parses a coordinate: `p/q`, an integer or a decimal. Exact mode reads
    /// decimals exactly.
    fn parse_value(s: &str) -> Result<Self>;

    /// Sum of a sequence. Float mode uses compensated summation.
    fn sum_all<'a, I>(items: I) -> Self
    where
        I: IntoIterator<Item = &'a Self>,
        Self: 'a,
    {
        items.into_iter().fold(Self::zero(), |acc, v| acc + v.clone())
    }

    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn is_exact() -> bool {
        Self::MODE == Mode::Exact
    }
}

impl Scalar for Rational {
    const MODE: Mode = Mode::Exact;

    fn ties(a: &Self, b: &Self, _scale: &Self) -> bool {
        a == b
    }

    fn parse_value(s: &str) -> Result<Self> {
        if s.contains('/') {
            parse_rational(s)
        } else {
            parse_decimal_exact(s)
        }
    }
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn ties(a: &Self, b: &Self, scale: &Self) -> bool {
        (a - b).abs() <= FLOAT_TOLERANCE * scale.abs()
    }

    fn parse_value(s: &str) -> Result<Self> {
        if s.contains('/') {
            parse_rational(s).map(|r| r.as_f64())
        } else {
            parse_float(s)
        }
    }

    fn sum_all<'a, I>(items: I) -> Self
    where
        I: IntoIterator<Item = &'a Self>,
    {
        // Neumaier summation
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for &v in items {
            let t = sum + v;
            if sum.abs() >= v.abs() {
                comp += (sum - t) + v;
            } else {
                comp += (v - t) + sum;
            }
            sum = t;
        }
        sum + comp
    }
}

/// `p/q` as an exact rational.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `p/q` or an integer into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| Error::Parse(format!("bad rational '{s}'")))?;
    let den = BigInt::from_str(den).map_err(|_| Error::Parse(format!("bad rational '{s}'")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in '{s}'")));
    }
    Ok(Rational::new(num, den))
}

/// Parses a decimal such as `-1.25e-3` into the exact rational it denotes.
pub fn parse_decimal_exact(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::Parse(format!("bad decimal '{s}'"));
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let (sign, int) = match int.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, int.strip_prefix('+').unwrap_or(int)),
    };
    if (int.is_empty() && frac.is_empty()) || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = BigInt::from_str(&format!("0{int}{frac}")).map_err(|_| bad())?;
    let scale = exp - frac.len() as i64;
    let ten = BigInt::from(10);
    let pow = num_traits::pow(ten, scale.unsigned_abs() as usize);
    let value = if scale >= 0 { Rational::from_integer(digits * pow) } else { Rational::new(digits, pow) };
    Ok(if sign < 0 { -value } else { value })
}

/// Parses a decimal float.
pub fn parse_float(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("bad decimal '{s}'")))
}

/// Either an exact or a floating list of lengths, as entered by a user.
#[derive(Debug, Clone, PartialEq)]
pub enum LengthInput {
    Exact(Vec<Rational>),
    Float(Vec<f64>),
}

/// Parses a comma separated length list. Entries containing `/` (or plain
/// integers) are exact, entries with a decimal point or exponent are floats,
/// and mixing the two is rejected.
pub fn parse_lengths(s: &str) -> Result<LengthInput> {
    let parts: Vec<&str> = s.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
    if parts.is_empty() {
        return Err(Error::Parse("empty length list".into()));
    }
    let is_float = |p: &str| p.contains('.') || p.contains('e') || p.contains('E');
    let floats = parts.iter().filter(|p| is_float(p)).count();
    if floats == 0 {
        parts.iter().map(|p| parse_rational(p)).collect::<Result<_>>().map(LengthInput::Exact)
    } else if floats == parts.len() {
        if parts.iter().any(|p| p.contains('/')) {
            return Err(Error::Parse("cannot mix p/q and decimal lengths".into()));
        }
        parts.iter().map(|p| parse_float(p)).collect::<Result<_>>().map(LengthInput::Float)
    } else {
        Err(Error::Parse("cannot mix p/q and decimal lengths".into()))
    }
}

/// Exact rational rendered as `p/q` (or `p` when integral).
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Converts a float into the closest exact dyadic rational.
pub fn rational_from_f64(x: f64) -> Rational {
    Rational::from_f64(x).expect("finite float")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_modes() {
        assert_eq!(
            parse_lengths("7/10, 3/10").unwrap(),
            LengthInput::Exact(vec![ratio(7, 10), ratio(3, 10)])
        );
        assert_eq!(parse_lengths("0.7,0.3").unwrap(), LengthInput::Float(vec![0.7, 0.3]));
        assert!(parse_lengths("7/10,0.3").is_err());
        assert_eq!(parse_decimal_exact("0.5").unwrap(), ratio(1, 2));
        assert_eq!(parse_decimal_exact("-1.25e-1").unwrap(), ratio(-1, 8));
        assert_eq!(parse_decimal_exact("3").unwrap(), ratio(3, 1));
        assert!(parse_decimal_exact("1.2.3").is_err());
        assert!(parse_decimal_exact(".").is_err());
        assert_eq!(<Rational as Scalar>::parse_value("7/10").unwrap(), ratio(7, 10));
        assert_eq!(<f64 as Scalar>::parse_value("1/4").unwrap(), 0.25);
        assert!(parse_lengths("1/0").is_err());
        assert!(parse_lengths("").is_err());
    }

    #[test]
    fn compensated_sum() {
        let v = vec![1e16, 1.0, -1e16, 1.0];
        assert_eq!(f64::sum_all(&v), 2.0);
    }

    #[test]
    fn float_ties_are_relative() {
        assert!(f64::ties(&0.1, &(0.1 + 1e-14), &1.0));
        assert!(!f64::ties(&0.1, &0.1000001, &1.0));
        assert!(Rational::ties(&ratio(1, 3), &ratio(2, 6), &ratio(1, 1)));
    }
}
