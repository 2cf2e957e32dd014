//! Arbitrary-precision reduced fractions.
//!
//! [`ExactRational`] is a thin newtype over [`BigRational`], which already keeps
//! every value in lowest terms with a positive denominator. The wrapper adds
//! the parsing and decimal formatting the rest of the crate needs, and keeps
//! the big-number crate out of the public signatures of downstream modules.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest decimal exponent accepted by the parser.
const MAX_DECIMAL_EXPONENT: i64 = 4096;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ExactRational(BigRational);

impl ExactRational {
    /// Builds `numer / denom` in lowest terms.
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self(BigRational::new(numer.into(), denom)))
    }

    /// Shorthand for small literals; panics on a zero denominator.
    pub fn ratio(numer: i64, denom: i64) -> Self {
        Self::new(numer, denom).expect("literal ratio with zero denominator")
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        Self(BigRational::from_integer(value.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn half() -> Self {
        Self::ratio(1, 2)
    }

    /// Exact value of a finite `f64` (every finite double is a dyadic rational).
    pub fn from_f64(value: f64) -> Option<Self> {
        BigRational::from_float(value).map(Self)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Self(self.0.abs())
    }

    pub fn pow(&self, exp: u32) -> Self {
        Self(num_traits::pow(self.0.clone(), exp as usize))
    }

    /// `1 - self`.
    pub fn complement(&self) -> Self {
        Self(BigRational::one() - &self.0)
    }

    pub fn max_of(a: &Self, b: &Self) -> Self {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn min_of(a: &Self, b: &Self) -> Self {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    /// Nearest `f64`; saturates to ±inf only when the value itself is out of range.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }

    /// Plain decimal notation rounded (half away from zero) to `digits`
    /// significant digits, trailing zeros removed. No exponent notation, no
    /// locale: the output only ever contains `-`, digits and `.`.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.is_zero() {
            return "0".to_string();
        }
        let negative = self.is_negative();
        let magnitude = self.0.abs();
        let ten = BigInt::from(10);

        // exponent e with 10^e <= |v| < 10^(e+1)
        let mut exponent = decimal_exponent(&magnitude);

        let scale = digits as i64 - 1 - exponent;
        let mut scaled = round_half_away(&scaled_by_pow10(&magnitude, scale));
        if scaled == num_traits::pow(ten.clone(), digits) {
            // rounding carried into a new leading digit
            exponent += 1;
            scaled /= &ten;
        }
        let scale = digits as i64 - 1 - exponent;

        let mut text = scaled.to_str_radix(10);
        if scale > 0 {
            let scale = scale as usize;
            if text.len() <= scale {
                text = format!("{}{}", "0".repeat(scale - text.len() + 1), text);
            }
            let split = text.len() - scale;
            text = format!("{}.{}", &text[..split], &text[split..]);
            let trimmed = text.trim_end_matches('0').trim_end_matches('.');
            text = trimmed.to_string();
        } else if scale < 0 {
            text.push_str(&"0".repeat((-scale) as usize));
        }
        if negative {
            format!("-{text}")
        } else {
            text
        }
    }
}

fn scaled_by_pow10(value: &BigRational, power: i64) -> BigRational {
    let factor = BigRational::from_integer(num_traits::pow(
        BigInt::from(10),
        power.unsigned_abs() as usize,
    ));
    if power >= 0 {
        value * factor
    } else {
        value / factor
    }
}

fn round_half_away(value: &BigRational) -> BigInt {
    // value >= 0 here
    let (quot, rem) = value.numer().div_rem(value.denom());
    let twice_rem: BigInt = rem * 2;
    if twice_rem >= *value.denom() {
        quot + 1
    } else {
        quot
    }
}

fn decimal_exponent(magnitude: &BigRational) -> i64 {
    // Start from the digit-count estimate, then correct by at most a couple of steps.
    let num_digits = magnitude.numer().to_str_radix(10).len() as i64;
    let den_digits = magnitude.denom().to_str_radix(10).len() as i64;
    let mut e = num_digits - den_digits;
    loop {
        let lower = scaled_by_pow10(&BigRational::one(), e);
        if lower > *magnitude {
            e -= 1;
            continue;
        }
        let upper = scaled_by_pow10(&BigRational::one(), e + 1);
        if upper <= *magnitude {
            e += 1;
            continue;
        }
        return e;
    }
}

impl fmt::Display for ExactRational {
    /// `p/q`, or just `p` for integers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    /// Accepts `p/q`, integers, and decimals with an optional exponent
    /// (`0.45`, `-1.5e-3`). Decimals are read exactly, so `"0.45"` is `9/20`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a number: {s:?}"));
        if let Some((p, q)) = s.split_once('/') {
            let numer = p.trim().parse::<BigInt>().map_err(|_| bad())?;
            let denom = q.trim().parse::<BigInt>().map_err(|_| bad())?;
            return Self::new(numer, denom);
        }

        let (mantissa, exponent) = match s.find(['e', 'E']) {
            Some(pos) => {
                let exp = s[pos + 1..].parse::<i64>().map_err(|_| bad())?;
                if exp.abs() > MAX_DECIMAL_EXPONENT {
                    return Err(bad());
                }
                (&s[..pos], exp)
            }
            None => (s, 0),
        };
        let (negative, unsigned) = match mantissa.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int_part, frac_part) = unsigned.split_once('.').unwrap_or((unsigned, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part
            .bytes()
            .chain(frac_part.bytes())
            .all(|b| b.is_ascii_digit())
        {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        let mut numer = BigInt::parse_bytes(digits.as_bytes(), 10).ok_or_else(bad)?;
        if negative {
            numer = -numer;
        }
        let value = BigRational::from_integer(numer);
        let value = scaled_by_pow10(&value, exponent - frac_part.len() as i64);
        Ok(Self(value))
    }
}

impl From<BigInt> for ExactRational {
    fn from(value: BigInt) -> Self {
        Self::from_integer(value)
    }
}

impl From<i64> for ExactRational {
    fn from(value: i64) -> Self {
        Self::from_integer(value)
    }
}

impl From<BigRational> for ExactRational {
    fn from(value: BigRational) -> Self {
        Self(value)
    }
}

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl Neg for &ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-&self.0)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&ExactRational> for &ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &ExactRational) -> ExactRational {
                ExactRational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &ExactRational) -> ExactRational {
                ExactRational(self.0.$method(&rhs.0))
            }
        }
        impl $trait<ExactRational> for &ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational((&self.0).$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl std::iter::Sum for ExactRational {
    fn sum<I: Iterator<Item = ExactRational>>(iter: I) -> Self {
        iter.fold(ExactRational::zero(), |acc, x| acc + x)
    }
}

impl PartialEq<i64> for ExactRational {
    fn eq(&self, other: &i64) -> bool {
        self.0.is_integer() && *self.0.numer() == BigInt::from(*other)
    }
}

impl PartialOrd<i64> for ExactRational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.0.cmp(&BigRational::from_integer(BigInt::from(*other))))
    }
}

/// Sign of a rational as -1, 0 or 1.
pub fn signum(value: &ExactRational) -> i8 {
    match value.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn construction_reduces() {
        let r = ExactRational::new(6, -4).unwrap();
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert!(matches!(
            ExactRational::new(1, 0),
            Err(Error::ZeroDenominator)
        ));
    }

    #[test]
    fn parses_rational_and_decimal_forms() {
        assert_eq!(
            "9/20".parse::<ExactRational>().unwrap(),
            ExactRational::ratio(9, 20)
        );
        assert_eq!(
            "0.45".parse::<ExactRational>().unwrap(),
            ExactRational::ratio(9, 20)
        );
        assert_eq!("1".parse::<ExactRational>().unwrap(), ExactRational::one());
        assert_eq!(
            "1.0".parse::<ExactRational>().unwrap(),
            ExactRational::one()
        );
        assert_eq!(
            ".5".parse::<ExactRational>().unwrap(),
            ExactRational::half()
        );
        assert_eq!(
            "-2.5e-1".parse::<ExactRational>().unwrap(),
            ExactRational::ratio(-1, 4)
        );
        assert_eq!(
            "3E2".parse::<ExactRational>().unwrap(),
            ExactRational::from(300)
        );
        for junk in [
            "",
            ".",
            "abc",
            "1/0",
            "0.4.5",
            "1e",
            "--1",
            "1/2/3",
            "1e999999999",
        ] {
            assert!(junk.parse::<ExactRational>().is_err(), "{junk:?} parsed");
        }
    }

    #[test]
    fn decimal_formatting() {
        let r = ExactRational::ratio;
        assert_eq!(r(9, 20).to_decimal_string(10), "0.45");
        assert_eq!(r(1, 3).to_decimal_string(4), "0.3333");
        assert_eq!(r(2, 3).to_decimal_string(4), "0.6667");
        assert_eq!(r(-2, 3).to_decimal_string(3), "-0.667");
        assert_eq!(r(9999, 10000).to_decimal_string(3), "1");
        assert_eq!(r(12345, 1).to_decimal_string(2), "12000");
        assert_eq!(r(1, 800).to_decimal_string(2), "0.0013");
        assert_eq!(r(1, 800).to_decimal_string(3), "0.00125");
        assert_eq!(r(0, 1).to_decimal_string(5), "0");
        assert_eq!(r(1, 2).to_decimal_string(1), "0.5");
        assert_eq!(r(5, 1).to_decimal_string(1), "5");
    }

    #[test]
    fn exact_float_round_trip() {
        let x = ExactRational::from_f64(0.1).unwrap();
        assert_ne!(x, ExactRational::ratio(1, 10));
        assert_eq!(x.to_f64(), 0.1);
        assert!(ExactRational::from_f64(f64::NAN).is_none());
    }

    proptest! {
        #[test]
        fn arithmetic_stays_reduced(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let x = ExactRational::ratio(a, b);
            let y = ExactRational::ratio(c, d);
            for v in [&x + &y, &x - &y, &x * &y] {
                prop_assert!(v.denom() > &BigInt::zero());
                prop_assert_eq!(v.numer().gcd(v.denom()), BigInt::one());
            }
        }

        #[test]
        fn display_parse_round_trip(a in -10_000i64..10_000, b in 1i64..10_000) {
            let x = ExactRational::ratio(a, b);
            prop_assert_eq!(x.to_string().parse::<ExactRational>().unwrap(), x);
        }
    }
}
