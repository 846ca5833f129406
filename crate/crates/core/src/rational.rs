//! Exact rational helpers on top of `num_rational::BigRational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always stored in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn half() -> Rational {
    rat(1, 2)
}

/// `x/2`, reduced without a gcd: only a factor 2 can cancel.
pub fn halved(x: &Rational) -> Rational {
    if x.numer().is_even() {
        Rational::new_raw(x.numer() >> 1usize, x.denom().clone())
    } else {
        Rational::new_raw(x.numer().clone(), x.denom() << 1usize)
    }
}

/// `(x + d)/2` for an integer digit `d`, reduced without a gcd.
pub fn halved_shift(x: &Rational, d: u8) -> Rational {
    if d == 0 {
        return halved(x);
    }
    let n = x.numer() + x.denom() * BigInt::from(d);
    halved(&Rational::new_raw(n, x.denom().clone()))
}

/// `2^-e` as a rational.
pub fn dyadic(e: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << e)
}

/// `2^e` as a rational, `e` may be negative.
pub fn pow2(e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(BigInt::one() << (e as usize))
    } else {
        dyadic((-e) as u32)
    }
}

/// Parses `"3/4"`, `"-1/2"`, `"5"` or a finite decimal such as `"0.6"` exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("not a rational: {text:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let w: BigInt = match whole.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            s => s.parse().map_err(|_| bad())?,
        };
        let f: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mag = Rational::new(w * &scale + f, scale);
        return Ok(if negative { -mag } else { mag });
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Canonical textual form: `"p/q"`, or `"p"` for integers.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Extremely large numerator/denominator pairs: scale down by bit length.
        let shift = x.denom().bits().max(x.numer().abs().bits()).saturating_sub(1000);
        let n = (x.numer() >> shift as usize).to_f64().unwrap_or(0.0);
        let d = (x.denom() >> shift as usize).to_f64().unwrap_or(1.0);
        n / d
    })
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &Rational) -> Rational {
    if !x.is_negative() && x.numer() < x.denom() {
        return x.clone();
    }
    x - x.floor()
}

/// True when the reduced denominator is a power of two (integers included).
pub fn is_binary_rational(x: &Rational) -> bool {
    let d = x.denom();
    d.is_positive() && (d & (d - BigInt::one())).is_zero()
}

/// Largest multiple of `2^-level` that is `<= x`.
pub fn floor_dyadic(x: &Rational, level: u32) -> Rational {
    let scale = BigInt::one() << level;
    let scaled = x * Rational::from_integer(scale.clone());
    Rational::new(scaled.floor().to_integer(), scale)
}

/// Smallest multiple of `2^-level` that is `>= x`.
pub fn ceil_dyadic(x: &Rational, level: u32) -> Rational {
    let scale = BigInt::one() << level;
    let scaled = x * Rational::from_integer(scale.clone());
    Rational::new(scaled.ceil().to_integer(), scale)
}

/// Smallest `e >= 0` with `2^-e <= x`, for `0 < x`.
pub fn dyadic_exponent_below(x: &Rational) -> u32 {
    let mut e = 0u32;
    let mut p = Rational::one();
    while &p > x {
        e += 1;
        p /= int(2);
    }
    e
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Serde adapter writing rationals as exact `"p/q"` strings.
pub mod as_string {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("1/3").unwrap(), rat(1, 3));
        assert_eq!(parse_rational(" -2/4 ").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("0.6").unwrap(), rat(3, 5));
        assert_eq!(parse_rational("-.25").unwrap(), rat(-1, 4));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn format_round_trips() {
        for s in ["1/3", "-5/8", "0", "12"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
    }

    #[test]
    fn dyadic_helpers() {
        assert!(is_binary_rational(&rat(3, 8)));
        assert!(is_binary_rational(&int(1)));
        assert!(!is_binary_rational(&rat(1, 3)));
        assert_eq!(floor_dyadic(&rat(1, 6), 7), rat(21, 128));
        assert_eq!(ceil_dyadic(&rat(1, 6), 7), rat(22, 128));
        assert_eq!(dyadic_exponent_below(&rat(1, 12)), 4);
        assert_eq!(dyadic_exponent_below(&rat(1, 16)), 4);
        assert_eq!(pow2(-3), rat(1, 8));
        assert_eq!(frac(&rat(-1, 4)), rat(3, 4));
    }
}
