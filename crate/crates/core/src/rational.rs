//! Exact rational helpers on top of `BigRational`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"a/b"`, an integer, or a decimal such as `"-0.75"` or `"1e-3"`.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(p) => {
            let e: i32 = s[p + 1..].parse().map_err(|_| bad())?;
            (&s[..p], e)
        }
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let mut num: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad())?
    };
    if neg {
        num = -num;
    }
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10u32);
    let r = if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(r)
}

/// `"num/den"` in lowest terms (integers keep the `/1`).
pub fn to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact value of a finite float.
pub fn from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::InvalidParameter(format!("non-finite value {x}")))
}

/// A rational within about 2^-bits relative error of `x`, with a power-of-two denominator.
pub fn approx_f64(x: f64, bits: u32) -> Result<Rational> {
    if !x.is_finite() {
        return Err(Error::InvalidParameter(format!("non-finite value {x}")));
    }
    if x == 0.0 {
        return Ok(Rational::zero());
    }
    let e = libm::floor(libm::log2(libm::fabs(x))) as i32;
    let shift = bits as i32 - e;
    let scaled = libm::round(libm::ldexp(x, shift));
    let num = from_f64(scaled)?.to_integer();
    Ok(if shift >= 0 {
        Rational::new(num, BigInt::one() << shift as usize)
    } else {
        Rational::from_integer(num << (-shift) as usize)
    })
}

/// Nearest integer, ties to even.
pub fn round_half_even(r: &Rational) -> BigInt {
    let fl = r.floor().to_integer();
    let frac = r - Rational::from_integer(fl.clone());
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    if frac < half {
        fl
    } else if frac > half {
        fl + 1
    } else if fl.is_even() {
        fl
    } else {
        fl + 1
    }
}

pub fn ceil_int(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Multiplies every value by the common denominator; returns the integers and the scale.
pub fn common_integers<'a>(values: impl IntoIterator<Item = &'a Rational> + Clone) -> (Vec<BigInt>, BigInt) {
    let d = lcm_of_denominators(values.clone());
    let ints = values
        .into_iter()
        .map(|v| v.numer() * (&d / v.denom()))
        .collect();
    (ints, d)
}

pub fn biguint_of(v: &BigInt) -> BigUint {
    v.magnitude().clone()
}

pub fn bigint_of(v: BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, v)
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

/// Largest integer `s` with `s*s < bound` (or -1 if bound <= 0).
pub fn isqrt_strict_below(bound: &Rational) -> BigInt {
    if !bound.is_positive() {
        return BigInt::from(-1);
    }
    let fl = bound.floor().to_integer();
    let mut s = fl.sqrt();
    let below = |s: &BigInt| Rational::from_integer(s * s) < *bound;
    while s.is_positive() && !below(&s) {
        s -= 1;
    }
    while below(&(&s + 1)) {
        s += 1;
    }
    if !below(&s) {
        s -= 1;
    }
    s
}

/// Square root of a nonnegative rational: exact when both parts are perfect
/// squares, otherwise rounded down to a multiple of 2^-bits. The flag says which.
pub fn sqrt_approx(q: &Rational, bits: u32) -> (Rational, bool) {
    if !q.is_positive() {
        return (Rational::zero(), true);
    }
    let (n, d) = (q.numer().sqrt(), q.denom().sqrt());
    if &n * &n == *q.numer() && &d * &d == *q.denom() {
        return (Rational::new(n, d), true);
    }
    let scaled = (q * Rational::from_integer(BigInt::one() << (2 * bits) as usize)).floor().to_integer();
    (Rational::new(scaled.sqrt(), BigInt::one() << bits as usize), false)
}

/// Decimal rendering for human-facing output.
pub fn render(r: &Rational) -> String {
    let v = to_f64(r);
    if v.is_finite() {
        format!("{v}")
    } else {
        r.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_roots() {
        assert_eq!(sqrt_approx(&ratio(9, 4), 64), (ratio(3, 2), true));
        let (r, exact) = sqrt_approx(&int(2), 40);
        assert!(!exact);
        assert!(&r * &r <= int(2));
        let up = &r + Rational::new(1.into(), BigInt::one() << 40usize);
        assert!(&up * &up > int(2));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse("-6/8").unwrap(), ratio(-3, 4));
        assert_eq!(parse("0.75").unwrap(), ratio(3, 4));
        assert_eq!(parse("-.5").unwrap(), ratio(-1, 2));
        assert_eq!(parse("7").unwrap(), int(7));
        assert_eq!(parse("1e-3").unwrap(), ratio(1, 1000));
        assert_eq!(parse("2.5E2").unwrap(), int(250));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn string_round_trip() {
        for r in [ratio(3, 4), ratio(-5, 7), int(0), int(12)] {
            assert_eq!(parse(&to_string(&r)).unwrap(), r);
        }
        assert_eq!(to_string(&int(3)), "3/1");
    }

    #[test]
    fn half_even() {
        assert_eq!(round_half_even(&ratio(5, 2)), BigInt::from(2));
        assert_eq!(round_half_even(&ratio(7, 2)), BigInt::from(4));
        assert_eq!(round_half_even(&ratio(-5, 2)), BigInt::from(-2));
        assert_eq!(round_half_even(&ratio(-7, 2)), BigInt::from(-4));
        assert_eq!(round_half_even(&ratio(26, 10)), BigInt::from(3));
        assert_eq!(round_half_even(&ratio(-24, 10)), BigInt::from(-2));
    }

    #[test]
    fn strict_isqrt() {
        assert_eq!(isqrt_strict_below(&int(16)), BigInt::from(3));
        assert_eq!(isqrt_strict_below(&ratio(161, 10)), BigInt::from(4));
        assert_eq!(isqrt_strict_below(&ratio(1, 4)), BigInt::from(0));
        assert_eq!(isqrt_strict_below(&int(0)), BigInt::from(-1));
    }

    #[test]
    fn approx_is_close() {
        let r = approx_f64(core::f64::consts::PI, 60).unwrap();
        assert!((to_f64(&r) - core::f64::consts::PI).abs() < 1e-15);
        assert_eq!(approx_f64(0.5, 10).unwrap(), ratio(1, 2));
    }
}
