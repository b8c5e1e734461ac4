//! Exact rational scalars.
//!
//! `Rational` is `num_rational::BigRational`, which is kept in lowest terms
//! with a positive denominator after every operation. This module adds the
//! parsing rules of the instance format and the bit-size measure used by the
//! bound formulas.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = num_rational::BigRational;

/// Maximum number of fractional digits accepted in a decimal literal.
pub const MAX_FRACTION_DIGITS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal `{0}`")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("decimal literal `{0}` has more than {MAX_FRACTION_DIGITS} fractional digits")]
    TooManyDigits(String),
}

fn parse_digits(s: &str, whole: &str) -> Result<BigInt, ParseRationalError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseRationalError::Malformed(whole.to_string()));
    }
    BigInt::parse_bytes(s.as_bytes(), 10).ok_or_else(|| ParseRationalError::Malformed(whole.to_string()))
}

/// Parses `"p"`, `"-p"`, `"p/q"` or a decimal literal such as `"-1.01"`.
///
/// Decimals are converted exactly, so `"1.01"` becomes `101/100`.
pub fn parse_rational(input: &str) -> Result<Rational, ParseRationalError> {
    let s = input.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let (negative, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let value = if let Some((num, den)) = body.split_once('/') {
        let num = parse_digits(num.trim(), input)?;
        let den = parse_digits(den.trim(), input)?;
        if den.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(input.to_string()));
        }
        Rational::new(num, den)
    } else if let Some((int_part, frac_part)) = body.split_once('.') {
        if frac_part.len() > MAX_FRACTION_DIGITS {
            return Err(ParseRationalError::TooManyDigits(input.to_string()));
        }
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(ParseRationalError::Malformed(input.to_string()));
        }
        let int_value = if int_part.is_empty() { BigInt::zero() } else { parse_digits(int_part, input)? };
        let frac_value = if frac_part.is_empty() { BigInt::zero() } else { parse_digits(frac_part, input)? };
        let scale = num_traits::pow(BigInt::from(10u32), frac_part.len());
        Rational::new(int_value * &scale + frac_value, scale)
    } else {
        Rational::from_integer(parse_digits(body, input)?)
    };
    Ok(if negative { -value } else { value })
}

/// Number of bits of `|n|`; zero has bit length zero.
pub fn int_bits(n: &BigInt) -> u64 {
    n.bits()
}

/// Bits of the numerator magnitude plus bits of the denominator.
pub fn bit_size(x: &Rational) -> u64 {
    int_bits(x.numer()) + int_bits(x.denom())
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Largest integer `<= x`.
pub fn floor(x: &Rational) -> BigInt {
    x.numer().div_floor(x.denom())
}

/// Smallest integer `>= x`.
pub fn ceil(x: &Rational) -> BigInt {
    -((-x.numer()).div_floor(x.denom()))
}

/// `x * 2^k` for any signed `k`.
pub fn mul_pow2(x: &Rational, k: i64) -> Rational {
    if k >= 0 {
        Rational::new(x.numer() << (k as usize), x.denom().clone())
    } else {
        Rational::new(x.numer().clone(), x.denom() << ((-k) as usize))
    }
}

/// Rounds `x` to a multiple of `2^-bits`, downward or upward.
pub fn round_dyadic(x: &Rational, bits: u32, up: bool) -> Rational {
    let scaled = mul_pow2(x, bits as i64);
    let n = if up { ceil(&scaled) } else { floor(&scaled) };
    mul_pow2(&Rational::from_integer(n), -(bits as i64))
}

/// Lossy conversion for display and heuristics only.
pub fn to_f64(x: &Rational) -> f64 {
    let nb = x.numer().bits() as i64;
    let db = x.denom().bits() as i64;
    // keep roughly 64 significant bits of the quotient
    let shift = 64 - (nb - db);
    let q = if shift >= 0 {
        (x.numer() << (shift as usize)) / x.denom()
    } else {
        x.numer() / (x.denom() << ((-shift) as usize))
    };
    let (sign, mag) = (q.sign(), q.magnitude().clone());
    let top = mag.bits() as i64;
    let drop = (top - 60).max(0);
    let mant = (&mag >> (drop as usize)).to_u64_digits().first().copied().unwrap_or(0) as f64;
    let v = mant * 2f64.powi((drop - shift).clamp(-2000, 2000) as i32);
    if sign == Sign::Minus { -v } else { v }
}

/// Rational approximation of an `f64` (exact binary value).
pub fn from_f64(v: f64) -> Rational {
    Rational::from_float(v).unwrap_or_else(Rational::zero)
}

/// The simplest rational (smallest denominator) in the closed interval `[lo, hi]`.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(lo <= hi);
    if lo.is_negative() && hi.is_positive() || lo.is_zero() || hi.is_zero() {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi, &-lo);
    }
    let fl = floor(lo);
    let fl_r = Rational::from_integer(fl.clone());
    if &fl_r == lo {
        return fl_r;
    }
    let next = Rational::from_integer(&fl + BigInt::one());
    if &next <= hi {
        return next;
    }
    // lo and hi share an integer part; recurse on the reciprocals of the fractional parts
    let inner = simplest_between(&(hi - &fl_r).recip(), &(lo - &fl_r).recip());
    fl_r + inner.recip()
}

pub fn abs(x: &Rational) -> Rational {
    x.abs()
}
