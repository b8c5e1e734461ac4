//! Heights of algebraic numbers and the separation bounds built on them.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::directed::{self, DEFAULT_BITS};
use crate::logscale::LogScale;
use crate::poly::IntPolynomial;
use crate::rational::{ceil, int, Rational};

/// Bounds describing an algebraic number's minimal polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightBound {
    #[serde(with = "crate::serde_rational::bigint")]
    pub naive_height_bound: BigInt,
    #[serde(with = "crate::serde_rational")]
    pub log_height_bound: Rational,
    pub degree_bound: usize,
}

/// Largest absolute coefficient.
pub fn naive_height(p: &IntPolynomial) -> BigInt {
    p.max_abs_coeff()
}

/// `(1/(H+1), H+1)`, which brackets `|a|` for every nonzero algebraic `a`
/// of naive height `H`.
pub fn liouville_bounds(h: &BigInt) -> (Rational, Rational) {
    assert!(h >= &BigInt::one(), "height must be at least 1");
    let up = Rational::from_integer(h + 1);
    (up.recip(), up)
}

/// Logarithmic height bound after `m` field operations on numbers of height
/// at most `h_max`: `(m+1) h_max + m log 2`, rounded up.
pub fn arithmetic_height_bound(h_max: &Rational, m: u64) -> Rational {
    let ln2_hi = directed::ln2(DEFAULT_BITS).1;
    h_max * int(m as i64 + 1) + ln2_hi * int(m as i64)
}

/// Coefficient bound for the characteristic polynomial of a `d x d` matrix
/// whose entries are at most `2^b` in absolute value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharpolyCoeffBound {
    /// Upper bound on `(d/2) log(2d 4^b)`.
    #[serde(with = "crate::serde_rational")]
    pub log_bound: Rational,
    /// `ceil((2d 4^b)^(d/2))`.
    #[serde(with = "crate::serde_rational::bigint")]
    pub integer_bound: BigInt,
    /// `integer_bound * 2^(bd)`, the bound after clearing dyadic denominators.
    #[serde(with = "crate::serde_rational::bigint")]
    pub cleared_bound: BigInt,
    /// The underlying lemma is stated for `d >= 4`.
    pub small_dimension: bool,
}

pub fn charpoly_coeff_bound(d: u64, b: u64) -> CharpolyCoeffBound {
    assert!(d >= 1 && b >= 1);
    let base: BigInt = BigInt::from(2 * d) << (2 * b) as usize;
    let power = num_traits::pow(base.clone(), d as usize);
    // (base^d)^(1/2), rounded up
    let root = power.sqrt();
    let integer_bound = if &root * &root == power { root } else { root + 1 };
    let cleared_bound = &integer_bound << (b * d) as usize;
    let log_bound = directed::ln_upper(&Rational::from_integer(base)) * Rational::new(BigInt::from(d), BigInt::from(2));
    CharpolyCoeffBound { log_bound, integer_bound, cleared_bound, small_dimension: d < 4 }
}

/// `3 b d^2`, the logarithmic height bound for eigenvalues.
pub fn eigenvalue_height_bound(d: u64, b: u64) -> Rational {
    int((3 * b * d * d) as i64)
}

/// Rational lower bound on `sqrt(6) / (d^((d+1)/2) H^(d-1))`, the minimum
/// distance between distinct roots of `p`.
pub fn mignotte_separation(p: &IntPolynomial) -> Rational {
    let d = p.degree().expect("nonzero polynomial");
    assert!(d >= 2, "separation needs degree at least 2");
    let h = naive_height(p);
    let sqrt6_lo = directed::sqrt(&int(6), DEFAULT_BITS).0;
    let dd = BigInt::from(d);
    let d_pow_hi = if d % 2 == 1 {
        Rational::from_integer(num_traits::pow(dd, d.div_ceil(2)))
    } else {
        // d^(d/2) * sqrt(d)
        let sqrt_d_hi = directed::sqrt(&int(d as i64), DEFAULT_BITS).1;
        Rational::from_integer(num_traits::pow(dd, d / 2)) * sqrt_d_hi
    };
    let h_pow = Rational::from_integer(num_traits::pow(h, d - 1));
    sqrt6_lo / (d_pow_hi * h_pow)
}

/// `4^(3 b d^3)`, kept as its exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerOfFour {
    pub exponent: u64,
}

impl PowerOfFour {
    pub fn value(&self) -> Option<BigInt> {
        (self.exponent <= 1 << 14).then(|| BigInt::one() << (2 * self.exponent) as usize)
    }

    /// `4^-exponent` as an exact rational when it is small enough to store.
    pub fn reciprocal(&self) -> Option<Rational> {
        self.value().map(|v| Rational::new(BigInt::one(), v))
    }

    pub fn to_log_scale(&self) -> LogScale {
        match self.value() {
            Some(v) => LogScale::exact(Rational::from_integer(v)),
            None => LogScale::exp(directed::ln2(DEFAULT_BITS).1 * int(2) * int(self.exponent as i64)),
        }
    }
}

pub fn inverse_eigenvalue_bound(d: u64, b: u64) -> PowerOfFour {
    PowerOfFour { exponent: 3 * b * d * d * d }
}

/// Height bound for eigenvalues of a `d x d` matrix of bit size `b`.
pub fn eigenvalue_heights(d: u64, b: u64) -> HeightBound {
    let log_height_bound = eigenvalue_height_bound(d, b);
    // H <= 2^deg * e^(deg h)
    let naive = directed::exp(&(&log_height_bound * int(d as i64)), DEFAULT_BITS).1 * int(1 << d.min(62));
    HeightBound { naive_height_bound: ceil(&naive), log_height_bound, degree_bound: d as usize }
}

/// `true` when `x` is no smaller than `4^-exponent`.
pub fn exceeds_reciprocal(x: &Rational, p: &PowerOfFour) -> bool {
    if !x.is_positive() {
        return false;
    }
    match p.reciprocal() {
        Some(r) => x >= &r,
        None => {
            let ln_x = directed::ln_lower(x);
            let ln_r = -(directed::ln2(DEFAULT_BITS).1 * int(2) * int(p.exponent as i64));
            ln_x >= ln_r
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, to_f64};
    use num_traits::Zero;

    #[test]
    fn naive_heights() {
        assert_eq!(naive_height(&IntPolynomial::from_i64(&[-1, 3])), BigInt::from(3));
        assert_eq!(naive_height(&IntPolynomial::from_i64(&[-2, 0, 1])), BigInt::from(2));
        assert_eq!(naive_height(&IntPolynomial::from_i64(&[-101, 100])), BigInt::from(101));
    }

    #[test]
    fn liouville() {
        assert_eq!(liouville_bounds(&BigInt::from(3)), (rat(1, 4), int(4)));
        assert_eq!(liouville_bounds(&BigInt::from(1)), (rat(1, 2), int(2)));
        let (lo, hi) = liouville_bounds(&BigInt::from(2));
        assert!(&lo * &lo < int(2) && int(2) < &hi * &hi);
    }

    #[test]
    fn arithmetic_bound() {
        assert_eq!(arithmetic_height_bound(&int(5), 0), int(5));
        let v = arithmetic_height_bound(&int(1), 1);
        assert!(v > rat(26931, 10000) && v <= rat(26932, 10000));
    }

    #[test]
    fn charpoly_bounds() {
        assert_eq!(charpoly_coeff_bound(4, 1).integer_bound, BigInt::from(1024));
        assert_eq!(charpoly_coeff_bound(4, 2).integer_bound, BigInt::from(16384));
        assert_eq!(charpoly_coeff_bound(4, 1).cleared_bound, BigInt::from(1024 * 16));
        assert!(charpoly_coeff_bound(3, 11).small_dimension);
        let c = charpoly_coeff_bound(5, 3);
        assert!(to_f64(&c.log_bound) >= (c.integer_bound.bits() as f64 - 1.0) * std::f64::consts::LN_2);
    }

    #[test]
    fn eigenvalue_heights_and_inverse() {
        assert_eq!(eigenvalue_height_bound(2, 1), int(12));
        assert_eq!(eigenvalue_height_bound(3, 10), int(270));
        assert_eq!(inverse_eigenvalue_bound(1, 1).value(), Some(BigInt::from(64)));
        assert_eq!(inverse_eigenvalue_bound(2, 1).value(), Some(BigInt::one() << 48usize));
        assert!(exceeds_reciprocal(&rat(1, 64), &inverse_eigenvalue_bound(1, 1)));
        assert!(!exceeds_reciprocal(&rat(1, 65), &inverse_eigenvalue_bound(1, 1)));
        assert!(exceeds_reciprocal(&rat(1, 1000), &inverse_eigenvalue_bound(8, 30)));
        assert!(eigenvalue_heights(3, 2).naive_height_bound > BigInt::zero());
    }

    #[test]
    fn mignotte_examples() {
        let s = mignotte_separation(&IntPolynomial::from_i64(&[-2, 0, 1]));
        // s <= sqrt(6)/(4 sqrt 2), i.e. s^2 <= 3/16
        assert!(&s * &s <= rat(3, 16) && s > rat(433, 1000));
        let s = mignotte_separation(&IntPolynomial::from_i64(&[-1, 0, 1]));
        assert!(s <= rat(867, 1000) && s < int(2));
        // x (x - 1) (100x - 101)
        let p = IntPolynomial::from_i64(&[0, 101, -201, 100]);
        let s = mignotte_separation(&p);
        assert!(s > int(0) && s < rat(1, 100));
    }
}
