//! Arbitrary-precision ball arithmetic.
//!
//! A [`Ball`] is a dyadic midpoint `m * 2^e` with a dyadic radius; every
//! operation rounds the midpoint to the working precision and folds the
//! rounding error into the radius, so the true value always stays inside.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, Zero};

use crate::rational::{mul_pow2, Rational};

/// Bits kept in radii; radii only ever round up.
const RAD_BITS: u64 = 30;

/// Exact dyadic number `man * 2^exp`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    pub man: BigInt,
    pub exp: i64,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic { man: BigInt::zero(), exp: 0 }
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic { man: BigInt::from(n), exp: 0 }
    }

    pub fn pow2(e: i64) -> Self {
        Dyadic { man: BigInt::from(1), exp: e }
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { man: self.man.abs(), exp: self.exp }
    }

    /// Exponent one past the top bit: `|self| < 2^top`.
    pub fn top(&self) -> i64 {
        if self.man.is_zero() {
            i64::MIN / 4
        } else {
            self.exp + self.man.bits() as i64
        }
    }

    pub fn to_rational(&self) -> Rational {
        mul_pow2(&Rational::from_integer(self.man.clone()), self.exp)
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic { man: &self.man * &other.man, exp: self.exp + other.exp }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.man.is_zero() {
            return other.clone();
        }
        if other.man.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.man << ((self.exp - e) as usize);
        let b = &other.man << ((other.exp - e) as usize);
        Dyadic { man: a + b, exp: e }
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { man: -&self.man, exp: self.exp }
    }

    pub fn shift(&self, k: i64) -> Dyadic {
        Dyadic { man: self.man.clone(), exp: self.exp + k }
    }

    pub fn cmp_value(&self, other: &Dyadic) -> Ordering {
        match self.add(&other.neg()).man.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }

    /// Truncates towards minus infinity to `bits` significant bits and
    /// returns the result with an upper bound on the discarded part.
    fn round(&self, bits: u64) -> (Dyadic, Dyadic) {
        let have = self.man.bits();
        if have <= bits {
            return (self.clone(), Dyadic::zero());
        }
        let drop = have - bits;
        let man = &self.man >> (drop as usize);
        (Dyadic { man, exp: self.exp + drop as i64 }, Dyadic::pow2(self.exp + drop as i64))
    }

    /// Smallest value with at most `bits` significant bits that is `>= |self|`.
    fn round_up_abs(&self, bits: u64) -> Dyadic {
        let m = self.man.abs();
        let have = m.bits();
        if have <= bits {
            return Dyadic { man: m, exp: self.exp };
        }
        let drop = have - bits;
        let man = (m >> (drop as usize)) + 1u32;
        Dyadic { man, exp: self.exp + drop as i64 }
    }

    /// Exact conversion from a rational when it is dyadic, otherwise a
    /// truncation to `bits` significant bits plus an error bound.
    pub fn from_rational(r: &Rational, bits: u64) -> (Dyadic, Dyadic) {
        if r.is_zero() {
            return (Dyadic::zero(), Dyadic::zero());
        }
        let den = r.denom();
        if den.magnitude().count_ones() == 1 {
            let k = den.trailing_zeros().unwrap_or(0) as i64;
            return (Dyadic { man: r.numer().clone(), exp: -k }, Dyadic::zero());
        }
        let scale = bits as i64 + den.bits() as i64 - r.numer().bits() as i64 + 2;
        let shifted = mul_pow2(r, scale);
        let man = crate::rational::floor(&shifted);
        (Dyadic { man, exp: -scale }, Dyadic::pow2(-scale))
    }

    pub fn to_f64(&self) -> f64 {
        if self.man.is_zero() {
            return 0.0;
        }
        let bits = self.man.bits() as i64;
        let drop = (bits - 60).max(0);
        let m = &self.man >> (drop as usize);
        let mf = i64::try_from(&m).unwrap_or(0) as f64;
        let e = (self.exp + drop).clamp(-3000, 3000) as i32;
        mf * 2f64.powi(e.clamp(-1074, 1023)) * if e > 1023 { 2f64.powi(e - 1023) } else if e < -1074 { 2f64.powi(e + 1074) } else { 1.0 }
    }
}

/// Closed ball `[mid - rad, mid + rad]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    mid: Dyadic,
    rad: Dyadic,
    prec: u32,
}

impl Ball {
    pub fn zero(prec: u32) -> Self {
        Ball { mid: Dyadic::zero(), rad: Dyadic::zero(), prec }
    }

    pub fn from_int(n: i64, prec: u32) -> Self {
        Ball { mid: Dyadic::from_int(n), rad: Dyadic::zero(), prec }
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        let (mid, rad) = Dyadic::from_rational(r, prec as u64 + 4);
        Ball { mid, rad: rad.round_up_abs(RAD_BITS), prec }
    }

    /// Ball covering the rational enclosure `[lo, hi]`.
    pub fn from_bounds(lo: &Rational, hi: &Rational, prec: u32) -> Self {
        let center = Ball::from_rational(&((lo + hi) / Rational::from_integer(2.into())), prec);
        let half = (hi - lo) / Rational::from_integer(2.into());
        let (h, e) = Dyadic::from_rational(&half, RAD_BITS);
        let extra = h.add(&e).round_up_abs(RAD_BITS);
        Ball { rad: center.rad.add(&extra).round_up_abs(RAD_BITS), ..center }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> &Dyadic {
        &self.rad
    }

    pub fn mid_rational(&self) -> Rational {
        self.mid.to_rational()
    }

    pub fn lower(&self) -> Rational {
        self.mid.add(&self.rad.neg()).to_rational()
    }

    pub fn upper(&self) -> Rational {
        self.mid.add(&self.rad).to_rational()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lower() <= x && x <= &self.upper()
    }

    /// Upper bound on `|x|` for every `x` in the ball.
    pub fn mag(&self) -> Dyadic {
        self.mid.round_up_abs(RAD_BITS).add(&self.rad).round_up_abs(RAD_BITS)
    }

    /// `mid - rad > 0`.
    pub fn is_positive(&self) -> bool {
        self.mid.man.is_positive() && self.mid.abs().cmp_value(&self.rad) == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.mid.man.is_negative() && self.mid.abs().cmp_value(&self.rad) == Ordering::Greater
    }

    pub fn with_prec(&self, prec: u32) -> Ball {
        Ball { prec, ..self.clone() }
    }

    pub fn widen(&self, extra: &Dyadic) -> Ball {
        Ball { rad: self.rad.add(&extra.abs()).round_up_abs(RAD_BITS), ..self.clone() }
    }

    /// Multiplication by `2^k` (exact).
    pub fn mul_pow2(&self, k: i64) -> Ball {
        Ball { mid: self.mid.shift(k), rad: self.rad.shift(k), prec: self.prec }
    }

    /// Relative radius check: `rad <= 2^-bits * max(1, |mid|)`.
    pub fn rad_within(&self, bits: i64) -> bool {
        let scale = self.mid.top().max(0);
        self.rad.is_zero() || self.rad.top() <= scale - bits
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    fn normalise(mid: Dyadic, rad: Dyadic, prec: u32) -> Ball {
        let (m, err) = mid.round(prec as u64);
        let rad = if err.is_zero() { rad } else { rad.add(&err) };
        Ball { mid: m, rad: rad.round_up_abs(RAD_BITS), prec }
    }
}

impl Add for &Ball {
    type Output = Ball;
    fn add(self, other: &Ball) -> Ball {
        let prec = self.prec.max(other.prec);
        let rad = self.rad.add(&other.rad);
        // a summand far below the working precision goes into the radius
        let (ta, tb) = (self.mid.top(), other.mid.top());
        let guard = prec as i64 + 64;
        if !other.mid.is_zero() && ta - tb > guard {
            return Ball::normalise(self.mid.clone(), rad.add(&other.mid.round_up_abs(RAD_BITS)), prec);
        }
        if !self.mid.is_zero() && tb - ta > guard {
            return Ball::normalise(other.mid.clone(), rad.add(&self.mid.round_up_abs(RAD_BITS)), prec);
        }
        Ball::normalise(self.mid.add(&other.mid), rad, prec)
    }
}

impl Neg for &Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        Ball { mid: self.mid.neg(), rad: self.rad.clone(), prec: self.prec }
    }
}

impl Sub for &Ball {
    type Output = Ball;
    fn sub(self, other: &Ball) -> Ball {
        self + &(-other)
    }
}

impl Mul for &Ball {
    type Output = Ball;
    fn mul(self, other: &Ball) -> Ball {
        let prec = self.prec.max(other.prec);
        let mid = self.mid.mul(&other.mid);
        let mut rad = Dyadic::zero();
        if !other.rad.is_zero() {
            rad = rad.add(&self.mid.round_up_abs(RAD_BITS).mul(&other.rad));
        }
        if !self.rad.is_zero() {
            rad = rad.add(&other.mid.round_up_abs(RAD_BITS).mul(&self.rad));
            if !other.rad.is_zero() {
                rad = rad.add(&self.rad.mul(&other.rad));
            }
        }
        Ball::normalise(mid, rad.round_up_abs(RAD_BITS), prec)
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} +/- {:.3e}", self.mid.to_f64(), self.rad.to_f64())
    }
}

/// Dense square or rectangular matrix of balls, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Ball>,
}

impl BallMatrix {
    pub fn zeros(rows: usize, cols: usize, prec: u32) -> Self {
        BallMatrix { rows, cols, data: vec![Ball::zero(prec); rows * cols] }
    }

    pub fn identity(n: usize, prec: u32) -> Self {
        let mut m = Self::zeros(n, n, prec);
        for i in 0..n {
            m.data[i * n + i] = Ball::from_int(1, prec);
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, data: Vec<Ball>) -> Self {
        assert_eq!(data.len(), rows * cols);
        BallMatrix { rows, cols, data }
    }

    pub fn from_rational(a: &crate::matrix::RatMatrix, prec: u32) -> Self {
        BallMatrix { rows: a.rows(), cols: a.cols(), data: a.entries().iter().map(|x| Ball::from_rational(x, prec)).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Ball {
        &self.data[i * self.cols + j]
    }

    pub fn entries(&self) -> &[Ball] {
        &self.data
    }

    pub fn map(&self, f: impl Fn(&Ball) -> Ball) -> BallMatrix {
        BallMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn add(&self, other: &BallMatrix) -> BallMatrix {
        BallMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn mul(&self, other: &BallMatrix) -> BallMatrix {
        assert_eq!(self.cols, other.rows);
        let prec = self.data.first().map_or(64, Ball::prec);
        let mut out = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Ball::zero(prec);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if a.mid.is_zero() && a.rad.is_zero() || b.mid.is_zero() && b.rad.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * b);
                }
                out.push(acc);
            }
        }
        BallMatrix { rows: self.rows, cols: other.cols, data: out }
    }

    pub fn mul_vec(&self, v: &[Ball]) -> Vec<Ball> {
        assert_eq!(self.cols, v.len());
        let prec = v.first().map_or(64, Ball::prec);
        (0..self.rows)
            .map(|i| {
                let mut acc = Ball::zero(prec);
                for (k, x) in v.iter().enumerate() {
                    let a = self.get(i, k);
                    if a.mid.is_zero() && a.rad.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * x);
                }
                acc
            })
            .collect()
    }

    /// Upper bound on the infinity norm (max absolute row sum).
    pub fn norm_inf(&self) -> Dyadic {
        let mut best = Dyadic::zero();
        for i in 0..self.rows {
            let mut s = Dyadic::zero();
            for j in 0..self.cols {
                s = s.add(&self.get(i, j).mag());
            }
            if s.cmp_value(&best) == Ordering::Greater {
                best = s;
            }
        }
        best
    }

    /// Largest radius over all entries.
    pub fn max_rad(&self) -> Dyadic {
        self.data.iter().map(|b| b.rad.clone()).fold(Dyadic::zero(), |a, b| if b.cmp_value(&a) == Ordering::Greater { b } else { a })
    }

    pub fn all_rad_within(&self, bits: i64) -> bool {
        let scale = self.data.iter().map(|b| b.mid.top()).max().unwrap_or(0).max(0);
        self.data.iter().all(|b| b.rad.is_zero() || b.rad.top() <= scale - bits)
    }

    pub fn contains(&self, m: &crate::matrix::RatMatrix) -> bool {
        self.data.iter().zip(m.entries()).all(|(b, x)| b.contains(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn exact_dyadics_stay_exact() {
        let a = Ball::from_rational(&rat(3, 8), 64);
        let b = Ball::from_rational(&rat(-5, 4), 64);
        let s = &a + &b;
        assert_eq!(s.mid_rational(), rat(-7, 8));
        assert!(s.rad().is_zero());
        let p = &a * &b;
        assert_eq!(p.mid_rational(), rat(-15, 32));
        assert!(p.rad().is_zero());
    }

    #[test]
    fn non_dyadic_inputs_are_enclosed() {
        let third = Ball::from_rational(&rat(1, 3), 128);
        assert!(third.contains(&rat(1, 3)));
        let prod = &(&third * &third) * &Ball::from_int(9, 128);
        assert!(prod.contains(&int(1)));
        assert!(prod.rad_within(100));
    }

    #[test]
    fn signs_are_certified() {
        let tiny = Ball::from_rational(&rat(1, 1 << 40), 64);
        assert!(tiny.is_positive());
        let fuzzy = Ball::from_int(0, 64).widen(&Dyadic::pow2(-10));
        assert!(!fuzzy.is_positive() && !fuzzy.is_negative());
        assert!((-&tiny).is_negative());
    }

    #[test]
    fn far_apart_summands() {
        let big = Ball::from_int(1, 64).mul_pow2(500);
        let small = Ball::from_int(1, 64);
        let s = &big + &small;
        assert!(s.contains(&(mul_pow2(&int(1), 500) + int(1))));
    }

    #[test]
    fn matrix_products_enclose_exact_products() {
        let a = crate::matrix::RatMatrix::from_rows(vec![vec![rat(1, 3), rat(2, 7)], vec![rat(-5, 11), rat(1, 10)]]).unwrap();
        let b = BallMatrix::from_rational(&a, 96);
        assert!(b.mul(&b).contains(&a.mul(&a)));
        let v = vec![Ball::from_rational(&rat(1, 9), 96), Ball::from_int(2, 96)];
        let exact = a.mul_vec(&crate::matrix::RatVector(vec![rat(1, 9), int(2)]));
        for (ball, x) in b.mul_vec(&v).iter().zip(exact.iter()) {
            assert!(ball.contains(x));
        }
    }

    #[test]
    fn f64_view() {
        assert!((Ball::from_rational(&rat(1, 3), 64).to_f64() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(Dyadic::pow2(-3).to_f64(), 0.125);
    }
}
