//! Directed rational enclosures of transcendental quantities.
//!
//! Every function returns `(lo, hi)` with `lo <= true value <= hi`, both
//! dyadic rationals carrying roughly `bits` significant bits. Bound formulas
//! pick the side that keeps them sound.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rational::{ceil, floor, int, mul_pow2, rat, Rational};

/// Precision used for constants inside bound formulas.
pub const DEFAULT_BITS: u32 = 64;

/// Rounds an enclosure outward to a dyadic grid fine enough to keep about
/// `bits` significant bits of the larger endpoint.
pub fn round_outward(lo: &Rational, hi: &Rational, bits: u32) -> (Rational, Rational) {
    let mag = if lo.abs() > hi.abs() { lo.abs() } else { hi.abs() };
    let exp = if mag.is_zero() { 0 } else { mag.numer().bits() as i64 - mag.denom().bits() as i64 };
    let frac_bits = (bits as i64 - exp).max(bits as i64);
    let down = mul_pow2(&Rational::from_integer(floor(&mul_pow2(lo, frac_bits))), -frac_bits);
    let up = mul_pow2(&Rational::from_integer(ceil(&mul_pow2(hi, frac_bits))), -frac_bits);
    (down, up)
}

/// Rounds `y` to a multiple of `2^-frac_bits` (nearest, ties down).
fn to_grid(y: &Rational, frac_bits: i64) -> Rational {
    let s = mul_pow2(y, frac_bits) + rat(1, 2);
    mul_pow2(&Rational::from_integer(floor(&s)), -frac_bits)
}

/// Enclosure of `2 * atanh(y)` for `|y| <= 1/2`.
fn two_atanh(y: &Rational, bits: u32) -> (Rational, Rational) {
    debug_assert!(y.abs() <= rat(1, 2));
    let target = mul_pow2(&Rational::one(), -(bits as i64) - 8);
    let y2 = y * y;
    let mut power = y.clone();
    let mut sum = Rational::zero();
    let mut k: i64 = 1;
    loop {
        sum += &power / int(k);
        power *= &y2;
        // tail of sum_{j >= next} |y|^(2j+1)/(2j+1) is below |y|^(2j+1) / (1 - y^2)
        let tail = power.abs() / (Rational::one() - &y2);
        k += 2;
        if tail <= target {
            let s2 = &sum * int(2);
            let t2 = tail * int(2);
            return (&s2 - &t2, s2 + t2);
        }
    }
}

/// Enclosure of ln 2.
pub fn ln2(bits: u32) -> (Rational, Rational) {
    let (lo, hi) = two_atanh(&rat(1, 3), bits + 8);
    round_outward(&lo, &hi, bits)
}

/// Enclosure of `ln x` for `x > 0`.
pub fn ln(x: &Rational, bits: u32) -> (Rational, Rational) {
    assert!(x.is_positive(), "logarithm of a non-positive number");
    if x.is_one() {
        return (Rational::zero(), Rational::zero());
    }
    let k = x.numer().bits() as i64 - x.denom().bits() as i64;
    let m = mul_pow2(x, -k);
    // m lies in (1/2, 2) so y = (m-1)/(m+1) lies in (-1/3, 1/3)
    let work = bits + 16 + (64 - (k.unsigned_abs().max(1)).leading_zeros());
    let y_exact = (&m - Rational::one()) / (&m + Rational::one());
    let y = to_grid(&y_exact, work as i64 + 4);
    // d/dy 2 atanh(y) <= 2/(1 - 1/9) < 3 on the reduced range
    let dy = (&y - &y_exact).abs() * int(3);
    let (alo, ahi) = two_atanh(&y, work);
    let (l2lo, l2hi) = ln2(work);
    let kr = int(k);
    let (klo, khi) = if k >= 0 { (&kr * &l2lo, &kr * &l2hi) } else { (&kr * &l2hi, &kr * &l2lo) };
    round_outward(&(klo + alo - &dy), &(khi + ahi + dy), bits)
}

/// Enclosure of `exp(r)` for `|r| <= 1/2` by Taylor series.
fn exp_small(r: &Rational, bits: u32) -> (Rational, Rational) {
    debug_assert!(r.abs() <= rat(1, 2));
    let target = mul_pow2(&Rational::one(), -(bits as i64) - 8);
    let mut term = Rational::one();
    let mut sum = Rational::zero();
    let mut k: i64 = 0;
    loop {
        sum += &term;
        k += 1;
        term = term * r / int(k);
        // remainder after this point is at most 2|term|
        let tail = term.abs() * int(2);
        if tail <= target {
            return (&sum - &tail, sum + tail);
        }
    }
}

/// Enclosure of `exp(x)`. Intended for moderate `|x|` (the caller keeps
/// astronomically large values in log scale).
pub fn exp(x: &Rational, bits: u32) -> (Rational, Rational) {
    if x.is_zero() {
        return (Rational::one(), Rational::one());
    }
    let (l2lo, l2hi) = ln2(DEFAULT_BITS);
    let mid = (&l2lo + &l2hi) / int(2);
    let n = floor(&(x / &mid + rat(1, 2)));
    let nbits = n.bits() as u32;
    let (l2lo, l2hi) = ln2(bits + nbits + 16);
    let nr = Rational::from_integer(n.clone());
    let (rlo, rhi) = if n.is_negative() { (x - &nr * &l2lo, x - &nr * &l2hi) } else { (x - &nr * &l2hi, x - &nr * &l2lo) };
    let work = bits + 16;
    let rlo_g = round_outward(&rlo, &rlo, work + 8).0;
    let rhi_g = round_outward(&rhi, &rhi, work + 8).1;
    let (elo, _) = exp_small(&rlo_g, work);
    let (_, ehi) = exp_small(&rhi_g, work);
    let shift = i64::try_from(&n).expect("exponent out of range for materialisation");
    round_outward(&mul_pow2(&elo, shift), &mul_pow2(&ehi, shift), bits)
}

/// Enclosure of Euler's number.
pub fn e(bits: u32) -> (Rational, Rational) {
    exp(&Rational::one(), bits)
}

/// Enclosure of `atan(z)` for `|z| <= 1/2` (alternating series).
fn atan_small(z: &Rational, bits: u32) -> (Rational, Rational) {
    debug_assert!(z.abs() <= rat(1, 2));
    let target = mul_pow2(&Rational::one(), -(bits as i64) - 8);
    let z2 = z * z;
    let mut power = z.clone();
    let mut sum = Rational::zero();
    let mut k: i64 = 0;
    loop {
        let term = &power / int(2 * k + 1);
        let sign = if k % 2 == 0 { Rational::one() } else { -Rational::one() };
        sum += &sign * &term;
        k += 1;
        power *= &z2;
        let next = (&power / int(2 * k + 1)).abs();
        if next <= target {
            // alternating with decreasing terms: the error is below the next term
            return (&sum - &next, sum + next);
        }
    }
}

/// Enclosure of pi via Machin's formula.
pub fn pi(bits: u32) -> (Rational, Rational) {
    let work = bits + 8;
    let (a_lo, a_hi) = atan_small(&rat(1, 5), work);
    let (b_lo, b_hi) = atan_small(&rat(1, 239), work);
    let lo = &a_lo * int(16) - &b_hi * int(4);
    let hi = &a_hi * int(16) - &b_lo * int(4);
    round_outward(&lo, &hi, bits)
}

/// Enclosure of `atan(z)` for any rational `z`.
pub fn atan(z: &Rational, bits: u32) -> (Rational, Rational) {
    if z.is_negative() {
        let (lo, hi) = atan(&-z, bits);
        return (-hi, -lo);
    }
    if z.is_zero() {
        return (Rational::zero(), Rational::zero());
    }
    let work = bits + 8;
    if z > &Rational::one() {
        let (lo, hi) = atan(&z.recip(), work);
        let (plo, phi) = pi(work);
        return round_outward(&(plo / int(2) - hi), &(phi / int(2) - lo), bits);
    }
    if z <= &rat(1, 2) {
        let (lo, hi) = atan_small(z, work);
        return round_outward(&lo, &hi, bits);
    }
    // atan z = pi/4 + atan((z-1)/(z+1)), the shifted argument lies in (-1/3, 0]
    let u = (z - Rational::one()) / (z + Rational::one());
    let (lo, hi) = atan_small(&u, work);
    let (plo, phi) = pi(work);
    round_outward(&(plo / int(4) + lo), &(phi / int(4) + hi), bits)
}

/// Enclosure of the principal argument of `x + iy` with `y > 0`.
pub fn arg_upper_half(x: &Rational, y: &Rational, bits: u32) -> (Rational, Rational) {
    assert!(y.is_positive());
    let work = bits + 8;
    let (plo, phi) = pi(work);
    if x.is_zero() {
        return round_outward(&(plo / int(2)), &(phi / int(2)), bits);
    }
    if x.is_positive() {
        let (lo, hi) = atan(&(y / x), work);
        return round_outward(&lo, &hi, bits);
    }
    // x < 0: arg = pi/2 + atan(|x|/y)
    let (lo, hi) = atan(&(x.abs() / y), work);
    round_outward(&(plo / int(2) + lo), &(phi / int(2) + hi), bits)
}

/// Enclosure of `sqrt(x)` for `x >= 0`.
pub fn sqrt(x: &Rational, bits: u32) -> (Rational, Rational) {
    assert!(!x.is_negative(), "square root of a negative number");
    if x.is_zero() {
        return (Rational::zero(), Rational::zero());
    }
    let exp = x.numer().bits() as i64 - x.denom().bits() as i64;
    let s = (bits as i64 + 4 - exp / 2).max(bits as i64 + 4);
    let scaled = mul_pow2(x, 2 * s);
    let lo_int: BigInt = floor(&scaled).sqrt();
    let hi_int: BigInt = ceil(&scaled).sqrt() + BigInt::one();
    let lo = mul_pow2(&Rational::from_integer(lo_int), -s);
    let hi = mul_pow2(&Rational::from_integer(hi_int), -s);
    (lo, hi)
}

pub fn ln_upper(x: &Rational) -> Rational {
    ln(x, DEFAULT_BITS).1
}

pub fn ln_lower(x: &Rational) -> Rational {
    ln(x, DEFAULT_BITS).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::to_f64;

    fn contains(b: &(Rational, Rational), v: f64, tol: f64) {
        assert!(b.0 <= b.1);
        assert!(to_f64(&b.0) <= v + tol && to_f64(&b.1) >= v - tol, "{} not in [{}, {}]", v, to_f64(&b.0), to_f64(&b.1));
        assert!(to_f64(&(&b.1 - &b.0)) < 1e-15 * v.abs().max(1.0));
    }

    #[test]
    fn constants() {
        contains(&ln2(64), std::f64::consts::LN_2, 1e-16);
        contains(&pi(64), std::f64::consts::PI, 1e-15);
        contains(&e(64), std::f64::consts::E, 1e-15);
    }

    #[test]
    fn pi_brackets_known_digits() {
        let (lo, hi) = pi(100);
        // 3.14159265358979323846264338327950288...
        let below = crate::rational::parse_rational("3.14159265358979323846264338").unwrap();
        let above = crate::rational::parse_rational("3.14159265358979323846264339").unwrap();
        assert!(lo > below && hi < above);
    }

    #[test]
    fn logarithms() {
        for (n, d) in [(1, 3), (101, 100), (7, 1), (1, 1000), (12345, 7), (3, 2)] {
            let x = rat(n, d);
            contains(&ln(&x, 64), (n as f64 / d as f64).ln(), 1e-14);
        }
        let big = mul_pow2(&int(3), 5000);
        let (lo, hi) = ln(&big, 64);
        let v = 5000.0 * std::f64::consts::LN_2 + 3f64.ln();
        assert!(to_f64(&lo) <= v + 1e-9 && to_f64(&hi) >= v - 1e-9);
    }

    #[test]
    fn exponentials() {
        for x in [rat(1, 3), rat(-5, 2), int(10), rat(-100, 7), int(0), int(700)] {
            let v = to_f64(&x).exp();
            let (lo, hi) = exp(&x, 64);
            assert!(lo <= hi);
            let rel = |r: &Rational| (to_f64(r) - v).abs() / v;
            assert!(rel(&lo) < 1e-14 && rel(&hi) < 1e-14);
        }
        let (lo, hi) = exp(&int(1), 64);
        let (l2, h2) = ln(&hi, 64);
        assert!(h2 >= Rational::one() && l2 <= Rational::one() + rat(1, 1_000_000_000));
        assert!(lo < hi);
    }

    #[test]
    fn arctangents() {
        for (n, d) in [(1, 1), (3, 4), (5, 1), (-2, 3), (1, 10), (1000, 1)] {
            contains(&atan(&rat(n, d), 64), (n as f64 / d as f64).atan(), 1e-15);
        }
        contains(&arg_upper_half(&int(-1), &int(1), 64), 3.0 * std::f64::consts::FRAC_PI_4, 1e-15);
        contains(&arg_upper_half(&int(0), &int(2), 64), std::f64::consts::FRAC_PI_2, 1e-15);
        contains(&arg_upper_half(&rat(3, 5), &rat(4, 5), 64), (0.8f64).atan2(0.6), 1e-15);
    }

    #[test]
    fn square_roots() {
        let (lo, hi) = sqrt(&int(2), 64);
        assert!(&lo * &lo <= int(2) && &hi * &hi >= int(2));
        assert!(to_f64(&(hi - lo)) < 1e-18);
        let (lo, hi) = sqrt(&int(6), 64);
        assert!(&lo * &lo <= int(6) && &hi * &hi >= int(6));
        let (lo, hi) = sqrt(&rat(1, 1 << 40), 64);
        assert!(&lo * &lo <= rat(1, 1 << 40) && &hi * &hi >= rat(1, 1 << 40));
        assert_eq!(sqrt(&int(4), 64).0, int(2));
    }
}
