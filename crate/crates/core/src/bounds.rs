//! Certified escape-time bounds.
//!
//! For continuous dynamics the bound is `T_c + T_r`: `T_c` sums
//! `index * pi / theta` over complex pairs, and `T_r` is twice the largest
//! per-eigenvalue time over the real spectrum. Every time depends on the
//! instance only through the spectrum and the ratio `C/eps`, which is taken
//! from the closed form `exp(640 b d^(3d+8))`.
//!
//! Discrete dynamics reuse the same machinery on the logarithms of the
//! eigenvalues and add `d` steps for the parts a logarithm cannot describe.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decide::{decide, Instance, Mode, Outcome};
use crate::directed::{self, DEFAULT_BITS};
use crate::heights::{charpoly_coeff_bound, inverse_eigenvalue_bound, PowerOfFour};
use crate::logscale::LogScale;
use crate::rational::{ceil, int, Rational};
use crate::spectrum::{real_part_sign, spectrum_with_retry, EigenKind, EigenvalueEnclosure, RealSign, Spectrum, SpectrumError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("bounds need an instance where every trajectory escapes, decision was {0:?}")]
    Precondition(Outcome),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error("sign of a real eigenvalue could not be certified")]
    UncertifiedSign,
    #[error("imaginary part of a complex eigenvalue has no positive lower bound")]
    UncertifiedTheta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioSource {
    Formula,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenCase {
    Negative,
    Zero,
    Positive,
    /// Contributes `index * pi / theta` to the complex hull time.
    Complex,
    /// Discrete mode only: absorbed by the extra `d` steps.
    CoveredBySteps,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenBound {
    pub eigenvalue: EigenvalueEnclosure,
    pub case: EigenCase,
    /// The rate actually plugged into the formula: `|lambda|`, `theta`, or
    /// their logarithmic counterparts in discrete mode.
    #[serde(with = "crate::serde_rational::option", default, skip_serializing_if = "Option::is_none")]
    pub rate_lower: Option<Rational>,
    pub t_lambda: LogScale,
    pub used_fallback: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialCase {
    None,
    Diagonalizable,
    Invertible,
    DiagonalizableInvertible,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EscapeCertificate {
    pub mode: Mode,
    pub bit_size: u64,
    pub dimension: usize,
    /// `T_c + T_r` for continuous dynamics, the iteration count `N` for discrete.
    pub total_bound: LogScale,
    pub complex_hull_time: LogScale,
    pub ratio_bound: LogScale,
    pub ratio_source: RatioSource,
    pub per_eigenvalue: Vec<EigenBound>,
    pub real_bound: LogScale,
    /// Discrete mode: the continuous-time bound `T` with `N = ceil(T) + d`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub continuous_time_bound: Option<LogScale>,
    pub special_case: SpecialCase,
    /// `4^(b d^2)`, the asymptotic size in the special case.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub special_case_bound: Option<LogScale>,
    /// `4 exp(640 b d^(4d+10))`.
    pub closed_form_bound: LogScale,
    pub within_closed_form: bool,
    pub spectrum_precision: u32,
    pub notes: Vec<String>,
}

fn pow_u(d: u64, e: u64) -> BigInt {
    num_traits::pow(BigInt::from(d), e as usize)
}

/// `C/eps <= exp(640 b d^(3d+8))`.
pub fn ratio_bound_formula(b: u64, d: u64) -> LogScale {
    LogScale::exp(Rational::from_integer(BigInt::from(640u64 * b) * pow_u(d, 3 * d + 8)))
}

/// `4 exp(640 b d^(4d+10))`.
pub fn closed_form_bound(b: u64, d: u64) -> LogScale {
    let ln4 = directed::ln2(DEFAULT_BITS).1 * int(2);
    LogScale::exp(Rational::from_integer(BigInt::from(640u64 * b) * pow_u(d, 4 * d + 10)) + ln4)
}

fn ln_k_ratio(k: usize, ratio: &LogScale) -> Rational {
    let l = ratio.mul_rational(&int(k as i64)).ln_upper().unwrap_or_else(Rational::zero);
    l.max(Rational::zero())
}

/// `4a log(2a) + 2b`, which makes `t >= a log t + b` hold for every `t`
/// above it when `a >= 1` and `b > 0`.
pub fn log_inequality_threshold(a: &Rational, b: &Rational) -> Rational {
    assert!(a >= &Rational::one() && b.is_positive(), "threshold needs a >= 1 and b > 0");
    threshold_unchecked(a, b)
}

fn threshold_unchecked(a: &Rational, b: &Rational) -> Rational {
    let two_a = a * int(2);
    a * int(4) * directed::ln_upper(&two_a) + b * int(2)
}

/// Negative eigenvalue: `max(1, 4a log(2a) + 2b')` with `a = max(1, k/|l|)`
/// and `b' = log(k C/eps) / |l|`.
pub fn t_lambda_negative(k: usize, lambda_abs_lower: &Rational, ratio: &LogScale) -> LogScale {
    assert!(lambda_abs_lower.is_positive() && k >= 1);
    let a = (int(k as i64) / lambda_abs_lower).max(Rational::one());
    let b = ln_k_ratio(k, ratio) / lambda_abs_lower;
    LogScale::exact(threshold_unchecked(&a, &b).max(Rational::one()))
}

/// Zero eigenvalue: `(1/k) (k^2 C/eps)^(2^(k-1))`.
pub fn t_lambda_zero(k: usize, ratio: &LogScale) -> LogScale {
    assert!(k >= 1);
    let e = 1u64 << (k - 1);
    let kr = int(k as i64);
    match ratio {
        LogScale::Exact(v) => {
            let x = &kr * &kr * v;
            let size = x.numer().bits() + x.denom().bits();
            if size.saturating_mul(e) <= 1 << 16 {
                let p = num_traits::pow(x, e as usize);
                LogScale::exact(p / &kr)
            } else {
                LogScale::exp(directed::ln_upper(&x) * int(e as i64) - directed::ln_lower(&kr))
            }
        }
        LogScale::Exp(l) => {
            let ln_k2 = directed::ln_upper(&(&kr * &kr));
            LogScale::exp((ln_k2 + l) * int(e as i64) - directed::ln_lower(&kr))
        }
    }
}

/// Positive eigenvalue: `(2^(k-1) / l) log(k C/eps)`.
pub fn t_lambda_positive(k: usize, lambda_lower: &Rational, ratio: &LogScale) -> LogScale {
    assert!(lambda_lower.is_positive() && k >= 1);
    let coef = Rational::from_integer(BigInt::one() << (k - 1)) / lambda_lower;
    LogScale::exact(coef * ln_k_ratio(k, ratio))
}

/// `sum index * pi / theta` over complex pairs.
pub fn complex_hull_time(s: &Spectrum) -> Result<LogScale, BoundError> {
    let pi_hi = directed::pi(DEFAULT_BITS).1;
    let mut total = Rational::zero();
    for e in s.complex() {
        let theta = e.imag_lo.clone().filter(Signed::is_positive).ok_or(BoundError::UncertifiedTheta)?;
        total += &pi_hi * int(e.index as i64) / theta;
    }
    Ok(LogScale::exact(total))
}

/// Lower bound on a positive rate, falling back to `4^(-3bd^3)` when the
/// enclosure gives nothing.
fn rate_or_fallback(rate: Rational, fallback: &PowerOfFour) -> Result<(Rational, bool), BoundError> {
    if rate.is_positive() {
        return Ok((rate, false));
    }
    fallback.reciprocal().map(|r| (r, true)).ok_or(BoundError::UncertifiedSign)
}

fn real_case_time(case: EigenCase, k: usize, rate: &Rational, ratio: &LogScale) -> LogScale {
    match case {
        EigenCase::Negative => t_lambda_negative(k, rate, ratio),
        EigenCase::Positive => t_lambda_positive(k, rate, ratio),
        EigenCase::Zero => t_lambda_zero(k, ratio),
        _ => LogScale::zero(),
    }
}

/// `2 max T_lambda` over the real spectrum; zero when there is none.
pub fn real_escape_bound(s: &Spectrum, bit_size: u64, ratio: &LogScale) -> Result<LogScale, BoundError> {
    let fallback = inverse_eigenvalue_bound(s.dimension as u64, bit_size);
    let mut best = LogScale::zero();
    for e in s.real() {
        let (case, rate) = continuous_case(e, &fallback)?;
        best = best.max(&real_case_time(case, e.index, &rate.0, ratio));
    }
    Ok(best.mul_rational(&int(2)))
}

fn continuous_case(e: &EigenvalueEnclosure, fallback: &PowerOfFour) -> Result<(EigenCase, (Rational, bool)), BoundError> {
    match real_part_sign(e) {
        RealSign::Zero => Ok((EigenCase::Zero, (Rational::zero(), false))),
        RealSign::Negative => Ok((EigenCase::Negative, rate_or_fallback(e.abs_lower(), fallback)?)),
        RealSign::Positive => Ok((EigenCase::Positive, rate_or_fallback(e.abs_lower(), fallback)?)),
        RealSign::ZeroUncertified => Err(BoundError::UncertifiedSign),
    }
}

fn special_case(s: &Spectrum) -> SpecialCase {
    match (s.is_diagonalizable(), !s.has_zero()) {
        (true, true) => SpecialCase::DiagonalizableInvertible,
        (true, false) => SpecialCase::Diagonalizable,
        (false, true) => SpecialCase::Invertible,
        (false, false) => SpecialCase::None,
    }
}

fn require_escape(inst: &Instance) -> Result<(), BoundError> {
    match decide(inst).outcome {
        Outcome::AllEscape => Ok(()),
        other => Err(BoundError::Precondition(other)),
    }
}

struct Assembly {
    complex_hull_time: LogScale,
    real_bound: LogScale,
    per_eigenvalue: Vec<EigenBound>,
    notes: Vec<String>,
}

fn base_notes(b: u64, d: u64) -> Vec<String> {
    let mut notes = Vec::new();
    if charpoly_coeff_bound(d, b).small_dimension {
        notes.push(format!("dimension {d} is below 4, where the characteristic polynomial coefficient lemma is stated; the closed-form ratio is applied regardless"));
    }
    notes
}

fn finish(
    inst: &Instance,
    s: &Spectrum,
    ratio: LogScale,
    asm: Assembly,
    total: LogScale,
    continuous_time_bound: Option<LogScale>,
) -> EscapeCertificate {
    let b = inst.bit_size();
    let d = inst.dimension() as u64;
    let closed = closed_form_bound(b, d);
    let special = special_case(s);
    let special_bound = (special == SpecialCase::DiagonalizableInvertible)
        .then(|| PowerOfFour { exponent: b * d * d }.to_log_scale());
    let within = total.certainly_le(&closed);
    EscapeCertificate {
        mode: inst.mode,
        bit_size: b,
        dimension: d as usize,
        total_bound: total,
        complex_hull_time: asm.complex_hull_time,
        ratio_bound: ratio,
        ratio_source: RatioSource::Formula,
        per_eigenvalue: asm.per_eigenvalue,
        real_bound: asm.real_bound,
        continuous_time_bound,
        special_case: special,
        special_case_bound: special_bound,
        closed_form_bound: closed,
        within_closed_form: within,
        spectrum_precision: s.precision_bits,
        notes: asm.notes,
    }
}

/// Uniform escape-time bound for `x' = Ax`.
pub fn continuous_escape_bound(inst: &Instance, precision_bits: u32) -> Result<EscapeCertificate, BoundError> {
    assert_eq!(inst.mode, Mode::Continuous);
    require_escape(inst)?;
    let b = inst.bit_size();
    let d = inst.dimension() as u64;
    let s = spectrum_with_retry(&inst.a, precision_bits)?;
    let ratio = ratio_bound_formula(b, d);
    let fallback = inverse_eigenvalue_bound(d, b);
    let pi_hi = directed::pi(DEFAULT_BITS).1;

    let mut per = Vec::new();
    let mut best = LogScale::zero();
    for e in &s.eigenvalues {
        if e.is_complex() {
            let theta = e.imag_lo.clone().filter(Signed::is_positive).ok_or(BoundError::UncertifiedTheta)?;
            let t = LogScale::exact(&pi_hi * int(e.index as i64) / &theta);
            per.push(EigenBound { eigenvalue: e.clone(), case: EigenCase::Complex, rate_lower: Some(theta), t_lambda: t, used_fallback: false });
            continue;
        }
        let (case, (rate, used_fallback)) = continuous_case(e, &fallback)?;
        let t = real_case_time(case, e.index, &rate, &ratio);
        best = best.max(&t);
        let rate_lower = (case != EigenCase::Zero).then_some(rate);
        per.push(EigenBound { eigenvalue: e.clone(), case, rate_lower, t_lambda: t, used_fallback });
    }
    let complex_hull_time = complex_hull_time(&s)?;
    let real_bound = best.mul_rational(&int(2));
    let mut notes = base_notes(b, d);
    if s.real().next().is_none() {
        notes.push("no real eigenvalues: the real escape time is taken as 0 and the bound rests on the complex hull time alone".into());
    }
    if let Some(h) = inst.homogenized_from {
        notes.push(format!("affine term folded into dimension {} (original dimension {h})", h + 1));
    }
    let total = complex_hull_time.add(&real_bound);
    let asm = Assembly { complex_hull_time, real_bound, per_eigenvalue: per, notes };
    Ok(finish(inst, &s, ratio, asm, total, None))
}

/// `ln x` with enough precision to certify its sign, for `x != 1`.
fn ln_certified(x: &Rational) -> (Rational, Rational) {
    let mut bits = DEFAULT_BITS;
    loop {
        let (lo, hi) = directed::ln(x, bits);
        if lo.is_positive() || hi.is_negative() || bits >= 1 << 14 {
            return (lo, hi);
        }
        bits *= 2;
    }
}

/// Uniform iteration bound `N = ceil(T) + d` for `x_{n+1} = A x_n`.
pub fn discrete_escape_bound(inst: &Instance, precision_bits: u32) -> Result<EscapeCertificate, BoundError> {
    assert_eq!(inst.mode, Mode::Discrete);
    require_escape(inst)?;
    let b = inst.bit_size();
    let d = inst.dimension() as u64;
    let mut bits = precision_bits;
    loop {
        match discrete_at(inst, b, d, bits) {
            Err(BoundError::UncertifiedSign) if bits < crate::spectrum::MAX_PRECISION => bits *= 2,
            other => return other,
        }
    }
}

fn discrete_at(inst: &Instance, b: u64, d: u64, bits: u32) -> Result<EscapeCertificate, BoundError> {
    let s = spectrum_with_retry(&inst.a, bits)?;
    let ratio = ratio_bound_formula(b, d);
    let fallback = inverse_eigenvalue_bound(d, b);
    let pi_hi = directed::pi(DEFAULT_BITS).1;
    let mut per = Vec::new();
    let mut best = LogScale::zero();
    let mut hull = Rational::zero();
    for e in &s.eigenvalues {
        match e.kind {
            EigenKind::ComplexPair => {
                // rotation angle of the eigenvalue, smallest at the box corner nearest the positive axis
                let y = e.imag_lo.clone().filter(Signed::is_positive).ok_or(BoundError::UncertifiedTheta)?;
                let arg = directed::arg_upper_half(&e.real_hi, &y, DEFAULT_BITS).0;
                let (arg, used_fallback) = rate_or_fallback(arg, &fallback)?;
                let t = &pi_hi * int(e.index as i64) / &arg;
                hull += &t;
                per.push(EigenBound { eigenvalue: e.clone(), case: EigenCase::Complex, rate_lower: Some(arg), t_lambda: LogScale::exact(t), used_fallback });
            }
            EigenKind::PositiveReal => {
                let (case, rate) = if e.is_exact_real() && e.real_lo.is_one() {
                    (EigenCase::Zero, Rational::zero())
                } else if e.real_lo > Rational::one() {
                    (EigenCase::Positive, ln_certified(&e.real_lo).0)
                } else if e.real_hi < Rational::one() {
                    (EigenCase::Negative, -ln_certified(&e.real_hi).1)
                } else {
                    return Err(BoundError::UncertifiedSign);
                };
                let (rate, used_fallback) = if case == EigenCase::Zero { (rate, false) } else { rate_or_fallback(rate, &fallback)? };
                let t = real_case_time(case, e.index, &rate, &ratio);
                best = best.max(&t);
                let rate_lower = (case != EigenCase::Zero).then_some(rate);
                per.push(EigenBound { eigenvalue: e.clone(), case, rate_lower, t_lambda: t, used_fallback });
            }
            EigenKind::NegativeReal | EigenKind::Zero => {
                per.push(EigenBound { eigenvalue: e.clone(), case: EigenCase::CoveredBySteps, rate_lower: None, t_lambda: LogScale::zero(), used_fallback: false });
            }
        }
    }
    let complex_hull_time = LogScale::exact(hull);
    let real_bound = best.mul_rational(&int(2));
    let t_cont = complex_hull_time.add(&real_bound);
    let n = match &t_cont {
        LogScale::Exact(v) => LogScale::exact(Rational::from_integer(ceil(v)) + int(d as i64)),
        // ceil(e^l) + d <= (d + 2) e^l once l >= 0
        LogScale::Exp(l) => LogScale::exp(l.max(&Rational::zero()) + directed::ln_upper(&int(d as i64 + 2))),
    };
    let mut notes = base_notes(b, d);
    notes.push(format!("N = ceil(T) + {d}; negative and zero eigenvalues are covered by the extra steps"));
    if s.complex().next().is_some() {
        notes.push("complex eigenvalues contribute index * pi / arg(lambda) to T".into());
    }
    if let Some(h) = inst.homogenized_from {
        notes.push(format!("affine term folded into dimension {} (original dimension {h})", h + 1));
    }
    let asm = Assembly { complex_hull_time, real_bound, per_eigenvalue: per, notes };
    Ok(finish(inst, &s, ratio, asm, n, Some(t_cont)))
}

/// Dispatches on the instance mode.
pub fn escape_bound(inst: &Instance, precision_bits: u32) -> Result<EscapeCertificate, BoundError> {
    match inst.mode {
        Mode::Continuous => continuous_escape_bound(inst, precision_bits),
        Mode::Discrete => discrete_escape_bound(inst, precision_bits),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::Polytope;
    use crate::matrix::RatMatrix;
    use crate::rational::{rat, to_f64};

    fn ln2_f() -> f64 {
        std::f64::consts::LN_2
    }

    #[test]
    fn ratio_formula() {
        assert_eq!(ratio_bound_formula(1, 1), LogScale::Exp(int(640)));
        assert_eq!(ratio_bound_formula(2, 2), LogScale::Exp(int(20_971_520)));
        assert!(LogScale::exact(int(10_000)).certainly_le(&ratio_bound_formula(11, 3)));
    }

    #[test]
    fn zero_case_values() {
        assert_eq!(t_lambda_zero(1, &LogScale::Exact(int(10))), LogScale::Exact(int(10)));
        assert_eq!(t_lambda_zero(2, &LogScale::Exact(int(10))), LogScale::Exact(int(800)));
        assert_eq!(t_lambda_zero(3, &LogScale::Exact(int(10))), LogScale::Exact(int(21_870_000)));
        let LogScale::Exp(l) = t_lambda_zero(2, &LogScale::Exp(int(100))) else { panic!() };
        // 2 (ln 4 + 100) - ln 2
        assert!((to_f64(&l) - (200.0 + 3.0 * ln2_f())).abs() < 1e-9);
    }

    #[test]
    fn positive_case_values() {
        let b = 3;
        let t = t_lambda_positive(1, &rat(1, 1 << b), &LogScale::Exact(int(2)));
        let v = to_f64(&t.materialize().unwrap());
        assert!(v >= 8.0 * ln2_f() && v < 8.0 * ln2_f() + 1e-12);
        let e_hi = directed::e(DEFAULT_BITS).1;
        let t = t_lambda_positive(1, &int(1), &LogScale::Exact(e_hi.clone())).materialize().unwrap();
        assert!(t >= int(1) && t <= int(1) + rat(1, 1_000_000_000));
        let t = to_f64(&t_lambda_positive(2, &int(1), &LogScale::Exact(e_hi)).materialize().unwrap());
        assert!((t - 2.0 * (2f64.ln() + 1.0)).abs() < 1e-9);
    }

    #[test]
    fn negative_case_values() {
        let e_hi = directed::e(DEFAULT_BITS).1;
        let t = to_f64(&t_lambda_negative(1, &int(1), &LogScale::Exact(e_hi)).materialize().unwrap());
        assert!((t - (4.0 * ln2_f() + 2.0)).abs() < 1e-9);
        let t = to_f64(&t_lambda_negative(1, &int(1), &LogScale::Exact(int(1))).materialize().unwrap());
        assert!((t - 4.0 * ln2_f()).abs() < 1e-12);
        let a = t_lambda_negative(1, &rat(1, 2), &LogScale::Exact(int(3))).materialize().unwrap();
        let b = t_lambda_negative(1, &rat(1, 2), &LogScale::Exact(int(6))).materialize().unwrap();
        assert!((to_f64(&(b - a)) - 4.0 * ln2_f()).abs() < 1e-12);
    }

    #[test]
    fn threshold_examples() {
        let t = to_f64(&log_inequality_threshold(&int(1), &int(1)));
        assert!((t - (4.0 * ln2_f() + 2.0)).abs() < 1e-12);
        let t = to_f64(&log_inequality_threshold(&int(2), &int(1)));
        assert!((t - (8.0 * 4f64.ln() + 2.0)).abs() < 1e-12);
        assert!(t >= 2.0 * t.ln() + 1.0);
    }

    fn cert(rows: Vec<Vec<Rational>>, lo: &[i64], hi: &[i64]) -> EscapeCertificate {
        let a = RatMatrix::from_rows(rows).unwrap();
        let lo: Vec<_> = lo.iter().map(|&x| int(x)).collect();
        let hi: Vec<_> = hi.iter().map(|&x| int(x)).collect();
        let inst = Instance::new(a, Polytope::from_box(&lo, &hi), Mode::Continuous).unwrap();
        continuous_escape_bound(&inst, 128).unwrap()
    }

    #[test]
    fn scalar_example_dominates_true_escape() {
        for b in 1..=6 {
            let c = cert(vec![vec![rat(1, 1 << b)]], &[1], &[2]);
            let true_time = rat(1 << b, 1) * directed::ln2(64).1;
            assert!(LogScale::Exact(true_time).certainly_le(&c.total_bound));
            assert!(c.within_closed_form);
            assert_eq!(c.complex_hull_time, LogScale::zero());
            assert_eq!(c.special_case, SpecialCase::DiagonalizableInvertible);
        }
    }

    #[test]
    fn rotation_uses_pi() {
        let c = cert(vec![vec![int(0), int(-1)], vec![int(1), int(0)]], &[1, 0], &[2, 1]);
        let tc = to_f64(&c.complex_hull_time.materialize().unwrap());
        assert!((std::f64::consts::PI..std::f64::consts::PI + 1e-12).contains(&tc));
        assert_eq!(c.real_bound, LogScale::zero());
        assert!(c.notes.iter().any(|n| n.contains("no real eigenvalues")));
        let c = cert(vec![vec![int(0), int(-2)], vec![int(2), int(0)]], &[1, 0], &[2, 1]);
        let tc = to_f64(&c.complex_hull_time.materialize().unwrap());
        assert!((tc - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn negative_scalar() {
        let c = cert(vec![vec![int(-1)]], &[1], &[2]);
        assert_eq!(c.per_eigenvalue[0].case, EigenCase::Negative);
        assert!(c.total_bound.le_rational(&int(100_000)) || matches!(c.total_bound, LogScale::Exact(_)));
        assert!(LogScale::Exact(directed::ln2(64).1).certainly_le(&c.total_bound));
    }

    #[test]
    fn assembly_identity() {
        let c = cert(vec![vec![int(1), int(0), int(0)], vec![int(0), int(0), int(-1)], vec![int(0), int(1), int(0)]], &[1, -1, -1], &[2, 1, 1]);
        assert_eq!(c.total_bound, c.complex_hull_time.add(&c.real_bound));
        assert!(c.real_bound.certainly_le(&c.total_bound));
        assert!(c.complex_hull_time.certainly_le(&c.total_bound));
    }

    #[test]
    fn trapped_instances_are_refused() {
        let inst = Instance::new(RatMatrix::zeros(1, 1), Polytope::from_box(&[int(0)], &[int(1)]), Mode::Continuous).unwrap();
        assert_eq!(continuous_escape_bound(&inst, 128), Err(BoundError::Precondition(Outcome::TrappedPointExists)));
    }

    #[test]
    fn discrete_examples() {
        let inst = Instance::new(RatMatrix::from_rows(vec![vec![int(2)]]).unwrap(), Polytope::from_box(&[int(1)], &[int(3)]), Mode::Discrete).unwrap();
        let c = discrete_escape_bound(&inst, 128).unwrap();
        assert_eq!(c.per_eigenvalue[0].case, EigenCase::Positive);
        assert!(LogScale::Exact(int(2)).certainly_le(&c.total_bound));
        let inst = Instance::new(RatMatrix::from_rows(vec![vec![rat(1, 2)]]).unwrap(), Polytope::from_box(&[int(1)], &[int(2)]), Mode::Discrete).unwrap();
        let c = discrete_escape_bound(&inst, 128).unwrap();
        assert_eq!(c.per_eigenvalue[0].case, EigenCase::Negative);
        assert!(LogScale::Exact(int(2)).certainly_le(&c.total_bound));
    }

    #[test]
    fn discrete_rotation_counts_its_angle() {
        // rotation by the angle of 3 + 4i, about 0.927 radians, scaled by 1/5
        let a = RatMatrix::from_rows(vec![vec![rat(3, 5), rat(-4, 5)], vec![rat(4, 5), rat(3, 5)]]).unwrap();
        let inst = Instance::new(a, Polytope::from_box(&[int(1), int(-1)], &[int(2), int(1)]), Mode::Discrete).unwrap();
        let c = discrete_escape_bound(&inst, 128).unwrap();
        let tc = to_f64(&c.complex_hull_time.materialize().unwrap());
        assert!((tc - std::f64::consts::PI / (4f64).atan2(3.0)).abs() < 1e-9);
        assert_eq!(c.total_bound, LogScale::Exact(Rational::from_integer(ceil(&c.continuous_time_bound.clone().unwrap().materialize().unwrap())) + int(2)));
    }
}
