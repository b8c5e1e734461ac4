//! Nonnegative upper bounds that may be far too large to write down.
//!
//! A [`LogScale`] is either an exact rational or `exp(l)` for an exact
//! rational exponent `l`. Every operation rounds upward, so a value produced
//! here is always at least the quantity it stands for.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::directed::{self, DEFAULT_BITS};
use crate::rational::{int, mul_pow2, to_f64, Rational};

/// Exact values whose numerator or denominator outgrows this many bits are
/// moved to log form.
const EXACT_BIT_LIMIT: u64 = 1 << 16;

/// Below this exponent `exp(l)` is small enough to materialize.
const MATERIALIZE_LIMIT: i64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LogScale {
    Exact(Rational),
    Exp(Rational),
}

#[derive(Serialize, Deserialize)]
struct Wire {
    form: String,
    #[serde(with = "crate::serde_rational")]
    value: Rational,
}

impl Serialize for LogScale {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let (form, value) = match self {
            LogScale::Exact(v) => ("exact", v),
            LogScale::Exp(l) => ("exp", l),
        };
        Wire { form: form.to_string(), value: value.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LogScale {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = Wire::deserialize(d)?;
        match w.form.as_str() {
            "exact" => Ok(LogScale::Exact(w.value)),
            "exp" => Ok(LogScale::Exp(w.value)),
            other => Err(serde::de::Error::custom(format!("unknown log-scale form {other:?}"))),
        }
    }
}

impl LogScale {
    pub fn zero() -> Self {
        LogScale::Exact(Rational::zero())
    }

    pub fn exact(v: Rational) -> Self {
        debug_assert!(!v.is_negative());
        LogScale::Exact(v).compact()
    }

    pub fn exp(l: Rational) -> Self {
        LogScale::Exp(l)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, LogScale::Exact(v) if v.is_zero())
    }

    fn compact(self) -> Self {
        match self {
            LogScale::Exact(v) if v.numer().bits() > EXACT_BIT_LIMIT || v.denom().bits() > EXACT_BIT_LIMIT => {
                LogScale::Exp(directed::ln_upper(&v))
            }
            other => other,
        }
    }

    /// Upper bound on the natural log; `None` for zero.
    pub fn ln_upper(&self) -> Option<Rational> {
        match self {
            LogScale::Exact(v) if v.is_zero() => None,
            LogScale::Exact(v) => Some(directed::ln_upper(v)),
            LogScale::Exp(l) => Some(l.clone()),
        }
    }

    /// Lower bound on the natural log of the represented number; `None` for zero.
    pub fn ln_lower(&self) -> Option<Rational> {
        match self {
            LogScale::Exact(v) if v.is_zero() => None,
            LogScale::Exact(v) => Some(directed::ln_lower(v)),
            LogScale::Exp(l) => Some(l.clone()),
        }
    }

    pub fn add(&self, other: &LogScale) -> LogScale {
        match (self, other) {
            (LogScale::Exact(a), LogScale::Exact(b)) => LogScale::exact(a + b),
            _ if self.is_zero() => other.clone(),
            _ if other.is_zero() => self.clone(),
            _ => {
                let a = self.ln_upper().expect("nonzero");
                let b = other.ln_upper().expect("nonzero");
                let (big, small) = if a >= b { (a, b) } else { (b, a) };
                // ln(e^big + e^small) <= big + e^(small - big)
                let gap = &small - &big;
                let bump = if gap < int(-64) { mul_pow2(&Rational::one(), -64) } else { directed::exp(&gap, DEFAULT_BITS).1 };
                LogScale::Exp(big + bump)
            }
        }
    }

    pub fn mul_rational(&self, k: &Rational) -> LogScale {
        debug_assert!(!k.is_negative());
        if k.is_zero() {
            return LogScale::zero();
        }
        match self {
            LogScale::Exact(v) => LogScale::exact(v * k),
            LogScale::Exp(l) => LogScale::Exp(l + directed::ln_upper(k)),
        }
    }

    pub fn max(&self, other: &LogScale) -> LogScale {
        match (self, other) {
            (LogScale::Exact(a), LogScale::Exact(b)) => LogScale::Exact(a.max(b).clone()),
            _ if self.is_zero() => other.clone(),
            _ if other.is_zero() => self.clone(),
            (LogScale::Exp(a), LogScale::Exp(b)) => LogScale::Exp(a.max(b).clone()),
            _ => {
                let a = self.ln_upper().expect("nonzero");
                let b = other.ln_upper().expect("nonzero");
                LogScale::Exp(a.max(b))
            }
        }
    }

    /// `Some(Less | Equal)` only when `self <= other` is certain, `Some(Greater)`
    /// only when `self > other` is certain, `None` when the directed bounds
    /// cannot separate them.
    pub fn compare(&self, other: &LogScale) -> Option<Ordering> {
        if let (LogScale::Exact(a), LogScale::Exact(b)) = (self, other) {
            return Some(a.cmp(b));
        }
        if self.is_zero() {
            return Some(if other.is_zero() { Ordering::Equal } else { Ordering::Less });
        }
        if other.is_zero() {
            return Some(Ordering::Greater);
        }
        let (su, sl) = (self.ln_upper()?, self.ln_lower()?);
        let (ou, ol) = (other.ln_upper()?, other.ln_lower()?);
        if su <= ol {
            Some(if su == ol && sl == ou { Ordering::Equal } else { Ordering::Less })
        } else if sl > ou {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    /// Certainly `self <= other`.
    pub fn certainly_le(&self, other: &LogScale) -> bool {
        matches!(self.compare(other), Some(Ordering::Less | Ordering::Equal))
    }

    /// Certainly `self <= x` for a rational `x`.
    pub fn le_rational(&self, x: &Rational) -> bool {
        if x.is_negative() {
            return false;
        }
        self.certainly_le(&LogScale::Exact(x.clone()))
    }

    /// A rational upper bound when one of manageable size exists.
    pub fn materialize(&self) -> Option<Rational> {
        match self {
            LogScale::Exact(v) => Some(v.clone()),
            LogScale::Exp(l) if *l <= int(MATERIALIZE_LIMIT) => Some(directed::exp(l, DEFAULT_BITS).1),
            LogScale::Exp(_) => None,
        }
    }

    /// Decimal logarithm, for display only.
    pub fn log10_approx(&self) -> f64 {
        match self {
            LogScale::Exact(v) if v.is_zero() => f64::NEG_INFINITY,
            LogScale::Exact(v) => {
                let f = to_f64(v);
                if f.is_finite() && f > 0.0 {
                    f.log10()
                } else {
                    to_f64(&directed::ln_upper(v)) / std::f64::consts::LN_10
                }
            }
            LogScale::Exp(l) => to_f64(l) / std::f64::consts::LN_10,
        }
    }

    /// Scientific notation such as `3.1416e0` or `10^1389.7`.
    pub fn scientific(&self) -> String {
        let lg = self.log10_approx();
        if lg == f64::NEG_INFINITY {
            return "0".to_string();
        }
        if lg.abs() < 300.0 {
            let v = 10f64.powf(lg);
            return format!("{v:.6e}");
        }
        let e = lg.floor();
        let m = 10f64.powf(lg - e);
        format!("{m:.4}e{e}")
    }
}

impl fmt::Display for LogScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogScale::Exact(v) if v.denom().is_one() || v.numer().bits() < 40 => write!(f, "{v} (~{})", self.scientific()),
            LogScale::Exact(_) => write!(f, "~{}", self.scientific()),
            LogScale::Exp(l) => {
                if l.numer().bits() + l.denom().bits() < 80 {
                    write!(f, "exp({l}) (~{})", self.scientific())
                } else {
                    write!(f, "exp(~{:.6e}) (~{})", to_f64(l), self.scientific())
                }
            }
        }
    }
}
