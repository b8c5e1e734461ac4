//! Certified eigenvalue enclosures with indices and algebraic multiplicities.
//!
//! The characteristic and minimal polynomials are split into squarefree
//! parts; `gcd(f_k, g_j)` collects the eigenvalues of algebraic multiplicity
//! `k` and index `j`. Each such factor is isolated on its own.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{LinalgError, RatMatrix};
use crate::poly::{char_poly, min_poly, squarefree_decomposition, IntPolynomial};
use crate::rational::Rational;
use crate::roots::{isolate_complex_roots, isolate_real_roots, RootError};

pub const DEFAULT_PRECISION: u32 = 128;
pub const MAX_PRECISION: u32 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectrumError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("eigenvalue enclosures could not be separated at {precision_bits} bits")]
    CertificationFailure { precision_bits: u32 },
}

impl From<RootError> for SpectrumError {
    fn from(e: RootError) -> Self {
        match e {
            RootError::CertificationFailure { precision_bits } => SpectrumError::CertificationFailure { precision_bits },
            RootError::ZeroPolynomial => unreachable!("characteristic polynomials are monic"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenKind {
    Zero,
    PositiveReal,
    NegativeReal,
    ComplexPair,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenvalueEnclosure {
    pub kind: EigenKind,
    #[serde(with = "crate::serde_rational")]
    pub real_lo: Rational,
    #[serde(with = "crate::serde_rational")]
    pub real_hi: Rational,
    /// Upper-half-plane imaginary part, for complex pairs only.
    #[serde(with = "crate::serde_rational::option", default, skip_serializing_if = "Option::is_none")]
    pub imag_lo: Option<Rational>,
    #[serde(with = "crate::serde_rational::option", default, skip_serializing_if = "Option::is_none")]
    pub imag_hi: Option<Rational>,
    pub index: usize,
    pub alg_multiplicity: usize,
    /// Squarefree integer polynomial the eigenvalue is a root of.
    pub factor: String,
}

impl EigenvalueEnclosure {
    pub fn is_exact_real(&self) -> bool {
        self.kind != EigenKind::ComplexPair && self.real_lo == self.real_hi
    }

    pub fn is_complex(&self) -> bool {
        self.kind == EigenKind::ComplexPair
    }

    /// Lower bound on `|lambda|` for real eigenvalues.
    pub fn abs_lower(&self) -> Rational {
        match self.kind {
            EigenKind::PositiveReal => self.real_lo.clone(),
            EigenKind::NegativeReal => -self.real_hi.clone(),
            _ => Rational::zero(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RealSign {
    Negative,
    Zero,
    Positive,
    ZeroUncertified,
}

/// Sign of the real part, certified from the enclosure.
pub fn real_part_sign(e: &EigenvalueEnclosure) -> RealSign {
    if e.real_lo.is_zero() && e.real_hi.is_zero() {
        RealSign::Zero
    } else if e.real_hi.is_negative() {
        RealSign::Negative
    } else if e.real_lo.is_positive() {
        RealSign::Positive
    } else {
        RealSign::ZeroUncertified
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<EigenvalueEnclosure>,
    pub dimension: usize,
    pub precision_bits: u32,
}

impl Spectrum {
    pub fn has_zero(&self) -> bool {
        self.eigenvalues.iter().any(|e| e.kind == EigenKind::Zero)
    }

    /// Every index is 1, i.e. the minimal polynomial is squarefree.
    pub fn is_diagonalizable(&self) -> bool {
        self.eigenvalues.iter().all(|e| e.index == 1)
    }

    pub fn real(&self) -> impl Iterator<Item = &EigenvalueEnclosure> {
        self.eigenvalues.iter().filter(|e| !e.is_complex())
    }

    pub fn complex(&self) -> impl Iterator<Item = &EigenvalueEnclosure> {
        self.eigenvalues.iter().filter(|e| e.is_complex())
    }

    /// Sum of algebraic multiplicities, pairs counted twice.
    pub fn counted_dimension(&self) -> usize {
        self.eigenvalues.iter().map(|e| if e.is_complex() { 2 * e.alg_multiplicity } else { e.alg_multiplicity }).sum()
    }
}

/// Pairs the squarefree parts of the characteristic and minimal polynomials
/// into factors with known `(alg_multiplicity, index)`.
fn structured_factors(a: &RatMatrix) -> Result<Vec<(IntPolynomial, usize, usize)>, LinalgError> {
    let cp = char_poly(a)?;
    let mp = min_poly(a)?;
    let cs = squarefree_decomposition(&cp.poly);
    let ms = squarefree_decomposition(&mp.poly);
    let mut out = Vec::new();
    for (f, k) in &cs {
        for (g, j) in &ms {
            let h = f.to_qpoly().gcd(&g.to_qpoly());
            if h.degree().is_some_and(|d| d > 0) {
                out.push((IntPolynomial::primitive_of(&h).0, *k, *j));
            }
        }
    }
    Ok(out)
}

fn overlaps(a: (&Rational, &Rational), b: (&Rational, &Rational)) -> bool {
    a.0 <= b.1 && b.0 <= a.1
}

/// Spectrum at a fixed working precision.
pub fn spectrum(a: &RatMatrix, precision_bits: u32) -> Result<Spectrum, SpectrumError> {
    let d = a.rows();
    let mut eigenvalues = Vec::new();
    for (h, alg, index) in structured_factors(a)? {
        let factor = h.to_string();
        for r in isolate_real_roots(&h, precision_bits)? {
            let kind = if r.lo.is_zero() && r.hi.is_zero() {
                EigenKind::Zero
            } else if r.lo.is_positive() {
                EigenKind::PositiveReal
            } else if r.hi.is_negative() {
                EigenKind::NegativeReal
            } else {
                return Err(SpectrumError::CertificationFailure { precision_bits });
            };
            eigenvalues.push(EigenvalueEnclosure {
                kind,
                real_lo: r.lo,
                real_hi: r.hi,
                imag_lo: None,
                imag_hi: None,
                index,
                alg_multiplicity: alg,
                factor: factor.clone(),
            });
        }
        for c in isolate_complex_roots(&h, precision_bits)? {
            if !c.im_lo.is_positive() {
                return Err(SpectrumError::CertificationFailure { precision_bits });
            }
            eigenvalues.push(EigenvalueEnclosure {
                kind: EigenKind::ComplexPair,
                real_lo: c.re_lo,
                real_hi: c.re_hi,
                imag_lo: Some(c.im_lo),
                imag_hi: Some(c.im_hi),
                index,
                alg_multiplicity: alg,
                factor: factor.clone(),
            });
        }
    }
    eigenvalues.sort_by(|x, y| {
        (x.is_complex(), &x.real_lo, &x.imag_lo).cmp(&(y.is_complex(), &y.real_lo, &y.imag_lo))
    });
    // enclosures from different factors must not touch
    for i in 0..eigenvalues.len() {
        for j in i + 1..eigenvalues.len() {
            let (x, y) = (&eigenvalues[i], &eigenvalues[j]);
            if x.is_complex() != y.is_complex() {
                continue;
            }
            let re = overlaps((&x.real_lo, &x.real_hi), (&y.real_lo, &y.real_hi));
            let im = match (&x.imag_lo, &x.imag_hi, &y.imag_lo, &y.imag_hi) {
                (Some(a), Some(b), Some(c), Some(e)) => overlaps((a, b), (c, e)),
                _ => true,
            };
            if re && im {
                return Err(SpectrumError::CertificationFailure { precision_bits });
            }
        }
    }
    let s = Spectrum { eigenvalues, dimension: d, precision_bits };
    if s.counted_dimension() != d {
        return Err(SpectrumError::CertificationFailure { precision_bits });
    }
    Ok(s)
}

/// Spectrum starting at `start_bits`, doubling the precision on certification
/// failure up to [`MAX_PRECISION`].
pub fn spectrum_with_retry(a: &RatMatrix, start_bits: u32) -> Result<Spectrum, SpectrumError> {
    let mut bits = start_bits.max(16);
    loop {
        match spectrum(a, bits) {
            Err(SpectrumError::CertificationFailure { .. }) if bits < MAX_PRECISION => bits = (bits * 2).min(MAX_PRECISION),
            other => return other,
        }
    }
}
