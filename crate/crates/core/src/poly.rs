//! Univariate polynomials over Q and Z, and the matrix polynomials built
//! from them (characteristic and minimal polynomial, squarefree structure).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::matrix::{gauss_solve, LinalgError, RatMatrix, RatVector};
use crate::rational::Rational;

/// Polynomial with rational coefficients, ascending degree, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<Rational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        QPoly::new(vec![c])
    }

    /// `x - r`
    pub fn linear_root(r: Rational) -> Self {
        QPoly::new(vec![-r, Rational::one()])
    }

    pub fn monomial(deg: usize) -> Self {
        let mut c = vec![Rational::zero(); deg + 1];
        c[deg] = Rational::one();
        QPoly { coeffs: c }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn monic(&self) -> QPoly {
        match self.leading() {
            None => QPoly::zero(),
            Some(lc) => {
                let inv = lc.recip();
                QPoly::new(self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    pub fn scale(&self, k: &Rational) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = Rational::zero();
        QPoly::new((0..n).map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z)).collect())
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    pub fn pow(&self, e: usize) -> QPoly {
        let mut acc = QPoly::constant(Rational::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &QPoly) -> (QPoly, QPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lc_inv = divisor.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let q = &rem[k + dd] * &lc_inv;
            if !q.is_zero() {
                for (j, c) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &q * c;
                }
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        (QPoly::new(quot), QPoly::new(rem))
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * Rational::from_integer(BigInt::from(i))).collect())
    }

    /// Monic greatest common divisor (zero when both inputs are zero).
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// `p(A)` by Horner's scheme.
    pub fn eval_matrix(&self, a: &RatMatrix) -> RatMatrix {
        let n = a.rows();
        let mut acc = RatMatrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(a).add(&RatMatrix::identity(n).scale(c));
        }
        acc
    }

    /// `p(-x)`
    pub fn reflect(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() }).collect())
    }

    pub fn divides(&self, other: &QPoly) -> bool {
        other.div_rem(self).1.is_zero()
    }
}

/// Integer polynomial, ascending degree, no trailing zero coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPolynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn to_qpoly(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| Rational::from_integer(c.clone())).collect())
    }

    /// Clears denominators with their lcm, divides out the content and makes
    /// the leading coefficient positive. Returns the polynomial together with
    /// the scale `s` such that `result = s * p`.
    pub fn primitive_of(p: &QPoly) -> (IntPolynomial, Rational) {
        if p.is_zero() {
            return (IntPolynomial::default(), Rational::one());
        }
        let lcm = p.coeffs().iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = p.coeffs().iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
        let mut content = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if p.leading().is_some_and(Signed::is_negative) {
            content = -content;
        }
        let out: Vec<BigInt> = ints.into_iter().map(|c| c / &content).collect();
        (IntPolynomial::new(out), Rational::new(lcm, content))
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Rational::from_integer(c.clone());
        }
        acc
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || other.is_zero() {
            return IntPolynomial::default();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }

    /// Maximum absolute coefficient.
    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let show_mag = !mag.is_one() || i == 0;
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// An integer polynomial obtained from a monic rational one:
/// `poly = scale * monic`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClearedPolynomial {
    pub poly: IntPolynomial,
    pub monic: QPoly,
    pub scale: Rational,
}

impl ClearedPolynomial {
    fn from_monic(monic: QPoly) -> Self {
        let (poly, scale) = IntPolynomial::primitive_of(&monic);
        ClearedPolynomial { poly, monic, scale }
    }
}

fn require_square(a: &RatMatrix) -> Result<(), LinalgError> {
    if a.is_square() {
        Ok(())
    } else {
        Err(LinalgError::NotSquare { rows: a.rows(), cols: a.cols() })
    }
}

/// `det(xI - A)` by the Faddeev–LeVerrier recurrence.
pub fn char_poly(a: &RatMatrix) -> Result<ClearedPolynomial, LinalgError> {
    require_square(a)?;
    let n = a.rows();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut m = RatMatrix::zeros(n, n);
    for k in 1..=n {
        m = a.mul(&m).add(&RatMatrix::identity(n).scale(&coeffs[n - k + 1]));
        let am = a.mul(&m);
        coeffs[n - k] = -am.trace() / Rational::from_integer(BigInt::from(k));
    }
    Ok(ClearedPolynomial::from_monic(QPoly::new(coeffs)))
}

/// Least-degree monic annihilating polynomial, found as the first linear
/// dependency among the vectorised powers `I, A, A^2, ...`.
pub fn min_poly(a: &RatMatrix) -> Result<ClearedPolynomial, LinalgError> {
    require_square(a)?;
    let n = a.rows();
    let vectorise = |m: &RatMatrix| RatVector(m.entries().to_vec());
    let mut powers = vec![vectorise(&RatMatrix::identity(n))];
    let mut current = RatMatrix::identity(n);
    for k in 1..=n {
        current = current.mul(a);
        let target = vectorise(&current);
        let basis = RatMatrix::from_columns(n * n, &powers);
        if let Ok(sol) = gauss_solve(&basis, &target) {
            // A^k = sum c_i A^i, so m(x) = x^k - sum c_i x^i
            let mut coeffs: Vec<Rational> = sol.particular().iter().map(|c| -c.clone()).collect();
            coeffs.push(Rational::one());
            debug_assert_eq!(coeffs.len(), k + 1);
            return Ok(ClearedPolynomial::from_monic(QPoly::new(coeffs)));
        }
        powers.push(target);
    }
    unreachable!("Cayley-Hamilton guarantees a dependency by degree n")
}

/// Yun's squarefree decomposition. Factors are primitive, pairwise coprime
/// and squarefree; `p` equals their product with multiplicities up to a
/// nonzero constant.
pub fn squarefree_decomposition(p: &IntPolynomial) -> Vec<(IntPolynomial, usize)> {
    assert!(!p.is_zero(), "squarefree decomposition of the zero polynomial");
    let a = p.to_qpoly();
    if a.degree() == Some(0) {
        return Vec::new();
    }
    let b = a.derivative();
    let c = a.gcd(&b);
    let mut w = a.div_rem(&c).0;
    let mut y = b.div_rem(&c).0;
    let mut z = y.sub(&w.derivative());
    let mut out = Vec::new();
    let mut i = 1;
    while w.degree().is_some_and(|d| d > 0) {
        let g = w.gcd(&z);
        if g.degree().is_some_and(|d| d > 0) {
            out.push((IntPolynomial::primitive_of(&g).0, i));
        }
        w = w.div_rem(&g).0;
        y = z.div_rem(&g).0;
        z = y.sub(&w.derivative());
        i += 1;
    }
    out
}

/// Product of the distinct irreducible factors, as a primitive polynomial.
pub fn squarefree_part(p: &IntPolynomial) -> IntPolynomial {
    let q = p.to_qpoly();
    let g = q.gcd(&q.derivative());
    IntPolynomial::primitive_of(&q.div_rem(&g).0).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn section42() -> RatMatrix {
        RatMatrix::from_rows(vec![
            vec![int(1), int(1), int(0)],
            vec![int(0), int(1), int(1)],
            vec![int(0), int(0), rat(101, 100)],
        ])
        .unwrap()
    }

    fn ip(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn char_poly_examples() {
        assert_eq!(char_poly(&RatMatrix::zeros(2, 2)).unwrap().poly, ip(&[0, 0, 1]));
        // (x-1)^2 (100x - 101) = 100x^3 - 301x^2 + 302x - 101
        assert_eq!(char_poly(&section42()).unwrap().poly, ip(&[-101, 302, -301, 100]));
        let rot = RatMatrix::from_rows(vec![vec![int(0), int(-1)], vec![int(1), int(0)]]).unwrap();
        assert_eq!(char_poly(&rot).unwrap().poly, ip(&[1, 0, 1]));
    }

    #[test]
    fn cleared_scale_relation() {
        let cp = char_poly(&section42()).unwrap();
        assert_eq!(cp.monic.scale(&cp.scale), cp.poly.to_qpoly());
        assert_eq!(cp.scale, int(100));
    }

    #[test]
    fn min_poly_examples() {
        assert_eq!(min_poly(&RatMatrix::identity(3)).unwrap().poly, ip(&[-1, 1]));
        assert_eq!(min_poly(&section42()).unwrap().poly, ip(&[-101, 302, -301, 100]));
        assert_eq!(min_poly(&RatMatrix::diagonal(&[int(2), int(2)])).unwrap().poly, ip(&[-2, 1]));
        assert_eq!(min_poly(&RatMatrix::zeros(3, 3)).unwrap().poly, ip(&[0, 1]));
        // (A - I)(A - 1.01 I) is nonzero, so the degree-2 candidate fails
        let a = section42();
        let n = 3;
        let prod = a.sub(&RatMatrix::identity(n)).mul(&a.sub(&RatMatrix::identity(n).scale(&rat(101, 100))));
        assert!(!prod.is_zero());
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_decomposition(&ip(&[0, 0, 1])), vec![(ip(&[0, 1]), 2)]);
        assert_eq!(
            squarefree_decomposition(&ip(&[-101, 302, -301, 100])),
            vec![(ip(&[-101, 100]), 1), (ip(&[-1, 1]), 2)]
        );
        assert_eq!(squarefree_decomposition(&ip(&[1, 0, 1])), vec![(ip(&[1, 0, 1]), 1)]);
        assert!(squarefree_decomposition(&ip(&[5])).is_empty());
    }

    #[test]
    fn division_and_gcd() {
        let p = QPoly::new(vec![int(-1), int(0), int(1)]);
        let q = QPoly::linear_root(int(1));
        let (quo, rem) = p.div_rem(&q);
        assert!(rem.is_zero());
        assert_eq!(quo, QPoly::linear_root(int(-1)));
        assert_eq!(p.gcd(&q), q);
        assert!(q.divides(&p));
    }

    #[test]
    fn display() {
        assert_eq!(ip(&[-101, 302, -301, 100]).to_string(), "100x^3 - 301x^2 + 302x - 101");
        assert_eq!(ip(&[1, 0, 1]).to_string(), "x^2 + 1");
        assert_eq!(ip(&[0, -1]).to_string(), "-x");
    }
}
