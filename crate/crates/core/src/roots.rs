//! Certified isolation of polynomial roots.
//!
//! Real roots come from Sturm sequences and bisection over exact rationals,
//! with rational roots pinned down exactly. Non-real roots are located with
//! Aberth iteration and then certified with Weierstrass inclusion disks:
//! when the disks `|z - z_i| <= n |W_i|` are pairwise disjoint, each one holds
//! exactly one root.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ball::Dyadic;
use crate::poly::{squarefree_decomposition, IntPolynomial, QPoly};
use crate::rational::{ceil, mul_pow2, simplest_between, to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("root isolation needs a nonzero polynomial")]
    ZeroPolynomial,
    #[error("could not certify complex roots at {precision_bits} bits")]
    CertificationFailure { precision_bits: u32 },
}

/// One distinct real root in `[lo, hi]`; `lo == hi` when the root is rational.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealRoot {
    #[serde(with = "crate::serde_rational")]
    pub lo: Rational,
    #[serde(with = "crate::serde_rational")]
    pub hi: Rational,
    pub multiplicity: usize,
}

impl RealRoot {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }
}

/// One distinct upper-half-plane root inside the box `re x im`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexRoot {
    #[serde(with = "crate::serde_rational")]
    pub re_lo: Rational,
    #[serde(with = "crate::serde_rational")]
    pub re_hi: Rational,
    #[serde(with = "crate::serde_rational")]
    pub im_lo: Rational,
    #[serde(with = "crate::serde_rational")]
    pub im_hi: Rational,
    pub multiplicity: usize,
}

/// Integer multiple of `p` by a positive rational, so signs are unchanged.
fn positive_integer_multiple(p: &QPoly) -> IntPolynomial {
    let lcm = p.coeffs().iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = p.coeffs().iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if g.is_zero() {
        return IntPolynomial::default();
    }
    IntPolynomial::new(ints.into_iter().map(|c| c / &g).collect())
}

/// Sign of `p(x)` via the homogenised integer sum.
fn sign_at(p: &IntPolynomial, x: &Rational) -> i8 {
    let (num, den) = (x.numer(), x.denom());
    let n = p.coeffs().len();
    let mut acc = BigInt::zero();
    let mut num_pow = BigInt::one();
    let mut den_pows = vec![BigInt::one(); n];
    for i in 1..n {
        den_pows[i] = &den_pows[i - 1] * den;
    }
    for (i, c) in p.coeffs().iter().enumerate() {
        if !c.is_zero() {
            acc += c * &num_pow * &den_pows[n - 1 - i];
        }
        num_pow *= num;
    }
    if acc.is_positive() {
        1
    } else if acc.is_negative() {
        -1
    } else {
        0
    }
}

struct Sturm {
    seq: Vec<IntPolynomial>,
}

impl Sturm {
    fn new(f: &IntPolynomial) -> Sturm {
        let mut seq = vec![f.clone()];
        let mut prev = f.to_qpoly();
        let mut cur = prev.derivative();
        while !cur.is_zero() {
            seq.push(positive_integer_multiple(&cur));
            let (_, r) = prev.div_rem(&cur);
            prev = cur;
            cur = r.scale(&-Rational::one());
        }
        Sturm { seq }
    }

    fn variations_at(&self, x: &Rational) -> usize {
        count_changes(self.seq.iter().map(|p| sign_at(p, x)))
    }

    fn variations_at_infinity(&self, negative: bool) -> usize {
        count_changes(self.seq.iter().map(|p| {
            let s: i8 = if p.leading().is_some_and(Signed::is_negative) { -1 } else { 1 };
            let odd = p.degree().unwrap_or(0) % 2 == 1;
            if negative && odd {
                -s
            } else {
                s
            }
        }))
    }
}

fn count_changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut n = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

/// Power of two strictly above the modulus of every root (Cauchy bound).
fn root_bound(f: &IntPolynomial) -> Rational {
    let lc = f.leading().expect("nonzero").abs();
    let max = f.coeffs().iter().map(|c| c.abs()).max().unwrap_or_default();
    let bound = Rational::new(max, lc) + Rational::one();
    let k = ceil(&bound).bits() as i64;
    mul_pow2(&Rational::one(), k)
}

fn half(a: &Rational, b: &Rational) -> Rational {
    mul_pow2(&(a + b), -1)
}

/// Isolates the roots of the squarefree `f` inside `(a, b]` and refines each
/// to width at most `2^-bits`, returning exact point intervals for rational
/// roots.
fn isolate_squarefree(f: &IntPolynomial, a: Rational, b: Rational, bits: u32) -> Vec<(Rational, Rational)> {
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let sturm = Sturm::new(f);
    let mut isolated = Vec::new();
    let mut stack = vec![(a.clone(), b.clone(), sturm.variations_at(&a), sturm.variations_at(&b))];
    while let Some((lo, hi, vlo, vhi)) = stack.pop() {
        let count = vlo.saturating_sub(vhi);
        if count == 0 {
            continue;
        }
        if count == 1 {
            isolated.push((lo, hi));
            continue;
        }
        let mid = half(&lo, &hi);
        let vmid = sturm.variations_at(&mid);
        stack.push((mid.clone(), hi, vmid, vhi));
        stack.push((lo, mid, vlo, vmid));
    }
    let lc_bits = f.leading().expect("nonzero").bits() as i64;
    let width_bits = (bits as i64).max(2 * lc_bits + 2);
    let target = mul_pow2(&Rational::one(), -width_bits);
    let mut out: Vec<(Rational, Rational)> = isolated.into_iter().map(|(lo, hi)| refine(f, lo, hi, &target)).collect();
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

/// Refines an interval `(lo, hi]` holding exactly one simple root.
fn refine(f: &IntPolynomial, mut lo: Rational, mut hi: Rational, target: &Rational) -> (Rational, Rational) {
    let s_hi = sign_at(f, &hi);
    if s_hi == 0 {
        return (hi.clone(), hi);
    }
    while &hi - &lo > *target {
        let mid = half(&lo, &hi);
        let s = sign_at(f, &mid);
        if s == 0 {
            return (mid.clone(), mid);
        }
        if s == s_hi {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // width is below 1/lc^2, so the simplest rational in the interval is the
    // only candidate for a rational root
    let q = simplest_between(&lo, &hi);
    if sign_at(f, &q) == 0 {
        return (q.clone(), q);
    }
    (lo, hi)
}

/// All distinct real roots of `p` with multiplicities, sorted increasingly.
pub fn isolate_real_roots(p: &IntPolynomial, precision_bits: u32) -> Result<Vec<RealRoot>, RootError> {
    if p.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for (f, k) in squarefree_decomposition(p) {
        if f.degree().unwrap_or(0) == 0 {
            continue;
        }
        let m = root_bound(&f);
        for (lo, hi) in isolate_squarefree(&f, -m.clone(), m, precision_bits) {
            out.push(RealRoot { lo, hi, multiplicity: k });
        }
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    Ok(out)
}

/// Number of distinct real roots of a squarefree polynomial.
fn real_root_count(f: &IntPolynomial) -> usize {
    let s = Sturm::new(f);
    s.variations_at_infinity(true).saturating_sub(s.variations_at_infinity(false))
}

/// All distinct roots of `p` in the open upper half plane with multiplicities.
pub fn isolate_complex_roots(p: &IntPolynomial, precision_bits: u32) -> Result<Vec<ComplexRoot>, RootError> {
    if p.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for (f, k) in squarefree_decomposition(p) {
        for mut root in complex_roots_squarefree(&f, precision_bits)? {
            root.multiplicity = k;
            out.push(root);
        }
    }
    out.sort_by(|x, y| x.re_lo.cmp(&y.re_lo).then(x.im_lo.cmp(&y.im_lo)));
    Ok(out)
}

/// Real and imaginary parts of `f(iy)` as polynomials in `y`.
fn split_on_imaginary_axis(f: &IntPolynomial) -> (QPoly, QPoly) {
    let mut re = Vec::new();
    let mut im = Vec::new();
    for (j, c) in f.coeffs().iter().enumerate() {
        let c = Rational::from_integer(c.clone());
        let (r, i) = match j % 4 {
            0 => (c, Rational::zero()),
            1 => (Rational::zero(), c),
            2 => (-c, Rational::zero()),
            _ => (Rational::zero(), -c),
        };
        re.push(r);
        im.push(i);
    }
    (QPoly::new(re), QPoly::new(im))
}

fn complex_roots_squarefree(f: &IntPolynomial, bits: u32) -> Result<Vec<ComplexRoot>, RootError> {
    let n = f.degree().unwrap_or(0);
    if n < 2 {
        return Ok(Vec::new());
    }
    let real = real_root_count(f);
    let (re, im) = split_on_imaginary_axis(f);
    let h = re.gcd(&im);
    let mut out = Vec::new();
    if h.degree().unwrap_or(0) > 0 {
        let h = positive_integer_multiple(&h);
        let m = root_bound(&h);
        for (lo, hi) in isolate_squarefree(&h, Rational::zero(), m, bits) {
            out.push(ComplexRoot {
                re_lo: Rational::zero(),
                re_hi: Rational::zero(),
                im_lo: lo,
                im_hi: hi,
                multiplicity: 1,
            });
        }
    }
    let remaining = n - real - 2 * out.len();
    debug_assert!(remaining.is_multiple_of(2));
    let wanted = remaining / 2;
    if wanted == 0 {
        return Ok(out);
    }
    out.extend(certified_off_axis_roots(f, wanted, bits)?);
    Ok(out)
}

#[derive(Debug, Clone, Copy)]
struct Cf {
    re: f64,
    im: f64,
}

impl Cf {
    fn add(self, o: Cf) -> Cf {
        Cf { re: self.re + o.re, im: self.im + o.im }
    }
    fn sub(self, o: Cf) -> Cf {
        Cf { re: self.re - o.re, im: self.im - o.im }
    }
    fn mul(self, o: Cf) -> Cf {
        Cf { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
    fn div(self, o: Cf) -> Cf {
        let d = o.re * o.re + o.im * o.im;
        Cf { re: (self.re * o.re + self.im * o.im) / d, im: (self.im * o.re - self.re * o.im) / d }
    }
    fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }
    fn finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Exact complex rational.
#[derive(Debug, Clone, PartialEq)]
struct Cq {
    re: Rational,
    im: Rational,
}

impl Cq {
    fn zero() -> Cq {
        Cq { re: Rational::zero(), im: Rational::zero() }
    }
    fn add(&self, o: &Cq) -> Cq {
        Cq { re: &self.re + &o.re, im: &self.im + &o.im }
    }
    fn sub(&self, o: &Cq) -> Cq {
        Cq { re: &self.re - &o.re, im: &self.im - &o.im }
    }
    fn mul(&self, o: &Cq) -> Cq {
        Cq { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
    fn norm2(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }
    fn div(&self, o: &Cq) -> Cq {
        let d = o.norm2();
        Cq {
            re: (&self.re * &o.re + &self.im * &o.im) / &d,
            im: (&self.im * &o.re - &self.re * &o.im) / &d,
        }
    }
    fn round(&self, bits: u64) -> Cq {
        Cq { re: round_rel(&self.re, bits), im: round_rel(&self.im, bits) }
    }
    fn l1(&self) -> Rational {
        self.re.abs() + self.im.abs()
    }
}

fn round_rel(x: &Rational, bits: u64) -> Rational {
    Dyadic::from_rational(x, bits).0.to_rational()
}

/// `p(z)` and `p'(z)` by Horner's scheme.
fn eval_with_derivative(coeffs: &[Cq], z: &Cq) -> (Cq, Cq) {
    let mut p = Cq::zero();
    let mut dp = Cq::zero();
    for c in coeffs.iter().rev() {
        dp = dp.mul(z).add(&p);
        p = p.mul(z).add(c);
    }
    (p, dp)
}

fn aberth_f64(coeffs: &[f64], start: &[Cf]) -> Option<Vec<Cf>> {
    let n = start.len();
    let mut z = start.to_vec();
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let mut p = Cf { re: 0.0, im: 0.0 };
            let mut dp = Cf { re: 0.0, im: 0.0 };
            for &c in coeffs.iter().rev() {
                dp = dp.mul(z[i]).add(p);
                p = p.mul(z[i]).add(Cf { re: c, im: 0.0 });
            }
            if p.abs() == 0.0 {
                continue;
            }
            let ratio = p.div(dp);
            let mut s = Cf { re: 0.0, im: 0.0 };
            for j in 0..n {
                if j != i {
                    s = s.add(Cf { re: 1.0, im: 0.0 }.div(z[i].sub(z[j])));
                }
            }
            let w = ratio.div(Cf { re: 1.0, im: 0.0 }.sub(ratio.mul(s)));
            if !w.finite() {
                return None;
            }
            z[i] = z[i].sub(w);
            max_step = max_step.max(w.abs() / z[i].abs().max(1e-300));
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z.iter().all(|c| c.finite()).then_some(z)
}

fn initial_circle(f: &IntPolynomial) -> Vec<Cf> {
    let n = f.degree().unwrap_or(0);
    let lc = to_f64(&Rational::from_integer(f.leading().expect("nonzero").clone())).abs();
    let mut r: f64 = 0.0;
    for (i, c) in f.coeffs().iter().enumerate().take(n) {
        let a = to_f64(&Rational::from_integer(c.clone())).abs() / lc;
        if a > 0.0 {
            r = r.max(a.powf(1.0 / (n - i) as f64));
        }
    }
    let r = if r > 0.0 { r } else { 1.0 };
    (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Cf { re: r * t.cos(), im: r * t.sin() }
        })
        .collect()
}

/// Upper bound on `sqrt(x)` carrying about 32 significant bits.
fn sqrt_upper(x: &Rational) -> Rational {
    if x.is_zero() {
        return Rational::zero();
    }
    let e = x.numer().bits() as i64 - x.denom().bits() as i64;
    let k = (64 - e).div_euclid(2);
    let y = ceil(&mul_pow2(x, 2 * k));
    let s = y.sqrt() + BigInt::one();
    mul_pow2(&Rational::from_integer(s), -k)
}

/// Finds and certifies the `wanted` roots of `f` with positive imaginary part
/// and nonzero real part.
fn certified_off_axis_roots(f: &IntPolynomial, wanted: usize, bits: u32) -> Result<Vec<ComplexRoot>, RootError> {
    let n = f.degree().expect("nonzero");
    let fail = RootError::CertificationFailure { precision_bits: bits };
    let coeffs_f64: Vec<f64> = f.coeffs().iter().map(|c| to_f64(&Rational::from_integer(c.clone()))).collect();
    let start = initial_circle(f);
    let approx = if coeffs_f64.iter().all(|c| c.is_finite()) { aberth_f64(&coeffs_f64, &start).unwrap_or(start) } else { start };

    let bound_bits = root_bound(f).numer().bits() as u64;
    let work = bits as u64 + 64 + bound_bits;
    let coeffs: Vec<Cq> = f.coeffs().iter().map(|c| Cq { re: Rational::from_integer(c.clone()), im: Rational::zero() }).collect();
    let mut z: Vec<Cq> = approx.iter().map(|c| Cq { re: crate::rational::from_f64(c.re), im: crate::rational::from_f64(c.im) }.round(work)).collect();
    let one = Cq { re: Rational::one(), im: Rational::zero() };
    let tol = mul_pow2(&Rational::one(), -(work as i64) + 16);
    for _ in 0..60 {
        let mut converged = true;
        for i in 0..n {
            let (p, dp) = eval_with_derivative(&coeffs, &z[i]);
            if p.re.is_zero() && p.im.is_zero() {
                continue;
            }
            if dp.re.is_zero() && dp.im.is_zero() {
                converged = false;
                continue;
            }
            let ratio = p.div(&dp).round(work);
            let mut s = Cq::zero();
            for j in 0..n {
                if j != i {
                    let d = z[i].sub(&z[j]);
                    if d.re.is_zero() && d.im.is_zero() {
                        continue;
                    }
                    s = s.add(&one.div(&d).round(work));
                }
            }
            let denom = one.sub(&ratio.mul(&s));
            if denom.re.is_zero() && denom.im.is_zero() {
                converged = false;
                continue;
            }
            let w = ratio.div(&denom).round(work);
            let scale = z[i].l1().max(Rational::one());
            if w.l1() > &tol * scale {
                converged = false;
            }
            z[i] = z[i].sub(&w).round(work);
        }
        if converged {
            break;
        }
    }

    // Weierstrass radii n |f(z_i)| / (|lc| prod |z_i - z_j|)
    let lc = Rational::from_integer(f.leading().expect("nonzero").abs());
    let mut radii = Vec::with_capacity(n);
    for i in 0..n {
        let (p, _) = eval_with_derivative(&coeffs, &z[i]);
        let mut prod = Rational::one();
        for j in 0..n {
            if j != i {
                let d2 = z[i].sub(&z[j]).norm2();
                if d2.is_zero() {
                    return Err(fail);
                }
                prod *= d2;
            }
        }
        let w2 = p.norm2() / (&lc * &lc * prod);
        radii.push(sqrt_upper(&w2) * Rational::from_integer(BigInt::from(n)));
    }
    for i in 0..n {
        for j in i + 1..n {
            let gap = &radii[i] + &radii[j];
            if z[i].sub(&z[j]).norm2() <= &gap * &gap {
                return Err(fail);
            }
        }
    }
    let max_rad = mul_pow2(&Rational::one(), -(bits as i64) - 1);
    let mut out = Vec::new();
    for (c, r) in z.iter().zip(&radii) {
        if c.im > *r && c.re.abs() > *r {
            if *r > max_rad {
                return Err(fail);
            }
            out.push(ComplexRoot {
                re_lo: &c.re - r,
                re_hi: &c.re + r,
                im_lo: &c.im - r,
                im_hi: &c.im + r,
                multiplicity: 1,
            });
        }
    }
    if out.len() != wanted {
        return Err(fail);
    }
    Ok(out)
}
