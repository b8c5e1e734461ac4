//! Seeded random instances shared by the integration and acceptance tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use polyescape_core::decide::{Instance, Mode};
use polyescape_core::lp::Polytope;
use polyescape_core::matrix::{kernel, RatMatrix, RatVector};
use polyescape_core::rational::{bit_size, int, Rational};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rational of bit size at most `max_bits` (numerator bits plus denominator bits).
pub fn rational(rng: &mut ChaCha8Rng, max_bits: u64) -> Rational {
    loop {
        let num: i64 = rng.gen_range(-127..=127);
        let den: i64 = rng.gen_range(1..=63);
        let r = Rational::new(BigInt::from(num), BigInt::from(den));
        if bit_size(&r) <= max_bits {
            return r;
        }
    }
}

/// `m / 2^e` with bit size at most `max_bits`.
pub fn dyadic(rng: &mut ChaCha8Rng, max_bits: u64) -> Rational {
    loop {
        let e: u32 = rng.gen_range(0..max_bits as u32);
        let num: i64 = rng.gen_range(-(1i64 << max_bits)..=(1i64 << max_bits));
        let r = Rational::new(BigInt::from(num), BigInt::one() << e as usize);
        if bit_size(&r) <= max_bits {
            return r;
        }
    }
}

pub fn matrix(rng: &mut ChaCha8Rng, d: usize, max_bits: u64) -> RatMatrix {
    RatMatrix::from_rows((0..d).map(|_| (0..d).map(|_| rational(rng, max_bits)).collect()).collect()).unwrap()
}

pub fn small_int(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
    int(rng.gen_range(lo..=hi))
}

pub fn random_box(rng: &mut ChaCha8Rng, d: usize) -> Polytope {
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    for _ in 0..d {
        let a = Rational::new(BigInt::from(rng.gen_range(-8..=6)), BigInt::from(2));
        let w = Rational::new(BigInt::from(rng.gen_range(1..=6)), BigInt::from(2));
        hi.push(&a + &w);
        lo.push(a);
    }
    Polytope::from_box(&lo, &hi)
}

/// Simplex spanned by `d + 1` random integer points, in H-form.
pub fn random_simplex(rng: &mut ChaCha8Rng, d: usize) -> Polytope {
    loop {
        let pts: Vec<RatVector> = (0..=d).map(|_| RatVector((0..d).map(|_| small_int(rng, -4, 4)).collect())).collect();
        let diffs: Vec<Vec<Rational>> = pts[1..].iter().map(|p| p.sub(&pts[0]).0).collect();
        let m = RatMatrix::from_rows(diffs).unwrap();
        if m.determinant().unwrap().is_zero() {
            continue;
        }
        let mut rows = Vec::new();
        let mut c = Vec::new();
        for skip in 0..=d {
            let face: Vec<&RatVector> = pts.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, p)| p).collect();
            let normal = if d == 1 {
                RatVector(vec![int(1)])
            } else {
                let e = RatMatrix::from_rows(face[1..].iter().map(|p| p.sub(face[0]).0).collect()).unwrap();
                kernel(&e).column(0)
            };
            let mut n = normal;
            let mut off = n.dot(face[0]);
            if n.dot(&pts[skip]) > off {
                n = n.scale(&int(-1));
                off = -off;
            }
            rows.push(n.0);
            c.push(off);
        }
        return Polytope::new(RatMatrix::from_rows(rows).unwrap(), RatVector(c)).unwrap();
    }
}

/// Random instance with 8-bit entries in `A`. Roughly a quarter of them get a
/// fixed direction `e_j`, which makes trapped points likely.
pub fn random_instance(rng: &mut ChaCha8Rng, d: usize, mode: Mode) -> Instance {
    let mut a = matrix(rng, d, 8);
    if rng.gen_ratio(1, 4) {
        let j = rng.gen_range(0..d);
        for i in 0..d {
            a[(i, j)] = match mode {
                Mode::Continuous => Rational::zero(),
                Mode::Discrete => if i == j { Rational::one() } else { Rational::zero() },
            };
        }
    }
    let p = if rng.gen_bool(0.5) { random_box(rng, d) } else { random_simplex(rng, d) };
    Instance::new(a, p, mode).unwrap()
}

pub fn is_positive_vec(v: &RatVector) -> bool {
    v.iter().all(Signed::is_positive)
}
