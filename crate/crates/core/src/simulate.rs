//! Simulation harness: ball-arithmetic evaluation of `exp(At) x0`, exact
//! discrete iteration, escape detection and certificate cross-checks.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ball::{Ball, BallMatrix, Dyadic};
use crate::bounds::EscapeCertificate;
use crate::decide::{decide, Instance, Mode, Outcome};
use crate::logscale::LogScale;
use crate::lp::{lp_feasible_with_equalities, vertices, LpError, Polytope};
use crate::matrix::{RatMatrix, RatVector};
use crate::par;
use crate::rational::{floor, int, mul_pow2, to_f64, Rational};

pub const DEFAULT_PRECISION: u32 = 128;
pub const MAX_PRECISION: u32 = 1024;
/// Default simulation horizon in time units (or iterations).
pub const DEFAULT_SIM_CAP: i64 = 1_000_000;
/// Exit times are localized to `2^-30`.
pub const TIME_RESOLUTION_BITS: i64 = 30;
/// Coarse steps taken before the step length doubles.
const STEPS_PER_LEVEL: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimulateError {
    #[error("error bound not met at {precision_bits} bits")]
    PrecisionExhausted { precision_bits: u32 },
    #[error("initial point is not in the polytope")]
    NotInPolytope,
    #[error("initial point has {got} coordinates, expected {want}")]
    Dimension { got: usize, want: usize },
}

fn scale_ball_matrix(m: &BallMatrix, k: &Ball) -> BallMatrix {
    m.map(|x| x * k)
}

/// Taylor terms needed so that `2 (1/2)^(n+1) / (n+1)! <= 2^-(prec+10)`.
fn taylor_terms(prec: u32) -> u32 {
    let target = prec as f64 + 10.0;
    let mut log2_tail = 0.0f64;
    let mut n = 1u32;
    loop {
        // log2 of (1/2)^(n+1)/(n+1)! times 2
        log2_tail -= 1.0 + ((n + 1) as f64).log2();
        if -log2_tail - 1.0 >= target {
            return n;
        }
        n += 1;
    }
}

/// `exp(M)` for a ball matrix `M` by scaling, Taylor and squaring. The
/// Taylor remainder is folded into every radius.
pub fn matrix_exp_ball(m: &BallMatrix, prec: u32) -> BallMatrix {
    let n = m.rows();
    let norm = m.norm_inf();
    let s = if norm.is_zero() { 0 } else { (norm.top() + 1).max(0) };
    let x = m.map(|b| b.mul_pow2(-s));
    let terms = taylor_terms(prec);
    let id = BallMatrix::identity(n, prec);
    let mut r = id.clone();
    for k in (1..=terms).rev() {
        let inv = Ball::from_rational(&Rational::new(BigInt::one(), BigInt::from(k)), prec);
        r = id.add(&scale_ball_matrix(&x.mul(&r), &inv));
    }
    let tail = Dyadic::pow2(-(prec as i64 + 10));
    r = r.map(|b| b.widen(&tail));
    for _ in 0..s {
        r = r.mul(&r);
    }
    r
}

fn exp_of_scaled(a: &BallMatrix, t: &Rational, prec: u32) -> BallMatrix {
    let tb = Ball::from_rational(t, prec);
    matrix_exp_ball(&scale_ball_matrix(a, &tb), prec)
}

/// Ball enclosure of `exp(A t)` whose radii are at most `2^-(precision_bits/2)`
/// relative to the largest entry.
pub fn matrix_exp(a: &RatMatrix, t: &Rational, precision_bits: u32) -> Result<BallMatrix, SimulateError> {
    assert!(a.is_square());
    let target = (precision_bits / 2) as i64;
    let mut w = precision_bits + 32;
    loop {
        let e = exp_of_scaled(&BallMatrix::from_rational(a, w), t, w);
        if e.all_rad_within(target) {
            return Ok(e);
        }
        if w >= MAX_PRECISION * 4 {
            return Err(SimulateError::PrecisionExhausted { precision_bits: w });
        }
        w *= 2;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingPlan {
    pub include_vertices: bool,
    pub random_interior_count: usize,
    pub seed: u64,
}

impl Default for SamplingPlan {
    fn default() -> Self {
        SamplingPlan { include_vertices: true, random_interior_count: 50, seed: 0 }
    }
}

/// Vertices (optionally) followed by random convex combinations of them with
/// integer weights in `[1, 1000]`.
pub fn sample_points(p: &Polytope, plan: &SamplingPlan) -> Result<Vec<RatVector>, LpError> {
    let verts = vertices(p)?;
    let mut out = Vec::new();
    if plan.include_vertices {
        out.extend(verts.iter().cloned());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    let d = p.dimension();
    for _ in 0..plan.random_interior_count {
        let weights: Vec<i64> = verts.iter().map(|_| rng.gen_range(1..=1000)).collect();
        let total: i64 = weights.iter().sum();
        let mut x = RatVector::zeros(d);
        for (v, w) in verts.iter().zip(&weights) {
            x = x.add(&v.scale(&int(*w)));
        }
        out.push(x.scale(&Rational::new(BigInt::one(), BigInt::from(total))));
    }
    debug_assert!(out.iter().all(|x| p.contains(x)));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    /// Time, or iteration count in discrete mode.
    pub t: f64,
    pub x: Vec<f64>,
    pub inside: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum EscapeTime {
    /// The state is certainly outside `P` at `upper`; the last point checked
    /// before it, at `lower`, was not certainly outside.
    Continuous {
        #[serde(with = "crate::serde_rational")]
        lower: Rational,
        #[serde(with = "crate::serde_rational")]
        upper: Rational,
    },
    Discrete { steps: u64 },
    NotEscapedWithin {
        #[serde(with = "crate::serde_rational")]
        horizon: Rational,
    },
}

impl EscapeTime {
    pub fn escaped(&self) -> bool {
        !matches!(self, EscapeTime::NotEscapedWithin { .. })
    }

    /// Certified upper bound on the detected exit, as a rational.
    pub fn upper(&self) -> Option<Rational> {
        match self {
            EscapeTime::Continuous { upper, .. } => Some(upper.clone()),
            EscapeTime::Discrete { steps } => Some(Rational::from_integer(BigInt::from(*steps))),
            EscapeTime::NotEscapedWithin { .. } => None,
        }
    }

    pub fn to_f64(&self) -> Option<f64> {
        self.upper().map(|u| to_f64(&u))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRun {
    pub initial_point: RatVector,
    pub mode: Mode,
    pub escape: EscapeTime,
    /// Coarse samples in time order; the last one is the exit when there is one.
    pub samples: Vec<Sample>,
    pub precision_bits: u32,
}

type StepKey = (u32, i64);

/// Saturates infinities so samples always serialize.
fn finite(v: f64) -> f64 {
    if v.is_nan() {
        0.0
    } else {
        v.clamp(f64::MIN, f64::MAX)
    }
}

/// Shared state for many runs of one instance: cached step matrices
/// `exp(A 2^j)` per precision.
pub struct Simulator<'a> {
    inst: &'a Instance,
    steps: Mutex<HashMap<StepKey, Arc<BallMatrix>>>,
    base_level: i64,
}

fn ball_vec(x: &RatVector, prec: u32) -> Vec<Ball> {
    x.iter().map(|v| Ball::from_rational(v, prec)).collect()
}

impl<'a> Simulator<'a> {
    pub fn new(inst: &'a Instance) -> Self {
        let norm = BallMatrix::from_rational(&inst.a, 64).norm_inf();
        // 2^level * |A| <= 1/8
        let level = if norm.is_zero() { 0 } else { -(norm.top() + 3) };
        Simulator { inst, steps: Mutex::new(HashMap::new()), base_level: level.max(-TIME_RESOLUTION_BITS) }
    }

    fn step(&self, prec: u32, j: i64) -> Arc<BallMatrix> {
        if let Some(m) = self.steps.lock().expect("cache lock").get(&(prec, j)) {
            return m.clone();
        }
        let a = BallMatrix::from_rational(&self.inst.a, prec + 32);
        let m = Arc::new(exp_of_scaled(&a, &mul_pow2(&Rational::one(), j), prec + 32));
        self.steps.lock().expect("cache lock").insert((prec, j), m.clone());
        m
    }

    /// `Some(true)` certainly outside, `Some(false)` otherwise; `None` when
    /// the state is too blurred to trust.
    fn outside(&self, x: &[Ball], prec: u32) -> Option<bool> {
        let scale = x.iter().map(|b| b.mid().top()).max().unwrap_or(0);
        let blurred = x.iter().any(|b| !b.rad().is_zero() && b.rad().top() > scale - (prec / 2) as i64);
        if blurred {
            return None;
        }
        let p = &self.inst.polytope;
        let out = (0..p.constraint_count()).any(|i| {
            let mut acc = Ball::from_rational(&-p.c[i].clone(), prec);
            for (bij, xj) in p.b.row(i).iter().zip(x) {
                if !bij.is_zero() {
                    acc = &acc + &(&Ball::from_rational(bij, prec) * xj);
                }
            }
            acc.is_positive()
        });
        Some(out)
    }

    fn sample(t: &Rational, x: &[Ball], inside: bool) -> Sample {
        Sample { t: finite(to_f64(t)), x: x.iter().map(|b| finite(b.to_f64())).collect(), inside }
    }

    fn run_continuous(&self, x0: &RatVector, horizon: &Rational, prec: u32, record: bool) -> Result<TrajectoryRun, SimulateError> {
        let exhausted = SimulateError::PrecisionExhausted { precision_bits: prec };
        let mut x = ball_vec(x0, prec + 32);
        let mut t = Rational::zero();
        let mut j = self.base_level;
        // never start with a step coarser than horizon / 1024
        if horizon.is_positive() {
            let cap = (floor(horizon).bits() as i64) - 11;
            j = j.min(cap.max(-TIME_RESOLUTION_BITS));
        }
        let mut count = 0;
        let mut samples = Vec::new();
        if record {
            samples.push(Self::sample(&t, &x, true));
        }
        while &t < horizon {
            let mut h = mul_pow2(&Rational::one(), j);
            let e = if &(&t + &h) > horizon {
                h = horizon - &t;
                let a = BallMatrix::from_rational(&self.inst.a, prec + 32);
                Arc::new(exp_of_scaled(&a, &h, prec + 32))
            } else {
                self.step(prec, j)
            };
            let y = e.mul_vec(&x);
            match self.outside(&y, prec) {
                None => return Err(exhausted),
                Some(true) => {
                    let (lower, upper, y_out) = self.bisect(&x, &t, &h, y, prec)?;
                    samples.push(Self::sample(&upper, &y_out, false));
                    return Ok(TrajectoryRun {
                        initial_point: x0.clone(),
                        mode: Mode::Continuous,
                        escape: EscapeTime::Continuous { lower, upper },
                        samples,
                        precision_bits: prec,
                    });
                }
                Some(false) => {}
            }
            x = y;
            t += &h;
            if record {
                samples.push(Self::sample(&t, &x, true));
            }
            count += 1;
            if count == STEPS_PER_LEVEL {
                count = 0;
                j += 1;
            }
        }
        Ok(TrajectoryRun {
            initial_point: x0.clone(),
            mode: Mode::Continuous,
            escape: EscapeTime::NotEscapedWithin { horizon: horizon.clone() },
            samples,
            precision_bits: prec,
        })
    }

    /// Greedy bisection of `(t, t + h]`, where the state at `t + h` is
    /// certainly outside. Returns the last time not certainly outside, the
    /// first certified outside time after it, and the state there.
    fn bisect(&self, x: &[Ball], t: &Rational, h: &Rational, y: Vec<Ball>, prec: u32) -> Result<(Rational, Rational, Vec<Ball>), SimulateError> {
        let mut x = x.to_vec();
        let mut t = t.clone();
        let mut t_out = &t + h;
        let mut y_out = y;
        // largest i with 2^i < h
        let mut i = floor(&h.clone()).bits() as i64;
        while mul_pow2(&Rational::one(), i) >= *h {
            i -= 1;
        }
        while i >= -TIME_RESOLUTION_BITS {
            let step = mul_pow2(&Rational::one(), i);
            let cand_t = &t + &step;
            if cand_t < t_out {
                let cand = self.step(prec, i).mul_vec(&x);
                match self.outside(&cand, prec) {
                    None => return Err(SimulateError::PrecisionExhausted { precision_bits: prec }),
                    Some(true) => {
                        t_out = cand_t;
                        y_out = cand;
                    }
                    Some(false) => {
                        x = cand;
                        t = cand_t;
                    }
                }
            }
            i -= 1;
        }
        Ok((t, t_out, y_out))
    }

    fn run_discrete(&self, x0: &RatVector, horizon: &Rational, record: bool) -> TrajectoryRun {
        let limit = floor(horizon).to_u64().unwrap_or(u64::MAX);
        let p = &self.inst.polytope;
        let mut x = x0.clone();
        let mut samples = Vec::new();
        let f = |x: &RatVector| x.iter().map(|v| finite(to_f64(v))).collect::<Vec<_>>();
        if record {
            samples.push(Sample { t: 0.0, x: f(&x), inside: true });
        }
        for n in 1..=limit {
            x = self.inst.a.mul_vec(&x);
            let inside = p.contains(&x);
            if record || !inside {
                samples.push(Sample { t: n as f64, x: f(&x), inside });
            }
            if !inside {
                return TrajectoryRun { initial_point: x0.clone(), mode: Mode::Discrete, escape: EscapeTime::Discrete { steps: n }, samples, precision_bits: 0 };
            }
        }
        TrajectoryRun {
            initial_point: x0.clone(),
            mode: Mode::Discrete,
            escape: EscapeTime::NotEscapedWithin { horizon: Rational::from_integer(BigInt::from(limit)) },
            samples,
            precision_bits: 0,
        }
    }

    /// Runs one trajectory from `x0`, doubling the precision when the error
    /// radii grow too large.
    pub fn run(&self, x0: &RatVector, horizon: &Rational, precision_bits: u32, record: bool) -> Result<TrajectoryRun, SimulateError> {
        let d = self.inst.dimension();
        if x0.len() != d {
            return Err(SimulateError::Dimension { got: x0.len(), want: d });
        }
        if !self.inst.polytope.contains(x0) {
            return Err(SimulateError::NotInPolytope);
        }
        if self.inst.mode == Mode::Discrete {
            return Ok(self.run_discrete(x0, horizon, record));
        }
        let mut prec = precision_bits;
        loop {
            match self.run_continuous(x0, horizon, prec, record) {
                Err(SimulateError::PrecisionExhausted { .. }) if prec < MAX_PRECISION => prec *= 2,
                other => return other,
            }
        }
    }
}

/// First detected exit of the trajectory from `x0` within `horizon`.
///
/// Continuous runs report a certified upper bound on the first exit the
/// scan detects, which is not necessarily the infimum exit time if the
/// trajectory leaves and re-enters between coarse samples.
pub fn escape_time(inst: &Instance, x0: &RatVector, horizon: &Rational, precision_bits: u32) -> Result<TrajectoryRun, SimulateError> {
    Simulator::new(inst).run(x0, horizon, precision_bits, false)
}

/// Exact test for `0 in conv(points)`.
pub fn hull_contains_origin(points: &[RatVector]) -> bool {
    hull_origin_lp(points, &Rational::zero())
}

/// Coordinates are snapped to this dyadic grid before the exact LP.
const HULL_GRID_BITS: u32 = 40;

/// `0` within `tol` (per coordinate) of `conv(points)`. Coordinates are
/// snapped to a `2^-40` grid first, and `tol` widened by the snapping error.
pub fn hull_contains_origin_approx(points: &[Vec<f64>], tol: f64) -> bool {
    let snap = |v: f64| crate::rational::round_dyadic(&crate::rational::from_f64(v), HULL_GRID_BITS, false);
    let pts: Vec<RatVector> = points.iter().map(|p| RatVector(p.iter().map(|&v| snap(v)).collect())).collect();
    let tol = crate::rational::from_f64(tol) + mul_pow2(&Rational::one(), -(HULL_GRID_BITS as i64));
    hull_origin_lp(&pts, &tol)
}

fn hull_origin_lp(points: &[RatVector], tol: &Rational) -> bool {
    assert!(!points.is_empty());
    let m = points.len();
    let d = points[0].len();
    // weights w >= 0 with |sum w_i p_i| <= tol and sum w = 1
    let mut rows = Vec::new();
    let mut c = Vec::new();
    for i in 0..m {
        let mut r = vec![Rational::zero(); m];
        r[i] = -Rational::one();
        rows.push(r);
        c.push(Rational::zero());
    }
    let mut eq_rows = vec![vec![Rational::one(); m]];
    let mut eq_rhs = vec![Rational::one()];
    for k in 0..d {
        let r: Vec<Rational> = points.iter().map(|p| p[k].clone()).collect();
        if tol.is_zero() {
            eq_rows.push(r);
            eq_rhs.push(Rational::zero());
        } else {
            rows.push(r.clone());
            c.push(tol.clone());
            rows.push(r.into_iter().map(|v| -v).collect());
            c.push(tol.clone());
        }
    }
    let p = Polytope { b: RatMatrix::from_rows(rows).expect("rectangular"), c: RatVector(c) };
    let e = RatMatrix::from_rows(eq_rows).expect("rectangular");
    lp_feasible_with_equalities(&p, &e, &RatVector(eq_rhs)).map(|o| o.is_feasible()).unwrap_or(false)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "reason")]
pub enum ValidationStatus {
    Passed,
    Failed,
    Refused(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub initial_point: RatVector,
    pub escape: EscapeTime,
    /// `Some(false)` is a hard failure, `None` means the run reached the
    /// cap of a bound too large to simulate.
    pub confirmed: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub status: ValidationStatus,
    pub bound: Option<LogScale>,
    #[serde(with = "crate::serde_rational")]
    pub horizon: Rational,
    /// `true` when the bound is at most the simulation cap, so every run must
    /// escape within it.
    pub bound_simulable: bool,
    pub runs: Vec<RunSummary>,
    pub max_observed: Option<f64>,
    /// `log10(bound / max_observed)`.
    pub slack_log10: Option<f64>,
    pub failures: usize,
    pub unconfirmed: usize,
    pub notes: Vec<String>,
}

impl ValidationReport {
    fn refused(reason: String, cap: &Rational) -> Self {
        ValidationReport {
            status: ValidationStatus::Refused(reason),
            bound: None,
            horizon: cap.clone(),
            bound_simulable: false,
            runs: Vec::new(),
            max_observed: None,
            slack_log10: None,
            failures: 0,
            unconfirmed: 0,
            notes: Vec::new(),
        }
    }
}

/// Simulates every sampled start and checks it escapes by
/// `min(total_bound, sim_cap)`.
pub fn validate_certificate(
    inst: &Instance,
    cert: &EscapeCertificate,
    plan: &SamplingPlan,
    sim_cap: &Rational,
    precision_bits: u32,
) -> ValidationReport {
    let decision = decide(inst);
    if decision.outcome != Outcome::AllEscape {
        return ValidationReport::refused(format!("validation needs an instance where every trajectory escapes, decision was {:?}", decision.outcome), sim_cap);
    }
    let bound = &cert.total_bound;
    let bound_simulable = bound.le_rational(sim_cap);
    let horizon = if bound_simulable { bound.materialize().expect("bounded by the cap").min(sim_cap.clone()) } else { sim_cap.clone() };
    let points = match sample_points(&inst.polytope, plan) {
        Ok(p) => p,
        Err(e) => return ValidationReport::refused(format!("sampling failed: {e}"), sim_cap),
    };
    let sim = Simulator::new(inst);
    let results = par::map(&points, |x0| sim.run(x0, &horizon, precision_bits, false));
    let mut runs = Vec::new();
    let mut notes = Vec::new();
    let mut failures = 0;
    let mut unconfirmed = 0;
    let mut max_observed: Option<Rational> = None;
    for (x0, r) in points.iter().zip(results) {
        let escape = match r {
            Ok(run) => run.escape,
            Err(e) => {
                failures += 1;
                notes.push(format!("run from {x0} failed: {e}"));
                runs.push(RunSummary { initial_point: x0.clone(), escape: EscapeTime::NotEscapedWithin { horizon: Rational::zero() }, confirmed: Some(false) });
                continue;
            }
        };
        let confirmed = match escape.upper() {
            Some(u) => {
                if max_observed.as_ref().is_none_or(|m| &u > m) {
                    max_observed = Some(u);
                }
                Some(true)
            }
            None if bound_simulable => {
                failures += 1;
                Some(false)
            }
            None => {
                unconfirmed += 1;
                None
            }
        };
        runs.push(RunSummary { initial_point: x0.clone(), escape, confirmed });
    }
    if !bound_simulable {
        notes.push(format!("bound exceeds the simulation cap {sim_cap}; runs are checked for escape within the cap only"));
    }
    if let Some(h) = inst.homogenized_from {
        notes.push(format!("points include the homogenizing coordinate (original dimension {h})"));
    }
    let max_f = max_observed.as_ref().map(to_f64);
    let slack_log10 = max_f.filter(|m| *m > 0.0).map(|m| bound.log10_approx() - m.log10());
    ValidationReport {
        status: if failures == 0 { ValidationStatus::Passed } else { ValidationStatus::Failed },
        bound: Some(bound.clone()),
        horizon,
        bound_simulable,
        runs,
        max_observed: max_f,
        slack_log10,
        failures,
        unconfirmed,
        notes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn pi_rat() -> Rational {
        crate::directed::pi(128).0
    }

    #[test]
    fn exp_of_zero_and_nilpotent() {
        let e = matrix_exp(&RatMatrix::zeros(2, 2), &int(5), 128).unwrap();
        assert!(e.contains(&RatMatrix::identity(2)));
        let n = RatMatrix::from_rows(vec![vec![int(0), int(1)], vec![int(0), int(0)]]).unwrap();
        let t = rat(7, 3);
        let e = matrix_exp(&n, &t, 128).unwrap();
        let want = RatMatrix::from_rows(vec![vec![int(1), t.clone()], vec![int(0), int(1)]]).unwrap();
        assert!(e.contains(&want));
        assert!(e.all_rad_within(64));
    }

    #[test]
    fn rotation_by_pi() {
        let r = RatMatrix::from_rows(vec![vec![int(0), int(-1)], vec![int(1), int(0)]]).unwrap();
        let e = matrix_exp(&r, &pi_rat(), 128).unwrap();
        let minus_id = RatMatrix::identity(2).scale(&int(-1));
        for (b, x) in e.entries().iter().zip(minus_id.entries()) {
            assert!(to_f64(&crate::rational::abs(&(b.mid_rational() - x))) < 1e-30);
        }
    }

    #[test]
    fn diagonal_matches_scalar_exponentials() {
        let a = RatMatrix::diagonal(&[int(1), rat(-1, 2)]);
        let e = matrix_exp(&a, &int(3), 128).unwrap();
        let (lo, hi) = crate::directed::exp(&int(3), 128);
        assert!(e.get(0, 0).lower() <= hi && e.get(0, 0).upper() >= lo);
        assert!((e.get(1, 1).to_f64() - (-1.5f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn taylor_term_counts_grow() {
        assert!(taylor_terms(64) < taylor_terms(128));
        assert!(taylor_terms(128) < 40);
    }

    fn scalar(a: Rational, lo: Rational, hi: Rational, mode: Mode) -> Instance {
        Instance::new(RatMatrix::from_rows(vec![vec![a]]).unwrap(), Polytope::from_box(&[lo], &[hi]), mode).unwrap()
    }

    #[test]
    fn scalar_growth_escape_time() {
        let inst = scalar(rat(1, 8), int(1), int(2), Mode::Continuous);
        let run = escape_time(&inst, &RatVector(vec![int(1)]), &int(1000), 128).unwrap();
        let t = run.escape.to_f64().unwrap();
        let want = 8.0 * std::f64::consts::LN_2;
        assert!((t - want).abs() / want < 1e-6, "{t}");
        assert!(!run.samples.last().unwrap().inside);
    }

    #[test]
    fn shrinking_escape() {
        let inst = scalar(int(1), rat(1, 1 << 10), int(1), Mode::Continuous);
        let run = escape_time(&inst, &RatVector(vec![rat(1, 1 << 10)]), &int(1000), 128).unwrap();
        let want = 10.0 * std::f64::consts::LN_2;
        assert!((run.escape.to_f64().unwrap() - want).abs() / want < 1e-6);
    }

    #[test]
    fn horizon_is_respected() {
        let inst = scalar(rat(1, 8), int(1), int(2), Mode::Continuous);
        let run = escape_time(&inst, &RatVector(vec![int(1)]), &int(5), 128).unwrap();
        assert_eq!(run.escape, EscapeTime::NotEscapedWithin { horizon: int(5) });
        assert!(matches!(escape_time(&inst, &RatVector(vec![int(3)]), &int(5), 128), Err(SimulateError::NotInPolytope)));
    }

    #[test]
    fn discrete_doubling() {
        let inst = scalar(int(2), int(1), int(3), Mode::Discrete);
        let run = escape_time(&inst, &RatVector(vec![int(1)]), &int(100), 128).unwrap();
        assert_eq!(run.escape, EscapeTime::Discrete { steps: 2 });
    }

    #[test]
    fn sampling() {
        let sq = Polytope::from_box(&[int(0), int(0)], &[int(1), int(1)]);
        let plan = SamplingPlan { include_vertices: true, random_interior_count: 0, seed: 1 };
        assert_eq!(sample_points(&sq, &plan).unwrap().len(), 4);
        let plan = SamplingPlan { include_vertices: false, random_interior_count: 2, seed: 42 };
        let pts = sample_points(&sq, &plan).unwrap();
        assert_eq!(pts.len(), 2);
        for p in &pts {
            assert!(p.iter().all(|v| v > &int(0) && v < &int(1)));
        }
        assert_eq!(pts, sample_points(&sq, &plan).unwrap());
        let seg = Polytope::from_box(&[int(1)], &[int(2)]);
        let pts = sample_points(&seg, &SamplingPlan { include_vertices: true, random_interior_count: 1, seed: 3 }).unwrap();
        assert_eq!(pts.len(), 3);
        assert!(pts[2][0] > int(1) && pts[2][0] < int(2));
    }

    #[test]
    fn hull_examples() {
        let v = |a: i64, b: i64| RatVector(vec![int(a), int(b)]);
        assert!(hull_contains_origin(&[v(1, 0), v(-1, 0), v(0, 1), v(0, -1)]));
        assert!(!hull_contains_origin(&[v(1, 0), v(2, 0)]));
        assert!(hull_contains_origin_approx(&[vec![1.0, 1e-12], vec![-1.0, 1e-12]], 1e-9));
        assert!(!hull_contains_origin_approx(&[vec![1.0, 1e-6], vec![-1.0, 1e-6]], 1e-9));
    }

    #[test]
    fn rotation_trajectory_samples_surround_origin() {
        let r = RatMatrix::from_rows(vec![vec![int(0), int(-1)], vec![int(1), int(0)]]).unwrap();
        let step = pi_rat() / int(50);
        let e = matrix_exp(&r, &step, 128).unwrap();
        let mut x = vec![Ball::from_int(1, 128), Ball::from_int(0, 128)];
        let mut pts = vec![vec![1.0, 0.0]];
        for _ in 0..51 {
            x = e.mul_vec(&x);
            pts.push(x.iter().map(Ball::to_f64).collect());
        }
        assert!(hull_contains_origin_approx(&pts, 1e-9));
        assert!(!hull_contains_origin_approx(&pts[..45], 1e-9));
    }
}
