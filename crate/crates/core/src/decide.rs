//! Deciding whether every trajectory leaves a compact polytope.
//!
//! A compact polytope traps some trajectory exactly when it contains a fixed
//! point of the dynamics, so the question reduces to one feasibility LP.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lp::{is_compact_nonempty, lp_feasible_with_equalities, Compactness, LpOutcome, Polytope};
use crate::matrix::{kernel, RatMatrix, RatVector};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// `x' = Ax`
    Continuous,
    /// `x_{n+1} = A x_n`
    Discrete,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("A must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("A is {a}x{a} but the polytope lives in dimension {p}")]
    DimensionMismatch { a: usize, p: usize },
    #[error("affine term has {got} entries, expected {want}")]
    AffineLength { got: usize, want: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub a: RatMatrix,
    pub polytope: Polytope,
    pub mode: Mode,
    /// Original dimension when an affine term was folded into an extra coordinate.
    pub homogenized_from: Option<usize>,
}

impl Instance {
    pub fn new(a: RatMatrix, polytope: Polytope, mode: Mode) -> Result<Self, InstanceError> {
        if !a.is_square() {
            return Err(InstanceError::NotSquare { rows: a.rows(), cols: a.cols() });
        }
        if a.cols() != polytope.dimension() {
            return Err(InstanceError::DimensionMismatch { a: a.rows(), p: polytope.dimension() });
        }
        Ok(Instance { a, polytope, mode, homogenized_from: None })
    }

    /// Dynamics `f(x) = Ax + a`, embedded in one more dimension as
    /// `[[A, a], [0, 0]]` (continuous) or `[[A, a], [0, 1]]` (discrete) acting
    /// on the hyperplane where the last coordinate is 1.
    pub fn with_affine(a: RatMatrix, affine: &RatVector, polytope: Polytope, mode: Mode) -> Result<Self, InstanceError> {
        let base = Instance::new(a, polytope, mode)?;
        let d = base.dimension();
        if affine.len() != d {
            return Err(InstanceError::AffineLength { got: affine.len(), want: d });
        }
        let corner = match mode {
            Mode::Continuous => Rational::zero(),
            Mode::Discrete => Rational::one(),
        };
        let mut rows: Vec<Vec<Rational>> = base
            .a
            .to_rows()
            .into_iter()
            .zip(affine.iter())
            .map(|(mut r, ai)| {
                r.push(ai.clone());
                r
            })
            .collect();
        let mut last = vec![Rational::zero(); d];
        last.push(corner);
        rows.push(last);
        let big_a = RatMatrix::from_rows(rows).expect("rectangular");

        let p = &base.polytope;
        let mut b_rows: Vec<Vec<Rational>> = p.b.to_rows().into_iter().map(|mut r| {
            r.push(Rational::zero());
            r
        }).collect();
        let mut c = p.c.0.clone();
        let mut unit = vec![Rational::zero(); d + 1];
        unit[d] = Rational::one();
        b_rows.push(unit.clone());
        c.push(Rational::one());
        unit[d] = -Rational::one();
        b_rows.push(unit);
        c.push(-Rational::one());
        let polytope = Polytope { b: RatMatrix::from_rows(b_rows).expect("rectangular"), c: RatVector(c) };
        Ok(Instance { a: big_a, polytope, mode, homogenized_from: Some(d) })
    }

    pub fn dimension(&self) -> usize {
        self.a.rows()
    }

    /// Maximum bit size over the entries of `A`, `B` and `c`.
    pub fn bit_size(&self) -> u64 {
        self.a.max_bit_size().max(self.polytope.max_bit_size()).max(1)
    }

    /// The matrix whose kernel is the fixed-point set.
    pub fn fixed_point_matrix(&self) -> RatMatrix {
        match self.mode {
            Mode::Continuous => self.a.clone(),
            Mode::Discrete => self.a.sub(&RatMatrix::identity(self.dimension())),
        }
    }

    /// Drops the homogenizing coordinate from a point, if there is one.
    pub fn project(&self, x: &RatVector) -> RatVector {
        match self.homogenized_from {
            Some(d) => RatVector(x.0[..d].to_vec()),
            None => x.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolytopeDefect {
    Empty,
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "defect")]
pub enum Outcome {
    AllEscape,
    TrappedPointExists,
    InvalidPolytope(PolytopeDefect),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub outcome: Outcome,
    /// A fixed point inside `P`, present exactly when one exists.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<RatVector>,
}

/// Kernel of `A` (continuous) or `A - I` (discrete), basis as columns.
pub fn fixed_point_set(a: &RatMatrix, mode: Mode) -> RatMatrix {
    match mode {
        Mode::Continuous => kernel(a),
        Mode::Discrete => kernel(&a.sub(&RatMatrix::identity(a.rows()))),
    }
}

pub fn decide(inst: &Instance) -> Decision {
    match is_compact_nonempty(&inst.polytope) {
        Compactness::Empty => return Decision { outcome: Outcome::InvalidPolytope(PolytopeDefect::Empty), witness: None },
        Compactness::Unbounded => {
            return Decision { outcome: Outcome::InvalidPolytope(PolytopeDefect::Unbounded), witness: None }
        }
        Compactness::CompactNonempty => {}
    }
    let e = inst.fixed_point_matrix();
    let f = RatVector::zeros(inst.dimension());
    match lp_feasible_with_equalities(&inst.polytope, &e, &f).expect("dimensions validated by Instance") {
        LpOutcome::Infeasible => Decision { outcome: Outcome::AllEscape, witness: None },
        outcome => {
            let w = outcome.point().cloned().expect("feasible LP carries a point");
            debug_assert!(e.mul_vec(&w).is_zero() && inst.polytope.contains(&w));
            Decision { outcome: Outcome::TrappedPointExists, witness: Some(w) }
        }
    }
}
