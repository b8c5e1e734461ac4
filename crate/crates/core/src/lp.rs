//! Exact rational linear programming over polytopes `{x | Bx <= c}`.
//!
//! A dense two-phase simplex with Bland's rule. Variables are free, so each
//! is split into a difference of two nonnegative columns; equality
//! constraints become pairs of inequalities.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{gauss_solve, LinearSolution, RatMatrix, RatVector};
use crate::par;
use crate::rational::Rational;

/// Default cap on the number of d-subsets tried by [`vertices`].
pub const DEFAULT_VERTEX_CAP: u128 = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("vertex enumeration needs {combinations} subsets, above the cap of {cap}")]
    DimensionTooLarge { combinations: u128, cap: u128 },
    #[error("polytope is not compact and nonempty")]
    NotCompact,
}

/// `P = {x in R^d | Bx <= c}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    pub b: RatMatrix,
    pub c: RatVector,
}

impl Polytope {
    pub fn new(b: RatMatrix, c: RatVector) -> Result<Self, LpError> {
        if b.rows() != c.len() {
            return Err(LpError::Dimension(format!("B has {} rows but c has {} entries", b.rows(), c.len())));
        }
        if b.cols() == 0 {
            return Err(LpError::Dimension("polytope dimension must be at least 1".into()));
        }
        Ok(Polytope { b, c })
    }

    /// The axis-aligned box `prod [lo_i, hi_i]`.
    pub fn from_box(lo: &[Rational], hi: &[Rational]) -> Self {
        let d = lo.len();
        let mut rows = Vec::with_capacity(2 * d);
        let mut rhs = Vec::with_capacity(2 * d);
        for i in 0..d {
            let mut up = vec![Rational::zero(); d];
            up[i] = Rational::one();
            rows.push(up);
            rhs.push(hi[i].clone());
            let mut down = vec![Rational::zero(); d];
            down[i] = -Rational::one();
            rows.push(down);
            rhs.push(-lo[i].clone());
        }
        Polytope { b: RatMatrix::from_rows(rows).expect("box rows"), c: RatVector(rhs) }
    }

    pub fn dimension(&self) -> usize {
        self.b.cols()
    }

    pub fn constraint_count(&self) -> usize {
        self.b.rows()
    }

    /// Exact membership test.
    pub fn contains(&self, x: &RatVector) -> bool {
        x.len() == self.dimension() && (0..self.b.rows()).all(|i| self.b.row_vector(i).dot(x) <= self.c[i])
    }

    /// Number of constraints satisfied with equality at `x`.
    pub fn active_count(&self, x: &RatVector) -> usize {
        (0..self.b.rows()).filter(|&i| self.b.row_vector(i).dot(x) == self.c[i]).count()
    }

    pub fn max_bit_size(&self) -> u64 {
        self.b.max_bit_size().max(self.c.max_bit_size())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    Max,
    Min,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    /// `ray` satisfies `B ray <= 0` and improves the objective.
    Unbounded { ray: RatVector },
    Optimal { point: RatVector, value: Rational },
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }

    pub fn point(&self) -> Option<&RatVector> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Compactness {
    Empty,
    Unbounded,
    CompactNonempty,
}

struct Tableau {
    /// `rows` constraint rows followed by the objective row; last column is the rhs.
    t: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    width: usize,
}

enum PivotResult {
    Optimal,
    Unbounded(usize),
}

impl Tableau {
    fn rows(&self) -> usize {
        self.basis.len()
    }

    fn rhs(&self, r: usize) -> &Rational {
        &self.t[r][self.width]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.t[row][col].recip();
        for v in self.t[row].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = self.t[row].clone();
        for (r, line) in self.t.iter_mut().enumerate() {
            if r == row || line[col].is_zero() {
                continue;
            }
            let f = line[col].clone();
            for (v, p) in line.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Maximises the objective row (stored as reduced costs `z_j - c_j`, so
    /// a negative entry means the column improves the objective).
    fn run(&mut self, allowed: usize) -> PivotResult {
        let obj = self.rows();
        loop {
            // Bland: lowest-index improving column
            let Some(col) = (0..allowed).find(|&j| self.t[obj][j].is_negative()) else {
                return PivotResult::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for r in 0..obj {
                let a = &self.t[r][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / a;
                let better = match &best {
                    None => true,
                    Some((br, bv)) => ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br]),
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                None => return PivotResult::Unbounded(col),
                Some((r, _)) => self.pivot(r, col),
            }
        }
    }
}

/// Two-phase simplex for `max objective . x` subject to `Bx <= c`.
fn simplex(p: &Polytope, objective: &RatVector) -> LpOutcome {
    let d = p.dimension();
    let m = p.constraint_count();
    let negative_rows: Vec<usize> = (0..m).filter(|&i| p.c[i].is_negative()).collect();
    let n_art = negative_rows.len();
    // columns: u (d) | v (d) | slack (m) | artificial (n_art) | rhs
    let width = 2 * d + m + n_art;
    let mut t = vec![vec![Rational::zero(); width + 1]; m + 1];
    let mut basis = vec![0; m];
    let mut art = 0;
    for i in 0..m {
        let flip = p.c[i].is_negative();
        let sgn = if flip { -Rational::one() } else { Rational::one() };
        for j in 0..d {
            let bij = &p.b[(i, j)];
            if !bij.is_zero() {
                t[i][j] = &sgn * bij;
                t[i][d + j] = -(&sgn * bij);
            }
        }
        t[i][2 * d + i] = sgn.clone();
        t[i][width] = &sgn * &p.c[i];
        if flip {
            let col = 2 * d + m + art;
            t[i][col] = Rational::one();
            basis[i] = col;
            art += 1;
        } else {
            basis[i] = 2 * d + i;
        }
    }
    let mut tab = Tableau { t, basis, width };

    if n_art > 0 {
        // phase 1: maximise -sum(artificial); reduced costs after pricing out the basis
        for r in 0..m {
            if tab.basis[r] >= 2 * d + m {
                for j in 0..=width {
                    let v = tab.t[r][j].clone();
                    tab.t[m][j] -= v;
                }
            }
        }
        for j in 2 * d + m..width {
            tab.t[m][j] = Rational::zero();
        }
        let _ = tab.run(width);
        if tab.t[m][width].is_negative() {
            return LpOutcome::Infeasible;
        }
        // drive remaining (zero-valued) artificials out of the basis
        let mut r = 0;
        while r < tab.rows() {
            if tab.basis[r] >= 2 * d + m {
                if let Some(col) = (0..2 * d + m).find(|&j| !tab.t[r][j].is_zero()) {
                    tab.pivot(r, col);
                    r += 1;
                } else {
                    // redundant row
                    tab.t.remove(r);
                    tab.basis.remove(r);
                }
            } else {
                r += 1;
            }
        }
        for line in tab.t.iter_mut() {
            line.drain(2 * d + m..width);
        }
        tab.width = 2 * d + m;
    }

    // phase 2 objective row
    let width = tab.width;
    let rows = tab.rows();
    let mut cost = vec![Rational::zero(); width];
    for j in 0..d {
        cost[j] = objective[j].clone();
        cost[d + j] = -objective[j].clone();
    }
    let mut obj_row = vec![Rational::zero(); width + 1];
    for j in 0..width {
        obj_row[j] = -cost[j].clone();
    }
    for r in 0..rows {
        let cb = &cost[tab.basis[r]];
        if cb.is_zero() {
            continue;
        }
        for (o, t) in obj_row.iter_mut().zip(&tab.t[r]).take(width + 1) {
            *o += cb * t;
        }
    }
    tab.t.truncate(rows);
    tab.t.push(obj_row);

    let extract = |tab: &Tableau| -> RatVector {
        let mut x = RatVector::zeros(d);
        for r in 0..tab.rows() {
            let b = tab.basis[r];
            if b < d {
                x[b] += tab.rhs(r);
            } else if b < 2 * d {
                x[b - d] -= tab.rhs(r);
            }
        }
        x
    };

    match tab.run(width) {
        PivotResult::Optimal => {
            let point = extract(&tab);
            let value = objective.dot(&point);
            LpOutcome::Optimal { point, value }
        }
        PivotResult::Unbounded(col) => {
            let mut ray = RatVector::zeros(d);
            let mut add = |var: usize, amount: Rational| {
                if var < d {
                    ray[var] += amount;
                } else if var < 2 * d {
                    ray[var - d] -= amount;
                }
            };
            add(col, Rational::one());
            for r in 0..tab.rows() {
                let a = tab.t[r][col].clone();
                if !a.is_zero() {
                    add(tab.basis[r], -a);
                }
            }
            LpOutcome::Unbounded { ray }
        }
    }
}

/// Exact optimum of `objective . x` over `P`.
pub fn lp_optimize(p: &Polytope, objective: &RatVector, sense: Sense) -> Result<LpOutcome, LpError> {
    if objective.len() != p.dimension() {
        return Err(LpError::Dimension(format!("objective has {} entries for dimension {}", objective.len(), p.dimension())));
    }
    Ok(match sense {
        Sense::Max => simplex(p, objective),
        Sense::Min => match simplex(p, &objective.scale(&-Rational::one())) {
            LpOutcome::Optimal { point, value } => LpOutcome::Optimal { point, value: -value },
            other => other,
        },
    })
}

/// Feasibility of `{x | Bx <= c, Ex = f}` with a witness point.
pub fn lp_feasible_with_equalities(p: &Polytope, e: &RatMatrix, f: &RatVector) -> Result<LpOutcome, LpError> {
    if e.cols() != p.dimension() || e.rows() != f.len() {
        return Err(LpError::Dimension("equality system does not match the polytope".into()));
    }
    let neg_e = e.scale(&-Rational::one());
    let b = p.b.vstack(e).vstack(&neg_e);
    let mut c = p.c.0.clone();
    c.extend(f.iter().cloned());
    c.extend(f.iter().map(|x| -x.clone()));
    let joint = Polytope { b, c: RatVector(c) };
    lp_optimize(&joint, &RatVector::zeros(p.dimension()), Sense::Max)
}

pub fn is_compact_nonempty(p: &Polytope) -> Compactness {
    let d = p.dimension();
    if !simplex(p, &RatVector::zeros(d)).is_feasible() {
        return Compactness::Empty;
    }
    for i in 0..d {
        let mut e = RatVector::zeros(d);
        e[i] = Rational::one();
        for obj in [e.clone(), e.scale(&-Rational::one())] {
            if matches!(simplex(p, &obj), LpOutcome::Unbounded { .. }) {
                return Compactness::Unbounded;
            }
        }
    }
    Compactness::CompactNonempty
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// All vertices of a compact nonempty polytope, sorted and deduplicated.
pub fn vertices(p: &Polytope) -> Result<Vec<RatVector>, LpError> {
    vertices_with_cap(p, DEFAULT_VERTEX_CAP)
}

pub fn vertices_with_cap(p: &Polytope, cap: u128) -> Result<Vec<RatVector>, LpError> {
    let d = p.dimension();
    let n = p.constraint_count();
    let combos = binomial(n, d);
    if combos > cap {
        return Err(LpError::DimensionTooLarge { combinations: combos, cap });
    }
    let subsets = combinations(n, d);
    let found = par::map(&subsets, |rows| {
        let sub_b = p.b.select_rows(rows);
        let sub_c = RatVector(rows.iter().map(|&i| p.c[i].clone()).collect());
        match gauss_solve(&sub_b, &sub_c) {
            Ok(LinearSolution::Unique(x)) if p.contains(&x) => Some(x),
            _ => None,
        }
    });
    let mut vs: Vec<RatVector> = found.into_iter().flatten().collect();
    vs.sort_by(|a, b| a.0.cmp(&b.0));
    vs.dedup();
    Ok(vs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn interval(lo: i64, hi: i64) -> Polytope {
        Polytope::from_box(&[int(lo)], &[int(hi)])
    }

    fn unit_square() -> Polytope {
        Polytope::from_box(&[int(0), int(0)], &[int(1), int(1)])
    }

    fn segment42() -> Polytope {
        Polytope::from_box(&[int(0), int(1), int(0)], &[int(0), int(1), int(1)])
    }

    #[test]
    fn optimize_square() {
        let out = lp_optimize(&unit_square(), &RatVector(vec![int(1), int(0)]), Sense::Max).unwrap();
        match out {
            LpOutcome::Optimal { point, value } => {
                assert_eq!(value, int(1));
                assert!(unit_square().contains(&point));
            }
            other => panic!("{other:?}"),
        }
        let out = lp_optimize(&unit_square(), &RatVector(vec![int(1), int(1)]), Sense::Min).unwrap();
        assert!(matches!(out, LpOutcome::Optimal { ref value, .. } if *value == int(0)));
    }

    #[test]
    fn unbounded_halfline() {
        let p = Polytope::new(RatMatrix::from_rows(vec![vec![int(-1)]]).unwrap(), RatVector(vec![int(-1)])).unwrap();
        match lp_optimize(&p, &RatVector(vec![int(1)]), Sense::Max).unwrap() {
            LpOutcome::Unbounded { ray } => {
                assert!(ray[0] > int(0));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(is_compact_nonempty(&p), Compactness::Unbounded);
    }

    #[test]
    fn infeasible_interval() {
        // x <= 0 and -x <= -1
        let p = Polytope::new(RatMatrix::from_rows(vec![vec![int(1)], vec![int(-1)]]).unwrap(), RatVector(vec![int(0), int(-1)])).unwrap();
        assert_eq!(lp_optimize(&p, &RatVector(vec![int(1)]), Sense::Max).unwrap(), LpOutcome::Infeasible);
        assert_eq!(is_compact_nonempty(&p), Compactness::Empty);
    }

    #[test]
    fn equality_feasibility() {
        let e = RatMatrix::from_rows(vec![vec![int(1)]]).unwrap();
        let f = RatVector(vec![int(0)]);
        assert_eq!(lp_feasible_with_equalities(&interval(1, 2), &e, &f).unwrap(), LpOutcome::Infeasible);
        let out = lp_feasible_with_equalities(&interval(0, 1), &e, &f).unwrap();
        assert_eq!(out.point(), Some(&RatVector(vec![int(0)])));
        let a = RatMatrix::from_rows(vec![
            vec![int(1), int(1), int(0)],
            vec![int(0), int(1), int(1)],
            vec![int(0), int(0), crate::rational::rat(101, 100)],
        ])
        .unwrap();
        assert_eq!(lp_feasible_with_equalities(&segment42(), &a, &RatVector::zeros(3)).unwrap(), LpOutcome::Infeasible);
    }

    #[test]
    fn compactness() {
        assert_eq!(is_compact_nonempty(&interval(1, 2)), Compactness::CompactNonempty);
        assert_eq!(is_compact_nonempty(&segment42()), Compactness::CompactNonempty);
    }

    #[test]
    fn vertex_enumeration() {
        let v = vertices(&unit_square()).unwrap();
        let expect: Vec<RatVector> =
            [[0, 0], [0, 1], [1, 0], [1, 1]].iter().map(|p| RatVector(p.iter().map(|&x| int(x)).collect())).collect();
        assert_eq!(v, expect);
        let v = vertices(&segment42()).unwrap();
        assert_eq!(v, vec![RatVector(vec![int(0), int(1), int(0)]), RatVector(vec![int(0), int(1), int(1)])]);
        assert_eq!(vertices(&interval(1, 2)).unwrap(), vec![RatVector(vec![int(1)]), RatVector(vec![int(2)])]);
    }

    #[test]
    fn vertex_cap() {
        let err = vertices_with_cap(&unit_square(), 3).unwrap_err();
        assert_eq!(err, LpError::DimensionTooLarge { combinations: 6, cap: 3 });
    }

    #[test]
    fn combination_counts() {
        assert_eq!(combinations(5, 2).len() as u128, binomial(5, 2));
        assert_eq!(combinations(6, 3).len(), 20);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
    }
}
