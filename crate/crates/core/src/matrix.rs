//! Dense exact rational vectors and matrices.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{bit_size, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("linear system has no solution")]
    NoSolution,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RatVector(#[serde(with = "crate::serde_rational::vec")] pub Vec<Rational>);

impl RatVector {
    pub fn zeros(n: usize) -> Self {
        RatVector(vec![Rational::zero(); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn dot(&self, other: &RatVector) -> Rational {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, k: &Rational) -> RatVector {
        RatVector(self.0.iter().map(|x| x * k).collect())
    }

    pub fn add(&self, other: &RatVector) -> RatVector {
        RatVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RatVector) -> RatVector {
        RatVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn max_bit_size(&self) -> u64 {
        self.0.iter().map(bit_size).max().unwrap_or(0)
    }
}

impl From<Vec<Rational>> for RatVector {
    fn from(v: Vec<Rational>) -> Self {
        RatVector(v)
    }
}

impl Index<usize> for RatVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl IndexMut<usize> for RatVector {
    fn index_mut(&mut self, i: usize) -> &mut Rational {
        &mut self.0[i]
    }
}

impl fmt::Display for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Row-major dense rational matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::Dimension("ragged rows".into()));
        }
        Ok(RatMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Matrix whose columns are the given vectors (`n` rows).
    pub fn from_columns(n: usize, cols: &[RatVector]) -> Self {
        let mut m = Self::zeros(n, cols.len());
        for (j, v) in cols.iter().enumerate() {
            for i in 0..n {
                m[(i, j)] = v[i].clone();
            }
        }
        m
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vector(&self, i: usize) -> RatVector {
        RatVector(self.row(i).to_vec())
    }

    pub fn column(&self, j: usize) -> RatVector {
        RatVector((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn columns(&self) -> Vec<RatVector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &RatVector) -> RatVector {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        RatVector((0..self.rows).map(|i| self.row(i).iter().zip(v.iter()).map(|(a, b)| a * b).sum()).collect())
    }

    pub fn add(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RatMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RatMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, k: &Rational) -> RatMatrix {
        RatMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * k).collect() }
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn max_bit_size(&self) -> u64 {
        self.data.iter().map(bit_size).max().unwrap_or(0)
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        RatMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Submatrix made of the listed rows.
    pub fn select_rows(&self, idx: &[usize]) -> RatMatrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend(self.row(i).iter().cloned());
        }
        RatMatrix { rows: idx.len(), cols: self.cols, data }
    }

    pub fn rank(&self) -> usize {
        reduced_row_echelon(self).pivots.len()
    }

    pub fn determinant(&self) -> Result<Rational, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[(r, col)].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let pivot = m[(col, col)].clone();
            det *= &pivot;
            for r in col + 1..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let f = &m[(r, col)] / &pivot;
                for c in col..n {
                    let v = &f * &m[(col, c)];
                    m[(r, c)] -= v;
                }
            }
        }
        Ok(det)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
        }
        write!(f, "]")
    }
}

struct Echelon {
    matrix: RatMatrix,
    pivots: Vec<usize>,
}

/// Gauss-Jordan elimination. The pivot is the first nonzero entry in column
/// order, so the result is fully deterministic.
fn reduced_row_echelon(m: &RatMatrix) -> Echelon {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(p) = (row..a.rows).find(|&r| !a[(r, col)].is_zero()) else {
            continue;
        };
        a.swap_rows(p, row);
        let inv = a[(row, col)].recip();
        for c in col..a.cols {
            a[(row, c)] *= &inv;
        }
        for r in 0..a.rows {
            if r == row || a[(r, col)].is_zero() {
                continue;
            }
            let f = a[(r, col)].clone();
            for c in col..a.cols {
                let v = &f * &a[(row, c)];
                a[(r, c)] -= v;
            }
        }
        pivots.push(col);
        row += 1;
    }
    Echelon { matrix: a, pivots }
}

/// Null-space basis, one column per free variable. Empty (zero columns)
/// when `m` has full column rank.
pub fn kernel(m: &RatMatrix) -> RatMatrix {
    let ech = reduced_row_echelon(m);
    kernel_from_echelon(&ech, m.cols)
}

fn kernel_from_echelon(ech: &Echelon, cols: usize) -> RatMatrix {
    let free: Vec<usize> = (0..cols).filter(|c| !ech.pivots.contains(c)).collect();
    let basis: Vec<RatVector> = free
        .iter()
        .map(|&f| {
            let mut v = RatVector::zeros(cols);
            v[f] = Rational::one();
            for (r, &p) in ech.pivots.iter().enumerate() {
                v[p] = -ech.matrix[(r, f)].clone();
            }
            v
        })
        .collect();
    RatMatrix::from_columns(cols, &basis)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearSolution {
    Unique(RatVector),
    /// A particular solution plus a kernel basis (as columns).
    Parametric { particular: RatVector, kernel: RatMatrix },
}

impl LinearSolution {
    pub fn particular(&self) -> &RatVector {
        match self {
            LinearSolution::Unique(x) => x,
            LinearSolution::Parametric { particular, .. } => particular,
        }
    }
}

/// Solves `m x = v` exactly.
pub fn gauss_solve(m: &RatMatrix, v: &RatVector) -> Result<LinearSolution, LinalgError> {
    if m.rows() != v.len() {
        return Err(LinalgError::Dimension(format!("{} rows vs rhs of length {}", m.rows(), v.len())));
    }
    let n = m.cols();
    let mut aug = RatMatrix::zeros(m.rows(), n + 1);
    for i in 0..m.rows() {
        for j in 0..n {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, n)] = v[i].clone();
    }
    let ech = reduced_row_echelon(&aug);
    if ech.pivots.last() == Some(&n) {
        return Err(LinalgError::NoSolution);
    }
    let mut x = RatVector::zeros(n);
    for (r, &p) in ech.pivots.iter().enumerate() {
        x[p] = ech.matrix[(r, n)].clone();
    }
    if ech.pivots.len() == n {
        return Ok(LinearSolution::Unique(x));
    }
    let ker = kernel(m);
    Ok(LinearSolution::Parametric { particular: x, kernel: ker })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn m(rows: &[&[i64]]) -> RatMatrix {
        RatMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap()
    }

    fn section42() -> RatMatrix {
        RatMatrix::from_rows(vec![
            vec![int(1), int(1), int(0)],
            vec![int(0), int(1), int(1)],
            vec![int(0), int(0), rat(101, 100)],
        ])
        .unwrap()
    }

    #[test]
    fn identity_solve() {
        let v = RatVector(vec![int(3), rat(-1, 2)]);
        assert_eq!(gauss_solve(&RatMatrix::identity(2), &v).unwrap(), LinearSolution::Unique(v));
    }

    #[test]
    fn inconsistent_system() {
        let a = m(&[&[1, 1], &[2, 2]]);
        let v = RatVector(vec![int(1), int(3)]);
        assert_eq!(gauss_solve(&a, &v), Err(LinalgError::NoSolution));
    }

    #[test]
    fn parametric_system() {
        let a = m(&[&[1, 1], &[2, 2]]);
        let v = RatVector(vec![int(1), int(2)]);
        match gauss_solve(&a, &v).unwrap() {
            LinearSolution::Parametric { particular, kernel } => {
                assert_eq!(a.mul_vec(&particular), v);
                assert_eq!(kernel.cols(), 1);
                assert!(a.mul(&kernel).is_zero());
            }
            other => panic!("expected parametric, got {other:?}"),
        }
    }

    #[test]
    fn vertex_systems_of_segment_polytope() {
        // active constraints x1 = 0, x2 = 1, x3 = 0 (resp. 1)
        let b = m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        for (x3, expect) in [(0, [0, 1, 0]), (1, [0, 1, 1])] {
            let rhs = RatVector(vec![int(0), int(1), int(x3)]);
            let sol = gauss_solve(&b, &rhs).unwrap();
            assert_eq!(sol, LinearSolution::Unique(RatVector(expect.iter().map(|&x| int(x)).collect())));
        }
    }

    #[test]
    fn kernels() {
        let z = RatMatrix::zeros(3, 3);
        assert_eq!(kernel(&z), RatMatrix::identity(3));
        assert_eq!(kernel(&section42()).cols(), 0);
        assert_eq!(section42().determinant().unwrap(), rat(101, 100));
        let nil = m(&[&[0, 1], &[0, 0]]);
        assert_eq!(kernel(&nil), RatMatrix::from_columns(2, &[RatVector(vec![int(1), int(0)])]));
    }

    #[test]
    fn rank_nullity() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank() + kernel(&a).cols(), 3);
        assert!(a.mul(&kernel(&a)).is_zero());
    }
}
