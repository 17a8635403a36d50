//! Dense integer matrices, Hermite normal form and integral linear solving.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::ExactError;

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<BigInt>]) -> Result<Self, ExactError> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(ExactError::Dimension("ragged rows".into()));
        }
        Ok(IntMatrix { rows: rows.len(), cols, data: rows.iter().flatten().cloned().collect() })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self, ExactError> {
        let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::from_rows(&big)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
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

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix, ExactError> {
        if self.cols != rhs.rows {
            return Err(ExactError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Result<Vec<BigInt>, ExactError> {
        if x.len() != self.cols {
            return Err(ExactError::Dimension(format!("matrix has {} columns, vector {}", self.cols, x.len())));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt, ExactError> {
        if self.rows != self.cols {
            return Err(ExactError::Dimension("determinant of non-square matrix".into()));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&r| !m[(r, k)].is_zero()) {
                    Some(r) => {
                        m.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
            }
            prev = m[(k, k)].clone();
        }
        Ok(sign * m[(n - 1, n - 1)].clone())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// row[dst] -= q * row[src]
    fn sub_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            if !self.data[src * self.cols + j].is_zero() {
                let t = q * &self.data[src * self.cols + j];
                self.data[dst * self.cols + j] -= t;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = std::mem::take(&mut self.data[r * self.cols + j]);
            self.data[r * self.cols + j] = -v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Row-style Hermite normal form.
#[derive(Clone, Debug)]
pub struct Hermite {
    /// `h = u * a`, in row echelon form with positive pivots and entries
    /// above each pivot reduced into `[0, pivot)`.
    pub h: IntMatrix,
    /// Unimodular transform.
    pub u: IntMatrix,
    /// Pivot column of each nonzero row of `h`.
    pub pivots: Vec<usize>,
}

impl Hermite {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub fn hermite_normal_form(a: &IntMatrix) -> Hermite {
    hnf_impl(a, true)
}

fn hnf_impl(a: &IntMatrix, track: bool) -> Hermite {
    let mut h = a.clone();
    let mut u = if track { IntMatrix::identity(a.rows) } else { IntMatrix::zeros(0, 0) };
    let mut pivots = Vec::new();
    let mut prow = 0;
    for col in 0..h.cols {
        if prow == h.rows {
            break;
        }
        loop {
            // smallest nonzero entry at or below prow
            let best = (prow..h.rows)
                .filter(|&r| !h[(r, col)].is_zero())
                .min_by(|&x, &y| h[(x, col)].abs().cmp(&h[(y, col)].abs()));
            let Some(best) = best else { break };
            h.swap_rows(prow, best);
            if track {
                u.swap_rows(prow, best);
            }
            let mut clean = true;
            for r in prow + 1..h.rows {
                if h[(r, col)].is_zero() {
                    continue;
                }
                let q = h[(r, col)].div_floor(&h[(prow, col)]);
                h.sub_row_multiple(r, prow, &q);
                if track {
                    u.sub_row_multiple(r, prow, &q);
                }
                if !h[(r, col)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h[(prow, col)].is_zero() {
            continue;
        }
        if h[(prow, col)].is_negative() {
            h.negate_row(prow);
            if track {
                u.negate_row(prow);
            }
        }
        for r in 0..prow {
            let q = h[(r, col)].div_floor(&h[(prow, col)]);
            h.sub_row_multiple(r, prow, &q);
            if track {
                u.sub_row_multiple(r, prow, &q);
            }
        }
        pivots.push(col);
        prow += 1;
    }
    Hermite { h, u, pivots }
}

/// Why an integral system has no solution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Obstruction {
    /// At the pivot of echelon step `step` the residual is not divisible by the pivot.
    NonIntegralPivot { step: usize, residual: String, pivot: String },
    /// The right-hand side has a nonzero component outside the rational column span.
    Inconsistent { row: usize, residual: String },
}

/// Finds an integral `x` with `a * x = b`, or an obstruction proving none exists.
pub fn integer_solve(a: &IntMatrix, b: &[BigInt]) -> Result<Result<Vec<BigInt>, Obstruction>, ExactError> {
    if b.len() != a.rows() {
        return Err(ExactError::Dimension(format!("matrix has {} rows, target {}", a.rows(), b.len())));
    }
    // Column operations on a are row operations on a^T: hnf.u * a^T = hnf.h,
    // so a * hnf.u^T = hnf.h^T, lower echelon.
    let hnf = hermite_normal_form(&a.transpose());
    Ok(solve_lower_echelon(&hnf, b).map(|y| {
        // x = u^T y
        let n = a.cols();
        let mut x = vec![BigInt::zero(); n];
        for (i, yi) in y.iter().enumerate() {
            if yi.is_zero() {
                continue;
            }
            for (j, xj) in x.iter_mut().enumerate() {
                let uij = &hnf.u[(i, j)];
                if !uij.is_zero() {
                    *xj += uij * yi;
                }
            }
        }
        x
    }))
}

/// Decides whether `b` lies in the Z-span of the columns of `a` without recording a transform.
pub fn in_integer_column_span(a: &IntMatrix, b: &[BigInt]) -> Result<Result<(), Obstruction>, ExactError> {
    if b.len() != a.rows() {
        return Err(ExactError::Dimension(format!("matrix has {} rows, target {}", a.rows(), b.len())));
    }
    let hnf = hnf_impl(&a.transpose(), false);
    Ok(solve_lower_echelon(&hnf, b).map(|_| ()))
}

/// Solves `h^T y = b` where `h` is the row-echelon HNF.
fn solve_lower_echelon(hnf: &Hermite, b: &[BigInt]) -> Result<Vec<BigInt>, Obstruction> {
    let h = &hnf.h;
    let mut y = vec![BigInt::zero(); h.rows()];
    let mut residual: Vec<BigInt> = b.to_vec();
    for (step, &pc) in hnf.pivots.iter().enumerate() {
        let pivot = &h[(step, pc)];
        let (q, r) = residual[pc].div_mod_floor(pivot);
        if !r.is_zero() {
            return Err(Obstruction::NonIntegralPivot {
                step,
                residual: residual[pc].to_string(),
                pivot: pivot.to_string(),
            });
        }
        for j in 0..h.cols() {
            if !h[(step, j)].is_zero() {
                let t = &q * &h[(step, j)];
                residual[j] -= t;
            }
        }
        y[step] = q;
    }
    if let Some(row) = residual.iter().position(|r| !r.is_zero()) {
        return Err(Obstruction::Inconsistent { row, residual: residual[row].to_string() });
    }
    Ok(y)
}
