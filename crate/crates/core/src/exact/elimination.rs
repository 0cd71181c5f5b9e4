//! Fraction-free (Bareiss) elimination over ℤ[i].
//!
//! A matrix over ℚ(i) is first brought into ℤ[i] by scaling every row with the
//! lcm of its denominators. Elimination then keeps every intermediate entry a
//! minor of the scaled matrix, so only exact divisions occur.
//!
//! Pivot rule: columns are scanned left to right; in each column the first
//! nonzero entry at or below the current row (top to bottom) becomes the pivot.
//! Columns without a pivot are free.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gaussint::GaussInt;
use super::matrix::ExactMatrix;
use super::scalar::GaussianRational;
use crate::error::{Error, Result};

/// One elimination step, recorded so that right-hand sides can be replayed
/// through it after the fact.
#[derive(Clone, Debug)]
struct Step {
    swap_with: usize,
    pivot: GaussInt,
    prev: GaussInt,
    /// Column entries of rows `k+1..` just before the step.
    multipliers: Vec<GaussInt>,
}

/// Row echelon form of a matrix together with the recorded elimination.
#[derive(Clone, Debug)]
pub struct Echelon {
    rows: usize,
    cols: usize,
    row_scale: Vec<BigInt>,
    reduced: Vec<Vec<GaussInt>>,
    pivots: Vec<usize>,
    steps: Vec<Step>,
}

impl Echelon {
    /// Eliminates `m`. With `record == false` the step log is not kept and
    /// [`Echelon::solve`] is unavailable.
    fn compute(m: &ExactMatrix, record: bool) -> Self {
        let (rows, cols) = (m.rows(), m.cols());
        let row_scale: Vec<BigInt> = (0..rows)
            .map(|i| {
                m.row(i)
                    .iter()
                    .fold(BigInt::one(), |acc, x| acc.lcm(&x.denom_lcm()))
            })
            .collect();
        let mut a: Vec<Vec<GaussInt>> = (0..rows)
            .map(|i| {
                m.row(i)
                    .iter()
                    .map(|x| GaussInt::scaled(x, &row_scale[i]))
                    .collect()
            })
            .collect();

        let mut pivots = Vec::new();
        let mut steps = Vec::new();
        let mut prev = GaussInt::one();
        let mut k = 0;
        for c in 0..cols {
            if k == rows {
                break;
            }
            let Some(r) = (k..rows).find(|&r| !a[r][c].is_zero()) else {
                continue;
            };
            a.swap(k, r);
            let pivot = a[k][c].clone();
            let (head, tail) = a.split_at_mut(k + 1);
            let pivot_row = &head[k];
            let mut multipliers = Vec::new();
            for row in tail.iter_mut() {
                let m = std::mem::take(&mut row[c]);
                if m.is_zero() {
                    if pivot != prev {
                        for x in row[c + 1..].iter_mut().filter(|x| !x.is_zero()) {
                            *x = pivot.mul(x).div_exact(&prev);
                        }
                    }
                } else {
                    for (x, p) in row[c + 1..].iter_mut().zip(&pivot_row[c + 1..]) {
                        if p.is_zero() {
                            if !x.is_zero() && pivot != prev {
                                *x = pivot.mul(x).div_exact(&prev);
                            }
                        } else {
                            *x = pivot.mul(x).sub(&m.mul(p)).div_exact(&prev);
                        }
                    }
                }
                if record {
                    multipliers.push(m);
                }
            }
            if record {
                steps.push(Step {
                    swap_with: r,
                    pivot: pivot.clone(),
                    prev: prev.clone(),
                    multipliers,
                });
            }
            pivots.push(c);
            prev = pivot;
            k += 1;
        }
        Self {
            rows,
            cols,
            row_scale,
            reduced: a,
            pivots,
            steps,
        }
    }

    /// Eliminates `m`, keeping what is needed to solve against any
    /// right-hand side later.
    pub fn factor(m: &ExactMatrix) -> Self {
        Self::compute(m, true)
    }

    /// Eliminates `m` for rank and pivot information only; [`Echelon::solve`]
    /// will refuse to run on the result.
    pub fn reduce(m: &ExactMatrix) -> Self {
        Self::compute(m, false)
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Pivot column of each echelon row, increasing.
    pub fn pivot_columns(&self) -> &[usize] {
        &self.pivots
    }

    /// Solves `m·x = b`. Returns `None` for an inconsistent system; otherwise
    /// the solution with every free variable set to zero.
    pub fn solve(&self, b: &[GaussianRational]) -> Result<Option<Vec<GaussianRational>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has length {}, system has {} rows",
                b.len(),
                self.rows
            )));
        }
        if self.steps.len() != self.pivots.len() {
            return Err(Error::Internal("echelon form was computed without a step log".into()));
        }
        // The right-hand side is carried as one more column of the scaled
        // matrix, so the replay stays in ℤ[i] with exact divisions.
        let scaled: Vec<GaussianRational> = b
            .iter()
            .zip(&self.row_scale)
            .map(|(x, s)| x * &GaussianRational::from(BigRational::from_integer(s.clone())))
            .collect();
        let denom = scaled.iter().fold(BigInt::one(), |acc, x| acc.lcm(&x.denom_lcm()));
        let mut rhs: Vec<GaussInt> = scaled.iter().map(|x| GaussInt::scaled(x, &denom)).collect();
        for (k, step) in self.steps.iter().enumerate() {
            rhs.swap(k, step.swap_with);
            let (head, tail) = rhs.split_at_mut(k + 1);
            let top = &head[k];
            for (x, m) in tail.iter_mut().zip(&step.multipliers) {
                if m.is_zero() {
                    if !x.is_zero() && step.pivot != step.prev {
                        *x = step.pivot.mul(x).div_exact(&step.prev);
                    }
                } else {
                    *x = step.pivot.mul(x).sub(&m.mul(top)).div_exact(&step.prev);
                }
            }
        }
        if rhs[self.rank()..].iter().any(|x| !x.is_zero()) {
            return Ok(None);
        }
        // Back-substitution stays fraction-free: with `D` the last pivot (the
        // determinant of the pivot block), `D·x` is integral.
        let mut x = vec![GaussianRational::zero(); self.cols];
        let Some(&last) = self.pivots.last() else {
            return Ok(Some(x));
        };
        let d = &self.reduced[self.rank() - 1][last];
        let mut y: Vec<GaussInt> = vec![GaussInt::default(); self.cols];
        for k in (0..self.rank()).rev() {
            let p = self.pivots[k];
            let row = &self.reduced[k];
            let mut s = d.mul(&rhs[k]);
            for &q in &self.pivots[k + 1..] {
                if !row[q].is_zero() && !y[q].is_zero() {
                    s = s.sub(&row[q].mul(&y[q]));
                }
            }
            y[p] = s.div_exact(&row[p]);
        }
        let scale = &d.to_rational() * &GaussianRational::from(BigRational::from_integer(denom));
        for &p in &self.pivots {
            if !y[p].is_zero() {
                x[p] = &y[p].to_rational() / &scale;
            }
        }
        Ok(Some(x))
    }
}

/// Exact rank over ℚ(i).
pub fn rank(m: &ExactMatrix) -> usize {
    Echelon::compute(m, false).rank()
}

/// Pivot columns under the documented pivot rule: exactly the columns that are
/// not linear combinations of the columns to their left.
pub fn pivot_columns(m: &ExactMatrix) -> Vec<usize> {
    Echelon::compute(m, false).pivots
}

/// Solves `a·x = b`, zeroing free variables; `None` when inconsistent.
pub fn solve_affine(a: &ExactMatrix, b: &[GaussianRational]) -> Result<Option<Vec<GaussianRational>>> {
    if a.rows() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "matrix has {} rows, right-hand side has length {}",
            a.rows(),
            b.len()
        )));
    }
    Echelon::factor(a).solve(b)
}
