//! Sparse LU factorization over ℚ(i) for solving one system against many
//! right-hand sides.
//!
//! Columns are processed left to right; among the unused rows with a nonzero
//! entry in the column, the one with the fewest nonzeros becomes the pivot row.
//! Pivotless columns are free and their unknowns are set to zero.

use num_traits::Zero;

use super::matrix::ExactMatrix;
use super::scalar::GaussianRational;
use crate::error::{Error, Result};

type Row = Vec<(usize, GaussianRational)>;

/// `a - f·b` for rows sorted by column.
fn axpy(a: &Row, f: &GaussianRational, b: &Row) -> Row {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map_or(usize::MAX, |e| e.0);
        let cb = b.get(j).map_or(usize::MAX, |e| e.0);
        if ca < cb {
            out.push(a[i].clone());
            i += 1;
        } else if cb < ca {
            out.push((cb, -(f * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - &(f * &b[j].1);
            if !v.is_zero() {
                out.push((ca, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn entry(row: &Row, col: usize) -> Option<&GaussianRational> {
    row.binary_search_by_key(&col, |e| e.0).ok().map(|k| &row[k].1)
}

#[derive(Clone, Debug)]
pub struct SparseLu {
    rows: usize,
    cols: usize,
    /// `(source, target, f)`: row `target` -= `f` · row `source`, in order.
    ops: Vec<(usize, usize, GaussianRational)>,
    /// `(row, pivot column, row entries)` in pivot order.
    pivots: Vec<(usize, usize, Row)>,
    /// Rows that received no pivot; consistency requires them to vanish.
    leftover: Vec<usize>,
}

impl SparseLu {
    pub fn factor(m: &ExactMatrix) -> Self {
        let (rows, cols) = (m.rows(), m.cols());
        let mut data: Vec<Row> = (0..rows)
            .map(|i| {
                m.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(j, x)| (j, x.clone()))
                    .collect()
            })
            .collect();
        let mut used = vec![false; rows];
        let mut ops = Vec::new();
        let mut pivots = Vec::new();
        for c in 0..cols {
            let candidates: Vec<usize> = (0..rows)
                .filter(|&r| !used[r] && entry(&data[r], c).is_some())
                .collect();
            let Some(&p) = candidates.iter().min_by_key(|&&r| data[r].len()) else {
                continue;
            };
            used[p] = true;
            let pivot_row = std::mem::take(&mut data[p]);
            let pv = entry(&pivot_row, c).expect("candidate").clone();
            for &t in candidates.iter().filter(|&&t| t != p) {
                let f = entry(&data[t], c).expect("candidate") / &pv;
                data[t] = axpy(&data[t], &f, &pivot_row);
                ops.push((p, t, f));
            }
            pivots.push((p, c, pivot_row));
        }
        let leftover = (0..rows).filter(|&r| !used[r]).collect();
        Self {
            rows,
            cols,
            ops,
            pivots,
            leftover,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Solves `m·x = b`; `None` when inconsistent, otherwise the solution
    /// with free unknowns zero.
    pub fn solve(&self, b: &[GaussianRational]) -> Result<Option<Vec<GaussianRational>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has length {}, system has {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut rhs = b.to_vec();
        for (s, t, f) in &self.ops {
            if !rhs[*s].is_zero() {
                let d = f * &rhs[*s];
                rhs[*t] -= &d;
            }
        }
        if self.leftover.iter().any(|&r| !rhs[r].is_zero()) {
            return Ok(None);
        }
        let mut x = vec![GaussianRational::zero(); self.cols];
        for (r, c, row) in self.pivots.iter().rev() {
            let mut s = rhs[*r].clone();
            let mut pv = None;
            for (q, v) in row {
                if q == c {
                    pv = Some(v);
                } else if !x[*q].is_zero() {
                    s -= &(v * &x[*q]);
                }
            }
            x[*c] = &s / pv.expect("pivot entry");
        }
        Ok(Some(x))
    }
}
