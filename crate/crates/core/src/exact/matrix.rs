use std::fmt;
use std::ops::{Add, Index, IndexMut, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::scalar::GaussianRational;
use crate::error::{Error, Result};

/// Dense row-major matrix over ℚ(i).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<GaussianRational>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![GaussianRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                GaussianRational::one()
            } else {
                GaussianRational::zero()
            }
        })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> GaussianRational,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self {
            rows,
            cols,
            entries,
        }
    }

    /// Builds from a row-major flat vector.
    pub fn from_vec(rows: usize, cols: usize, entries: Vec<GaussianRational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    /// Builds from a list of rows. An empty list yields a 0×0 matrix.
    pub fn from_rows(rows: Vec<Vec<GaussianRational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(k) = rows.iter().position(|row| row.len() != c) {
            return Err(Error::DimensionMismatch(format!(
                "row {k} has {} entries, expected {c}",
                rows[k].len()
            )));
        }
        Self::from_vec(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_i64_rows<const C: usize>(rows: &[[i64; C]]) -> Self {
        Self::from_fn(rows.len(), C, |i, j| rows[i][j].into())
    }

    /// An `n×1` matrix.
    pub fn column(entries: Vec<GaussianRational>) -> Self {
        let n = entries.len();
        Self {
            rows: n,
            cols: 1,
            entries,
        }
    }

    /// The elementary matrix with a single 1 at `(i, j)`.
    pub fn elementary(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        m[(i, j)] = GaussianRational::one();
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

    pub fn entries(&self) -> &[GaussianRational] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<GaussianRational> {
        self.entries
    }

    pub fn row(&self, i: usize) -> &[GaussianRational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&GaussianRational> {
        (i < self.rows && j < self.cols).then(|| &self.entries[i * self.cols + j])
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
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
                        out[(i, j)] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(
        &self,
        rhs: &Self,
        f: impl Fn(&GaussianRational, &GaussianRational) -> GaussianRational,
    ) -> Result<Self> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * s).collect(),
        }
    }

    /// Block-diagonal direct sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        out.set_block(0, 0, self);
        out.set_block(self.rows, self.cols, other);
        out
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    ///
    /// Panics if the block does not fit.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)].clone();
            }
        }
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    /// Entries as nested rows of text literals.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect()
    }
}

impl Index<(usize, usize)> for ExactMatrix {
    type Output = GaussianRational;
    fn index(&self, (i, j): (usize, usize)) -> &GaussianRational {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut GaussianRational {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &mut self.entries[i * self.cols + j]
    }
}

impl Add for &ExactMatrix {
    type Output = ExactMatrix;
    fn add(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.checked_add(rhs).expect("matrix sizes differ")
    }
}

impl Sub for &ExactMatrix {
    type Output = ExactMatrix;
    fn sub(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.checked_sub(rhs).expect("matrix sizes differ")
    }
}

impl Neg for &ExactMatrix {
    type Output = ExactMatrix;
    fn neg(self) -> ExactMatrix {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(Neg::neg).collect(),
        }
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells = self.to_string_rows();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in &cells {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "[{}]", line.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactMatrix {}x{} {:?}", self.rows, self.cols, self.to_string_rows())
    }
}

/// Serialized as an array of rows of text literals.
impl Serialize for ExactMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<&[GaussianRational]> = (0..self.rows).map(|i| self.row(i)).collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ExactMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<GaussianRational>>::deserialize(deserializer)?;
        Self::from_rows(rows).map_err(serde::de::Error::custom)
    }
}
