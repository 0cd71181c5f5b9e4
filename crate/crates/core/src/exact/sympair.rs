use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::matrix::ExactMatrix;
use super::scalar::GaussianRational;
use crate::error::{Error, Result};

/// Which matrix of a pair an entry belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Which {
    A,
    B,
}

/// A pair `(A, B)` of symmetric matrices of equal size.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SymPair {
    a: ExactMatrix,
    b: ExactMatrix,
}

impl SymPair {
    pub fn new(a: ExactMatrix, b: ExactMatrix) -> Result<Self> {
        if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
            return Err(Error::Invariant(format!(
                "pair matrices must be square of equal size, got {}x{} and {}x{}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols()
            )));
        }
        for (m, tag) in [(&a, "A"), (&b, "B")] {
            if !m.is_symmetric() {
                return Err(Error::Invariant(format!("matrix {tag} is not symmetric")));
            }
        }
        Ok(Self { a, b })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            a: ExactMatrix::zeros(n, n),
            b: ExactMatrix::zeros(n, n),
        }
    }

    pub fn a(&self) -> &ExactMatrix {
        &self.a
    }

    pub fn b(&self) -> &ExactMatrix {
        &self.b
    }

    pub fn matrix(&self, which: Which) -> &ExactMatrix {
        match which {
            Which::A => &self.a,
            Which::B => &self.b,
        }
    }

    pub fn size(&self) -> usize {
        self.a.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// `(B, A)`.
    pub fn swapped(&self) -> Self {
        Self {
            a: self.b.clone(),
            b: self.a.clone(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self {
            a: self.a.direct_sum(&other.a),
            b: self.b.direct_sum(&other.b),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            a: self.a.checked_add(&other.a)?,
            b: self.b.checked_add(&other.b)?,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            a: self.a.checked_sub(&other.a)?,
            b: self.b.checked_sub(&other.b)?,
        })
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        Self {
            a: self.a.scale(s),
            b: self.b.scale(s),
        }
    }

    /// The principal sub-pair on rows and columns `start..start+len`.
    pub fn principal(&self, start: usize, len: usize) -> Self {
        Self {
            a: self.a.submatrix(start, start, len, len),
            b: self.b.submatrix(start, start, len, len),
        }
    }

    /// Coordinates of the pair: the upper triangle (diagonal included) of `A`
    /// read row by row, followed by the upper triangle of `B` in the same order.
    pub fn vectorize(&self) -> Vec<GaussianRational> {
        let n = self.size();
        let mut v = Vec::with_capacity(pair_space_dim(n));
        for m in [&self.a, &self.b] {
            for i in 0..n {
                v.extend_from_slice(&m.row(i)[i..]);
            }
        }
        v
    }

    /// Inverse of [`SymPair::vectorize`].
    pub fn from_vector(n: usize, v: &[GaussianRational]) -> Result<Self> {
        if v.len() != pair_space_dim(n) {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} does not describe a {n}x{n} pair",
                v.len()
            )));
        }
        let mut mats = [ExactMatrix::zeros(n, n), ExactMatrix::zeros(n, n)];
        for (which, m) in [Which::A, Which::B].into_iter().zip(mats.iter_mut()) {
            for i in 0..n {
                for j in i..n {
                    let x = &v[coordinate(n, which, i, j)];
                    if !x.is_zero() {
                        m[(i, j)] = x.clone();
                        m[(j, i)] = x.clone();
                    }
                }
            }
        }
        let [a, b] = mats;
        Ok(Self { a, b })
    }
}

/// Dimension `n(n+1)` of the space of symmetric `n×n` pairs.
pub fn pair_space_dim(n: usize) -> usize {
    n * (n + 1)
}

/// Index of entry `(i, j)` (either order) of matrix `which` in the vectorized
/// coordinates of an `n×n` pair.
pub fn coordinate(n: usize, which: Which, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    debug_assert!(j < n);
    // Rows 0..i of the upper triangle hold n + (n-1) + ... + (n-i+1) entries.
    let row_start = i * n - i * i.saturating_sub(1) / 2;
    let base = match which {
        Which::A => 0,
        Which::B => n * (n + 1) / 2,
    };
    base + row_start + (j - i)
}

/// Inverse of [`coordinate`], returning `(which, i, j)` with `i <= j`.
pub fn position(n: usize, index: usize) -> (Which, usize, usize) {
    let half = n * (n + 1) / 2;
    let (which, mut k) = if index < half {
        (Which::A, index)
    } else {
        (Which::B, index - half)
    };
    let mut i = 0;
    while k >= n - i {
        k -= n - i;
        i += 1;
    }
    (which, i, i + k)
}

/// `vectorize` with the symmetry check the raw matrices have not had yet.
pub fn vectorize_sym_pair(a: &ExactMatrix, b: &ExactMatrix) -> Result<Vec<GaussianRational>> {
    Ok(SymPair::new(a.clone(), b.clone())?.vectorize())
}

#[derive(Deserialize)]
struct RawPair {
    a: ExactMatrix,
    b: ExactMatrix,
}

impl<'de> Deserialize<'de> for SymPair {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawPair::deserialize(deserializer)?;
        SymPair::new(raw.a, raw.b).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for SymPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "A =")?;
        write!(f, "{}", self.a)?;
        writeln!(f, "B =")?;
        write!(f, "{}", self.b)
    }
}

impl fmt::Debug for SymPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymPair")
            .field("a", &self.a.to_string_rows())
            .field("b", &self.b.to_string_rows())
            .finish()
    }
}
