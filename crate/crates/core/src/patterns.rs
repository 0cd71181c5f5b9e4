//! `(0,*)` deformation patterns for canonical symmetric pairs.
//!
//! A pattern marks the entries of the two matrices that carry independent
//! parameters. The pattern of a direct sum is assembled block by block: one
//! rule per diagonal summand and one per ordered pair of summands, with the
//! lower block mirroring the upper one and sharing its parameters.
//!
//! All positions in this module are 0-based.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::blocks::{BlockSpec, CanonicalStructure};
use crate::error::{Error, Result};
use crate::exact::{coordinate, ExactMatrix, GaussianRational, SymPair, Which};

/// A `rows×cols` matrix of zeros and stars.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StarMask {
    rows: usize,
    cols: usize,
    stars: BTreeSet<(usize, usize)>,
}

impl StarMask {
    pub fn new(rows: usize, cols: usize, stars: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let stars: BTreeSet<_> = stars.into_iter().collect();
        if let Some(&(i, j)) = stars.iter().find(|&&(i, j)| i >= rows || j >= cols) {
            return Err(Error::Input(format!(
                "star ({i},{j}) outside a {rows}x{cols} mask"
            )));
        }
        Ok(Self { rows, cols, stars })
    }

    pub fn empty(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            stars: BTreeSet::new(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.stars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stars.is_empty()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.stars.contains(&(i, j))
    }

    pub fn stars(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.stars.iter().copied()
    }

    pub fn transpose(&self) -> Self {
        Self {
            rows: self.cols,
            cols: self.rows,
            stars: self.stars.iter().map(|&(i, j)| (j, i)).collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && self.stars.iter().all(|&(i, j)| self.contains(j, i))
    }

    /// Copies the stars of `other` into `self`, shifted by `(r0, c0)`.
    ///
    /// Panics if `other` does not fit.
    pub fn paste(&mut self, r0: usize, c0: usize, other: &StarMask) {
        assert!(r0 + other.rows <= self.rows && c0 + other.cols <= self.cols);
        self.stars
            .extend(other.stars.iter().map(|&(i, j)| (r0 + i, c0 + j)));
    }

    /// The `rows×cols` window with top-left corner `(r0, c0)`.
    pub fn window(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> StarMask {
        StarMask {
            rows,
            cols,
            stars: self
                .stars
                .iter()
                .filter(|&&(i, j)| (r0..r0 + rows).contains(&i) && (c0..c0 + cols).contains(&j))
                .map(|&(i, j)| (i - r0, j - c0))
                .collect(),
        }
    }

    /// One string per row, `*` for a star and `.` for a zero.
    pub fn grid(&self) -> Vec<String> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| if self.contains(i, j) { '*' } else { '.' })
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for StarMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.grid() {
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

/// Which of the two layouts of the "half cap" shape to use: the first row
/// together with the last column, or the first column together with the last
/// row.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CapVariant {
    #[default]
    FirstRowLastColumn,
    FirstColumnLastRow,
}

/// Placement of the `min(rows, cols)` stars of the single-arrow shape used for
/// off-diagonal blocks between summands of equal type.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NwSingleRule {
    /// `(i, 0)` for `i < min(rows, cols)`.
    #[default]
    FirstColumn,
    /// `(0, j)` for `j < min(rows, cols)`.
    FirstRow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ShapeKind {
    Zero,
    /// Bottom-right corner only.
    CornerStar,
    LeftColumn,
    RightColumn,
    RightHalfCap(CapVariant),
    /// Tridiagonal entries on or above the anti-diagonal (square only).
    NwTriple,
    /// Full tridiagonal band (square only).
    NwseTriple,
    NwSingle(NwSingleRule),
    /// Last row, columns `rows-1 ..= cols-2`: `cols - rows` stars when
    /// `rows < cols`, nothing otherwise.
    QShape,
}

pub fn shape(kind: ShapeKind, rows: usize, cols: usize) -> Result<StarMask> {
    let need_nonempty = || {
        if rows == 0 || cols == 0 {
            Err(Error::Input(format!("{kind:?} needs a nonempty matrix, got {rows}x{cols}")))
        } else {
            Ok(())
        }
    };
    let need_square = || {
        if rows != cols {
            Err(Error::Input(format!("{kind:?} needs a square matrix, got {rows}x{cols}")))
        } else {
            Ok(())
        }
    };
    let stars: Vec<(usize, usize)> = match kind {
        ShapeKind::Zero => Vec::new(),
        ShapeKind::CornerStar => {
            need_nonempty()?;
            vec![(rows - 1, cols - 1)]
        }
        ShapeKind::LeftColumn => {
            need_nonempty()?;
            (0..rows).map(|i| (i, 0)).collect()
        }
        ShapeKind::RightColumn => {
            need_nonempty()?;
            (0..rows).map(|i| (i, cols - 1)).collect()
        }
        ShapeKind::RightHalfCap(variant) => {
            need_nonempty()?;
            match variant {
                CapVariant::FirstRowLastColumn => (0..cols)
                    .map(|j| (0, j))
                    .chain((0..rows).map(|i| (i, cols - 1)))
                    .collect(),
                CapVariant::FirstColumnLastRow => (0..rows)
                    .map(|i| (i, 0))
                    .chain((0..cols).map(|j| (rows - 1, j)))
                    .collect(),
            }
        }
        ShapeKind::NwTriple => {
            need_square()?;
            band(rows)
                .filter(|&(i, j)| i + j + 1 <= rows)
                .collect()
        }
        ShapeKind::NwseTriple => {
            need_square()?;
            band(rows).collect()
        }
        ShapeKind::NwSingle(rule) => {
            let len = rows.min(cols);
            match rule {
                NwSingleRule::FirstColumn => (0..len).map(|i| (i, 0)).collect(),
                NwSingleRule::FirstRow => (0..len).map(|j| (0, j)).collect(),
            }
        }
        ShapeKind::QShape => {
            if rows == 0 || rows >= cols {
                Vec::new()
            } else {
                (rows - 1..cols - 1).map(|j| (rows - 1, j)).collect()
            }
        }
    };
    StarMask::new(rows, cols, stars)
}

fn band(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i.saturating_sub(1)..(i + 2).min(n)).map(move |j| (i, j)))
}

/// The location of one independent parameter: an entry on or above the
/// diagonal of one of the two matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ParamSlot {
    pub which: Which,
    pub row: usize,
    pub col: usize,
}

pub type ParamId = usize;

/// A pair of symmetric star masks. Parameters are numbered in vectorization
/// order (upper triangle of `A` row by row, then of `B`); the entries `(i,j)`
/// and `(j,i)` of one matrix share a parameter.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PatternPair {
    mask_a: StarMask,
    mask_b: StarMask,
    params: Vec<ParamSlot>,
}

impl PatternPair {
    pub fn new(mask_a: StarMask, mask_b: StarMask) -> Result<Self> {
        if !mask_a.is_symmetric() || !mask_b.is_symmetric() || mask_a.rows() != mask_b.rows() {
            return Err(Error::Invariant(
                "pattern masks must be square, of equal size, and symmetric as star sets".into(),
            ));
        }
        let n = mask_a.rows();
        let mut params: Vec<ParamSlot> = [(Which::A, &mask_a), (Which::B, &mask_b)]
            .into_iter()
            .flat_map(|(which, m)| {
                m.stars()
                    .filter(|&(i, j)| i <= j)
                    .map(move |(row, col)| ParamSlot { which, row, col })
            })
            .collect();
        params.sort_by_key(|p| coordinate(n, p.which, p.row, p.col));
        Ok(Self {
            mask_a,
            mask_b,
            params,
        })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            mask_a: StarMask::empty(n, n),
            mask_b: StarMask::empty(n, n),
            params: Vec::new(),
        }
    }

    /// Pattern whose stars sit at the given vectorized coordinates.
    pub fn from_coordinates(n: usize, coords: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for c in coords {
            if c >= crate::exact::pair_space_dim(n) {
                return Err(Error::Input(format!("coordinate {c} out of range")));
            }
            let (which, i, j) = crate::exact::position(n, c);
            let target = if which == Which::A { &mut a } else { &mut b };
            target.push((i, j));
            target.push((j, i));
        }
        Self::new(StarMask::new(n, n, a)?, StarMask::new(n, n, b)?)
    }

    pub fn size(&self) -> usize {
        self.mask_a.rows()
    }

    pub fn mask_a(&self) -> &StarMask {
        &self.mask_a
    }

    pub fn mask_b(&self) -> &StarMask {
        &self.mask_b
    }

    pub fn mask(&self, which: Which) -> &StarMask {
        match which {
            Which::A => &self.mask_a,
            Which::B => &self.mask_b,
        }
    }

    /// Parameter slots indexed by [`ParamId`].
    pub fn parameters(&self) -> &[ParamSlot] {
        &self.params
    }

    /// The parameter shared by entries `(i,j)` and `(j,i)` of `which`.
    pub fn param_id(&self, which: Which, i: usize, j: usize) -> Option<ParamId> {
        let (row, col) = if i <= j { (i, j) } else { (j, i) };
        self.params
            .iter()
            .position(|p| *p == ParamSlot { which, row, col })
    }

    /// Vectorized coordinate of every parameter, in id order.
    pub fn coordinates(&self) -> Vec<usize> {
        let n = self.size();
        self.params
            .iter()
            .map(|p| coordinate(n, p.which, p.row, p.col))
            .collect()
    }

    /// `(B-pattern, A-pattern)`.
    pub fn swapped(&self) -> Self {
        Self::new(self.mask_b.clone(), self.mask_a.clone()).expect("swapping keeps symmetry")
    }

    /// Restriction to the principal sub-pair formed by two diagonal blocks
    /// `(start_i, len_i)` and `(start_j, len_j)`, block `i` first.
    pub fn restrict(&self, (start_i, len_i): (usize, usize), (start_j, len_j): (usize, usize)) -> Self {
        let pick = |m: &StarMask| {
            let mut out = StarMask::empty(len_i + len_j, len_i + len_j);
            out.paste(0, 0, &m.window(start_i, start_i, len_i, len_i));
            out.paste(0, len_i, &m.window(start_i, start_j, len_i, len_j));
            out.paste(len_i, 0, &m.window(start_j, start_i, len_j, len_i));
            out.paste(len_i, len_i, &m.window(start_j, start_j, len_j, len_j));
            out
        };
        Self::new(pick(&self.mask_a), pick(&self.mask_b)).expect("principal restriction keeps symmetry")
    }

    /// Restriction to a single diagonal block.
    pub fn restrict_diagonal(&self, start: usize, len: usize) -> Self {
        Self::new(
            self.mask_a.window(start, start, len, len),
            self.mask_b.window(start, start, len, len),
        )
        .expect("diagonal window keeps symmetry")
    }

    /// Replaces every star by the value of its parameter.
    pub fn instantiate(&self, values: &BTreeMap<ParamId, GaussianRational>) -> Result<SymPair> {
        let ordered = (0..self.params.len())
            .map(|id| {
                values
                    .get(&id)
                    .cloned()
                    .ok_or_else(|| Error::Input(format!("no value for parameter {id}")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.instantiate_slice(&ordered)
    }

    /// As [`PatternPair::instantiate`] with values listed by parameter id.
    pub fn instantiate_slice(&self, values: &[GaussianRational]) -> Result<SymPair> {
        if values.len() != self.params.len() {
            return Err(Error::Input(format!(
                "{} values for {} parameters",
                values.len(),
                self.params.len()
            )));
        }
        let n = self.size();
        let mut mats = [ExactMatrix::zeros(n, n), ExactMatrix::zeros(n, n)];
        for (slot, v) in self.params.iter().zip(values) {
            if v.is_zero() {
                continue;
            }
            let m = &mut mats[slot.which as usize];
            m[(slot.row, slot.col)] = v.clone();
            m[(slot.col, slot.row)] = v.clone();
        }
        let [a, b] = mats;
        SymPair::new(a, b)
    }

    pub fn to_json(&self) -> PatternJson {
        let cells = |m: &StarMask| {
            (0..m.rows())
                .map(|i| {
                    (0..m.cols())
                        .map(|j| if m.contains(i, j) { "*" } else { "0" }.to_string())
                        .collect()
                })
                .collect()
        };
        PatternJson {
            mask_a: cells(&self.mask_a),
            mask_b: cells(&self.mask_b),
            params: self.params.len(),
        }
    }

    pub fn from_json(json: &PatternJson) -> Result<Self> {
        let mask = |rows: &Vec<Vec<String>>| -> Result<StarMask> {
            let n = rows.len();
            let mut stars = Vec::new();
            for (i, row) in rows.iter().enumerate() {
                if row.len() != n {
                    return Err(Error::Input(format!("mask row {i} has {} cells, expected {n}", row.len())));
                }
                for (j, c) in row.iter().enumerate() {
                    match c.as_str() {
                        "*" => stars.push((i, j)),
                        "0" => {}
                        other => return Err(Error::Input(format!("unknown mask cell `{other}`"))),
                    }
                }
            }
            StarMask::new(n, n, stars)
        };
        let p = Self::new(mask(&json.mask_a)?, mask(&json.mask_b)?)?;
        if p.params.len() != json.params {
            return Err(Error::Input(format!(
                "pattern declares {} parameters but its masks have {}",
                json.params,
                p.params.len()
            )));
        }
        Ok(p)
    }
}

/// Wire form of a pattern: masks as rows of `"0"` / `"*"` cells.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternJson {
    #[serde(rename = "maskA")]
    pub mask_a: Vec<Vec<String>>,
    #[serde(rename = "maskB")]
    pub mask_b: Vec<Vec<String>>,
    pub params: usize,
}

impl fmt::Display for PatternPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (ga, gb) = (self.mask_a.grid(), self.mask_b.grid());
        let width = self.size().max(1);
        writeln!(f, "{:<width$}   {}", "A", "B")?;
        for (ra, rb) in ga.iter().zip(&gb) {
            writeln!(f, "{ra}   {rb}")?;
        }
        writeln!(f, "parameters: {}", self.params.len())?;
        for (id, p) in self.params.iter().enumerate() {
            writeln!(f, "  p{id}: {:?}({},{})", p.which, p.row + 1, p.col + 1)?;
        }
        Ok(())
    }
}

/// Pattern of the upper-right block `(i, j)` between two summands; its mirror
/// `(j, i)` is the transpose and reuses the same parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OffDiagonalBlock {
    pub mask_a: StarMask,
    pub mask_b: StarMask,
}

impl OffDiagonalBlock {
    fn zero(rows: usize, cols: usize) -> Self {
        Self {
            mask_a: StarMask::empty(rows, cols),
            mask_b: StarMask::empty(rows, cols),
        }
    }

    pub fn transpose(&self) -> Self {
        Self {
            mask_a: self.mask_a.transpose(),
            mask_b: self.mask_b.transpose(),
        }
    }

    pub fn count(&self) -> usize {
        self.mask_a.len() + self.mask_b.len()
    }
}

/// The configurable choices behind the shapes whose exact form admits more
/// than one reading.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShapeCatalog {
    pub nw_single: NwSingleRule,
    pub half_cap: CapVariant,
}

impl ShapeCatalog {
    pub fn diag_block(&self, spec: &BlockSpec) -> Result<PatternPair> {
        spec.validate()?;
        let size = spec.size();
        match *spec {
            BlockSpec::H { n, .. } => {
                PatternPair::new(StarMask::empty(n, n), shape(ShapeKind::NwTriple, n, n)?)
            }
            BlockSpec::K { n } => {
                PatternPair::new(shape(ShapeKind::NwTriple, n, n)?, StarMask::empty(n, n))
            }
            BlockSpec::L { n } => {
                let mut a = StarMask::empty(size, size);
                a.paste(0, 0, &shape(ShapeKind::CornerStar, n + 1, n + 1)?);
                let mut b = StarMask::empty(size, size);
                b.paste(0, 0, &shape(ShapeKind::NwseTriple, n + 1, n + 1)?);
                PatternPair::new(a, b)
            }
        }
    }

    pub fn offdiag_block(&self, first: &BlockSpec, second: &BlockSpec) -> Result<OffDiagonalBlock> {
        first.validate()?;
        second.validate()?;
        let (rows, cols) = (first.size(), second.size());
        if first.kind() > second.kind() {
            return Ok(self.offdiag_block(second, first)?.transpose());
        }
        let mut out = OffDiagonalBlock::zero(rows, cols);
        match (first, second) {
            (BlockSpec::H { lambda: l1, .. }, BlockSpec::H { lambda: l2, .. }) => {
                if l1 == l2 {
                    out.mask_b = shape(ShapeKind::NwSingle(self.nw_single), rows, cols)?;
                }
            }
            (BlockSpec::K { .. }, BlockSpec::K { .. }) => {
                out.mask_a = shape(ShapeKind::NwSingle(self.nw_single), rows, cols)?;
            }
            (&BlockSpec::L { n }, &BlockSpec::L { n: m }) => {
                out.mask_a.paste(0, 0, &shape(ShapeKind::CornerStar, n + 1, m + 1)?);
                out.mask_b
                    .paste(0, 0, &shape(ShapeKind::RightHalfCap(self.half_cap), n + 1, m + 1)?);
                out.mask_b.paste(0, m + 1, &shape(ShapeKind::QShape, n + 1, m)?);
                out.mask_b
                    .paste(n + 1, 0, &shape(ShapeKind::QShape, m + 1, n)?.transpose());
            }
            (BlockSpec::H { .. }, BlockSpec::K { .. }) => {}
            (BlockSpec::H { .. }, BlockSpec::L { .. }) => {
                out.mask_b = shape(ShapeKind::LeftColumn, rows, cols)?;
            }
            (&BlockSpec::K { n }, &BlockSpec::L { n: m }) => {
                out.mask_a.paste(0, 0, &shape(ShapeKind::RightColumn, n, m + 1)?);
            }
            _ => unreachable!("pairs are ordered H < K < L"),
        }
        Ok(out)
    }

    pub fn assemble(&self, structure: &CanonicalStructure) -> Result<PatternPair> {
        let n = structure.size();
        let offsets = structure.offsets();
        let blocks = structure.blocks();
        let mut a = StarMask::empty(n, n);
        let mut b = StarMask::empty(n, n);
        for (i, spec) in blocks.iter().enumerate() {
            let d = self.diag_block(spec)?;
            a.paste(offsets[i], offsets[i], d.mask_a());
            b.paste(offsets[i], offsets[i], d.mask_b());
            for (j, other) in blocks.iter().enumerate().skip(i + 1) {
                let off = self.offdiag_block(spec, other)?;
                a.paste(offsets[i], offsets[j], &off.mask_a);
                b.paste(offsets[i], offsets[j], &off.mask_b);
                a.paste(offsets[j], offsets[i], &off.mask_a.transpose());
                b.paste(offsets[j], offsets[i], &off.mask_b.transpose());
            }
        }
        PatternPair::new(a, b)
    }
}

pub fn diag_block_pattern(spec: &BlockSpec) -> Result<PatternPair> {
    ShapeCatalog::default().diag_block(spec)
}

pub fn offdiag_block_pattern(first: &BlockSpec, second: &BlockSpec) -> Result<OffDiagonalBlock> {
    ShapeCatalog::default().offdiag_block(first, second)
}

pub fn assemble_pattern(structure: &CanonicalStructure) -> Result<PatternPair> {
    ShapeCatalog::default().assemble(structure)
}

pub fn count_parameters(p: &PatternPair) -> usize {
    p.parameters().len()
}

/// Convenience for [`PatternPair::instantiate`].
pub fn instantiate(p: &PatternPair, values: &BTreeMap<ParamId, GaussianRational>) -> Result<SymPair> {
    p.instantiate(values)
}
