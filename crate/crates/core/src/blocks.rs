//! Canonical summands of a symmetric pair under congruence and their direct
//! sums.
//!
//! Three families exist:
//!
//! * `H_n(λ) = (Δ_n, Λ_n(λ))`, `n ≥ 1`
//! * `K_n = (Λ_n(0), Δ_n)`, `n ≥ 1`
//! * `L_n = ([0 Fᵀ; F 0], [0 Gᵀ; G 0])` with `F = F_n`, `G = G_n`, `n ≥ 0`,
//!   of size `2n+1`
//!
//! where `Δ_n` is the anti-identity, `Λ_n(λ)` carries `λ` on the anti-diagonal
//! and ones just below it, and `F_n`, `G_n` are `[I 0]` and `[0 I]`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{ExactMatrix, GaussianRational, SymPair};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BlockKind {
    H,
    K,
    L,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BlockSpec {
    H { n: usize, lambda: GaussianRational },
    K { n: usize },
    L { n: usize },
}

impl BlockSpec {
    pub fn h(n: usize, lambda: GaussianRational) -> Result<Self> {
        Self::H { n, lambda }.validated()
    }

    pub fn k(n: usize) -> Result<Self> {
        Self::K { n }.validated()
    }

    pub fn l(n: usize) -> Self {
        Self::L { n }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::H { n: 0, .. } | Self::K { n: 0 } => Err(Error::Size(format!(
                "{:?} blocks need n >= 1",
                self.kind()
            ))),
            _ => Ok(()),
        }
    }

    fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    pub fn kind(&self) -> BlockKind {
        match self {
            Self::H { .. } => BlockKind::H,
            Self::K { .. } => BlockKind::K,
            Self::L { .. } => BlockKind::L,
        }
    }

    /// The size parameter `n`.
    pub fn n(&self) -> usize {
        match *self {
            Self::H { n, .. } | Self::K { n } | Self::L { n } => n,
        }
    }

    pub fn lambda(&self) -> Option<&GaussianRational> {
        match self {
            Self::H { lambda, .. } => Some(lambda),
            _ => None,
        }
    }

    /// Side length of the realized block.
    pub fn size(&self) -> usize {
        match *self {
            Self::H { n, .. } | Self::K { n } => n,
            Self::L { n } => 2 * n + 1,
        }
    }
}

impl fmt::Display for BlockSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::H { n, lambda } => write!(f, "H({n},{lambda})"),
            Self::K { n } => write!(f, "K({n})"),
            Self::L { n } => write!(f, "L({n})"),
        }
    }
}

/// Parses the compact form `H(n,λ)`, `K(n)` or `L(n)`.
impl FromStr for BlockSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse {
            position: 0,
            message: format!("{msg} in block `{s}`"),
        };
        let kind = s.chars().next().ok_or_else(|| bad("empty block"))?;
        let args = s[1..]
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| bad("expected parentheses"))?;
        let mut parts = args.splitn(2, ',');
        let n: usize = parts
            .next()
            .unwrap_or("")
            .parse()
            .map_err(|_| bad("invalid size"))?;
        let lambda = parts.next();
        match (kind, lambda) {
            ('H', Some(l)) => Self::h(n, l.parse()?),
            ('K', None) => Self::k(n),
            ('L', None) => Ok(Self::l(n)),
            ('H', None) => Err(bad("H needs an eigenvalue")),
            ('K' | 'L', Some(_)) => Err(bad("only H takes an eigenvalue")),
            _ => Err(bad("unknown block kind")),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RawBlock {
    kind: BlockKind,
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lambda: Option<GaussianRational>,
}

impl Serialize for BlockSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RawBlock {
            kind: self.kind(),
            n: self.n(),
            lambda: self.lambda().cloned(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BlockSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawBlock::deserialize(deserializer)?;
        let spec = match (raw.kind, raw.lambda) {
            (BlockKind::H, Some(lambda)) => BlockSpec::h(raw.n, lambda),
            (BlockKind::K, None) => BlockSpec::k(raw.n),
            (BlockKind::L, None) => Ok(BlockSpec::l(raw.n)),
            (BlockKind::H, None) => return Err(D::Error::custom("H block requires `lambda`")),
            (_, Some(_)) => return Err(D::Error::custom("only H blocks carry `lambda`")),
        };
        spec.map_err(D::Error::custom)
    }
}

/// An ordered direct sum of canonical summands. Order is kept as given.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawStructure")]
pub struct CanonicalStructure {
    blocks: Vec<BlockSpec>,
}

#[derive(Deserialize)]
struct RawStructure {
    blocks: Vec<BlockSpec>,
}

impl TryFrom<RawStructure> for CanonicalStructure {
    type Error = Error;
    fn try_from(raw: RawStructure) -> Result<Self> {
        Self::new(raw.blocks)
    }
}

impl CanonicalStructure {
    pub fn new(blocks: Vec<BlockSpec>) -> Result<Self> {
        blocks.iter().try_for_each(BlockSpec::validate)?;
        Ok(Self { blocks })
    }

    pub fn blocks(&self) -> &[BlockSpec] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Total side length `N`.
    pub fn size(&self) -> usize {
        self.blocks.iter().map(BlockSpec::size).sum()
    }

    /// Row/column offset of each block in the assembled pair.
    pub fn offsets(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .scan(0, |acc, b| {
                let start = *acc;
                *acc += b.size();
                Some(start)
            })
            .collect()
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut blocks = self.blocks.clone();
        blocks.extend(other.blocks.iter().cloned());
        Self { blocks }
    }

    /// The two-block structure formed by blocks `i` and `j`, in that order.
    pub fn pair(&self, i: usize, j: usize) -> Self {
        Self {
            blocks: vec![self.blocks[i].clone(), self.blocks[j].clone()],
        }
    }
}

impl fmt::Display for CanonicalStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Parses `H(2,1/2),K(1),L(0)`, optionally wrapped in brackets and with
/// spaces after commas. `[]` and the empty string give the empty structure.
impl FromStr for CanonicalStructure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let body = compact
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .unwrap_or(&compact);
        let mut blocks = Vec::new();
        let mut depth = 0usize;
        let mut start = 0;
        for (k, c) in body.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth = depth.saturating_sub(1),
                ',' if depth == 0 => {
                    blocks.push(body[start..k].parse()?);
                    start = k + 1;
                }
                _ => {}
            }
        }
        if start < body.len() {
            blocks.push(body[start..].parse()?);
        }
        Self::new(blocks)
    }
}

fn one() -> GaussianRational {
    GaussianRational::one()
}

/// `Λ_n(λ)`: `λ` where `i+j = n+1`, `1` where `i+j = n+2` (1-based).
pub fn lambda_matrix(n: usize, lambda: &GaussianRational) -> Result<ExactMatrix> {
    if n == 0 {
        return Err(Error::Size("Λ_n needs n >= 1".into()));
    }
    Ok(ExactMatrix::from_fn(n, n, |i, j| match i + j + 2 {
        s if s == n + 1 => lambda.clone(),
        s if s == n + 2 => one(),
        _ => GaussianRational::zero(),
    }))
}

/// `Δ_n`, the `n×n` anti-identity.
pub fn delta_matrix(n: usize) -> Result<ExactMatrix> {
    if n == 0 {
        return Err(Error::Size("Δ_n needs n >= 1".into()));
    }
    Ok(ExactMatrix::from_fn(n, n, |i, j| {
        if i + j + 1 == n {
            one()
        } else {
            GaussianRational::zero()
        }
    }))
}

/// `(F_n, G_n)`, both `n×(n+1)`: `F_n = [I_n 0]`, `G_n = [0 I_n]`.
pub fn fg_matrices(n: usize) -> (ExactMatrix, ExactMatrix) {
    let f = ExactMatrix::from_fn(n, n + 1, |i, j| {
        if j == i {
            one()
        } else {
            GaussianRational::zero()
        }
    });
    let g = ExactMatrix::from_fn(n, n + 1, |i, j| {
        if j == i + 1 {
            one()
        } else {
            GaussianRational::zero()
        }
    });
    (f, g)
}

/// `[0 Mᵀ; M 0]` for an `n×(n+1)` matrix `M`.
fn l_shape(m: &ExactMatrix) -> ExactMatrix {
    let n = m.rows();
    let mut out = ExactMatrix::zeros(2 * n + 1, 2 * n + 1);
    out.set_block(0, n + 1, &m.transpose());
    out.set_block(n + 1, 0, m);
    out
}

pub fn make_block(spec: &BlockSpec) -> Result<SymPair> {
    spec.validate()?;
    match spec {
        BlockSpec::H { n, lambda } => SymPair::new(delta_matrix(*n)?, lambda_matrix(*n, lambda)?),
        BlockSpec::K { n } => SymPair::new(lambda_matrix(*n, &GaussianRational::zero())?, delta_matrix(*n)?),
        BlockSpec::L { n } => {
            let (f, g) = fg_matrices(*n);
            SymPair::new(l_shape(&f), l_shape(&g))
        }
    }
}

/// Block-diagonal direct sum of the summands, in the given order.
pub fn assemble(structure: &CanonicalStructure) -> Result<SymPair> {
    structure
        .blocks()
        .iter()
        .try_fold(SymPair::zero(0), |acc, b| Ok(acc.direct_sum(&make_block(b)?)))
}
