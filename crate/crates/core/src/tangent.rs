//! Tangent space of the congruence orbit of a symmetric pair, orbit
//! codimension, and exact transversality checks for `(0,*)` patterns.
//!
//! For a pair `K = (A, B)` the tangent space is `T(K) = {CᵀK + KC}` over all
//! square `C`. A pattern `P` gives a miniversal deformation `K + P(ε)` exactly
//! when the symmetric-pair space splits as `T(K) ⊕ P(ℂ)`: the two spaces span
//! everything and the pattern has as many parameters as the orbit has
//! codimension.

use serde::Serialize;

use crate::blocks::{assemble, BlockSpec, CanonicalStructure};
use crate::error::{Error, Result};
use crate::exact::{pair_space_dim, ExactMatrix, Echelon, GaussianRational, SymPair};
use crate::patterns::PatternPair;

/// `(CᵀA + AC, CᵀB + BC)`.
pub fn tangent_perturbation(k: &SymPair, c: &ExactMatrix) -> Result<SymPair> {
    let n = k.size();
    if c.rows() != n || c.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "generator is {}x{}, pair is {n}x{n}",
            c.rows(),
            c.cols()
        )));
    }
    // With `M` symmetric, `CᵀM = (MC)ᵀ`.
    let side = |m: &ExactMatrix| -> Result<ExactMatrix> {
        let mc = m.checked_mul(c)?;
        mc.transpose().checked_add(&mc)
    };
    SymPair::new(side(k.a())?, side(k.b())?)
}

/// Image of the elementary generator `E_kl`: row `l` receives row `k` of the
/// matrix and column `l` receives column `k`.
fn elementary_image(m: &ExactMatrix, k: usize, l: usize) -> ExactMatrix {
    let n = m.rows();
    let mut out = ExactMatrix::zeros(n, n);
    for j in 0..n {
        out[(l, j)] += &m[(k, j)];
    }
    for i in 0..n {
        out[(i, l)] += &m[(i, k)];
    }
    out
}

#[derive(Clone, Debug)]
pub struct Generator {
    /// Row and column of the single 1 in `C`.
    pub index: (usize, usize),
    pub c: ExactMatrix,
    pub image: SymPair,
}

/// Images of all `n²` elementary generators `C = E_kl`, listed with `k`
/// major. They span `T(K)` but are in general linearly dependent.
#[derive(Clone, Debug)]
pub struct TangentBasis {
    base_pair: SymPair,
    generators: Vec<Generator>,
}

impl TangentBasis {
    pub fn base_pair(&self) -> &SymPair {
        &self.base_pair
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// The `n(n+1) × n²` matrix whose columns are the vectorized images.
    pub fn image_matrix(&self) -> ExactMatrix {
        let n = self.base_pair.size();
        let cols: Vec<Vec<GaussianRational>> =
            self.generators.iter().map(|g| g.image.vectorize()).collect();
        ExactMatrix::from_fn(pair_space_dim(n), cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn rank(&self) -> usize {
        crate::exact::rank(&self.image_matrix())
    }
}

pub fn tangent_basis(k: &SymPair) -> TangentBasis {
    let n = k.size();
    let generators = (0..n)
        .flat_map(|r| (0..n).map(move |c| (r, c)))
        .map(|(r, c)| {
            let image = SymPair::new(elementary_image(k.a(), r, c), elementary_image(k.b(), r, c))
                .expect("tangent images of a symmetric pair are symmetric");
            Generator {
                index: (r, c),
                c: ExactMatrix::elementary(n, n, r, c),
                image,
            }
        })
        .collect();
    TangentBasis {
        base_pair: k.clone(),
        generators,
    }
}

/// `[T | extra]`: tangent image columns followed by unit columns at the given
/// vectorized coordinates.
pub(crate) fn tangent_with_units(basis: &TangentBasis, units: &[usize]) -> ExactMatrix {
    let t = basis.image_matrix();
    let n_t = t.cols();
    let mut m = ExactMatrix::zeros(t.rows(), n_t + units.len());
    m.set_block(0, 0, &t);
    for (k, &u) in units.iter().enumerate() {
        m[(u, n_t + k)] = GaussianRational::from_int(1);
    }
    m
}

/// `n(n+1) − rank T(K)`.
pub fn codimension(k: &SymPair) -> usize {
    pair_space_dim(k.size()) - tangent_basis(k).rank()
}

/// Outcome of a transversality check, with the ranks that decide it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MiniversalityCertificate {
    pub size: usize,
    pub space_dim: usize,
    pub tangent_rank: usize,
    pub codim: usize,
    pub pattern_params: usize,
    /// Rank of the tangent images together with the pattern's unit vectors.
    pub combined_rank: usize,
    /// Tangent space and pattern together span the pair space.
    pub spans: bool,
    /// The sum is direct: spanning and parameter count equal to codimension.
    pub direct_sum: bool,
}

impl MiniversalityCertificate {
    pub fn holds(&self) -> bool {
        self.direct_sum
    }
}

pub fn is_miniversal(k: &SymPair, p: &PatternPair) -> Result<MiniversalityCertificate> {
    let n = k.size();
    if p.size() != n {
        return Err(Error::DimensionMismatch(format!(
            "pattern is {}x{}, pair is {n}x{n}",
            p.size(),
            p.size()
        )));
    }
    let basis = tangent_basis(k);
    let coords = p.coordinates();
    let m = tangent_with_units(&basis, &coords);
    let echelon = Echelon::reduce(&m);
    let tangent_rank = echelon
        .pivot_columns()
        .iter()
        .take_while(|&&c| c < n * n)
        .count();
    let combined_rank = echelon.rank();
    let space_dim = pair_space_dim(n);
    let codim = space_dim - tangent_rank;
    let spans = combined_rank == space_dim;
    Ok(MiniversalityCertificate {
        size: n,
        space_dim,
        tangent_rank,
        codim,
        pattern_params: coords.len(),
        combined_rank,
        spans,
        direct_sum: spans && coords.len() == codim,
    })
}

/// Miniversality of the restriction of an assembled pattern to the direct sum
/// of two summands. A pattern is miniversal for a direct sum exactly when it
/// is for every such two-summand restriction.
pub fn verify_block_pair(
    first: &BlockSpec,
    second: &BlockSpec,
    restriction: &PatternPair,
) -> Result<MiniversalityCertificate> {
    let structure = CanonicalStructure::new(vec![first.clone(), second.clone()])?;
    is_miniversal(&assemble(&structure)?, restriction)
}

/// The simplest miniversal pattern obtained by scanning the elementary
/// symmetric pairs in vectorization order and keeping each one that is not a
/// combination of the tangent space and the pairs kept before it.
///
/// The scan order is a convention; other orders give other valid patterns
/// with the same number of parameters.
pub fn greedy_minimal_pattern(k: &SymPair) -> PatternPair {
    let n = k.size();
    let basis = tangent_basis(k);
    let dim = pair_space_dim(n);
    let all: Vec<usize> = (0..dim).collect();
    let m = tangent_with_units(&basis, &all);
    let kept = crate::exact::pivot_columns(&m)
        .into_iter()
        .filter(|&c| c >= n * n)
        .map(|c| c - n * n);
    PatternPair::from_coordinates(n, kept).expect("kept coordinates are in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::make_block;
    use crate::patterns::StarMask;

    fn q(s: &str) -> GaussianRational {
        s.parse().unwrap()
    }

    fn h(n: usize, l: &str) -> SymPair {
        make_block(&BlockSpec::h(n, q(l)).unwrap()).unwrap()
    }

    #[test]
    fn perturbation_examples() {
        let p = tangent_perturbation(&h(1, "3"), &ExactMatrix::from_i64_rows(&[[1]])).unwrap();
        assert_eq!(p.a(), &ExactMatrix::from_i64_rows(&[[2]]));
        assert_eq!(p.b(), &ExactMatrix::from_i64_rows(&[[6]]));

        let z = tangent_perturbation(&SymPair::zero(1), &ExactMatrix::from_i64_rows(&[[5]])).unwrap();
        assert!(z.is_zero());

        let p = tangent_perturbation(&h(2, "0"), &ExactMatrix::elementary(2, 2, 0, 0)).unwrap();
        assert_eq!(p.a(), &ExactMatrix::from_i64_rows(&[[0, 1], [1, 0]]));
        assert!(p.b().is_zero());

        assert!(tangent_perturbation(&h(2, "0"), &ExactMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn elementary_images_match_general_formula() {
        let k = h(3, "1/2+i");
        for g in tangent_basis(&k).generators() {
            assert_eq!(g.image, tangent_perturbation(&k, &g.c).unwrap());
        }
    }

    #[test]
    fn basis_examples() {
        let b = tangent_basis(&h(1, "5"));
        assert_eq!(b.generators().len(), 1);
        assert_eq!(b.generators()[0].image.vectorize(), vec![q("2"), q("10")]);

        let b = tangent_basis(&SymPair::zero(1));
        assert!(b.generators()[0].image.is_zero());

        let b = tangent_basis(&h(2, "5"));
        assert_eq!(b.generators().len(), 4);
        assert_eq!(b.rank(), 4);
    }

    #[test]
    fn codimension_examples() {
        for l in ["0", "1", "-7/3", "2i"] {
            assert_eq!(codimension(&h(1, l)), 1);
        }
        assert_eq!(codimension(&SymPair::zero(1)), 2);
        assert_eq!(codimension(&h(2, "5")), 2);
        assert_eq!(codimension(&SymPair::zero(0)), 0);
    }

    #[test]
    fn miniversal_examples() {
        let b_only = PatternPair::new(StarMask::empty(1, 1), StarMask::new(1, 1, [(0, 0)]).unwrap()).unwrap();
        let cert = is_miniversal(&h(1, "3"), &b_only).unwrap();
        assert!(cert.holds());
        assert_eq!((cert.tangent_rank, cert.codim, cert.pattern_params), (1, 1, 1));

        let cert = is_miniversal(&h(1, "3"), &PatternPair::empty(1)).unwrap();
        assert!(!cert.holds());
        assert!(!cert.spans);

        let both = PatternPair::from_coordinates(1, [0, 1]).unwrap();
        assert!(is_miniversal(&SymPair::zero(1), &both).unwrap().holds());
        // Spanning but with a redundant parameter is not miniversal.
        let cert = is_miniversal(&h(1, "3"), &both).unwrap();
        assert!(cert.spans && !cert.direct_sum);

        assert!(is_miniversal(&h(2, "3"), &both).is_err());
    }

    #[test]
    fn greedy_examples() {
        let g = greedy_minimal_pattern(&SymPair::zero(1));
        assert_eq!(g.mask_a().stars().collect::<Vec<_>>(), vec![(0, 0)]);
        assert_eq!(g.mask_b().stars().collect::<Vec<_>>(), vec![(0, 0)]);

        let g = greedy_minimal_pattern(&h(1, "0"));
        assert!(g.mask_a().is_empty());
        assert_eq!(g.mask_b().stars().collect::<Vec<_>>(), vec![(0, 0)]);
    }
}
