//! Reduction of a perturbation onto a miniversal slice.
//!
//! Given a miniversal pattern `P` for `K`, every perturbation `E` differs from
//! exactly one pattern-supported pair by a tangent vector:
//! `P(d) = E + (CᵀK + KC)`. This module computes `d` and one such `C`.
//!
//! Only the first-order (linear) part of the normal-form reduction is computed;
//! higher-order terms of the reducing transformation are not. Because the
//! algebra is exact and linear, the projection is defined for perturbations of
//! any magnitude, not only small ones.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{ExactMatrix, GaussianRational, SparseLu, SymPair};
use crate::patterns::{ParamId, PatternPair};
use crate::tangent::{is_miniversal, tangent_basis, tangent_perturbation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceProjection {
    pub d_values: BTreeMap<ParamId, GaussianRational>,
    pub reducer: ExactMatrix,
    /// `instantiate(p, d_values) == e + tangent_perturbation(k, reducer)`.
    pub residual_check: bool,
}

/// Column order of the linear system `[T | P]` solved for a projection.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ColumnOrder {
    #[default]
    TangentFirst,
    PatternFirst,
}

/// A factored projection system for one `(K, P)`, reusable across many
/// perturbations.
#[derive(Clone, Debug)]
pub struct SliceProjector {
    k: SymPair,
    p: PatternPair,
    order: ColumnOrder,
    lu: SparseLu,
}

impl SliceProjector {
    pub fn new(k: &SymPair, p: &PatternPair) -> Result<Self> {
        Self::with_order(k, p, ColumnOrder::TangentFirst)
    }

    pub fn with_order(k: &SymPair, p: &PatternPair, order: ColumnOrder) -> Result<Self> {
        let cert = is_miniversal(k, p)?;
        if !cert.holds() {
            return Err(Error::Precondition(format!(
                "pattern is not miniversal: codim {}, {} parameters, combined rank {} of {}",
                cert.codim, cert.pattern_params, cert.combined_rank, cert.space_dim
            )));
        }
        let t = tangent_basis(k).image_matrix();
        let coords = p.coordinates();
        let nt = t.cols();
        let np = coords.len();
        let (t0, p0) = match order {
            ColumnOrder::TangentFirst => (0, nt),
            ColumnOrder::PatternFirst => (np, 0),
        };
        let mut m = ExactMatrix::zeros(t.rows(), nt + np);
        m.set_block(0, t0, &t);
        for (j, &u) in coords.iter().enumerate() {
            m[(u, p0 + j)] = GaussianRational::from_int(1);
        }
        Ok(Self {
            k: k.clone(),
            p: p.clone(),
            order,
            lu: SparseLu::factor(&m),
        })
    }

    pub fn pair(&self) -> &SymPair {
        &self.k
    }

    pub fn pattern(&self) -> &PatternPair {
        &self.p
    }

    pub fn project(&self, e: &SymPair) -> Result<SliceProjection> {
        let n = self.k.size();
        if e.size() != n {
            return Err(Error::DimensionMismatch(format!(
                "perturbation is {}x{}, pair is {n}x{n}",
                e.size(),
                e.size()
            )));
        }
        let Some(x) = self.lu.solve(&e.vectorize())? else {
            return Err(Error::Internal(
                "projection system is inconsistent for a miniversal pattern".into(),
            ));
        };
        let nt = n * n;
        let np = self.p.parameters().len();
        let (t0, p0) = match self.order {
            ColumnOrder::TangentFirst => (0, nt),
            ColumnOrder::PatternFirst => (np, 0),
        };
        let d_values: BTreeMap<ParamId, GaussianRational> =
            (0..np).map(|id| (id, x[p0 + id].clone())).collect();
        let reducer = ExactMatrix::from_fn(n, n, |r, c| -x[t0 + r * n + c].clone());
        let lhs = self.p.instantiate(&d_values)?;
        let rhs = e.checked_add(&tangent_perturbation(&self.k, &reducer)?)?;
        let residual_check = lhs == rhs;
        debug_assert!(residual_check);
        Ok(SliceProjection {
            d_values,
            reducer,
            residual_check,
        })
    }
}

pub fn project_to_slice(k: &SymPair, e: &SymPair, p: &PatternPair) -> Result<SliceProjection> {
    SliceProjector::new(k, p)?.project(e)
}

/// Projects `e`, then projects the pattern-supported result again: the second
/// projection must return the same parameter values with a zero reducer.
pub fn project_idempotence_check(k: &SymPair, e: &SymPair, p: &PatternPair) -> Result<bool> {
    let projector = SliceProjector::new(k, p)?;
    idempotent_on(&projector, &projector.project(e)?)
}

/// The idempotence check given the first projection.
pub(crate) fn idempotent_on(projector: &SliceProjector, first: &SliceProjection) -> Result<bool> {
    let fixed = projector.pattern().instantiate(&first.d_values)?;
    let second = projector.project(&fixed)?;
    Ok(first.residual_check
        && second.residual_check
        && second.d_values == first.d_values
        && second.reducer.entries().iter().all(Zero::is_zero))
}
