//! Deterministic sweeps over families of canonical structures.
//!
//! Each structure is checked three ways: the assembled pattern against the
//! rank criterion, the assembled pattern against the greedy construction, and
//! optionally the slice projection on seeded random perturbations. Any failure
//! lands in the ledger together with the smallest sub-structure (one block or
//! a pair of blocks) that already fails.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::blocks::{assemble, BlockSpec, CanonicalStructure};
use crate::error::Result;
use crate::exact::{pair_space_dim, GaussianRational, SymPair};
use crate::patterns::{ParamSlot, PatternPair, ShapeCatalog};
use crate::slice::{idempotent_on, ColumnOrder, SliceProjector};
use crate::tangent::{greedy_minimal_pattern, is_miniversal, MiniversalityCertificate};

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepBounds {
    /// Largest `n` for `H_n` and `K_n`; `L_n` runs up to `n = max_block_n - 1`.
    pub max_block_n: usize,
    pub max_total: usize,
    pub max_blocks: usize,
    pub lambdas: Vec<GaussianRational>,
}

impl Default for SweepBounds {
    fn default() -> Self {
        Self {
            max_block_n: 6,
            max_total: 10,
            max_blocks: 2,
            lambdas: default_lambdas(),
        }
    }
}

pub fn default_lambdas() -> Vec<GaussianRational> {
    ["0", "1", "-1", "1/2", "1+1i"]
        .iter()
        .map(|s| s.parse().expect("literal"))
        .collect()
}

/// Blocks within the bounds, by size ascending; equal sizes list `H` for each
/// eigenvalue in the given order, then `K`, then `L`.
pub fn block_family(bounds: &SweepBounds) -> Vec<BlockSpec> {
    let mut out = Vec::new();
    for n in 1..=bounds.max_block_n {
        for l in &bounds.lambdas {
            out.push(BlockSpec::H { n, lambda: l.clone() });
        }
        out.push(BlockSpec::K { n });
    }
    for n in 0..bounds.max_block_n {
        out.push(BlockSpec::L { n });
    }
    out.retain(|b| b.size() <= bounds.max_total);
    out.sort_by_key(BlockSpec::size);
    out
}

/// Every ordered tuple of up to `max_blocks` family members with total size
/// at most `max_total`, by block count, then total size, then family index.
pub fn enumerate_structures(bounds: &SweepBounds) -> Vec<CanonicalStructure> {
    let family = block_family(bounds);
    let mut tuples: Vec<Vec<usize>> = Vec::new();
    let mut frontier: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), 0)];
    for _ in 0..bounds.max_blocks {
        let mut next = Vec::new();
        for (t, total) in &frontier {
            for (i, b) in family.iter().enumerate() {
                if total + b.size() <= bounds.max_total {
                    let mut u = t.clone();
                    u.push(i);
                    next.push((u, total + b.size()));
                }
            }
        }
        let mut layer = next.clone();
        layer.sort_by_key(|(_, total)| *total);
        tuples.extend(layer.into_iter().map(|(t, _)| t));
        frontier = next;
    }
    tuples
        .into_iter()
        .map(|t| CanonicalStructure::new(t.into_iter().map(|i| family[i].clone()).collect()))
        .collect::<Result<_>>()
        .expect("family members are valid")
}

/// `count` distinct structures of exactly `blocks` summands within the
/// bounds, drawn from a seeded generator.
pub fn sample_structures(bounds: &SweepBounds, blocks: usize, count: usize, seed: u64) -> Vec<CanonicalStructure> {
    let family = block_family(bounds);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<CanonicalStructure> = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < 1000 * count.max(1) {
        attempts += 1;
        let picked: Vec<BlockSpec> = (0..blocks)
            .map(|_| family[rng.gen_range(0..family.len())].clone())
            .collect();
        if picked.iter().map(BlockSpec::size).sum::<usize>() > bounds.max_total {
            continue;
        }
        let s = CanonicalStructure::new(picked).expect("family members are valid");
        if !out.contains(&s) {
            out.push(s);
        }
    }
    out
}

/// A symmetric pair whose independent entries are Gaussian rationals with
/// small numerators and denominators.
pub fn random_perturbation(n: usize, rng: &mut impl Rng) -> SymPair {
    let part = |rng: &mut dyn rand::RngCore| -> BigRational {
        if rng.gen_bool(0.3) {
            return BigRational::from_integer(0.into());
        }
        BigRational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=4).into())
    };
    let v: Vec<GaussianRational> = (0..pair_space_dim(n))
        .map(|_| GaussianRational::new(part(rng), part(rng)))
        .collect();
    SymPair::from_vector(n, &v).expect("length matches")
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ProjectionSummary {
    pub perturbations: usize,
    pub residual: bool,
    pub idempotent: bool,
    pub linear: bool,
    /// Two solves with different column orders gave the same parameters.
    pub orders_agree: bool,
}

impl ProjectionSummary {
    pub fn passed(&self) -> bool {
        self.residual && self.idempotent && self.linear && self.orders_agree
    }
}

/// Projects `count` seeded random perturbations and checks the residual
/// identity, idempotence, additivity over consecutive pairs, and agreement of
/// the two column orders.
pub fn check_projection(k: &SymPair, p: &PatternPair, count: usize, seed: u64) -> Result<ProjectionSummary> {
    let main = SliceProjector::new(k, p)?;
    let other = SliceProjector::with_order(k, p, ColumnOrder::PatternFirst)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = ProjectionSummary {
        perturbations: count,
        residual: true,
        idempotent: true,
        linear: true,
        orders_agree: true,
    };
    let mut previous: Option<(SymPair, crate::slice::SliceProjection)> = None;
    for _ in 0..count {
        let e = random_perturbation(k.size(), &mut rng);
        let r = main.project(&e)?;
        s.residual &= r.residual_check;
        s.idempotent &= idempotent_on(&main, &r)?;
        let alt = other.project(&e)?;
        s.orders_agree &= alt.residual_check && alt.d_values == r.d_values;
        if let Some((pe, pr)) = &previous {
            let sum = main.project(&e.checked_add(pe)?)?;
            s.linear &= sum
                .d_values
                .iter()
                .all(|(id, v)| *v == &r.d_values[id] + &pr.d_values[id]);
        }
        previous = Some((e, r));
    }
    Ok(s)
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub index: usize,
    pub structure: String,
    pub size: usize,
    pub codim: usize,
    pub tangent_rank: usize,
    pub pattern_params: usize,
    pub combined_rank: usize,
    pub direct_sum: bool,
    pub greedy_params: Option<usize>,
    pub theorem_positions: Vec<ParamSlot>,
    pub greedy_positions: Option<Vec<ParamSlot>>,
    pub projection: Option<ProjectionSummary>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.direct_sum
            && self.greedy_params.is_none_or(|g| g == self.pattern_params && g == self.codim)
            && self.projection.as_ref().is_none_or(ProjectionSummary::passed)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LedgerEntry {
    pub index: usize,
    pub structure: String,
    pub check: String,
    /// Smallest sub-structure on which the same check already fails.
    pub minimal_failing: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub structures: Vec<StructureReport>,
    pub ledger: Vec<LedgerEntry>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.ledger.is_empty()
    }
}

/// What to run on each structure.
#[derive(Clone, Copy, Debug)]
pub struct SweepOptions {
    pub greedy: bool,
    pub perturbations: usize,
    pub seed: u64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            greedy: true,
            perturbations: 0,
            seed: DEFAULT_SEED,
        }
    }
}

/// Source of the pattern checked for each structure.
pub trait PatternSource: Sync {
    fn pattern(&self, structure: &CanonicalStructure) -> Result<PatternPair>;
}

impl PatternSource for ShapeCatalog {
    fn pattern(&self, structure: &CanonicalStructure) -> Result<PatternPair> {
        self.assemble(structure)
    }
}

impl<F> PatternSource for F
where
    F: Fn(&CanonicalStructure) -> Result<PatternPair> + Sync,
{
    fn pattern(&self, structure: &CanonicalStructure) -> Result<PatternPair> {
        self(structure)
    }
}

/// Checks one structure; `index` only labels the report and seeds its
/// perturbations.
pub fn verify_structure(
    index: usize,
    structure: &CanonicalStructure,
    source: &dyn PatternSource,
    options: &SweepOptions,
) -> Result<(StructureReport, Vec<LedgerEntry>)> {
    let k = assemble(structure)?;
    let p = source.pattern(structure)?;
    let cert = is_miniversal(&k, &p)?;
    let mut ledger = Vec::new();
    let entry = |check: &str, minimal: &CanonicalStructure, detail: String| LedgerEntry {
        index,
        structure: structure.to_string(),
        check: check.into(),
        minimal_failing: minimal.to_string(),
        detail,
    };

    if !cert.holds() {
        let (minimal, c) = minimal_failing(structure, &p, &cert)?;
        ledger.push(entry("miniversal", &minimal, describe(&c)));
    }

    let greedy = options.greedy.then(|| greedy_minimal_pattern(&k));
    if let Some(g) = &greedy {
        let gp = g.parameters().len();
        if gp != cert.pattern_params || gp != cert.codim {
            ledger.push(entry(
                "greedy_count",
                structure,
                format!("greedy {gp}, theorem {}, codim {}", cert.pattern_params, cert.codim),
            ));
        }
    }

    let projection = if options.perturbations > 0 && cert.holds() {
        let seed = options.seed ^ (index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
        let s = check_projection(&k, &p, options.perturbations, seed)?;
        if !s.passed() {
            ledger.push(entry("projection", structure, format!("{s:?}")));
        }
        Some(s)
    } else {
        None
    };

    let report = StructureReport {
        index,
        structure: structure.to_string(),
        size: cert.size,
        codim: cert.codim,
        tangent_rank: cert.tangent_rank,
        pattern_params: cert.pattern_params,
        combined_rank: cert.combined_rank,
        direct_sum: cert.direct_sum,
        greedy_params: greedy.as_ref().map(|g| g.parameters().len()),
        theorem_positions: p.parameters().to_vec(),
        greedy_positions: greedy.map(|g| g.parameters().to_vec()),
        projection,
    };
    Ok((report, ledger))
}

fn describe(c: &MiniversalityCertificate) -> String {
    format!(
        "codim {}, params {}, combined rank {} of {}",
        c.codim, c.pattern_params, c.combined_rank, c.space_dim
    )
}

/// A single block whose restricted pattern fails, else a failing pair of
/// blocks, else the whole structure.
fn minimal_failing(
    structure: &CanonicalStructure,
    p: &PatternPair,
    whole: &MiniversalityCertificate,
) -> Result<(CanonicalStructure, MiniversalityCertificate)> {
    let offsets = structure.offsets();
    let blocks = structure.blocks();
    for (i, b) in blocks.iter().enumerate() {
        let sub = CanonicalStructure::new(vec![b.clone()])?;
        let c = is_miniversal(&assemble(&sub)?, &p.restrict_diagonal(offsets[i], b.size()))?;
        if !c.holds() {
            return Ok((sub, c));
        }
    }
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            let sub = structure.pair(i, j);
            let r = p.restrict((offsets[i], blocks[i].size()), (offsets[j], blocks[j].size()));
            let c = is_miniversal(&assemble(&sub)?, &r)?;
            if !c.holds() {
                return Ok((sub, c));
            }
        }
    }
    Ok((structure.clone(), whole.clone()))
}

/// Runs [`verify_structure`] over `structures` in parallel; the report keeps
/// the input order.
pub fn run_sweep(
    structures: &[CanonicalStructure],
    source: &dyn PatternSource,
    options: &SweepOptions,
) -> Result<SweepReport> {
    let results: Vec<(StructureReport, Vec<LedgerEntry>)> = structures
        .par_iter()
        .enumerate()
        .map(|(i, s)| verify_structure(i, s, source, options))
        .collect::<Result<_>>()?;
    let mut report = SweepReport {
        structures: Vec::with_capacity(results.len()),
        ledger: Vec::new(),
    };
    for (r, l) in results {
        report.structures.push(r);
        report.ledger.extend(l);
    }
    Ok(report)
}
