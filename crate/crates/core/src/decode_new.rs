//! The improved two-step majority-logic decoder.
//!
//! Five function levels over the precomputed flat family: check-sums of the
//! delta*(delta-2) r-flats, one majority per spread row, an XOR
//! normalization of each check-sum against its row majority, a per-position
//! majority over the delta-2 normalized values, and the final correction
//! XOR. Within the guaranteed radius t = delta/2 - 1 the normalized value
//! of a flat equals its true error parity and the output equals the
//! transmitted codeword.

use crate::code::CodeParams;
use crate::geometry::{self, CosetSystem, GeometryError, IndexMaps};
use crate::gf2::{Gf2Error, Word};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecodeError {
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("majority of an empty input is undefined")]
    EmptyMajority,
    #[error("word length {got} does not match code length {expected}")]
    WordLength { expected: usize, got: usize },
    #[error("error pattern weight {0} exceeds radius {1}")]
    WeightOverRadius(u32, u32),
}

/// Strict majority: 1 iff more than floor(s/2) inputs are 1. Ties on even
/// input counts return 0; within the error radius the tie cannot occur, so
/// the choice only affects beyond-radius behavior.
pub fn majority(bits: &[bool]) -> Result<bool, DecodeError> {
    if bits.is_empty() {
        return Err(DecodeError::EmptyMajority);
    }
    let ones = bits.iter().filter(|&&b| b).count();
    Ok(ones > bits.len() / 2)
}

/// Check-sum: parity of the received word restricted to the mask.
pub fn checksum(z: &Word, mask: &Word) -> Result<bool, DecodeError> {
    Ok(z.masked_parity(mask)?)
}

/// Per-function-level call counters; the closed forms are checked against
/// these in the metrics tests.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CallCounters {
    pub checksums: usize,
    pub majorities: usize,
    pub xors: usize,
}

/// Precomputed decoder tables: the coset system, the phi/psi maps, and one
/// incidence mask per r-flat. Immutable; shared freely across workers.
#[derive(Debug, Clone)]
pub struct DecoderPlan {
    params: CodeParams,
    cosets: CosetSystem,
    maps: IndexMaps,
    /// flat_masks[l][j] = incidence vector of the j-th flat of row l.
    flat_masks: Vec<Vec<Word>>,
}

impl DecoderPlan {
    /// Assemble a plan from an explicit coset system (fixture injection,
    /// plan-file loading).
    pub fn from_cosets(cosets: CosetSystem) -> Self {
        let params = *cosets.params();
        let maps = geometry::index_maps(&cosets);
        let flat_masks = cosets
            .rows()
            .iter()
            .map(|row| row.flats.iter().map(|f| f.incidence()).collect())
            .collect();
        Self {
            params,
            cosets,
            maps,
            flat_masks,
        }
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn cosets(&self) -> &CosetSystem {
        &self.cosets
    }

    pub fn maps(&self) -> &IndexMaps {
        &self.maps
    }

    pub fn flat_masks(&self) -> &[Vec<Word>] {
        &self.flat_masks
    }
}

pub fn build_plan(params: &CodeParams) -> Result<DecoderPlan, DecodeError> {
    let spread = geometry::build_spread(params)?;
    let cosets = geometry::coset_system(&spread)?;
    Ok(DecoderPlan::from_cosets(cosets))
}

/// Full record of one decoding run: all intermediate levels plus counters.
#[derive(Debug, Clone)]
pub struct DecodeTrace {
    /// sigma[l][j]: check-sum of flat j of row l, (delta-2) x delta.
    pub sigma: Vec<Vec<bool>>,
    /// mu[l]: row majority.
    pub mu: Vec<bool>,
    /// sigma_bar[l][j] = sigma[l][j] XOR mu[l].
    pub sigma_bar: Vec<Vec<bool>>,
    /// Estimated error pattern.
    pub eta: Word,
    /// z XOR eta.
    pub corrected: Word,
    pub counters: CallCounters,
}

pub fn decode(plan: &DecoderPlan, z: &Word) -> Result<DecodeTrace, DecodeError> {
    if z.len() != plan.params.n {
        return Err(DecodeError::WordLength {
            expected: plan.params.n,
            got: z.len(),
        });
    }
    let rows = plan.flat_masks.len();
    let mut counters = CallCounters::default();

    // level 1: check-sums of every r-flat
    let mut sigma: Vec<Vec<bool>> = Vec::with_capacity(rows);
    for masks in &plan.flat_masks {
        let row: Vec<bool> = masks
            .iter()
            .map(|mask| z.masked_parity(mask))
            .collect::<Result<_, _>>()?;
        counters.checksums += row.len();
        sigma.push(row);
    }

    // level 2: one majority per row
    let mut mu = Vec::with_capacity(rows);
    for row in &sigma {
        mu.push(majority(row)?);
        counters.majorities += 1;
    }

    // level 3: normalize check-sums by the row majority
    let sigma_bar: Vec<Vec<bool>> = sigma
        .iter()
        .zip(&mu)
        .map(|(row, &m)| {
            counters.xors += row.len();
            row.iter().map(|&s| s ^ m).collect()
        })
        .collect();

    // level 4: per-position majority over the rows
    let mut eta = Word::zeros(plan.params.n);
    let mut votes = vec![false; rows];
    for j in 0..plan.params.n {
        for l in 0..rows {
            votes[l] = sigma_bar[l][plan.maps.phi[l][j]];
        }
        eta.set(j, majority(&votes)?);
        counters.majorities += 1;
    }

    // level 5: correction
    let corrected = z.xor(&eta)?;
    counters.xors += plan.params.n;

    Ok(DecodeTrace {
        sigma,
        mu,
        sigma_bar,
        eta,
        corrected,
        counters,
    })
}

/// True error parities of every flat, for comparison against the
/// normalized check-sums computed from z = c + e. Test utility; the
/// equality is the content of the row-normalization step, valid within the
/// radius.
pub fn flat_parity_witness(plan: &DecoderPlan, e: &Word) -> Result<Vec<Vec<bool>>, DecodeError> {
    if e.len() != plan.params.n {
        return Err(DecodeError::WordLength {
            expected: plan.params.n,
            got: e.len(),
        });
    }
    if e.weight() > plan.params.t {
        return Err(DecodeError::WeightOverRadius(e.weight(), plan.params.t));
    }
    plan.flat_masks
        .iter()
        .map(|masks| {
            masks
                .iter()
                .map(|mask| e.masked_parity(mask).map_err(DecodeError::from))
                .collect()
        })
        .collect()
}
