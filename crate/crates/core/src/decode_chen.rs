//! Chen's two-step majority-logic baseline decoder.
//!
//! Four function levels over an admissible flat family: per position i and
//! per r-flat through v_i, check-sums of the delta-2 (r+1)-flats used for
//! its decoding; a majority per r-flat; a majority per position; the final
//! correction XOR. Flats are stored per call site without deduplication so
//! the measured call counts carry the per-call semantics of the complexity
//! accounting.

use crate::code::CodeParams;
use crate::decode_new::{majority, CallCounters, DecodeError};
use crate::geometry::{self, CosetSystem, GeometryError};
use crate::gf2::Word;
use crate::metrics::{self, CallTable};

/// Precomputed tables for Chen's decoder: per position the masks of its
/// delta-2 r-flats and, per r-flat, the masks of its delta-2 (r+1)-flats.
#[derive(Debug, Clone)]
pub struct ChenPlan {
    params: CodeParams,
    /// r_flat_masks[i][l]: incidence of v_i + U_l.
    r_flat_masks: Vec<Vec<Word>>,
    /// superflat_masks[i][l][s]: incidence of the s-th (r+1)-flat for (i,l).
    superflat_masks: Vec<Vec<Vec<Word>>>,
}

impl ChenPlan {
    pub fn from_cosets(cosets: &CosetSystem) -> Result<Self, GeometryError> {
        let flats = geometry::chen_admissible_set(cosets)?;
        let r_flat_masks = flats
            .r_flats
            .iter()
            .map(|row| row.iter().map(|f| f.incidence()).collect())
            .collect();
        let superflat_masks = flats
            .superflats
            .iter()
            .map(|row| {
                row.iter()
                    .map(|supers| supers.iter().map(|f| f.incidence()).collect())
                    .collect()
            })
            .collect();
        Ok(Self {
            params: *cosets.params(),
            r_flat_masks,
            superflat_masks,
        })
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn r_flat_masks(&self) -> &[Vec<Word>] {
        &self.r_flat_masks
    }

    pub fn superflat_masks(&self) -> &[Vec<Vec<Word>>] {
        &self.superflat_masks
    }
}

pub fn build_chen_plan(params: &CodeParams) -> Result<ChenPlan, DecodeError> {
    let spread = geometry::build_spread(params)?;
    let cosets = geometry::coset_system(&spread)?;
    Ok(ChenPlan::from_cosets(&cosets)?)
}

/// Trace of one run; the level-1 and level-2 values are stored flat,
/// indexed through the accessor methods.
#[derive(Debug, Clone)]
pub struct ChenTrace {
    params: CodeParams,
    /// n x (delta-2) x (delta-2) check-sums, position-major.
    varsigma: Vec<bool>,
    /// n x (delta-2) first-step majorities.
    mu_ij: Vec<bool>,
    pub eta: Word,
    pub corrected: Word,
    pub counters: CallCounters,
}

impl ChenTrace {
    /// Check-sum of the s-th (r+1)-flat used for r-flat l of position i.
    pub fn varsigma(&self, i: usize, l: usize, s: usize) -> bool {
        let d = self.params.delta as usize - 2;
        self.varsigma[(i * d + l) * d + s]
    }

    /// First-step majority for r-flat l of position i.
    pub fn mu(&self, i: usize, l: usize) -> bool {
        let d = self.params.delta as usize - 2;
        self.mu_ij[i * d + l]
    }
}

pub fn chen_decode(plan: &ChenPlan, z: &Word) -> Result<ChenTrace, DecodeError> {
    let n = plan.params.n;
    if z.len() != n {
        return Err(DecodeError::WordLength {
            expected: n,
            got: z.len(),
        });
    }
    let d = plan.params.delta as usize - 2;
    let mut counters = CallCounters::default();

    // level 1: check-sums of every (r+1)-flat, per call site
    let mut varsigma = Vec::with_capacity(n * d * d);
    for supers_i in &plan.superflat_masks {
        for supers in supers_i {
            for mask in supers {
                varsigma.push(z.masked_parity(mask)?);
                counters.checksums += 1;
            }
        }
    }

    // level 2: majority per r-flat
    let mut mu_ij = Vec::with_capacity(n * d);
    for chunk in varsigma.chunks(d) {
        mu_ij.push(majority(chunk)?);
        counters.majorities += 1;
    }

    // level 3: majority per position
    let mut eta = Word::zeros(n);
    for (i, chunk) in mu_ij.chunks(d).enumerate() {
        eta.set(i, majority(chunk)?);
        counters.majorities += 1;
    }

    // level 4: correction
    let corrected = z.xor(&eta)?;
    counters.xors += n;

    Ok(ChenTrace {
        params: plan.params,
        varsigma,
        mu_ij,
        eta,
        corrected,
        counters,
    })
}

/// Closed-form call counts per function level (the same closed forms the
/// reporting module surfaces).
pub fn chen_counters(params: &CodeParams) -> CallTable {
    metrics::chen_counts(params)
}
