//! Operational surface: plan serialization, channel simulation and
//! verification campaigns.
//!
//! Campaigns shard codeword/error pairs across a worker pool sharing the
//! immutable plans; per-shard tallies are merged by summation, so results
//! are independent of the worker count and deterministic for fixed seeds.

use crate::code::{self, CodeParams, GeneratorMatrix, ML_MAX_K};
use crate::decode_chen;
use crate::decode_new::{self, DecodeError, DecoderPlan};
use crate::geometry::{CosetSystem, GeometryError, Spread};
use crate::gf2::{Gf2Error, Subspace, Vec2m, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::Instant;
use thiserror::Error;

/// Seeded generator used everywhere randomness is needed; named in reports
/// for reproducibility.
pub const RNG_ALGORITHM: &str = "chacha12";

/// Default campaign budget in decode calls (codeword/error pairs).
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Code(#[from] code::CodeError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error("invalid crossover probability {0}")]
    InvalidProbability(f64),
    #[error("plan file: {0}")]
    PlanFormat(String),
    #[error("unsupported plan file version {0}")]
    PlanVersion(u32),
    #[error("budget exceeded: campaign needs an estimated {estimate} decode calls, budget is {budget}")]
    BudgetExceeded { estimate: u64, budget: u64 },
    #[error("invalid word '{0}': expected {1} hex digits")]
    BadHexWord(String, usize),
}

// --- hex word encoding ----------------------------------------------------

/// Words on the CLI are hex strings of n/4 digits; the least significant
/// (rightmost) digit carries positions 0-3.
pub fn word_to_hex(w: &Word) -> String {
    let digits = w.len().div_ceil(4);
    let mut out = String::with_capacity(digits);
    for d in (0..digits).rev() {
        let mut nibble = 0u8;
        for b in 0..4 {
            let pos = d * 4 + b;
            if pos < w.len() && w.get(pos) {
                nibble |= 1 << b;
            }
        }
        out.push(char::from_digit(u32::from(nibble), 16).unwrap());
    }
    out
}

pub fn hex_to_word(s: &str, n: usize) -> Result<Word, HarnessError> {
    let digits = n.div_ceil(4);
    let bad = || HarnessError::BadHexWord(s.to_string(), digits);
    if s.len() != digits {
        return Err(bad());
    }
    let mut w = Word::zeros(n);
    for (d, c) in s.chars().rev().enumerate() {
        let nibble = c.to_digit(16).ok_or_else(bad)? as u8;
        for b in 0..4 {
            let pos = d * 4 + b;
            if (nibble >> b) & 1 == 1 {
                if pos >= n {
                    return Err(bad());
                }
                w.set(pos, true);
            }
        }
    }
    Ok(w)
}

// --- plan files -----------------------------------------------------------

/// On-disk decoder plan. Subspaces are stored as basis integer lists,
/// representatives and index maps as plain integer rows; reloading
/// revalidates every geometric invariant.
#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PlanFile {
    pub version: u32,
    pub r: u32,
    pub m: u32,
    pub spread: Vec<Vec<u32>>,
    pub complements: Vec<Vec<u32>>,
    pub reps: Vec<Vec<u32>>,
    pub phi: Vec<Vec<usize>>,
    pub psi: Vec<Vec<usize>>,
}

pub const PLAN_VERSION: u32 = 1;

impl PlanFile {
    pub fn from_plan(plan: &DecoderPlan) -> Self {
        let basis_ints =
            |s: &Subspace| -> Vec<u32> { s.basis().iter().map(Vec2m::bits).collect() };
        let cs = plan.cosets();
        Self {
            version: PLAN_VERSION,
            r: plan.params().r,
            m: plan.params().m,
            spread: cs.rows().iter().map(|row| basis_ints(&row.subspace)).collect(),
            complements: cs
                .rows()
                .iter()
                .map(|row| basis_ints(&row.complement))
                .collect(),
            reps: cs
                .rows()
                .iter()
                .map(|row| row.reps.iter().map(Vec2m::bits).collect())
                .collect(),
            phi: plan.maps().phi.clone(),
            psi: plan.maps().psi.clone(),
        }
    }

    pub fn to_plan(&self) -> Result<DecoderPlan, HarnessError> {
        if self.version != PLAN_VERSION {
            return Err(HarnessError::PlanVersion(self.version));
        }
        let params = code::params(self.r, self.m)?;
        let m = self.m;
        let subspace = |ints: &[u32]| -> Result<Subspace, HarnessError> {
            let basis = ints
                .iter()
                .map(|&b| Vec2m::new(b, m))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| HarnessError::PlanFormat(e.to_string()))?;
            Subspace::new(basis, m).map_err(|e| HarnessError::PlanFormat(e.to_string()))
        };
        let spread = Spread::from_subspaces(
            params,
            self.spread
                .iter()
                .map(|b| subspace(b))
                .collect::<Result<Vec<_>, _>>()?,
        )?;
        let complements = self
            .complements
            .iter()
            .map(|b| subspace(b))
            .collect::<Result<Vec<_>, _>>()?;
        let reps = self
            .reps
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&b| Vec2m::new(b, m))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| HarnessError::PlanFormat(e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let cosets = CosetSystem::from_parts(&spread, complements, reps)?;
        let plan = DecoderPlan::from_cosets(cosets);
        if plan.maps().phi != self.phi || plan.maps().psi != self.psi {
            return Err(HarnessError::PlanFormat(
                "stored index maps do not match the reconstructed plan".into(),
            ));
        }
        Ok(plan)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plan serialization cannot fail");
        s.push('\n');
        s
    }

    pub fn from_json(data: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(data).map_err(|e| HarnessError::PlanFormat(e.to_string()))
    }
}

// --- binary symmetric channel ---------------------------------------------

/// Sample an error word with each bit set independently with probability p.
pub fn bsc_sample(n: usize, p: f64, seed: u64) -> Result<Word, HarnessError> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(HarnessError::InvalidProbability(p));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    Ok(Word::from_bits((0..n).map(|_| rng.gen::<f64>() < p)))
}

// --- verification campaigns -----------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CodewordPolicy {
    Zero,
    All,
    Sample { count: u64, seed: u64 },
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub max_weight: u32,
    pub policy: CodewordPolicy,
    /// Compare against the exhaustive nearest-codeword scan (requires
    /// k <= 22); failures against it count like decoder failures.
    pub with_ml: bool,
    pub budget: u64,
}

#[derive(Debug, Clone)]
pub struct CampaignReport {
    pub params: CodeParams,
    /// Decode-call pairs executed (codeword x error pattern).
    pub trials: u64,
    /// Histogram of injected error weights, indexed by weight.
    pub weight_histogram: Vec<u64>,
    pub failures: u64,
    /// Up to ten offending error patterns.
    pub failure_witnesses: Vec<Word>,
    pub wall_ms: u128,
    /// Both decoders (and the oracle, when enabled) agreed on every trial.
    pub identity_checks_passed: bool,
    pub rng_algorithm: &'static str,
}

fn enumerate_patterns(n: usize, max_weight: u32) -> Vec<Word> {
    let mut out = vec![Word::zeros(n)];
    let mut stack: Vec<(Word, usize, u32)> = vec![(Word::zeros(n), 0, 0)];
    while let Some((w, start, wt)) = stack.pop() {
        if wt == max_weight {
            continue;
        }
        for i in start..n {
            let mut next = w.clone();
            next.set(i, true);
            out.push(next.clone());
            stack.push((next, i + 1, wt + 1));
        }
    }
    out
}

fn count_patterns(n: u64, max_weight: u32) -> u64 {
    let mut total: u64 = 0;
    let mut c: u64 = 1;
    for w in 0..=u64::from(max_weight) {
        if w > 0 {
            c = c * (n - w + 1) / w;
        }
        total += c;
    }
    total
}

pub fn verify_exhaustive(
    params: &CodeParams,
    options: &VerifyOptions,
) -> Result<CampaignReport, HarnessError> {
    let start = Instant::now();
    let gen = code::generator_matrix(params);
    let plan = decode_new::build_plan(params)?;
    let chen_plan = decode_chen::build_chen_plan(params)?;

    let codeword_count: u64 = match &options.policy {
        CodewordPolicy::Zero => 1,
        CodewordPolicy::All => 1u64 << params.k,
        CodewordPolicy::Sample { count, .. } => *count,
    };
    let pattern_count = count_patterns(params.n as u64, options.max_weight);
    let estimate = codeword_count.saturating_mul(pattern_count);
    if estimate > options.budget {
        return Err(HarnessError::BudgetExceeded {
            estimate,
            budget: options.budget,
        });
    }
    if options.with_ml && params.k > ML_MAX_K {
        return Err(HarnessError::Code(code::CodeError::OracleTooLarge(
            params.k,
        )));
    }

    let messages: Vec<Word> = match &options.policy {
        CodewordPolicy::Zero => vec![Word::zeros(params.k as usize)],
        CodewordPolicy::All => (0..codeword_count)
            .map(|bits| Word::from_bits((0..params.k as usize).map(|i| (bits >> i) & 1 == 1)))
            .collect(),
        CodewordPolicy::Sample { count, seed } => {
            let mut rng = ChaCha12Rng::seed_from_u64(*seed);
            (0..*count)
                .map(|_| Word::from_bits((0..params.k as usize).map(|_| rng.gen::<bool>())))
                .collect()
        }
    };
    let patterns = enumerate_patterns(params.n, options.max_weight);

    #[derive(Default)]
    struct Tally {
        trials: u64,
        histogram: Vec<u64>,
        failures: u64,
        witnesses: Vec<Word>,
        identity_ok: bool,
    }

    let tally = messages
        .par_iter()
        .map(|msg| {
            let c = code::encode(&gen, msg).expect("message length fixed by construction");
            let mut t = Tally {
                histogram: vec![0; options.max_weight as usize + 1],
                identity_ok: true,
                ..Tally::default()
            };
            for e in &patterns {
                let z = c.xor(e).expect("equal lengths");
                let new_out = decode_new::decode(&plan, &z)
                    .expect("decoder is total")
                    .corrected;
                let chen_out = decode_chen::chen_decode(&chen_plan, &z)
                    .expect("decoder is total")
                    .corrected;
                let mut ok = new_out == c && chen_out == c;
                if new_out != chen_out {
                    t.identity_ok = false;
                }
                if options.with_ml {
                    let ml = code::ml_decode(&gen, &z).expect("k within oracle bound");
                    if ml.codeword != new_out || ml.codeword != chen_out {
                        t.identity_ok = false;
                        ok = false;
                    }
                }
                t.trials += 1;
                t.histogram[e.weight() as usize] += 1;
                if !ok {
                    t.failures += 1;
                    if t.witnesses.len() < 10 {
                        t.witnesses.push(e.clone());
                    }
                }
            }
            t
        })
        .reduce(
            || Tally {
                histogram: vec![0; options.max_weight as usize + 1],
                identity_ok: true,
                ..Tally::default()
            },
            |mut a, b| {
                a.trials += b.trials;
                for (x, y) in a.histogram.iter_mut().zip(&b.histogram) {
                    *x += y;
                }
                a.failures += b.failures;
                for w in b.witnesses {
                    if a.witnesses.len() < 10 {
                        a.witnesses.push(w);
                    }
                }
                a.identity_ok &= b.identity_ok;
                a
            },
        );

    Ok(CampaignReport {
        params: *params,
        trials: tally.trials,
        weight_histogram: tally.histogram,
        failures: tally.failures,
        failure_witnesses: tally.witnesses,
        wall_ms: start.elapsed().as_millis(),
        identity_checks_passed: tally.identity_ok,
        rng_algorithm: RNG_ALGORITHM,
    })
}

// --- channel simulation ---------------------------------------------------

#[derive(Debug, Clone)]
pub struct SimulationReport {
    pub params: CodeParams,
    pub p: f64,
    pub trials: u64,
    pub weight_histogram: Vec<u64>,
    /// Trials whose injected weight exceeded the radius t.
    pub beyond_radius: u64,
    /// Decoded word differed from the transmitted codeword.
    pub block_errors: u64,
    /// Block errors among trials within the radius (always 0).
    pub failures_within_radius: u64,
    pub wall_ms: u128,
    pub rng_algorithm: &'static str,
}

/// Monte-Carlo run over a binary symmetric channel with crossover p:
/// random codewords, sampled noise, decoding with the improved decoder.
pub fn simulate(
    plan: &DecoderPlan,
    gen: &GeneratorMatrix,
    p: f64,
    trials: u64,
    seed: u64,
) -> Result<SimulationReport, HarnessError> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(HarnessError::InvalidProbability(p));
    }
    let start = Instant::now();
    let params = *plan.params();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut histogram = vec![0u64; params.n + 1];
    let mut beyond_radius = 0u64;
    let mut block_errors = 0u64;
    let mut failures_within_radius = 0u64;
    for _ in 0..trials {
        let msg = Word::from_bits((0..params.k as usize).map(|_| rng.gen::<bool>()));
        let c = code::encode(gen, &msg)?;
        let e = Word::from_bits((0..params.n).map(|_| rng.gen::<f64>() < p));
        let wt = e.weight();
        histogram[wt as usize] += 1;
        if wt > params.t {
            beyond_radius += 1;
        }
        let corrected = decode_new::decode(plan, &c.xor(&e)?)?.corrected;
        if corrected != c {
            block_errors += 1;
            if wt <= params.t {
                failures_within_radius += 1;
            }
        }
    }
    Ok(SimulationReport {
        params,
        p,
        trials,
        weight_histogram: histogram,
        beyond_radius,
        block_errors,
        failures_within_radius,
        wall_ms: start.elapsed().as_millis(),
        rng_algorithm: RNG_ALGORITHM,
    })
}
