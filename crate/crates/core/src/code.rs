//! Reed-Muller code construction and reference decoding.
//!
//! RM(r,m) is generated by the evaluation vectors of all monomials of
//! degree at most r in the m coordinate variables. The row ordering is
//! degree-ascending; within a degree, variable sets are ordered
//! lexicographically with the highest variable index first, which matches
//! the printed generator matrix for RM(2,5).

use crate::gf2::{Flat, Word};
use thiserror::Error;

/// Exhaustive message-scan limit for the maximum-likelihood oracle.
pub const ML_MAX_K: u32 = 22;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodeError {
    #[error("unsupported parameters r={r}, m={m}: require m >= 3 and 1 <= r <= m/2")]
    UnsupportedParameters { r: u32, m: u32 },
    #[error("message length {got} does not match code dimension {expected}")]
    MessageLength { expected: usize, got: usize },
    #[error("word length {got} does not match code length {expected}")]
    WordLength { expected: usize, got: usize },
    #[error("oracle too large: k={0} exceeds limit {ML_MAX_K}")]
    OracleTooLarge(u32),
    #[error("flat dimension {0} must exceed code order {1}")]
    FlatDimensionTooSmall(u32, u32),
}

/// Parameters of RM(r,m) in the regime m >= 3, 1 <= r <= m/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeParams {
    pub r: u32,
    pub m: u32,
    /// Code length n = 2^m.
    pub n: usize,
    /// Code dimension k = sum_{i<=r} C(m,i).
    pub k: u32,
    /// Minimum distance delta = 2^(m-r).
    pub delta: u32,
    /// Guaranteed correction radius t = delta/2 - 1.
    pub t: u32,
}

pub fn params(r: u32, m: u32) -> Result<CodeParams, CodeError> {
    if m < 3 || r < 1 || 2 * r > m || m > crate::gf2::MAX_M {
        return Err(CodeError::UnsupportedParameters { r, m });
    }
    let k: u32 = (0..=r).map(|i| binomial(m, i)).sum();
    let delta = 1u32 << (m - r);
    Ok(CodeParams {
        r,
        m,
        n: 1usize << m,
        k,
        delta,
        t: delta / 2 - 1,
    })
}

fn binomial(n: u32, k: u32) -> u32 {
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * u64::from(n - i) / u64::from(i + 1);
    }
    acc as u32
}

/// Generator matrix of RM(r,m): one row per monomial of degree <= r.
#[derive(Debug, Clone)]
pub struct GeneratorMatrix {
    pub params: CodeParams,
    rows: Vec<Word>,
    /// Variable-index sets, each stored highest index first.
    monomials: Vec<Vec<u32>>,
}

impl GeneratorMatrix {
    pub fn rows(&self) -> &[Word] {
        &self.rows
    }

    pub fn monomials(&self) -> &[Vec<u32>] {
        &self.monomials
    }
}

pub fn generator_matrix(params: &CodeParams) -> GeneratorMatrix {
    let mut monomials: Vec<Vec<u32>> = Vec::with_capacity(params.k as usize);
    for degree in 0..=params.r {
        let mut of_degree = subsets_descending(params.m, degree);
        // Lexicographic on descending tuples, higher variable first.
        of_degree.sort_by(|a, b| {
            a.iter()
                .zip(b.iter())
                .find_map(|(x, y)| (x != y).then(|| y.cmp(x)))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        monomials.extend(of_degree);
    }
    let rows = monomials
        .iter()
        .map(|vars| {
            let mask: usize = vars.iter().map(|&j| 1usize << j).sum();
            Word::from_bits((0..params.n).map(|i| i & mask == mask))
        })
        .collect();
    GeneratorMatrix {
        params: *params,
        rows,
        monomials,
    }
}

fn subsets_descending(m: u32, degree: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(start: i64, remaining: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if remaining == 0 {
            out.push(current.clone());
            return;
        }
        for v in (0..=start).rev() {
            current.push(v as u32);
            rec(v - 1, remaining - 1, current, out);
            current.pop();
        }
    }
    rec(i64::from(m) - 1, degree, &mut current, &mut out);
    out
}

/// Encode a k-bit message as the GF(2) combination of generator rows.
pub fn encode(gen: &GeneratorMatrix, message: &Word) -> Result<Word, CodeError> {
    if message.len() != gen.params.k as usize {
        return Err(CodeError::MessageLength {
            expected: gen.params.k as usize,
            got: message.len(),
        });
    }
    let mut out = Word::zeros(gen.params.n);
    for (i, row) in gen.rows.iter().enumerate() {
        if message.get(i) {
            out.xor_assign(row);
        }
    }
    Ok(out)
}

/// Result of the brute-force maximum-likelihood scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MlDecodeResult {
    pub codeword: Word,
    pub message: Word,
    pub distance: u32,
    /// Set when the minimum distance is attained by more than one codeword
    /// (possible only beyond the correction radius).
    pub ambiguous: bool,
}

/// Brute-force nearest-codeword decoder: scans all 2^k codewords.
///
/// Gray-code order keeps each step a single row XOR. Ties return the
/// lowest-message-index winner, flagged ambiguous.
pub fn ml_decode(gen: &GeneratorMatrix, z: &Word) -> Result<MlDecodeResult, CodeError> {
    if z.len() != gen.params.n {
        return Err(CodeError::WordLength {
            expected: gen.params.n,
            got: z.len(),
        });
    }
    let k = gen.params.k;
    if k > ML_MAX_K {
        return Err(CodeError::OracleTooLarge(k));
    }
    let mut codeword = Word::zeros(gen.params.n);
    let mut best_msg: u64 = 0;
    let mut best_dist = codeword.distance(z);
    let mut ambiguous = false;
    for step in 1u64..(1u64 << k) {
        // Gray code: message for this step is step ^ (step >> 1); the bit
        // toggled relative to the previous step is trailing_zeros(step).
        let bit = step.trailing_zeros() as usize;
        codeword.xor_assign(&gen.rows[bit]);
        let d = codeword.distance(z);
        if d < best_dist {
            best_dist = d;
            best_msg = step ^ (step >> 1);
            ambiguous = false;
        } else if d == best_dist {
            ambiguous = true;
            let msg = step ^ (step >> 1);
            if msg < best_msg {
                best_msg = msg;
            }
        }
    }
    let message = Word::from_bits((0..k as usize).map(|i| (best_msg >> i) & 1 == 1));
    let codeword = encode(gen, &message)?;
    Ok(MlDecodeResult {
        codeword,
        message,
        distance: best_dist,
        ambiguous,
    })
}

/// Check that the incidence vector of a d-flat (d >= r+1) is orthogonal to
/// every generator row, i.e. lies in the dual code. Test utility.
pub fn dual_orthogonality_check(gen: &GeneratorMatrix, flat: &Flat) -> Result<bool, CodeError> {
    if flat.dim() <= gen.params.r {
        return Err(CodeError::FlatDimensionTooSmall(flat.dim(), gen.params.r));
    }
    let chi = flat.incidence();
    for row in &gen.rows {
        if chi.dot(row).map_err(|_| CodeError::WordLength {
            expected: gen.params.n,
            got: chi.len(),
        })? {
            return Ok(false);
        }
    }
    Ok(true)
}
