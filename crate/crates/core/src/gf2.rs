//! Bit-packed linear algebra over Z_2^m.
//!
//! Vectors of Z_2^m are stored as the low `m` bits of a machine integer,
//! position `i` of a length-n word being identified with the vector whose
//! binary representation is `i`. Subspaces carry an explicit independent
//! basis; flats are cosets `rep + span(direction)`.

use std::fmt;
use thiserror::Error;

/// Ambient dimension limit; words of length 2^m must stay addressable.
pub const MAX_M: u32 = 30;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("ambient dimensions differ: {0} vs {1}")]
    DimensionMismatch(u32, u32),
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("vector {0} out of range for word length {1}")]
    OutOfRange(u32, usize),
    #[error("word lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("ambient dimension {0} exceeds limit {MAX_M}")]
    AmbientTooLarge(u32),
}

/// A vector of Z_2^m packed into the low `m` bits of a `u32`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vec2m {
    bits: u32,
    dim: u32,
}

impl Vec2m {
    pub fn new(bits: u32, dim: u32) -> Result<Self, Gf2Error> {
        if dim > MAX_M {
            return Err(Gf2Error::AmbientTooLarge(dim));
        }
        if dim < 32 && bits >= 1 << dim {
            return Err(Gf2Error::OutOfRange(bits, 1 << dim));
        }
        Ok(Self { bits, dim })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    /// Coordinate v_j (bit j of the integer encoding).
    pub fn coord(&self, j: u32) -> bool {
        (self.bits >> j) & 1 == 1
    }

    /// Sum in Z_2^m (bitwise XOR).
    pub fn add(&self, other: &Vec2m) -> Result<Vec2m, Gf2Error> {
        if self.dim != other.dim {
            return Err(Gf2Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(Vec2m {
            bits: self.bits ^ other.bits,
            dim: self.dim,
        })
    }
}

impl fmt::Display for Vec2m {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bits)
    }
}

/// GF(2) rank of a set of vectors via Gaussian elimination.
pub fn rank(vectors: &[Vec2m]) -> Result<u32, Gf2Error> {
    if let Some(first) = vectors.first() {
        for v in vectors {
            if v.dim != first.dim {
                return Err(Gf2Error::DimensionMismatch(first.dim, v.dim));
            }
        }
    }
    Ok(rank_bits(vectors.iter().map(|v| v.bits)))
}

fn rank_bits(vectors: impl IntoIterator<Item = u32>) -> u32 {
    let mut pivots: Vec<u32> = Vec::new();
    for mut v in vectors {
        for &p in &pivots {
            if v & msb_mask(p) != 0 {
                v ^= p;
            }
        }
        if v != 0 {
            pivots.push(v);
        }
    }
    pivots.len() as u32
}

fn msb_mask(v: u32) -> u32 {
    1 << (31 - v.leading_zeros())
}

/// A linear subspace of Z_2^m, represented by an independent basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    basis: Vec<Vec2m>,
    dim_ambient: u32,
}

impl Subspace {
    pub fn new(basis: Vec<Vec2m>, dim_ambient: u32) -> Result<Self, Gf2Error> {
        if dim_ambient > MAX_M {
            return Err(Gf2Error::AmbientTooLarge(dim_ambient));
        }
        for v in &basis {
            if v.dim != dim_ambient {
                return Err(Gf2Error::DimensionMismatch(dim_ambient, v.dim));
            }
        }
        if rank(&basis)? != basis.len() as u32 {
            return Err(Gf2Error::DependentBasis);
        }
        Ok(Self { basis, dim_ambient })
    }

    /// The zero subspace of Z_2^m.
    pub fn zero(dim_ambient: u32) -> Result<Self, Gf2Error> {
        Self::new(Vec::new(), dim_ambient)
    }

    /// Build a subspace from its full element set (must be closed under addition).
    pub fn from_span(elements: &[Vec2m], dim_ambient: u32) -> Result<Self, Gf2Error> {
        let mut basis: Vec<Vec2m> = Vec::new();
        for &v in elements {
            if v.dim != dim_ambient {
                return Err(Gf2Error::DimensionMismatch(dim_ambient, v.dim));
            }
            let mut candidate = basis.clone();
            candidate.push(v);
            if rank(&candidate)? == candidate.len() as u32 {
                basis = candidate;
            }
        }
        let sub = Self::new(basis, dim_ambient)?;
        if sub.span().len() != elements.len() {
            return Err(Gf2Error::DependentBasis);
        }
        Ok(sub)
    }

    pub fn basis(&self) -> &[Vec2m] {
        &self.basis
    }

    pub fn dim(&self) -> u32 {
        self.basis.len() as u32
    }

    pub fn dim_ambient(&self) -> u32 {
        self.dim_ambient
    }

    /// All 2^dim elements, sorted ascending by integer value.
    pub fn span(&self) -> Vec<Vec2m> {
        let mut out: Vec<u32> = Vec::with_capacity(1 << self.basis.len());
        out.push(0);
        for b in &self.basis {
            for i in 0..out.len() {
                out.push(out[i] ^ b.bits);
            }
        }
        out.sort_unstable();
        out.into_iter()
            .map(|bits| Vec2m {
                bits,
                dim: self.dim_ambient,
            })
            .collect()
    }

    pub fn contains(&self, v: &Vec2m) -> bool {
        let mut bits: Vec<u32> = self.basis.iter().map(|b| b.bits).collect();
        bits.push(v.bits);
        rank_bits(bits) == self.basis.len() as u32
    }

    /// Trivial intersection test against another subspace.
    pub fn intersects_trivially(&self, other: &Subspace) -> bool {
        let combined: u32 = rank_bits(
            self.basis
                .iter()
                .chain(other.basis.iter())
                .map(|v| v.bits),
        );
        combined == self.dim() + other.dim()
    }
}

/// Deterministic complement: row-reduce the basis of `u`, then extend by
/// unit vectors at the non-pivot positions in ascending order.
pub fn complement(u: &Subspace) -> Subspace {
    let m = u.dim_ambient;
    // Row echelon form, pivots at the most significant set bits.
    let mut rows: Vec<u32> = Vec::new();
    for b in &u.basis {
        let mut v = b.bits;
        for &r in &rows {
            if v & msb_mask(r) != 0 {
                v ^= r;
            }
        }
        if v != 0 {
            rows.push(v);
        }
    }
    let mut pivot_positions = 0u32;
    for &r in &rows {
        pivot_positions |= msb_mask(r);
    }
    let mut basis = Vec::new();
    for j in 0..m {
        if pivot_positions & (1 << j) == 0 {
            basis.push(Vec2m { bits: 1 << j, dim: m });
        }
    }
    Subspace {
        basis,
        dim_ambient: m,
    }
}

/// An affine flat: `representative + span(direction)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flat {
    representative: Vec2m,
    direction: Subspace,
}

impl Flat {
    pub fn new(representative: Vec2m, direction: Subspace) -> Result<Self, Gf2Error> {
        if representative.dim != direction.dim_ambient {
            return Err(Gf2Error::DimensionMismatch(
                representative.dim,
                direction.dim_ambient,
            ));
        }
        Ok(Self {
            representative,
            direction,
        })
    }

    pub fn representative(&self) -> Vec2m {
        self.representative
    }

    pub fn direction(&self) -> &Subspace {
        &self.direction
    }

    pub fn dim(&self) -> u32 {
        self.direction.dim()
    }

    /// Elements of the flat, sorted ascending by integer value.
    pub fn elements(&self) -> Vec<Vec2m> {
        let mut out: Vec<u32> = self
            .direction
            .span()
            .iter()
            .map(|u| u.bits ^ self.representative.bits)
            .collect();
        out.sort_unstable();
        out.into_iter()
            .map(|bits| Vec2m {
                bits,
                dim: self.representative.dim,
            })
            .collect()
    }

    pub fn contains(&self, v: &Vec2m) -> bool {
        if v.dim != self.representative.dim {
            return false;
        }
        self.direction.contains(&Vec2m {
            bits: v.bits ^ self.representative.bits,
            dim: v.dim,
        })
    }

    /// Incidence vector of the flat in a word of length n = 2^m.
    pub fn incidence(&self) -> Word {
        let n = 1usize << self.representative.dim;
        let mut w = Word::zeros(n);
        for e in self.elements() {
            w.set(e.bits as usize, true);
        }
        w
    }
}

/// The coset of `u` containing `v`.
pub fn coset_of(v: Vec2m, u: &Subspace) -> Result<Flat, Gf2Error> {
    Flat::new(v, u.clone())
}

/// A length-n bit word, packed into 64-bit blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    blocks: Vec<u64>,
    len: usize,
}

impl Word {
    pub fn zeros(len: usize) -> Self {
        Self {
            blocks: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut w = Self::zeros(len);
        for b in &mut w.blocks {
            *b = u64::MAX;
        }
        w.clear_tail();
        w
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut w = Self::zeros(bits.len());
        for (i, b) in bits.iter().enumerate() {
            w.set(i, *b);
        }
        w
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.blocks[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        if value {
            self.blocks[i / 64] |= 1 << (i % 64);
        } else {
            self.blocks[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn weight(&self) -> u32 {
        self.blocks.iter().map(|b| b.count_ones()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn xor_assign(&mut self, other: &Word) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &Word) -> Result<Word, Gf2Error> {
        if self.len != other.len {
            return Err(Gf2Error::LengthMismatch(self.len, other.len));
        }
        let mut out = self.clone();
        out.xor_assign(other);
        Ok(out)
    }

    /// Hamming distance to another word of equal length.
    pub fn distance(&self, other: &Word) -> u32 {
        debug_assert_eq!(self.len, other.len);
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a ^ b).count_ones())
            .sum()
    }

    /// Parity of `self AND mask` (the check-sum of the masked positions).
    pub fn masked_parity(&self, mask: &Word) -> Result<bool, Gf2Error> {
        if self.len != mask.len {
            return Err(Gf2Error::LengthMismatch(self.len, mask.len));
        }
        let ones: u32 = self
            .blocks
            .iter()
            .zip(&mask.blocks)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        Ok(ones % 2 == 1)
    }

    /// GF(2) scalar product with another word.
    pub fn dot(&self, other: &Word) -> Result<bool, Gf2Error> {
        self.masked_parity(other)
    }

    pub fn iter_bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Indices of set bits, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }

    fn clear_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.blocks.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        Ok(())
    }
}

/// Incidence vector of a set of vectors within a word of length `n`.
pub fn incidence_vector(set: &[Vec2m], n: usize) -> Result<Word, Gf2Error> {
    let mut w = Word::zeros(n);
    for v in set {
        if (v.bits as usize) >= n {
            return Err(Gf2Error::OutOfRange(v.bits, n));
        }
        w.set(v.bits as usize, true);
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(bits: u32, m: u32) -> Vec2m {
        Vec2m::new(bits, m).unwrap()
    }

    fn vecs(bits: &[u32], m: u32) -> Vec<Vec2m> {
        bits.iter().map(|&b| v(b, m)).collect()
    }

    #[test]
    fn rank_empty_is_zero() {
        assert_eq!(rank(&[]).unwrap(), 0);
    }

    #[test]
    fn rank_dependent_triple() {
        assert_eq!(rank(&vecs(&[0b001, 0b010, 0b011], 3)).unwrap(), 2);
    }

    #[test]
    fn rank_u0_basis() {
        // {1, 30} spans {0, 1, 30, 31} in Z_2^5.
        assert_eq!(rank(&vecs(&[1, 30], 5)).unwrap(), 2);
    }

    #[test]
    fn rank_dimension_mismatch() {
        let vs = vec![v(1, 3), v(1, 4)];
        assert_eq!(rank(&vs), Err(Gf2Error::DimensionMismatch(3, 4)));
    }

    #[test]
    fn span_empty_basis() {
        let s = Subspace::zero(3).unwrap();
        assert_eq!(s.span(), vecs(&[0], 3));
    }

    #[test]
    fn span_u0() {
        let s = Subspace::new(vecs(&[1, 30], 5), 5).unwrap();
        assert_eq!(s.span(), vecs(&[0, 1, 30, 31], 5));
    }

    #[test]
    fn span_w5() {
        let s = Subspace::new(vecs(&[1, 8, 22], 5), 5).unwrap();
        assert_eq!(s.span(), vecs(&[0, 1, 8, 9, 22, 23, 30, 31], 5));
    }

    #[test]
    fn dependent_basis_rejected() {
        assert_eq!(
            Subspace::new(vecs(&[1, 2, 3], 3), 3).unwrap_err(),
            Gf2Error::DependentBasis
        );
    }

    #[test]
    fn complement_of_zero_is_full_space() {
        let w = complement(&Subspace::zero(3).unwrap());
        assert_eq!(w.dim(), 3);
        assert_eq!(w.basis(), &vecs(&[1, 2, 4], 3)[..]);
    }

    #[test]
    fn complement_of_full_space_is_zero() {
        let full = Subspace::new(vecs(&[1, 2, 4], 3), 3).unwrap();
        assert_eq!(complement(&full).dim(), 0);
    }

    #[test]
    fn complement_of_u0() {
        let u0 = Subspace::new(vecs(&[1, 30], 5), 5).unwrap();
        let w = complement(&u0);
        assert_eq!(w.dim(), 3);
        assert!(u0.intersects_trivially(&w));
        // The paper's W_0 also passes the complement check.
        let paper_w0 =
            Subspace::from_span(&vecs(&[0, 2, 8, 10, 16, 18, 24, 26], 5), 5).unwrap();
        assert!(u0.intersects_trivially(&paper_w0));
        assert_eq!(u0.dim() + paper_w0.dim(), 5);
    }

    #[test]
    fn coset_of_zero_is_subspace_itself() {
        let u = Subspace::new(vecs(&[1, 30], 5), 5).unwrap();
        let f = coset_of(v(0, 5), &u).unwrap();
        assert_eq!(f.elements(), vecs(&[0, 1, 30, 31], 5));
    }

    #[test]
    fn coset_21_plus_u0() {
        let u0 = Subspace::new(vecs(&[1, 30], 5), 5).unwrap();
        let f = coset_of(v(21, 5), &u0).unwrap();
        assert_eq!(f.elements(), vecs(&[10, 11, 20, 21], 5));
    }

    #[test]
    fn coset_21_plus_u4() {
        let u4 = Subspace::from_span(&vecs(&[0, 5, 25, 28], 5), 5).unwrap();
        let f = coset_of(v(21, 5), &u4).unwrap();
        assert_eq!(f.elements(), vecs(&[9, 12, 16, 21], 5));
    }

    #[test]
    fn incidence_vector_cases() {
        assert!(incidence_vector(&[], 8).unwrap().is_zero());
        let all = vecs(&(0..8).collect::<Vec<_>>(), 3);
        assert_eq!(incidence_vector(&all, 8).unwrap(), Word::ones(8));
        let w = incidence_vector(&vecs(&[0, 1, 30, 31], 5), 32).unwrap();
        assert_eq!(w.support(), vec![0, 1, 30, 31]);
        assert_eq!(
            incidence_vector(&[v(8, 5)], 8).unwrap_err(),
            Gf2Error::OutOfRange(8, 8)
        );
    }

    #[test]
    fn span_closure_exhaustive_small_m() {
        // Closure of spans under pairwise addition, all subspace bases up to dim 3.
        for m in 3..=5u32 {
            let u = Subspace::new(vecs(&[1, 1 << (m - 1)], m), m).unwrap();
            let sp = u.span();
            assert_eq!(sp.len(), 1 << u.dim());
            for a in &sp {
                for b in &sp {
                    assert!(u.contains(&a.add(b).unwrap()));
                }
            }
        }
    }

    #[test]
    fn cosets_partition_space() {
        for m in 3..=6u32 {
            let u = Subspace::new(vecs(&[1, 3 << (m - 2)], m), m).unwrap();
            let mut seen = vec![false; 1 << m];
            let mut classes = 0;
            for i in 0..(1u32 << m) {
                if seen[i as usize] {
                    continue;
                }
                classes += 1;
                let f = coset_of(v(i, m), &u).unwrap();
                for e in f.elements() {
                    assert!(!seen[e.bits() as usize]);
                    seen[e.bits() as usize] = true;
                }
            }
            assert_eq!(classes, 1 << (m - u.dim()));
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn cosets_equal_iff_difference_in_span() {
        for m in 3..=6u32 {
            let u = Subspace::new(vecs(&[1, 2], m), m).unwrap();
            for a in 0..(1u32 << m) {
                for b in 0..(1u32 << m) {
                    let fa = coset_of(v(a, m), &u).unwrap();
                    let fb = coset_of(v(b, m), &u).unwrap();
                    let same = fa.elements() == fb.elements();
                    assert_eq!(same, u.contains(&v(a ^ b, m)));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn complement_is_complementary(m in 3u32..=10, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
            let mut basis: Vec<Vec2m> = Vec::new();
            for _ in 0..rng.gen_range(0..=m) {
                let cand = v(rng.gen_range(0..(1u32 << m)), m);
                let mut trial = basis.clone();
                trial.push(cand);
                if rank(&trial).unwrap() == trial.len() as u32 {
                    basis = trial;
                }
            }
            let u = Subspace::new(basis, m).unwrap();
            let w = complement(&u);
            prop_assert!(u.intersects_trivially(&w));
            prop_assert_eq!(u.dim() + w.dim(), m);
        }

        #[test]
        fn xor_roundtrip(len in 1usize..200, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
            let a = Word::from_bits((0..len).map(|_| rng.gen::<bool>()));
            let b = Word::from_bits((0..len).map(|_| rng.gen::<bool>()));
            let c = a.xor(&b).unwrap();
            prop_assert_eq!(c.xor(&b).unwrap(), a.clone());
            prop_assert_eq!(a.distance(&b), c.weight());
        }
    }
}
