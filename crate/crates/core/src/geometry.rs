//! Finite-geometry skeleton of the decoders.
//!
//! Builds delta-2 r-dimensional subspaces of Z_2^m with pairwise trivial
//! intersection (a partial spread), complements and coset systems for each,
//! and the phi/psi index maps that drive the table-based decoders.
//!
//! The spread comes from a single closed-form construction valid for the
//! whole regime r <= m/2: identify Z_2^m with GF(2^(m-r)) x Z_2^r and take
//! the graphs of the linear maps w -> a * x(w), one subspace per field
//! element a. Differences of distinct maps are multiplications by nonzero
//! field elements and hence injective, so the graphs intersect pairwise in
//! {0}. Deterministic for fixed parameters.

use crate::code::CodeParams;
use crate::gf2::{self, Flat, Gf2Error, Subspace, Vec2m};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error("spread construction failed for r={r}, m={m}")]
    ConstructionFailure { r: u32, m: u32 },
    #[error("expected {expected} subspaces, got {got}")]
    SpreadSize { expected: usize, got: usize },
    #[error("subspace {0} has dimension {1}, expected {2}")]
    SubspaceDimension(usize, u32, u32),
    #[error("subspaces {0} and {1} intersect nontrivially")]
    NontrivialIntersection(usize, usize),
    #[error("complement {0} does not complement its subspace")]
    BadComplement(usize),
    #[error("representatives of row {0} do not enumerate the cosets")]
    BadRepresentatives(usize),
    #[error("flat indices must differ")]
    EqualFlatIndices,
    #[error("flat index {0} out of range {1}")]
    FlatIndexRange(usize, usize),
}

/// delta-2 r-subspaces of Z_2^m, pairwise intersecting in {0}.
#[derive(Debug, Clone)]
pub struct Spread {
    params: CodeParams,
    subspaces: Vec<Subspace>,
}

impl Spread {
    /// Validate and wrap an externally supplied subspace list.
    pub fn from_subspaces(
        params: CodeParams,
        subspaces: Vec<Subspace>,
    ) -> Result<Self, GeometryError> {
        let expected = params.delta as usize - 2;
        if subspaces.len() != expected {
            return Err(GeometryError::SpreadSize {
                expected,
                got: subspaces.len(),
            });
        }
        for (i, s) in subspaces.iter().enumerate() {
            if s.dim() != params.r || s.dim_ambient() != params.m {
                return Err(GeometryError::SubspaceDimension(i, s.dim(), params.r));
            }
        }
        for i in 0..subspaces.len() {
            for j in i + 1..subspaces.len() {
                if !subspaces[i].intersects_trivially(&subspaces[j]) {
                    return Err(GeometryError::NontrivialIntersection(i, j));
                }
            }
        }
        Ok(Self { params, subspaces })
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn subspaces(&self) -> &[Subspace] {
        &self.subspaces
    }
}

pub fn build_spread(params: &CodeParams) -> Result<Spread, GeometryError> {
    let count = params.delta as usize - 2;
    let subspaces = linear_map_spread(params.r, params.m, count);
    Spread::from_subspaces(*params, subspaces)
}

// --- closed-form partial spread ------------------------------------------

/// Carryless multiplication modulo the lexicographically smallest
/// irreducible polynomial of degree m; identifies Z_2^m with GF(2^m).
struct FieldGf2m {
    m: u32,
    modulus: u64,
}

impl FieldGf2m {
    fn new(m: u32) -> Self {
        let modulus = (1u64 << m..2u64 << m)
            .find(|&p| poly_irreducible(p))
            .expect("an irreducible polynomial of each degree exists");
        Self { m, modulus }
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let mut acc: u64 = 0;
        let a = u64::from(a);
        for i in 0..32 {
            if (b >> i) & 1 == 1 {
                acc ^= a << i;
            }
        }
        let deg = |x: u64| 63 - x.leading_zeros();
        while acc >= 1 << self.m {
            let shift = deg(acc) - self.m;
            acc ^= self.modulus << shift;
        }
        acc as u32
    }

    fn pow(&self, base: u32, mut e: u64) -> u32 {
        let mut acc: u32 = 1;
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }
}

fn poly_irreducible(p: u64) -> bool {
    let deg = 63 - p.leading_zeros();
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        for q in (1u64 << d)..(1u64 << (d + 1)) {
            if poly_rem(p, q) == 0 {
                return false;
            }
        }
    }
    true
}

fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = 63 - b.leading_zeros();
    while a != 0 {
        let da = 63 - a.leading_zeros();
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

/// Graphs of the linear maps w -> a * x(w) from Z_2^r into
/// K = GF(2^(m-r)), where x maps the unit vector e_i to alpha^i (alpha the
/// class of the polynomial variable in K). For a != b the difference of
/// the two maps is multiplication by the nonzero field element a + b,
/// which is injective, so distinct graphs intersect in {0} only. Taking
/// a = 0, 1, ..., count-1 (as field-element bit patterns) yields the
/// partial spread; count = delta - 2 < 2^(m-r) always fits.
fn linear_map_spread(r: u32, m: u32, count: usize) -> Vec<Subspace> {
    let k = m - r; // r <= m/2, so k >= r and alpha^0..alpha^(r-1) are free
    let field = FieldGf2m::new(k);
    let powers: Vec<u32> = (0..r).map(|i| field.pow(2, u64::from(i))).collect();
    (0..count as u32)
        .map(|a| {
            let basis = (0..r)
                .map(|i| {
                    let hi = field.mul(a, powers[i as usize]);
                    Vec2m::new((hi << r) | (1 << i), m).unwrap()
                })
                .collect();
            Subspace::new(basis, m).unwrap()
        })
        .collect()
}

// --- coset systems --------------------------------------------------------

/// One spread row: the subspace U_l, a complement W_l, delta coset
/// representatives drawn from W_l, and the corresponding r-flats.
#[derive(Debug, Clone)]
pub struct CosetRow {
    pub subspace: Subspace,
    pub complement: Subspace,
    pub reps: Vec<Vec2m>,
    pub flats: Vec<Flat>,
}

/// Coset systems for every spread row; the flat family F has
/// delta*(delta-2) members covering each vector exactly delta-2 times.
#[derive(Debug, Clone)]
pub struct CosetSystem {
    params: CodeParams,
    rows: Vec<CosetRow>,
}

impl CosetSystem {
    /// Canonical construction: deterministic complements, representatives
    /// in ascending integer order.
    pub fn build(spread: &Spread) -> Result<Self, GeometryError> {
        let complements: Vec<Subspace> = spread
            .subspaces()
            .iter()
            .map(gf2::complement)
            .collect();
        Self::with_complements(spread, complements)
    }

    /// Construction with explicit complements; representatives are the
    /// complement span in ascending order.
    pub fn with_complements(
        spread: &Spread,
        complements: Vec<Subspace>,
    ) -> Result<Self, GeometryError> {
        let reps = complements.iter().map(|w| w.span()).collect();
        Self::from_parts(spread, complements, reps)
    }

    /// Fully explicit construction: complements plus an ordering of the
    /// representatives (any permutation of each complement's span).
    pub fn from_parts(
        spread: &Spread,
        complements: Vec<Subspace>,
        reps: Vec<Vec<Vec2m>>,
    ) -> Result<Self, GeometryError> {
        let params = *spread.params();
        if complements.len() != spread.subspaces().len() || reps.len() != complements.len() {
            return Err(GeometryError::SpreadSize {
                expected: spread.subspaces().len(),
                got: complements.len(),
            });
        }
        let mut rows = Vec::with_capacity(complements.len());
        for (l, ((u, w), rep_row)) in spread
            .subspaces()
            .iter()
            .zip(complements)
            .zip(reps)
            .enumerate()
        {
            if !u.intersects_trivially(&w) || u.dim() + w.dim() != params.m {
                return Err(GeometryError::BadComplement(l));
            }
            let mut sorted: Vec<u32> = rep_row.iter().map(Vec2m::bits).collect();
            sorted.sort_unstable();
            let span: Vec<u32> = w.span().iter().map(Vec2m::bits).collect();
            if sorted != span {
                return Err(GeometryError::BadRepresentatives(l));
            }
            let flats = rep_row
                .iter()
                .map(|&rep| gf2::coset_of(rep, u))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(CosetRow {
                subspace: u.clone(),
                complement: w,
                reps: rep_row,
                flats,
            });
        }
        Ok(Self { params, rows })
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn rows(&self) -> &[CosetRow] {
        &self.rows
    }
}

pub fn coset_system(spread: &Spread) -> Result<CosetSystem, GeometryError> {
    CosetSystem::build(spread)
}

// --- index maps -----------------------------------------------------------

/// phi_l(i) = index of the flat of row l containing v_i; psi_l = flat-major
/// concatenation of each flat's positions in ascending order, a permutation
/// of 0..n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexMaps {
    pub phi: Vec<Vec<usize>>,
    pub psi: Vec<Vec<usize>>,
}

pub fn index_maps(cs: &CosetSystem) -> IndexMaps {
    let n = cs.params.n;
    let mut phi = Vec::with_capacity(cs.rows.len());
    let mut psi = Vec::with_capacity(cs.rows.len());
    for row in &cs.rows {
        let mut phi_row = vec![0usize; n];
        let mut psi_row = Vec::with_capacity(n);
        for (j, flat) in row.flats.iter().enumerate() {
            for e in flat.elements() {
                phi_row[e.bits() as usize] = j;
                psi_row.push(e.bits() as usize);
            }
        }
        phi.push(phi_row);
        psi.push(psi_row);
    }
    IndexMaps { phi, psi }
}

// --- (r+1)-flats and Chen's admissible set --------------------------------

/// The (r+1)-flat through flats i and j of row l:
/// w_{l,i} + <w_{l,i} + w_{l,j}> (+) U_l.
pub fn rplus1_flat(
    cs: &CosetSystem,
    l: usize,
    i: usize,
    j: usize,
) -> Result<Flat, GeometryError> {
    if i == j {
        return Err(GeometryError::EqualFlatIndices);
    }
    let delta = cs.params.delta as usize;
    for idx in [i, j] {
        if idx >= delta {
            return Err(GeometryError::FlatIndexRange(idx, delta));
        }
    }
    let row = &cs.rows[l];
    let diff = row.reps[i].add(&row.reps[j])?;
    let mut basis = row.subspace.basis().to_vec();
    basis.push(diff);
    let direction = Subspace::new(basis, cs.params.m)?;
    Ok(Flat::new(row.reps[i], direction)?)
}

/// Chen's flat tables over the spread substrate: per position the delta-2
/// r-flats v_i + U_l, and per r-flat the delta-2 superflats W_{l,phi_l(i),j}
/// for the smallest j != phi_l(i).
#[derive(Debug, Clone)]
pub struct ChenFlats {
    /// r_flats[i][l] = v_i + U_l.
    pub r_flats: Vec<Vec<Flat>>,
    /// superflats[i][l][s] = the s-th (r+1)-flat used for decoding r_flats[i][l].
    pub superflats: Vec<Vec<Vec<Flat>>>,
}

pub fn chen_admissible_set(cs: &CosetSystem) -> Result<ChenFlats, GeometryError> {
    let maps = index_maps(cs);
    let n = cs.params.n;
    let delta = cs.params.delta as usize;
    let mut r_flats = Vec::with_capacity(n);
    let mut superflats = Vec::with_capacity(n);
    for i in 0..n {
        let mut flats_i = Vec::with_capacity(delta - 2);
        let mut supers_i = Vec::with_capacity(delta - 2);
        for l in 0..delta - 2 {
            let fi = maps.phi[l][i];
            flats_i.push(cs.rows[l].flats[fi].clone());
            let supers: Vec<Flat> = (0..delta)
                .filter(|&j| j != fi)
                .take(delta - 2)
                .map(|j| rplus1_flat(cs, l, fi, j))
                .collect::<Result<_, _>>()?;
            supers_i.push(supers);
        }
        r_flats.push(flats_i);
        superflats.push(supers_i);
    }
    Ok(ChenFlats {
        r_flats,
        superflats,
    })
}
