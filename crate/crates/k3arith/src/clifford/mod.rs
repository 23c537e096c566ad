//! Clifford algebra of an even quadratic lattice over the rationals.
//!
//! Elements live in the monomial basis indexed by subsets of the lattice
//! basis (bitmask order). The basis need not be orthogonal: products are
//! computed by the rewriting v_i v_j -> -v_j v_i + (v_i, v_j) for i > j and
//! v_i^2 -> q(v_i), memoized per algebra. Elements are supported up to rank
//! 22; dense endomorphism matrices are only materialized up to rank 12.

pub mod filtration;
pub mod gspin;
pub mod operator;
pub mod projector;

pub use filtration::{
    fil0_structural_dim, filtration_compatibility_check, isotropic_filtration, CompatReport,
    Filtration, FiltrationPair,
};
pub use gspin::{gspin_membership, GspinVerdict};
pub use operator::{lmul_operator, trace_pair, EndOperator};
pub use projector::{CanonicalProjector, HyperbolicProjector};

use std::collections::BTreeMap;
use std::sync::Arc;

use dashmap::DashMap;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::error::{Classify, ErrorClass};
use crate::lattice::QuadLattice;
use crate::linalg::RatMat;

/// Maximum rank for sparse element arithmetic.
pub const MAX_ELEMENT_RANK: usize = 22;
/// Maximum rank for dense 2^n x 2^n operator matrices.
pub const MAX_DENSE_RANK: usize = 12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CliffordError {
    #[error("elements belong to different algebras")]
    MismatchedParents,
    #[error("rank too large for dense operator (limit {MAX_DENSE_RANK})")]
    RankTooLarge,
    #[error("rank too large for element arithmetic (limit {MAX_ELEMENT_RANK})")]
    RankTooLargeForElements,
    #[error("lattice must be even")]
    NotEven,
    #[error("not isotropic")]
    NotIsotropic,
    #[error("zero vector")]
    ZeroVector,
    #[error("degenerate form")]
    DegenerateForm,
    #[error("no hyperbolic pair")]
    NoHyperbolicPair,
    #[error("operator dimensions do not match")]
    DimensionMismatch,
}

impl Classify for CliffordError {
    fn class(&self) -> ErrorClass {
        ErrorClass::Precondition
    }
}

type SparseTerms = Arc<Vec<(u32, BigRational)>>;

#[derive(Debug)]
struct AlgebraInner {
    /// Symmetric bilinear form on the underlying space (rational entries to
    /// support internally adapted bases; lattice constructors pass integers).
    gram: RatMat,
    rank: usize,
    /// Memoized products v_k * e_S, keyed by (k, S).
    gen_products: DashMap<(u8, u32), SparseTerms>,
}

/// Clifford algebra Cl(M) of a quadratic space over the rationals.
#[derive(Debug, Clone)]
pub struct CliffordAlgebra {
    inner: Arc<AlgebraInner>,
}

impl PartialEq for CliffordAlgebra {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.gram == other.inner.gram
    }
}

impl CliffordAlgebra {
    /// Clifford algebra of an even integral lattice.
    pub fn new(lattice: &QuadLattice) -> Result<Self, CliffordError> {
        if !lattice.is_even() {
            return Err(CliffordError::NotEven);
        }
        if lattice.rank() > MAX_ELEMENT_RANK {
            return Err(CliffordError::RankTooLargeForElements);
        }
        Ok(Self::from_rational_gram(lattice.gram_rat()))
    }

    /// Internal constructor over an arbitrary rational symmetric form (used
    /// for adapted bases, where the Gram is no longer integral).
    pub(crate) fn from_rational_gram(gram: RatMat) -> Self {
        assert_eq!(gram.rows(), gram.cols());
        assert!(gram.rows() <= MAX_ELEMENT_RANK);
        CliffordAlgebra {
            inner: Arc::new(AlgebraInner {
                rank: gram.rows(),
                gram,
                gen_products: DashMap::new(),
            }),
        }
    }

    pub fn rank(&self) -> usize {
        self.inner.rank
    }

    /// Dimension 2^rank of the algebra.
    pub fn dim(&self) -> usize {
        1usize << self.inner.rank
    }

    pub fn gram(&self) -> &RatMat {
        &self.inner.gram
    }

    /// Bilinear pairing of rational coordinate vectors.
    pub fn pair(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        let n = self.rank();
        assert_eq!(x.len(), n);
        assert_eq!(y.len(), n);
        let mut acc = BigRational::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                acc += xi * &self.inner.gram[(i, j)] * yj;
            }
        }
        acc
    }

    /// Quadratic form q(v) = (v, v) / 2.
    pub fn quad(&self, x: &[BigRational]) -> BigRational {
        self.pair(x, x) / BigRational::from_integer(BigInt::from(2))
    }

    pub fn zero(&self) -> CliffordElement {
        CliffordElement {
            algebra: self.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(&self) -> CliffordElement {
        let mut e = self.zero();
        e.coeffs.insert(0, BigRational::one());
        e
    }

    pub fn basis_element(&self, mask: u32) -> CliffordElement {
        assert!((mask as u64) < (1u64 << self.rank()));
        let mut e = self.zero();
        e.coeffs.insert(mask, BigRational::one());
        e
    }

    /// Image of a lattice vector (integer coordinates).
    pub fn vector(&self, coords: &[i64]) -> CliffordElement {
        self.vector_rat(
            &coords
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect::<Vec<_>>(),
        )
    }

    /// Image of a vector with rational coordinates.
    pub fn vector_rat(&self, coords: &[BigRational]) -> CliffordElement {
        assert_eq!(coords.len(), self.rank());
        let mut e = self.zero();
        for (k, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                e.coeffs.insert(1 << k, c.clone());
            }
        }
        e
    }

    /// v_k * e_S as a sorted sparse combination, memoized.
    fn gen_mul(&self, k: u8, mask: u32) -> SparseTerms {
        if let Some(hit) = self.inner.gen_products.get(&(k, mask)) {
            return hit.clone();
        }
        let result: Vec<(u32, BigRational)> = if mask == 0 {
            vec![(1u32 << k, BigRational::one())]
        } else {
            let s = mask.trailing_zeros() as u8;
            let rest = mask & !(1u32 << s);
            match k.cmp(&s) {
                std::cmp::Ordering::Less => vec![(mask | (1 << k), BigRational::one())],
                std::cmp::Ordering::Equal => {
                    // v_k v_k = q(v_k)
                    let q = &self.inner.gram[(k as usize, k as usize)]
                        / BigRational::from_integer(BigInt::from(2));
                    if q.is_zero() {
                        vec![]
                    } else {
                        vec![(rest, q)]
                    }
                }
                std::cmp::Ordering::Greater => {
                    // v_k v_s = -v_s v_k + (v_k, v_s)
                    let rec = self.gen_mul(k, rest);
                    let mut out: Vec<(u32, BigRational)> = Vec::with_capacity(rec.len() + 1);
                    let b = self.inner.gram[(k as usize, s as usize)].clone();
                    if !b.is_zero() {
                        out.push((rest, b));
                    }
                    for (m, c) in rec.iter() {
                        debug_assert_eq!(m & (1 << s), 0);
                        out.push((m | (1 << s), -c));
                    }
                    out.sort_by_key(|t| t.0);
                    // merge duplicates (the constant term may collide)
                    let mut merged: Vec<(u32, BigRational)> = Vec::with_capacity(out.len());
                    for (m, c) in out {
                        match merged.last_mut() {
                            Some((lm, lc)) if *lm == m => *lc += c,
                            _ => merged.push((m, c)),
                        }
                    }
                    merged.retain(|(_, c)| !c.is_zero());
                    merged
                }
            }
        };
        let arc: SparseTerms = Arc::new(result);
        self.inner.gen_products.insert((k, mask), arc.clone());
        arc
    }
}

/// Element of the Clifford algebra, sparse over the subset-monomial basis.
#[derive(Debug, Clone)]
pub struct CliffordElement {
    algebra: CliffordAlgebra,
    coeffs: BTreeMap<u32, BigRational>,
}

impl PartialEq for CliffordElement {
    fn eq(&self, other: &Self) -> bool {
        self.algebra == other.algebra && self.coeffs == other.coeffs
    }
}

impl CliffordElement {
    pub fn algebra(&self) -> &CliffordAlgebra {
        &self.algebra
    }

    pub fn coeff(&self, mask: u32) -> BigRational {
        self.coeffs.get(&mask).cloned().unwrap_or_default()
    }

    pub fn set_coeff(&mut self, mask: u32, c: BigRational) {
        if c.is_zero() {
            self.coeffs.remove(&mask);
        } else {
            self.coeffs.insert(mask, c);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&u32, &BigRational)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check_parent(&self, other: &Self) -> Result<(), CliffordError> {
        if self.algebra == other.algebra {
            Ok(())
        } else {
            Err(CliffordError::MismatchedParents)
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, CliffordError> {
        self.check_parent(rhs)?;
        let mut out = self.clone();
        for (m, c) in &rhs.coeffs {
            let sum = out.coeff(*m) + c;
            out.set_coeff(*m, sum);
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, CliffordError> {
        self.check_parent(rhs)?;
        let mut out = self.clone();
        for (m, c) in &rhs.coeffs {
            let diff = out.coeff(*m) - c;
            out.set_coeff(*m, diff);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.algebra.zero();
        for (m, c) in &self.coeffs {
            out.coeffs.insert(*m, -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return self.algebra.zero();
        }
        let mut out = self.algebra.zero();
        for (m, v) in &self.coeffs {
            out.coeffs.insert(*m, c * v);
        }
        out
    }

    /// Left multiplication by a single generator.
    fn gen_mul_into(&self, k: u8, acc: &mut BTreeMap<u32, BigRational>, scale: &BigRational) {
        for (m, c) in &self.coeffs {
            let terms = self.algebra.gen_mul(k, *m);
            for (tm, tc) in terms.iter() {
                let add = tc * c * scale;
                if add.is_zero() {
                    continue;
                }
                match acc.get_mut(tm) {
                    Some(slot) => {
                        *slot += add;
                        if slot.is_zero() {
                            acc.remove(tm);
                        }
                    }
                    None => {
                        acc.insert(*tm, add);
                    }
                }
            }
        }
    }

    /// Clifford product.
    pub fn mul(&self, rhs: &Self) -> Result<Self, CliffordError> {
        self.check_parent(rhs)?;
        let mut out = self.algebra.zero();
        for (smask, scoef) in &self.coeffs {
            // e_S * rhs: fold the generators of S from the right:
            // v_{s1} (v_{s2} (... (v_{sk} * rhs)))
            let mut acc = rhs.clone();
            let mut bits: Vec<u8> = (0..32).filter(|b| smask & (1 << b) != 0).collect();
            bits.reverse();
            for k in bits {
                let mut next = BTreeMap::new();
                acc.gen_mul_into(k, &mut next, &BigRational::one());
                acc = CliffordElement {
                    algebra: self.algebra.clone(),
                    coeffs: next,
                };
            }
            for (m, c) in acc.coeffs {
                let add = scoef * &c;
                let sum = out.coeff(m) + add;
                out.set_coeff(m, sum);
            }
        }
        Ok(out)
    }

    /// Parity decomposition support: true if every monomial has even grade.
    pub fn is_even(&self) -> bool {
        self.coeffs.keys().all(|m| m.count_ones() % 2 == 0)
    }

    pub fn is_odd(&self) -> bool {
        self.coeffs.keys().all(|m| m.count_ones() % 2 == 1)
    }

    /// Projection onto the even or odd part.
    pub fn parity_part(&self, even: bool) -> Self {
        let mut out = self.algebra.zero();
        for (m, c) in &self.coeffs {
            if (m.count_ones() % 2 == 0) == even {
                out.coeffs.insert(*m, c.clone());
            }
        }
        out
    }

    /// True when supported on grade-one monomials only.
    pub fn is_vector(&self) -> bool {
        self.coeffs.keys().all(|m| m.count_ones() == 1)
    }

    /// Extracts rational coordinates if the element is a vector.
    pub fn as_vector(&self) -> Option<Vec<BigRational>> {
        if !self.is_vector() {
            return None;
        }
        let mut v = vec![BigRational::zero(); self.algebra.rank()];
        for (m, c) in &self.coeffs {
            v[m.trailing_zeros() as usize] = c.clone();
        }
        Some(v)
    }
}
