//! Integral quadratic lattices: standard constructors, invariants, orthogonal
//! complements, and the explicit self-dual embedding.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::error::{Classify, ErrorClass};
use crate::exec::{self, ExecMode};
use crate::linalg::{IntMat, RatMat};

/// Errors from lattice operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("degenerate form")]
    DegenerateForm,
    #[error("unknown standard lattice name `{0}`")]
    UnknownName(String),
    #[error("rank mismatch between Gram matrix and basis data")]
    RankMismatch,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("parameter d must be >= 1")]
    BadScale,
    #[error("Gram entry exceeds the 64-bit storage range")]
    GramOverflow,
}

impl Classify for LatticeError {
    fn class(&self) -> ErrorClass {
        ErrorClass::Precondition
    }
}

/// Free Z-module of finite rank with an integral symmetric bilinear form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadLattice {
    gram: Vec<Vec<i64>>,
}

impl QuadLattice {
    pub fn from_gram(gram: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(LatticeError::RankMismatch);
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::NotSymmetric);
                }
            }
        }
        Ok(QuadLattice { gram })
    }

    /// The hyperbolic plane U: Gram [[0,1],[1,0]].
    pub fn hyperbolic() -> Self {
        QuadLattice {
            gram: vec![vec![0, 1], vec![1, 0]],
        }
    }

    /// E8 with the standard root-basis Gram (Bourbaki node numbering:
    /// chain 1-3-4-5-6-7-8 with node 2 attached to node 4).
    pub fn e8() -> Self {
        let edges = [(1, 3), (2, 4), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8)];
        let mut gram = vec![vec![0i64; 8]; 8];
        for (i, row) in gram.iter_mut().enumerate() {
            row[i] = 2;
        }
        for &(a, b) in &edges {
            gram[a - 1][b - 1] = -1;
            gram[b - 1][a - 1] = -1;
        }
        QuadLattice { gram }
    }

    /// The K3 lattice E8 + E8 + U + U + U, rank 22, signature (19, 3).
    pub fn k3() -> Self {
        let mut l = Self::e8().direct_sum(&Self::e8());
        for _ in 0..3 {
            l = l.direct_sum(&Self::hyperbolic());
        }
        l
    }

    /// Rank-one lattice <2d>.
    pub fn span2d(d: u64) -> Result<Self, LatticeError> {
        if d == 0 {
            return Err(LatticeError::BadScale);
        }
        Ok(QuadLattice {
            gram: vec![vec![2 * d as i64]],
        })
    }

    /// Looks up a standard lattice by name; `span2d` needs the parameter d.
    pub fn standard(name: &str, d: Option<u64>) -> Result<Self, LatticeError> {
        match name {
            "U" => Ok(Self::hyperbolic()),
            "E8" => Ok(Self::e8()),
            "K3" => Ok(Self::k3()),
            "span2d" => Self::span2d(d.ok_or(LatticeError::BadScale)?),
            other => Err(LatticeError::UnknownName(other.to_string())),
        }
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &Vec<Vec<i64>> {
        &self.gram
    }

    pub fn gram_int(&self) -> IntMat {
        IntMat::from_i64_rows(&self.gram)
    }

    pub fn gram_rat(&self) -> RatMat {
        RatMat::from_i64_rows(&self.gram)
    }

    /// All diagonal entries even, i.e. (x,x) in 2Z for every x.
    pub fn is_even(&self) -> bool {
        self.gram.iter().enumerate().all(|(i, r)| r[i] % 2 == 0)
    }

    /// Orthogonal direct sum (block-diagonal Gram).
    pub fn direct_sum(&self, other: &QuadLattice) -> QuadLattice {
        let n = self.rank();
        let m = other.rank();
        let mut gram = vec![vec![0i64; n + m]; n + m];
        for i in 0..n {
            gram[i][..n].copy_from_slice(&self.gram[i]);
        }
        for i in 0..m {
            for j in 0..m {
                gram[n + i][n + j] = other.gram[i][j];
            }
        }
        QuadLattice { gram }
    }

    /// Signed determinant of the Gram matrix (fraction-free elimination).
    pub fn discriminant(&self) -> BigInt {
        self.gram_int().det()
    }

    /// Sylvester signature (positives, negatives).
    pub fn signature(&self) -> Result<(usize, usize), LatticeError> {
        self.gram_rat()
            .symmetric_signature()
            .ok_or(LatticeError::DegenerateForm)
    }

    /// Self-dual at p means p does not divide the discriminant.
    pub fn is_self_dual_at(&self, p: u64) -> bool {
        !(self.discriminant() % BigInt::from(p)).is_zero()
    }

    /// Invariant factors of the Gram matrix with the trivial ones omitted;
    /// these are the cyclic orders of the discriminant group.
    pub fn discriminant_group(&self) -> Result<Vec<BigInt>, LatticeError> {
        if self.discriminant().is_zero() {
            return Err(LatticeError::DegenerateForm);
        }
        Ok(self
            .gram_int()
            .invariant_factors()
            .into_iter()
            .filter(|f| f.abs() > BigInt::from(1))
            .collect())
    }

    /// Bilinear pairing of two coordinate vectors.
    pub fn pair(&self, x: &[i64], y: &[i64]) -> i64 {
        assert_eq!(x.len(), self.rank());
        assert_eq!(y.len(), self.rank());
        let mut acc = 0i64;
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                acc += xi * self.gram[i][j] * yj;
            }
        }
        acc
    }
}

/// A sublattice presented by its basis in ambient coordinates.
#[derive(Debug, Clone)]
pub struct SublatticeEmbedding {
    pub ambient: QuadLattice,
    pub sub: QuadLattice,
    /// ambient.rank x sub.rank matrix; columns are the images of the
    /// sublattice basis.
    pub matrix: IntMat,
}

impl SublatticeEmbedding {
    pub fn new(ambient: QuadLattice, matrix: IntMat) -> Result<SublatticeEmbedding, LatticeError> {
        if matrix.rows() != ambient.rank() {
            return Err(LatticeError::RankMismatch);
        }
        let induced = matrix.transpose().mul(&ambient.gram_int()).mul(&matrix);
        let n = induced.rows();
        let mut gram = vec![vec![0i64; n]; n];
        for (i, row) in gram.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = induced[(i, j)].to_i64().ok_or(LatticeError::GramOverflow)?;
            }
        }
        Ok(SublatticeEmbedding {
            ambient,
            sub: QuadLattice::from_gram(gram)?,
            matrix,
        })
    }

    /// matrix^T * G_ambient * matrix == G_sub.
    pub fn is_isometry(&self) -> bool {
        let lhs = self
            .matrix
            .transpose()
            .mul(&self.ambient.gram_int())
            .mul(&self.matrix);
        lhs == self.sub.gram_int()
    }

    /// Primitive (image is a direct summand): all elementary divisors are 1.
    pub fn is_primitive(&self) -> bool {
        self.matrix
            .invariant_factors()
            .iter()
            .all(|f| f.abs() == BigInt::from(1))
            && self.matrix.rank() == self.sub.rank()
    }

    /// The saturated orthogonal complement of the sublattice, with its
    /// induced form. Primitive by construction: the integer kernel of a
    /// matrix is saturated.
    pub fn orthogonal_complement(&self) -> Result<SublatticeEmbedding, LatticeError> {
        // v is in the complement iff (image basis)^T * G * v = 0.
        let constraints = self.matrix.transpose().mul(&self.ambient.gram_int());
        let kernel = constraints.kernel_basis();
        SublatticeEmbedding::new(self.ambient.clone(), kernel)
    }
}

/// Output of the self-dual embedding construction.
#[derive(Debug, Clone)]
pub struct SelfDualEmbedding {
    /// L = E8 + E8 + U + U + <2d>.
    pub sub: QuadLattice,
    /// The self-dual-at-p overlattice of rank 22.
    pub ambient: QuadLattice,
    pub embedding: SublatticeEmbedding,
}

/// Builds the rank-22 even lattice of signature (20, 2) that is self-dual at
/// p and receives L = E8 + E8 + U + U + <2d> as a direct summand. The rank-2
/// completion block has Gram [[2d, 1], [1, 2p]]; the embedding is the
/// identity on the first twenty coordinates and sends the <2d>-generator to
/// the first new basis vector.
pub fn embed_into_selfdual(d: u64, p: u64) -> Result<SelfDualEmbedding, LatticeError> {
    if d == 0 {
        return Err(LatticeError::BadScale);
    }
    if !crate::padic::is_prime(p) {
        return Err(LatticeError::NotPrime(p));
    }
    let base = QuadLattice::e8()
        .direct_sum(&QuadLattice::e8())
        .direct_sum(&QuadLattice::hyperbolic())
        .direct_sum(&QuadLattice::hyperbolic());
    let sub = base.direct_sum(&QuadLattice::span2d(d)?);
    let completion =
        QuadLattice::from_gram(vec![vec![2 * d as i64, 1], vec![1, 2 * p as i64]])?;
    let ambient = base.direct_sum(&completion);

    let mut matrix = IntMat::zeros(22, 21);
    for i in 0..20 {
        matrix[(i, i)] = BigInt::from(1);
    }
    matrix[(20, 20)] = BigInt::from(1); // <2d> generator -> v1
    let embedding = SublatticeEmbedding::new(ambient.clone(), matrix)?;
    debug_assert_eq!(embedding.sub, sub);
    Ok(SelfDualEmbedding {
        sub,
        ambient,
        embedding,
    })
}

/// One row of the embedding sweep report.
#[derive(Debug, Clone)]
pub struct EmbedCheck {
    pub d: u64,
    pub p: u64,
    pub det: BigInt,
    pub even: bool,
    pub signature: (usize, usize),
    pub self_dual_at_p: bool,
    pub primitive: bool,
    pub det_matches_formula: bool,
}

impl EmbedCheck {
    pub fn all_pass(&self) -> bool {
        self.even
            && self.signature == (20, 2)
            && self.self_dual_at_p
            && self.primitive
            && self.det_matches_formula
    }
}

/// Runs the self-dual embedding over a (d, p) grid; trials are independent
/// and run through the execution layer.
pub fn embedding_sweep(ds: &[u64], ps: &[u64], mode: ExecMode) -> Vec<EmbedCheck> {
    let grid: Vec<(u64, u64)> = ds
        .iter()
        .flat_map(|&d| ps.iter().map(move |&p| (d, p)))
        .collect();
    exec::map(mode, grid, |(d, p)| {
        let out = embed_into_selfdual(d, p).expect("valid parameters");
        let det = out.ambient.discriminant();
        let expected = BigInt::from(4 * d * p) - BigInt::from(1);
        EmbedCheck {
            d,
            p,
            det: det.clone(),
            even: out.ambient.is_even(),
            signature: out.ambient.signature().expect("nondegenerate"),
            self_dual_at_p: out.ambient.is_self_dual_at(p),
            primitive: out.embedding.is_primitive() && out.embedding.is_isometry(),
            det_matches_formula: det == expected,
        }
    })
}
