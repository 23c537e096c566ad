//! Dense endomorphisms of the Clifford algebra and the trace pairing.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{CliffordAlgebra, CliffordElement, CliffordError, MAX_DENSE_RANK};
use crate::linalg::RatMat;

/// Endomorphism of Cl(M) in the monomial basis, as a dense rational matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EndOperator {
    matrix: RatMat,
}

impl EndOperator {
    pub fn from_matrix(matrix: RatMat) -> Self {
        assert_eq!(matrix.rows(), matrix.cols());
        EndOperator { matrix }
    }

    pub fn identity(dim: usize) -> Self {
        EndOperator {
            matrix: RatMat::identity(dim),
        }
    }

    pub fn zero(dim: usize) -> Self {
        EndOperator {
            matrix: RatMat::zeros(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &RatMat {
        &self.matrix
    }

    pub fn compose(&self, rhs: &EndOperator) -> Result<EndOperator, CliffordError> {
        if self.dim() != rhs.dim() {
            return Err(CliffordError::DimensionMismatch);
        }
        Ok(EndOperator {
            matrix: self.matrix.mul(&rhs.matrix),
        })
    }

    pub fn add(&self, rhs: &EndOperator) -> Result<EndOperator, CliffordError> {
        if self.dim() != rhs.dim() {
            return Err(CliffordError::DimensionMismatch);
        }
        Ok(EndOperator {
            matrix: self.matrix.add(&rhs.matrix),
        })
    }

    pub fn sub(&self, rhs: &EndOperator) -> Result<EndOperator, CliffordError> {
        if self.dim() != rhs.dim() {
            return Err(CliffordError::DimensionMismatch);
        }
        Ok(EndOperator {
            matrix: self.matrix.sub(&rhs.matrix),
        })
    }

    pub fn scale(&self, c: &BigRational) -> EndOperator {
        EndOperator {
            matrix: self.matrix.scale(c),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn trace(&self) -> BigRational {
        self.matrix.trace()
    }

    /// Applies the operator to an element (coordinates in the monomial basis).
    pub fn apply(&self, x: &CliffordElement) -> CliffordElement {
        let alg = x.algebra().clone();
        let dim = self.dim();
        assert_eq!(alg.dim(), dim);
        let mut out = alg.zero();
        for (m, c) in x.iter() {
            for i in 0..dim {
                let entry = &self.matrix[(i, *m as usize)];
                if entry.is_zero() {
                    continue;
                }
                let add = entry * c;
                let sum = out.coeff(i as u32) + add;
                out.set_coeff(i as u32, sum);
            }
        }
        out
    }
}

fn check_dense_rank(alg: &CliffordAlgebra) -> Result<(), CliffordError> {
    if alg.rank() > MAX_DENSE_RANK {
        Err(CliffordError::RankTooLarge)
    } else {
        Ok(())
    }
}

/// Matrix of left multiplication h -> v h by a vector with rational
/// coordinates; satisfies i(v)^2 = q(v) * Id.
pub fn lmul_operator(
    alg: &CliffordAlgebra,
    coords: &[BigRational],
) -> Result<EndOperator, CliffordError> {
    check_dense_rank(alg)?;
    assert_eq!(coords.len(), alg.rank());
    let dim = alg.dim();
    let mut m = RatMat::zeros(dim, dim);
    let v = alg.vector_rat(coords);
    for t in 0..dim {
        let col = v.mul(&alg.basis_element(t as u32)).expect("same algebra");
        for (mask, c) in col.iter() {
            m[(*mask as usize, t)] = c.clone();
        }
    }
    Ok(EndOperator { matrix: m })
}

/// Integer-coordinate convenience wrapper.
pub fn lmul_operator_int(
    alg: &CliffordAlgebra,
    coords: &[i64],
) -> Result<EndOperator, CliffordError> {
    let rat: Vec<BigRational> = coords
        .iter()
        .map(|&c| BigRational::from_integer(BigInt::from(c)))
        .collect();
    lmul_operator(alg, &rat)
}

/// Matrix of left multiplication by an arbitrary element.
pub fn lmul_elem_operator(g: &CliffordElement) -> Result<EndOperator, CliffordError> {
    let alg = g.algebra();
    check_dense_rank(alg)?;
    let dim = alg.dim();
    let mut m = RatMat::zeros(dim, dim);
    for t in 0..dim {
        let col = g.mul(&alg.basis_element(t as u32))?;
        for (mask, c) in col.iter() {
            m[(*mask as usize, t)] = c.clone();
        }
    }
    Ok(EndOperator { matrix: m })
}

/// Matrix of right multiplication h -> h b.
pub fn rmul_elem_operator(b: &CliffordElement) -> Result<EndOperator, CliffordError> {
    let alg = b.algebra();
    check_dense_rank(alg)?;
    let dim = alg.dim();
    let mut m = RatMat::zeros(dim, dim);
    for t in 0..dim {
        let col = alg.basis_element(t as u32).mul(b)?;
        for (mask, c) in col.iter() {
            m[(*mask as usize, t)] = c.clone();
        }
    }
    Ok(EndOperator { matrix: m })
}

/// Parity projector p^+ (even = true) or p^- onto the graded parts.
pub fn parity_projector(alg: &CliffordAlgebra, even: bool) -> Result<EndOperator, CliffordError> {
    check_dense_rank(alg)?;
    let dim = alg.dim();
    let mut m = RatMat::zeros(dim, dim);
    for t in 0..dim {
        if ((t as u32).count_ones() % 2 == 0) == even {
            m[(t, t)] = BigRational::one();
        }
    }
    Ok(EndOperator { matrix: m })
}

/// Normalized trace form [g1, g2] = 2^{1-n} Tr(g1 g2) on End(Cl); restricted
/// along the embedding i it recovers the lattice pairing.
pub fn trace_pair(g1: &EndOperator, g2: &EndOperator) -> Result<BigRational, CliffordError> {
    if g1.dim() != g2.dim() {
        return Err(CliffordError::DimensionMismatch);
    }
    let dim = g1.dim();
    debug_assert!(dim.is_power_of_two());
    let n = dim.trailing_zeros();
    let tr = g1.matrix.trace_of_product(&g2.matrix);
    // 2^{1-n} = 2 / 2^n
    let denom = BigInt::from(2).pow(n) / BigInt::from(2);
    Ok(tr / BigRational::from_integer(denom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::QuadLattice;
    use rand::{Rng, SeedableRng};

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn rats(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn zero_vector_gives_zero_operator() {
        let alg = CliffordAlgebra::new(&QuadLattice::hyperbolic()).unwrap();
        let op = lmul_operator_int(&alg, &[0, 0]).unwrap();
        assert!(op.is_zero());
    }

    #[test]
    fn isotropic_generator_squares_to_zero() {
        let alg = CliffordAlgebra::new(&QuadLattice::hyperbolic()).unwrap();
        let ix = lmul_operator_int(&alg, &[1, 0]).unwrap();
        assert!(ix.compose(&ix).unwrap().is_zero());
    }

    #[test]
    fn lmul_satisfies_clifford_relation() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        let lat = QuadLattice::hyperbolic().direct_sum(&QuadLattice::hyperbolic());
        let alg = CliffordAlgebra::new(&lat).unwrap();
        for _ in 0..15 {
            let v: Vec<i64> = (0..4).map(|_| rng.random_range(-3..=3)).collect();
            let w: Vec<i64> = (0..4).map(|_| rng.random_range(-3..=3)).collect();
            let iv = lmul_operator_int(&alg, &v).unwrap();
            let iw = lmul_operator_int(&alg, &w).unwrap();
            let anti = iv
                .compose(&iw)
                .unwrap()
                .add(&iw.compose(&iv).unwrap())
                .unwrap();
            let expected = EndOperator::identity(16).scale(&rat(lat.pair(&v, &w)));
            assert_eq!(anti, expected);
            let sq = iv.compose(&iv).unwrap();
            let q = alg.quad(&rats(&v));
            assert_eq!(sq, EndOperator::identity(16).scale(&q));
        }
    }

    #[test]
    fn trace_pair_restricts_to_lattice_form() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(8);
        for lat in [
            QuadLattice::hyperbolic(),
            QuadLattice::hyperbolic().direct_sum(&QuadLattice::span2d(3).unwrap()),
            QuadLattice::e8(),
        ] {
            let n = lat.rank();
            let alg = CliffordAlgebra::new(&lat).unwrap();
            for _ in 0..10 {
                let v: Vec<i64> = (0..n).map(|_| rng.random_range(-2..=2)).collect();
                let w: Vec<i64> = (0..n).map(|_| rng.random_range(-2..=2)).collect();
                let iv = lmul_operator_int(&alg, &v).unwrap();
                let iw = lmul_operator_int(&alg, &w).unwrap();
                assert_eq!(trace_pair(&iv, &iw).unwrap(), rat(lat.pair(&v, &w)));
            }
        }
    }

    #[test]
    fn trace_pair_of_identity_is_two() {
        for lat in [QuadLattice::hyperbolic(), QuadLattice::e8()] {
            let alg = CliffordAlgebra::new(&lat).unwrap();
            let id = EndOperator::identity(alg.dim());
            assert_eq!(trace_pair(&id, &id).unwrap(), rat(2));
        }
    }

    #[test]
    fn trace_pair_is_symmetric() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(9);
        let alg = CliffordAlgebra::new(&QuadLattice::hyperbolic()).unwrap();
        for _ in 0..10 {
            let mut a = RatMat::zeros(4, 4);
            let mut b = RatMat::zeros(4, 4);
            for i in 0..4 {
                for j in 0..4 {
                    a[(i, j)] = rat(rng.random_range(-5..=5));
                    b[(i, j)] = rat(rng.random_range(-5..=5));
                }
            }
            let (a, b) = (EndOperator::from_matrix(a), EndOperator::from_matrix(b));
            assert_eq!(
                trace_pair(&a, &b).unwrap(),
                trace_pair(&b, &a).unwrap()
            );
        }
        let _ = alg;
    }

    #[test]
    fn rank_guard() {
        let big = QuadLattice::from_gram(vec![vec![2; 1]; 1])
            .ok()
            .map(|_| ());
        let _ = big;
        // Rank 13 lattice exceeds the dense bound.
        let mut gram = vec![vec![0i64; 13]; 13];
        for (i, row) in gram.iter_mut().enumerate() {
            row[i] = 2;
        }
        let lat = QuadLattice::from_gram(gram).unwrap();
        let alg = CliffordAlgebra::new(&lat).unwrap();
        let coords = vec![0i64; 13];
        assert_eq!(
            lmul_operator_int(&alg, &coords).unwrap_err(),
            CliffordError::RankTooLarge
        );
    }
}
