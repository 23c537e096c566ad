//! The canonical idempotent projector End(Cl) -> i(M) and its hyperbolic
//! cross-check form.
//!
//! With the trace form [g1, g2] = 2^{1-n} Tr(g1 g2), the embedding i is an
//! isometry onto its image, so projection onto i(M) along the orthogonal
//! complement is pi(g) = sum_k [g, i(w*_k)] i(w_k) for any basis {w_k} of M
//! with [,]-dual {w*_k}. The dual basis comes from the inverse Gram matrix.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::filtration::AdaptedBasis;
use super::operator::{lmul_operator, trace_pair, EndOperator};
use super::{CliffordAlgebra, CliffordError};

/// Dual-basis projector onto i(M); works over any nondegenerate form.
#[derive(Debug, Clone)]
pub struct CanonicalProjector {
    algebra: CliffordAlgebra,
    basis_ops: Vec<EndOperator>,
    dual_ops: Vec<EndOperator>,
}

impl CanonicalProjector {
    pub fn new(alg: &CliffordAlgebra) -> Result<Self, CliffordError> {
        let n = alg.rank();
        let ginv = alg
            .gram()
            .inverse()
            .ok_or(CliffordError::DegenerateForm)?;
        let mut basis_ops = Vec::with_capacity(n);
        let mut dual_ops = Vec::with_capacity(n);
        for k in 0..n {
            let mut coords = vec![BigRational::zero(); n];
            coords[k] = BigRational::from_integer(BigInt::from(1));
            basis_ops.push(lmul_operator(alg, &coords)?);
            // w*_k = sum_j (G^{-1})_{jk} w_j satisfies (w_i, w*_k) = delta_ik.
            let dual: Vec<BigRational> = (0..n).map(|j| ginv[(j, k)].clone()).collect();
            dual_ops.push(lmul_operator(alg, &dual)?);
        }
        Ok(CanonicalProjector {
            algebra: alg.clone(),
            basis_ops,
            dual_ops,
        })
    }

    pub fn algebra(&self) -> &CliffordAlgebra {
        &self.algebra
    }

    pub(crate) fn basis_operators(&self) -> &[EndOperator] {
        &self.basis_ops
    }

    pub(crate) fn dual_operators(&self) -> &[EndOperator] {
        &self.dual_ops
    }

    /// Coordinates z with pi(g) = i(z).
    pub fn apply_vector(&self, g: &EndOperator) -> Result<Vec<BigRational>, CliffordError> {
        self.dual_ops
            .iter()
            .map(|dual| trace_pair(g, dual))
            .collect()
    }

    /// pi(g) as a dense operator.
    pub fn apply(&self, g: &EndOperator) -> Result<EndOperator, CliffordError> {
        let z = self.apply_vector(g)?;
        let mut out = EndOperator::zero(g.dim());
        for (c, op) in z.iter().zip(&self.basis_ops) {
            if c.is_zero() {
                continue;
            }
            out = out.add(&op.scale(c))?;
        }
        Ok(out)
    }

    /// Smallest t >= 0 such that p^t pi maps integral operators to integral
    /// operators, computed from the exact denominators of pi on the
    /// elementary-operator basis.
    pub fn integrality_exponent(&self, p: u64) -> u32 {
        let n = self.basis_ops.len();
        let dim = self.basis_ops.first().map_or(1, |o| o.dim());
        let scale = {
            let denom = BigInt::from(2).pow(dim.trailing_zeros()) / BigInt::from(2);
            BigRational::new(BigInt::from(1), denom)
        };
        // pi(E_{uv}) = 2^{1-n} sum_k (i(w*_k))_{vu} i(w_k); collect the exact
        // entries as rank-one accumulations and take the worst denominator.
        let mut acc: BTreeMap<(usize, usize, usize, usize), BigRational> = BTreeMap::new();
        for k in 0..n {
            let dual = self.dual_ops[k].matrix();
            let base = self.basis_ops[k].matrix();
            for v in 0..dim {
                for u in 0..dim {
                    let c = &dual[(v, u)];
                    if c.is_zero() {
                        continue;
                    }
                    let c = c * &scale;
                    for a in 0..dim {
                        for b in 0..dim {
                            let m = &base[(a, b)];
                            if m.is_zero() {
                                continue;
                            }
                            let term = &c * m;
                            acc.entry((u, v, a, b))
                                .and_modify(|s| *s += &term)
                                .or_insert(term);
                        }
                    }
                }
            }
        }
        let mut worst = 0u32;
        let pb = BigInt::from(p);
        for val in acc.values() {
            if val.is_zero() {
                continue;
            }
            let mut den = val.denom().abs();
            let mut v = 0u32;
            while (&den % &pb).is_zero() {
                den /= &pb;
                v += 1;
            }
            worst = worst.max(v);
        }
        worst
    }
}

/// Projector built from an adapted hyperbolic basis.
///
/// pi(g) = [g, i(f)] i(e) + [g, i(e)] i(f) + sum_j beta_j [g, i(v_j)] i(v_j)
/// with beta_j = (v_j, v_j)^{-1}; agrees with the dual-basis form.
#[derive(Debug, Clone)]
pub struct HyperbolicProjector {
    ie: EndOperator,
    if_: EndOperator,
    orth_ops: Vec<EndOperator>,
    betas: Vec<BigRational>,
}

impl HyperbolicProjector {
    /// Builds from a found hyperbolic pair; fails with NoHyperbolicPair on
    /// forms without rational isotropic vectors.
    pub fn search(alg: &CliffordAlgebra) -> Result<Self, CliffordError> {
        let adapted = AdaptedBasis::search(alg)?;
        Self::from_adapted(alg, &adapted)
    }

    pub fn from_adapted(
        alg: &CliffordAlgebra,
        adapted: &AdaptedBasis,
    ) -> Result<Self, CliffordError> {
        let ie = lmul_operator(alg, &adapted.e)?;
        let if_ = lmul_operator(alg, &adapted.f)?;
        let mut orth_ops = Vec::new();
        let mut betas = Vec::new();
        for v in &adapted.orthogonal {
            orth_ops.push(lmul_operator(alg, v)?);
            let norm = alg.pair(v, v);
            if norm.is_zero() {
                return Err(CliffordError::DegenerateForm);
            }
            betas.push(norm.recip());
        }
        Ok(HyperbolicProjector {
            ie,
            if_,
            orth_ops,
            betas,
        })
    }

    pub fn apply(&self, g: &EndOperator) -> Result<EndOperator, CliffordError> {
        let mut out = self.ie.scale(&trace_pair(g, &self.if_)?);
        out = out.add(&self.if_.scale(&trace_pair(g, &self.ie)?))?;
        for (op, beta) in self.orth_ops.iter().zip(&self.betas) {
            let c = trace_pair(g, op)? * beta;
            out = out.add(&op.scale(&c))?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::QuadLattice;
    use rand::{Rng, SeedableRng};

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn random_operator(rng: &mut rand_chacha::ChaCha12Rng, dim: usize) -> EndOperator {
        let mut m = crate::linalg::RatMat::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = rat(rng.random_range(-5..=5));
            }
        }
        EndOperator::from_matrix(m)
    }

    fn test_lattices() -> Vec<QuadLattice> {
        vec![
            QuadLattice::hyperbolic(),
            QuadLattice::hyperbolic()
                .direct_sum(&QuadLattice::from_gram(vec![vec![2, 0], vec![0, 2]]).unwrap()),
            QuadLattice::from_gram(vec![vec![2, 1], vec![1, 4]]).unwrap(),
            QuadLattice::hyperbolic()
                .direct_sum(&QuadLattice::from_gram(vec![
                    vec![2, 1, 0, 0],
                    vec![1, 2, 0, 0],
                    vec![0, 0, 4, 0],
                    vec![0, 0, 0, -2],
                ])
                .unwrap()),
        ]
    }

    #[test]
    fn projector_fixes_vectors() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(11);
        for lat in test_lattices() {
            let n = lat.rank();
            let alg = CliffordAlgebra::new(&lat).unwrap();
            let proj = CanonicalProjector::new(&alg).unwrap();
            for _ in 0..8 {
                let v: Vec<i64> = (0..n).map(|_| rng.random_range(-4..=4)).collect();
                let coords: Vec<BigRational> = v.iter().map(|&c| rat(c)).collect();
                let iv = lmul_operator(&alg, &coords).unwrap();
                assert_eq!(proj.apply(&iv).unwrap(), iv);
                assert_eq!(proj.apply_vector(&iv).unwrap(), coords);
            }
        }
    }

    #[test]
    fn projector_is_idempotent() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(12);
        for lat in test_lattices() {
            let alg = CliffordAlgebra::new(&lat).unwrap();
            let proj = CanonicalProjector::new(&alg).unwrap();
            for _ in 0..5 {
                let g = random_operator(&mut rng, alg.dim());
                let pg = proj.apply(&g).unwrap();
                assert_eq!(proj.apply(&pg).unwrap(), pg);
            }
        }
    }

    #[test]
    fn projector_kernel_is_orthogonal_complement() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(13);
        for lat in test_lattices() {
            let alg = CliffordAlgebra::new(&lat).unwrap();
            let proj = CanonicalProjector::new(&alg).unwrap();
            for _ in 0..5 {
                let g = random_operator(&mut rng, alg.dim());
                let residual = g.sub(&proj.apply(&g).unwrap()).unwrap();
                // residual is [,]-orthogonal to every i(w_k)
                for op in proj.basis_operators() {
                    assert!(trace_pair(&residual, op).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn projector_kills_identity() {
        for lat in test_lattices() {
            let alg = CliffordAlgebra::new(&lat).unwrap();
            let proj = CanonicalProjector::new(&alg).unwrap();
            let id = EndOperator::identity(alg.dim());
            assert!(proj.apply(&id).unwrap().is_zero());
        }
    }

    #[test]
    fn hyperbolic_formula_agrees_with_dual_basis() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(14);
        for lat in [
            QuadLattice::hyperbolic(),
            QuadLattice::hyperbolic()
                .direct_sum(&QuadLattice::from_gram(vec![vec![2, 0], vec![0, 2]]).unwrap()),
            QuadLattice::hyperbolic().direct_sum(&QuadLattice::hyperbolic()),
        ] {
            let alg = CliffordAlgebra::new(&lat).unwrap();
            let dual = CanonicalProjector::new(&alg).unwrap();
            let hyp = HyperbolicProjector::search(&alg).unwrap();
            for _ in 0..5 {
                let g = random_operator(&mut rng, alg.dim());
                assert_eq!(hyp.apply(&g).unwrap(), dual.apply(&g).unwrap());
            }
        }
    }

    #[test]
    fn hyperbolic_search_fails_on_definite_but_dual_works() {
        let lat = QuadLattice::from_gram(vec![vec![2, 0], vec![0, 4]]).unwrap();
        let alg = CliffordAlgebra::new(&lat).unwrap();
        assert!(matches!(
            HyperbolicProjector::search(&alg).unwrap_err(),
            CliffordError::NoHyperbolicPair
        ));
        assert!(CanonicalProjector::new(&alg).is_ok());
    }

    #[test]
    fn integrality_exponent_examples() {
        // On U the inverse Gram is integral, so pi itself is integral except
        // for the 2^{1-n} trace normalization absorbed by traces of integer
        // matrices; the exponent at odd p vanishes.
        let alg = CliffordAlgebra::new(&QuadLattice::hyperbolic()).unwrap();
        let proj = CanonicalProjector::new(&alg).unwrap();
        assert_eq!(proj.integrality_exponent(3), 0);
        // On <2d> with d = 3 the dual basis has denominator 6.
        let alg2 = CliffordAlgebra::new(&QuadLattice::span2d(3).unwrap()).unwrap();
        let proj2 = CanonicalProjector::new(&alg2).unwrap();
        assert_eq!(proj2.integrality_exponent(3), 1);
        assert_eq!(proj2.integrality_exponent(5), 0);
    }

    #[test]
    fn degenerate_form_rejected() {
        let lat = QuadLattice::from_gram(vec![vec![0, 0], vec![0, 2]]).unwrap();
        let alg = CliffordAlgebra::new(&lat).unwrap();
        assert_eq!(
            CanonicalProjector::new(&alg).unwrap_err(),
            CliffordError::DegenerateForm
        );
    }
}
