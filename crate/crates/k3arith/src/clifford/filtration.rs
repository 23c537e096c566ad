//! Filtrations on the Clifford algebra defined by an isotropic vector.
//!
//! For a nonzero e with q(e) = 0 the lattice filtration is
//! 0 ⊂ <e> ⊂ <e>^perp ⊂ M, and the algebra filtration is
//! 0 ⊂ image(i(e)) ⊂ Cl with dim image(i(e)) = 2^{n-1}.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::operator::{lmul_operator, parity_projector, rmul_elem_operator};
use super::{CliffordAlgebra, CliffordError};
use crate::exec::{self, ExecMode};
use crate::linalg::RatMat;

/// Decreasing filtration: (degree, column basis) pairs, degrees descending.
#[derive(Debug, Clone)]
pub struct Filtration {
    pub steps: Vec<(i32, RatMat)>,
}

/// The two filtrations attached to an isotropic vector.
#[derive(Debug, Clone)]
pub struct FiltrationPair {
    pub on_lattice: Filtration,
    pub on_algebra: Filtration,
    /// dim image(i(e)); always 2^{n-1}.
    pub fil0_dim: usize,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn col_matrix(cols: &[Vec<BigRational>]) -> RatMat {
    let rows = cols.first().map_or(0, |c| c.len());
    let mut m = RatMat::zeros(rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        m.set_column(j, c);
    }
    m
}

fn validate_isotropic(
    alg: &CliffordAlgebra,
    e: &[BigRational],
) -> Result<(), CliffordError> {
    if e.iter().all(|c| c.is_zero()) {
        return Err(CliffordError::ZeroVector);
    }
    if !alg.quad(e).is_zero() {
        return Err(CliffordError::NotIsotropic);
    }
    Ok(())
}

/// Filtrations on M and on Cl defined by an isotropic vector e.
pub fn isotropic_filtration(
    alg: &CliffordAlgebra,
    e: &[BigRational],
) -> Result<FiltrationPair, CliffordError> {
    validate_isotropic(alg, e)?;
    let n = alg.rank();
    if alg.gram().rank() < n {
        return Err(CliffordError::DegenerateForm);
    }
    // <e>^perp: null space of the single row e^T G.
    let e_col = col_matrix(&[e.to_vec()]);
    let row = e_col.transpose().mul(alg.gram());
    let perp = row.null_space_basis();

    let on_lattice = Filtration {
        steps: vec![
            (2, RatMat::zeros(n, 0)),
            (1, e_col.clone()),
            (0, perp),
            (-1, RatMat::identity(n)),
        ],
    };

    let ie = lmul_operator(alg, e)?;
    let image = ie.matrix().column_space_basis();
    let fil0_dim = image.cols();
    let dim = alg.dim();
    let on_algebra = Filtration {
        steps: vec![
            (1, RatMat::zeros(dim, 0)),
            (0, image),
            (-1, RatMat::identity(dim)),
        ],
    };
    Ok(FiltrationPair {
        on_lattice,
        on_algebra,
        fil0_dim,
    })
}

/// Dimension of image(i(e)) computed structurally in an adapted monomial
/// basis, valid at any rank (no dense matrices). In a basis e, f, v_3, ...
/// with q(e) = 0, left multiplication by e sends a monomial without e to the
/// monomial with e prepended (coefficient 1, no lower terms since e is the
/// smallest generator) and kills monomials containing e. The image is spanned
/// by the monomials containing e.
pub fn fil0_structural_dim(rank: u32) -> u64 {
    assert!(rank >= 1 && rank <= 30, "rank out of structural range");
    let mut count = 0u64;
    for mask in 0u64..(1u64 << rank) {
        if mask & 1 == 0 {
            // image monomial mask | 1 is distinct for distinct masks
            count += 1;
        }
    }
    count
}

/// Basis of M adapted to an isotropic vector: e, f with (e,f) = 1 and
/// q(e) = q(f) = 0, plus an orthogonal basis of the complement of <e, f>.
#[derive(Debug, Clone)]
pub struct AdaptedBasis {
    pub e: Vec<BigRational>,
    pub f: Vec<BigRational>,
    pub orthogonal: Vec<Vec<BigRational>>,
}

impl AdaptedBasis {
    /// Completes a given isotropic e to an adapted basis.
    pub fn from_isotropic(
        alg: &CliffordAlgebra,
        e: &[BigRational],
    ) -> Result<AdaptedBasis, CliffordError> {
        validate_isotropic(alg, e)?;
        let n = alg.rank();
        if alg.gram().rank() < n {
            return Err(CliffordError::DegenerateForm);
        }
        // f' with (e, f') != 0 exists by nondegeneracy.
        let mut fprime = None;
        for k in 0..n {
            let mut basis_vec = vec![BigRational::zero(); n];
            basis_vec[k] = BigRational::one();
            if !alg.pair(e, &basis_vec).is_zero() {
                fprime = Some(basis_vec);
                break;
            }
        }
        let fprime = fprime.ok_or(CliffordError::DegenerateForm)?;
        let pairing = alg.pair(e, &fprime);
        let qf = alg.quad(&fprime);
        // f = f'/(e,f') - (q(f')/(e,f')^2) e
        let a = pairing.recip();
        let b = -qf / (&pairing * &pairing);
        let f: Vec<BigRational> = (0..n)
            .map(|i| &a * &fprime[i] + &b * &e[i])
            .collect();
        debug_assert!(alg.quad(&f).is_zero());
        debug_assert!(alg.pair(e, &f).is_one());

        // Complement of span{e, f}: null space of the 2 x n pairing rows.
        let ef = col_matrix(&[e.to_vec(), f.clone()]);
        let rows = ef.transpose().mul(alg.gram());
        let comp = rows.null_space_basis();
        let mut vs: Vec<Vec<BigRational>> = (0..comp.cols()).map(|j| comp.column(j)).collect();

        // Orthogonalize, fixing isotropic pivots by mixing in a partner.
        for i in 0..vs.len() {
            if alg.quad(&vs[i]).is_zero() {
                let j = (i + 1..vs.len())
                    .find(|&j| !alg.pair(&vs[i], &vs[j]).is_zero())
                    .ok_or(CliffordError::DegenerateForm)?;
                // q(v_i + t v_j) = q(v_i) + t (v_i, v_j) + t^2 q(v_j) is a
                // nonzero polynomial in t; one of t = 1, 2, 3 avoids its roots.
                let mut fixed = false;
                for t in 1..=3i64 {
                    let cand: Vec<BigRational> = (0..n)
                        .map(|k| &vs[i][k] + rat(t) * &vs[j][k])
                        .collect();
                    if !alg.quad(&cand).is_zero() {
                        vs[i] = cand;
                        fixed = true;
                        break;
                    }
                }
                if !fixed {
                    return Err(CliffordError::DegenerateForm);
                }
            }
            let qi = alg.quad(&vs[i]);
            let norm = &qi * rat(2); // (v_i, v_i)
            for j in i + 1..vs.len() {
                let c = alg.pair(&vs[i], &vs[j]) / &norm;
                if c.is_zero() {
                    continue;
                }
                for k in 0..n {
                    let t = &c * &vs[i][k];
                    vs[j][k] -= t;
                }
            }
        }
        Ok(AdaptedBasis {
            e: e.to_vec(),
            f,
            orthogonal: vs,
        })
    }

    /// Searches for an isotropic vector and adapts a basis to it. Fails with
    /// NoHyperbolicPair when no rational isotropic vector is found (definite
    /// forms have none).
    pub fn search(alg: &CliffordAlgebra) -> Result<AdaptedBasis, CliffordError> {
        let e = find_isotropic(alg).ok_or(CliffordError::NoHyperbolicPair)?;
        AdaptedBasis::from_isotropic(alg, &e)
    }

    /// Change-of-basis matrix whose columns are e, f, v_3, ..., v_n.
    pub fn matrix(&self) -> RatMat {
        let mut cols = vec![self.e.clone(), self.f.clone()];
        cols.extend(self.orthogonal.iter().cloned());
        col_matrix(&cols)
    }
}

/// Looks for a rational isotropic vector: basis vectors, then pair
/// combinations e_i + t e_j with rational roots.
fn find_isotropic(alg: &CliffordAlgebra) -> Option<Vec<BigRational>> {
    let n = alg.rank();
    let basis = |k: usize| {
        let mut v = vec![BigRational::zero(); n];
        v[k] = BigRational::one();
        v
    };
    for k in 0..n {
        let v = basis(k);
        if alg.quad(&v).is_zero() {
            return Some(v);
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            // q(e_i + t e_j) = q_i + t b + t^2 q_j with b = (e_i, e_j)
            let qi = alg.quad(&basis(i));
            let qj = alg.quad(&basis(j));
            let b = alg.pair(&basis(i), &basis(j));
            // q_j != 0 here (isotropic basis vectors caught above)
            let disc = &b * &b - rat(4) * &qi * &qj;
            if let Some(root) = rational_sqrt(&disc) {
                let t = (-&b + root) / (rat(2) * &qj);
                let mut v = basis(i);
                for k in 0..n {
                    let add = &t * &basis(j)[k];
                    v[k] += add;
                }
                if alg.quad(&v).is_zero() && v.iter().any(|c| !c.is_zero()) {
                    return Some(v);
                }
            }
        }
    }
    None
}

/// Exact square root of a nonnegative rational, when it exists.
fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    use num_traits::Signed;
    if x.is_negative() {
        return None;
    }
    let num = x.numer().magnitude().sqrt();
    let den = x.denom().magnitude().sqrt();
    let cand = BigRational::new(BigInt::from(num), BigInt::from(den));
    if &(&cand * &cand) == x {
        Some(cand)
    } else {
        None
    }
}

/// Result of one clause of the compatibility check.
#[derive(Debug, Clone)]
pub struct ClauseResult {
    pub pass: bool,
    pub witness: Option<String>,
}

impl ClauseResult {
    fn pass() -> Self {
        ClauseResult {
            pass: true,
            witness: None,
        }
    }

    fn fail(witness: String) -> Self {
        ClauseResult {
            pass: false,
            witness: Some(witness),
        }
    }
}

/// Per-clause report of the filtration compatibility check.
#[derive(Debug, Clone)]
pub struct CompatReport {
    /// i maps Fil^j(M) into Fil^j(End(Cl)).
    pub embedding_preserves: ClauseResult,
    /// The parity projectors preserve Fil(Cl).
    pub parity_preserves: ClauseResult,
    /// Right multiplications preserve Fil(Cl).
    pub right_action_preserves: ClauseResult,
    /// The canonical projector preserves Fil(End(Cl)).
    pub projector_preserves: ClauseResult,
}

impl CompatReport {
    pub fn all_pass(&self) -> bool {
        self.embedding_preserves.pass
            && self.parity_preserves.pass
            && self.right_action_preserves.pass
            && self.projector_preserves.pass
    }
}

/// Verifies the four compatibility clauses for the filtration defined by e.
pub fn filtration_compatibility_check(
    alg: &CliffordAlgebra,
    e: &[BigRational],
    mode: ExecMode,
) -> Result<CompatReport, CliffordError> {
    validate_isotropic(alg, e)?;
    let n = alg.rank();
    let dim = alg.dim();
    let pair = isotropic_filtration(alg, e)?;
    let p_basis = pair.on_algebra.steps[1].1.clone(); // Fil^0(Cl)
    let half = p_basis.cols();

    // Complete P to a basis [P | C] with standard vectors on non-pivot rows,
    // and let Q be the bottom rows of the inverse: ker Q = Fil^0(Cl).
    let mut probe = p_basis.transpose();
    let pivot_rows = probe.rref();
    let free_rows: Vec<usize> = (0..dim).filter(|r| !pivot_rows.contains(r)).collect();
    let mut full = RatMat::zeros(dim, dim);
    for j in 0..half {
        full.set_column(j, &p_basis.column(j));
    }
    for (k, &r) in free_rows.iter().enumerate() {
        full[(r, half + k)] = BigRational::one();
    }
    let inv = full.inverse().ok_or(CliffordError::DegenerateForm)?;
    let mut q_mat = RatMat::zeros(dim - half, dim);
    for i in 0..dim - half {
        for j in 0..dim {
            q_mat[(i, j)] = inv[(half + i, j)].clone();
        }
    }

    // Clause: the embedding preserves filtrations.
    let embedding_preserves = {
        let ie = lmul_operator(alg, e)?;
        let mut result = ClauseResult::pass();
        // i(e) in Fil^1: kills Fil^0 (e^2 = 0) and lands in Fil^0.
        let sq = ie.compose(&ie)?;
        if !sq.is_zero() {
            result = ClauseResult::fail("i(e)^2 != 0".into());
        }
        if !q_mat.mul(ie.matrix()).is_zero() {
            result = ClauseResult::fail("image of i(e) escapes Fil^0(Cl)".into());
        }
        // Basis of e^perp: i(u) must preserve Fil^0(Cl).
        let perp = &pair.on_lattice.steps[2].1;
        for j in 0..perp.cols() {
            let u = perp.column(j);
            let iu = lmul_operator(alg, &u)?;
            if !q_mat.mul(&iu.matrix().mul(&p_basis)).is_zero() {
                result = ClauseResult::fail(format!(
                    "i(u) fails to preserve Fil^0 for perp basis vector {j}"
                ));
                break;
            }
        }
        result
    };

    // Clause: parity projectors preserve Fil^0(Cl).
    let parity_preserves = {
        let mut result = ClauseResult::pass();
        for even in [true, false] {
            let proj = parity_projector(alg, even)?;
            if !q_mat.mul(&proj.matrix().mul(&p_basis)).is_zero() {
                result = ClauseResult::fail(format!(
                    "parity projector ({}) breaks Fil^0",
                    if even { "+" } else { "-" }
                ));
            }
        }
        result
    };

    // Clause: right multiplication by every basis monomial preserves Fil^0.
    let right_action_preserves = {
        let checks = exec::map(mode, (0..dim).collect::<Vec<_>>(), |t| {
            let b = alg.basis_element(t as u32);
            let rb = rmul_elem_operator(&b).expect("rank checked");
            if q_mat.mul(&rb.matrix().mul(&p_basis)).is_zero() {
                None
            } else {
                Some(t)
            }
        });
        match checks.into_iter().flatten().next() {
            None => ClauseResult::pass(),
            Some(t) => ClauseResult::fail(format!("right multiplication by monomial {t} breaks Fil^0")),
        }
    };

    // Clause: the canonical projector preserves the operator filtration.
    // pi(g) = sum_k c_k(g) i(w_k) with c_k(g) = [g, i(w*_k)], so membership of
    // pi(g) in Fil^j(End) is a linear condition on the vector c(g).
    let projector_preserves = {
        let proj = super::projector::CanonicalProjector::new(alg)?;
        let basis_ops = proj.basis_operators();
        let dual_ops = proj.dual_operators();

        // Stacked linear conditions on c.
        // Fil^0(End): Q (sum c_k i(w_k)) P = 0.
        let mut w0 = RatMat::zeros((dim - half) * half, n);
        // Fil^1(End): Q (sum c_k i(w_k)) = 0  and  (sum c_k i(w_k)) P = 0.
        let mut w1 = RatMat::zeros((dim - half) * dim + dim * half, n);
        for (k, op) in basis_ops.iter().enumerate() {
            let qop = q_mat.mul(op.matrix());
            let qop_p = qop.mul(&p_basis);
            for i in 0..dim - half {
                for j in 0..half {
                    w0[(i * half + j, k)] = qop_p[(i, j)].clone();
                }
            }
            for i in 0..dim - half {
                for j in 0..dim {
                    w1[(i * dim + j, k)] = qop[(i, j)].clone();
                }
            }
            let op_p = op.matrix().mul(&p_basis);
            let offset = (dim - half) * dim;
            for i in 0..dim {
                for j in 0..half {
                    w1[(offset + i * half + j, k)] = op_p[(i, j)].clone();
                }
            }
        }

        // Membership of an operator g in Fil^j(End) by its block shape, and
        // of pi(g) via the stacked conditions on c(g).
        let scale = {
            let denom = BigInt::from(2).pow(n as u32) / BigInt::from(2);
            BigRational::new(BigInt::one(), denom)
        };
        // x_{k,u} = i(w*_k) u for u over the columns of [P | C].
        let mut xs: Vec<Vec<Vec<BigRational>>> = Vec::with_capacity(n);
        for op in dual_ops.iter() {
            let prod = op.matrix().mul(&full);
            xs.push((0..dim).map(|j| prod.column(j)).collect());
        }

        let mut result = ClauseResult::pass();
        'outer: for ucol in 0..dim {
            for rrow in 0..dim {
                // g = u r^T with u = full[:, ucol], r = inv[rrow, :].
                // Shape: g in Fil^1 iff ucol < half and rrow >= half;
                // g in Fil^0 iff not (ucol >= half and rrow < half).
                let in_fil1 = ucol < half && rrow >= half;
                let in_fil0 = !(ucol >= half && rrow < half);
                if !in_fil0 && !in_fil1 {
                    continue;
                }
                // c_k = 2^{1-n} * Tr(g i(w*_k)) = 2^{1-n} * r^T i(w*_k) u.
                let c: Vec<BigRational> = (0..n)
                    .map(|k| {
                        let xu = &xs[k][ucol];
                        let mut acc = BigRational::zero();
                        for j in 0..dim {
                            if inv[(rrow, j)].is_zero() || xu[j].is_zero() {
                                continue;
                            }
                            acc += &inv[(rrow, j)] * &xu[j];
                        }
                        acc * &scale
                    })
                    .collect();
                let w = if in_fil1 { &w1 } else { &w0 };
                // W c must vanish.
                for i in 0..w.rows() {
                    let mut acc = BigRational::zero();
                    for (k, ck) in c.iter().enumerate() {
                        if ck.is_zero() || w[(i, k)].is_zero() {
                            continue;
                        }
                        acc += &w[(i, k)] * ck;
                    }
                    if !acc.is_zero() {
                        result = ClauseResult::fail(format!(
                            "projector image of elementary operator ({ucol},{rrow}) leaves Fil^{}",
                            if in_fil1 { 1 } else { 0 }
                        ));
                        break 'outer;
                    }
                }
            }
        }
        result
    };

    Ok(CompatReport {
        embedding_preserves,
        parity_preserves,
        right_action_preserves,
        projector_preserves,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::QuadLattice;

    fn rank4_lattice() -> QuadLattice {
        QuadLattice::hyperbolic()
            .direct_sum(&QuadLattice::from_gram(vec![vec![2, 0], vec![0, 2]]).unwrap())
    }

    fn e_vec(n: usize) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); n];
        v[0] = BigRational::one();
        v
    }

    #[test]
    fn fil0_dimension_is_half() {
        let alg = CliffordAlgebra::new(&rank4_lattice()).unwrap();
        let pair = isotropic_filtration(&alg, &e_vec(4)).unwrap();
        assert_eq!(pair.fil0_dim, 8);

        let alg2 = CliffordAlgebra::new(&QuadLattice::hyperbolic()).unwrap();
        let pair2 = isotropic_filtration(&alg2, &e_vec(2)).unwrap();
        assert_eq!(pair2.fil0_dim, 2);
    }

    #[test]
    fn fil0_rejects_bad_input() {
        let alg = CliffordAlgebra::new(&rank4_lattice()).unwrap();
        let zero = vec![BigRational::zero(); 4];
        assert_eq!(
            isotropic_filtration(&alg, &zero).unwrap_err(),
            CliffordError::ZeroVector
        );
        let mut non_iso = vec![BigRational::zero(); 4];
        non_iso[2] = BigRational::one(); // q = 1
        assert_eq!(
            isotropic_filtration(&alg, &non_iso).unwrap_err(),
            CliffordError::NotIsotropic
        );
    }

    #[test]
    fn structural_dimension_counts() {
        assert_eq!(fil0_structural_dim(2), 2);
        assert_eq!(fil0_structural_dim(4), 8);
        assert_eq!(fil0_structural_dim(22), 1 << 21);
    }

    #[test]
    fn structural_matches_dense_at_small_ranks() {
        for lat in [
            QuadLattice::hyperbolic(),
            rank4_lattice(),
            QuadLattice::hyperbolic().direct_sum(
                &QuadLattice::from_gram(vec![
                    vec![2, 1, 0, 0],
                    vec![1, 2, 0, 0],
                    vec![0, 0, 4, 1],
                    vec![0, 0, 1, 6],
                ])
                .unwrap(),
            ),
        ] {
            let n = lat.rank();
            let alg = CliffordAlgebra::new(&lat).unwrap();
            let pair = isotropic_filtration(&alg, &e_vec(n)).unwrap();
            assert_eq!(pair.fil0_dim as u64, fil0_structural_dim(n as u32));
        }
    }

    #[test]
    fn adapted_basis_from_isotropic() {
        let alg = CliffordAlgebra::new(&rank4_lattice()).unwrap();
        let ab = AdaptedBasis::from_isotropic(&alg, &e_vec(4)).unwrap();
        assert!(alg.quad(&ab.e).is_zero());
        assert!(alg.quad(&ab.f).is_zero());
        assert!(alg.pair(&ab.e, &ab.f).is_one());
        for (i, v) in ab.orthogonal.iter().enumerate() {
            assert!(alg.pair(&ab.e, v).is_zero());
            assert!(alg.pair(&ab.f, v).is_zero());
            assert!(!alg.quad(v).is_zero());
            for w in ab.orthogonal.iter().skip(i + 1) {
                assert!(alg.pair(v, w).is_zero());
            }
        }
        // the adapted matrix is a genuine basis
        assert!(ab.matrix().inverse().is_some());
    }

    #[test]
    fn adapted_basis_search_fails_on_definite() {
        let lat = QuadLattice::from_gram(vec![vec![2, 0], vec![0, 4]]).unwrap();
        let alg = CliffordAlgebra::new(&lat).unwrap();
        assert_eq!(
            AdaptedBasis::search(&alg).unwrap_err(),
            CliffordError::NoHyperbolicPair
        );
    }

    #[test]
    fn adapted_basis_search_finds_hyperbolic_pairs() {
        // U + diag(2,2) via a basis vector, and a lattice where the isotropic
        // vector needs a two-term combination.
        let alg = CliffordAlgebra::new(&rank4_lattice()).unwrap();
        assert!(AdaptedBasis::search(&alg).is_ok());
        let skew = QuadLattice::from_gram(vec![vec![2, 3], vec![3, 2]]).unwrap();
        let alg2 = CliffordAlgebra::new(&skew).unwrap();
        // q(e1 + t e2) = 1 + 3t + t^2 has no rational root; but
        // q(e1 - e2) = 1 - 3 + 1 = -1, q(2e1 - e2)... search may still fail;
        // use a form with an obvious rational isotropic vector instead.
        let iso = QuadLattice::from_gram(vec![vec![2, 0], vec![0, -2]]).unwrap();
        let alg3 = CliffordAlgebra::new(&iso).unwrap();
        assert!(AdaptedBasis::search(&alg3).is_ok());
        let _ = alg2;
    }

    #[test]
    fn compatibility_check_passes_rank_four() {
        let alg = CliffordAlgebra::new(&rank4_lattice()).unwrap();
        let report =
            filtration_compatibility_check(&alg, &e_vec(4), ExecMode::Sequential).unwrap();
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn compatibility_check_rejects_non_isotropic() {
        let alg = CliffordAlgebra::new(&rank4_lattice()).unwrap();
        let mut v = vec![BigRational::zero(); 4];
        v[2] = BigRational::one();
        assert_eq!(
            filtration_compatibility_check(&alg, &v, ExecMode::Sequential).unwrap_err(),
            CliffordError::NotIsotropic
        );
    }
}
