//! Membership test for the general spin group: invertible even elements g
//! with g i(M) g^{-1} = i(M), checked by conjugating each basis vector.

use num_rational::BigRational;
use num_traits::Zero;

use super::operator::lmul_elem_operator;
use super::{CliffordAlgebra, CliffordElement, CliffordError};
use crate::linalg::RatMat;

/// Outcome of the membership check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GspinVerdict {
    pub member: bool,
    pub reason: Option<String>,
}

impl GspinVerdict {
    fn no(reason: &str) -> Self {
        GspinVerdict {
            member: false,
            reason: Some(reason.to_string()),
        }
    }

    fn yes() -> Self {
        GspinVerdict {
            member: true,
            reason: None,
        }
    }
}

/// Conjugation action of an invertible element on the vector space, as the
/// matrix sending basis vectors to g v_k g^{-1} (when that stays in i(M)).
pub fn conjugation_matrix(
    g: &CliffordElement,
    g_inv: &CliffordElement,
) -> Result<Option<RatMat>, CliffordError> {
    let alg = g.algebra().clone();
    let n = alg.rank();
    let mut m = RatMat::zeros(n, n);
    for k in 0..n {
        let mut coords = vec![0i64; n];
        coords[k] = 1;
        let vk = alg.vector(&coords);
        let conj = g.mul(&vk)?.mul(g_inv)?;
        match conj.as_vector() {
            None => return Ok(None),
            Some(col) => m.set_column(k, &col),
        }
    }
    Ok(Some(m))
}

/// Inverse of g in the Clifford algebra via the dense left-multiplication
/// operator, or None if g is not invertible.
pub fn clifford_inverse(g: &CliffordElement) -> Result<Option<CliffordElement>, CliffordError> {
    let alg = g.algebra().clone();
    let op = lmul_elem_operator(g)?;
    // Solve g x = 1.
    let mut unit = vec![BigRational::zero(); alg.dim()];
    unit[0] = BigRational::from_integer(1.into());
    let sol = match op.matrix().solve(&unit) {
        None => return Ok(None),
        Some(s) => s,
    };
    let mut inv = alg.zero();
    for (idx, c) in sol.into_iter().enumerate() {
        if !c.is_zero() {
            inv.set_coeff(idx as u32, c);
        }
    }
    // Left inverse of a unit is the inverse; confirm both sides.
    if g.mul(&inv)? != alg.one() || inv.mul(g)? != alg.one() {
        return Ok(None);
    }
    Ok(Some(inv))
}

/// Tests g in GSpin: even, invertible, and conjugation preserves i(M).
pub fn gspin_membership(
    alg: &CliffordAlgebra,
    g: &CliffordElement,
) -> Result<GspinVerdict, CliffordError> {
    if g.algebra() != alg {
        return Err(CliffordError::MismatchedParents);
    }
    if g.is_zero() {
        return Ok(GspinVerdict::no("zero element is not invertible"));
    }
    if !g.is_even() {
        return Ok(GspinVerdict::no("element has an odd component"));
    }
    let g_inv = match clifford_inverse(g)? {
        None => return Ok(GspinVerdict::no("element is not invertible")),
        Some(inv) => inv,
    };
    match conjugation_matrix(g, &g_inv)? {
        None => Ok(GspinVerdict::no(
            "conjugation does not preserve the vector subspace",
        )),
        Some(m) => {
            // Conjugation by a unit is bijective, so landing inside i(M)
            // forces equality; confirm invertibility anyway.
            if m.inverse().is_none() {
                return Ok(GspinVerdict::no("conjugation action is singular"));
            }
            Ok(GspinVerdict::yes())
        }
    }
}
