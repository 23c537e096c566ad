//! Dense integer matrices with exact algorithms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Row-major dense matrix over BigInt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        IntMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        IntMat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &IntMat) -> IntMat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = IntMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a * b;
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Exact determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                // find a pivot row below
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    let (q, r) = num.div_rem(&prev);
                    debug_assert!(r.is_zero(), "Bareiss division not exact");
                    a[(i, j)] = q;
                }
                a[(i, k)] = BigInt::zero();
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// row_i -= q * row_k
    fn row_sub(&mut self, i: usize, k: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let t = &self[(k, c)] * q;
            self[(i, c)] -= t;
        }
    }

    /// col_j -= q * col_k
    fn col_sub(&mut self, j: usize, k: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let t = &self[(r, k)] * q;
            self[(r, j)] -= t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let v = -self[(i, c)].clone();
            self[(i, c)] = v;
        }
    }

    /// Smith normal form with transforms: returns (U, D, V) with U*A*V = D,
    /// U and V unimodular, D diagonal with d_i | d_{i+1} and d_i >= 0.
    pub fn smith(&self) -> Smith {
        let mut d = self.clone();
        let mut u = IntMat::identity(self.rows);
        let mut v = IntMat::identity(self.cols);
        let n = self.rows.min(self.cols);
        let mut t = 0usize;
        while t < n {
            // Find pivot: nonzero entry of minimal absolute value in the
            // trailing submatrix.
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..d.rows {
                for j in t..d.cols {
                    if d[(i, j)].is_zero() {
                        continue;
                    }
                    match pivot {
                        None => pivot = Some((i, j)),
                        Some((pi, pj)) => {
                            if d[(i, j)].abs() < d[(pi, pj)].abs() {
                                pivot = Some((i, j));
                            }
                        }
                    }
                }
            }
            let (pi, pj) = match pivot {
                None => break, // trailing block is zero
                Some(p) => p,
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            // Reduce row and column against the pivot until they clear.
            let mut clean = false;
            while !clean {
                clean = true;
                for i in t + 1..d.rows {
                    if d[(i, t)].is_zero() {
                        continue;
                    }
                    let (q, r) = d[(i, t)].div_rem(&d[(t, t)]);
                    d.row_sub(i, t, &q);
                    u.row_sub(i, t, &q);
                    if !r.is_zero() {
                        // remainder smaller than pivot: swap up and restart
                        d.swap_rows(t, i);
                        u.swap_rows(t, i);
                        clean = false;
                    }
                }
                for j in t + 1..d.cols {
                    if d[(t, j)].is_zero() {
                        continue;
                    }
                    let (q, r) = d[(t, j)].div_rem(&d[(t, t)]);
                    d.col_sub(j, t, &q);
                    v.col_sub(j, t, &q);
                    if !r.is_zero() {
                        d.swap_cols(t, j);
                        v.swap_cols(t, j);
                        clean = false;
                    }
                }
            }

            // Divisibility: pivot must divide every trailing entry; if not,
            // fold the offending row in and redo this step.
            let mut redo = false;
            'scan: for i in t + 1..d.rows {
                for j in t + 1..d.cols {
                    if !(&d[(i, j)] % &d[(t, t)]).is_zero() {
                        let one = BigInt::one();
                        let minus = -one;
                        d.row_sub(t, i, &minus); // row_t += row_i
                        u.row_sub(t, i, &minus);
                        redo = true;
                        break 'scan;
                    }
                }
            }
            if redo {
                continue;
            }
            if d[(t, t)].is_negative() {
                d.negate_row(t);
                u.negate_row(t);
            }
            t += 1;
        }
        Smith { u, d, v }
    }

    /// Invariant factors (nonzero diagonal of the Smith form).
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let s = self.smith();
        let n = self.rows.min(self.cols);
        (0..n)
            .map(|i| s.d[(i, i)].clone())
            .filter(|x| !x.is_zero())
            .collect()
    }

    /// Rank via the Smith form.
    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    /// Basis of the integer kernel {x : A x = 0} as matrix columns.
    /// The basis is primitive (part of a basis of Z^cols).
    pub fn kernel_basis(&self) -> IntMat {
        let s = self.smith();
        let r = (0..self.rows.min(self.cols))
            .take_while(|&i| !s.d[(i, i)].is_zero())
            .count();
        // A * V = U^{-1} * D, so columns of V beyond the rank map to zero.
        let mut out = IntMat::zeros(self.cols, self.cols - r);
        for (jj, j) in (r..self.cols).enumerate() {
            for i in 0..self.cols {
                out[(i, jj)] = s.v[(i, j)].clone();
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Smith decomposition U * A * V = D.
pub struct Smith {
    pub u: IntMat,
    pub d: IntMat,
    pub v: IntMat,
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    /// Cofactor-expansion determinant, used as an independent oracle.
    fn det_cofactor(m: &IntMat) -> BigInt {
        let n = m.rows();
        if n == 0 {
            return BigInt::one();
        }
        if n == 1 {
            return m[(0, 0)].clone();
        }
        let mut acc = BigInt::zero();
        for j in 0..n {
            if m[(0, j)].is_zero() {
                continue;
            }
            let mut sub = IntMat::zeros(n - 1, n - 1);
            for i in 1..n {
                let mut cc = 0;
                for c in 0..n {
                    if c == j {
                        continue;
                    }
                    sub[(i - 1, cc)] = m[(i, c)].clone();
                    cc += 1;
                }
            }
            let term = &m[(0, j)] * det_cofactor(&sub);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    fn random_mat(rng: &mut rand_chacha::ChaCha12Rng, r: usize, c: usize, bound: i64) -> IntMat {
        IntMat::from_i64_rows(
            &(0..r)
                .map(|_| (0..c).map(|_| rng.random_range(-bound..=bound)).collect())
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn bareiss_matches_cofactor_oracle() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(2);
        for n in 1..=6 {
            for _ in 0..20 {
                let m = random_mat(&mut rng, n, n, 9);
                assert_eq!(m.det(), det_cofactor(&m));
            }
        }
    }

    #[test]
    fn smith_reconstructs_and_transforms_are_unimodular() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(3);
        for _ in 0..40 {
            let r = rng.random_range(1..6);
            let c = rng.random_range(1..6);
            let m = random_mat(&mut rng, r, c, 12);
            let s = m.smith();
            assert_eq!(s.u.mul(&m).mul(&s.v), s.d);
            assert_eq!(s.u.det().abs(), BigInt::one());
            assert_eq!(s.v.det().abs(), BigInt::one());
            // divisibility chain
            let n = r.min(c);
            for i in 0..n.saturating_sub(1) {
                if !s.d[(i + 1, i + 1)].is_zero() {
                    assert!(
                        (&s.d[(i + 1, i + 1)] % &s.d[(i, i)]).is_zero()
                            || s.d[(i, i)].is_zero() == s.d[(i + 1, i + 1)].is_zero()
                    );
                }
                if s.d[(i, i)].is_zero() {
                    assert!(s.d[(i + 1, i + 1)].is_zero());
                }
            }
        }
    }

    #[test]
    fn invariant_factor_product_is_det_up_to_sign() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(5);
        for _ in 0..20 {
            let n = rng.random_range(1..6);
            let m = random_mat(&mut rng, n, n, 8);
            let d = m.det();
            if d.is_zero() {
                continue;
            }
            let prod: BigInt = m.invariant_factors().iter().product();
            assert_eq!(prod, d.abs());
        }
    }

    #[test]
    fn kernel_vectors_are_killed_and_primitive() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(8);
        for _ in 0..30 {
            let r = rng.random_range(1..5);
            let c = rng.random_range(1..6);
            let m = random_mat(&mut rng, r, c, 6);
            let k = m.kernel_basis();
            if k.cols() == 0 {
                continue;
            }
            assert!(m.mul(&k).is_zero());
            // primitivity: all invariant factors of the kernel basis are 1
            for f in k.invariant_factors() {
                assert_eq!(f, BigInt::one());
            }
            assert_eq!(k.rank(), k.cols());
        }
    }
}
