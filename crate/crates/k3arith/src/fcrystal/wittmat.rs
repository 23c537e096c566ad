//! Matrix helpers over truncated Witt rings: products, entrywise Frobenius,
//! division-free characteristic polynomials, and local Smith forms.

use crate::padic::witt::{WittElem, WittRing};
use crate::padic::Valuation;

/// Row-major matrix of Witt elements at uniform precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittMat {
    ring: WittRing,
    rows: usize,
    cols: usize,
    data: Vec<WittElem>,
}

impl WittMat {
    pub fn zeros(ring: &WittRing, rows: usize, cols: usize) -> Self {
        WittMat {
            ring: ring.clone(),
            rows,
            cols,
            data: vec![ring.zero(); rows * cols],
        }
    }

    pub fn identity(ring: &WittRing, n: usize) -> Self {
        let mut m = WittMat::zeros(ring, n, n);
        for i in 0..n {
            m[(i, i)] = ring.one();
        }
        m
    }

    pub fn from_entries(ring: &WittRing, rows: usize, cols: usize, data: Vec<WittElem>) -> Self {
        assert_eq!(data.len(), rows * cols);
        WittMat {
            ring: ring.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn ring(&self) -> &WittRing {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mul(&self, rhs: &WittMat) -> WittMat {
        assert_eq!(self.cols, rhs.rows);
        let mut out = WittMat::zeros(&self.ring, self.rows, rhs.cols);
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
                    let prod = a.mul(b);
                    out[(i, j)] = out[(i, j)].add(&prod);
                }
            }
        }
        out
    }

    /// Entrywise Frobenius.
    pub fn frobenius(&self) -> WittMat {
        WittMat {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|e| e.frobenius()).collect(),
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[WittElem]) -> Vec<WittElem> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = self.ring.zero();
                for (k, x) in v.iter().enumerate() {
                    if x.is_zero() || self[(i, k)].is_zero() {
                        continue;
                    }
                    acc = acc.add(&self[(i, k)].mul(x));
                }
                acc
            })
            .collect()
    }

    /// Coefficients of det(tI - A), constant term first, leading 1 last.
    /// Division-free (Samuelson-Berkowitz), so valid over the truncated ring.
    pub fn charpoly(&self) -> Vec<WittElem> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let ring = &self.ring;
        if n == 0 {
            return vec![ring.one()];
        }
        // c holds the char poly of the leading i x i block, highest degree
        // coefficient first.
        let mut c = vec![ring.one(), self[(0, 0)].neg()];
        for i in 2..=n {
            // Toeplitz column: t_0 = 1, t_1 = -A[i-1][i-1],
            // t_k = -(row . M^{k-2} . col) for k = 2..i.
            let d = self[(i - 1, i - 1)].clone();
            let mut t = vec![ring.one(), d.neg()];
            let mut w: Vec<WittElem> = (0..i - 1).map(|r| self[(r, i - 1)].clone()).collect();
            for _k in 2..=i {
                // row . w
                let mut dot = ring.zero();
                for (r, wr) in w.iter().enumerate() {
                    if wr.is_zero() || self[(i - 1, r)].is_zero() {
                        continue;
                    }
                    dot = dot.add(&self[(i - 1, r)].mul(wr));
                }
                t.push(dot.neg());
                // w <- M w (leading (i-1) block)
                let mut next = vec![ring.zero(); i - 1];
                for (r, slot) in next.iter_mut().enumerate() {
                    for (s, ws) in w.iter().enumerate() {
                        if ws.is_zero() || self[(r, s)].is_zero() {
                            continue;
                        }
                        *slot = slot.add(&self[(r, s)].mul(ws));
                    }
                }
                w = next;
            }
            // c_new[j] = sum_k t[j - k] c[k] (lower-triangular Toeplitz times c)
            let mut next = vec![ring.zero(); i + 1];
            for (j, slot) in next.iter_mut().enumerate() {
                for (k, ck) in c.iter().enumerate() {
                    if k > j || j - k >= t.len() {
                        continue;
                    }
                    if ck.is_zero() || t[j - k].is_zero() {
                        continue;
                    }
                    *slot = slot.add(&t[j - k].mul(ck));
                }
            }
            c = next;
        }
        c.reverse(); // constant term first
        c
    }

    /// Valuations of the Smith invariant factors over the local ring.
    /// Returns Err(step) if a trailing block is indistinguishable from zero
    /// at the working precision before all factors are found.
    pub fn smith_valuations(&self) -> Result<Vec<u32>, usize> {
        let mut a = self.clone();
        let ring = &self.ring;
        let n = self.rows.min(self.cols);
        let mut vals = Vec::with_capacity(n);
        for t in 0..n {
            // minimal-valuation pivot in the trailing block
            let mut best: Option<(usize, usize, u32)> = None;
            for i in t..a.rows {
                for j in t..a.cols {
                    if let Valuation::Exact(v) = a[(i, j)].val() {
                        if best.map_or(true, |(_, _, bv)| v < bv) {
                            best = Some((i, j, v));
                        }
                    }
                }
            }
            let (pi, pj, v) = match best {
                None => return Err(t),
                Some(b) => b,
            };
            a.swap_rows(t, pi);
            a.swap_cols(t, pj);
            vals.push(v);
            // pivot = p^v u with u a unit; clear row and column.
            let pivot = a[(t, t)].clone();
            let unit = pivot.div_p_pow_exact(v).expect("valuation computed");
            // unit lives at reduced precision; lift back for multiplication
            let unit_inv_small = unit.inv().expect("unit part invertible");
            // re-embed at full precision (any lift works: factors multiply
            // entries divisible by p^v, so products are well-defined mod p^m)
            let unit_inv = lift_to_precision(ring, &unit_inv_small);
            for i in t + 1..a.rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let quot = a[(i, t)]
                    .div_p_pow_exact(v)
                    .expect("pivot has minimal valuation");
                let factor = lift_to_precision(ring, &quot).mul(&unit_inv);
                for j in t..a.cols {
                    let sub = factor.mul(&a[(t, j)]);
                    a[(i, j)] = a[(i, j)].sub(&sub);
                }
            }
            for j in t + 1..a.cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let quot = a[(t, j)]
                    .div_p_pow_exact(v)
                    .expect("pivot has minimal valuation");
                let factor = lift_to_precision(ring, &quot).mul(&unit_inv);
                for i in t..a.rows {
                    let sub = factor.mul(&a[(i, t)]);
                    a[(i, j)] = a[(i, j)].sub(&sub);
                }
            }
        }
        vals.sort_unstable();
        Ok(vals)
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
}

/// Arbitrary lift of an element from a lower precision back to the ring's
/// precision (canonical representative).
fn lift_to_precision(ring: &WittRing, x: &WittElem) -> WittElem {
    ring.from_coeffs(x.coeffs().to_vec())
}

impl std::ops::Index<(usize, usize)> for WittMat {
    type Output = WittElem;
    fn index(&self, (i, j): (usize, usize)) -> &WittElem {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for WittMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut WittElem {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(ring: &WittRing, entries: &[i64]) -> WittMat {
        let n = entries.len();
        let mut m = WittMat::zeros(ring, n, n);
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = ring.from_i64(e);
        }
        m
    }

    #[test]
    fn charpoly_of_diagonal() {
        let ring = WittRing::new(5, 1, 8);
        let m = diag(&ring, &[1, 5, 25]);
        let cp = m.charpoly();
        // (t-1)(t-5)(t-25) = t^3 - 31 t^2 + 155 t - 125
        assert_eq!(cp.len(), 4);
        assert_eq!(cp[0], ring.from_i64(-125));
        assert_eq!(cp[1], ring.from_i64(155));
        assert_eq!(cp[2], ring.from_i64(-31));
        assert_eq!(cp[3], ring.one());
    }

    #[test]
    fn charpoly_of_companion() {
        let ring = WittRing::new(3, 1, 8);
        // [[0, 3], [1, 0]] has char poly t^2 - 3.
        let mut m = WittMat::zeros(&ring, 2, 2);
        m[(0, 1)] = ring.from_i64(3);
        m[(1, 0)] = ring.from_i64(1);
        let cp = m.charpoly();
        assert_eq!(cp[0], ring.from_i64(-3));
        assert_eq!(cp[1], ring.zero());
        assert_eq!(cp[2], ring.one());
    }

    #[test]
    fn charpoly_matches_direct_expansion_on_random_3x3() {
        use rand::{Rng, SeedableRng};
        let ring = WittRing::new(7, 1, 6);
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(22);
        for _ in 0..20 {
            let mut m = WittMat::zeros(&ring, 3, 3);
            let mut raw = [[0i64; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    let v = rng.random_range(-20..=20);
                    raw[i][j] = v;
                    m[(i, j)] = ring.from_i64(v);
                }
            }
            let cp = m.charpoly();
            // direct cofactor expansion of det(tI - A) over the integers
            let a = raw;
            let tr = a[0][0] + a[1][1] + a[2][2];
            let minors = a[0][0] * a[1][1] - a[0][1] * a[1][0]
                + a[0][0] * a[2][2]
                - a[0][2] * a[2][0]
                + a[1][1] * a[2][2]
                - a[1][2] * a[2][1];
            let det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
                - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
            assert_eq!(cp[0], ring.from_i64(-det));
            assert_eq!(cp[1], ring.from_i64(minors));
            assert_eq!(cp[2], ring.from_i64(-tr));
            assert_eq!(cp[3], ring.one());
        }
    }

    #[test]
    fn smith_valuations_of_diagonal() {
        let ring = WittRing::new(5, 1, 8);
        let m = diag(&ring, &[25, 1, 5]);
        assert_eq!(m.smith_valuations().unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn smith_valuations_of_cyclic_block() {
        let ring = WittRing::new(3, 1, 8);
        // F(e_1) = 3 e_2, F(e_2) = 3 e_3, F(e_3) = e_1: columns scaled.
        let h = 3;
        let mut m = WittMat::zeros(&ring, h, h);
        for i in 0..h - 1 {
            m[(i + 1, i)] = ring.from_i64(3);
        }
        m[(0, h - 1)] = ring.one();
        assert_eq!(m.smith_valuations().unwrap(), vec![0, 1, 1]);
    }

    #[test]
    fn smith_detects_zero_block() {
        let ring = WittRing::new(2, 1, 4);
        let m = diag(&ring, &[16, 3]); // 16 = 0 mod 2^4
        assert_eq!(m.smith_valuations().unwrap_err(), 1);
    }

    #[test]
    fn smith_valuations_on_witt_entries() {
        let ring = WittRing::new(3, 2, 6);
        let t = ring.gen();
        let mut m = WittMat::zeros(&ring, 2, 2);
        m[(0, 0)] = t.clone().mul_p_pow(1);
        m[(0, 1)] = ring.one();
        m[(1, 0)] = t.mul_p_pow(2);
        m[(1, 1)] = ring.from_i64(9);
        // min valuation 0 (the unit), det = 3 t * 9 - t * 9 ... compute:
        // invariant factors: one unit, and det / unit.
        let vals = m.smith_valuations().unwrap();
        assert_eq!(vals.len(), 2);
        assert_eq!(vals[0], 0);
    }
}
