//! Truncated power series in one and two variables, sparse representation.
//!
//! A series of truncation order N stores only monomials of (total) degree < N.
//! Binary operations truncate to the minimum of the operand orders, mirroring
//! the precision rule for p-adic values.

use std::collections::BTreeMap;

use super::ring::Coeffs;
use super::PadicError;

/// Univariate truncated power series over a coefficient ring.
#[derive(Debug, Clone)]
pub struct TruncSeries<R: Coeffs> {
    ring: R,
    trunc: u32,
    coeffs: BTreeMap<u32, R::Elem>,
}

impl<R: Coeffs> PartialEq for TruncSeries<R> {
    fn eq(&self, other: &Self) -> bool {
        self.trunc == other.trunc && self.coeffs == other.coeffs
    }
}

impl<R: Coeffs> TruncSeries<R> {
    pub fn zero(ring: R, trunc: u32) -> Self {
        TruncSeries {
            ring,
            trunc,
            coeffs: BTreeMap::new(),
        }
    }

    /// The identity series x.
    pub fn x(ring: R, trunc: u32) -> Self {
        let mut s = TruncSeries::zero(ring, trunc);
        let one = s.ring.one();
        s.set(1, one);
        s
    }

    pub fn from_coeffs(ring: R, trunc: u32, coeffs: Vec<(u32, R::Elem)>) -> Self {
        let mut s = TruncSeries::zero(ring, trunc);
        for (k, c) in coeffs {
            s.set(k, c);
        }
        s
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn coeff(&self, k: u32) -> R::Elem {
        self.coeffs
            .get(&k)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn set(&mut self, k: u32, c: R::Elem) {
        if k >= self.trunc {
            return;
        }
        if self.ring.is_zero(&c) {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, c);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&u32, &R::Elem)> {
        self.coeffs.iter()
    }

    pub fn support(&self) -> Vec<u32> {
        self.coeffs.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowers the truncation order.
    pub fn truncate(&self, trunc: u32) -> Self {
        self.with_trunc(trunc.min(self.trunc))
    }

    /// Reinterprets the truncation bound. Raising it treats the missing tail
    /// as zero; only iteration internals that re-derive the tail may do that.
    fn with_trunc(&self, trunc: u32) -> Self {
        let mut out = TruncSeries::zero(self.ring.clone(), trunc);
        for (&k, c) in &self.coeffs {
            out.set(k, c.clone());
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let trunc = self.trunc.min(rhs.trunc);
        let mut out = self.truncate(trunc);
        for (&k, c) in &rhs.coeffs {
            if k < trunc {
                let sum = out.ring.add(&out.coeff(k), c);
                out.set(k, sum);
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let trunc = self.trunc.min(rhs.trunc);
        let mut out = self.truncate(trunc);
        for (&k, c) in &rhs.coeffs {
            if k < trunc {
                let diff = out.ring.sub(&out.coeff(k), c);
                out.set(k, diff);
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = TruncSeries::zero(self.ring.clone(), self.trunc);
        for (&k, c) in &self.coeffs {
            out.set(k, self.ring.neg(c));
        }
        out
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let mut out = TruncSeries::zero(self.ring.clone(), self.trunc);
        for (&k, v) in &self.coeffs {
            out.set(k, self.ring.mul(c, v));
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let trunc = self.trunc.min(rhs.trunc);
        let mut acc: BTreeMap<u32, R::Elem> = BTreeMap::new();
        for (&i, a) in &self.coeffs {
            if i >= trunc {
                continue;
            }
            for (&j, b) in &rhs.coeffs {
                if i + j >= trunc {
                    break;
                }
                let prod = self.ring.mul(a, b);
                match acc.get_mut(&(i + j)) {
                    Some(slot) => *slot = self.ring.add(slot, &prod),
                    None => {
                        acc.insert(i + j, prod);
                    }
                }
            }
        }
        let mut out = TruncSeries::zero(self.ring.clone(), trunc);
        for (k, c) in acc {
            out.set(k, c);
        }
        out
    }

    /// Maps the coefficients into another ring.
    pub fn map_ring<S: Coeffs>(
        &self,
        ring: S,
        f: impl Fn(&R::Elem) -> S::Elem,
    ) -> TruncSeries<S> {
        let mut out = TruncSeries::zero(ring, self.trunc);
        for (&k, c) in &self.coeffs {
            out.set(k, f(c));
        }
        out
    }

    fn pow_cached(&self, e: u32, cache: &mut BTreeMap<u32, Self>) -> Self {
        if e == 0 {
            let mut one = TruncSeries::zero(self.ring.clone(), self.trunc);
            one.set(0, self.ring.one());
            return one;
        }
        if e == 1 {
            return self.clone();
        }
        if let Some(hit) = cache.get(&e) {
            return hit.clone();
        }
        let half = self.pow_cached(e / 2, cache);
        let mut out = half.mul(&half);
        if e % 2 == 1 {
            out = out.mul(self);
        }
        cache.insert(e, out.clone());
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut cache = BTreeMap::new();
        self.pow_cached(e, &mut cache)
    }

    /// Composition f(g) for g with g(0) = 0.
    pub fn compose(&self, g: &Self) -> Self {
        assert!(
            g.coeffs.get(&0).is_none(),
            "inner series must have zero constant term"
        );
        let trunc = self.trunc.min(g.trunc);
        let mut out = TruncSeries::zero(self.ring.clone(), trunc);
        let g = g.truncate(trunc);
        let mut cache: BTreeMap<u32, Self> = BTreeMap::new();
        for (&k, c) in &self.coeffs {
            if k >= trunc && k != 0 {
                continue;
            }
            if k == 0 {
                let sum = self.ring.add(&out.coeff(0), c);
                out.set(0, sum);
                continue;
            }
            let gk = g.pow_cached(k, &mut cache);
            for (&d, gc) in &gk.coeffs {
                if d >= trunc {
                    break;
                }
                let term = self.ring.mul(c, gc);
                let sum = self.ring.add(&out.coeff(d), &term);
                out.set(d, sum);
            }
        }
        out
    }

    /// Reciprocal of a series with unit constant term, by Newton iteration.
    pub fn recip(&self) -> Result<Self, PadicError> {
        let c0 = self.coeff(0);
        let c0_inv = self.ring.inv(&c0).ok_or(PadicError::NotAUnit)?;
        let mut h = TruncSeries::zero(self.ring.clone(), self.trunc);
        h.set(0, c0_inv);
        let mut prec = 1u32;
        let two = {
            let mut t = TruncSeries::zero(self.ring.clone(), self.trunc);
            t.set(0, self.ring.from_i64(2));
            t
        };
        while prec < self.trunc {
            prec = (prec * 2).min(self.trunc);
            let ft = self.truncate(prec);
            let ht = h.with_trunc(prec);
            let fh = ft.mul(&ht);
            let corr = two.truncate(prec).sub(&fh);
            h = ht.mul(&corr);
        }
        let mut out = TruncSeries::zero(self.ring.clone(), self.trunc);
        for (&k, c) in &h.coeffs {
            out.set(k, c.clone());
        }
        Ok(out)
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        let trunc = self.trunc.saturating_sub(1).max(1);
        let mut out = TruncSeries::zero(self.ring.clone(), trunc);
        for (&k, c) in &self.coeffs {
            if k == 0 {
                continue;
            }
            let factor = self.ring.from_i64(k as i64);
            out.set(k - 1, self.ring.mul(&factor, c));
        }
        out
    }

    /// Compositional inverse g with f(g(x)) = x mod x^trunc.
    ///
    /// Requires f(0) = 0 and f'(0) a unit; Newton iteration
    /// g <- g - (f(g) - x) / f'(g).
    pub fn reverse(&self) -> Result<Self, PadicError> {
        if self.coeffs.contains_key(&0) {
            return Err(PadicError::NotReversible);
        }
        let f1 = self.coeff(1);
        let f1_inv = self.ring.inv(&f1).ok_or(PadicError::NotReversible)?;
        let n = self.trunc;
        let mut g = TruncSeries::zero(self.ring.clone(), n);
        g.set(1, f1_inv);
        if n <= 2 {
            return Ok(g);
        }
        let x = TruncSeries::x(self.ring.clone(), n);
        // Widen the derivative's bound: its fabricated top coefficient only
        // touches the correction beyond the degrees kept by each step.
        let df = self.derivative().with_trunc(n);
        let mut prec = 2u32;
        while prec < n {
            prec = (prec * 2).min(n);
            let gt = g.with_trunc(prec);
            let err = self.truncate(prec).compose(&gt).sub(&x.truncate(prec));
            if err.is_zero() {
                g = gt;
                continue;
            }
            let slope = df.truncate(prec).compose(&gt);
            let corr = err.mul(&slope.recip()?);
            g = gt.sub(&corr);
        }
        Ok(g.with_trunc(n))
    }
}

/// Bivariate truncated series: monomials x^i y^j with i + j < trunc.
#[derive(Debug, Clone)]
pub struct TruncSeries2<R: Coeffs> {
    ring: R,
    trunc: u32,
    coeffs: BTreeMap<(u32, u32), R::Elem>,
}

impl<R: Coeffs> PartialEq for TruncSeries2<R> {
    fn eq(&self, other: &Self) -> bool {
        self.trunc == other.trunc && self.coeffs == other.coeffs
    }
}

impl<R: Coeffs> TruncSeries2<R> {
    pub fn zero(ring: R, trunc: u32) -> Self {
        TruncSeries2 {
            ring,
            trunc,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn coeff(&self, i: u32, j: u32) -> R::Elem {
        self.coeffs
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn set(&mut self, i: u32, j: u32, c: R::Elem) {
        if i + j >= self.trunc {
            return;
        }
        if self.ring.is_zero(&c) {
            self.coeffs.remove(&(i, j));
        } else {
            self.coeffs.insert((i, j), c);
        }
    }

    pub fn add_assign_term(&mut self, i: u32, j: u32, c: &R::Elem) {
        if i + j >= self.trunc {
            return;
        }
        let sum = self.ring.add(&self.coeff(i, j), c);
        self.set(i, j, sum);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(u32, u32), &R::Elem)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn truncate(&self, trunc: u32) -> Self {
        let mut out = TruncSeries2::zero(self.ring.clone(), trunc.min(self.trunc));
        for (&(i, j), c) in &self.coeffs {
            out.set(i, j, c.clone());
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let trunc = self.trunc.min(rhs.trunc);
        let mut out = self.truncate(trunc);
        for (&(i, j), c) in &rhs.coeffs {
            out.add_assign_term(i, j, c);
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let trunc = self.trunc.min(rhs.trunc);
        let mut out = self.truncate(trunc);
        for (&(i, j), c) in &rhs.coeffs {
            out.add_assign_term(i, j, &self.ring.neg(c));
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let trunc = self.trunc.min(rhs.trunc);
        let mut out = TruncSeries2::zero(self.ring.clone(), trunc);
        for (&(i1, j1), a) in &self.coeffs {
            if i1 + j1 >= trunc {
                continue;
            }
            for (&(i2, j2), b) in &rhs.coeffs {
                if i1 + j1 + i2 + j2 >= trunc {
                    continue;
                }
                let prod = self.ring.mul(a, b);
                out.add_assign_term(i1 + i2, j1 + j2, &prod);
            }
        }
        out
    }

    /// Embeds a univariate series as a series in x (var = 0) or y (var = 1).
    pub fn from_univariate(s: &TruncSeries<R>, var: usize) -> Self {
        let mut out = TruncSeries2::zero(s.ring().clone(), s.trunc());
        for (&k, c) in s.iter() {
            match var {
                0 => out.set(k, 0, c.clone()),
                1 => out.set(0, k, c.clone()),
                _ => panic!("variable index out of range"),
            }
        }
        out
    }

    fn pow_cached(&self, e: u32, cache: &mut BTreeMap<u32, Self>) -> Self {
        if e == 0 {
            let mut one = TruncSeries2::zero(self.ring.clone(), self.trunc);
            one.set(0, 0, self.ring.one());
            return one;
        }
        if e == 1 {
            return self.clone();
        }
        if let Some(hit) = cache.get(&e) {
            return hit.clone();
        }
        let half = self.pow_cached(e / 2, cache);
        let mut out = half.mul(&half);
        if e % 2 == 1 {
            out = out.mul(self);
        }
        cache.insert(e, out.clone());
        out
    }

    /// f(S) for univariate f and bivariate S with S(0,0) = 0.
    pub fn compose_univariate(f: &TruncSeries<R>, s: &Self) -> Self {
        assert!(
            s.coeffs.get(&(0, 0)).is_none(),
            "inner series must vanish at the origin"
        );
        let trunc = f.trunc().min(s.trunc);
        let s = s.truncate(trunc);
        let mut out = TruncSeries2::zero(s.ring.clone(), trunc);
        let mut cache: BTreeMap<u32, Self> = BTreeMap::new();
        for (&k, c) in f.iter() {
            if k == 0 {
                out.add_assign_term(0, 0, c);
                continue;
            }
            if k >= trunc {
                continue;
            }
            let sk = s.pow_cached(k, &mut cache);
            for (&(i, j), sc) in &sk.coeffs {
                let term = out.ring.mul(c, sc);
                out.add_assign_term(i, j, &term);
            }
        }
        out
    }

    /// Substitutes univariate series into both slots: F(g(t), h(t)).
    pub fn subst_both(&self, g: &TruncSeries<R>, h: &TruncSeries<R>) -> TruncSeries<R> {
        assert!(g.coeff(0) == g.ring().zero() && h.coeff(0) == h.ring().zero());
        let trunc = self.trunc.min(g.trunc()).min(h.trunc());
        let mut out = TruncSeries::zero(self.ring.clone(), trunc);
        let mut gcache: BTreeMap<u32, TruncSeries<R>> = BTreeMap::new();
        let mut hcache: BTreeMap<u32, TruncSeries<R>> = BTreeMap::new();
        let g = g.truncate(trunc);
        let h = h.truncate(trunc);
        for (&(i, j), c) in &self.coeffs {
            let gi = g.pow_cached(i, &mut gcache);
            let hj = h.pow_cached(j, &mut hcache);
            let prod = gi.mul(&hj).scale(c);
            out = out.add(&prod);
        }
        out
    }

    pub fn map_ring<S: Coeffs>(
        &self,
        ring: S,
        f: impl Fn(&R::Elem) -> S::Elem,
    ) -> TruncSeries2<S> {
        let mut out = TruncSeries2::zero(ring, self.trunc);
        for (&(i, j), c) in &self.coeffs {
            out.set(i, j, f(c));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::super::ring::Rationals;
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn qs(coeffs: &[(u32, i64, i64)], trunc: u32) -> TruncSeries<Rationals> {
        TruncSeries::from_coeffs(
            Rationals,
            trunc,
            coeffs.iter().map(|&(k, n, d)| (k, q(n, d))).collect(),
        )
    }

    #[test]
    fn reverse_identity() {
        let f = TruncSeries::x(Rationals, 8);
        assert_eq!(f.reverse().unwrap(), f);
    }

    #[test]
    fn reverse_quadratic_frozen() {
        // f = x + x^2, truncation 4: inverse is x - x^2 + 2x^3.
        // Oracle: substitute and check f(g) = x.
        let f = qs(&[(1, 1, 1), (2, 1, 1)], 4);
        let g = f.reverse().unwrap();
        assert_eq!(g, qs(&[(1, 1, 1), (2, -1, 1), (3, 2, 1)], 4));
        let comp = f.compose(&g);
        assert_eq!(comp, TruncSeries::x(Rationals, 4));
        let comp2 = g.compose(&f);
        assert_eq!(comp2, TruncSeries::x(Rationals, 4));
    }

    #[test]
    fn reverse_log_gives_exp() {
        // log(1+x) = sum (-1)^{n+1} x^n / n reverses to exp(x) - 1.
        let n = 9u32;
        let mut log = TruncSeries::zero(Rationals, n);
        for k in 1..n {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            log.set(k, q(sign, k as i64));
        }
        let exp = log.reverse().unwrap();
        let mut fact = 1i64;
        for k in 1..n {
            fact *= k as i64;
            assert_eq!(exp.coeff(k), q(1, fact), "coefficient of x^{k}");
        }
        assert_eq!(log.compose(&exp), TruncSeries::x(Rationals, n));
    }

    #[test]
    fn reverse_is_two_sided_inverse_on_random_series() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(17);
        for _ in 0..25 {
            let n = rng.random_range(3..10);
            let mut f = TruncSeries::zero(Rationals, n);
            f.set(1, q(*[1, -1, 2, 3].get(rng.random_range(0..4)).unwrap(), 1));
            for k in 2..n {
                f.set(k, q(rng.random_range(-4..5), rng.random_range(1..4)));
            }
            let g = f.reverse().unwrap();
            let x = TruncSeries::x(Rationals, n);
            assert_eq!(f.compose(&g), x);
            assert_eq!(g.compose(&f), x);
        }
    }

    #[test]
    fn reverse_rejects_non_unit_linear_coefficient() {
        let f = qs(&[(2, 1, 1)], 5);
        assert_eq!(f.reverse().unwrap_err(), PadicError::NotReversible);
        use super::super::ring::PadicRing;
        let ring = PadicRing::new(2, 6);
        let mut g = TruncSeries::zero(ring.clone(), 5);
        g.set(1, ring.from_i64(2)); // 2 is not a unit in Z/2^6
        assert_eq!(g.reverse().unwrap_err(), PadicError::NotReversible);
    }

    #[test]
    fn mul_truncates_to_min_order() {
        let f = qs(&[(1, 1, 1)], 7);
        let g = qs(&[(1, 1, 1)], 4);
        assert_eq!(f.mul(&g).trunc(), 4);
        assert_eq!(f.compose(&g).trunc(), 4);
    }

    #[test]
    fn bivariate_mul_and_subst() {
        // F = x + y + xy
        let mut f = TruncSeries2::zero(Rationals, 6);
        f.set(1, 0, q(1, 1));
        f.set(0, 1, q(1, 1));
        f.set(1, 1, q(1, 1));
        // F(t, t) = 2t + t^2
        let t = TruncSeries::x(Rationals, 6);
        let d = f.subst_both(&t, &t);
        assert_eq!(d, qs(&[(1, 2, 1), (2, 1, 1)], 6));
        let sq = f.mul(&f);
        assert_eq!(sq.coeff(1, 1), q(2, 1));
        assert_eq!(sq.coeff(2, 0), q(1, 1));
        assert_eq!(sq.coeff(2, 2), q(1, 1));
    }

    #[test]
    fn compose_univariate_into_bivariate() {
        // f = t + t^2 applied to S = x + y:
        // f(S) = x + y + x^2 + 2xy + y^2.
        let f = qs(&[(1, 1, 1), (2, 1, 1)], 5);
        let mut s = TruncSeries2::zero(Rationals, 5);
        s.set(1, 0, q(1, 1));
        s.set(0, 1, q(1, 1));
        let out = TruncSeries2::compose_univariate(&f, &s);
        assert_eq!(out.coeff(1, 0), q(1, 1));
        assert_eq!(out.coeff(0, 1), q(1, 1));
        assert_eq!(out.coeff(2, 0), q(1, 1));
        assert_eq!(out.coeff(1, 1), q(2, 1));
        assert_eq!(out.coeff(0, 2), q(1, 1));
    }
}
