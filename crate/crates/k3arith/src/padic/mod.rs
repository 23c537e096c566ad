//! Exact arithmetic substrate: truncated p-adic integers with explicit
//! precision tracking, truncated unramified Witt rings with Frobenius, and
//! truncated power series in one and two variables.
//!
//! Every value carries its own `(p, precision)` context. Mixed-precision
//! arithmetic truncates to the minimum of the operand precisions; nothing
//! ever silently gains precision.

pub mod ring;
pub mod series;
pub mod witt;

pub use ring::{Coeffs, PadicRing, Rationals};
pub use series::{TruncSeries, TruncSeries2};
pub use witt::{WittElem, WittRing};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::error::{Classify, ErrorClass};

/// Errors from the p-adic substrate.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PadicError {
    #[error("operands live over different primes ({0} vs {1})")]
    MixedPrimes(u64, u64),
    #[error("element is not a unit (valuation > 0)")]
    NotAUnit,
    #[error("series is not reversible: linear coefficient is not a unit")]
    NotReversible,
    #[error("series truncation orders are incompatible")]
    TruncationMismatch,
    #[error("{0} is not prime")]
    NotPrime(u64),
}

impl Classify for PadicError {
    fn class(&self) -> ErrorClass {
        ErrorClass::Precondition
    }
}

/// p-adic valuation of a value known only at finite precision.
///
/// `AtLeast(m)` records that the value is divisible by `p^m` and therefore
/// indistinguishable from zero at precision `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Exact(u32),
    AtLeast(u32),
}

impl Valuation {
    /// Certified lower bound on the valuation.
    pub fn lower_bound(self) -> u32 {
        match self {
            Valuation::Exact(v) | Valuation::AtLeast(v) => v,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Valuation::Exact(_))
    }
}

/// Trial-division primality check; inputs here are small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Truncated p-adic integer: a residue in `Z/p^m` together with `(p, m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicInt {
    p: u64,
    precision: u32,
    value: BigUint,
}

impl PadicInt {
    /// Reduces `value` into `[0, p^m)`.
    pub fn new(p: u64, precision: u32, value: BigUint) -> Self {
        assert!(precision > 0, "precision must be positive");
        assert!(is_prime(p), "{p} is not prime");
        let modulus = BigUint::from(p).pow(precision);
        PadicInt {
            p,
            precision,
            value: value % modulus,
        }
    }

    pub fn from_i64(p: u64, precision: u32, value: i64) -> Self {
        let modulus = BigUint::from(p).pow(precision);
        let reduced = if value < 0 {
            let neg = BigUint::from(value.unsigned_abs()) % &modulus;
            (&modulus - neg) % &modulus
        } else {
            BigUint::from(value as u64) % &modulus
        };
        PadicInt {
            p,
            precision,
            value: reduced,
        }
    }

    pub fn zero(p: u64, precision: u32) -> Self {
        PadicInt::new(p, precision, BigUint::zero())
    }

    pub fn one(p: u64, precision: u32) -> Self {
        PadicInt::new(p, precision, BigUint::one())
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Canonical representative in `[0, p^m)`.
    pub fn lift(&self) -> &BigUint {
        &self.value
    }

    pub fn modulus(&self) -> BigUint {
        BigUint::from(self.p).pow(self.precision)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// Truncates to a lower precision.
    pub fn reduce_to(&self, precision: u32) -> Self {
        assert!(precision <= self.precision && precision > 0);
        PadicInt::new(self.p, precision, self.value.clone())
    }

    fn common(&self, rhs: &Self) -> Result<u32, PadicError> {
        if self.p != rhs.p {
            return Err(PadicError::MixedPrimes(self.p, rhs.p));
        }
        Ok(self.precision.min(rhs.precision))
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, PadicError> {
        let m = self.common(rhs)?;
        Ok(PadicInt::new(self.p, m, &self.value + &rhs.value))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, PadicError> {
        let m = self.common(rhs)?;
        let modulus = BigUint::from(self.p).pow(m);
        let a = &self.value % &modulus;
        let b = &rhs.value % &modulus;
        let diff = if a >= b { a - b } else { &modulus + a - b };
        Ok(PadicInt::new(self.p, m, diff))
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, PadicError> {
        let m = self.common(rhs)?;
        Ok(PadicInt::new(self.p, m, &self.value * &rhs.value))
    }

    pub fn neg(&self) -> Self {
        let modulus = self.modulus();
        let v = (&modulus - &self.value) % &modulus;
        PadicInt::new(self.p, self.precision, v)
    }

    /// p-adic valuation; `AtLeast(m)` when the residue is zero.
    pub fn val(&self) -> Valuation {
        val_in_zpm(self.p, self.precision, &self.value)
    }

    pub fn is_unit(&self) -> bool {
        !(&self.value % BigUint::from(self.p)).is_zero()
    }

    /// Inverse of a unit, by Newton lifting of the inverse mod p.
    pub fn inv(&self) -> Result<Self, PadicError> {
        if !self.is_unit() {
            return Err(PadicError::NotAUnit);
        }
        let inv = invert_unit_mod_ppow(self.p, self.precision, &self.value);
        Ok(PadicInt::new(self.p, self.precision, inv))
    }

    pub fn pow(&self, exp: u64) -> Self {
        let modulus = self.modulus();
        PadicInt::new(
            self.p,
            self.precision,
            self.value.modpow(&BigUint::from(exp), &modulus),
        )
    }
}

/// Valuation of a residue lifted from `Z/p^m`.
pub fn val_in_zpm(p: u64, precision: u32, value: &BigUint) -> Valuation {
    if value.is_zero() {
        return Valuation::AtLeast(precision);
    }
    let p = BigUint::from(p);
    let mut v = 0u32;
    let mut n = value.clone();
    loop {
        let (q, r) = num_integer::Integer::div_rem(&n, &p);
        if r.is_zero() {
            v += 1;
            n = q;
        } else {
            break;
        }
    }
    // A nonzero residue cannot carry valuation >= m.
    debug_assert!(v < precision);
    Valuation::Exact(v)
}

/// Inverse of a unit in `Z/p^m` via `x <- x(2 - ax)` starting mod p.
pub fn invert_unit_mod_ppow(p: u64, precision: u32, a: &BigUint) -> BigUint {
    let pm = BigUint::from(p).pow(precision);
    let a = a % &pm;
    // Inverse mod p by Fermat.
    let pb = BigUint::from(p);
    let a0 = &a % &pb;
    let mut x = a0.modpow(&BigUint::from(p - 2), &pb);
    if p == 2 {
        x = BigUint::one();
    }
    let two = BigUint::from(2u32);
    let mut prec = 1u32;
    while prec < precision {
        prec = (prec * 2).min(precision);
        let pk = BigUint::from(p).pow(prec);
        let ax = (&a * &x) % &pk;
        let t = if two >= ax {
            (&two - ax) % &pk
        } else {
            (&pk + &two - ax) % &pk
        };
        x = (&x * t) % &pk;
    }
    x % &pm
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    #[test]
    fn valuation_examples() {
        assert_eq!(
            PadicInt::new(5, 6, BigUint::from(50u32)).val(),
            Valuation::Exact(2)
        );
        assert_eq!(
            PadicInt::new(5, 6, BigUint::from(0u32)).val(),
            Valuation::AtLeast(6)
        );
        // 768 = 3 * 2^8
        assert_eq!(
            PadicInt::new(2, 10, BigUint::from(768u32)).val(),
            Valuation::Exact(8)
        );
    }

    #[test]
    fn precision_is_min_of_operands() {
        let a = PadicInt::from_i64(3, 8, 11);
        let b = PadicInt::from_i64(3, 5, 7);
        assert_eq!(a.add(&b).unwrap().precision(), 5);
        assert_eq!(a.mul(&b).unwrap().precision(), 5);
    }

    #[test]
    fn units_invert() {
        for p in [2u64, 3, 5, 11] {
            for v in 1..30i64 {
                if v as u64 % p == 0 {
                    continue;
                }
                let x = PadicInt::from_i64(p, 9, v);
                let prod = x.mul(&x.inv().unwrap()).unwrap();
                assert_eq!(prod, PadicInt::one(p, 9));
            }
        }
    }

    #[test]
    fn ring_axioms_on_random_triples() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(1);
        for _ in 0..200 {
            let p = *[2u64, 3, 5, 7].iter().nth(rng.random_range(0..4)).unwrap();
            let m = rng.random_range(2..9);
            let r = |rng: &mut rand_chacha::ChaCha12Rng| {
                PadicInt::from_i64(p, m, rng.random_range(-50_000..50_000))
            };
            let (a, b, c) = (r(&mut rng), r(&mut rng), r(&mut rng));
            let ab_c = a.add(&b).unwrap().add(&c).unwrap();
            let a_bc = a.add(&b.add(&c).unwrap()).unwrap();
            assert_eq!(ab_c, a_bc);
            let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
            let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
            let m_ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
            let m_a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
            assert_eq!(m_ab_c, m_a_bc);
        }
    }

    #[test]
    fn negation_is_additive_inverse() {
        let x = PadicInt::from_i64(7, 4, 123);
        assert!(x.add(&x.neg()).unwrap().is_zero());
    }
}
