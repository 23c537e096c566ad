//! Coefficient-ring descriptors for truncated power series.
//!
//! Rings here carry context (a prime, a precision, a structure polynomial),
//! so elements cannot conjure `zero()` on their own; the descriptor object
//! provides all operations.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::witt::{WittElem, WittRing};
use super::{invert_unit_mod_ppow, Valuation};

/// Operations a series coefficient ring must provide.
pub trait Coeffs: Clone {
    type Elem: Clone + PartialEq + std::fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// Multiplicative inverse when it exists.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
}

/// The rational numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Coeffs for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
}

/// The ring Z/p^m, with elements stored as canonical residues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicRing {
    p: u64,
    precision: u32,
    modulus: BigUint,
}

impl PadicRing {
    pub fn new(p: u64, precision: u32) -> Self {
        assert!(precision > 0);
        assert!(super::is_prime(p), "{p} is not prime");
        PadicRing {
            p,
            precision,
            modulus: BigUint::from(p).pow(precision),
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn val(&self, a: &BigUint) -> Valuation {
        super::val_in_zpm(self.p, self.precision, a)
    }

    /// Canonical image of a rational with denominator prime to p.
    pub fn from_rational(&self, r: &BigRational) -> Option<BigUint> {
        let num = r.numer();
        let den = r.denom();
        let den_u = den.magnitude() % &self.modulus;
        if (&den_u % BigUint::from(self.p)).is_zero() {
            return None;
        }
        let den_inv = invert_unit_mod_ppow(self.p, self.precision, &den_u);
        let num_u = num.magnitude() % &self.modulus;
        let mag = (num_u * den_inv) % &self.modulus;
        if num.is_negative() && !mag.is_zero() {
            Some(&self.modulus - mag)
        } else {
            Some(mag)
        }
    }
}

impl Coeffs for PadicRing {
    type Elem = BigUint;

    fn zero(&self) -> BigUint {
        BigUint::zero()
    }

    fn one(&self) -> BigUint {
        BigUint::one()
    }

    fn is_zero(&self, a: &BigUint) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a + b) % &self.modulus
    }

    fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        ((a % &self.modulus) + &self.modulus - (b % &self.modulus)) % &self.modulus
    }

    fn neg(&self, a: &BigUint) -> BigUint {
        (&self.modulus - (a % &self.modulus)) % &self.modulus
    }

    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.modulus
    }

    fn from_i64(&self, n: i64) -> BigUint {
        if n < 0 {
            let neg = BigUint::from(n.unsigned_abs()) % &self.modulus;
            (&self.modulus - neg) % &self.modulus
        } else {
            BigUint::from(n as u64) % &self.modulus
        }
    }

    fn inv(&self, a: &BigUint) -> Option<BigUint> {
        if (a % BigUint::from(self.p)).is_zero() {
            None
        } else {
            Some(invert_unit_mod_ppow(self.p, self.precision, a))
        }
    }
}

impl Coeffs for WittRing {
    type Elem = WittElem;

    fn zero(&self) -> WittElem {
        WittRing::zero(self)
    }

    fn one(&self) -> WittElem {
        WittRing::one(self)
    }

    fn is_zero(&self, a: &WittElem) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &WittElem, b: &WittElem) -> WittElem {
        a.add(b)
    }

    fn sub(&self, a: &WittElem, b: &WittElem) -> WittElem {
        a.sub(b)
    }

    fn neg(&self, a: &WittElem) -> WittElem {
        a.neg()
    }

    fn mul(&self, a: &WittElem, b: &WittElem) -> WittElem {
        a.mul(b)
    }

    fn from_i64(&self, n: i64) -> WittElem {
        WittRing::from_i64(self, n)
    }

    fn inv(&self, a: &WittElem) -> Option<WittElem> {
        a.inv().ok()
    }
}
