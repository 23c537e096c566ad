//! Truncated unramified Witt rings `W_m(F_{p^a})` with Frobenius.
//!
//! The ring is presented as `(Z/p^m)[t] / Φ̃` where `Φ̃` is the monic degree-a
//! factor of `t^{p^a} - t` lifting the lexicographically least monic
//! irreducible degree-a polynomial over `F_p` (Hensel factor lifting). In this
//! presentation `t` is a Teichmüller element, so the Frobenius lift is simply
//! `σ(t) = t^p`; it is a ring endomorphism with `σ^a = id` and reduces to the
//! p-power map mod p.

use std::sync::Arc;

use dashmap::DashMap;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;

use super::{invert_unit_mod_ppow, is_prime, val_in_zpm, PadicError, PadicInt, Valuation};

// ---------------------------------------------------------------------------
// Small polynomial arithmetic over F_p (u64 coefficients).
// ---------------------------------------------------------------------------

fn fp_trim(f: &mut Vec<u64>) {
    while f.last() == Some(&0) {
        f.pop();
    }
}

fn fp_deg(f: &[u64]) -> Option<usize> {
    if f.is_empty() {
        None
    } else {
        Some(f.len() - 1)
    }
}

fn fp_mul(p: u64, f: &[u64], g: &[u64]) -> Vec<u64> {
    if f.is_empty() || g.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = (out[i + j] + a * b) % p;
        }
    }
    fp_trim(&mut out);
    out
}

fn fp_rem(p: u64, f: &[u64], g: &[u64]) -> Vec<u64> {
    let mut r = f.to_vec();
    fp_trim(&mut r);
    let gd = fp_deg(g).expect("division by zero polynomial");
    let ginv = mod_inv_u64(g[gd], p);
    while let Some(rd) = fp_deg(&r) {
        if rd < gd {
            break;
        }
        let c = (r[rd] * ginv) % p;
        let shift = rd - gd;
        for (j, &gj) in g.iter().enumerate() {
            let sub = (c * gj) % p;
            r[j + shift] = (r[j + shift] + p - sub) % p;
        }
        fp_trim(&mut r);
    }
    r
}

/// Exact division `f / g` over F_p; panics if the division is not exact.
fn fp_div_exact(p: u64, f: &[u64], g: &[u64]) -> Vec<u64> {
    let mut r = f.to_vec();
    fp_trim(&mut r);
    let gd = fp_deg(g).expect("division by zero polynomial");
    let ginv = mod_inv_u64(g[gd], p);
    let mut q = vec![0u64; r.len().saturating_sub(gd)];
    while let Some(rd) = fp_deg(&r) {
        if rd < gd {
            break;
        }
        let c = (r[rd] * ginv) % p;
        let shift = rd - gd;
        q[shift] = c;
        for (j, &gj) in g.iter().enumerate() {
            let sub = (c * gj) % p;
            r[j + shift] = (r[j + shift] + p - sub) % p;
        }
        fp_trim(&mut r);
    }
    assert!(r.is_empty(), "inexact polynomial division");
    fp_trim(&mut q);
    q
}

fn fp_gcd(p: u64, f: &[u64], g: &[u64]) -> Vec<u64> {
    let mut a = f.to_vec();
    let mut b = g.to_vec();
    fp_trim(&mut a);
    fp_trim(&mut b);
    while !b.is_empty() {
        let r = fp_rem(p, &a, &b);
        a = b;
        b = r;
    }
    // Normalize monic.
    if let Some(d) = fp_deg(&a) {
        let inv = mod_inv_u64(a[d], p);
        for c in a.iter_mut() {
            *c = (*c * inv) % p;
        }
    }
    a
}

/// Extended gcd: returns (s, t) with s*f + t*g = 1, for coprime f, g.
fn fp_bezout(p: u64, f: &[u64], g: &[u64]) -> (Vec<u64>, Vec<u64>) {
    // Maintain r = s*f + t*g.
    let (mut r0, mut r1) = (f.to_vec(), g.to_vec());
    let (mut s0, mut s1) = (vec![1u64], vec![]);
    let (mut t0, mut t1) = (vec![], vec![1u64]);
    fp_trim(&mut r0);
    fp_trim(&mut r1);
    while !r1.is_empty() {
        // r0 = q*r1 + r
        let q = fp_quot(p, &r0, &r1);
        let r = fp_rem(p, &r0, &r1);
        let qs = fp_mul(p, &q, &s1);
        let qt = fp_mul(p, &q, &t1);
        let s = fp_sub(p, &s0, &qs);
        let t = fp_sub(p, &t0, &qt);
        r0 = std::mem::take(&mut r1);
        r1 = r;
        s0 = std::mem::take(&mut s1);
        s1 = s;
        t0 = std::mem::take(&mut t1);
        t1 = t;
    }
    let d = fp_deg(&r0).expect("gcd of zero polynomials");
    assert_eq!(d, 0, "polynomials are not coprime");
    let inv = mod_inv_u64(r0[0], p);
    let scale = |mut v: Vec<u64>| {
        for c in v.iter_mut() {
            *c = (*c * inv) % p;
        }
        v
    };
    (scale(s0), scale(t0))
}

fn fp_quot(p: u64, f: &[u64], g: &[u64]) -> Vec<u64> {
    let mut r = f.to_vec();
    fp_trim(&mut r);
    let gd = fp_deg(g).expect("division by zero polynomial");
    let ginv = mod_inv_u64(g[gd], p);
    if fp_deg(&r).map_or(true, |rd| rd < gd) {
        return vec![];
    }
    let mut q = vec![0u64; r.len() - gd];
    while let Some(rd) = fp_deg(&r) {
        if rd < gd {
            break;
        }
        let c = (r[rd] * ginv) % p;
        let shift = rd - gd;
        q[shift] = c;
        for (j, &gj) in g.iter().enumerate() {
            let sub = (c * gj) % p;
            r[j + shift] = (r[j + shift] + p - sub) % p;
        }
        fp_trim(&mut r);
    }
    fp_trim(&mut q);
    q
}

fn fp_sub(p: u64, f: &[u64], g: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; f.len().max(g.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let a = f.get(i).copied().unwrap_or(0);
        let b = g.get(i).copied().unwrap_or(0);
        *o = (a + p - b) % p;
    }
    fp_trim(&mut out);
    out
}

fn mod_inv_u64(a: u64, p: u64) -> u64 {
    // p prime, a != 0 mod p.
    let mut result = 1u64;
    let mut base = a % p;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    result
}

/// x^e mod f over F_p, binary powering.
fn fp_powmod(p: u64, base: &[u64], e: u64, f: &[u64]) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut b = fp_rem(p, base, f);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = fp_rem(p, &fp_mul(p, &result, &b), f);
        }
        b = fp_rem(p, &fp_mul(p, &b, &b), f);
        e >>= 1;
    }
    result
}

fn fp_is_irreducible(p: u64, f: &[u64]) -> bool {
    let a = fp_deg(f).unwrap() as u64;
    // t^{p^a} == t mod f
    let x = vec![0u64, 1];
    let xr = fp_rem(p, &x, f);
    let mut xp = xr.clone();
    for _ in 0..a {
        xp = fp_powmod_poly(p, &xp, f);
    }
    if fp_sub(p, &xp, &xr) != Vec::<u64>::new() {
        return false;
    }
    // gcd(t^{p^{a/l}} - t, f) = 1 for prime l | a
    let mut divisors = vec![];
    let mut n = a;
    let mut l = 2;
    while l * l <= n {
        if n % l == 0 {
            divisors.push(l);
            while n % l == 0 {
                n /= l;
            }
        }
        l += 1;
    }
    if n > 1 {
        divisors.push(n);
    }
    for l in divisors {
        let mut xq = x.clone();
        for _ in 0..(a / l) {
            xq = fp_powmod_poly(p, &xq, f);
        }
        let diff = fp_sub(p, &xq, &x);
        let g = fp_gcd(p, &diff, f);
        if fp_deg(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// g -> g^p mod f.
fn fp_powmod_poly(p: u64, g: &[u64], f: &[u64]) -> Vec<u64> {
    fp_powmod_general(p, g, p, f)
}

fn fp_powmod_general(p: u64, g: &[u64], e: u64, f: &[u64]) -> Vec<u64> {
    fp_powmod(p, g, e, f)
}

/// Lexicographically least monic irreducible polynomial of degree a over F_p,
/// ordering candidates by the radix-p encoding of (c_0, ..., c_{a-1}).
fn least_irreducible(p: u64, a: u32) -> Vec<u64> {
    let a = a as usize;
    let total = (p as u128).pow(a as u32);
    let mut code = 0u128;
    while code < total {
        let mut f = vec![0u64; a + 1];
        f[a] = 1;
        let mut c = code;
        for coef in f.iter_mut().take(a) {
            *coef = (c % p as u128) as u64;
            c /= p as u128;
        }
        if fp_is_irreducible(p, &f) {
            return f;
        }
        code += 1;
    }
    unreachable!("irreducible polynomial of degree {a} exists over F_{p}")
}

// ---------------------------------------------------------------------------
// Polynomials over Z/p^m (BigUint coefficients).
// ---------------------------------------------------------------------------

fn zn_mul(modulus: &BigUint, f: &[BigUint], g: &[BigUint]) -> Vec<BigUint> {
    if f.is_empty() || g.is_empty() {
        return vec![];
    }
    let mut out = vec![BigUint::zero(); f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in g.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            out[i + j] = (&out[i + j] + a * b) % modulus;
        }
    }
    out
}

fn zn_sub(modulus: &BigUint, f: &[BigUint], g: &[BigUint]) -> Vec<BigUint> {
    let n = f.len().max(g.len());
    let zero = BigUint::zero();
    (0..n)
        .map(|i| {
            let a = f.get(i).unwrap_or(&zero);
            let b = g.get(i).unwrap_or(&zero) % modulus;
            ((a + modulus) - b) % modulus
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Witt ring tables.
// ---------------------------------------------------------------------------

struct WittTables {
    precision: u32,
    /// Monic degree-a factor of t^{p^a} - t over Z/p^m (little-endian, len a+1).
    phi: Vec<BigUint>,
    /// t^k mod phi for k in a..=2a-2 (each of length a).
    reduce: Vec<Vec<BigUint>>,
    /// sigma(t^i) = t^{p i} mod phi for i in 0..a.
    sigma: Vec<Vec<BigUint>>,
}

static TABLES: Lazy<DashMap<(u64, u32), Arc<WittTables>>> = Lazy::new(DashMap::new);

fn get_tables(p: u64, a: u32, precision: u32) -> Arc<WittTables> {
    if let Some(t) = TABLES.get(&(p, a)) {
        if t.precision >= precision {
            return t.clone();
        }
    }
    let built = Arc::new(build_tables(p, a, precision));
    TABLES.insert((p, a), built.clone());
    built
}

fn build_tables(p: u64, a: u32, precision: u32) -> WittTables {
    assert!(is_prime(p), "{p} is not prime");
    assert!(a >= 1, "residue degree must be >= 1");
    assert!(
        (p as u128).checked_pow(a).map_or(false, |q| q <= 1 << 20),
        "residue field F_{{p^a}} too large"
    );
    let modulus = BigUint::from(p).pow(precision);
    let f0 = least_irreducible(p, a);
    let phi = hensel_lift_factor(p, a, precision, &f0);

    // Reduction table for t^k, a <= k <= 2a-2.
    let arity = a as usize;
    let mut reduce: Vec<Vec<BigUint>> = Vec::new();
    // t^a = -(phi - t^a) since phi is monic.
    let mut cur: Vec<BigUint> = (0..arity)
        .map(|i| ((&modulus - &phi[i]) % &modulus).clone())
        .collect();
    reduce.push(cur.clone());
    for _ in (arity + 1)..=(2 * arity).saturating_sub(2) {
        // multiply cur by t, reduce the overflow coefficient.
        let top = cur[arity - 1].clone();
        let mut next = vec![BigUint::zero(); arity];
        for i in (1..arity).rev() {
            next[i] = cur[i - 1].clone();
        }
        for i in 0..arity {
            next[i] = (&next[i] + &top * &reduce[0][i]) % &modulus;
        }
        cur = next;
        reduce.push(cur.clone());
    }

    // sigma(t) = t^p mod phi, then its powers.
    let tp = zn_powmod_t(p, precision, &phi, p as u64);
    let mut sigma = Vec::with_capacity(arity);
    let mut acc = vec![BigUint::one()];
    acc.resize(arity, BigUint::zero());
    sigma.push(acc.clone()); // sigma(t^0) = 1
    for _ in 1..arity {
        acc = polymul_mod_phi(&modulus, &acc, &tp, &reduce, arity);
        sigma.push(acc.clone());
    }

    WittTables {
        precision,
        phi,
        reduce,
        sigma,
    }
}

/// t^e mod phi over Z/p^m.
fn zn_powmod_t(p: u64, precision: u32, phi: &[BigUint], e: u64) -> Vec<BigUint> {
    let modulus = BigUint::from(p).pow(precision);
    let arity = phi.len() - 1;
    let mut reduce0: Vec<BigUint> = (0..arity).map(|i| (&modulus - &phi[i]) % &modulus).collect();
    for r in reduce0.iter_mut() {
        *r = &*r % &modulus;
    }
    let mut result = vec![BigUint::zero(); arity];
    result[0] = BigUint::one();
    let mut base = vec![BigUint::zero(); arity];
    if arity == 1 {
        base[0] = reduce0[0].clone(); // t == -phi[0]
    } else {
        base[1] = BigUint::one();
    }
    let mut e = e;
    let mut table = vec![reduce0];
    // extend the single-row table enough for polymul
    while table.len() < arity.saturating_sub(1) {
        let prev = table.last().unwrap().clone();
        let top = prev[arity - 1].clone();
        let mut next = vec![BigUint::zero(); arity];
        for i in (1..arity).rev() {
            next[i] = prev[i - 1].clone();
        }
        for i in 0..arity {
            next[i] = (&next[i] + &top * &table[0][i]) % &modulus;
        }
        table.push(next);
    }
    while e > 0 {
        if e & 1 == 1 {
            result = polymul_mod_phi(&modulus, &result, &base, &table, arity);
        }
        base = polymul_mod_phi(&modulus, &base, &base, &table, arity);
        e >>= 1;
    }
    result
}

/// Product of two length-a coefficient vectors, reduced mod phi via the table.
fn polymul_mod_phi(
    modulus: &BigUint,
    x: &[BigUint],
    y: &[BigUint],
    reduce: &[Vec<BigUint>],
    arity: usize,
) -> Vec<BigUint> {
    if arity == 1 {
        return vec![(&x[0] * &y[0]) % modulus];
    }
    let mut full = vec![BigUint::zero(); 2 * arity - 1];
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            full[i + j] = (&full[i + j] + xi * yj) % modulus;
        }
    }
    let mut out: Vec<BigUint> = full[..arity].to_vec();
    for k in arity..(2 * arity - 1) {
        if full[k].is_zero() {
            continue;
        }
        let row = &reduce[k - arity];
        for i in 0..arity {
            out[i] = (&out[i] + &full[k] * &row[i]) % modulus;
        }
    }
    out
}

/// Lifts the factorization t^{p^a} - t = f0 * g0 over F_p to Z/p^m,
/// returning the monic degree-a factor.
fn hensel_lift_factor(p: u64, a: u32, precision: u32, f0: &[u64]) -> Vec<BigUint> {
    let arity = a as usize;
    let q = (p as u128).pow(a) as usize; // guarded small
    if arity == 1 && f0[0] == 0 {
        // phi = t exactly divides t^p - t; nothing to lift.
        return vec![BigUint::zero(), BigUint::one()];
    }
    // F = t^q - t over F_p.
    let mut big_f = vec![0u64; q + 1];
    big_f[q] = 1;
    big_f[1] = p - 1;
    let g0 = fp_div_exact(p, &big_f, f0);
    let (s, t) = fp_bezout(p, f0, &g0);

    // Lift linearly: f_{k+1} = f_k + p^k df, g_{k+1} = g_k + p^k dg.
    let mut fk: Vec<BigUint> = f0.iter().map(|&c| BigUint::from(c)).collect();
    let mut gk: Vec<BigUint> = g0.iter().map(|&c| BigUint::from(c)).collect();
    for k in 1..precision {
        let modulus = BigUint::from(p).pow(k + 1);
        let pk = BigUint::from(p).pow(k);
        // F mod p^{k+1}
        let mut big_fz = vec![BigUint::zero(); q + 1];
        big_fz[q] = BigUint::one();
        big_fz[1] = &modulus - BigUint::one();
        let prod = zn_mul(&modulus, &fk, &gk);
        let diff = zn_sub(&modulus, &big_fz, &prod);
        // E = diff / p^k, a polynomial over F_p.
        let e_fp: Vec<u64> = diff
            .iter()
            .map(|c| {
                let (quo, rem) = num_integer::Integer::div_rem(c, &pk);
                assert!(rem.is_zero(), "Hensel defect not divisible by p^k");
                (quo % BigUint::from(p))
                    .try_into()
                    .expect("residue fits u64")
            })
            .collect();
        let te = fp_mul(p, &t, &e_fp);
        let df = fp_rem(p, &te, f0);
        // dg = (E - df*g0) / f0 exactly over F_p.
        let dfg = fp_mul(p, &df, &g0);
        let num = fp_sub(p, &e_fp, &dfg);
        let dg = fp_div_exact(p, &num, f0);
        for (i, c) in df.iter().enumerate() {
            if *c != 0 {
                fk[i] = (&fk[i] + &pk * BigUint::from(*c)) % &modulus;
            }
        }
        for (i, c) in dg.iter().enumerate() {
            if *c != 0 {
                gk[i] = (&gk[i] + &pk * BigUint::from(*c)) % &modulus;
            }
        }
        let _ = &s; // s retained for clarity of the Bezout identity
    }
    fk.resize(arity + 1, BigUint::zero());
    fk
}

// ---------------------------------------------------------------------------
// Public types.
// ---------------------------------------------------------------------------

/// Descriptor of the truncated Witt ring `W_m(F_{p^a})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittRing {
    p: u64,
    a: u32,
    precision: u32,
}

/// Element of `W_m(F_{p^a})`, stored as a polynomial of degree < a over Z/p^m.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittElem {
    p: u64,
    a: u32,
    precision: u32,
    coeffs: Vec<BigUint>,
}

impl WittRing {
    pub fn new(p: u64, a: u32, precision: u32) -> Self {
        assert!(precision > 0, "precision must be positive");
        assert!(is_prime(p), "{p} is not prime");
        assert!(a >= 1);
        // Force table construction early so errors surface at ring creation.
        let _ = get_tables(p, a, precision);
        WittRing { p, a, precision }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn residue_degree(&self) -> u32 {
        self.a
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn modulus(&self) -> BigUint {
        BigUint::from(self.p).pow(self.precision)
    }

    /// The structure polynomial Φ̃ at this ring's precision.
    pub fn structure_poly(&self) -> Vec<BigUint> {
        let t = get_tables(self.p, self.a, self.precision);
        let m = self.modulus();
        t.phi.iter().map(|c| c % &m).collect()
    }

    pub fn zero(&self) -> WittElem {
        WittElem {
            p: self.p,
            a: self.a,
            precision: self.precision,
            coeffs: vec![BigUint::zero(); self.a as usize],
        }
    }

    pub fn one(&self) -> WittElem {
        let mut e = self.zero();
        e.coeffs[0] = BigUint::one();
        e
    }

    /// Generator t (the Teichmüller class of a residue-field generator).
    pub fn gen(&self) -> WittElem {
        let mut e = self.zero();
        if self.a == 1 {
            // t maps to -phi[0] = 0 in W(F_p).
            return e;
        }
        e.coeffs[1] = BigUint::one();
        e
    }

    pub fn from_coeffs(&self, coeffs: Vec<BigUint>) -> WittElem {
        assert!(coeffs.len() <= self.a as usize, "too many coefficients");
        let m = self.modulus();
        let mut c: Vec<BigUint> = coeffs.into_iter().map(|x| x % &m).collect();
        c.resize(self.a as usize, BigUint::zero());
        WittElem {
            p: self.p,
            a: self.a,
            precision: self.precision,
            coeffs: c,
        }
    }

    pub fn from_i64(&self, v: i64) -> WittElem {
        let m = self.modulus();
        let c0 = if v < 0 {
            (&m - BigUint::from(v.unsigned_abs()) % &m) % &m
        } else {
            BigUint::from(v as u64) % &m
        };
        let mut e = self.zero();
        e.coeffs[0] = c0;
        e
    }

    pub fn from_padic(&self, x: &PadicInt) -> WittElem {
        assert_eq!(x.prime(), self.p);
        assert!(x.precision() >= self.precision);
        let mut e = self.zero();
        e.coeffs[0] = x.lift() % self.modulus();
        e
    }

    /// Ring at the same (p, a) but lower precision.
    pub fn reduce_to(&self, precision: u32) -> WittRing {
        assert!(precision <= self.precision && precision > 0);
        WittRing {
            p: self.p,
            a: self.a,
            precision,
        }
    }

    /// Residue field F_{p^a} as a Witt ring of precision 1.
    pub fn residue_field(&self) -> WittRing {
        self.reduce_to(1)
    }
}

impl WittElem {
    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn residue_degree(&self) -> u32 {
        self.a
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn ring(&self) -> WittRing {
        WittRing {
            p: self.p,
            a: self.a,
            precision: self.precision,
        }
    }

    fn modulus(&self) -> BigUint {
        BigUint::from(self.p).pow(self.precision)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn common(&self, rhs: &Self) -> u32 {
        assert_eq!(self.p, rhs.p, "mixed primes");
        assert_eq!(self.a, rhs.a, "mixed residue degrees");
        self.precision.min(rhs.precision)
    }

    pub fn reduce_to(&self, precision: u32) -> WittElem {
        assert!(precision <= self.precision && precision > 0);
        let m = BigUint::from(self.p).pow(precision);
        WittElem {
            p: self.p,
            a: self.a,
            precision,
            coeffs: self.coeffs.iter().map(|c| c % &m).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> WittElem {
        let m = self.common(rhs);
        let modulus = BigUint::from(self.p).pow(m);
        WittElem {
            p: self.p,
            a: self.a,
            precision: m,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(x, y)| (x + y) % &modulus)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> WittElem {
        let m = self.common(rhs);
        let modulus = BigUint::from(self.p).pow(m);
        WittElem {
            p: self.p,
            a: self.a,
            precision: m,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(x, y)| ((x % &modulus) + &modulus - (y % &modulus)) % &modulus)
                .collect(),
        }
    }

    pub fn neg(&self) -> WittElem {
        let modulus = self.modulus();
        WittElem {
            p: self.p,
            a: self.a,
            precision: self.precision,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| ((&modulus - c) % &modulus).clone())
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> WittElem {
        let m = self.common(rhs);
        let modulus = BigUint::from(self.p).pow(m);
        let tables = get_tables(self.p, self.a, m);
        let arity = self.a as usize;
        let x: Vec<BigUint> = self.coeffs.iter().map(|c| c % &modulus).collect();
        let y: Vec<BigUint> = rhs.coeffs.iter().map(|c| c % &modulus).collect();
        let reduce: Vec<Vec<BigUint>> = tables
            .reduce
            .iter()
            .map(|row| row.iter().map(|c| c % &modulus).collect())
            .collect();
        WittElem {
            p: self.p,
            a: self.a,
            precision: m,
            coeffs: polymul_mod_phi(&modulus, &x, &y, &reduce, arity),
        }
    }

    pub fn mul_i64(&self, k: i64) -> WittElem {
        let modulus = self.modulus();
        let kk = if k < 0 {
            (&modulus - BigUint::from(k.unsigned_abs()) % &modulus) % &modulus
        } else {
            BigUint::from(k as u64) % &modulus
        };
        WittElem {
            p: self.p,
            a: self.a,
            precision: self.precision,
            coeffs: self.coeffs.iter().map(|c| (c * &kk) % &modulus).collect(),
        }
    }

    /// Multiplies by p^k (valuation shift).
    pub fn mul_p_pow(&self, k: u32) -> WittElem {
        let modulus = self.modulus();
        let f = BigUint::from(self.p).pow(k);
        WittElem {
            p: self.p,
            a: self.a,
            precision: self.precision,
            coeffs: self.coeffs.iter().map(|c| (c * &f) % &modulus).collect(),
        }
    }

    /// Exact division by p^k. Fails if some coefficient is not divisible.
    /// The result is only determined mod p^{m-k} and is returned at that precision.
    pub fn div_p_pow_exact(&self, k: u32) -> Option<WittElem> {
        if k == 0 {
            return Some(self.clone());
        }
        if k >= self.precision {
            return None;
        }
        let pk = BigUint::from(self.p).pow(k);
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let (q, r) = num_integer::Integer::div_rem(c, &pk);
            if !r.is_zero() {
                return None;
            }
            coeffs.push(q);
        }
        let m = self.precision - k;
        let modulus = BigUint::from(self.p).pow(m);
        Some(WittElem {
            p: self.p,
            a: self.a,
            precision: m,
            coeffs: coeffs.into_iter().map(|c| c % &modulus).collect(),
        })
    }

    /// Valuation: minimum coefficient valuation (the extension is unramified).
    pub fn val(&self) -> Valuation {
        let mut best: Option<u32> = None;
        for c in &self.coeffs {
            match val_in_zpm(self.p, self.precision, c) {
                Valuation::Exact(v) => {
                    best = Some(best.map_or(v, |b| b.min(v)));
                }
                Valuation::AtLeast(_) => {}
            }
        }
        match best {
            Some(v) => Valuation::Exact(v),
            None => Valuation::AtLeast(self.precision),
        }
    }

    pub fn is_unit(&self) -> bool {
        matches!(self.val(), Valuation::Exact(0))
    }

    /// Inverse of a unit via Newton iteration from the residue-field inverse.
    pub fn inv(&self) -> Result<WittElem, PadicError> {
        if !self.is_unit() {
            return Err(PadicError::NotAUnit);
        }
        let p = self.p;
        // Residue-field inverse by extended Euclid over F_p[t].
        let tables = get_tables(p, self.a, self.precision);
        let phi_fp: Vec<u64> = tables
            .phi
            .iter()
            .map(|c| (c % BigUint::from(p)).try_into().unwrap())
            .collect();
        let self_fp: Vec<u64> = self
            .coeffs
            .iter()
            .map(|c| (c % BigUint::from(p)).try_into().unwrap())
            .collect();
        let mut trimmed = self_fp.clone();
        fp_trim(&mut trimmed);
        let inv0 = if self.a == 1 {
            vec![mod_inv_u64(trimmed[0], p)]
        } else {
            let (s, _t) = fp_bezout(p, &trimmed, &phi_fp);
            fp_rem(p, &s, &phi_fp)
        };
        let ring = self.ring();
        let mut x = ring.zero();
        for (i, c) in inv0.iter().enumerate() {
            x.coeffs[i] = BigUint::from(*c);
        }
        let two = ring.from_i64(2);
        // Newton: x <- x (2 - a x); doubles correct precision each step.
        let steps = 32 - (self.precision.max(1) - 1).leading_zeros() + 1;
        for _ in 0..steps {
            let ax = self.mul(&x);
            let t = two.sub(&ax);
            x = x.mul(&t);
        }
        debug_assert!(self.mul(&x).sub(&ring.one()).is_zero());
        Ok(x)
    }

    /// The Frobenius lift σ: reduces to the p-power map mod p, σ^a = id.
    pub fn frobenius(&self) -> WittElem {
        if self.a == 1 {
            return self.clone();
        }
        let tables = get_tables(self.p, self.a, self.precision);
        let modulus = self.modulus();
        let arity = self.a as usize;
        // sigma(t^i) tables give images of the basis; sigma is linear over Z/p^m
        // on the coefficients.
        // coeffs of sigma(w) = sum_i w_i * sigma(t)^i. tables.sigma[i] = (t^p)^i.
        let mut out = vec![BigUint::zero(); arity];
        for (i, wi) in self.coeffs.iter().enumerate() {
            if wi.is_zero() {
                continue;
            }
            let img = &tables.sigma[i];
            for j in 0..arity {
                out[j] = (&out[j] + wi * (&img[j] % &modulus)) % &modulus;
            }
        }
        WittElem {
            p: self.p,
            a: self.a,
            precision: self.precision,
            coeffs: out,
        }
    }

    /// p-power map on the element (used for mod-p Frobenius checks).
    pub fn pow(&self, e: u64) -> WittElem {
        let ring = self.ring();
        let mut result = ring.one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        result
    }

    /// First coefficient as a PadicInt (only meaningful when a = 1).
    pub fn as_padic(&self) -> PadicInt {
        assert_eq!(self.a, 1);
        PadicInt::new(self.p, self.precision, self.coeffs[0].clone())
    }
}

/// Frobenius automorphism of a Witt element (free-function form).
pub fn witt_frobenius(w: &WittElem) -> WittElem {
    w.frobenius()
}

/// Convenience: unit inverse in Z/p^m (re-exported for matrix code).
pub fn zpm_inv(p: u64, precision: u32, a: &BigUint) -> BigUint {
    invert_unit_mod_ppow(p, precision, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn random_elem(ring: &WittRing, rng: &mut rand_chacha::ChaCha12Rng) -> WittElem {
        let m = ring.modulus();
        let coeffs: Vec<BigUint> = (0..ring.residue_degree())
            .map(|_| BigUint::from(rng.random_range(0..1_000_000u64)) % &m)
            .collect();
        ring.from_coeffs(coeffs)
    }

    #[test]
    fn phi_divides_frobenius_polynomial_mod_p() {
        for (p, a) in [(2u64, 2u32), (3, 2), (2, 3), (5, 2), (3, 3)] {
            let ring = WittRing::new(p, a, 6);
            let phi = ring.structure_poly();
            let phi_fp: Vec<u64> = phi
                .iter()
                .map(|c| (c % BigUint::from(p)).try_into().unwrap())
                .collect();
            // t^{p^a} mod phi == t over F_p
            let x = vec![0u64, 1];
            let mut xp = x.clone();
            for _ in 0..a {
                xp = fp_powmod_poly(p, &xp, &phi_fp);
            }
            assert_eq!(fp_sub(p, &xp, &x), Vec::<u64>::new());
        }
    }

    #[test]
    fn phi_divides_frobenius_polynomial_at_full_precision() {
        // Hensel-lifted: t^{p^a} == t holds in the quotient at precision m.
        for (p, a, m) in [(2u64, 2u32, 8u32), (3, 2, 8), (5, 2, 6)] {
            let ring = WittRing::new(p, a, m);
            let t = ring.gen();
            let q = (p as u64).pow(a);
            assert_eq!(t.pow(q), t, "t^(p^a) != t for p={p}, a={a}");
        }
    }

    #[test]
    fn frobenius_trivial_on_prime_field() {
        let ring = WittRing::new(7, 1, 8);
        let w = ring.from_i64(123456);
        assert_eq!(w.frobenius(), w);
    }

    #[test]
    fn frobenius_order_divides_a() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        for (p, a, m) in [(3u64, 2u32, 8u32), (2, 3, 6), (2, 4, 5), (3, 4, 4), (5, 2, 6)] {
            let ring = WittRing::new(p, a, m);
            for _ in 0..20 {
                let w = random_elem(&ring, &mut rng);
                let mut s = w.clone();
                for _ in 0..a {
                    s = s.frobenius();
                }
                assert_eq!(s, w, "sigma^a != id for p={p}, a={a}");
            }
        }
    }

    #[test]
    fn frobenius_squared_identity_on_degree_two() {
        let ring = WittRing::new(3, 2, 8);
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(11);
        for _ in 0..50 {
            let w = random_elem(&ring, &mut rng);
            assert_eq!(w.frobenius().frobenius(), w);
        }
    }

    #[test]
    fn frobenius_is_ring_homomorphism() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(3);
        for (p, a, m) in [(2u64, 2u32, 8u32), (3, 2, 8), (2, 3, 6)] {
            let ring = WittRing::new(p, a, m);
            for _ in 0..30 {
                let x = random_elem(&ring, &mut rng);
                let y = random_elem(&ring, &mut rng);
                assert_eq!(x.mul(&y).frobenius(), x.frobenius().mul(&y.frobenius()));
                assert_eq!(x.add(&y).frobenius(), x.frobenius().add(&y.frobenius()));
            }
        }
    }

    #[test]
    fn frobenius_reduces_to_p_power_map() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(5);
        for (p, a, m) in [(2u64, 2u32, 6u32), (3, 2, 6), (5, 2, 5)] {
            let ring = WittRing::new(p, a, m);
            for _ in 0..25 {
                let w = random_elem(&ring, &mut rng);
                let lhs = w.frobenius().reduce_to(1);
                let rhs = w.reduce_to(1).pow(p);
                assert_eq!(lhs, rhs, "sigma != x^p mod p for p={p}, a={a}");
            }
        }
    }

    #[test]
    fn units_invert() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(9);
        for (p, a, m) in [(2u64, 2u32, 8u32), (3, 2, 8), (3, 1, 10)] {
            let ring = WittRing::new(p, a, m);
            let mut found = 0;
            while found < 20 {
                let w = random_elem(&ring, &mut rng);
                if !w.is_unit() {
                    continue;
                }
                found += 1;
                assert_eq!(w.mul(&w.inv().unwrap()), ring.one());
            }
        }
    }

    #[test]
    fn ring_axioms_on_random_triples() {
        let ring = WittRing::new(2, 2, 8);
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(13);
        for _ in 0..60 {
            let a = random_elem(&ring, &mut rng);
            let b = random_elem(&ring, &mut rng);
            let c = random_elem(&ring, &mut rng);
            assert_eq!(a.mul(&b.mul(&c)), a.mul(&b).mul(&c));
            assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            assert_eq!(a.mul(&b), b.mul(&a));
        }
    }

    #[test]
    fn valuation_shifts() {
        let ring = WittRing::new(5, 2, 8);
        let t = ring.gen();
        assert_eq!(t.val(), Valuation::Exact(0));
        assert_eq!(t.mul_p_pow(3).val(), Valuation::Exact(3));
        assert_eq!(ring.zero().val(), Valuation::AtLeast(8));
        let back = t.mul_p_pow(3).div_p_pow_exact(3).unwrap();
        assert_eq!(back, t.reduce_to(5));
    }
}
