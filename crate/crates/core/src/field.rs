//! Table-driven arithmetic in GF(p^e) for q = p^e ≤ 2^16.
//!
//! Elements are encoded as integers in `[0, q)`: the polynomial
//! `a_0 + a_1 x + … + a_{e-1} x^{e-1}` is stored as `Σ a_i p^i`. The prime
//! subfield is therefore `0..p` with its natural integer encoding, and the
//! additive basis `1, x, …, x^{e-1}` is `p^0, p^1, …, p^{e-1}`.
//!
//! The modulus is the least monic irreducible polynomial of degree `e`,
//! ordered by the integer `Σ c_i p^i` of its non-leading coefficients, so the
//! encoding (and every matrix built on top of it) is reproducible.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

/// Element of a [`FieldSpec`], by packed polynomial index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Felt(pub u16);

impl Felt {
    pub const ZERO: Felt = Felt(0);
    pub const ONE: Felt = Felt(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Felt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub struct FieldSpec {
    p: u32,
    e: u32,
    q: u32,
    /// Monic modulus, low degree first, length `e + 1`.
    modulus: Vec<u32>,
    /// `antilog[i] = g^i` for the primitive element `g`, doubled to skip a reduction.
    antilog: Vec<u16>,
    log: Vec<u32>,
    negation: Vec<u16>,
    /// Full addition table for small odd-characteristic fields.
    add_table: Option<Vec<u16>>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec").field("p", &self.p).field("e", &self.e).field("modulus", &self.modulus).finish()
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power into `(p, e)`.
pub fn factor_prime_power(q: u64) -> Result<(u32, u32)> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    if rest != 1 || p > u32::MAX as u64 {
        return Err(Error::NotPrimePower(q));
    }
    Ok((p as u32, e))
}

fn unpack(mut idx: u32, p: u32, e: u32) -> Vec<u32> {
    let mut digits = vec![0; e as usize];
    for d in digits.iter_mut() {
        *d = idx % p;
        idx /= p;
    }
    digits
}

fn pack(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Remainder of `num` modulo the monic polynomial `den` over GF(p).
fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    while r.len() > dd {
        let lead = r.pop().unwrap();
        if lead != 0 {
            let shift = r.len() - dd;
            for (i, &c) in den[..dd].iter().enumerate() {
                let sub = (lead * c) % p;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
        }
    }
    r
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        // every monic g of degree d
        for low in 0..(p as u64).pow(d as u32) {
            let mut g = unpack(low as u32, p, d as u32);
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// Builds GF(p^e) with verified tables.
    pub fn new(p: u32, e: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if e == 0 {
            return Err(Error::InvalidParams("extension degree must be >= 1".into()));
        }
        let q = (p as u64).checked_pow(e).filter(|&q| q <= MAX_ORDER).ok_or(Error::TooLarge { p: p as u64, e })?;
        let q = q as u32;

        let modulus = (0..q)
            .map(|low| {
                let mut f = unpack(low, p, e);
                f.push(1);
                f
            })
            .find(|f| is_irreducible(f, p))
            .ok_or(Error::NoIrreducibleFound { p, e })?;

        let mut field =
            FieldSpec { p, e, q, modulus, antilog: Vec::new(), log: Vec::new(), negation: Vec::new(), add_table: None };
        field.build_tables()?;
        Ok(field)
    }

    /// Builds GF(q) from a prime power.
    pub fn from_order(q: u64) -> Result<Self> {
        let (p, e) = factor_prime_power(q)?;
        Self::new(p, e)
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let (p, e) = (self.p, self.e);
        let da = unpack(a, p, e);
        let db = unpack(b, p, e);
        let mut prod = vec![0u32; 2 * e as usize - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        let r = if self.e == 1 { prod } else { poly_rem(&prod, &self.modulus, p) };
        pack(&r, p)
    }

    fn build_tables(&mut self) -> Result<()> {
        let (p, e, q) = (self.p, self.e, self.q);
        let order = q - 1;

        self.negation = (0..q)
            .map(|a| {
                let d: Vec<u32> = unpack(a, p, e).iter().map(|&x| (p - x) % p).collect();
                pack(&d, p) as u16
            })
            .collect();
        if p != 2 && q <= 256 {
            let mut t = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = self.add_digits(a, b) as u16;
                }
            }
            self.add_table = Some(t);
        }

        let generator = (1..q)
            .find(|&g| {
                let mut x = 1;
                for k in 1..=order {
                    x = self.mul_slow(x, g);
                    if x == 1 {
                        return k == order;
                    }
                }
                false
            })
            .ok_or(Error::NoIrreducibleFound { p, e })?;

        let mut antilog = vec![0u16; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..order {
            antilog[i as usize] = x as u16;
            antilog[(i + order) as usize] = x as u16;
            log[x as usize] = i;
            x = self.mul_slow(x, generator);
        }
        for a in 1..q {
            if antilog[log[a as usize] as usize] as u32 != a {
                return Err(Error::NoIrreducibleFound { p, e });
            }
        }
        self.antilog = antilog;
        self.log = log;
        Ok(())
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        let (p, e) = (self.p, self.e);
        let mut r = 0;
        let mut scale = 1;
        let (mut a, mut b) = (a, b);
        for _ in 0..e {
            r += ((a % p + b % p) % p) * scale;
            a /= p;
            b /= p;
            scale *= p;
        }
        r
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn e(&self) -> u32 {
        self.e
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_even_char(&self) -> bool {
        self.p == 2
    }

    pub fn zero(&self) -> Felt {
        Felt::ZERO
    }

    pub fn one(&self) -> Felt {
        Felt::ONE
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = Felt> {
        (0..self.q).map(|i| Felt(i as u16))
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> Felt {
        Felt(v.rem_euclid(self.p as i64) as u16)
    }

    pub fn element(&self, index: u32) -> Result<Felt> {
        if index < self.q {
            Ok(Felt(index as u16))
        } else {
            Err(Error::InvalidParams(format!("{index} is not an element of GF({})", self.q)))
        }
    }

    /// The additive basis element `x^j`.
    pub fn basis_element(&self, j: u32) -> Felt {
        Felt(self.p.pow(j) as u16)
    }

    #[inline]
    pub fn add(&self, a: Felt, b: Felt) -> Felt {
        if self.p == 2 {
            Felt(a.0 ^ b.0)
        } else if let Some(t) = &self.add_table {
            Felt(t[a.index() * self.q as usize + b.index()])
        } else {
            Felt(self.add_digits(a.0 as u32, b.0 as u32) as u16)
        }
    }

    #[inline]
    pub fn neg(&self, a: Felt) -> Felt {
        Felt(self.negation[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: Felt, b: Felt) -> Felt {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Felt, b: Felt) -> Felt {
        if a.is_zero() || b.is_zero() {
            return Felt::ZERO;
        }
        let s = self.log[a.index()] + self.log[b.index()];
        Felt(self.antilog[s as usize])
    }

    pub fn inv(&self, a: Felt) -> Result<Felt> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let order = self.q - 1;
        let l = self.log[a.index()];
        Ok(Felt(self.antilog[((order - l) % order) as usize]))
    }

    pub fn div(&self, a: Felt, b: Felt) -> Result<Felt> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Felt, exp: u64) -> Felt {
        if exp == 0 {
            return Felt::ONE;
        }
        if a.is_zero() {
            return Felt::ZERO;
        }
        let order = (self.q - 1) as u64;
        let l = (self.log[a.index()] as u64 * (exp % order)) % order;
        Felt(self.antilog[l as usize])
    }

    /// Dot product of two equal-length slices.
    #[inline]
    pub fn dot(&self, a: &[Felt], b: &[Felt]) -> Felt {
        a.iter().zip(b).fold(Felt::ZERO, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triples_check(f: &FieldSpec) {
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in f.elements() {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
            assert_eq!(f.add(a, f.neg(a)), Felt::ZERO);
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), Felt::ONE);
            }
        }
    }

    #[test]
    fn prime_fields() {
        let f2 = FieldSpec::new(2, 1).unwrap();
        assert_eq!(f2.q(), 2);
        assert_eq!(f2.modulus(), &[0, 1]);
        let f3 = FieldSpec::new(3, 1).unwrap();
        assert_eq!(f3.add(Felt(2), Felt(2)), Felt(1));
        assert_eq!(f3.mul(Felt(2), Felt(2)), Felt(1));
    }

    #[test]
    fn gf4_modulus_and_axioms() {
        let f = FieldSpec::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        // x = index 2, x + 1 = index 3
        assert_eq!(f.mul(Felt(2), Felt(2)), Felt(3));
        triples_check(&f);
    }

    #[test]
    fn exhaustive_axioms_small_fields() {
        for (p, e) in [(2, 1), (3, 1), (5, 1), (7, 1), (2, 3), (3, 2), (2, 4), (13, 1)] {
            let f = FieldSpec::new(p, e).unwrap();
            triples_check(&f);
        }
    }

    #[test]
    fn randomized_axioms_large_field() {
        use rand::{Rng, SeedableRng};
        let f = FieldSpec::new(3, 5).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let a = Felt(rng.gen_range(0..f.q()) as u16);
            let b = Felt(rng.gen_range(0..f.q()) as u16);
            let c = Felt(rng.gen_range(0..f.q()) as u16);
            assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), Felt::ONE);
            }
        }
    }

    #[test]
    fn frobenius_is_additive() {
        for (p, e) in [(2, 2), (3, 2), (2, 4), (5, 1), (7, 1)] {
            let f = FieldSpec::new(p, e).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    assert_eq!(f.pow(f.add(a, b), p as u64), f.add(f.pow(a, p as u64), f.pow(b, p as u64)));
                }
            }
        }
    }

    #[test]
    fn gf9_uses_x2_plus_1() {
        let f = FieldSpec::new(3, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        // x * x = -1 = 2
        assert_eq!(f.mul(Felt(3), Felt(3)), Felt(2));
    }

    #[test]
    fn inverse_of_one_and_zero() {
        for q in [2u64, 3, 4, 5, 8, 9, 16, 25] {
            let f = FieldSpec::from_order(q).unwrap();
            assert_eq!(f.inv(Felt::ONE).unwrap(), Felt::ONE);
            assert!(matches!(f.inv(Felt::ZERO), Err(Error::DivisionByZero)));
        }
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(FieldSpec::new(4, 1), Err(Error::NotPrime(4))));
        assert!(matches!(FieldSpec::new(2, 17), Err(Error::TooLarge { .. })));
        assert!(FieldSpec::new(2, 16).is_ok());
        assert!(matches!(factor_prime_power(12), Err(Error::NotPrimePower(12))));
        assert_eq!(factor_prime_power(49).unwrap(), (7, 2));
        assert_eq!(factor_prime_power(17).unwrap(), (17, 1));
    }

    #[test]
    fn log_antilog_roundtrip() {
        let f = FieldSpec::new(2, 8).unwrap();
        for a in 1..f.q() {
            let a = Felt(a as u16);
            assert_eq!(f.pow(a, f.q() as u64 - 1), Felt::ONE);
        }
    }
}
