//! Arithmetic in GF(p) for odd primes, plus binomial coefficients mod p via
//! the Lucas rule.
//!
//! Two layers live here. [`PrimeField`] is a `Copy` context that the hot loops
//! of the engine use on raw `u32` residues. [`Fp`] is a self-describing value
//! that carries its modulus and checks it on every operation.

use std::fmt;

use crate::error::{Error, Result};

/// A validated odd prime modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    p: u32,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    /// Odd primes only; `p = 2` is rejected.
    pub fn new(p: u64) -> Result<Self> {
        if p == 2 || !is_prime(p) || p > u32::MAX as u64 / 2 {
            return Err(Error::InvalidPrime(p));
        }
        Ok(Self { p: p as u32 })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn reduce(self, a: u64) -> u32 {
        (a % self.p as u64) as u32
    }

    /// Residue of a signed integer.
    #[inline]
    pub fn from_i64(self, a: i64) -> u32 {
        a.rem_euclid(self.p as i64) as u32
    }

    /// Symmetric lift into `(-p/2, p/2]`.
    pub fn to_signed(self, a: u32) -> i64 {
        let a = a as i64;
        if a > self.p as i64 / 2 {
            a - self.p as i64
        } else {
            a
        }
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1u32;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(self, a: u32) -> Result<u32> {
        if a.is_multiple_of(self.p) {
            return Err(Error::DivisionByZero(self.p));
        }
        Ok(self.pow(a, (self.p - 2) as u64))
    }

    /// `C(top, bottom) mod p`, digit by digit in base p.
    pub fn binom(self, mut top: u64, mut bottom: u64) -> u32 {
        if bottom > top {
            return 0;
        }
        let p = self.p as u64;
        let mut acc = 1u32;
        while bottom > 0 || top > 0 {
            let (a, b) = (top % p, bottom % p);
            if b > a {
                return 0;
            }
            acc = self.mul(acc, small_binom(a, b, self));
            top /= p;
            bottom /= p;
        }
        acc
    }

    /// `Π_i C(top_i, bottom_i) mod p`.
    pub fn binom_multi(self, top: &[u64], bottom: &[u64]) -> u32 {
        debug_assert_eq!(top.len(), bottom.len());
        top.iter()
            .zip(bottom)
            .fold(1, |acc, (&t, &b)| self.mul(acc, self.binom(t, b)))
    }

    /// The fraction `n/d` with `|n|, d ≤ sqrt(p/2)` congruent to `a`, if one
    /// exists.
    pub fn rational_reconstruct(self, a: u32) -> Option<(i64, i64)> {
        let p = self.p as i64;
        let bound = ((p / 2) as f64).sqrt() as i64;
        // extended Euclid on (p, a), stopped once the remainder drops below the bound
        let (mut r0, mut r1) = (p, a as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 > bound {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        if t1 == 0 || t1.abs() > bound {
            return None;
        }
        let (n, d) = if t1 < 0 { (-r1, -t1) } else { (r1, t1) };
        Some((n, d))
    }

    pub fn elem(self, value: i64) -> Fp {
        Fp {
            value: self.from_i64(value),
            modulus: self.p,
        }
    }
}

/// Binomial of two digits `b ≤ a < p`, computed exactly in the field.
fn small_binom(a: u64, b: u64, f: PrimeField) -> u32 {
    let b = b.min(a - b);
    let mut num = 1u32;
    let mut den = 1u32;
    for i in 0..b {
        num = f.mul(num, f.reduce(a - i));
        den = f.mul(den, f.reduce(i + 1));
    }
    // den is a product of integers < p, hence invertible
    f.mul(num, f.inv(den).expect("digit factorial is a unit"))
}

/// A residue together with its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u32,
    modulus: u32,
}

/// The four field operations, as accepted by [`fp_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl Fp {
    pub fn new(value: i64, p: u64) -> Result<Self> {
        Ok(PrimeField::new(p)?.elem(value))
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn field(self) -> PrimeField {
        PrimeField { p: self.modulus }
    }

    fn check(self, other: Fp) -> Result<PrimeField> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        Ok(self.field())
    }

    pub fn try_add(self, other: Fp) -> Result<Fp> {
        let f = self.check(other)?;
        Ok(Fp { value: f.add(self.value, other.value), ..self })
    }

    pub fn try_sub(self, other: Fp) -> Result<Fp> {
        let f = self.check(other)?;
        Ok(Fp { value: f.sub(self.value, other.value), ..self })
    }

    pub fn try_mul(self, other: Fp) -> Result<Fp> {
        let f = self.check(other)?;
        Ok(Fp { value: f.mul(self.value, other.value), ..self })
    }

    pub fn try_div(self, other: Fp) -> Result<Fp> {
        let f = self.check(other)?;
        let inv = f.inv(other.value)?;
        Ok(Fp { value: f.mul(self.value, inv), ..self })
    }

    pub fn inv(self) -> Result<Fp> {
        Ok(Fp { value: self.field().inv(self.value)?, ..self })
    }

    pub fn neg(self) -> Fp {
        Fp { value: self.field().neg(self.value), ..self }
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

pub fn fp_arith(a: Fp, b: Fp, op: FieldOp) -> Result<Fp> {
    match op {
        FieldOp::Add => a.try_add(b),
        FieldOp::Sub => a.try_sub(b),
        FieldOp::Mul => a.try_mul(b),
        FieldOp::Div => a.try_div(b),
    }
}

/// `Π_i C(top_i, bottom_i) mod p` for multi-indices; requires `bottom ≤ top`
/// componentwise.
pub fn binom_mod(top: &[u64], bottom: &[u64], p: PrimeField) -> Result<Fp> {
    if top.len() != bottom.len() {
        return Err(Error::Precondition("multi-index lengths differ".into()));
    }
    if top.iter().zip(bottom).any(|(t, b)| b > t) {
        return Err(Error::Precondition("bottom exceeds top".into()));
    }
    Ok(Fp {
        value: p.binom_multi(top, bottom),
        modulus: p.p(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn rejects_non_odd_primes() {
        for bad in [0, 1, 2, 4, 9, 15] {
            assert_eq!(PrimeField::new(bad), Err(Error::InvalidPrime(bad)));
        }
        assert!(PrimeField::new(3).is_ok());
        assert!(PrimeField::new(7).is_ok());
    }

    #[test]
    fn small_examples() {
        let a = Fp::new(2, 3).unwrap();
        assert_eq!(fp_arith(a, a, FieldOp::Mul).unwrap().value(), 1);
        assert_eq!(a.inv().unwrap().value(), 2);
        let b = Fp::new(3, 5).unwrap();
        let c = Fp::new(4, 5).unwrap();
        assert_eq!(fp_arith(b, c, FieldOp::Add).unwrap().value(), 2);
    }

    #[test]
    fn division_by_zero_and_mismatch() {
        let a = Fp::new(1, 3).unwrap();
        let z = Fp::new(0, 3).unwrap();
        assert_eq!(fp_arith(a, z, FieldOp::Div), Err(Error::DivisionByZero(3)));
        let b = Fp::new(1, 5).unwrap();
        assert_eq!(fp_arith(a, b, FieldOp::Add), Err(Error::ModulusMismatch(3, 5)));
    }

    #[test]
    fn lucas_examples() {
        let p3 = f(3);
        assert_eq!(binom_mod(&[2], &[1], p3).unwrap().value(), 2);
        assert_eq!(binom_mod(&[3], &[1], p3).unwrap().value(), 0);
        assert_eq!(binom_mod(&[10], &[4], p3).unwrap().value(), 0);
        assert!(binom_mod(&[1], &[2], p3).is_err());
    }

    #[test]
    fn rational_reconstruction() {
        let k = f(10007);
        for (n, d) in [(1i64, 2i64), (-3, 4), (5, 1), (0, 1), (-7, 9)] {
            let a = k.mul(k.from_i64(n), k.inv(k.from_i64(d)).unwrap());
            assert_eq!(k.rational_reconstruct(a), Some((n, d)));
        }
    }

    #[test]
    fn field_axioms_exhaustive_p3() {
        let k = f(3);
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
                    assert_eq!(k.mul(k.mul(a, b), c), k.mul(a, k.mul(b, c)));
                    assert_eq!(k.add(k.add(a, b), c), k.add(a, k.add(b, c)));
                }
                assert_eq!(k.sub(k.add(a, b), b), a);
            }
            if a != 0 {
                assert_eq!(k.mul(a, k.inv(a).unwrap()), 1);
            }
        }
    }
}
