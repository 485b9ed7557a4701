use std::fmt;

use super::{Field, Poly};
use crate::error::Result;

/// Element of the prime field of order `modulus`.
///
/// The modulus travels with every element. Moduli up to 2^62 are supported;
/// products are formed in 128-bit arithmetic.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpElem {
    residue: u64,
    modulus: u64,
}

impl FpElem {
    pub fn new(value: u64, modulus: u64) -> Self {
        debug_assert!(modulus >= 2);
        FpElem { residue: value % modulus, modulus }
    }

    pub fn from_i128(value: i128, modulus: u64) -> Self {
        let m = modulus as i128;
        let r = value.rem_euclid(m);
        FpElem { residue: r as u64, modulus }
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Representative in `(-p/2, p/2]`, handy for printing.
    pub fn symmetric(&self) -> i64 {
        if self.residue > self.modulus / 2 {
            self.residue as i64 - self.modulus as i64
        } else {
            self.residue as i64
        }
    }
}

impl fmt::Debug for FpElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.residue, self.modulus)
    }
}

impl fmt::Display for FpElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

impl Field for FpElem {
    type Ctx = u64;

    fn zero(ctx: &u64) -> Self {
        FpElem { residue: 0, modulus: *ctx }
    }

    fn one(ctx: &u64) -> Self {
        FpElem { residue: 1 % *ctx, modulus: *ctx }
    }

    fn from_i64(n: i64, ctx: &u64) -> Self {
        FpElem::from_i128(n as i128, *ctx)
    }

    fn ctx(&self) -> u64 {
        self.modulus
    }

    fn characteristic(ctx: &u64) -> u64 {
        *ctx
    }

    fn is_zero(&self) -> bool {
        self.residue == 0
    }

    fn add(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let s = self.residue as u128 + rhs.residue as u128;
        FpElem { residue: (s % self.modulus as u128) as u64, modulus: self.modulus }
    }

    fn sub(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let r = if self.residue >= rhs.residue {
            self.residue - rhs.residue
        } else {
            self.modulus - (rhs.residue - self.residue)
        };
        FpElem { residue: r, modulus: self.modulus }
    }

    fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let prod = self.residue as u128 * rhs.residue as u128;
        FpElem { residue: (prod % self.modulus as u128) as u64, modulus: self.modulus }
    }

    fn neg(&self) -> Self {
        if self.residue == 0 {
            *self
        } else {
            FpElem { residue: self.modulus - self.residue, modulus: self.modulus }
        }
    }

    fn inv(&self) -> Option<Self> {
        if self.residue == 0 {
            return None;
        }
        // extended Euclid on (residue, modulus)
        let (mut old_r, mut r) = (self.residue as i128, self.modulus as i128);
        let (mut old_s, mut s) = (1i128, 0i128);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_s, s) = (s, old_s - q * s);
        }
        if old_r != 1 {
            return None;
        }
        Some(FpElem::from_i128(old_s, self.modulus))
    }

    fn canonical_unit(coeffs: &[Self], ctx: &u64) -> Self {
        coeffs
            .iter()
            .find(|c| !c.is_zero())
            .copied()
            .unwrap_or_else(|| FpElem::one(ctx))
    }

    fn factor_poly(a: &Poly<Self>) -> Result<Vec<(Poly<Self>, usize)>> {
        Ok(super::factor_over_fp(a))
    }
}

/// Deterministic primality test for 64-bit integers (Miller-Rabin with a
/// witness set that is exact below 2^64).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % sp == 0 {
            return n == sp;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&n| is_prime(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        for p in [2u64, 3, 5, 7, 13, 1_000_000_007] {
            for v in 1..p.min(50) {
                let x = FpElem::new(v, p);
                assert!(x.mul(&x.inv().unwrap()).is_one());
            }
        }
        assert!(FpElem::new(0, 7).inv().is_none());
    }

    #[test]
    fn negative_inputs_wrap() {
        assert_eq!(FpElem::from_i64(-1, &5).residue(), 4);
        assert_eq!(FpElem::from_i64(-10, &5).residue(), 0);
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = primes_up_to(30);
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime(2_305_843_009_213_693_951));
        assert!(!is_prime(3_215_031_751));
    }
}
