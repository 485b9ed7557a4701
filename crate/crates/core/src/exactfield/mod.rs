//! Exact arithmetic substrate: rationals, prime fields, dense polynomials
//! and reduced rational functions.

mod factor;
mod fp;
mod linalg;
mod poly;
mod rational;
mod ratfun;

use std::fmt;

use crate::error::Result;

pub use factor::{factor_over_fp, factor_over_q, squarefree_fp, squarefree_part, squarefree_q};
pub use fp::{is_prime, primes_up_to, FpElem};
pub use linalg::nullspace;
pub use poly::Poly;
pub use rational::{parse_rat, reduce_rat_mod_p, BigRat};
pub(crate) use rational::bigint_mod_p;
pub use ratfun::RatFun;

/// A commutative field whose elements carry enough context to build
/// zeros and ones of the same field.
///
/// `Ctx` is `()` for the rationals and the modulus for prime fields, so a
/// polynomial or series can always produce the neutral elements it needs
/// even when it has no coefficients.
pub trait Field: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    type Ctx: Clone + PartialEq + Eq + fmt::Debug + Send + Sync;

    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_i64(n: i64, ctx: &Self::Ctx) -> Self;
    fn ctx(&self) -> Self::Ctx;
    /// Characteristic of the field (0 for the rationals).
    fn characteristic(ctx: &Self::Ctx) -> u64;

    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == Self::one(&self.ctx())
    }

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul(&r))
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ctx());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// The unit by which a coefficient vector is divided to reach its
    /// canonical associate. Over the rationals this yields a primitive
    /// integer vector whose lowest-index nonzero entry is positive; over a
    /// prime field it makes that entry equal to one.
    fn canonical_unit(coeffs: &[Self], ctx: &Self::Ctx) -> Self;

    /// Monic gcd of two polynomials. The default is plain Euclid.
    fn poly_gcd(a: &Poly<Self>, b: &Poly<Self>) -> Poly<Self> {
        poly::euclid_gcd(a, b)
    }

    /// Monic irreducible factors with multiplicities.
    fn factor_poly(a: &Poly<Self>) -> Result<Vec<(Poly<Self>, usize)>>;
}
