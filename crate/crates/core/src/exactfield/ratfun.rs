use std::fmt;

use super::{Field, Poly};
use crate::error::{Error, Result};

/// Reduced rational function `num/den` with a monic denominator.
///
/// Two equal rational functions have identical representations.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFun<F: Field> {
    num: Poly<F>,
    den: Poly<F>,
    height: usize,
}

impl<F: Field> RatFun<F> {
    pub fn new(num: Poly<F>, den: Poly<F>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            let ctx = den.ctx().clone();
            return Ok(RatFun { num, den: Poly::one(&ctx), height: 0 });
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).expect("gcd divides"), den.exact_div(&g).expect("gcd divides"))
        };
        let l = den.lead().unwrap().inv().unwrap();
        num = num.scale(&l);
        den = den.scale(&l);
        let height = num.deg().max(den.deg());
        Ok(RatFun { num, den, height })
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        let ctx = p.ctx().clone();
        let height = p.deg();
        RatFun { num: p, den: Poly::one(&ctx), height }
    }

    pub fn constant(c: F, ctx: &F::Ctx) -> Self {
        RatFun::from_poly(Poly::constant(c, ctx))
    }

    pub fn zero(ctx: &F::Ctx) -> Self {
        RatFun::from_poly(Poly::zero(ctx))
    }

    pub fn one(ctx: &F::Ctx) -> Self {
        RatFun::from_poly(Poly::one(ctx))
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    /// `max(deg num, deg den)`.
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn ctx(&self) -> &F::Ctx {
        self.den.ctx()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// True when the function has a power-series expansion at zero.
    pub fn is_series_at_zero(&self) -> bool {
        !self.den.coeff(0).is_zero()
    }

    /// Order of vanishing at zero (negative for a pole); `None` for zero.
    pub fn z_order(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(self.num.z_valuation() as i64 - self.den.z_valuation() as i64)
    }

    /// Degree at infinity, `deg num - deg den`; `None` for zero.
    pub fn degree_diff(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(self.num.deg() as i64 - self.den.deg() as i64)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        if self.den == rhs.den {
            return RatFun::new(&self.num + &rhs.num, self.den.clone()).expect("nonzero den");
        }
        let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFun::new(n, &self.den * &rhs.den).expect("nonzero den")
    }

    pub fn neg(&self) -> Self {
        RatFun { num: -&self.num, den: self.den.clone(), height: self.height }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        // cross-cancel first to keep intermediate degrees small
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let n1 = self.num.exact_div(&g1).unwrap_or_else(|| self.num.clone());
        let d2 = rhs.den.exact_div(&g1).unwrap_or_else(|| rhs.den.clone());
        let n2 = rhs.num.exact_div(&g2).unwrap_or_else(|| rhs.num.clone());
        let d1 = self.den.exact_div(&g2).unwrap_or_else(|| self.den.clone());
        RatFun::new(&n1 * &n2, &d1 * &d2).expect("nonzero den")
    }

    pub fn inv(&self) -> Result<Self> {
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inv()?))
    }

    pub fn scale(&self, c: &F) -> Self {
        RatFun::new(self.num.scale(c), self.den.clone()).expect("nonzero den")
    }

    pub fn pow(&self, e: u64) -> Self {
        // num and den stay coprime under powers
        let num = self.num.pow(e);
        let den = self.den.pow(e);
        let height = num.deg().max(den.deg());
        RatFun { num, den, height }
    }

    /// Substitution `z -> z^k`; coprimality is preserved.
    pub fn substitute_power(&self, k: usize) -> Self {
        let num = self.num.substitute_power(k);
        let den = self.den.substitute_power(k);
        let height = num.deg().max(den.deg());
        RatFun { num, den, height }
    }

    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RatFun::new(n, &self.den * &self.den).expect("nonzero den")
    }

    /// Multiplicity of the irreducible `q` in the denominator.
    pub fn pole_order(&self, q: &Poly<F>) -> usize {
        self.den.multiplicity(q)
    }

    pub fn eval(&self, x: &F) -> Option<F> {
        self.num.eval(x).div(&self.den.eval(x))
    }

    pub fn map<G: Field>(&self, ctx: &G::Ctx, f: impl Fn(&F) -> G) -> Result<RatFun<G>> {
        RatFun::new(self.num.map(ctx, &f), self.den.map(ctx, &f))
    }
}

impl<F: Field> fmt::Display for RatFun<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl<F: Field> fmt::Debug for RatFun<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFun({}; h={})", self, self.height)
    }
}
