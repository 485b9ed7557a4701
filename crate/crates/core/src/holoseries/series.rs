use std::fmt;

use crate::error::{Error, Result};
use crate::exactfield::{reduce_rat_mod_p, BigRat, Field, FpElem, Poly, RatFun};

/// Power series known to order `T`: coefficients of `z^0 .. z^(T-1)`.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncSeries<F: Field> {
    coeffs: Vec<F>,
    ctx: F::Ctx,
}

impl<F: Field> TruncSeries<F> {
    pub fn new(coeffs: Vec<F>, ctx: F::Ctx) -> Self {
        TruncSeries { coeffs, ctx }
    }

    pub fn zeros(t: usize, ctx: &F::Ctx) -> Self {
        TruncSeries { coeffs: vec![F::zero(ctx); t], ctx: ctx.clone() }
    }

    pub fn one(t: usize, ctx: &F::Ctx) -> Self {
        let mut s = TruncSeries::zeros(t, ctx);
        if t > 0 {
            s.coeffs[0] = F::one(ctx);
        }
        s
    }

    pub fn from_poly(p: &Poly<F>, t: usize) -> Self {
        let ctx = p.ctx().clone();
        TruncSeries { coeffs: (0..t).map(|i| p.coeff(i)).collect(), ctx }
    }

    /// Expansion at zero; fails when the denominator vanishes there.
    pub fn from_ratfun(r: &RatFun<F>, t: usize) -> Result<Self> {
        if !r.is_series_at_zero() {
            return Err(Error::NotSeriesExpandable);
        }
        let num = TruncSeries::from_poly(r.num(), t);
        let den = TruncSeries::from_poly(r.den(), t);
        Ok(num.div(&den).expect("unit constant term"))
    }

    /// Truncation order `T`.
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn coeff(&self, i: usize) -> &F {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn truncate(&self, t: usize) -> Self {
        TruncSeries { coeffs: self.coeffs.iter().take(t).cloned().collect(), ctx: self.ctx.clone() }
    }

    /// The truncation as a polynomial.
    pub fn to_poly(&self) -> Poly<F> {
        Poly::new(self.coeffs.clone(), self.ctx.clone())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a.add(b)).collect();
        TruncSeries { coeffs, ctx: self.ctx.clone() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a.sub(b)).collect();
        TruncSeries { coeffs, ctx: self.ctx.clone() }
    }

    pub fn neg(&self) -> Self {
        TruncSeries { coeffs: self.coeffs.iter().map(|c| c.neg()).collect(), ctx: self.ctx.clone() }
    }

    pub fn scale(&self, c: &F) -> Self {
        TruncSeries { coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(), ctx: self.ctx.clone() }
    }

    /// Product, truncated to the smaller order.
    pub fn mul(&self, rhs: &Self) -> Self {
        let t = self.order().min(rhs.order());
        let mut out = vec![F::zero(&self.ctx); t];
        for (i, a) in self.coeffs.iter().take(t).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(t - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        TruncSeries { coeffs: out, ctx: self.ctx.clone() }
    }

    /// Product with a polynomial, keeping the order.
    pub fn mul_poly(&self, p: &Poly<F>) -> Self {
        let t = self.order();
        let mut out = vec![F::zero(&self.ctx); t];
        for (i, a) in p.coeffs().iter().enumerate().take(t) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in self.coeffs.iter().take(t - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        TruncSeries { coeffs: out, ctx: self.ctx.clone() }
    }

    /// Multiplicative inverse; `None` when the constant term vanishes.
    pub fn inv(&self) -> Option<Self> {
        let t = self.order();
        let c0inv = self.coeffs.first()?.inv()?;
        let mut out: Vec<F> = Vec::with_capacity(t);
        out.push(c0inv.clone());
        for n in 1..t {
            let mut acc = F::zero(&self.ctx);
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc = acc.add(&self.coeffs[k].mul(&out[n - k]));
                }
            }
            out.push(acc.mul(&c0inv).neg());
        }
        Some(TruncSeries { coeffs: out, ctx: self.ctx.clone() })
    }

    pub fn div(&self, rhs: &Self) -> Option<Self> {
        Some(self.mul(&rhs.inv()?))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = TruncSeries::one(self.order(), &self.ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `δ = z·d/dz`: coefficient `n` becomes `n·a(n)`.
    pub fn delta(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c.mul(&F::from_i64(n as i64, &self.ctx)))
            .collect();
        TruncSeries { coeffs, ctx: self.ctx.clone() }
    }

    /// `d/dz`; the order drops by one.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, c)| c.mul(&F::from_i64(n as i64, &self.ctx)))
            .collect();
        TruncSeries { coeffs, ctx: self.ctx.clone() }
    }

    /// Section operator: coefficient `n` of the result is coefficient
    /// `np + r` of the input; the order becomes `ceil((T - r)/p)`.
    pub fn cartier(&self, p: u64, r: usize) -> Self {
        let p = p as usize;
        assert!(r < p);
        let coeffs = self.coeffs.iter().skip(r).step_by(p).cloned().collect();
        TruncSeries { coeffs, ctx: self.ctx.clone() }
    }

    /// Substitution `z -> z^(p^k)` keeping the order `T`.
    pub fn compose_zpk(&self, p: u64, k: u32) -> Self {
        let q = (p as usize).pow(k);
        let mut out = vec![F::zero(&self.ctx); self.order()];
        for (i, c) in self.coeffs.iter().enumerate() {
            match i.checked_mul(q) {
                Some(j) if j < out.len() => out[j] = c.clone(),
                _ => break,
            }
        }
        TruncSeries { coeffs: out, ctx: self.ctx.clone() }
    }

    /// Substitution `z -> z^q` to order `t` (the input must be long enough).
    pub fn substitute_power(&self, q: usize, t: usize) -> Self {
        let mut out = vec![F::zero(&self.ctx); t];
        for (i, c) in self.coeffs.iter().enumerate() {
            let j = i * q;
            if j >= t {
                break;
            }
            out[j] = c.clone();
        }
        TruncSeries { coeffs: out, ctx: self.ctx.clone() }
    }

    /// Index of the first differing coefficient within the common order.
    pub fn first_mismatch(&self, other: &Self) -> Option<usize> {
        self.coeffs.iter().zip(&other.coeffs).position(|(a, b)| a != b)
    }

    /// Equality of the first `min(T)` coefficients.
    pub fn equal_to_order(&self, other: &Self) -> bool {
        self.first_mismatch(other).is_none()
    }

    pub fn map<G: Field>(&self, ctx: &G::Ctx, f: impl Fn(&F) -> G) -> TruncSeries<G> {
        TruncSeries { coeffs: self.coeffs.iter().map(f).collect(), ctx: ctx.clone() }
    }
}

impl<F: Field> fmt::Debug for TruncSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: Vec<String> = self.coeffs.iter().take(12).map(|c| c.to_string()).collect();
        write!(f, "[{}{}] + O(z^{})", shown.join(", "), if self.order() > 12 { ", ..." } else { "" }, self.order())
    }
}

/// Coefficientwise reduction `Z_(p) -> F_p`.
pub fn reduce_series_mod_p(f: &TruncSeries<BigRat>, p: u64) -> Result<TruncSeries<FpElem>> {
    let mut out = Vec::with_capacity(f.order());
    for (i, c) in f.coeffs().iter().enumerate() {
        out.push(reduce_rat_mod_p(c, p).map_err(|_| Error::NotPLocal { p, index: Some(i) })?);
    }
    Ok(TruncSeries::new(out, p))
}

pub fn cartier<F: Field>(f: &TruncSeries<F>, p: u64, r: usize) -> TruncSeries<F> {
    f.cartier(p, r)
}

pub fn compose_zpk<F: Field>(f: &TruncSeries<F>, p: u64, k: u32) -> TruncSeries<F> {
    f.compose_zpk(p, k)
}

pub fn delta_series<F: Field>(f: &TruncSeries<F>) -> TruncSeries<F> {
    f.delta()
}

pub fn series_q(terms: &[i64]) -> TruncSeries<BigRat> {
    TruncSeries::new(terms.iter().map(|&n| BigRat::from_i64(n, &())).collect(), ())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(terms: &[i64], p: u64) -> TruncSeries<FpElem> {
        TruncSeries::new(terms.iter().map(|&n| FpElem::from_i64(n, &p)).collect(), p)
    }

    #[test]
    fn cartier_examples() {
        let f = series_q(&[1, 2, 6, 20, 70, 252, 924]);
        assert_eq!(f.cartier(3, 0), series_q(&[1, 20, 924]));
        let g = series_q(&[1, 2, 6, 20, 70, 252, 924, 3432]);
        assert_eq!(g.cartier(3, 1), series_q(&[2, 70, 3432]));
        // ceil((8 - 1)/3) = 3, ceil((8 - 2)/3) = 2
        assert_eq!(g.cartier(3, 2).order(), 2);
    }

    #[test]
    fn compose_examples() {
        let f = series_q(&[1, 1, 0, 0, 0, 0]);
        assert_eq!(f.compose_zpk(3, 1), series_q(&[1, 0, 0, 1, 0, 0]));
        assert_eq!(f.compose_zpk(3, 0), f);
        let h = series_q(&[5, -1, 2, 7]);
        assert_eq!(h.compose_zpk(3, 1).cartier(3, 0).truncate(2), h.truncate(2));
    }

    #[test]
    fn delta_examples() {
        assert_eq!(series_q(&[1, 1, 1]).delta(), series_q(&[0, 1, 2]));
        assert!(series_q(&[7, 0, 0]).delta().is_zero());
    }

    #[test]
    fn reduction() {
        let f = series_q(&[1, 4, 36, 400, 4900]);
        assert_eq!(reduce_series_mod_p(&f, 3).unwrap(), fp(&[1, 1, 0, 1, 1], 3));
        assert!(reduce_series_mod_p(&series_q(&[0, 0]), 3).unwrap().is_zero());
        let bad = TruncSeries::new(vec![BigRat::from_i64(1, &()), BigRat::new(1.into(), 3.into())], ());
        assert_eq!(reduce_series_mod_p(&bad, 3), Err(Error::NotPLocal { p: 3, index: Some(1) }));
    }

    #[test]
    fn inverse_and_ratfun() {
        // 1/(1 - z) = 1 + z + z^2 + ...
        let r = RatFun::new(Poly::<BigRat>::one(&()), Poly::from_ints(&[1, -1], &())).unwrap();
        assert_eq!(TruncSeries::from_ratfun(&r, 4).unwrap(), series_q(&[1, 1, 1, 1]));
        let pole = RatFun::new(Poly::<BigRat>::one(&()), Poly::from_ints(&[0, 1], &())).unwrap();
        assert_eq!(TruncSeries::from_ratfun(&pole, 4), Err(Error::NotSeriesExpandable));
    }
}
