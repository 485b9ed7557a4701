use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{BigRat, Field};

/// Dense univariate polynomial, coefficients lowest degree first.
///
/// The coefficient vector never has a trailing zero, so the zero
/// polynomial is the empty vector and structural equality is equality.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly<F: Field> {
    coeffs: Vec<F>,
    ctx: F::Ctx,
}

impl<F: Field> Poly<F> {
    pub fn new(mut coeffs: Vec<F>, ctx: F::Ctx) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs, ctx }
    }

    pub fn from_ints(ints: &[i64], ctx: &F::Ctx) -> Self {
        Poly::new(ints.iter().map(|&n| F::from_i64(n, ctx)).collect(), ctx.clone())
    }

    pub fn zero(ctx: &F::Ctx) -> Self {
        Poly { coeffs: Vec::new(), ctx: ctx.clone() }
    }

    pub fn one(ctx: &F::Ctx) -> Self {
        Poly::constant(F::one(ctx), ctx)
    }

    pub fn constant(c: F, ctx: &F::Ctx) -> Self {
        Poly::new(vec![c], ctx.clone())
    }

    /// `c·z^k`.
    pub fn monomial(c: F, k: usize, ctx: &F::Ctx) -> Self {
        let mut v = vec![F::zero(ctx); k + 1];
        v[k] = c;
        Poly::new(v, ctx.clone())
    }

    /// The variable `z`.
    pub fn z(ctx: &F::Ctx) -> Self {
        Poly::monomial(F::one(ctx), 1, ctx)
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

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as degree 0.
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lead(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(|| F::zero(&self.ctx))
    }

    /// Multiplicity of `z` as a factor (0 for the zero polynomial).
    pub fn z_valuation(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero(&self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn scale(&self, c: &F) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.mul(c)).collect(), self.ctx.clone())
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![F::zero(&self.ctx); k];
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v, ctx: self.ctx.clone() }
    }

    /// Drops the factor `z^k` (the low coefficients must vanish).
    pub fn unshift(&self, k: usize) -> Self {
        Poly::new(self.coeffs.iter().skip(k).cloned().collect(), self.ctx.clone())
    }

    pub fn truncate(&self, n: usize) -> Self {
        Poly::new(self.coeffs.iter().take(n).cloned().collect(), self.ctx.clone())
    }

    pub fn derivative(&self) -> Self {
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&F::from_i64(i as i64, &self.ctx)))
            .collect();
        Poly::new(v, self.ctx.clone())
    }

    /// Substitution `z -> z^k`.
    pub fn substitute_power(&self, k: usize) -> Self {
        assert!(k >= 1);
        if self.is_zero() || k == 1 {
            return self.clone();
        }
        let mut v = vec![F::zero(&self.ctx); self.deg() * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * k] = c.clone();
        }
        Poly::new(v, self.ctx.clone())
    }

    /// `z^n·P(1/z)`; requires `n >= deg P`.
    pub fn reverse(&self, n: usize) -> Self {
        assert!(self.is_zero() || n >= self.deg());
        let mut v = vec![F::zero(&self.ctx); n + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[n - i] = c.clone();
        }
        Poly::new(v, self.ctx.clone())
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv().expect("nonzero lead")),
        }
    }

    /// Canonical associate: divides by [`Field::canonical_unit`].
    pub fn canonical(&self) -> Self {
        let u = F::canonical_unit(&self.coeffs, &self.ctx);
        self.scale(&u.inv().expect("canonical unit is nonzero"))
    }

    /// Euclidean division; `None` when dividing by zero.
    pub fn div_rem(&self, d: &Self) -> Option<(Self, Self)> {
        let dl = d.lead()?.inv()?;
        let dd = d.deg();
        if self.is_zero() || self.deg() < dd {
            return Some((Poly::zero(&self.ctx), self.clone()));
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![F::zero(&self.ctx); self.deg() - dd + 1];
        for i in (0..q.len()).rev() {
            let c = r[i + dd].mul(&dl);
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i + j] = r[i + j].sub(&c.mul(dc));
            }
            q[i] = c;
        }
        r.truncate(dd);
        Some((Poly::new(q, self.ctx.clone()), Poly::new(r, self.ctx.clone())))
    }

    pub fn rem(&self, d: &Self) -> Option<Self> {
        self.div_rem(d).map(|(_, r)| r)
    }

    /// Quotient when `d` divides `self` exactly.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d)?;
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &Self) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.rem(self).map_or(false, |r| r.is_zero())
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        F::poly_gcd(self, other)
    }

    /// Monic lcm; zero if either argument is zero.
    pub fn lcm(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.ctx);
        }
        let g = self.gcd(other);
        (&self.exact_div(&g).expect("gcd divides") * other).monic()
    }

    /// Multiplicity of the nonconstant polynomial `q` as a factor of `self`.
    pub fn multiplicity(&self, q: &Self) -> usize {
        assert!(!q.is_constant());
        let mut m = 0;
        let mut cur = self.clone();
        while !cur.is_zero() {
            match cur.exact_div(q) {
                Some(next) => {
                    cur = next;
                    m += 1;
                }
                None => break,
            }
        }
        m
    }

    pub fn map<G: Field>(&self, ctx: &G::Ctx, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(self.coeffs.iter().map(f).collect(), ctx.clone())
    }

    /// Resultant by the Euclidean recursion.
    pub fn resultant(&self, other: &Self) -> F {
        let ctx = self.ctx.clone();
        if self.is_zero() || other.is_zero() {
            return F::zero(&ctx);
        }
        let mut a = self.clone();
        let mut b = other.clone();
        let mut acc = F::one(&ctx);
        loop {
            let (da, db) = (a.deg(), b.deg());
            if db == 0 {
                return acc.mul(&b.coeffs[0].pow(da as u64));
            }
            let r = a.rem(&b).expect("nonzero divisor");
            if r.is_zero() {
                return F::zero(&ctx);
            }
            let dr = r.deg();
            if (da * db) % 2 == 1 {
                acc = acc.neg();
            }
            acc = acc.mul(&b.lead().unwrap().pow((da - dr) as u64));
            a = b;
            b = r;
        }
    }

    /// Discriminant `(-1)^(n(n-1)/2)·Res(a, a')/lc(a)`.
    pub fn discriminant(&self) -> F {
        let n = self.deg();
        if n < 1 {
            return F::one(&self.ctx);
        }
        let r = self.resultant(&self.derivative());
        let r = r.div(self.lead().unwrap()).unwrap();
        if (n * (n - 1) / 2) % 2 == 1 {
            r.neg()
        } else {
            r
        }
    }

    /// Renders with the given variable name, ascending powers.
    pub fn display_with(&self, var: &str) -> String {
        self.render(var, false)
    }

    /// Renders with the given variable name, descending powers.
    pub fn display_desc(&self, var: &str) -> String {
        self.render(var, true)
    }

    fn render(&self, var: &str, descending: bool) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        let mut order: Vec<usize> = (0..self.coeffs.len()).collect();
        if descending {
            order.reverse();
        }
        for i in order {
            let c = &self.coeffs[i];
            if c.is_zero() {
                continue;
            }
            let s = c.to_string();
            let (neg, mag) = match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            if i == 0 {
                out.push_str(&mag);
            } else if mag == "1" {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("z"))
    }
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

impl<'a, F: Field> Add<&'a Poly<F>> for &'a Poly<F> {
    type Output = Poly<F>;
    fn add(self, rhs: &Poly<F>) -> Poly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let v = (0..n)
            .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Poly::new(v, self.ctx.clone())
    }
}

impl<'a, F: Field> Sub<&'a Poly<F>> for &'a Poly<F> {
    type Output = Poly<F>;
    fn sub(self, rhs: &Poly<F>) -> Poly<F> {
        self + &(-rhs)
    }
}

impl<'a, F: Field> Neg for &'a Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        Poly { coeffs: self.coeffs.iter().map(|c| c.neg()).collect(), ctx: self.ctx.clone() }
    }
}

impl<'a, F: Field> Mul<&'a Poly<F>> for &'a Poly<F> {
    type Output = Poly<F>;
    fn mul(self, rhs: &Poly<F>) -> Poly<F> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(&self.ctx);
        }
        let mut v = vec![F::zero(&self.ctx); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].add(&a.mul(b));
            }
        }
        Poly::new(v, self.ctx.clone())
    }
}

/// Plain Euclid, result monic.
pub(crate) fn euclid_gcd<F: Field>(a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_zero() {
        let r = a.rem(&b).expect("nonzero divisor");
        a = b;
        b = r;
    }
    a.monic()
}

/// Euclid over the rationals with every remainder replaced by its
/// primitive integer associate.
pub(crate) fn primitive_gcd_q(a: &Poly<BigRat>, b: &Poly<BigRat>) -> Poly<BigRat> {
    let mut a = a.canonical();
    let mut b = b.canonical();
    while !b.is_zero() {
        let r = a.rem(&b).expect("nonzero divisor");
        a = b;
        b = r.canonical();
    }
    a.monic()
}
