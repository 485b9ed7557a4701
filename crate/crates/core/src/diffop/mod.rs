//! Linear differential operators with rational-function coefficients in
//! the `d/dz` or `δ = z·d/dz` basis.

mod analysis;
mod json;
mod modp;
mod recurrence;

use std::fmt;

use crate::error::{Error, Result};
use crate::exactfield::{BigRat, Field, Poly, RatFun};

pub use analysis::{
    good_primes, indicial_at_infinity, indicial_at_zero, infinity_transform, is_fuchsian, is_mom,
    singularities, InfinityKind, SingularPoint, SingularityReport,
};
pub use json::{operator_from_json, operator_from_value, operator_to_json};
pub use modp::{p_curvature, p_curvature_of, reduce_op_mod_p, PCurvature};
pub use recurrence::{recurrence_from, Recurrence};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    /// `d/dz`
    D,
    /// `δ = z·d/dz`
    Delta,
}

/// `Σ coeffs[i]·∂^(n-i)` where `∂` is the basis derivation; `coeffs[0]`
/// is the leading coefficient.
#[derive(Clone, PartialEq, Eq)]
pub struct DiffOp<F: Field> {
    basis: Basis,
    coeffs: Vec<RatFun<F>>,
}

impl<F: Field> DiffOp<F> {
    pub fn new(basis: Basis, coeffs: Vec<RatFun<F>>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidInput("operator order must be positive".into()));
        }
        if coeffs[0].is_zero() {
            return Err(Error::InvalidInput("leading coefficient is zero".into()));
        }
        Ok(DiffOp { basis, coeffs })
    }

    pub fn from_polys(basis: Basis, polys: Vec<Poly<F>>) -> Result<Self> {
        DiffOp::new(basis, polys.into_iter().map(RatFun::from_poly).collect())
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients, leading first.
    pub fn coeffs(&self) -> &[RatFun<F>] {
        &self.coeffs
    }

    /// Coefficient of `∂^k`.
    pub fn coeff_of(&self, k: usize) -> &RatFun<F> {
        &self.coeffs[self.order() - k]
    }

    pub fn ctx(&self) -> &F::Ctx {
        self.coeffs[0].ctx()
    }

    /// Multiplies through by the lcm of the denominators and divides by the
    /// monic gcd of the numerators, leaving coprime polynomial coefficients.
    /// The overall scalar is left alone.
    pub fn clear_denominators(&self) -> Self {
        let ctx = self.ctx().clone();
        let l = self.coeffs.iter().fold(Poly::one(&ctx), |acc, c| acc.lcm(c.den()));
        let nums: Vec<Poly<F>> = self
            .coeffs
            .iter()
            .map(|c| &c.num().clone() * &l.exact_div(c.den()).expect("lcm is a multiple"))
            .collect();
        let g = nums.iter().fold(Poly::zero(&ctx), |acc, n| acc.gcd(n));
        let polys = nums.iter().map(|n| n.exact_div(&g).expect("gcd divides")).collect();
        DiffOp::from_polys(self.basis, polys).expect("leading coefficient stays nonzero")
    }

    /// Canonical form: coprime polynomial coefficients scaled so that the
    /// concatenated coefficient list (leading coefficient first, lowest
    /// degree first) is canonical for the field. Over the rationals this
    /// means primitive integer coefficients with the lowest nonzero term of
    /// the leading coefficient positive.
    pub fn normalize(&self) -> Self {
        let cleared = self.clear_denominators();
        let flat: Vec<F> = cleared.coeffs.iter().flat_map(|c| c.num().coeffs().to_vec()).collect();
        let u = F::canonical_unit(&flat, self.ctx()).inv().expect("unit");
        let coeffs = cleared.coeffs.iter().map(|c| c.scale(&u)).collect();
        DiffOp { basis: self.basis, coeffs }
    }

    /// Polynomial coefficients of the normal form, leading first.
    pub fn poly_coeffs(&self) -> Vec<Poly<F>> {
        self.normalize().coeffs.iter().map(|c| c.num().clone()).collect()
    }

    /// Coefficients divided by the leading one: `a_1, ..., a_n`.
    pub fn monic_coeffs(&self) -> Vec<RatFun<F>> {
        let lead = self.coeffs[0].clone();
        self.coeffs[1..].iter().map(|c| c.div(&lead).expect("nonzero leading")).collect()
    }

    pub fn same_up_to_scalar(&self, other: &Self) -> bool {
        self.basis == other.basis && self.normalize() == other.normalize()
    }

    /// Rewrites `z^n·L` in the δ basis and normalizes; δ-basis input is
    /// returned unchanged.
    pub fn to_delta(&self) -> Self {
        if self.basis == Basis::Delta {
            return self.clone();
        }
        let ctx = self.ctx().clone();
        let n = self.order();
        let s = stirling_first::<F>(n, &ctx);
        let mut out = vec![RatFun::zero(&ctx); n + 1];
        for k in 0..=n {
            // a_k z^(n-k) · z^k d^k with z^k d^k = Σ_j s(k, j) δ^j
            let term = self.coeff_of(k).mul(&RatFun::from_poly(Poly::monomial(F::one(&ctx), n - k, &ctx)));
            for j in 0..=k {
                if s[k][j].is_zero() {
                    continue;
                }
                out[n - j] = out[n - j].add(&term.scale(&s[k][j]));
            }
        }
        DiffOp { basis: Basis::Delta, coeffs: out }.normalize()
    }

    /// Rewrites `z^(-n)·L_δ` in the `d/dz` basis and normalizes; D-basis
    /// input is returned unchanged.
    pub fn to_d(&self) -> Self {
        if self.basis == Basis::D {
            return self.clone();
        }
        let ctx = self.ctx().clone();
        let n = self.order();
        let s = stirling_second::<F>(n, &ctx);
        let mut out = vec![RatFun::zero(&ctx); n + 1];
        for j in 0..=n {
            // δ^j = Σ_k S(j, k) z^k d^k
            let b = self.coeff_of(j);
            for k in 0..=j {
                if s[j][k].is_zero() {
                    continue;
                }
                let zk = RatFun::from_poly(Poly::monomial(s[j][k].clone(), k, &ctx));
                out[n - k] = out[n - k].add(&b.mul(&zk));
            }
        }
        DiffOp { basis: Basis::D, coeffs: out }.normalize()
    }

    pub fn map<G: Field>(&self, ctx: &G::Ctx, f: impl Fn(&F) -> G) -> Result<DiffOp<G>> {
        let coeffs = self.coeffs.iter().map(|c| c.map(ctx, &f)).collect::<Result<Vec<_>>>()?;
        DiffOp::new(self.basis, coeffs)
    }
}

impl<F: Field> fmt::Display for DiffOp<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = match self.basis {
            Basis::D => "d",
            Basis::Delta => "δ",
        };
        let n = self.order();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let k = n - i;
            let der = match k {
                0 => String::new(),
                1 => sym.to_string(),
                _ => format!("{sym}^{k}"),
            };
            if k == 0 {
                write!(f, "({c})")?;
            } else if c.is_polynomial() && c.num().is_one() {
                f.write_str(&der)?;
            } else {
                write!(f, "({c})*{der}")?;
            }
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for DiffOp<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffOp[{self}]")
    }
}

/// Signed Stirling numbers of the first kind `s(k, j)`, `k, j <= n`.
fn stirling_first<F: Field>(n: usize, ctx: &F::Ctx) -> Vec<Vec<F>> {
    let mut s = vec![vec![F::zero(ctx); n + 1]; n + 1];
    s[0][0] = F::one(ctx);
    for k in 1..=n {
        let km1 = F::from_i64((k - 1) as i64, ctx);
        for j in 1..=k {
            s[k][j] = s[k - 1][j - 1].sub(&km1.mul(&s[k - 1][j]));
        }
    }
    s
}

/// Stirling numbers of the second kind `S(j, k)`, `j, k <= n`.
fn stirling_second<F: Field>(n: usize, ctx: &F::Ctx) -> Vec<Vec<F>> {
    let mut s = vec![vec![F::zero(ctx); n + 1]; n + 1];
    s[0][0] = F::one(ctx);
    for j in 1..=n {
        for k in 1..=j {
            s[j][k] = s[j - 1][k - 1].add(&F::from_i64(k as i64, ctx).mul(&s[j - 1][k]));
        }
    }
    s
}

/// Builds a polynomial-coefficient operator over the rationals from
/// integer coefficient lists, leading coefficient first.
pub fn op_from_ints(basis: Basis, coeffs: &[&[i64]]) -> DiffOp<BigRat> {
    DiffOp::from_polys(basis, coeffs.iter().map(|c| Poly::from_ints(c, &())).collect())
        .expect("valid operator")
}

/// `z(1-16z)d² + (1-16z)d + 4`.
pub fn op_2f1() -> DiffOp<BigRat> {
    op_from_ints(Basis::D, &[&[0, 1, -16], &[1, -16], &[4]])
}

/// `z²(1-34z+z²)d³ + z(3-153z+6z²)d² + (1-112z+7z²)d + (z-5)`.
pub fn op_apery() -> DiffOp<BigRat> {
    op_from_ints(Basis::D, &[&[0, 0, 1, -34, 1], &[0, 3, -153, 6], &[1, -112, 7], &[-5, 1]])
}

/// `δ^r - 4^r z(δ - 1/2)(δ + 1/2)^(r-1)`.
pub fn op_lr(r: usize) -> DiffOp<BigRat> {
    assert!(r >= 1);
    let half = BigRat::new(1.into(), 2.into());
    let x = Poly::<BigRat>::z(&());
    let mut q = &x - &Poly::constant(half.clone(), &());
    let plus = &x + &Poly::constant(half, &());
    for _ in 1..r {
        q = &q * &plus;
    }
    let four_r = BigRat::from_integer(num_bigint::BigInt::from(4).pow(r as u32));
    let q = q.scale(&four_r);
    delta_op_from_q(&[&Poly::monomial(BigRat::from_i64(1, &()), r, &()), &(-&q)])
}

/// `δ^r - 4^r z(δ + 1/2)^r`, annihilating `Σ C(2n, n)^r z^n`.
pub fn op_binom_power(r: usize) -> DiffOp<BigRat> {
    assert!(r >= 1);
    let half = BigRat::new(1.into(), 2.into());
    let plus = &Poly::<BigRat>::z(&()) + &Poly::constant(half, &());
    let four_r = BigRat::from_integer(num_bigint::BigInt::from(4).pow(r as u32));
    let q = plus.pow(r as u64).scale(&four_r);
    delta_op_from_q(&[&Poly::monomial(BigRat::from_i64(1, &()), r, &()), &(-&q)])
}

/// The δ-basis operator `Σ_j z^j·Q_j(δ)` from the polynomials `Q_j`.
pub fn delta_op_from_q(qs: &[&Poly<BigRat>]) -> DiffOp<BigRat> {
    let n = qs.iter().map(|q| q.deg()).max().unwrap_or(0).max(1);
    let mut coeffs = Vec::with_capacity(n + 1);
    for k in (0..=n).rev() {
        let c: Vec<BigRat> = qs.iter().map(|q| q.coeff(k)).collect();
        coeffs.push(Poly::new(c, ()));
    }
    DiffOp::from_polys(Basis::Delta, coeffs).expect("valid operator").normalize()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_f_one_to_delta() {
        let l = op_2f1().to_delta();
        let expect = op_from_ints(Basis::Delta, &[&[1, -16], &[], &[0, 4]]);
        assert_eq!(l, expect);
    }

    #[test]
    fn order_one_base_case() {
        let d = op_from_ints(Basis::D, &[&[1], &[]]);
        assert_eq!(d.to_delta(), op_from_ints(Basis::Delta, &[&[1], &[]]));
        let delta = op_from_ints(Basis::Delta, &[&[1], &[]]);
        // z·d, with the common factor z removed by normalization
        assert_eq!(delta.to_d(), op_from_ints(Basis::D, &[&[1], &[]]));
        assert_eq!(delta.to_delta(), delta);
    }

    #[test]
    fn two_f_one_to_d() {
        let l = op_from_ints(Basis::Delta, &[&[1, -16], &[], &[0, 4]]);
        assert_eq!(l.to_d(), op_2f1());
    }

    #[test]
    fn apery_roundtrip() {
        let a = op_apery();
        assert!(a.to_delta().to_d().same_up_to_scalar(&a));
        // δ form: θ³ - z(34θ³+51θ²+27θ+5) + z²(θ+1)³
        let expect = delta_op_from_q(&[
            &Poly::from_ints(&[0, 0, 0, 1], &()),
            &Poly::from_ints(&[-5, -27, -51, -34], &()),
            &Poly::from_ints(&[1, 3, 3, 1], &()),
        ]);
        assert_eq!(a.to_delta(), expect);
    }

    #[test]
    fn lr_matches_two_f_one_at_r2() {
        // L_2 = δ² - 16z(δ-1/2)(δ+1/2) = δ² - 16zδ² + 4z
        assert_eq!(op_lr(2), op_2f1().to_delta());
    }

    #[test]
    fn normalize_sign_and_content() {
        let l = op_from_ints(Basis::Delta, &[&[-2, 4], &[6]]);
        assert_eq!(l.normalize(), op_from_ints(Basis::Delta, &[&[1, -2], &[-3]]));
    }
}
