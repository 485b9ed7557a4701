use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use super::{Basis, DiffOp};
use crate::error::{Error, Result};
use crate::exactfield::{primes_up_to, BigRat, Field, Poly, RatFun};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularPoint<F: Field> {
    /// Monic irreducible factor cutting out the point(s).
    pub factor: Poly<F>,
    pub regular: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InfinityKind {
    Nonsingular,
    Regular,
    Irregular,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularityReport<F: Field> {
    pub finite_points: Vec<SingularPoint<F>>,
    pub infinity: InfinityKind,
    /// Number of distinct finite singular points over the algebraic closure.
    pub count_r: usize,
}

impl<F: Field> SingularityReport<F> {
    pub fn is_fuchsian(&self) -> bool {
        self.finite_points.iter().all(|s| s.regular) && self.infinity != InfinityKind::Irregular
    }
}

/// Finite singular locus as irreducible factors, each with the pole-order
/// regularity test, plus the degree test at infinity.
pub fn singularities<F: Field>(l: &DiffOp<F>) -> Result<SingularityReport<F>> {
    let ld = l.to_d();
    let a = ld.monic_coeffs();
    let ctx = l.ctx().clone();
    let locus = a.iter().fold(Poly::one(&ctx), |acc, c| acc.lcm(c.den()));
    let mut finite_points = Vec::new();
    let mut count_r = 0;
    for (q, _) in F::factor_poly(&locus)? {
        let regular = a.iter().enumerate().all(|(i, ai)| ai.pole_order(&q) <= i + 1);
        count_r += q.deg();
        finite_points.push(SingularPoint { factor: q, regular });
    }
    let at_inf_regular = a
        .iter()
        .enumerate()
        .all(|(i, ai)| ai.degree_diff().map_or(true, |d| d <= -(i as i64 + 1)));
    let infinity = if !at_inf_regular {
        InfinityKind::Irregular
    } else {
        let t = infinity_transform(&ld).to_d();
        if t.monic_coeffs().iter().all(|c| c.is_series_at_zero()) {
            InfinityKind::Nonsingular
        } else {
            InfinityKind::Regular
        }
    };
    Ok(SingularityReport { finite_points, infinity, count_r })
}

pub fn is_fuchsian<F: Field>(l: &DiffOp<F>) -> bool {
    singularities(l).map_or(false, |s| s.is_fuchsian())
}

/// `x^n + b_1(0)x^(n-1) + ... + b_n(0)` from the δ form.
pub fn indicial_at_zero<F: Field>(l: &DiffOp<F>) -> Result<Poly<F>> {
    let ld = l.to_delta();
    let ctx = l.ctx().clone();
    let b = ld.monic_coeffs();
    let n = ld.order();
    let mut coeffs = vec![F::zero(&ctx); n + 1];
    coeffs[n] = F::one(&ctx);
    for (i, bi) in b.iter().enumerate() {
        if !bi.is_series_at_zero() {
            return Err(Error::NotSeriesExpandable);
        }
        coeffs[n - i - 1] = bi.eval(&F::zero(&ctx)).expect("den(0) nonzero");
    }
    Ok(Poly::new(coeffs, ctx))
}

/// Indicial polynomial at infinity read from the top-degree coefficients
/// of the polynomial δ form (`δ` acts as `-δ` at infinity), made monic.
pub fn indicial_at_infinity<F: Field>(l: &DiffOp<F>) -> Poly<F> {
    let ld = l.to_delta();
    let ctx = l.ctx().clone();
    let polys = ld.poly_coeffs();
    let n = ld.order();
    let top = polys.iter().map(|p| p.deg()).max().unwrap_or(0);
    let minus_x = Poly::from_ints(&[0, -1], &ctx);
    let mut out = Poly::zero(&ctx);
    for (i, b) in polys.iter().enumerate() {
        let c = b.coeff(top);
        if c.is_zero() {
            continue;
        }
        out = &out + &minus_x.pow((n - i) as u64).scale(&c);
    }
    out.monic()
}

/// MOM at zero: Fuchsian with indicial polynomial `x^n` at zero.
pub fn is_mom<F: Field>(l: &DiffOp<F>) -> bool {
    if !is_fuchsian(l) {
        return false;
    }
    let ctx = l.ctx().clone();
    match indicial_at_zero(l) {
        Ok(ind) => ind == Poly::monomial(F::one(&ctx), l.order(), &ctx),
        Err(_) => false,
    }
}

/// Change of variable `z -> 1/z`. In the δ basis this is `b(z) -> b(1/z)`
/// together with `δ -> -δ`; the result is brought back to the input basis
/// with denominators cleared (no scalar normalization).
pub fn infinity_transform<F: Field>(l: &DiffOp<F>) -> DiffOp<F> {
    let ld = l.to_delta();
    let n = ld.order();
    let coeffs: Vec<RatFun<F>> = ld
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let m = c.num().deg().max(c.den().deg());
            let inv = RatFun::new(c.num().reverse(m), c.den().reverse(m)).expect("nonzero den");
            if (n - i) % 2 == 1 {
                inv.neg()
            } else {
                inv
            }
        })
        .collect();
    let t = DiffOp::new(Basis::Delta, coeffs).expect("leading stays nonzero").clear_denominators();
    match l.basis() {
        Basis::Delta => t,
        Basis::D => t.to_d(),
    }
}

/// Primes up to `bound` at which the coefficients are p-integral, the
/// nonzero singular points are p-adic units and pairwise distinct mod p.
pub fn good_primes(l: &DiffOp<BigRat>, bound: u64) -> Result<Vec<u64>> {
    let mut bad: BTreeSet<u64> = BTreeSet::new();
    let primes = primes_up_to(bound);
    let exclude_dividing = |n: &BigInt, bad: &mut BTreeSet<u64>| {
        for &p in &primes {
            if (n % BigInt::from(p)).to_u64() == Some(0) {
                bad.insert(p);
            }
        }
    };
    let ld = l.to_d();
    for a in ld.monic_coeffs() {
        if a.is_zero() {
            continue;
        }
        let u = BigRat::canonical_unit(a.den().coeffs(), &());
        for c in a.num().coeffs() {
            let c = c / &u;
            if !c.denom().is_one() {
                exclude_dividing(c.denom(), &mut bad);
            }
        }
    }
    // the normalized operator must keep its leading coefficient mod p
    let lead_content = ld.poly_coeffs()[0]
        .coeffs()
        .iter()
        .fold(BigInt::from(0), |g, c| num_integer::Integer::gcd(&g, c.numer()));
    exclude_dividing(&lead_content, &mut bad);

    let report = singularities(l)?;
    let z = Poly::<BigRat>::z(&());
    let factors: Vec<Poly<BigRat>> = report.finite_points.iter().map(|s| s.factor.canonical()).collect();
    let int_of = |q: &BigRat| q.numer().abs();
    for (k, q) in factors.iter().enumerate() {
        if q.monic() != z {
            exclude_dividing(&int_of(&q.coeff(0)), &mut bad);
            exclude_dividing(&int_of(q.lead().unwrap()), &mut bad);
        }
        if q.deg() >= 2 {
            let disc = q.discriminant();
            exclude_dividing(&int_of(&disc), &mut bad);
            exclude_dividing(disc.denom(), &mut bad);
        }
        for q2 in &factors[k + 1..] {
            let r = q.resultant(q2);
            exclude_dividing(&int_of(&r), &mut bad);
            exclude_dividing(r.denom(), &mut bad);
        }
    }
    Ok(primes.iter().copied().filter(|p| !bad.contains(p)).collect())
}
