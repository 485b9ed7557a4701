use super::{reduce_series_mod_p, SeqGen, TruncSeries};
use crate::error::Result;
use crate::exactfield::{BigRat, Field, FpElem, Poly};

/// `C(n, k) mod p` for `n, k < p`.
fn small_binom(n: u64, k: u64, p: u64) -> FpElem {
    if k > n {
        return FpElem::new(0, p);
    }
    let mut num = FpElem::new(1, p);
    let mut den = FpElem::new(1, p);
    for i in 0..k {
        num = num.mul(&FpElem::new(n - i, p));
        den = den.mul(&FpElem::new(i + 1, p));
    }
    num.mul(&den.inv().expect("k < p"))
}

/// `C(n, k) mod p` as the product of digitwise binomials in base `p`.
pub fn lucas_binom(mut n: u64, mut k: u64, p: u64) -> FpElem {
    let mut acc = FpElem::new(1, p);
    while n > 0 || k > 0 {
        let (nd, kd) = (n % p, k % p);
        if kd > nd {
            return FpElem::new(0, p);
        }
        acc = acc.mul(&small_binom(nd, kd, p));
        n /= p;
        k /= p;
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LucasReport {
    pub holds: bool,
    /// First `(r, m)` with `a(r + mp) ≢ a(r)a(m)`.
    pub counterexample: Option<(usize, usize)>,
    pub checked_to: usize,
}

/// Tests `a(r + mp) ≡ a(r)·a(m) (mod p)` for `0 <= r < p`, `m >= 1`,
/// `r + mp <= M`, on already reduced coefficients.
pub fn p_lucas_check_reduced(f: &TruncSeries<FpElem>, p: u64, m_bound: usize) -> LucasReport {
    let p = p as usize;
    let top = m_bound.min(f.order().saturating_sub(1));
    for idx in p..=top {
        let (m, r) = (idx / p, idx % p);
        if *f.coeff(idx) != f.coeff(r).mul(f.coeff(m)) {
            return LucasReport { holds: false, counterexample: Some((r, m)), checked_to: top };
        }
    }
    LucasReport { holds: true, counterexample: None, checked_to: top }
}

pub fn p_lucas_check_terms(terms: &[BigRat], p: u64, m_bound: usize) -> Result<LucasReport> {
    let n = terms.len().min(m_bound + 1);
    let f = reduce_series_mod_p(&TruncSeries::new(terms[..n].to_vec(), ()), p)?;
    Ok(p_lucas_check_reduced(&f, p, m_bound))
}

pub fn p_lucas_check(g: &SeqGen, p: u64, m_bound: usize) -> Result<LucasReport> {
    let terms = g.gen_terms(m_bound + 1)?;
    p_lucas_check_terms(&terms, p, m_bound)
}

/// The equivalent series form: `f|_p ≡ P_(<p)(z)·f|_p(z^p)` to order `M`,
/// with `P_(<p)` the `p`-truncation.
pub fn p_lucas_by_series(f: &TruncSeries<FpElem>, p: u64) -> bool {
    let trunc = Poly::new(f.coeffs().iter().take(p as usize).copied().collect(), p);
    f.compose_zpk(p, 1).mul_poly(&trunc).equal_to_order(f)
}
