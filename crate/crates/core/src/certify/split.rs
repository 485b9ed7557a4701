use crate::error::{Error, Result};
use crate::exactfield::{nullspace, Field, FpElem, Poly};
use crate::holoseries::TruncSeries;

/// `f ≡ P(z)·c(z^p)` with `deg P <= p·d - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitWitness {
    pub poly: Poly<FpElem>,
    pub p: u64,
    pub degree_bound: usize,
    pub verified_to: usize,
}

fn fail(msg: impl Into<String>) -> Error {
    Error::ReconstructionFailed(msg.into())
}

fn sections(p: &Poly<FpElem>, q: u64) -> Vec<Poly<FpElem>> {
    let q = q as usize;
    (0..q)
        .map(|r| Poly::new(p.coeffs().iter().skip(r).step_by(q).copied().collect(), *p.ctx()))
        .collect()
}

fn from_sections(parts: &[Poly<FpElem>], q: u64) -> Poly<FpElem> {
    let q = q as usize;
    let ctx = *parts[0].ctx();
    let len = parts.iter().map(|s| s.coeffs().len() * q).max().unwrap_or(0);
    let mut c = vec![FpElem::zero(&ctx); len];
    for (r, s) in parts.iter().enumerate() {
        for (i, x) in s.coeffs().iter().enumerate() {
            c[i * q + r] = *x;
        }
    }
    Poly::new(c, ctx)
}

/// Divides out the largest factor of the form `g(z^p)` and scales to `P(0) = 1`.
fn primitive_in_zp(p_poly: &Poly<FpElem>, p: u64) -> Poly<FpElem> {
    let parts = sections(p_poly, p);
    let g = parts.iter().fold(Poly::zero(p_poly.ctx()), |acc, s| acc.gcd(s));
    let parts: Vec<Poly<FpElem>> = parts.iter().map(|s| if s.is_zero() { s.clone() } else { s.exact_div(&g).expect("gcd divides") }).collect();
    let out = from_sections(&parts, p);
    let c0 = out.coeff(0);
    out.scale(&c0.inv().expect("P(0) is a unit"))
}

/// Checks `f ≡ P·c(z^p)` with `c = Λ_p(f)/Λ_p(P)` to the order of `f`.
fn verify_split(f: &TruncSeries<FpElem>, poly: &Poly<FpElem>, p: u64) -> Result<usize> {
    let t = f.order();
    let lp = Poly::new(poly.coeffs().iter().step_by(p as usize).copied().collect(), p);
    let lp_inv = TruncSeries::from_poly(&lp, f.cartier(p, 0).order())
        .inv()
        .ok_or_else(|| fail("Λ_p(P)(0) = 0"))?;
    let c = f.cartier(p, 0).mul(&lp_inv);
    let rebuilt = c.substitute_power(p as usize, t).mul_poly(poly);
    match rebuilt.first_mismatch(f) {
        None => Ok(t),
        Some(i) => Err(fail(format!("split identity fails at index {i}"))),
    }
}

fn normalized_head(f: &TruncSeries<FpElem>) -> Result<TruncSeries<FpElem>> {
    let f0 = *f.coeff(0);
    let inv = f0.inv().ok_or_else(|| Error::InvalidInput("split needs f(0) != 0".into()))?;
    Ok(f.scale(&inv))
}

/// Section-ratio reconstruction: the sections satisfy
/// `Λ_(p,r) f / Λ_(p,0) f = P_r/P_0` with `deg P_r <= d - 1`; the
/// smallest-degree `P_0` is found by a linear solve on the coefficients.
pub fn split_pade(f: &TruncSeries<FpElem>, d: usize, p: u64) -> Result<SplitWitness> {
    if d == 0 {
        return Err(Error::InvalidInput("span d must be positive".into()));
    }
    let f = normalized_head(f)?;
    let t = f.order();
    let len = t / p as usize;
    if len < 2 * d + 2 {
        return Err(fail(format!("order {t} too small for d = {d} at p = {p}")));
    }
    let s0 = f.cartier(p, 0).truncate(len);
    let inv0 = s0.inv().expect("f(0) = 1");
    let ratios: Vec<TruncSeries<FpElem>> =
        (1..p as usize).map(|r| f.cartier(p, r).truncate(len).mul(&inv0)).collect();
    let zero = FpElem::new(0, p);
    for e in 0..d {
        let mut rows = Vec::new();
        for q in &ratios {
            for k in d..len {
                rows.push((0..=e).map(|i| if i <= k { *q.coeff(k - i) } else { zero }).collect::<Vec<_>>());
            }
        }
        let ns = nullspace(rows, e + 1, &p);
        let Some(u) = ns.into_iter().find(|v| !v[0].is_zero()) else { continue };
        let p0 = Poly::new(u, p);
        let p0 = p0.scale(&p0.coeff(0).inv().unwrap());
        let mut parts = vec![p0.clone()];
        for q in &ratios {
            parts.push(q.mul_poly(&p0).truncate(d).to_poly());
        }
        let poly = from_sections(&parts, p);
        let verified_to = verify_split(&f, &poly, p)?;
        return Ok(SplitWitness { poly, p, degree_bound: p as usize * d - 1, verified_to });
    }
    Err(fail(format!("no section relation of degree < {d} at order {t}")))
}

/// The constructive elimination: kernel vector of `v_0, ..., v_d` with
/// `v_i = (f_(ip), ..., f_(ip+d-1))`, then the gap argument on
/// `(Σ α_i z^(pi))·f`.
pub fn split_elimination(f: &TruncSeries<FpElem>, d: usize, p: u64) -> Result<SplitWitness> {
    if d == 0 {
        return Err(Error::InvalidInput("span d must be positive".into()));
    }
    let pu = p as usize;
    let mut f = f.clone();
    while f.order() > pu && f.coeffs()[..pu].iter().all(|c| c.is_zero()) && !f.is_zero() {
        f = TruncSeries::new(f.coeffs()[pu..].to_vec(), p);
    }
    if f.coeff(0).is_zero() {
        return Err(fail("f(0) = 0 but f is not divisible by z^p"));
    }
    let f = normalized_head(&f)?;
    let t = f.order();
    if t < pu * (d + 1) + pu * d {
        return Err(fail(format!("order {t} too small for d = {d} at p = {p}")));
    }
    let v = |i: usize| -> Vec<FpElem> { (0..d).map(|k| *f.coeff(i * pu + k)).collect() };
    let raw = if let Some(i) = (1..=d).find(|&i| v(i).iter().all(|c| c.is_zero())) {
        Poly::new(f.coeffs()[..i * pu].to_vec(), p)
    } else {
        let rows: Vec<Vec<FpElem>> = (0..d).map(|k| (0..=d).map(|i| *f.coeff(i * pu + k)).collect()).collect();
        let kernel = nullspace(rows, d + 1, &p);
        let c = kernel.first().ok_or_else(|| fail("vectors v_0..v_d are independent"))?;
        // α_(d-i) multiplies v_i, so the multiplier is Σ_i c_i z^(p(d-i))
        let mut mult = vec![FpElem::new(0, p); pu * d + 1];
        for (i, ci) in c.iter().enumerate() {
            mult[pu * (d - i)] = *ci;
        }
        let g = f.mul_poly(&Poly::new(mult, p));
        let raw = Poly::new(g.coeffs()[..pu * d].to_vec(), p);
        if raw.is_zero() {
            return Err(fail("gap polynomial vanishes"));
        }
        let val = raw.z_valuation();
        if val % pu != 0 {
            return Err(fail("gap polynomial has valuation prime to p"));
        }
        Poly::new(raw.coeffs()[val..].to_vec(), p)
    };
    let poly = primitive_in_zp(&raw, p);
    let verified_to = verify_split(&f, &poly, p)?;
    Ok(SplitWitness { poly, p, degree_bound: pu * d - 1, verified_to })
}
