use serde_json::{json, Value};

use super::split::split_pade;
use crate::diffop::{good_primes, is_mom, singularities, DiffOp};
use crate::error::{Error, Result};
use crate::exactfield::{BigRat, FpElem, Poly, RatFun};
use crate::holoseries::{SeqGen, TruncSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    /// `C·p^l`
    LBound,
    /// `C·p^(2l)`
    L2Bound,
    /// `nrp - 1`
    Prop62,
}

impl BoundKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundKind::LBound => "L_bound",
            BoundKind::L2Bound => "L2_bound",
            BoundKind::Prop62 => "prop62_bound",
        }
    }
}

/// `f|_p(z) ≡ A(z)·f|_p(z^(p^l)) mod z^T`, or for the one-step kind
/// `f ≡ A·(Λ_p f)(z^p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub p: u64,
    pub level: u32,
    pub a: RatFun<FpElem>,
    pub verified_to: usize,
    pub height: usize,
    pub bound: u64,
    pub bound_kind: BoundKind,
}

fn residues(p: &Poly<FpElem>) -> Vec<u64> {
    p.coeffs().iter().map(|c| c.residue()).collect()
}

impl Certificate {
    pub fn to_json(&self, series: &str) -> Value {
        json!({
            "series": series,
            "p": self.p,
            "level": self.level,
            "A_num": residues(self.a.num()),
            "A_den": residues(self.a.den()),
            "height": self.height,
            "bound": self.bound,
            "bound_kind": self.bound_kind.as_str(),
            "verified_to": self.verified_to,
        })
    }

    /// Inverse of [`Certificate::to_json`]; returns the series name too.
    pub fn from_json(v: &Value) -> Result<(String, Certificate)> {
        let perr = |field: &str, msg: &str| Error::Parse { location: format!("$.{field}"), message: msg.into() };
        let uint = |field: &str| v.get(field).and_then(Value::as_u64).ok_or_else(|| perr(field, "missing unsigned integer"));
        let series = v.get("series").and_then(Value::as_str).ok_or_else(|| perr("series", "missing string"))?;
        let p = uint("p")?;
        if !crate::exactfield::is_prime(p) {
            return Err(perr("p", "not a prime"));
        }
        let poly = |field: &str| -> Result<Poly<FpElem>> {
            let items = v.get(field).and_then(Value::as_array).ok_or_else(|| perr(field, "missing array"))?;
            let c = items
                .iter()
                .map(|x| x.as_u64().map(|r| FpElem::new(r % p, p)).ok_or_else(|| perr(field, "entries must be residues")))
                .collect::<Result<Vec<_>>>()?;
            Ok(Poly::new(c, p))
        };
        let a = RatFun::new(poly("A_num")?, poly("A_den")?).map_err(|_| perr("A_den", "zero denominator"))?;
        let bound_kind = match v.get("bound_kind").and_then(Value::as_str) {
            Some("L_bound") => BoundKind::LBound,
            Some("L2_bound") => BoundKind::L2Bound,
            Some("prop62_bound") => BoundKind::Prop62,
            _ => return Err(perr("bound_kind", "expected L_bound, L2_bound or prop62_bound")),
        };
        let height = a.height();
        if uint("height")? != height as u64 {
            return Err(perr("height", "does not match A"));
        }
        let cert = Certificate {
            p,
            level: uint("level")? as u32,
            a,
            verified_to: uint("verified_to")? as usize,
            height,
            bound: uint("bound")?,
            bound_kind,
        };
        Ok((series.to_string(), cert))
    }

    /// Re-checks `den·f ≡ num·f(z^(p^l))` (for the one-step kind
    /// `den·f ≡ num·(Λ_p f)(z^p)`) by polynomial multiplication.
    pub fn check(&self, f: &TruncSeries<FpElem>) -> bool {
        let t = self.verified_to.min(f.order());
        if self.bound_kind == BoundKind::Prop62 {
            return identity_mismatch(f, &self.a, &f.cartier(self.p, 0), self.p as usize, t).is_none();
        }
        let q = (self.p as usize).pow(self.level);
        identity_mismatch(f, &self.a, f, q, t).is_none()
    }
}

/// First index below `t` where `den(A)·lhs ≢ num(A)·rhs(z^q)`.
pub fn identity_mismatch(
    lhs: &TruncSeries<FpElem>,
    a: &RatFun<FpElem>,
    rhs: &TruncSeries<FpElem>,
    q: usize,
    t: usize,
) -> Option<usize> {
    let t = t.min(lhs.order()).min(rhs.order().saturating_mul(q));
    let left = lhs.truncate(t).mul_poly(a.den());
    let right = rhs.substitute_power(q, t).mul_poly(a.num());
    left.first_mismatch(&right)
}

fn lambda_poly(p_poly: &Poly<FpElem>, p: u64) -> Poly<FpElem> {
    Poly::new(p_poly.coeffs().iter().step_by(p as usize).copied().collect(), p)
}

fn iterate_cartier(f: &TruncSeries<FpElem>, p: u64, k: usize) -> TruncSeries<FpElem> {
    (0..k).fold(f.clone(), |g, _| g.cartier(p, 0))
}

/// One-step certificate `f ≡ A·(Λ_p f)^p` with
/// `A = P(z)/Λ_p(P)(z^p)` from the section splitting at `d = nr`.
pub fn certificate_prop62(f: &TruncSeries<FpElem>, n: usize, r: usize, p: u64) -> Result<Certificate> {
    let w = split_pade(f, n * r, p)?;
    let den = lambda_poly(&w.poly, p).substitute_power(p as usize);
    let a = RatFun::new(w.poly, den)?;
    let bound = (n * r) as u64 * p - 1;
    let height = a.height();
    if height as u64 > bound {
        return Err(Error::HeightBoundViolated { height: height as u64, bound });
    }
    let t = f.order();
    if let Some(i) = identity_mismatch(f, &a, &f.cartier(p, 0), p as usize, t) {
        return Err(Error::VerificationFailed(format!("one-step identity fails at index {i}")));
    }
    Ok(Certificate { p, level: 1, a, verified_to: t, height, bound, bound_kind: BoundKind::Prop62 })
}

/// `Λ_p^i f ≡ A·(Λ_p^(i+m) f)^(p^m)` with `A = Π_k A_k(z^(p^k))`, `A_k` the
/// one-step certificate of `Λ_p^(i+k) f`. Height is checked against `2nr·p^m`.
pub fn iterate_lemma52(
    f: &TruncSeries<FpElem>,
    i: usize,
    m: usize,
    p: u64,
    n: usize,
    r: usize,
) -> Result<RatFun<FpElem>> {
    let base = iterate_cartier(f, p, i);
    let mut steps = Vec::with_capacity(m);
    let mut g = base.clone();
    for _ in 0..m {
        steps.push(certificate_prop62(&g, n, r, p)?.a);
        g = g.cartier(p, 0);
    }
    let a = telescope(&steps, |k| k, 0, m, p);
    let bound = 2 * (n * r) as u64 * p.pow(m as u32);
    if a.height() as u64 > bound {
        return Err(Error::HeightBoundViolated { height: a.height() as u64, bound });
    }
    if let Some(j) = identity_mismatch(&base, &a, &g, (p as usize).pow(m as u32), base.order()) {
        return Err(Error::VerificationFailed(format!("iterated identity fails at index {j}")));
    }
    Ok(a)
}

/// `Π_(k<m) step(idx(i+k))(z^(p^k))`.
fn telescope(
    steps: &[RatFun<FpElem>],
    idx: impl Fn(usize) -> usize,
    i: usize,
    m: usize,
    p: u64,
) -> RatFun<FpElem> {
    let mut acc = RatFun::one(&p);
    for k in 0..m {
        let s = &steps[idx(i + k)];
        acc = acc.mul(&s.substitute_power((p as usize).pow(k as u32)));
    }
    acc
}

/// `Λ_p^a f ≡ Λ_p^(a+b) f` to `verified_to`, with `l = c·b > a`, `c` minimal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitReport {
    pub a: usize,
    pub b: usize,
    pub l: usize,
    pub verified_to: usize,
}

pub const MIN_COMPARE: usize = 32;

pub fn orbit_detect(f: &TruncSeries<FpElem>, p: u64, max_steps: usize) -> Result<OrbitReport> {
    orbit_detect_with(f, p, max_steps, MIN_COMPARE)
}

pub fn orbit_detect_with(f: &TruncSeries<FpElem>, p: u64, max_steps: usize, min_len: usize) -> Result<OrbitReport> {
    let mut iterates = vec![f.clone()];
    for s in 1..=max_steps {
        let next = iterates[s - 1].cartier(p, 0);
        if next.order() < min_len {
            return Err(Error::NoCycleFound { steps: s - 1 });
        }
        iterates.push(next);
        let last = &iterates[s];
        if let Some(a) = (0..s).find(|&a| iterates[a].equal_to_order(last)) {
            let b = s - a;
            let l = (a / b + 1) * b;
            return Ok(OrbitReport { a, b, l, verified_to: last.order() });
        }
    }
    Err(Error::NoCycleFound { steps: max_steps })
}

#[derive(Clone, Debug)]
pub struct AssembleOptions {
    /// Verification order; `None` picks `max(2·bound + 16, 512)` capped at `t_cap`.
    pub t: Option<usize>,
    pub t_cap: usize,
    pub max_steps: usize,
}

impl Default for AssembleOptions {
    fn default() -> Self {
        AssembleOptions { t: None, t_cap: 100_000, max_steps: 4 }
    }
}

#[derive(Clone, Debug)]
pub struct Theorem1 {
    pub orbit: OrbitReport,
    pub n: usize,
    pub r: usize,
    /// Height constant `C = 2nr`.
    pub c: u64,
    pub l2: Certificate,
    /// Present when the orbit has no preperiod.
    pub l1: Option<Certificate>,
}

impl Theorem1 {
    pub fn primary(&self) -> &Certificate {
        self.l1.as_ref().unwrap_or(&self.l2)
    }
}

fn default_order(bound: u64, opts: &AssembleOptions) -> usize {
    opts.t.unwrap_or_else(|| ((2 * bound + 16).max(512) as usize).min(opts.t_cap))
}

/// Builds `A_p = A_(0,l)·(A_(l,l)/A_(0,l))^(p^l)` from one-step certificates
/// of the distinct iterates on the orbit and verifies
/// `f|_p ≡ A_p·f|_p(z^(p^l))`.
pub fn assemble_theorem1(g: &SeqGen, l: &DiffOp<BigRat>, p: u64, opts: &AssembleOptions) -> Result<Theorem1> {
    if !is_mom(l) {
        return Err(Error::NotMomAtZero);
    }
    if !good_primes(l, p)?.contains(&p) {
        return Err(Error::BadPrime { p, reason: "not a good prime for the operator".into() });
    }
    let n = l.order();
    let r = singularities(l)?.count_r;
    let c = 2 * (n * r) as u64;
    let pu = p as usize;

    let mut found = None;
    let mut f = TruncSeries::zeros(0, &p);
    for s in 1..=opts.max_steps {
        let t = (MIN_COMPARE * pu.pow(s as u32)).max(opts.t.unwrap_or(0));
        if t > 4 * opts.t_cap.max(MIN_COMPARE * pu) {
            break;
        }
        f = g.terms_mod_p(t, p)?;
        match orbit_detect(&f, p, s) {
            Ok(o) => {
                found = Some(o);
                break;
            }
            Err(Error::NoCycleFound { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    let orbit = found.ok_or(Error::NoCycleFound { steps: opts.max_steps })?;
    let (a, b, lev) = (orbit.a, orbit.b, orbit.l);

    let need = pu.pow((a + b) as u32) * (2 * n * r + 8);
    if f.order() < need {
        f = g.terms_mod_p(need, p)?;
    }
    let mut steps = Vec::with_capacity(a + b);
    let mut it = f.clone();
    for _ in 0..a + b {
        steps.push(certificate_prop62(&it, n, r, p)?.a);
        it = it.cartier(p, 0);
    }
    let idx = |j: usize| if j < a { j } else { a + (j - a) % b };
    let a0 = telescope(&steps, idx, 0, lev, p);
    let al = telescope(&steps, idx, lev, lev, p);
    let q = pu.pow(lev as u32);
    let ratio = al.div(&a0)?.substitute_power(q);
    let assembled = a0.mul(&ratio);

    let bound2 = 2 * c * (p).pow(2 * lev as u32);
    let bound1 = c * p.pow(lev as u32);
    let t2 = default_order(bound2, opts);
    let t1 = default_order(bound1, opts);
    let tmax = t1.max(t2);
    if f.order() < tmax {
        f = g.terms_mod_p(tmax, p)?;
    }
    let make = |a_fn: RatFun<FpElem>, bound: u64, kind: BoundKind, t: usize| -> Result<Certificate> {
        let height = a_fn.height();
        if height as u64 > bound {
            return Err(Error::HeightBoundViolated { height: height as u64, bound });
        }
        if let Some(i) = identity_mismatch(&f, &a_fn, &f, q, t) {
            return Err(Error::VerificationFailed(format!("level-{lev} identity fails at index {i}")));
        }
        Ok(Certificate { p, level: lev as u32, a: a_fn, verified_to: t, height, bound, bound_kind: kind })
    };
    let l2 = make(assembled, bound2, BoundKind::L2Bound, t2)?;
    let l1 = if a == 0 { Some(make(a0, bound1, BoundKind::LBound, t1)?) } else { None };
    Ok(Theorem1 { orbit, n, r, c, l2, l1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::{op_2f1, op_apery};
    use crate::exactfield::Field;
    use crate::holoseries::Catalog;

    fn fp(name: &str, t: usize, p: u64) -> TruncSeries<FpElem> {
        Catalog::builtin().get(name).unwrap().terms_mod_p(t, p).unwrap()
    }

    fn poly(c: &[i64], p: u64) -> Poly<FpElem> {
        Poly::new(c.iter().map(|&x| FpElem::from_i64(x, &p)).collect(), p)
    }

    fn ratfun(num: Poly<FpElem>, den: Poly<FpElem>) -> RatFun<FpElem> {
        RatFun::new(num, den).unwrap()
    }

    #[test]
    fn prop62_examples() {
        let c = certificate_prop62(&fp("f1", 300, 3), 2, 2, 3).unwrap();
        assert_eq!(c.a, RatFun::from_poly(poly(&[1, 1], 3)));
        assert_eq!((c.height, c.bound), (1, 11));
        let c = certificate_prop62(&fp("f2", 300, 3), 2, 2, 3).unwrap();
        assert_eq!(c.a, RatFun::from_poly(poly(&[1, 2], 3)));
        assert!(c.check(&fp("f2", 300, 3)));
        let t = fp("apery", 300, 5);
        let c = certificate_prop62(&t, 3, 3, 5).unwrap();
        assert_eq!(c.a, RatFun::from_poly(Poly::new(t.coeffs()[..5].to_vec(), 5)));
        assert_eq!((c.height, c.bound), (4, 44));
    }

    #[test]
    fn lemma52_examples() {
        let f = fp("f2", 600, 3);
        assert_eq!(iterate_lemma52(&f, 0, 0, 3, 2, 2).unwrap(), RatFun::one(&3));
        assert_eq!(iterate_lemma52(&f, 0, 1, 3, 2, 2).unwrap(), RatFun::from_poly(poly(&[1, 2], 3)));
        let a2 = iterate_lemma52(&f, 0, 2, 3, 2, 2).unwrap();
        let want = &poly(&[1, 2], 3) * &poly(&[1, 1], 3).pow(3);
        assert_eq!(a2, RatFun::from_poly(want));
        assert_eq!(a2.height(), 4);
    }

    #[test]
    fn orbits() {
        for p in [3u64, 5, 7] {
            let o = orbit_detect(&fp("f1", 40 * p as usize * p as usize, p), p, 3).unwrap();
            assert_eq!((o.a, o.b, o.l), (0, 1, 1));
            let o = orbit_detect(&fp("f2", 40 * p as usize * p as usize, p), p, 3).unwrap();
            assert_eq!((o.a, o.b, o.l), (1, 1, 2));
        }
        for p in [3u64, 5] {
            let o = orbit_detect(&fp("cy210", 200, p), p, 3).unwrap();
            assert_eq!((o.a, o.b), (0, 1));
        }
        assert!(matches!(orbit_detect(&fp("f2", 40, 3), 3, 3), Err(Error::NoCycleFound { .. })));
    }

    #[test]
    fn theorem1_f1_and_apery() {
        let cat = Catalog::builtin();
        let th = assemble_theorem1(cat.get("f1").unwrap(), &op_2f1(), 3, &AssembleOptions::default()).unwrap();
        let c = th.primary();
        assert_eq!((c.level, c.bound_kind), (1, BoundKind::LBound));
        assert_eq!(c.a, RatFun::from_poly(poly(&[1, 1], 3)));
        let th = assemble_theorem1(cat.get("apery").unwrap(), &op_apery(), 5, &AssembleOptions::default()).unwrap();
        let c = th.primary();
        assert_eq!((c.level, c.height, c.bound_kind), (1, 4, BoundKind::LBound));
        assert!(c.verified_to >= 500);
    }

    #[test]
    fn theorem1_f2_matches_closed_height() {
        let cat = Catalog::builtin();
        let opts = AssembleOptions { t: Some(1000), ..Default::default() };
        let th = assemble_theorem1(cat.get("f2").unwrap(), &op_2f1(), 3, &opts).unwrap();
        assert!(th.l1.is_none());
        let c = &th.l2;
        assert_eq!((c.level, c.height, c.bound_kind), (2, 12, BoundKind::L2Bound));
        // B_1 = P_1^(3+9)/P_2^8 with P_1 = 1 + z, P_2 = 1 + 2z
        let b1 = ratfun(poly(&[1, 1], 3).pow(12), poly(&[1, 2], 3).pow(8));
        assert_eq!(c.a, b1);
        assert!(c.check(&fp("f2", 1000, 3)));
        let (name, back) = Certificate::from_json(&c.to_json("f2")).unwrap();
        assert_eq!((name.as_str(), &back), ("f2", c));
    }

    #[test]
    fn certificate_json_rejects_bad_fields() {
        let c = certificate_prop62(&fp("f1", 200, 3), 2, 2, 3).unwrap();
        let mut v = c.to_json("f1");
        assert_eq!(Certificate::from_json(&v).unwrap().1, c);
        v["height"] = json!(99);
        assert!(matches!(Certificate::from_json(&v), Err(Error::Parse { ref location, .. }) if location == "$.height"));
        v["p"] = json!(4);
        assert!(matches!(Certificate::from_json(&v), Err(Error::Parse { ref location, .. }) if location == "$.p"));
    }

    #[test]
    fn bad_prime_rejected() {
        let cat = Catalog::builtin();
        let e = assemble_theorem1(cat.get("f1").unwrap(), &op_2f1(), 2, &AssembleOptions::default()).unwrap_err();
        assert!(matches!(e, Error::BadPrime { p: 2, .. }));
    }
}
