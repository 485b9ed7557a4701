//! The worked examples as executable checks: the congruences of series
//! 210 and 26, the full ₂F₁ case, and the ingredients of the independence
//! theorems. Each case returns a [`CaseResult`] of labelled checks.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::certify::identity_mismatch;
use crate::diffop::{is_mom, op_lr};
use crate::error::{Error, Result};
use crate::exactfield::{is_prime, nullspace, reduce_rat_mod_p, Field, FpElem, Poly, RatFun};
use crate::holoseries::{apply_operator, lucas_binom, p_lucas_by_series, p_lucas_check_reduced, Catalog, TruncSeries};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub label: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseResult {
    pub case_id: String,
    pub p: u64,
    pub checks: Vec<Check>,
    pub orders: BTreeMap<String, usize>,
    /// Set when the prime is outside the hypotheses of the case.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub excluded: Option<String>,
}

impl CaseResult {
    fn new(case_id: &str, p: u64) -> Self {
        CaseResult { case_id: case_id.into(), p, checks: Vec::new(), orders: BTreeMap::new(), excluded: None }
    }

    fn excluded(case_id: &str, p: u64, reason: String) -> Self {
        CaseResult { excluded: Some(reason), ..CaseResult::new(case_id, p) }
    }

    fn order(&mut self, name: &str, v: usize) {
        self.orders.insert(name.into(), v);
    }

    fn push(&mut self, label: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check { label: label.into(), pass, detail: detail.into() });
    }

    fn push_mismatch(&mut self, label: impl Into<String>, mismatch: Option<usize>, t: usize) {
        match mismatch {
            None => self.push(label, true, format!("equal to order {t}")),
            Some(i) => self.push(label, false, format!("first mismatch at index {i}")),
        }
    }

    /// True when no check failed. Excluded rows pass vacuously.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn is_excluded(&self) -> bool {
        self.excluded.is_some()
    }

    pub fn check(&self, label: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.label == label)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("plain data")
    }
}

fn odd_prime(p: u64, why: &str) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    if p == 2 {
        return Err(Error::BadPrime { p, reason: why.into() });
    }
    Ok(())
}

fn fp_poly(c: &[FpElem], p: u64) -> Poly<FpElem> {
    Poly::new(c.to_vec(), p)
}

fn fp_int(n: i64, p: u64) -> FpElem {
    FpElem::from_i64(n, &p)
}

/// `a(n) mod p` for series 210 from base-`p` digits.
fn a210_digits(n: u64, p: u64) -> FpElem {
    let mut s = fp_int(0, p);
    for k in 0..=2 * n {
        let b = lucas_binom(2 * n, k, p).pow(4);
        s = if k % 2 == 0 { s.add(&b) } else { s.sub(&b) };
    }
    lucas_binom(2 * n, n, p).mul(&s)
}

/// `a(n) mod p` for series 26 from base-`p` digits.
fn a26_digits(n: u64, p: u64) -> FpElem {
    let mut s = fp_int(0, p);
    for k in 0..=n {
        let b = lucas_binom(n, k, p);
        s = s.add(&b.mul(&b).mul(&lucas_binom(n + k, k, p)).mul(&lucas_binom(2 * k, n, p)));
    }
    lucas_binom(2 * n, n, p).mul(&s)
}

/// `a(jp) ≡ a(j)` for `j <= jmax`, by exact sums and by digits.
fn congruence_case(
    id: &str,
    name: &str,
    digits: fn(u64, u64) -> FpElem,
    p: u64,
    jmax: usize,
) -> Result<CaseResult> {
    let g = Catalog::builtin().get(name)?.clone();
    let mut res = CaseResult::new(id, p);
    res.order("jmax", jmax);
    let pu = p as usize;
    let mut exact = BTreeMap::new();
    let mut digit = BTreeMap::new();
    for j in 0..=jmax {
        for n in [j, j * pu] {
            if let std::collections::btree_map::Entry::Vacant(e) = exact.entry(n) {
                e.insert(reduce_rat_mod_p(&g.exact_term(n)?, p)?);
                digit.insert(n, digits(n as u64, p));
            }
        }
    }
    let first_bad = |vals: &BTreeMap<usize, FpElem>| (0..=jmax).find(|&j| vals[&(j * pu)] != vals[&j]);
    for (route, vals) in [("exact sums", &exact), ("Lucas digits", &digit)] {
        let label = format!("a(jp) = a(j) mod p, {route}");
        match first_bad(vals) {
            None => res.push(label, true, format!("all j <= {jmax}")),
            Some(j) => res.push(
                label,
                false,
                format!("j = {j}: a(jp) = {}, a(j) = {}", vals[&(j * pu)].residue(), vals[&j].residue()),
            ),
        }
    }
    match exact.keys().find(|n| exact[n] != digit[n]) {
        None => res.push("exact and digit routes agree", true, format!("{} indices", exact.len())),
        Some(n) => res.push("exact and digit routes agree", false, format!("differ at n = {n}")),
    }
    Ok(res)
}

/// Series 210, `C(2j,j)·Σ_k (-1)^k C(2j,k)⁴`: `a(jp) ≡ a(j) mod p`.
pub fn case_210(p: u64, jmax: usize) -> Result<CaseResult> {
    odd_prime(p, "the sign (-1)^k needs p odd")?;
    congruence_case("210", "cy210", a210_digits, p, jmax)
}

/// Series 26, `C(2j,j)·Σ_k C(j,k)²C(j+k,k)C(2k,j)`: `a(jp) ≡ a(j) mod p`.
pub fn case_26(p: u64, jmax: usize) -> Result<CaseResult> {
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    congruence_case("26", "cy26", a26_digits, p, jmax)
}

/// The ₂F₁ example in full: truncations `P_(1,p)`, `P_(2,p)`, the
/// identities between `f_1`, `f_2` and their reductions, coprimality,
/// and the exact heights of `B_k = P_1^(p+...+p^(k+1)) / P_2^(p^(k+1)-1)`
/// while `p^(k+1) <= 400`.
pub fn case_2f1(p: u64, kmax: u32, t: usize) -> Result<CaseResult> {
    odd_prime(p, "the example needs p >= 3")?;
    if t < 2 * p as usize {
        return Err(Error::InvalidInput(format!("order {t} too small for p = {p}")));
    }
    let cat = Catalog::builtin();
    let f1q = cat.get("f1")?.series(t)?;
    let f2q = cat.get("f2")?.series(t)?;
    let f1 = cat.get("f1")?.terms_mod_p(t, p)?;
    let f2 = cat.get("f2")?.terms_mod_p(t, p)?;
    let pu = p as usize;
    let half = (pu - 1) / 2;
    let p1 = fp_poly(&f1.coeffs()[..pu], p);
    let p2 = fp_poly(&f2.coeffs()[..pu], p);
    let mut res = CaseResult::new("2f1", p);
    res.order("T", t);
    res.order("kmax", kmax as usize);

    let degs = (p1.degree(), p2.degree());
    res.push(
        "deg P_1,p = deg P_2,p = (p-1)/2",
        degs == (Some(half), Some(half)),
        format!("degrees {}, {}", p1.deg(), p2.deg()),
    );

    let one_minus_16z = Poly::from_ints(&[1, -16], &());
    let two = crate::exactfield::BigRat::from_i64(2, &());
    let rhs = f1q.add(&f1q.delta().scale(&two)).mul_poly(&one_minus_16z);
    res.push_mismatch("f_2 = (1-16z)(f_1 + 2δf_1) over Q", rhs.first_mismatch(&f2q), t);
    let rhs = f2q.sub(&f2q.delta().scale(&two));
    res.push_mismatch("f_1 = f_2 - 2δf_2 over Q", rhs.first_mismatch(&f1q), t);

    let z = Poly::<FpElem>::z(&p);
    let delta = |q: &Poly<FpElem>| &z * &q.derivative();
    let two_p = fp_int(2, p);
    let eq16 = &Poly::from_ints(&[1, -16], &p) * &(&p1 + &delta(&p1).scale(&two_p));
    res.push("P_2,p = (1-16z)(P_1,p + 2δP_1,p) over F_p", eq16 == p2, format!("P_2,p = {}", p2.display_with("z")));

    let f1_pow_p = f1.pow(p);
    res.push_mismatch("f_2|p = P_2,p·(f_1|p)^p", f1_pow_p.mul_poly(&p2).first_mismatch(&f2), t);
    let eq18 = f1_pow_p.pow(p).mul_poly(&(&p2 * &p1.pow(p)));
    res.push_mismatch("f_2|p = P_2,p·P_1,p^p·(f_1|p)^(p^2)", eq18.first_mismatch(&f2), t);
    let left = f2.mul_poly(&p2.pow(p - 1));
    let right = f2.pow(p).mul_poly(&p1.pow(p));
    res.push_mismatch("f_2|p = (P_1,p^p / P_2,p^(p-1))·(f_2|p)^p", right.first_mismatch(&left), t);

    let g = p2.gcd(&p2.derivative());
    res.push("gcd(P_2,p, P_2,p') = 1", g.degree() == Some(0), format!("gcd = {}", g.display_with("z")));
    let p1_alt = &p2 - &(&z * &p2.derivative()).scale(&two_p);
    res.push("P_1,p = P_2,p - 2zP_2,p'", p1_alt == p1, format!("P_1,p = {}", p1.display_with("z")));
    let g = p1.gcd(&p2);
    res.push("gcd(P_1,p, P_2,p) = 1", g.degree() == Some(0), format!("gcd = {}", g.display_with("z")));

    let mut q = 1usize;
    let mut e1 = 0u64;
    for k in 0..=kmax {
        q *= pu;
        if q > 400 {
            break;
        }
        e1 += q as u64;
        let b = RatFun::new(p1.pow(e1), p2.pow(q as u64 - 1))?;
        let expected = pu * (q - 1) / 2;
        res.push(
            format!("height B_{k} = (p/2)(p^{}-1)", k + 1),
            b.height() == expected,
            format!("height {} (expected {expected})", b.height()),
        );
        res.push_mismatch(format!("f_2|p = B_{k}·f_2|p(z^(p^{}))", k + 1), identity_mismatch(&f2, &b, &f2, q, t), t);
    }
    Ok(res)
}

/// Lowest-height `P/Q` with `Q(0) != 0` matching `s` on `2d + 1` terms.
fn reconstruct(s: &TruncSeries<FpElem>, d: usize) -> Option<RatFun<FpElem>> {
    let p = *s.ctx();
    if s.order() < 2 * d + 1 {
        return None;
    }
    let rows: Vec<Vec<FpElem>> = (d + 1..=2 * d).map(|k| (0..=d).map(|i| *s.coeff(k - i)).collect()).collect();
    let q = Poly::new(nullspace(rows, d + 1, &p).into_iter().next()?, p);
    let num = s.mul_poly(&q).truncate(d + 1).to_poly();
    let b = RatFun::new(num, q).ok()?;
    b.is_series_at_zero().then_some(b)
}

/// For `r ∈ {2, 3}`: `Λ_p f_r|p = g_r|p = Λ_p² f_r|p`, `L_r f_r = 0`,
/// `L_r` MOM, and `f_r|p = B·g_r|p` with `B` of height `<= (p-1)/2` found
/// by reconstruction. For Apéry: `Λ_p 𝔱|p = 𝔱|p` and the Lucas property.
pub fn case_independence_ingredients(p: u64, t: usize) -> Result<CaseResult> {
    odd_prime(p, "the ingredients need p >= 3")?;
    let pu = p as usize;
    if t < pu * pu {
        return Err(Error::InvalidInput(format!("order {t} too small for p = {p}")));
    }
    let cat = Catalog::builtin();
    let mut res = CaseResult::new("independence", p);
    res.order("T", t);
    let half = (pu - 1) / 2;
    for r in [2usize, 3] {
        let fg = cat.get(&format!("f{r}"))?;
        let gg = cat.get(&format!("g{r}"))?;
        let f = fg.terms_mod_p(t, p)?;
        let g = gg.terms_mod_p(t, p)?;
        let l1 = f.cartier(p, 0);
        let l2 = l1.cartier(p, 0);
        res.push_mismatch(format!("Λ_p f_{r}|p = g_{r}|p"), l1.first_mismatch(&g), l1.order());
        res.push_mismatch(format!("Λ_p^2 f_{r}|p = g_{r}|p"), l2.first_mismatch(&g), l2.order());

        let lr = op_lr(r);
        let residual = apply_operator(&lr, &fg.series(t)?);
        let nz = residual.coeffs().iter().position(|c| !c.is_zero());
        res.push_mismatch(format!("L_{r} f_{r} = 0"), nz, residual.order());
        res.push(format!("L_{r} is MOM at zero"), is_mom(&lr), "indicial polynomial x^r at zero");

        let ratio = f.div(&g).expect("g(0) = 1");
        let label = format!("f_{r}|p = B·g_{r}|p");
        match reconstruct(&ratio, half) {
            None => res.push(label, false, format!("no rational B of height <= {half}")),
            Some(b) => match identity_mismatch(&f, &b, &g, 1, t) {
                None => res.push(label, true, format!("height {} verified to order {t}", b.height())),
                Some(i) => res.push(label, false, format!("B fails at index {i}")),
            },
        }
    }
    let a = cat.get("apery")?.terms_mod_p(t, p)?;
    let la = a.cartier(p, 0);
    res.push_mismatch("Λ_p 𝔱|p = 𝔱|p", la.first_mismatch(&a), la.order());
    let rep = p_lucas_check_reduced(&a, p, t - 1);
    res.push("𝔱 is p-Lucas", rep.holds, lucas_detail(&rep));
    Ok(res)
}

fn lucas_detail(rep: &crate::holoseries::LucasReport) -> String {
    match rep.counterexample {
        None => format!("a(r+mp) = a(r)a(m) for r+mp <= {}", rep.checked_to),
        Some((r, m)) => format!("fails at r = {r}, m = {m}"),
    }
}

/// Apéry numbers: the Lucas congruences up to index `m_bound`, in
/// coefficient form and in series form, and `Λ_p 𝔱|p = 𝔱|p`.
pub fn case_apery_lucas(p: u64, m_bound: usize) -> Result<CaseResult> {
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    let a = Catalog::builtin().get("apery")?.terms_mod_p(m_bound + 1, p)?;
    let mut res = CaseResult::new("apery", p);
    res.order("M", m_bound);
    let rep = p_lucas_check_reduced(&a, p, m_bound);
    res.push("a(r+mp) = a(r)a(m) mod p", rep.holds, lucas_detail(&rep));
    res.push("𝔱|p = P·𝔱|p(z^p), P the p-truncation", p_lucas_by_series(&a, p), format!("order {}", a.order()));
    let la = a.cartier(p, 0);
    res.push_mismatch("Λ_p 𝔱|p = 𝔱|p", la.first_mismatch(&a), la.order());
    Ok(res)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseId {
    Series210,
    Series26,
    TwoF1,
    Independence,
    AperyLucas,
}

impl CaseId {
    pub const ALL: [CaseId; 5] =
        [CaseId::Series210, CaseId::Series26, CaseId::TwoF1, CaseId::Independence, CaseId::AperyLucas];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseId::Series210 => "210",
            CaseId::Series26 => "26",
            CaseId::TwoF1 => "2f1",
            CaseId::Independence => "independence",
            CaseId::AperyLucas => "apery",
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CaseId::ALL.into_iter().find(|c| c.as_str() == s).ok_or_else(|| Error::UnknownCase(s.into()))
    }
}

/// Expands `all` and parses the remaining ids, keeping first occurrences.
pub fn parse_cases<S: AsRef<str>>(ids: &[S]) -> Result<Vec<CaseId>> {
    let mut out = Vec::new();
    for id in ids {
        let ids: Vec<CaseId> = match id.as_ref() {
            "all" => CaseId::ALL.to_vec(),
            s => vec![s.parse()?],
        };
        for c in ids {
            if !out.contains(&c) {
                out.push(c);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseOptions {
    pub jmax_210: usize,
    pub jmax_26: usize,
    pub kmax: u32,
    /// Series order for the ₂F₁ and independence cases.
    pub t: usize,
    pub lucas_bound: usize,
}

impl Default for CaseOptions {
    fn default() -> Self {
        CaseOptions { jmax_210: 40, jmax_26: 30, kmax: 2, t: 500, lucas_bound: 2000 }
    }
}

pub fn run_case(case: CaseId, p: u64, opts: &CaseOptions) -> Result<CaseResult> {
    match case {
        CaseId::Series210 => case_210(p, opts.jmax_210),
        CaseId::Series26 => case_26(p, opts.jmax_26),
        CaseId::TwoF1 => case_2f1(p, opts.kmax, opts.t),
        CaseId::Independence => case_independence_ingredients(p, opts.t),
        CaseId::AperyLucas => case_apery_lucas(p, opts.lucas_bound),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BatchReport {
    pub rows: Vec<CaseResult>,
}

impl BatchReport {
    pub fn passed(&self) -> usize {
        self.rows.iter().filter(|r| !r.is_excluded() && r.passed()).count()
    }

    pub fn failed(&self) -> usize {
        self.rows.iter().filter(|r| !r.passed()).count()
    }

    pub fn excluded(&self) -> usize {
        self.rows.iter().filter(|r| r.is_excluded()).count()
    }

    pub fn all_pass(&self) -> bool {
        self.failed() == 0
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "passed": self.passed(),
            "failed": self.failed(),
            "excluded": self.excluded(),
            "rows": self.rows.iter().map(CaseResult::to_json).collect::<Vec<_>>(),
        })
    }

    /// One line per check: `case_id,p,check_label,pass,detail`. Excluded
    /// rows get a single `excluded` line.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["case_id", "p", "check_label", "pass", "detail"]).expect("in-memory write");
        for row in &self.rows {
            let p = row.p.to_string();
            if let Some(why) = &row.excluded {
                w.write_record([row.case_id.as_str(), &p, "excluded", "excluded", why]).expect("in-memory write");
            }
            for c in &row.checks {
                let pass = if c.pass { "pass" } else { "fail" };
                w.write_record([row.case_id.as_str(), &p, &c.label, pass, &c.detail]).expect("in-memory write");
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }
}

/// Runs every `(case, prime)` pair in parallel. A prime outside a case's
/// hypotheses yields an excluded row; any other error a failed row.
pub fn batch_report(primes: &[u64], cases: &[CaseId], opts: &CaseOptions) -> BatchReport {
    let jobs: Vec<(CaseId, u64)> = cases.iter().flat_map(|&c| primes.iter().map(move |&p| (c, p))).collect();
    let rows = jobs
        .par_iter()
        .map(|&(case, p)| match run_case(case, p, opts) {
            Ok(r) => r,
            Err(Error::BadPrime { reason, .. }) => CaseResult::excluded(case.as_str(), p, reason),
            Err(e) => {
                let mut r = CaseResult::new(case.as_str(), p);
                r.push("computation", false, e.to_string());
                r
            }
        })
        .collect();
    BatchReport { rows }
}
