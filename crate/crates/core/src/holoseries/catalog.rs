use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::{expand, expand_mod_p, TruncSeries};
use crate::diffop::{
    delta_op_from_q, op_apery, op_binom_power, op_lr, operator_from_value, operator_to_json, recurrence_from,
    DiffOp,
};
use crate::error::{Error, Result};
use crate::exactfield::{bigint_mod_p, parse_rat, reduce_rat_mod_p, BigRat, Field, FpElem, Poly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeqKind {
    /// `Σ C(2n,n)^r zⁿ`
    BinomPower(u32),
    /// `Σ -C(2n,n)^r/(2n-1) zⁿ`
    FR(u32),
    Apery,
    Cy26,
    Cy210,
    Operator { op: DiffOp<BigRat>, initial: Vec<BigRat> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeqGen {
    pub name: String,
    pub kind: SeqKind,
}

fn central_binomials(t: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(t);
    let mut c = BigInt::one();
    for n in 0..t {
        if n > 0 {
            let n = n as u64;
            c = c * (2 * n) * (2 * n - 1) / (n * n);
        }
        out.push(c.clone());
    }
    out
}

fn apery_term(n: u64) -> BigInt {
    // u_k = C(n,k)·C(n+k,k)
    let mut u = BigInt::one();
    let mut sum = BigInt::zero();
    for k in 0..=n {
        if k > 0 {
            u = u * (n - k + 1) * (n + k) / (k * k);
        }
        sum += &u * &u;
    }
    sum
}

fn binom(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `Σ_k C(j,k)²·C(j+k,k)·C(2k,j)` without the central binomial factor.
fn cy26_inner(j: u64) -> BigInt {
    let k0 = j.div_ceil(2);
    let mut cj = binom(j, k0);
    let mut cjk = binom(j + k0, k0);
    let mut c2k = binom(2 * k0, j);
    let mut sum = BigInt::zero();
    for k in k0..=j {
        if k > k0 {
            cj = cj * (j - k + 1) / k;
            cjk = cjk * (j + k) / k;
            c2k = c2k * (2 * k) * (2 * k - 1) / ((2 * k - j) * (2 * k - 1 - j));
        }
        sum += &cj * &cj * &cjk * &c2k;
    }
    sum
}

/// `Σ_(k=0)^(2j) (-1)^k C(2j,k)⁴`.
fn cy210_inner(j: u64) -> BigInt {
    let n = 2 * j;
    let mut c = BigInt::one();
    let mut sum = BigInt::zero();
    for k in 0..=n {
        if k > 0 {
            c = c * (n - k + 1) / k;
        }
        let sq = &c * &c;
        let t = &sq * &sq;
        if k % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
    }
    sum
}

fn qs(rows: &[&[i64]]) -> DiffOp<BigRat> {
    let polys: Vec<Poly<BigRat>> = rows.iter().map(|r| Poly::from_ints(r, &())).collect();
    let refs: Vec<&Poly<BigRat>> = polys.iter().collect();
    delta_op_from_q(&refs)
}

/// Operator found by recurrence guessing on the sum for series 26.
pub fn op_cy26() -> DiffOp<BigRat> {
    qs(CY26_Q)
}

/// Operator found by recurrence guessing on the sum for series 210.
pub fn op_cy210() -> DiffOp<BigRat> {
    qs(CY210_Q)
}

const CY26_Q: &[&[i64]] = &[
    &[0, 0, 0, 0, 1],
    &[-8, -58, -162, -208, -104],
    &[-288, -1416, -2436, -1728, -432],
];
const CY210_Q: &[&[i64]] = &[
    &[0, 0, 0, 0, 25],
    &[700, 6100, 19620, 27040, 13760],
    &[-4240, -20160, 1536, 112128, 93696],
    &[5120, 30720, 70656, 122880, 180224],
    &[4096, 32768, 98304, 131072, 65536],
];

impl SeqGen {
    pub fn new(name: impl Into<String>, kind: SeqKind) -> Self {
        SeqGen { name: name.into(), kind }
    }

    /// The first `t` coefficients, exactly.
    pub fn gen_terms(&self, t: usize) -> Result<Vec<BigRat>> {
        let ints: Vec<BigInt> = match &self.kind {
            SeqKind::BinomPower(r) => central_binomials(t).into_iter().map(|c| c.pow(*r)).collect(),
            SeqKind::FR(r) => {
                return Ok(central_binomials(t)
                    .into_iter()
                    .enumerate()
                    .map(|(n, c)| BigRat::new(-c.pow(*r), BigInt::from(2 * n as i64 - 1)))
                    .collect())
            }
            SeqKind::Apery => (0..t as u64).map(apery_term).collect(),
            SeqKind::Cy26 => {
                central_binomials(t).into_iter().enumerate().map(|(j, c)| c * cy26_inner(j as u64)).collect()
            }
            SeqKind::Cy210 => {
                central_binomials(t).into_iter().enumerate().map(|(j, c)| c * cy210_inner(j as u64)).collect()
            }
            SeqKind::Operator { op, initial } => {
                return Ok(expand(&recurrence_from(op)?, initial, t)?.into_coeffs());
            }
        };
        Ok(ints.into_iter().map(BigRat::from_integer).collect())
    }

    /// `f|_p` to order `t`: exact values reduced one at a time. Closed
    /// forms stream the central binomials; the other kinds run their
    /// recurrence exactly.
    pub fn terms_mod_p(&self, t: usize, p: u64) -> Result<TruncSeries<FpElem>> {
        let reduce = |m: usize, v: BigRat| reduce_rat_mod_p(&v, p).map_err(|_| Error::NotPLocal { p, index: Some(m) });
        match &self.kind {
            SeqKind::BinomPower(_) | SeqKind::FR(_) => {
                let mut out = Vec::with_capacity(t);
                let mut c = BigInt::one();
                for n in 0..t {
                    if n > 0 {
                        let k = n as u64;
                        c = c * (2 * k) * (2 * k - 1) / (k * k);
                    }
                    let v = match self.kind {
                        SeqKind::BinomPower(r) => bigint_mod_p(&c, p).pow(r as u64),
                        SeqKind::FR(r) => {
                            let den = 2 * n as i64 - 1;
                            if den.rem_euclid(p as i64) == 0 {
                                reduce(n, BigRat::new(-c.pow(r), BigInt::from(den)))?
                            } else {
                                bigint_mod_p(&c, p)
                                    .pow(r as u64)
                                    .neg()
                                    .div(&FpElem::from_i64(den, &p))
                                    .expect("p does not divide 2n - 1")
                            }
                        }
                        _ => unreachable!(),
                    };
                    out.push(v);
                }
                Ok(TruncSeries::new(out, p))
            }
            SeqKind::Operator { op, initial } => expand_mod_p(&recurrence_from(op)?, initial, t, p),
            _ => expand_mod_p(&recurrence_from(&self.operator()?)?, &[BigRat::from_integer(BigInt::one())], t, p),
        }
    }

    /// The exact coefficient of index `n`, by its closed form when there is one.
    pub fn exact_term(&self, n: usize) -> Result<BigRat> {
        let c = || binom(2 * n as u64, n as u64);
        Ok(match &self.kind {
            SeqKind::BinomPower(r) => BigRat::from_integer(c().pow(*r)),
            SeqKind::FR(r) => BigRat::new(-c().pow(*r), BigInt::from(2 * n as i64 - 1)),
            SeqKind::Apery => BigRat::from_integer(apery_term(n as u64)),
            SeqKind::Cy26 => BigRat::from_integer(c() * cy26_inner(n as u64)),
            SeqKind::Cy210 => BigRat::from_integer(c() * cy210_inner(n as u64)),
            SeqKind::Operator { .. } => self.gen_terms(n + 1)?.pop().expect("n + 1 terms"),
        })
    }

    pub fn series(&self, t: usize) -> Result<TruncSeries<BigRat>> {
        Ok(TruncSeries::new(self.gen_terms(t)?, ()))
    }

    /// The annihilating operator attached to the entry, in δ form.
    pub fn operator(&self) -> Result<DiffOp<BigRat>> {
        Ok(match &self.kind {
            SeqKind::BinomPower(r) => op_binom_power(*r as usize),
            SeqKind::FR(r) => op_lr(*r as usize),
            SeqKind::Apery => op_apery().to_delta(),
            SeqKind::Cy26 => op_cy26(),
            SeqKind::Cy210 => op_cy210(),
            SeqKind::Operator { op, .. } => op.to_delta(),
        })
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({"name": self.name});
        let (kind, r) = match &self.kind {
            SeqKind::BinomPower(r) => ("binom_power", Some(*r)),
            SeqKind::FR(r) => ("f_r", Some(*r)),
            SeqKind::Apery => ("apery", None),
            SeqKind::Cy26 => ("cy26", None),
            SeqKind::Cy210 => ("cy210", None),
            SeqKind::Operator { op, initial } => {
                v["operator"] = operator_to_json(op);
                v["initial"] = initial.iter().map(|c| Value::String(c.to_string())).collect();
                ("operator", None)
            }
        };
        v["kind"] = json!(kind);
        if let Some(r) = r {
            v["r"] = json!(r);
        }
        v
    }

    pub fn from_json_value(v: &Value, loc: &str) -> Result<Self> {
        let perr = |field: &str, msg: &str| Error::Parse { location: format!("{loc}{field}"), message: msg.into() };
        let name = v.get("name").and_then(Value::as_str).ok_or_else(|| perr(".name", "missing string field"))?;
        let kind = v.get("kind").and_then(Value::as_str).ok_or_else(|| perr(".kind", "missing string field"))?;
        let r = || -> Result<u32> {
            let r = v.get("r").and_then(Value::as_u64).ok_or_else(|| perr(".r", "missing positive integer"))?;
            if r == 0 || r > 64 {
                return Err(perr(".r", "must be in 1..=64"));
            }
            Ok(r as u32)
        };
        let kind = match kind {
            "binom_power" => SeqKind::BinomPower(r()?),
            "f_r" => SeqKind::FR(r()?),
            "apery" => SeqKind::Apery,
            "cy26" => SeqKind::Cy26,
            "cy210" => SeqKind::Cy210,
            "operator" => {
                let op = operator_from_value(v.get("operator").ok_or_else(|| perr(".operator", "missing"))?)
                    .map_err(|e| match e {
                        Error::Parse { location, message } => Error::Parse {
                            location: format!("{loc}.operator{}", location.trim_start_matches('$')),
                            message,
                        },
                        other => other,
                    })?;
                let initial = match v.get("initial") {
                    None => vec![BigRat::from_integer(BigInt::one())],
                    Some(Value::Array(items)) => items
                        .iter()
                        .enumerate()
                        .map(|(i, x)| {
                            let s = match x {
                                Value::String(s) => s.clone(),
                                Value::Number(n) => n.to_string(),
                                _ => String::new(),
                            };
                            parse_rat(&s).map_err(|_| perr(&format!(".initial[{i}]"), "not a rational number"))
                        })
                        .collect::<Result<_>>()?,
                    Some(_) => return Err(perr(".initial", "expected an array")),
                };
                recurrence_from(&op)?;
                SeqKind::Operator { op, initial }
            }
            other => return Err(perr(".kind", &format!("unknown kind '{other}'"))),
        };
        Ok(SeqGen::new(name, kind))
    }
}

/// Named sequences, builtin entries first.
#[derive(Clone, Debug, Default)]
pub struct Catalog {
    entries: BTreeMap<String, SeqGen>,
}

impl Catalog {
    pub fn empty() -> Self {
        Catalog::default()
    }

    pub fn builtin() -> Self {
        let mut c = Catalog::empty();
        for (name, kind) in [
            ("g1", SeqKind::BinomPower(1)),
            ("g2", SeqKind::BinomPower(2)),
            ("g3", SeqKind::BinomPower(3)),
            ("f1", SeqKind::BinomPower(2)),
            ("f2", SeqKind::FR(2)),
            ("f3", SeqKind::FR(3)),
            ("apery", SeqKind::Apery),
            ("cy26", SeqKind::Cy26),
            ("cy210", SeqKind::Cy210),
        ] {
            c.insert(SeqGen::new(name, kind));
        }
        c
    }

    pub fn insert(&mut self, g: SeqGen) {
        self.entries.insert(g.name.clone(), g);
    }

    pub fn get(&self, name: &str) -> Result<&SeqGen> {
        self.entries.get(name).ok_or_else(|| Error::UnknownSeries(name.to_string()))
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.keys().map(String::as_str).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &SeqGen> {
        self.entries.values()
    }

    /// Accepts a single entry or an array of entries.
    pub fn extend_from_json(&mut self, text: &str) -> Result<()> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
            location: format!("line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        match &v {
            Value::Array(items) => {
                for (i, item) in items.iter().enumerate() {
                    self.insert(SeqGen::from_json_value(item, &format!("$[{i}]"))?);
                }
            }
            _ => self.insert(SeqGen::from_json_value(&v, "$")?),
        }
        Ok(())
    }
}
