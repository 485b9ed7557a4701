use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::TruncSeries;
use crate::diffop::{Basis, DiffOp, Recurrence};
use crate::error::{Error, Result};
use crate::exactfield::{reduce_rat_mod_p, BigRat, Field, FpElem};

/// Integer-scaled recurrence polynomials: `D·Q_j` with a common denominator `D`.
fn integer_polys(rec: &Recurrence) -> Vec<Vec<BigInt>> {
    let mut den = BigInt::one();
    for q in &rec.polys {
        for c in q.coeffs() {
            den = den.lcm(c.denom());
        }
    }
    rec.polys
        .iter()
        .map(|q| q.coeffs().iter().map(|c| c.numer() * (&den / c.denom())).collect())
        .collect()
}

fn eval_int(q: &[BigInt], x: i64) -> BigInt {
    let mut acc = BigInt::zero();
    for c in q.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Calls `emit(m, a_m)` for `m < t`, solving the recurrence forward.
///
/// Works over the integers while every value stays integral and falls
/// back to rationals otherwise. `initial` fixes the first coefficients.
/// Indices where `Q_0(m) = 0` must be covered by `initial`; elsewhere a
/// supplied initial value has to agree with the recurrence.
pub fn expand_with(
    rec: &Recurrence,
    initial: &[BigRat],
    t: usize,
    mut emit: impl FnMut(usize, &BigRat) -> Result<()>,
) -> Result<()> {
    let q = integer_polys(rec);
    let span = rec.span();
    let mut ints: Option<Vec<BigInt>> = Some(Vec::with_capacity(span + 1));
    let mut rats: Vec<BigRat> = Vec::with_capacity(span + 1);
    for m in 0..t {
        let lead = eval_int(&q[0], m as i64);
        let mut value: Option<BigRat> = None;
        if let Some(window) = ints.as_mut() {
            let mut rhs = BigInt::zero();
            for j in 1..=span.min(m) {
                let prev = &window[window.len() - j];
                if !prev.is_zero() {
                    rhs -= eval_int(&q[j], (m - j) as i64) * prev;
                }
            }
            let v = if lead.is_zero() {
                match initial.get(m) {
                    Some(v) if rhs.is_zero() => Some(v.clone()),
                    Some(_) => return Err(Error::InitialMismatch { index: m }),
                    None => return Err(Error::LeadingZero { m }),
                }
            } else {
                let (quo, rem) = rhs.div_rem(&lead);
                let v = if rem.is_zero() { BigRat::from_integer(quo) } else { BigRat::new(rhs, lead.clone()) };
                if initial.get(m).is_some_and(|g| *g != v) {
                    return Err(Error::InitialMismatch { index: m });
                }
                Some(v)
            };
            let v = v.unwrap();
            if v.is_integer() {
                window.push(v.numer().clone());
                if window.len() > span {
                    window.remove(0);
                }
            } else {
                rats = window.iter().cloned().map(BigRat::from_integer).collect();
                rats.push(v.clone());
                if rats.len() > span {
                    rats.remove(0);
                }
                ints = None;
            }
            value = Some(v);
        }
        let v = match value {
            Some(v) => v,
            None => {
                let lead = BigRat::from_integer(lead);
                let mut rhs = <BigRat as Zero>::zero();
                for j in 1..=span.min(m) {
                    let prev = &rats[rats.len() - j];
                    if !Zero::is_zero(prev) {
                        rhs -= BigRat::from_integer(eval_int(&q[j], (m - j) as i64)) * prev;
                    }
                }
                let v = if Zero::is_zero(&lead) {
                    match initial.get(m) {
                        Some(v) if Zero::is_zero(&rhs) => v.clone(),
                        Some(_) => return Err(Error::InitialMismatch { index: m }),
                        None => return Err(Error::LeadingZero { m }),
                    }
                } else {
                    let v = rhs / lead;
                    if initial.get(m).is_some_and(|g| *g != v) {
                        return Err(Error::InitialMismatch { index: m });
                    }
                    v
                };
                rats.push(v.clone());
                if rats.len() > span {
                    rats.remove(0);
                }
                v
            }
        };
        emit(m, &v)?;
    }
    Ok(())
}

/// Forward solution of the recurrence over the rationals.
pub fn expand(rec: &Recurrence, initial: &[BigRat], t: usize) -> Result<TruncSeries<BigRat>> {
    let mut a = Vec::with_capacity(t);
    expand_with(rec, initial, t, |_, v| {
        a.push(v.clone());
        Ok(())
    })?;
    Ok(TruncSeries::new(a, ()))
}

/// Exact expansion followed by reduction, keeping only a sliding window
/// of exact values.
pub fn expand_mod_p(rec: &Recurrence, initial: &[BigRat], t: usize, p: u64) -> Result<TruncSeries<FpElem>> {
    let mut a = Vec::with_capacity(t);
    expand_with(rec, initial, t, |m, v| {
        a.push(reduce_rat_mod_p(v, p).map_err(|_| Error::NotPLocal { p, index: Some(m) })?);
        Ok(())
    })?;
    Ok(TruncSeries::new(a, p))
}

/// `L·f` on truncations. In the δ basis the result keeps the order `T`;
/// in the `d/dz` basis it has order `T - n`.
pub fn apply_operator<F: Field>(l: &DiffOp<F>, f: &TruncSeries<F>) -> TruncSeries<F> {
    let polys = l.poly_coeffs();
    let n = l.order();
    let ctx = f.ctx().clone();
    match l.basis() {
        Basis::Delta => {
            let mut acc = TruncSeries::zeros(f.order(), &ctx);
            let mut dk = f.clone();
            for k in 0..=n {
                acc = acc.add(&dk.mul_poly(&polys[n - k]));
                dk = dk.delta();
            }
            acc
        }
        Basis::D => {
            let t = f.order().saturating_sub(n);
            let mut acc = TruncSeries::zeros(t, &ctx);
            let mut dk = f.clone();
            for k in 0..=n {
                acc = acc.add(&dk.truncate(t).mul_poly(&polys[n - k]));
                dk = dk.derivative();
            }
            acc
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::{op_2f1, op_apery, op_from_ints, recurrence_from};
    use crate::holoseries::{reduce_series_mod_p, series_q};

    fn one() -> Vec<BigRat> {
        vec![BigRat::from_i64(1, &())]
    }

    #[test]
    fn two_f_one_terms() {
        let rec = recurrence_from(&op_2f1()).unwrap();
        assert_eq!(expand(&rec, &one(), 4).unwrap(), series_q(&[1, -4, -12, -80]));
    }

    #[test]
    fn constants_only() {
        let rec = recurrence_from(&op_from_ints(Basis::Delta, &[&[1], &[]])).unwrap();
        assert_eq!(expand(&rec, &one(), 4).unwrap(), series_q(&[1, 0, 0, 0]));
    }

    #[test]
    fn apery_terms() {
        let rec = recurrence_from(&op_apery()).unwrap();
        assert_eq!(expand(&rec, &one(), 4).unwrap(), series_q(&[1, 5, 73, 1445]));
    }

    #[test]
    fn missing_and_mismatched_initial_values() {
        let rec = recurrence_from(&op_2f1()).unwrap();
        assert_eq!(expand(&rec, &[], 3), Err(Error::LeadingZero { m: 0 }));
        let wrong = vec![BigRat::from_i64(1, &()), BigRat::from_i64(5, &())];
        assert_eq!(expand(&rec, &wrong, 3), Err(Error::InitialMismatch { index: 1 }));
    }

    #[test]
    fn rational_fallback_and_mod_p() {
        // (1 - z)^(-1/2): a_m = a_(m-1)(2m - 1)/(2m)
        let half = op_from_ints(Basis::Delta, &[&[2, -2], &[0, -1]]);
        let rec = recurrence_from(&half).unwrap();
        let f = expand(&rec, &one(), 5).unwrap();
        let want: Vec<BigRat> = [(1, 1), (1, 2), (3, 8), (5, 16), (35, 128)]
            .iter()
            .map(|&(a, b)| BigRat::new(a.into(), b.into()))
            .collect();
        assert_eq!(f.coeffs(), &want[..]);
        let g = expand_mod_p(&rec, &one(), 5, 3).unwrap();
        assert_eq!(g, reduce_series_mod_p(&f, 3).unwrap());
        assert!(matches!(expand_mod_p(&rec, &one(), 5, 2), Err(Error::NotPLocal { p: 2, index: Some(1) })));
    }

    #[test]
    fn annihilation_in_both_bases() {
        let rec = recurrence_from(&op_2f1()).unwrap();
        let f = expand(&rec, &one(), 40).unwrap();
        assert!(apply_operator(&op_2f1(), &f).is_zero());
        assert!(apply_operator(&op_2f1().to_delta(), &f).is_zero());
    }
}
