use super::{Basis, DiffOp};
use crate::error::{Error, Result};
use crate::exactfield::{BigRat, Field, Poly};

/// `Σ_j Q_j(m - j)·a_(m-j) = 0` for all `m`, with `Q_0(m) = m^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recurrence {
    /// `Q_0, ..., Q_d` in the index variable.
    pub polys: Vec<Poly<BigRat>>,
}

impl Recurrence {
    /// Span `d`.
    pub fn span(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn order(&self) -> usize {
        self.polys[0].deg()
    }

    /// The operator `Σ_j z^j·Q_j(δ)`.
    pub fn to_operator(&self) -> DiffOp<BigRat> {
        let refs: Vec<&Poly<BigRat>> = self.polys.iter().collect();
        super::delta_op_from_q(&refs)
    }
}

/// Writes the polynomial δ form as `Σ_j z^j·Q_j(δ)` and checks that
/// `Q_0` is a scalar multiple of `x^n`.
pub fn recurrence_from(l: &DiffOp<BigRat>) -> Result<Recurrence> {
    let ld = match l.basis() {
        Basis::Delta => l.normalize(),
        Basis::D => l.to_delta(),
    };
    let n = ld.order();
    let polys = ld.poly_coeffs();
    let span = polys.iter().map(|p| p.deg()).max().unwrap_or(0);
    let mut qs: Vec<Poly<BigRat>> = (0..=span)
        .map(|j| {
            let c: Vec<BigRat> = (0..=n).map(|k| polys[n - k].coeff(j)).collect();
            Poly::new(c, ())
        })
        .collect();
    let q0 = &qs[0];
    if q0.is_zero() || q0.deg() != n || q0.coeffs()[..n].iter().any(|c| !c.is_zero()) {
        return Err(Error::NotMomAtZero);
    }
    let u = q0.lead().unwrap().inv().unwrap();
    for q in qs.iter_mut() {
        *q = q.scale(&u);
    }
    while qs.len() > 1 && qs.last().unwrap().is_zero() {
        qs.pop();
    }
    Ok(Recurrence { polys: qs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::{op_2f1, op_apery, op_from_ints};

    fn q(ints: &[i64]) -> Poly<BigRat> {
        Poly::from_ints(ints, &())
    }

    #[test]
    fn two_f_one_recurrence() {
        let rec = recurrence_from(&op_2f1()).unwrap();
        // Q_0 = m², Q_1 = -16m² + 4, so m²a_m = (16(m-1)² - 4)a_(m-1)
        assert_eq!(rec.polys, vec![q(&[0, 0, 1]), q(&[4, 0, -16])]);
        assert_eq!(rec.span(), 1);
    }

    #[test]
    fn pure_power_has_span_zero() {
        let rec = recurrence_from(&op_from_ints(Basis::Delta, &[&[1], &[], &[]])).unwrap();
        assert_eq!(rec.polys, vec![q(&[0, 0, 1])]);
        assert_eq!(rec.span(), 0);
    }

    #[test]
    fn apery_recurrence() {
        let rec = recurrence_from(&op_apery()).unwrap();
        assert_eq!(rec.polys, vec![q(&[0, 0, 0, 1]), q(&[-5, -27, -51, -34]), q(&[1, 3, 3, 1])]);
    }

    #[test]
    fn non_mom_rejected() {
        let l = op_from_ints(Basis::Delta, &[&[1], &[-1]]);
        assert!(matches!(recurrence_from(&l), Err(Error::NotMomAtZero)));
    }

    #[test]
    fn operator_roundtrip() {
        let rec = recurrence_from(&op_apery()).unwrap();
        assert_eq!(rec.to_operator(), op_apery().to_delta());
    }
}
