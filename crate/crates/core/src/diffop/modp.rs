use super::DiffOp;
use crate::error::{Error, Result};
use crate::exactfield::{bigint_mod_p, BigRat, FpElem, Poly, RatFun};

/// Reduction of the primitive integer normal form modulo `p`.
pub fn reduce_op_mod_p(l: &DiffOp<BigRat>, p: u64) -> Result<DiffOp<FpElem>> {
    let polys = l.normalize().poly_coeffs();
    let reduced: Vec<Poly<FpElem>> = polys
        .iter()
        .map(|c| Poly::new(c.coeffs().iter().map(|x| bigint_mod_p(x.numer(), p)).collect(), p))
        .collect();
    if reduced[0].is_zero() {
        return Err(Error::BadPrime { p, reason: "leading coefficient vanishes modulo p".into() });
    }
    DiffOp::from_polys(l.basis(), reduced)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PCurvature {
    /// `A_p` as an `n×n` matrix over `F_p(z)`.
    pub matrix: Vec<Vec<RatFun<FpElem>>>,
    pub is_nilpotent: bool,
}

type Mat = Vec<Vec<RatFun<FpElem>>>;

fn mat_mul(a: &Mat, b: &Mat, ctx: u64) -> Mat {
    let n = a.len();
    let mut out = vec![vec![RatFun::zero(&ctx); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[k][j].is_zero() {
                    continue;
                }
                out[i][j] = out[i][j].add(&a[i][k].mul(&b[k][j]));
            }
        }
    }
    out
}

/// Iterates `A_(k+1) = A_k' + A_k·A_1` from the companion matrix of the
/// monic `d/dz` form up to `A_p`, and tests `A_p^n = 0`.
pub fn p_curvature(l: &DiffOp<FpElem>) -> PCurvature {
    let p = *l.ctx();
    let ld = l.to_d();
    let n = ld.order();
    let a = ld.monic_coeffs();
    let mut a1: Mat = vec![vec![RatFun::zero(&p); n]; n];
    for i in 0..n - 1 {
        a1[i][i + 1] = RatFun::one(&p);
    }
    for j in 0..n {
        // last row: -a_n, ..., -a_1
        a1[n - 1][j] = a[n - 1 - j].neg();
    }
    let mut ak = a1.clone();
    for _ in 1..p {
        let prod = mat_mul(&ak, &a1, p);
        ak = ak
            .iter()
            .zip(prod.iter())
            .map(|(row, prow)| row.iter().zip(prow).map(|(x, y)| x.derivative().add(y)).collect())
            .collect();
    }
    let mut power = ak.clone();
    for _ in 1..n {
        power = mat_mul(&power, &ak, p);
    }
    let is_nilpotent = power.iter().all(|row| row.iter().all(|x| x.is_zero()));
    PCurvature { matrix: ak, is_nilpotent }
}

/// Convenience: reduce then compute the p-curvature.
pub fn p_curvature_of(l: &DiffOp<BigRat>, p: u64) -> Result<PCurvature> {
    Ok(p_curvature(&reduce_op_mod_p(l, p)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::{op_2f1, op_apery, op_from_ints, op_lr, Basis};

    #[test]
    fn two_f_one_mod_three() {
        let l3 = reduce_op_mod_p(&op_2f1(), 3).unwrap();
        let expect = DiffOp::from_polys(
            Basis::D,
            vec![Poly::from_ints(&[0, 1, -1], &3), Poly::from_ints(&[1, -1], &3), Poly::from_ints(&[1], &3)],
        )
        .unwrap();
        assert_eq!(l3, expect);
    }

    #[test]
    fn one_third_is_bad_at_three() {
        let l = op_from_ints(Basis::Delta, &[&[3], &[-1]]);
        assert!(matches!(reduce_op_mod_p(&l, 3), Err(Error::BadPrime { p: 3, .. })));
        assert!(reduce_op_mod_p(&l, 5).is_ok());
    }

    #[test]
    fn derivative_has_zero_curvature() {
        let d = DiffOp::from_polys(Basis::D, vec![Poly::one(&5), Poly::zero(&5)]).unwrap();
        let pc = p_curvature(&d);
        assert!(pc.matrix[0][0].is_zero());
        assert!(pc.is_nilpotent);
    }

    #[test]
    fn delta_minus_constant_has_zero_curvature() {
        // A_k = c(c-1)...(c-k+1)/z^k, and the product over a full residue
        // system vanishes in F_p, so A_p = 0 for every constant c
        for c in 1..5 {
            let l = DiffOp::from_polys(Basis::Delta, vec![Poly::one(&5), Poly::from_ints(&[-c], &5)]).unwrap();
            let pc = p_curvature(&l);
            assert!(pc.matrix[0][0].is_zero());
            assert!(pc.is_nilpotent);
        }
    }

    #[test]
    fn exponential_equation_is_not_nilpotent() {
        // d - 1: A_k = 1 for all k
        let l = DiffOp::from_polys(Basis::D, vec![Poly::one(&7), Poly::from_ints(&[-1], &7)]).unwrap();
        let pc = p_curvature(&l);
        assert_eq!(pc.matrix[0][0], RatFun::one(&7));
        assert!(!pc.is_nilpotent);
    }

    #[test]
    fn catalog_operators_nilpotent() {
        assert!(p_curvature_of(&op_2f1(), 3).unwrap().is_nilpotent);
        for p in [5, 7] {
            assert!(p_curvature_of(&op_apery(), p).unwrap().is_nilpotent);
            assert!(p_curvature_of(&op_lr(3), p).unwrap().is_nilpotent);
        }
    }
}
