use crate::diffop::{recurrence_from, Basis, DiffOp};
use crate::error::{Error, Result};
use crate::exactfield::{BigRat, Field};
use crate::holoseries::{expand, TruncSeries};

type Mat = Vec<Vec<TruncSeries<BigRat>>>;
type ScalarMat = Vec<Vec<BigRat>>;

fn rat(n: i64) -> BigRat {
    BigRat::from_i64(n, &())
}

fn zero_mat(n: usize) -> ScalarMat {
    vec![vec![rat(0); n]; n]
}

fn mat_mul(a: &ScalarMat, b: &ScalarMat) -> ScalarMat {
    let n = a.len();
    let mut out = zero_mat(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] = out[i][j].add(&a[i][k].mul(&b[k][j]));
                }
            }
        }
    }
    out
}

fn mat_add(a: &ScalarMat, b: &ScalarMat) -> ScalarMat {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.add(y)).collect()).collect()
}

fn mat_sub(a: &ScalarMat, b: &ScalarMat) -> ScalarMat {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.sub(y)).collect()).collect()
}

fn mat_scale(a: &ScalarMat, c: &BigRat) -> ScalarMat {
    a.iter().map(|r| r.iter().map(|x| x.mul(c)).collect()).collect()
}

fn is_zero_mat(a: &ScalarMat) -> bool {
    a.iter().all(|r| r.iter().all(|x| x.is_zero()))
}

/// Coefficient matrices `M_0, ..., M_(t-1)` of a matrix series.
fn coeff_mats(m: &Mat, t: usize) -> Vec<ScalarMat> {
    (0..t).map(|k| m.iter().map(|r| r.iter().map(|s| s.coeff(k).clone()).collect()).collect()).collect()
}

fn from_coeff_mats(cs: &[ScalarMat], n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| TruncSeries::new(cs.iter().map(|c| c[i][j].clone()).collect(), ())).collect())
        .collect()
}

/// Product of matrix series to order `t`.
fn series_mat_mul(a: &[ScalarMat], b: &[ScalarMat], t: usize) -> Vec<ScalarMat> {
    let n = a[0].len();
    (0..t)
        .map(|m| (0..=m).fold(zero_mat(n), |acc, k| mat_add(&acc, &mat_mul(&a[k], &b[m - k]))))
        .collect()
}

/// Inverse of a matrix series with identity constant term.
fn series_mat_inv(a: &[ScalarMat], t: usize) -> Vec<ScalarMat> {
    let n = a[0].len();
    let mut x: Vec<ScalarMat> = Vec::with_capacity(t);
    let mut id = zero_mat(n);
    for (i, row) in id.iter_mut().enumerate() {
        row[i] = rat(1);
    }
    x.push(id);
    for m in 1..t {
        let s = (1..=m).fold(zero_mat(n), |acc, k| mat_add(&acc, &mat_mul(&a[k], &x[m - k])));
        x.push(mat_scale(&s, &rat(-1)));
    }
    x
}

/// Truncated shadow of the weak Frobenius structure of a MOM operator.
#[derive(Clone, Debug)]
pub struct FrobShadow {
    pub p: u64,
    pub t: usize,
    /// `δ`-companion matrix `G` as a matrix series to order `t`.
    pub g: Mat,
    /// Uniform part: `Y(0) = I`, `δY = GY - YG(0)`.
    pub y: Mat,
    /// `[δ(Λ_p Y) + (1/p)Λ_p(Y)G(0)](Λ_p Y)^(-1)` to order `ceil(t/p)`.
    pub f: Mat,
    /// The series `f` with `f(0) = 1` annihilated by the operator.
    pub solution: TruncSeries<BigRat>,
    /// Last-row residual `Σ_j F_(n,j)·Λ_p(δ^(j-1) f) - δ(Λ_p(δ^(n-1) f))`.
    pub residual: TruncSeries<BigRat>,
}

impl FrobShadow {
    pub fn n(&self) -> usize {
        self.g.len()
    }

    pub fn y0_is_identity(&self) -> bool {
        (0..self.n()).all(|i| (0..self.n()).all(|j| *self.y[i][j].coeff(0) == rat((i == j) as i64)))
    }

    /// `p·F(0) = G(0)`.
    pub fn pf0_equals_g0(&self) -> bool {
        let p = rat(self.p as i64);
        (0..self.n()).all(|i| (0..self.n()).all(|j| self.f[i][j].coeff(0).mul(&p) == *self.g[i][j].coeff(0)))
    }

    /// First column of `Y` against `(f, δf, ..., δ^(n-1) f)`.
    pub fn first_column_matches(&self) -> bool {
        let mut v = self.solution.clone();
        for i in 0..self.n() {
            if !self.y[i][0].equal_to_order(&v) {
                return false;
            }
            v = v.delta();
        }
        true
    }

    /// Number of leading coefficients of the residual that vanish.
    pub fn residual_vanishes_to(&self) -> usize {
        self.residual.coeffs().iter().position(|c| !c.is_zero()).unwrap_or(self.residual.order())
    }
}

pub fn frobenius_shadow(l: &DiffOp<BigRat>, p: u64, t: usize) -> Result<FrobShadow> {
    let rec = recurrence_from(l)?;
    let ld = match l.basis() {
        Basis::Delta => l.normalize(),
        Basis::D => l.to_delta(),
    };
    let n = ld.order();
    let polys = ld.poly_coeffs();
    let lead_inv = TruncSeries::from_poly(&polys[0], t).inv().ok_or(Error::NotMomAtZero)?;
    // monic coefficients b_1..b_n of δ^(n-1), ..., 1
    let b: Vec<TruncSeries<BigRat>> = (1..=n).map(|i| TruncSeries::from_poly(&polys[i], t).mul(&lead_inv)).collect();
    let zero = TruncSeries::zeros(t, &());
    let mut g: Mat = vec![vec![zero.clone(); n]; n];
    for i in 0..n - 1 {
        g[i][i + 1] = TruncSeries::one(t, &());
    }
    for j in 0..n {
        g[n - 1][j] = b[n - 1 - j].neg();
    }
    let gc = coeff_mats(&g, t);
    let g0 = gc[0].clone();

    let mut yc: Vec<ScalarMat> = Vec::with_capacity(t);
    let mut id = zero_mat(n);
    for (i, row) in id.iter_mut().enumerate() {
        row[i] = rat(1);
    }
    yc.push(id);
    for m in 1..t {
        let rhs = (1..=m).fold(zero_mat(n), |acc, k| {
            if is_zero_mat(&gc[k]) {
                acc
            } else {
                mat_add(&acc, &mat_mul(&gc[k], &yc[m - k]))
            }
        });
        // (m - ad_(G0)) Y_m = rhs, by Neumann series on the nilpotent ad_(G0)
        let inv_m = rat(1).div(&rat(m as i64)).unwrap();
        let mut term = mat_scale(&rhs, &inv_m);
        let mut ym = term.clone();
        let mut steps = 0;
        while !is_zero_mat(&term) {
            steps += 1;
            if steps > 2 * n {
                return Err(Error::SylvesterSingular { m });
            }
            term = mat_scale(&mat_sub(&mat_mul(&g0, &term), &mat_mul(&term, &g0)), &inv_m);
            ym = mat_add(&ym, &term);
        }
        yc.push(ym);
    }
    let y = from_coeff_mats(&yc, n);

    let ly: Mat = y.iter().map(|r| r.iter().map(|s| s.cartier(p, 0)).collect()).collect();
    let tl = ly[0][0].order();
    let lyc = coeff_mats(&ly, tl);
    let dly: Vec<ScalarMat> = lyc.iter().enumerate().map(|(k, c)| mat_scale(c, &rat(k as i64))).collect();
    let inv_p = rat(1).div(&rat(p as i64)).unwrap();
    let left: Vec<ScalarMat> =
        dly.iter().zip(&lyc).map(|(d, c)| mat_add(d, &mat_scale(&mat_mul(c, &g0), &inv_p))).collect();
    let fc = series_mat_mul(&left, &series_mat_inv(&lyc, tl), tl);
    let f_mat = from_coeff_mats(&fc, n);

    let solution = expand(&rec, &[rat(1)], t)?;
    let mut lambdas = Vec::with_capacity(n);
    let mut v = solution.clone();
    for _ in 0..n {
        lambdas.push(v.cartier(p, 0));
        v = v.delta();
    }
    let mut residual = lambdas[n - 1].delta().neg();
    for (j, lam) in lambdas.iter().enumerate() {
        residual = residual.add(&f_mat[n - 1][j].mul(lam));
    }
    Ok(FrobShadow { p, t, g, y, f: f_mat, solution, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::{op_2f1, op_apery, op_from_ints};

    #[test]
    fn two_f_one_at_three() {
        let s = frobenius_shadow(&op_2f1(), 3, 60).unwrap();
        assert!(s.y0_is_identity());
        assert!(s.pf0_equals_g0());
        let third = BigRat::new(1.into(), 3.into());
        assert_eq!(*s.f[0][1].coeff(0), third);
        assert!(s.f[0][0].coeff(0).is_zero() && s.f[1][0].coeff(0).is_zero() && s.f[1][1].coeff(0).is_zero());
        assert!(s.first_column_matches());
        assert!(s.residual_vanishes_to() >= 60 / 3 - 1);
    }

    #[test]
    fn first_order_delta() {
        let s = frobenius_shadow(&op_from_ints(Basis::Delta, &[&[1], &[]]), 5, 20).unwrap();
        assert!(s.y[0][0].equal_to_order(&TruncSeries::one(20, &())));
        assert!(s.f[0][0].is_zero());
    }

    #[test]
    fn apery_residual() {
        let s = frobenius_shadow(&op_apery(), 5, 60).unwrap();
        assert!(s.pf0_equals_g0() && s.first_column_matches());
        assert!(s.residual_vanishes_to() >= 11);
    }
}
