use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{poly, FpElem, Field, Poly};
use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type BigRat = BigRational;

impl Field for BigRat {
    type Ctx = ();

    fn zero(_: &()) -> Self {
        <BigRat as Zero>::zero()
    }

    fn one(_: &()) -> Self {
        <BigRat as One>::one()
    }

    fn from_i64(n: i64, _: &()) -> Self {
        BigRat::from_integer(BigInt::from(n))
    }

    fn ctx(&self) {}

    fn characteristic(_: &()) -> u64 {
        0
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn neg(&self) -> Self {
        -self
    }

    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }

    fn canonical_unit(coeffs: &[Self], _: &()) -> Self {
        let first = match coeffs.iter().find(|c| !Zero::is_zero(*c)) {
            Some(c) => c,
            None => return <BigRat as One>::one(),
        };
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in coeffs.iter().filter(|c| !Zero::is_zero(*c)) {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let content = BigRat::new(num_gcd, den_lcm);
        if first.is_negative() {
            -content
        } else {
            content
        }
    }

    fn poly_gcd(a: &Poly<Self>, b: &Poly<Self>) -> Poly<Self> {
        poly::primitive_gcd_q(a, b)
    }

    fn factor_poly(a: &Poly<Self>) -> Result<Vec<(Poly<Self>, usize)>> {
        super::factor_over_q(a)
    }
}

/// Reduction `Z_(p) -> F_p`.
///
/// Fails with [`Error::NotPLocal`] when `p` divides the denominator.
pub fn reduce_rat_mod_p(q: &BigRat, p: u64) -> Result<FpElem> {
    let pb = BigInt::from(p);
    let den = q.denom().mod_floor(&pb);
    if den.is_zero() {
        return Err(Error::NotPLocal { p, index: None });
    }
    let num = q.numer().mod_floor(&pb);
    let num = FpElem::new(num.to_u64().unwrap_or(0), p);
    let den = FpElem::new(den.to_u64().unwrap_or(0), p);
    Ok(num.mul(&den.inv().expect("nonzero residue is invertible")))
}

/// Reduction of an integer modulo `p`.
pub(crate) fn bigint_mod_p(n: &BigInt, p: u64) -> FpElem {
    let r = n.mod_floor(&BigInt::from(p));
    FpElem::new(r.to_u64().unwrap_or(0), p)
}

/// Parses `"a"`, `"-a/b"` or `"a/b"` into a reduced rational.
pub fn parse_rat(s: &str) -> Result<BigRat> {
    let s = s.trim();
    let bad = || Error::Parse { location: s.to_string(), message: "not a rational number".into() };
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(BigRat::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRat {
        BigRat::new(n.into(), d.into())
    }

    #[test]
    fn zero_reduces_to_zero() {
        assert!(reduce_rat_mod_p(&rat(0, 1), 7).unwrap().is_zero());
    }

    #[test]
    fn minus_one_third_mod_five() {
        // brute force: the residue x with 3x = -1 mod 5
        let expected = (0..5u64).find(|x| (3 * x + 1) % 5 == 0).unwrap();
        assert_eq!(expected, 3);
        assert_eq!(reduce_rat_mod_p(&rat(-1, 3), 5).unwrap().residue(), expected);
    }

    #[test]
    fn p_in_denominator_is_rejected() {
        assert!(matches!(reduce_rat_mod_p(&rat(1, 5), 5), Err(Error::NotPLocal { p: 5, .. })));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rat("-4/6").unwrap(), rat(-2, 3));
        assert_eq!(parse_rat(" 17 ").unwrap(), rat(17, 1));
        assert!(parse_rat("x").is_err());
        assert!(matches!(parse_rat("1/0"), Err(Error::ZeroDenominator)));
    }

    #[test]
    fn canonical_unit_makes_primitive() {
        let v = vec![rat(0, 1), rat(-2, 3), rat(4, 9)];
        let u = BigRat::canonical_unit(&v, &());
        let scaled: Vec<BigRat> = v.iter().map(|c| c / &u).collect();
        assert_eq!(scaled, vec![rat(0, 1), rat(3, 1), rat(-2, 1)]);
    }
}
