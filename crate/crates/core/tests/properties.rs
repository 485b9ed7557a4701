use holocert::certify::{split_elimination, split_pade};
use holocert::diffop::{operator_from_value, operator_to_json, Basis, DiffOp};
use holocert::exactfield::{reduce_rat_mod_p, BigRat, Field, FpElem, Poly, RatFun};
use holocert::holoseries::{lucas_binom, p_lucas_by_series, p_lucas_check_reduced, TruncSeries};
use num_bigint::BigInt;
use proptest::prelude::*;

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 17])
}

fn odd_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 7, 11])
}

fn nonzero_poly(p: u64, mut c: Vec<u64>) -> Poly<FpElem> {
    let last = c.len() - 1;
    c[last] = c[last] % p + (c[last] % p == 0) as u64;
    poly(p, c)
}

fn poly(p: u64, c: Vec<u64>) -> Poly<FpElem> {
    Poly::new(c.into_iter().map(|x| FpElem::new(x % p, p)).collect(), p)
}

fn binom(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
}

/// `Π_k P(z^(p^k))` to order `t` with `P(0) = 1`: a series of Lucas type.
fn lucas_product(p: u64, mut c: Vec<u64>, t: usize) -> TruncSeries<FpElem> {
    c[0] = 1;
    let base = poly(p, c);
    let mut f = TruncSeries::one(t, &p);
    let mut q = 1usize;
    while q < t {
        f = f.mul_poly(&base.substitute_power(q));
        q *= p as usize;
    }
    f
}

proptest! {
    #[test]
    fn lucas_binom_matches_exact(p in prime(), n in 0u64..400, k in 0u64..400) {
        let exact = binom(n, k) % BigInt::from(p);
        prop_assert_eq!(BigInt::from(lucas_binom(n, k, p).residue()), exact);
    }

    #[test]
    fn reduction_is_multiplicative(p in prime(), a in -10_000i64..10_000, b in 1i64..10_000, c in -10_000i64..10_000, d in 1i64..10_000) {
        let b = if b % p as i64 == 0 { b + 1 } else { b };
        let d = if d % p as i64 == 0 { d + 1 } else { d };
        let x = BigRat::new(a.into(), b.into());
        let y = BigRat::new(c.into(), d.into());
        let lhs = reduce_rat_mod_p(&(&x * &y), p).unwrap();
        let rhs = reduce_rat_mod_p(&x, p).unwrap().mul(&reduce_rat_mod_p(&y, p).unwrap());
        prop_assert_eq!(lhs, rhs);
        let sum = reduce_rat_mod_p(&(&x + &y), p).unwrap();
        prop_assert_eq!(sum, reduce_rat_mod_p(&x, p).unwrap().add(&reduce_rat_mod_p(&y, p).unwrap()));
    }

    #[test]
    fn division_with_remainder(p in prime(), a in prop::collection::vec(0u64..1000, 0..12), b in prop::collection::vec(0u64..1000, 1..6)) {
        let (a, b) = (poly(p, a), nonzero_poly(p, b));
        let (q, r) = a.div_rem(&b).unwrap();
        prop_assert_eq!(&(&q * &b) + &r, a);
        prop_assert!(r.is_zero() || r.deg() < b.deg());
    }

    #[test]
    fn ratfun_is_reduced(p in prime(), a in prop::collection::vec(0u64..1000, 1..5), b in prop::collection::vec(0u64..1000, 1..5), c in prop::collection::vec(0u64..1000, 1..4)) {
        let (a, b, c) = (poly(p, a), nonzero_poly(p, b), nonzero_poly(p, c));
        let x = RatFun::new(a.clone(), b.clone()).unwrap();
        let y = RatFun::new(&a * &c, &b * &c).unwrap();
        prop_assert_eq!(&x, &y);
        prop_assert!(x.num().gcd(x.den()).degree() == Some(0) || x.num().is_zero());
    }

    #[test]
    fn series_inverse(p in prime(), c in prop::collection::vec(0u64..1000, 1..40)) {
        let f = TruncSeries::new(c.iter().map(|&x| FpElem::new(x % p, p)).collect(), p);
        match f.inv() {
            Some(g) => prop_assert_eq!(f.mul(&g), TruncSeries::one(f.order(), &p)),
            None => prop_assert!(f.coeff(0).is_zero()),
        }
    }

    #[test]
    fn lucas_routes_agree(p in odd_prime(), c in prop::collection::vec(0u64..1000, 1..12), random in any::<bool>(), t in 20usize..120) {
        let f = if random {
            let mut c = c;
            c.resize(t, 7);
            c[0] = 1;
            TruncSeries::new(c.iter().map(|&x| FpElem::new(x % p, p)).collect(), p)
        } else {
            lucas_product(p, c.into_iter().take(p as usize).collect(), t)
        };
        let rep = p_lucas_check_reduced(&f, p, t - 1);
        prop_assert_eq!(rep.holds, p_lucas_by_series(&f, p));
        if !random {
            prop_assert!(rep.holds);
        }
    }

    #[test]
    fn splitting_recovers_lucas_factor(p in odd_prime(), c in prop::collection::vec(0u64..1000, 1..12)) {
        let c: Vec<u64> = c.into_iter().take(p as usize).collect();
        let f = lucas_product(p, c.clone(), 40 * p as usize);
        let mut head = c;
        head[0] = 1;
        let want = poly(p, head);
        // a factor g(z^p) of the truncation is absorbed into the section series
        let a = split_pade(&f, 1, p).unwrap();
        let b = split_elimination(&f, 1, p).unwrap();
        prop_assert_eq!(&a.poly, &b.poly);
        prop_assert!(a.poly.divides(&want));
        let cofactor = want.exact_div(&a.poly).unwrap();
        prop_assert!(cofactor.coeffs().iter().enumerate().all(|(i, x)| i % p as usize == 0 || x.is_zero()));
    }

    #[test]
    fn operator_json_round_trip(rows in prop::collection::vec(prop::collection::vec(-50i64..50, 1..4), 2..5), delta in any::<bool>()) {
        let mut rows = rows;
        if rows[0].iter().all(|&x| x == 0) {
            rows[0][0] = 1;
        }
        let polys: Vec<Poly<BigRat>> = rows.iter().map(|r| Poly::from_ints(r, &())).collect();
        let basis = if delta { Basis::Delta } else { Basis::D };
        let l = DiffOp::from_polys(basis, polys).unwrap();
        let back = operator_from_value(&operator_to_json(&l)).unwrap();
        prop_assert_eq!(back, l);
    }
}
