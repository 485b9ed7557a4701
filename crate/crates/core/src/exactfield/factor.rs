//! Factorization into irreducibles over F_p (Cantor-Zassenhaus) and over
//! the rationals (big-prime Zassenhaus with subset recombination).

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::rational::bigint_mod_p;
use super::{is_prime, BigRat, Field, FpElem, Poly};
use crate::error::{Error, Result};

/// Squarefree decomposition over F_p: pairs `(g, m)` with `g` monic
/// squarefree and `f = lc·Π g^m`.
pub fn squarefree_fp(f: &Poly<FpElem>) -> Vec<(Poly<FpElem>, usize)> {
    let p = *f.ctx();
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let f = f.monic();
    let c0 = f.gcd(&f.derivative());
    let mut w = f.exact_div(&c0).unwrap();
    let mut c = c0;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.exact_div(&y).unwrap();
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = c.exact_div(&w).unwrap();
        i += 1;
    }
    if !c.is_one() {
        // c is a polynomial in z^p; take its p-th root
        let root: Vec<FpElem> = c.coeffs().iter().step_by(p as usize).copied().collect();
        let root = Poly::new(root, p);
        for (g, m) in squarefree_fp(&root) {
            out.push((g, m * p as usize));
        }
    }
    out
}

fn powmod(base: &Poly<FpElem>, e: &BigUint, m: &Poly<FpElem>) -> Poly<FpElem> {
    let mut acc = Poly::one(m.ctx());
    let base = base.rem(m).unwrap();
    for i in (0..e.bits()).rev() {
        acc = (&acc * &acc).rem(m).unwrap();
        if e.bit(i) {
            acc = (&acc * &base).rem(m).unwrap();
        }
    }
    acc
}

/// Distinct-degree factorization of a monic squarefree polynomial.
fn distinct_degree(f: &Poly<FpElem>) -> Vec<(Poly<FpElem>, usize)> {
    let p = *f.ctx();
    let pe = BigUint::from(p);
    let z = Poly::z(&p);
    let mut out = Vec::new();
    let mut f = f.clone();
    let mut h = z.clone();
    let mut d = 1;
    while f.deg() >= 2 * d {
        h = powmod(&h, &pe, &f);
        let g = (&h - &z).gcd(&f);
        if !g.is_one() {
            f = f.exact_div(&g).unwrap();
            h = h.rem(&f).unwrap();
            out.push((g, d));
        }
        d += 1;
    }
    if f.deg() > 0 {
        let df = f.deg();
        out.push((f, df));
    }
    out
}

/// Equal-degree splitting of a product of irreducibles of degree `d`.
fn equal_degree(f: &Poly<FpElem>, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly<FpElem>> {
    let p = *f.ctx();
    if f.deg() == d {
        return vec![f.clone()];
    }
    let n = f.deg();
    loop {
        let a: Vec<FpElem> = (0..n).map(|_| FpElem::new(rng.gen_range(0..p), p)).collect();
        let a = Poly::new(a, p);
        if a.is_constant() {
            continue;
        }
        let b = if p == 2 {
            // trace map a + a^2 + ... + a^(2^(d-1))
            let mut t = a.rem(f).unwrap();
            let mut acc = t.clone();
            for _ in 1..d {
                t = (&t * &t).rem(f).unwrap();
                acc = &acc + &t;
            }
            acc
        } else {
            let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
            &powmod(&a, &e, f) - &Poly::one(&p)
        };
        let g = b.gcd(f);
        if !g.is_one() && g.deg() < n {
            let rest = f.exact_div(&g).unwrap();
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&rest, d, rng));
            return out;
        }
    }
}

/// Irreducible factorization over F_p: monic factors with multiplicities,
/// sorted by degree then coefficients.
pub fn factor_over_fp(f: &Poly<FpElem>) -> Vec<(Poly<FpElem>, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut out = Vec::new();
    for (g, m) in squarefree_fp(f) {
        for (h, d) in distinct_degree(&g) {
            for q in equal_degree(&h, d, &mut rng) {
                out.push((q, m));
            }
        }
    }
    sort_factors(&mut out, |c| BigRat::from_integer(c.residue().into()));
    out
}

fn sort_factors<F: Field>(v: &mut [(Poly<F>, usize)], key: impl Fn(&F) -> BigRat) {
    v.sort_by(|(a, _), (b, _)| {
        let zero_root = |p: &Poly<F>| !p.coeff(0).is_zero();
        a.deg().cmp(&b.deg()).then(zero_root(a).cmp(&zero_root(b))).then_with(|| {
            let ka: Vec<BigRat> = a.coeffs().iter().map(&key).collect();
            let kb: Vec<BigRat> = b.coeffs().iter().map(&key).collect();
            ka.cmp(&kb)
        })
    });
}

/// Squarefree decomposition over the rationals (Yun), monic factors.
pub fn squarefree_q(f: &Poly<BigRat>) -> Vec<(Poly<BigRat>, usize)> {
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let f = f.monic();
    let fd = f.derivative();
    let a0 = f.gcd(&fd);
    let mut b = f.exact_div(&a0).unwrap();
    let mut c = fd.exact_div(&a0).unwrap();
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while !b.is_constant() {
        let a = b.gcd(&d);
        b = b.exact_div(&a).unwrap();
        c = d.exact_div(&a).unwrap();
        d = &c - &b.derivative();
        if !a.is_one() {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

/// Product of the distinct monic irreducible factors.
pub fn squarefree_part(f: &Poly<BigRat>) -> Poly<BigRat> {
    if f.is_zero() {
        return f.clone();
    }
    f.exact_div(&f.gcd(&f.derivative())).unwrap().monic()
}

fn to_int_coeffs(f: &Poly<BigRat>) -> Vec<BigInt> {
    let prim = f.canonical();
    prim.coeffs().iter().map(|c| c.numer().clone()).collect()
}

fn symmetric_lift(c: &FpElem) -> BigInt {
    BigInt::from(c.symmetric())
}

/// Irreducible factorization over the rationals: monic factors with
/// multiplicities, sorted by degree.
///
/// Uses a single prime larger than twice a coefficient bound for all
/// integer factors; fails with `InvalidInput` when no such prime fits in
/// 62 bits.
pub fn factor_over_q(f: &Poly<BigRat>) -> Result<Vec<(Poly<BigRat>, usize)>> {
    let mut out = Vec::new();
    for (g, m) in squarefree_q(f) {
        for q in factor_squarefree_q(&g)? {
            out.push((q, m));
        }
    }
    sort_factors(&mut out, |c| c.clone());
    Ok(out)
}

fn factor_squarefree_q(g: &Poly<BigRat>) -> Result<Vec<Poly<BigRat>>> {
    let n = g.deg();
    if n <= 1 {
        return Ok(vec![g.monic()]);
    }
    let ints = to_int_coeffs(g);
    let lc = ints.last().unwrap().abs();
    let maxc = ints.iter().map(|c| c.abs()).max().unwrap();
    // every coefficient of lc·h for an integer factor h is below this
    let bound: BigInt = (BigInt::one() << n) * BigInt::from(n + 1) * &maxc * &lc;
    let start = (&bound * 2u32 + 1u32).to_u64().filter(|&s| s < (1u64 << 62));
    let Some(mut p) = start else {
        return Err(Error::InvalidInput(format!(
            "coefficients of {g} too large for the single-prime factorizer"
        )));
    };
    let gp = loop {
        p += 1;
        if !is_prime(p) {
            continue;
        }
        let gp = Poly::new(ints.iter().map(|c| bigint_mod_p(c, p)).collect(), p);
        if gp.deg() == n && gp.gcd(&gp.derivative()).is_one() {
            break gp;
        }
    };
    let mut modular: Vec<Poly<FpElem>> = factor_over_fp(&gp).into_iter().map(|(q, _)| q).collect();
    let mut remaining = g.canonical();
    let mut found = Vec::new();
    let mut s = 1;
    'outer: while 2 * s <= modular.len() {
        let idx: Vec<usize> = (0..modular.len()).collect();
        for subset in combinations(&idx, s) {
            let rem_ints = to_int_coeffs(&remaining);
            let lc_r = rem_ints.last().unwrap().clone();
            let lcp = bigint_mod_p(&lc_r, p);
            let mut cand = Poly::constant(lcp, &p);
            for &i in &subset {
                cand = &cand * &modular[i];
            }
            let lifted: Vec<BigRat> =
                cand.coeffs().iter().map(|c| BigRat::from_integer(symmetric_lift(c))).collect();
            let lifted = Poly::new(lifted, ());
            let prim = lifted.canonical();
            if let Some(q) = remaining.exact_div(&prim) {
                found.push(prim.monic());
                remaining = q.canonical();
                let keep: Vec<Poly<FpElem>> = modular
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, q)| q.clone())
                    .collect();
                modular = keep;
                continue 'outer;
            }
        }
        s += 1;
    }
    if !remaining.is_constant() {
        found.push(remaining.monic());
    }
    Ok(found)
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}
