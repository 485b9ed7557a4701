use crate::diffop::Recurrence;
use crate::exactfield::{nullspace, BigRat, Field, Poly};

fn rat(n: i64) -> BigRat {
    BigRat::from_i64(n, &())
}

/// Searches for `Σ_j Q_j(m - j)·a_(m-j) = 0` with `deg Q_j <= order` and
/// span `d <= max_span`, smallest `(order, span)` first. Accepts only a
/// one-dimensional solution space with `Q_0` a multiple of `x^order`.
pub fn guess_recurrence(terms: &[BigRat], max_order: usize, max_span: usize) -> Option<Recurrence> {
    for order in 1..=max_order {
        for span in 1..=max_span {
            let unknowns = (span + 1) * (order + 1);
            if terms.len() < unknowns + 8 {
                continue;
            }
            let rows: Vec<Vec<BigRat>> = (0..terms.len())
                .map(|m| {
                    let mut row = vec![rat(0); unknowns];
                    for j in 0..=span.min(m) {
                        let x = rat((m - j) as i64);
                        let mut xp = rat(1);
                        for k in 0..=order {
                            row[j * (order + 1) + k] = xp.mul(&terms[m - j]);
                            xp = xp.mul(&x);
                        }
                    }
                    row
                })
                .collect();
            let ns = nullspace(rows, unknowns, &());
            if ns.len() != 1 {
                continue;
            }
            let v = &ns[0];
            let mut polys: Vec<Poly<BigRat>> =
                (0..=span).map(|j| Poly::new(v[j * (order + 1)..(j + 1) * (order + 1)].to_vec(), ())).collect();
            let q0 = &polys[0];
            if q0.deg() != order || q0.coeffs()[..order].iter().any(|c| !c.is_zero()) {
                continue;
            }
            let u = q0.lead().unwrap().inv().unwrap();
            for q in polys.iter_mut() {
                *q = q.scale(&u);
            }
            return Some(Recurrence { polys });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::{op_apery, recurrence_from};
    use crate::holoseries::catalog::Catalog;

    #[test]
    fn recovers_apery() {
        let terms = Catalog::builtin().get("apery").unwrap().gen_terms(60).unwrap();
        let rec = guess_recurrence(&terms, 3, 2).unwrap();
        assert_eq!(rec, recurrence_from(&op_apery()).unwrap());
    }

    #[test]
    fn recovers_frozen_calabi_yau_operators() {
        let cat = Catalog::builtin();
        for name in ["cy26", "cy210"] {
            let g = cat.get(name).unwrap();
            let terms = g.gen_terms(90).unwrap();
            let rec = guess_recurrence(&terms, 4, 4).unwrap();
            assert_eq!(rec, recurrence_from(&g.operator().unwrap()).unwrap(), "{name}");
        }
    }
}
