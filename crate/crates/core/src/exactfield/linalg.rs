use super::Field;

/// Basis of the right kernel of `rows` (each of length `ncols`) by
/// Gauss-Jordan elimination. Each basis vector has a one in its free
/// column.
pub fn nullspace<F: Field>(mut rows: Vec<Vec<F>>, ncols: usize, ctx: &F::Ctx) -> Vec<Vec<F>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, pr);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = x.mul(&inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|fc| {
            let mut v = vec![F::zero(ctx); ncols];
            v[fc] = F::one(ctx);
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = rows[i][fc].neg();
            }
            v
        })
        .collect()
}
