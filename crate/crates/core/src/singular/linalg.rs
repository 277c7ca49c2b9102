//! Linear algebra over the chain ring `Z/p^a`.

use crate::arith::{inv_mod, mul_mod, sub_mod, v_p};

fn val(x: u64, p: u64, a: u32) -> u32 {
    if x == 0 {
        a
    } else {
        v_p(x, p)
    }
}

/// Generators of `{x : A x = 0 mod p^a}` for an `nrows x ncols` matrix.
///
/// Diagonalizes `A` by row and column operations (every ideal of `Z/p^a` is
/// `(p^s)`, so the entry of least valuation can always serve as pivot) and
/// records the column operations in `T`. With `U A T = diag(p^s_i)` the
/// kernel is spanned by `p^(a - s_i) T e_i`.
pub(crate) fn kernel(mut rows: Vec<Vec<u64>>, ncols: usize, p: u64, a: u32) -> Vec<Vec<u64>> {
    let m = p.pow(a);
    let nrows = rows.len();
    let mut t: Vec<Vec<u64>> = (0..ncols)
        .map(|i| (0..ncols).map(|j| u64::from(i == j)).collect())
        .collect();
    let mut shifts = vec![a; ncols];

    for step in 0..nrows.min(ncols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in rows.iter().enumerate().skip(step) {
            for (j, &x) in row.iter().enumerate().skip(step) {
                let v = val(x, p, a);
                if v < a && best.map_or(true, |(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((s, bi, bj)) = best else { break };
        rows.swap(step, bi);
        for row in rows.iter_mut() {
            row.swap(step, bj);
        }
        for row in t.iter_mut() {
            row.swap(step, bj);
        }

        let ps = p.pow(s);
        let winv = inv_mod(rows[step][step] / ps % m, m).expect("pivot unit part");
        let pivot_row = rows[step].clone();
        for row in rows.iter_mut().skip(step + 1) {
            let f = mul_mod(row[step] / ps, winv, m);
            if f != 0 {
                for (x, &y) in row.iter_mut().zip(&pivot_row).skip(step) {
                    *x = sub_mod(*x, mul_mod(f, y, m), m);
                }
            }
        }
        for j in step + 1..ncols {
            let f = mul_mod(rows[step][j] / ps, winv, m);
            if f == 0 {
                continue;
            }
            for row in rows.iter_mut().chain(t.iter_mut()) {
                let y = row[step];
                row[j] = sub_mod(row[j], mul_mod(f, y, m), m);
            }
        }
        shifts[step] = s;
    }

    (0..ncols)
        .filter(|&i| shifts[i] > 0)
        .map(|i| {
            let c = p.pow(a - shifts[i]) % m;
            t.iter().map(|row| mul_mod(row[i], c, m)).collect::<Vec<u64>>()
        })
        .filter(|v| v.iter().any(|&x| x != 0))
        .collect()
}
