//! Small exact linear algebra helpers: integer kernels and signatures.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Z-basis of `{ x : x * M = 0 }` for an integer matrix `M` with `rows` rows.
pub fn left_kernel(m: &[Vec<i64>], rows: usize) -> Vec<Vec<i64>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| {
            let mut row: Vec<BigInt> = m.get(i).map_or(vec![BigInt::zero(); cols], |r| {
                r.iter().map(|&x| BigInt::from(x)).collect()
            });
            row.extend((0..rows).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let mut pivot_row = 0;
    for c in 0..cols {
        if pivot_row == rows {
            break;
        }
        loop {
            // smallest non-zero entry in this column becomes the pivot
            let Some(p) = (pivot_row..rows)
                .filter(|&i| !a[i][c].is_zero())
                .min_by_key(|&i| a[i][c].abs())
            else {
                break;
            };
            a.swap(pivot_row, p);
            let mut done = true;
            for i in pivot_row + 1..rows {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[pivot_row][c]);
                let pr = a[pivot_row].clone();
                for (x, y) in a[i].iter_mut().zip(pr.iter()) {
                    *x -= &q * y;
                }
                if !a[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                pivot_row += 1;
                break;
            }
        }
    }
    a[pivot_row..]
        .iter()
        .map(|row| {
            row[cols..]
                .iter()
                .map(|x| i64::try_from(x).expect("kernel entry fits in i64"))
                .collect()
        })
        .collect()
}

/// Signature of a symmetric rational matrix by congruence diagonalization.
pub fn signature(m: &[Vec<BigRational>]) -> i64 {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let mut sig = 0;
    let mut k = 0;
    while k < n {
        let p = (k..n).find(|&i| !a[i][i].is_zero());
        match p {
            Some(p) => {
                a.swap(k, p);
                for row in a.iter_mut() {
                    row.swap(k, p);
                }
            }
            None => {
                let off = (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero());
                let Some((i, j)) = off else { break };
                // row_i += row_j, col_i += col_j makes the diagonal 2 a_ij
                let rj = a[j].clone();
                for (x, y) in a[i].iter_mut().zip(rj.iter()) {
                    *x += y;
                }
                for row in a.iter_mut() {
                    let y = row[j].clone();
                    row[i] += y;
                }
                continue;
            }
        }
        let d = a[k][k].clone();
        sig += if d.is_positive() { 1 } else { -1 };
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &d;
            let rk = a[k].clone();
            for (x, y) in a[i].iter_mut().zip(rk.iter()) {
                *x -= &f * y;
            }
            for row in a.iter_mut() {
                let y = row[k].clone();
                row[i] -= &f * y;
            }
        }
        k += 1;
    }
    sig
}

pub fn signature_i64(m: &[Vec<i64>]) -> i64 {
    let q: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    signature(&q)
}
