//! Smith normal form over the integers with the right transformation
//! tracked, plus a row-style Hermite form for lattice bases.  Arbitrary
//! precision throughout; the matrices here are small (rank <= 19).

#![allow(clippy::needless_range_loop)]

use num::{BigInt, Integer, Signed, Zero};

pub type Mat = Vec<Vec<BigInt>>;

pub fn mat_from_i64(rows: &[Vec<i64>]) -> Mat {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::from(1) } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

/// Smith normal form of a square integer matrix: returns `(diag, v)` where
/// `u * a * v = diag(d_1, ..., d_r)` for some unimodular `u`, the `d_i` are
/// nonnegative with `d_1 | d_2 | ...`, and `v` is unimodular.  Only the
/// right transform is returned; it is what the discriminant-group
/// construction needs.
pub fn smith_normal_form(a: &Mat) -> (Vec<BigInt>, Mat) {
    let n = a.len();
    let mut m = a.clone();
    let mut v = identity(n);
    for k in 0..n {
        // move a minimal nonzero entry of the trailing block to (k, k)
        while let Some((pi, pj)) = min_nonzero(&m, k) {
            swap_rows(&mut m, k, pi);
            swap_cols(&mut m, &mut v, k, pj);
            // clear column k below the pivot by row reductions
            let mut dirty = false;
            for i in k + 1..n {
                if !m[i][k].is_zero() {
                    let q = div_round(&m[i][k], &m[k][k]);
                    row_sub(&mut m, i, k, &q);
                    if !m[i][k].is_zero() {
                        dirty = true;
                    }
                }
            }
            // clear row k right of the pivot by column reductions
            for j in k + 1..n {
                if !m[k][j].is_zero() {
                    let q = div_round(&m[k][j], &m[k][k]);
                    col_sub(&mut m, &mut v, j, k, &q);
                    if !m[k][j].is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            if m[k][k].is_negative() {
                negate_col(&mut m, &mut v, k);
            }
            // divisibility: pivot must divide the trailing block
            let mut fixed = true;
            'scan: for i in k + 1..n {
                for j in k + 1..n {
                    if (&m[i][j] % &m[k][k]) != BigInt::zero() {
                        row_add(&mut m, k, i);
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
    }
    let diag = (0..n).map(|i| m[i][i].clone()).collect();
    (diag, v)
}

fn min_nonzero(m: &Mat, k: usize) -> Option<(usize, usize)> {
    let n = m.len();
    let mut best: Option<(usize, usize)> = None;
    for i in k..n {
        for j in k..n {
            if m[i][j].is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if m[bi][bj].abs() <= m[i][j].abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    // rounded division keeps the remainders shrinking
    let (q, r) = (a / b, a % b);
    if r.abs() * 2 > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

fn swap_rows(m: &mut Mat, i: usize, j: usize) {
    if i != j {
        m.swap(i, j);
    }
}

fn swap_cols(m: &mut Mat, v: &mut Mat, i: usize, j: usize) {
    if i == j {
        return;
    }
    for row in m.iter_mut() {
        row.swap(i, j);
    }
    for row in v.iter_mut() {
        row.swap(i, j);
    }
}

fn row_sub(m: &mut Mat, i: usize, k: usize, q: &BigInt) {
    let n = m[0].len();
    for c in 0..n {
        let t = &m[k][c] * q;
        m[i][c] = &m[i][c] - t;
    }
}

fn row_add(m: &mut Mat, k: usize, i: usize) {
    let n = m[0].len();
    for c in 0..n {
        let t = m[i][c].clone();
        m[k][c] = &m[k][c] + t;
    }
}

fn col_sub(m: &mut Mat, v: &mut Mat, j: usize, k: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let t = &row[k] * q;
        row[j] = &row[j] - t;
    }
    for row in v.iter_mut() {
        let t = &row[k] * q;
        row[j] = &row[j] - t;
    }
}

fn negate_col(m: &mut Mat, v: &mut Mat, k: usize) {
    for row in m.iter_mut() {
        row[k] = -row[k].clone();
    }
    for row in v.iter_mut() {
        row[k] = -row[k].clone();
    }
}

/// Row Hermite form of a (possibly non-square) integer matrix: returns a
/// basis of the row space as a list of rows, echelonized.
pub fn row_space_basis(rows: &Mat) -> Mat {
    if rows.is_empty() {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let mut m = rows.clone();
    let mut rank = 0usize;
    for col in 0..ncols {
        // find a row with minimal nonzero entry in this column
        loop {
            let pivot = (rank..m.len())
                .filter(|&i| !m[i][col].is_zero())
                .min_by_key(|&i| m[i][col].abs());
            let Some(p) = pivot else {
                break;
            };
            m.swap(rank, p);
            let mut done = true;
            for i in rank + 1..m.len() {
                if !m[i][col].is_zero() {
                    let q = div_round(&m[i][col], &m[rank][col]);
                    for c in 0..ncols {
                        let t = &m[rank][c] * &q;
                        m[i][c] = &m[i][c] - t;
                    }
                    if !m[i][col].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if rank < m.len() && !m[rank][col].is_zero() {
            if m[rank][col].is_negative() {
                for c in 0..ncols {
                    m[rank][c] = -m[rank][c].clone();
                }
            }
            // reduce the rows above
            for i in 0..rank {
                if !m[i][col].is_zero() {
                    let q = m[i][col].div_floor(&m[rank][col]);
                    for c in 0..ncols {
                        let t = &m[rank][c] * &q;
                        m[i][c] = &m[i][c] - t;
                    }
                }
            }
            rank += 1;
        }
    }
    m.truncate(rank);
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snf_diag_divisibility() {
        let a = mat_from_i64(&[
            vec![-6, 111, -36, 6],
            vec![5, -672, 210, 74],
            vec![0, -255, 81, 24],
            vec![-7, 255, -81, -10],
        ]);
        let (d, _v) = smith_normal_form(&a);
        let d: Vec<i64> = d.iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert_eq!(d, vec![1, 3, 21, 0]);
    }

    #[test]
    fn snf_of_cartan_a3() {
        // negative definite A3 Gram has elementary divisors 1, 1, 4
        let a = mat_from_i64(&[vec![-2, 1, 0], vec![1, -2, 1], vec![0, 1, -2]]);
        let (d, v) = smith_normal_form(&a);
        let d: Vec <i64> = d.iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert_eq!(d, vec![1, 1, 4]);
        // v is unimodular: |det| = 1 via the same routine
        let (dv, _) = smith_normal_form(&v);
        assert!(dv.iter().all(|x| x.abs() == BigInt::from(1)));
    }

    #[test]
    fn row_space_of_half_integers_scaled() {
        // lattice Z^2 + Z*(1/2, 1/2), scaled by 2: rows (2,0), (0,2), (1,1)
        let rows = mat_from_i64(&[vec![2, 0], vec![0, 2], vec![1, 1]]);
        let basis = row_space_basis(&rows);
        assert_eq!(basis.len(), 2);
        // index 2 in (2Z)^2-scaled coordinates: determinant 2
        let det = &basis[0][0] * &basis[1][1] - &basis[0][1] * &basis[1][0];
        assert_eq!(det.abs(), BigInt::from(2));
    }
}
