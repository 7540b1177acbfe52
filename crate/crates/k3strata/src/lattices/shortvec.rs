//! Exact enumeration of short vectors in a definite lattice with rational
//! Gram matrix, by coordinate recursion on a fraction-free LDL-style
//! decomposition.  No square roots: coordinate ranges are found by walking
//! outward from the rational center while the bound holds.

#![allow(clippy::needless_range_loop)]

use num::{BigInt, BigRational, Signed, Zero};

pub type Q = BigRational;
pub type QMat = Vec<Vec<Q>>;

/// Decomposition of a positive definite rational Gram matrix `P` as
/// `Q(x) = sum_i piv_i (x_i + sum_{j>i} c_ij x_j)^2`.
pub struct Ldl {
    pub n: usize,
    pub piv: Vec<Q>,
    pub c: Vec<Vec<Q>>,
}

/// Fails (returns None) when the matrix is not positive definite.
pub fn ldl(p: &QMat) -> Option<Ldl> {
    let n = p.len();
    let mut a = p.clone();
    let mut piv = vec![Q::zero(); n];
    let mut c = vec![vec![Q::zero(); n]; n];
    for i in 0..n {
        if !a[i][i].is_positive() {
            return None;
        }
        piv[i] = a[i][i].clone();
        for j in i + 1..n {
            c[i][j] = &a[i][j] / &a[i][i];
        }
        for j in i + 1..n {
            for k in j..n {
                let t = &c[i][j] * &a[i][k];
                a[j][k] = &a[j][k] - &t;
                if k != j {
                    a[k][j] = a[j][k].clone();
                }
            }
        }
    }
    Some(Ldl { n, piv, c })
}

/// Calls `visit` with every integer vector `x != 0` (in lattice-basis
/// coordinates) with `Q(x) <= bound`; enumeration sees `x` and `-x`
/// separately.  Returns false if `visit` aborted the walk.
pub fn for_each_short_vector(
    ldl: &Ldl,
    bound: &Q,
    mut visit: impl FnMut(&[BigInt], &Q) -> bool,
) -> bool {
    let n = ldl.n;
    if n == 0 {
        return true;
    }
    let mut x = vec![BigInt::zero(); n];
    // remaining[i] = bound - sum_{k>i} piv_k (x_k + t_k)^2 at the time x_i
    // is chosen; t[i] = sum_{j>i} c_ij x_j
    recurse(ldl, bound, &mut x, n, &mut visit)
}

fn recurse(
    ldl: &Ldl,
    remaining: &Q,
    x: &mut Vec<BigInt>,
    level: usize,
    visit: &mut impl FnMut(&[BigInt], &Q) -> bool,
) -> bool {
    if level == 0 {
        if x.iter().any(|c| !c.is_zero()) {
            return visit(x, remaining);
        }
        return true;
    }
    let i = level - 1;
    let t: Q = (i + 1..ldl.n)
        .map(|j| &ldl.c[i][j] * Q::from_integer(x[j].clone()))
        .fold(Q::zero(), |acc, v| acc + v);
    // walk x_i outward from the center -t while piv_i (x_i + t)^2 <= remaining
    let center = -&t;
    let start = center.floor().to_integer();
    for dir in 0..2 {
        let mut xi = if dir == 0 {
            start.clone()
        } else {
            &start + 1
        };
        loop {
            let s = Q::from_integer(xi.clone()) + &t;
            let used = &ldl.piv[i] * &s * &s;
            if &used > remaining {
                break;
            }
            x[i] = xi.clone();
            let rem = remaining - &used;
            if !recurse(ldl, &rem, x, i, visit) {
                return false;
            }
            x[i] = BigInt::zero();
            if dir == 0 {
                xi -= 1;
            } else {
                xi += 1;
            }
        }
    }
    true
}

/// Number of vectors with `Q(x)` exactly `target` in the positive definite
/// Gram `p` (counting `x` and `-x` separately).
pub fn count_vectors_of_norm(p: &QMat, target: &Q) -> Option<u64> {
    let dec = ldl(p)?;
    let mut count = 0u64;
    for_each_short_vector(&dec, target, |x, rem| {
        // rem is the slack: norm == target iff the leftover is zero
        let _ = x;
        if rem.is_zero() {
            count += 1;
        }
        true
    });
    Some(count)
}

/// True if some vector in the affine coset `center + Z^n` has norm exactly
/// `target` under the positive definite Gram `p`.  Used for the coset root
/// tests of overlattice gluing; `center` has rational coordinates.
pub fn coset_has_norm(p: &QMat, center: &[Q], target: &Q) -> Option<bool> {
    let dec = ldl(p)?;
    let n = dec.n;
    let mut found = false;
    let mut x = vec![Q::zero(); n];
    affine_recurse(&dec, center, target, &mut x, n, &mut found);
    Some(found)
}

fn affine_recurse(
    ldl: &Ldl,
    center: &[Q],
    remaining: &Q,
    x: &mut Vec<Q>,
    level: usize,
    found: &mut bool,
) {
    if *found {
        return;
    }
    if level == 0 {
        if remaining.is_zero() {
            *found = true;
        }
        return;
    }
    let i = level - 1;
    // coordinates are center_i + integer
    let t: Q = (i + 1..ldl.n)
        .map(|j| &ldl.c[i][j] * &x[j])
        .fold(Q::zero(), |acc, v| acc + v);
    let offset = &center[i] + &t; // value of (x_i + t) at integer step 0
    let start = (-&offset).floor();
    for dir in 0..2 {
        let mut k = if dir == 0 {
            start.clone()
        } else {
            &start + Q::from_integer(BigInt::from(1))
        };
        loop {
            let s = &k + &offset;
            let used = &ldl.piv[i] * &s * &s;
            if &used > remaining {
                break;
            }
            x[i] = &center[i] + &k;
            let rem = remaining - &used;
            affine_recurse(ldl, center, &rem, x, i, found);
            if *found {
                return;
            }
            x[i] = Q::zero();
            if dir == 0 {
                k -= Q::from_integer(BigInt::from(1));
            } else {
                k += Q::from_integer(BigInt::from(1));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi(n: i64) -> Q {
        Q::from_integer(BigInt::from(n))
    }

    fn qmat(rows: &[&[i64]]) -> QMat {
        rows.iter()
            .map(|r| r.iter().map(|&x| qi(x)).collect())
            .collect()
    }

    #[test]
    fn square_lattice_norms() {
        let p = qmat(&[&[1, 0], &[0, 1]]);
        assert_eq!(count_vectors_of_norm(&p, &qi(1)), Some(4));
        assert_eq!(count_vectors_of_norm(&p, &qi(2)), Some(4));
        assert_eq!(count_vectors_of_norm(&p, &qi(3)), Some(0));
        assert_eq!(count_vectors_of_norm(&p, &qi(4)), Some(4));
    }

    #[test]
    fn a2_root_count() {
        // positive definite A2: 6 roots of norm 2
        let p = qmat(&[&[2, -1], &[-1, 2]]);
        assert_eq!(count_vectors_of_norm(&p, &qi(2)), Some(6));
    }

    #[test]
    fn not_positive_definite_detected() {
        let p = qmat(&[&[1, 0], &[0, -1]]);
        assert_eq!(count_vectors_of_norm(&p, &qi(2)), None);
    }

    #[test]
    fn coset_norm_search() {
        // square lattice, coset (1/2, 1/2): minimal norm 1/2, no norm-2
        let p = qmat(&[&[1, 0], &[0, 1]]);
        let half = Q::new(BigInt::from(1), BigInt::from(2));
        let center = vec![half.clone(), half.clone()];
        assert_eq!(coset_has_norm(&p, &center, &Q::new(BigInt::from(1), BigInt::from(2))), Some(true));
        assert_eq!(coset_has_norm(&p, &center, &qi(2)), Some(false));
        // norm 5/2 = (3/2)^2 + (1/2)^2 exists
        assert_eq!(
            coset_has_norm(&p, &center, &Q::new(BigInt::from(5), BigInt::from(2))),
            Some(true)
        );
    }
}
