//! Discriminant groups of even lattices with their Q/2Z-valued quadratic
//! forms, computed through the Smith normal form of the Gram matrix.

use num::{BigInt, BigRational, One, Signed, Zero};

use super::snf::{identity, mat_from_i64, smith_normal_form, Mat};
use super::IntegerLattice;

pub type Q = BigRational;

fn qz() -> Q {
    Q::zero()
}

/// Normalizes a rational to the interval [0, m).
fn reduce_mod(x: &Q, m: i64) -> Q {
    let m = Q::from_integer(BigInt::from(m));
    let f = (x / &m).floor();
    x - &(f * m)
}

/// A finite quadratic form `(D, q)`: generators with orders
/// `d_1 | d_2 | ...` (or per-component orders for a sum of root lattices),
/// rational lifts into the dual lattice, `q` on generators mod 2Z, and the
/// pairing `b` mod Z.
#[derive(Clone, Debug)]
pub struct FiniteQuadraticForm {
    pub orders: Vec<i64>,
    /// Lifts of the generators, as rational coordinate vectors in the basis
    /// of the underlying lattice.
    pub lifts: Vec<Vec<Q>>,
    /// `q(g_i)` in [0, 2).
    pub q_gen: Vec<Q>,
    /// `b(g_i, g_j)` in [0, 1).
    pub b_gen: Vec<Vec<Q>>,
}

/// An element written in generator coordinates, entry `i` reduced mod
/// `orders[i]`.
pub type DiscElement = Vec<i64>;

impl FiniteQuadraticForm {
    pub fn group_order(&self) -> i64 {
        self.orders.iter().product()
    }

    pub fn n_gens(&self) -> usize {
        self.orders.len()
    }

    pub fn zero_element(&self) -> DiscElement {
        vec![0; self.n_gens()]
    }

    pub fn reduce(&self, x: &[i64]) -> DiscElement {
        x.iter()
            .zip(&self.orders)
            .map(|(&c, &d)| c.rem_euclid(d))
            .collect()
    }

    pub fn add(&self, x: &[i64], y: &[i64]) -> DiscElement {
        self.reduce(&x.iter().zip(y).map(|(&a, &b)| a + b).collect::<Vec<_>>())
    }

    pub fn neg(&self, x: &[i64]) -> DiscElement {
        self.reduce(&x.iter().map(|&a| -a).collect::<Vec<_>>())
    }

    pub fn scale(&self, k: i64, x: &[i64]) -> DiscElement {
        self.reduce(&x.iter().map(|&a| a * k).collect::<Vec<_>>())
    }

    pub fn element_order(&self, x: &[i64]) -> i64 {
        let mut ord = 1i64;
        for (&c, &d) in x.iter().zip(&self.orders) {
            let g = gcd(c.rem_euclid(d), d);
            ord = lcm(ord, d / g);
        }
        ord
    }

    /// `q(x)` in [0, 2).
    pub fn q(&self, x: &[i64]) -> Q {
        let mut acc = qz();
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            let xi_q = Q::from_integer(BigInt::from(xi));
            acc += &self.q_gen[i] * &xi_q * &xi_q;
            for (j, &xj) in x.iter().enumerate().take(i) {
                if xj == 0 {
                    continue;
                }
                let two = Q::from_integer(BigInt::from(2 * xi * xj));
                acc += &self.b_gen[i][j] * two;
            }
        }
        reduce_mod(&acc, 2)
    }

    /// `b(x, y)` in [0, 1).
    pub fn b(&self, x: &[i64], y: &[i64]) -> Q {
        let mut acc = qz();
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let f = Q::from_integer(BigInt::from(xi * yj));
                let bij = if i >= j {
                    &self.b_gen[i][j]
                } else {
                    &self.b_gen[j][i]
                };
                acc += bij * &f;
            }
        }
        reduce_mod(&acc, 1)
    }

    pub fn is_isotropic_element(&self, x: &[i64]) -> bool {
        self.q(x).is_zero()
    }

    /// The rational lift of an element into the dual lattice.
    pub fn lift(&self, x: &[i64]) -> Vec<Q> {
        let rank = self.lifts.first().map_or(0, Vec::len);
        let mut out = vec![qz(); rank];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            let c = Q::from_integer(BigInt::from(xi));
            for (k, v) in self.lifts[i].iter().enumerate() {
                out[k] = &out[k] + &(v * &c);
            }
        }
        out
    }

    /// All elements, in mixed-radix order.  The group order must be modest.
    pub fn elements(&self) -> Vec<DiscElement> {
        let mut out = Vec::with_capacity(self.group_order() as usize);
        let mut cur = self.zero_element();
        loop {
            out.push(cur.clone());
            let mut i = 0;
            loop {
                if i == self.n_gens() {
                    return out;
                }
                cur[i] += 1;
                if cur[i] < self.orders[i] {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }

    /// Multiset of `(order, q)` over all elements: an isomorphism-grade
    /// fingerprint used to compare presentations of the same form.
    pub fn fingerprint(&self) -> Vec<(i64, Q)> {
        let mut v: Vec<(i64, Q)> = self
            .elements()
            .iter()
            .map(|x| (self.element_order(x), self.q(x)))
            .collect();
        v.sort();
        v
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: i64, b: i64) -> i64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Discriminant form of a nondegenerate even lattice via the Smith normal
/// form of its Gram matrix: generators are the columns of the right
/// transform scaled by the elementary divisors.
pub fn discriminant_form(lattice: &IntegerLattice) -> Option<FiniteQuadraticForm> {
    let rank = lattice.rank();
    let gram = mat_from_i64(&lattice.gram);
    discriminant_form_of_mat(&gram, rank)
}

pub(super) fn discriminant_form_of_mat(gram: &Mat, rank: usize) -> Option<FiniteQuadraticForm> {
    if rank == 0 {
        return Some(FiniteQuadraticForm {
            orders: Vec::new(),
            lifts: Vec::new(),
            q_gen: Vec::new(),
            b_gen: Vec::new(),
        });
    }
    let (diag, v) = smith_normal_form(gram);
    if diag.iter().any(Zero::is_zero) {
        return None; // degenerate Gram
    }
    // generator lifts: column i of v divided by d_i, kept when d_i > 1
    let mut orders = Vec::new();
    let mut lifts: Vec<Vec<Q>> = Vec::new();
    for (i, d) in diag.iter().enumerate() {
        if d.abs().is_one() {
            continue;
        }
        let di = d.abs();
        orders.push(i64::try_from(&di).expect("small elementary divisor"));
        lifts.push(
            (0..rank)
                .map(|r| Q::new(v[r][i].clone(), di.clone()))
                .collect(),
        );
    }
    Some(form_from_lifts(gram, orders, lifts))
}

pub(super) fn form_from_lifts(
    gram: &Mat,
    orders: Vec<i64>,
    lifts: Vec<Vec<Q>>,
) -> FiniteQuadraticForm {
    let pair = |x: &[Q], y: &[Q]| -> Q {
        let mut acc = qz();
        for (r, xr) in x.iter().enumerate() {
            if xr.is_zero() {
                continue;
            }
            for (c, yc) in y.iter().enumerate() {
                if yc.is_zero() {
                    continue;
                }
                acc += xr * yc * Q::from_integer(gram[r][c].clone());
            }
        }
        acc
    };
    let q_gen: Vec<Q> = lifts.iter().map(|g| reduce_mod(&pair(g, g), 2)).collect();
    let b_gen: Vec<Vec<Q>> = lifts
        .iter()
        .enumerate()
        .map(|(i, gi)| {
            (0..=i)
                .map(|j| reduce_mod(&pair(gi, &lifts[j]), 1))
                .chain(std::iter::repeat_n(qz(), lifts.len() - i - 1))
                .collect()
        })
        .collect();
    FiniteQuadraticForm {
        orders,
        lifts,
        q_gen,
        b_gen,
    }
}

/// Discriminant form of the Gram matrix after a change of basis by a
/// unimodular matrix `u`: used to test that the form data is well defined.
pub fn discriminant_form_conjugated(
    lattice: &IntegerLattice,
    u: &[Vec<i64>],
) -> Option<FiniteQuadraticForm> {
    let rank = lattice.rank();
    let ub = mat_from_i64(u);
    let g = mat_from_i64(&lattice.gram);
    // new Gram = u g u^T
    let mut m = identity(rank);
    for i in 0..rank {
        for j in 0..rank {
            let mut acc = BigInt::zero();
            for k in 0..rank {
                for l in 0..rank {
                    acc += &ub[i][k] * &g[k][l] * &ub[j][l];
                }
            }
            m[i][j] = acc;
        }
    }
    discriminant_form_of_mat(&m, rank)
}
