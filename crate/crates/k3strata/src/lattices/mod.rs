//! Even integer lattices and the lattice-theoretic layer of the stratum
//! catalog: ADE Gram matrices (negative definite, roots of norm -2),
//! discriminant quadratic forms, isotropic subgroups and overlattices,
//! Dynkin diagram symmetry groups and their image on the glued discriminant
//! form, and the single-class genus and moduli counting arithmetic.

pub mod counting;
pub mod disc;
pub mod dynkin;
pub mod isotropic;
pub mod shortvec;
pub mod snf;

pub use counting::{covering_degree, mm_counts, single_genus_check, CountingError};
pub use disc::{discriminant_form, DiscElement, FiniteQuadraticForm};
pub use dynkin::{stabilized_image, DynkinSymmetryGroup};
pub use isotropic::{admissible_isotropics, isotropic_subgroups, AbelianType, IsotropicSubgroup};

use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

use crate::roots::{RootSum, RootSymbol};
use snf::{mat_from_i64, row_space_basis};

type Q = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("Gram matrix is not symmetric or not even")]
    NotEven,
    #[error("degenerate Gram matrix")]
    Degenerate,
    #[error("lattice is not definite with the expected sign")]
    NotDefinite,
    #[error("subgroup is not isotropic")]
    NotIsotropic,
    #[error("group enumeration exceeds the configured bound {0}")]
    TooLarge(u64),
}

/// An even lattice given by its Gram matrix; ADE root lattices are taken
/// negative definite (Gram = -Cartan), so roots have norm -2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerLattice {
    pub gram: Vec<Vec<i64>>,
}

impl IntegerLattice {
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        let n = gram.len();
        for (i, row) in gram.iter().enumerate() {
            if row.len() != n || row[i] % 2 != 0 {
                return Err(LatticeError::NotEven);
            }
            for (j, &x) in row.iter().enumerate() {
                if gram[j][i] != x {
                    return Err(LatticeError::NotEven);
                }
            }
        }
        Ok(IntegerLattice { gram })
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        let n = self.rank();
        if n == 0 {
            return BigInt::one();
        }
        let mut m = mat_from_i64(&self.gram);
        let mut denom = BigInt::one();
        let mut sign = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = &t / &denom;
                }
            }
            denom = m[k][k].clone();
        }
        sign * m[n - 1][n - 1].clone()
    }

    pub fn disc_order(&self) -> BigInt {
        self.det().abs()
    }

    /// Negated Gram as a rational matrix (positive definite for root sums).
    fn neg_gram_q(&self) -> shortvec::QMat {
        self.gram
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&x| Q::from_integer(BigInt::from(-x)))
                    .collect()
            })
            .collect()
    }

    /// Number of vectors of norm -2.
    pub fn root_count(&self) -> Result<u64, LatticeError> {
        if self.rank() == 0 {
            return Ok(0);
        }
        let two = Q::from_integer(BigInt::from(2));
        shortvec::count_vectors_of_norm(&self.neg_gram_q(), &two).ok_or(LatticeError::NotDefinite)
    }
}

/// Gram matrix (negative of the Cartan matrix) of one ADE symbol.  The node
/// layouts fix the diagram automorphisms used by [`dynkin`]: `A_n` is the
/// chain `0 - 1 - ... - n-1`; `D_n` is the chain `0 - ... - n-3` with both
/// `n-2` and `n-1` joined to `n-3`; `E_n` is the chain
/// `0 - 2 - 3 - ... - n-1` with node `1` joined to node `3`.
pub fn ade(symbol: RootSymbol) -> IntegerLattice {
    symbol.validate().expect("valid ADE symbol");
    let n = symbol.rank() as usize;
    let mut gram = vec![vec![0i64; n]; n];
    for (i, row) in gram.iter_mut().enumerate() {
        row[i] = -2;
    }
    fn join(g: &mut [Vec<i64>], a: usize, b: usize) {
        g[a][b] = 1;
        g[b][a] = 1;
    }
    match symbol {
        RootSymbol::A(_) => {
            for i in 0..n.saturating_sub(1) {
                join(&mut gram, i, i + 1);
            }
        }
        RootSymbol::D(_) => {
            for i in 0..n - 3 {
                join(&mut gram, i, i + 1);
            }
            join(&mut gram, n - 3, n - 2);
            join(&mut gram, n - 3, n - 1);
        }
        RootSymbol::E(_) => {
            join(&mut gram, 0, 2);
            join(&mut gram, 1, 3);
            for i in 2..n - 1 {
                join(&mut gram, i, i + 1);
            }
        }
    }
    IntegerLattice { gram }
}

/// Orthogonal direct sum.
pub fn direct_sum(parts: &[IntegerLattice]) -> IntegerLattice {
    let rank: usize = parts.iter().map(IntegerLattice::rank).sum();
    let mut gram = vec![vec![0i64; rank]; rank];
    let mut off = 0;
    for p in parts {
        for i in 0..p.rank() {
            for j in 0..p.rank() {
                gram[off + i][off + j] = p.gram[i][j];
            }
        }
        off += p.rank();
    }
    IntegerLattice { gram }
}

/// The lattice of a root-symbol sum, components in the given order.
pub fn root_lattice(roots: &RootSum) -> IntegerLattice {
    let parts: Vec<IntegerLattice> = roots.0.iter().map(|&s| ade(s)).collect();
    direct_sum(&parts)
}

/// Discriminant form of a root sum in per-component coordinates: the
/// generators are the standard generators of each component's discriminant
/// group, concatenated, so group elements read component by component.
pub fn component_disc_form(roots: &RootSum) -> FiniteQuadraticForm {
    let ambient = root_lattice(roots);
    let gram = mat_from_i64(&ambient.gram);
    let mut orders = Vec::new();
    let mut lifts: Vec<Vec<Q>> = Vec::new();
    let mut off = 0usize;
    for &sym in &roots.0 {
        let comp = ade(sym);
        let local = disc::discriminant_form(&comp).expect("ADE lattices are nondegenerate");
        for (ord, lift) in local.orders.iter().zip(&local.lifts) {
            orders.push(*ord);
            let mut v = vec![Q::zero(); ambient.rank()];
            for (k, x) in lift.iter().enumerate() {
                v[off + k] = x.clone();
            }
            lifts.push(v);
        }
        off += comp.rank();
    }
    disc::form_from_lifts(&gram, orders, lifts)
}

/// Data of an overlattice `R + <lifts of G>`: a basis expressed in the
/// coordinates of `R`, its Gram matrix, and the index.
#[derive(Clone, Debug)]
pub struct Overlattice {
    /// Rows are basis vectors with rational coordinates in the base lattice.
    pub basis: Vec<Vec<Q>>,
    pub lattice: IntegerLattice,
    pub index: BigInt,
}

/// The even overlattice glued from an isotropic subgroup of the
/// discriminant form (given by generator lifts).  Errors when the glue
/// vectors do not produce an even integral lattice, which happens exactly
/// when the subgroup is not isotropic.
pub fn overlattice(
    base: &IntegerLattice,
    glue_lifts: &[Vec<Q>],
) -> Result<Overlattice, LatticeError> {
    let rank = base.rank();
    let mut denom = BigInt::one();
    for v in glue_lifts {
        for x in v {
            denom = num::integer::lcm(denom.clone(), x.denom().clone());
        }
    }
    let mut rows: snf::Mat = Vec::new();
    for i in 0..rank {
        let mut row = vec![BigInt::zero(); rank];
        row[i] = denom.clone();
        rows.push(row);
    }
    for v in glue_lifts {
        rows.push(
            v.iter()
                .map(|x| (x * Q::from_integer(denom.clone())).to_integer())
                .collect(),
        );
    }
    let basis_scaled = row_space_basis(&rows);
    if basis_scaled.len() != rank {
        return Err(LatticeError::Degenerate);
    }
    let denom_q = Q::from_integer(denom.clone());
    let basis: Vec<Vec<Q>> = basis_scaled
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| Q::from_integer(x.clone()) / &denom_q)
                .collect()
        })
        .collect();
    let g = mat_from_i64(&base.gram);
    let mut gram = vec![vec![0i64; rank]; rank];
    for i in 0..rank {
        for j in 0..=i {
            let mut acc = Q::zero();
            for (k, bik) in basis[i].iter().enumerate() {
                if bik.is_zero() {
                    continue;
                }
                for (l, bjl) in basis[j].iter().enumerate() {
                    if bjl.is_zero() {
                        continue;
                    }
                    acc += bik * bjl * Q::from_integer(g[k][l].clone());
                }
            }
            if !acc.is_integer() {
                return Err(LatticeError::NotIsotropic);
            }
            let val = acc.to_integer();
            if i == j && (&val % 2) != BigInt::zero() {
                return Err(LatticeError::NotIsotropic);
            }
            let small = i64::try_from(&val).map_err(|_| LatticeError::Degenerate)?;
            gram[i][j] = small;
            gram[j][i] = small;
        }
    }
    let lattice = IntegerLattice::new(gram)?;
    let index_sq = base.disc_order() / lattice.disc_order();
    let index = index_sq.sqrt();
    Ok(Overlattice {
        basis,
        lattice,
        index,
    })
}

/// True when the overlattice contains norm -2 vectors beyond those of the
/// base lattice: a new root is one whose coordinates in the base are not
/// all integers.
pub fn overlattice_adds_roots(base: &IntegerLattice, over: &Overlattice) -> bool {
    let two = Q::from_integer(BigInt::from(2));
    let neg: shortvec::QMat = over
        .lattice
        .gram
        .iter()
        .map(|row| {
            row.iter()
                .map(|&x| Q::from_integer(BigInt::from(-x)))
                .collect()
        })
        .collect();
    let Some(dec) = shortvec::ldl(&neg) else {
        return true; // not definite: treat as inadmissible
    };
    let mut found_new = false;
    shortvec::for_each_short_vector(&dec, &two, |coeffs, rem| {
        if !rem.is_zero() {
            return true;
        }
        for k in 0..base.rank() {
            let mut acc = Q::zero();
            for (i, c) in coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                acc += &over.basis[i][k] * Q::from_integer(c.clone());
            }
            if !acc.is_integer() {
                found_new = true;
                return false;
            }
        }
        true
    });
    found_new
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ade_determinants_and_roots() {
        let cases = [
            (RootSymbol::A(1), 2u64, 2u64),
            (RootSymbol::A(3), 4, 12),
            (RootSymbol::A(7), 8, 56),
            (RootSymbol::D(4), 4, 24),
            (RootSymbol::D(6), 4, 60),
            (RootSymbol::E(6), 3, 72),
            (RootSymbol::E(7), 2, 126),
            (RootSymbol::E(8), 1, 240),
        ];
        for (sym, det, roots) in cases {
            let l = ade(sym);
            assert_eq!(l.disc_order(), BigInt::from(det), "{sym}");
            assert_eq!(l.root_count().unwrap(), roots, "{sym}");
            assert_eq!(sym.root_count(), roots, "{sym}");
        }
    }

    #[test]
    fn disc_form_of_a1_and_a3() {
        let f = discriminant_form(&ade(RootSymbol::A(1))).unwrap();
        assert_eq!(f.orders, vec![2]);
        // q(g) = -1/2 = 3/2 mod 2Z
        assert_eq!(f.q_gen[0], Q::new(BigInt::from(3), BigInt::from(2)));

        let f = discriminant_form(&ade(RootSymbol::A(3))).unwrap();
        assert_eq!(f.orders, vec![4]);
        // q(g) = -3/4 = 5/4 mod 2Z
        assert_eq!(f.q_gen[0], Q::new(BigInt::from(5), BigInt::from(4)));
    }

    #[test]
    fn disc_orders_match_closed_forms() {
        for sym in [
            RootSymbol::A(2),
            RootSymbol::A(6),
            RootSymbol::D(4),
            RootSymbol::D(5),
            RootSymbol::D(7),
            RootSymbol::E(6),
            RootSymbol::E(7),
        ] {
            let f = discriminant_form(&ade(sym)).unwrap();
            assert_eq!(f.group_order() as u64, sym.disc_order(), "{sym}");
        }
        let f = discriminant_form(&ade(RootSymbol::E(8))).unwrap();
        assert_eq!(f.group_order(), 1);
    }

    #[test]
    fn component_form_concatenates() {
        let roots = RootSum::parse("2A3+8A1").unwrap();
        let f = component_disc_form(&roots);
        assert_eq!(f.orders, vec![4, 4, 2, 2, 2, 2, 2, 2, 2, 2]);
        assert_eq!(f.group_order(), 16 * 256);
        // q of the order-2 element inside one A3 factor: 4 * (-3/4) = 1 mod 2
        let mut x = f.zero_element();
        x[0] = 2;
        assert_eq!(f.q(&x), Q::from_integer(BigInt::one()));
    }

    #[test]
    fn overlattice_d4_from_4a1() {
        // gluing the diagonal class of (A1)^4 yields D4: same determinant,
        // more roots
        let base = root_lattice(&RootSum::parse("4A1").unwrap());
        let f = component_disc_form(&RootSum::parse("4A1").unwrap());
        let diag = vec![1i64, 1, 1, 1];
        assert!(f.is_isotropic_element(&diag));
        let over = overlattice(&base, &[f.lift(&diag)]).unwrap();
        assert_eq!(over.index, BigInt::from(2));
        assert_eq!(over.lattice.disc_order(), BigInt::from(4));
        assert_eq!(over.lattice.root_count().unwrap(), 24); // D4 root count
        assert!(overlattice_adds_roots(&base, &over));
    }

    #[test]
    fn overlattice_rejects_anisotropic_glue() {
        let base = root_lattice(&RootSum::parse("2A1").unwrap());
        let f = component_disc_form(&RootSum::parse("2A1").unwrap());
        // q(1,0) = 3/2: not isotropic
        let bad = f.lift(&[1, 0]);
        assert!(matches!(
            overlattice(&base, &[bad]),
            Err(LatticeError::NotIsotropic)
        ));
    }

    #[test]
    fn eight_a1_glue_classes() {
        // weight-4 diagonal classes are isotropic but glue in new roots;
        // the all-ones class keeps the root system
        let roots = RootSum::parse("8A1").unwrap();
        let base = root_lattice(&roots);
        let f = component_disc_form(&roots);
        let w4 = vec![1, 1, 1, 1, 0, 0, 0, 0];
        let w8 = vec![1i64; 8];
        assert!(f.is_isotropic_element(&w4));
        assert!(f.is_isotropic_element(&w8));
        let o4 = overlattice(&base, &[f.lift(&w4)]).unwrap();
        assert!(overlattice_adds_roots(&base, &o4));
        assert!(o4.lattice.root_count().unwrap() > 16);
        let o8 = overlattice(&base, &[f.lift(&w8)]).unwrap();
        assert!(!overlattice_adds_roots(&base, &o8));
        assert_eq!(o8.lattice.root_count().unwrap(), 16);
    }

    #[test]
    fn disc_form_well_defined_under_basis_change() {
        let l = root_lattice(&RootSum::parse("A3+2A1").unwrap());
        let f = discriminant_form(&l).unwrap();
        let u = vec![
            vec![1, 1, 0, 0, 2],
            vec![0, 1, 0, 0, 0],
            vec![0, 3, 1, 0, 0],
            vec![0, 0, 0, 1, 1],
            vec![0, 0, 0, 0, 1],
        ];
        let g = disc::discriminant_form_conjugated(&l, &u).unwrap();
        assert_eq!(f.fingerprint(), g.fingerprint());
    }
}
