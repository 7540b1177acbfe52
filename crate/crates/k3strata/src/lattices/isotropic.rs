//! Isotropic subgroups of discriminant forms and the admissibility filter:
//! a glue group is admissible when the glued overlattice acquires no new
//! roots, so the root systems of the lattice and its saturation coincide.

use std::collections::BTreeSet;

use num::{BigInt, BigRational, Zero};

use super::disc::{DiscElement, FiniteQuadraticForm};
use super::shortvec;
use super::{component_disc_form, root_lattice, IntegerLattice};
use crate::roots::RootSum;

type Q = BigRational;

/// Isomorphism type `Z/n x Z/m` with `m | n` (`m = 1` for cyclic, `n = 1`
/// for the trivial group).
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct AbelianType {
    pub n: i64,
    pub m: i64,
}

impl AbelianType {
    pub fn new(n: i64, m: i64) -> Self {
        assert!(n >= 1 && m >= 1 && n % m == 0, "need m | n");
        AbelianType { n, m }
    }

    pub fn order(self) -> i64 {
        self.n * self.m
    }

    pub fn is_trivial(self) -> bool {
        self.order() == 1
    }
}

impl std::fmt::Display for AbelianType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.m == 1 {
            write!(f, "[{}]", self.n)
        } else {
            write!(f, "[{},{}]", self.n, self.m)
        }
    }
}

/// A totally isotropic subgroup, stored by generators and by its full
/// element set (the deduplication key).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropicSubgroup {
    pub gens: Vec<DiscElement>,
    pub elements: BTreeSet<DiscElement>,
}

impl IsotropicSubgroup {
    pub fn trivial(form: &FiniteQuadraticForm) -> Self {
        IsotropicSubgroup {
            gens: Vec::new(),
            elements: BTreeSet::from([form.zero_element()]),
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Lifts of the generators into the dual lattice.
    pub fn glue_lifts(&self, form: &FiniteQuadraticForm) -> Vec<Vec<Q>> {
        self.gens.iter().map(|g| form.lift(g)).collect()
    }
}

fn subgroup_elements(
    form: &FiniteQuadraticForm,
    gens: &[DiscElement],
    orders: &[i64],
) -> BTreeSet<DiscElement> {
    let mut set = BTreeSet::from([form.zero_element()]);
    let mut coeffs = vec![0i64; gens.len()];
    'outer: loop {
        let mut x = form.zero_element();
        for (g, &c) in gens.iter().zip(&coeffs) {
            x = form.add(&x, &form.scale(c, g));
        }
        set.insert(x);
        for i in 0..coeffs.len() {
            coeffs[i] += 1;
            if coeffs[i] < orders[i] {
                continue 'outer;
            }
            coeffs[i] = 0;
        }
        break;
    }
    set
}

/// All totally isotropic subgroups of the given abelian type, deduplicated
/// by their element sets.
pub fn isotropic_subgroups(
    form: &FiniteQuadraticForm,
    ty: AbelianType,
) -> Vec<IsotropicSubgroup> {
    collect_isotropic(form, ty, usize::MAX, |_| true, |_| true)
}

fn collect_isotropic(
    form: &FiniteQuadraticForm,
    ty: AbelianType,
    limit: usize,
    element_ok: impl Fn(&DiscElement) -> bool,
    mut keep: impl FnMut(&IsotropicSubgroup) -> bool,
) -> Vec<IsotropicSubgroup> {
    let mut out: Vec<IsotropicSubgroup> = Vec::new();
    let mut seen: BTreeSet<BTreeSet<DiscElement>> = BTreeSet::new();
    if ty.is_trivial() {
        let g = IsotropicSubgroup::trivial(form);
        if keep(&g) {
            out.push(g);
        }
        return out;
    }
    if form.group_order() % ty.order() != 0 {
        return out;
    }
    let all = form.elements();
    let candidates = |order: i64| -> Vec<&DiscElement> {
        let mut v: Vec<&DiscElement> = all
            .iter()
            .filter(|x| {
                form.element_order(x) == order
                    && form.is_isotropic_element(x)
                    && element_ok(x)
            })
            .collect();
        // deep classes first: elements supported on many components tend to
        // glue without new roots
        v.sort_by_key(|x| std::cmp::Reverse(x.iter().filter(|&&c| c != 0).count()));
        v
    };
    let first = candidates(ty.n);
    let second = if ty.m == 1 { Vec::new() } else { candidates(ty.m) };
    for x in &first {
        if ty.m == 1 {
            let gens = vec![(*x).clone()];
            let elements = subgroup_elements(form, &gens, &[ty.n]);
            if elements.len() != ty.order() as usize || !seen.insert(elements.clone()) {
                continue;
            }
            if elements.iter().all(|z| form.is_isotropic_element(z)) {
                let g = IsotropicSubgroup { gens, elements };
                if keep(&g) {
                    out.push(g);
                    if out.len() >= limit {
                        return out;
                    }
                }
            }
            continue;
        }
        for y in &second {
            if !form.b(x, y).is_zero() {
                continue;
            }
            let gens = vec![(*x).clone(), (*y).clone()];
            let elements = subgroup_elements(form, &gens, &[ty.n, ty.m]);
            if elements.len() != ty.order() as usize || !seen.insert(elements.clone()) {
                continue;
            }
            if elements.iter().all(|z| form.is_isotropic_element(z)) {
                let g = IsotropicSubgroup { gens, elements };
                if keep(&g) {
                    out.push(g);
                    if out.len() >= limit {
                        return out;
                    }
                }
            }
        }
    }
    out
}

/// Classifies every element of the discriminant form by whether its coset
/// in the dual lattice contains a vector of norm -2 ("bad"); a glue group
/// is admissible exactly when all of its nonzero elements are good.
pub struct CosetRootTable {
    bad: std::collections::BTreeMap<DiscElement, bool>,
}

impl CosetRootTable {
    pub fn build(base: &IntegerLattice, form: &FiniteQuadraticForm) -> Self {
        let neg: shortvec::QMat = base
            .gram
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&x| Q::from_integer(BigInt::from(-x)))
                    .collect()
            })
            .collect();
        let two = Q::from_integer(BigInt::from(2));
        let mut bad = std::collections::BTreeMap::new();
        for x in form.elements() {
            if x.iter().all(|&c| c == 0) {
                bad.insert(x, false);
                continue;
            }
            // only the coset matters and cosets of x and -x mirror each other
            let neg_x = form.neg(&x);
            if let Some(&b) = bad.get(&neg_x) {
                bad.insert(x, b);
                continue;
            }
            let center = form.lift(&x);
            let has_root =
                shortvec::coset_has_norm(&neg, &center, &two).unwrap_or(true);
            bad.insert(x, has_root);
        }
        CosetRootTable { bad }
    }

    pub fn is_bad(&self, x: &DiscElement) -> bool {
        *self.bad.get(x).unwrap_or(&true)
    }

    pub fn admissible(&self, g: &IsotropicSubgroup) -> bool {
        g.elements
            .iter()
            .all(|x| x.iter().all(|&c| c == 0) || !self.is_bad(x))
    }
}

/// Up to `limit` isotropic subgroups of the prescribed type in the
/// discriminant form of the root sum whose overlattices keep the root
/// system unchanged.  Pass `usize::MAX` for the complete list.
pub fn admissible_isotropics(
    roots: &RootSum,
    ty: AbelianType,
    limit: usize,
) -> Vec<IsotropicSubgroup> {
    let base = root_lattice(roots);
    let form = component_disc_form(roots);
    if ty.is_trivial() {
        return vec![IsotropicSubgroup::trivial(&form)];
    }
    let table = CosetRootTable::build(&base, &form);
    collect_isotropic(
        &form,
        ty,
        limit,
        |x| !table.is_bad(x),
        |g| table.admissible(g),
    )
}

#[cfg(test)]
mod tests {
    use super::super::{overlattice, overlattice_adds_roots};
    use super::*;

    #[test]
    fn trivial_type() {
        let roots = RootSum::parse("A1").unwrap();
        let form = component_disc_form(&roots);
        let subs = isotropic_subgroups(&form, AbelianType::new(1, 1));
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].order(), 1);
    }

    #[test]
    fn eight_a1_order_2_subgroups() {
        // isotropic elements of (Z/2)^8 under q = -weight/2 mod 2Z: those of
        // weight divisible by 4
        let roots = RootSum::parse("8A1").unwrap();
        let form = component_disc_form(&roots);
        let subs = isotropic_subgroups(&form, AbelianType::new(2, 1));
        let weight_4 = 70; // C(8,4)
        let weight_8 = 1;
        assert_eq!(subs.len(), weight_4 + weight_8);
        // the admissible one is the all-ones class
        let adm = admissible_isotropics(&roots, AbelianType::new(2, 1), usize::MAX);
        assert_eq!(adm.len(), 1);
        assert_eq!(adm[0].gens, vec![vec![1i64; 8]]);
    }

    #[test]
    fn admissibility_agrees_with_root_counts() {
        let roots = RootSum::parse("8A1").unwrap();
        let base = root_lattice(&roots);
        let form = component_disc_form(&roots);
        let table = CosetRootTable::build(&base, &form);
        for g in isotropic_subgroups(&form, AbelianType::new(2, 1)) {
            let over = overlattice(&base, &g.glue_lifts(&form)).unwrap();
            assert_eq!(
                table.admissible(&g),
                !overlattice_adds_roots(&base, &over),
                "{:?}",
                g.gens
            );
        }
    }

    #[test]
    fn six_a2_admits_order_3_glue() {
        let roots = RootSum::parse("6A2").unwrap();
        let adm = admissible_isotropics(&roots, AbelianType::new(3, 1), 1);
        assert_eq!(adm.len(), 1);
    }

    #[test]
    fn twelve_a1_admits_klein_glue() {
        let roots = RootSum::parse("12A1").unwrap();
        let adm = admissible_isotropics(&roots, AbelianType::new(2, 2), 1);
        assert_eq!(adm.len(), 1);
        for x in adm[0].elements.iter() {
            let w = x.iter().filter(|&&c| c != 0).count();
            assert!(w == 0 || w >= 8);
        }
    }

    #[test]
    fn odd_order_obstruction() {
        // 2A8 has discriminant group (Z/9)^2 of odd order: no Z/2 subgroup
        let roots = RootSum::parse("2A8").unwrap();
        let adm = admissible_isotropics(&roots, AbelianType::new(2, 1), usize::MAX);
        assert!(adm.is_empty());
    }
}
