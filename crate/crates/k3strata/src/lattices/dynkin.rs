//! Diagram symmetry groups of ADE sums and their images on discriminant
//! forms.  The group is generated by the diagram automorphisms of each
//! component (D4 carries the full order-6 symmetry of its three outer
//! nodes) and by permutations of identical components; it acts on the
//! simple roots, hence on the discriminant form and, fixing a glue group,
//! on the glued form.

use std::collections::{BTreeMap, BTreeSet};

use num::{BigRational, Zero};

use super::disc::{DiscElement, FiniteQuadraticForm};
use super::isotropic::IsotropicSubgroup;
use super::{component_disc_form, root_lattice, LatticeError};
use crate::roots::{RootSum, RootSymbol};

type Q = BigRational;

/// The symmetry group of the Dynkin diagram of a root sum.
#[derive(Clone, Debug)]
pub struct DynkinSymmetryGroup {
    pub roots: RootSum,
    offsets: Vec<usize>,
    rank: usize,
    /// For each component, its automorphisms as local index permutations.
    comp_auts: Vec<Vec<Vec<usize>>>,
    /// Classes of identical components, as index lists into `roots`.
    classes: Vec<Vec<usize>>,
}

/// Local diagram automorphisms of one component, matching the node layout
/// of [`super::ade`].
fn component_automorphisms(sym: RootSymbol) -> Vec<Vec<usize>> {
    let n = sym.rank() as usize;
    let id: Vec<usize> = (0..n).collect();
    match sym {
        RootSymbol::A(1) => vec![id],
        RootSymbol::A(_) => {
            let rev: Vec<usize> = (0..n).rev().collect();
            vec![id, rev]
        }
        RootSymbol::D(4) => {
            // center node 1; all permutations of the outer nodes {0, 2, 3}
            let outers = [0usize, 2, 3];
            let mut out = Vec::new();
            let perms3 = [
                [0, 1, 2],
                [0, 2, 1],
                [1, 0, 2],
                [1, 2, 0],
                [2, 0, 1],
                [2, 1, 0],
            ];
            for p in perms3 {
                let mut v = vec![0usize; 4];
                v[1] = 1;
                for (slot, &img) in p.iter().enumerate() {
                    v[outers[slot]] = outers[img];
                }
                out.push(v);
            }
            out
        }
        RootSymbol::D(_) => {
            let mut sw = id.clone();
            sw.swap(n - 2, n - 1);
            vec![id, sw]
        }
        RootSymbol::E(6) => {
            // chain 0-2-3-4-5 with node 1 on node 3: flip the two long arms
            vec![id, vec![5, 1, 4, 3, 2, 0]]
        }
        RootSymbol::E(_) => vec![id],
    }
}

impl DynkinSymmetryGroup {
    pub fn order(&self) -> u64 {
        let auts: u64 = self.comp_auts.iter().map(|a| a.len() as u64).product();
        let perms: u64 = self
            .classes
            .iter()
            .map(|c| (1..=c.len() as u64).product::<u64>())
            .product();
        auts * perms
    }

    /// All elements as permutations of the simple roots.  Guarded by a
    /// bound, since component multiplicities make the group factorial.
    pub fn enumerate_elements(&self, bound: u64) -> Result<Vec<Vec<usize>>, LatticeError> {
        if self.order() > bound {
            return Err(LatticeError::TooLarge(bound));
        }
        let n_comp = self.roots.0.len();
        // all component permutations preserving symbols
        let mut comp_perms: Vec<Vec<usize>> = vec![(0..n_comp).collect()];
        for class in &self.classes {
            let perms = permutations(class.len());
            let mut next = Vec::new();
            for base in &comp_perms {
                for p in &perms {
                    let mut v = base.clone();
                    for (slot, &img) in p.iter().enumerate() {
                        v[class[slot]] = class[img];
                    }
                    next.push(v);
                }
            }
            comp_perms = next;
        }
        let mut out = Vec::with_capacity(self.order() as usize);
        let mut aut_choice = vec![0usize; n_comp];
        loop {
            for sigma in &comp_perms {
                let mut total = vec![0usize; self.rank];
                for (c, &target) in sigma.iter().enumerate() {
                    let auts = &self.comp_auts[c][aut_choice[c]];
                    for (local, &img) in auts.iter().enumerate() {
                        total[self.offsets[c] + local] = self.offsets[target] + img;
                    }
                }
                out.push(total);
            }
            // odometer over per-component automorphism choices
            let mut i = 0;
            loop {
                if i == n_comp {
                    return Ok(out);
                }
                aut_choice[i] += 1;
                if aut_choice[i] < self.comp_auts[i].len() {
                    break;
                }
                aut_choice[i] = 0;
                i += 1;
            }
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let smaller = permutations(n - 1);
    for p in smaller {
        for slot in 0..=p.len() {
            let mut v = p.clone();
            v.insert(slot, n - 1);
            out.push(v);
        }
    }
    out
}

/// The diagram symmetry group of a root sum.
pub fn dynkin_group(roots: &RootSum) -> DynkinSymmetryGroup {
    let mut offsets = Vec::with_capacity(roots.0.len());
    let mut off = 0usize;
    for &s in &roots.0 {
        offsets.push(off);
        off += s.rank() as usize;
    }
    let comp_auts = roots.0.iter().map(|&s| component_automorphisms(s)).collect();
    let mut by_symbol: BTreeMap<RootSymbol, Vec<usize>> = BTreeMap::new();
    for (i, &s) in roots.0.iter().enumerate() {
        by_symbol.entry(s).or_default().push(i);
    }
    let classes = by_symbol.into_values().filter(|v| v.len() > 1).collect();
    DynkinSymmetryGroup {
        roots: roots.clone(),
        offsets,
        rank: off,
        comp_auts,
        classes,
    }
}

/// The map a root permutation induces on the discriminant form, as images
/// of the generators.
fn induced_disc_map(
    form: &FiniteQuadraticForm,
    perm: &[usize],
) -> Option<Vec<DiscElement>> {
    let rank = perm.len();
    let n_gens = form.n_gens();
    let mut images = Vec::with_capacity(n_gens);
    for lift in &form.lifts {
        // permuted lift: w[perm[i]] = lift[i]
        let mut w = vec![Q::zero(); rank];
        for (i, x) in lift.iter().enumerate() {
            w[perm[i]] = x.clone();
        }
        images.push(express_in_disc(form, &w)?);
    }
    Some(images)
}

/// Writes a dual vector's class in generator coordinates by brute force
/// over the generators supported where the vector lives.
fn express_in_disc(form: &FiniteQuadraticForm, w: &[Q]) -> Option<DiscElement> {
    // candidate generator indices: those whose lift support intersects w's
    let support: BTreeSet<usize> = w
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, _)| i)
        .collect();
    let gens: Vec<usize> = (0..form.n_gens())
        .filter(|&j| {
            form.lifts[j]
                .iter()
                .enumerate()
                .any(|(i, x)| !x.is_zero() && support.contains(&i))
        })
        .collect();
    let mut coeffs = form.zero_element();
    fn search(
        form: &FiniteQuadraticForm,
        w: &[Q],
        gens: &[usize],
        k: usize,
        coeffs: &mut DiscElement,
    ) -> bool {
        if k == gens.len() {
            // w - sum coeffs * lifts must be integral
            let lift = form.lift(coeffs);
            return w
                .iter()
                .zip(&lift)
                .all(|(a, b)| (a - b).is_integer());
        }
        let j = gens[k];
        for c in 0..form.orders[j] {
            coeffs[j] = c;
            if search(form, w, gens, k + 1, coeffs) {
                return true;
            }
        }
        coeffs[j] = 0;
        false
    }
    search(form, w, &gens, 0, &mut coeffs).then_some(coeffs)
}

/// Orders attached to the action on a glue group `G` inside the
/// discriminant form of `roots`:
/// - the stabilizer of `G` (as a set) inside the diagram symmetry group,
/// - its image in the automorphisms of the glued form `G-perp / G`,
/// - that image modulo the negation map.
pub fn stabilized_image(
    group: &DynkinSymmetryGroup,
    glue: &IsotropicSubgroup,
    bound: u64,
) -> Result<(u64, u64, u64), LatticeError> {
    let form = component_disc_form(&group.roots);
    let elements = group.enumerate_elements(bound)?;
    debug_assert!(diagram_elements_preserve_gram(group, &elements));
    // the stabilizer of the glue set
    let glue_set: BTreeSet<DiscElement> = glue.elements.clone();
    let mut stabilizer_maps = Vec::new();
    for perm in &elements {
        let Some(gen_images) = induced_disc_map(&form, perm) else {
            return Err(LatticeError::Degenerate);
        };
        let image_of = |x: &DiscElement| -> DiscElement {
            let mut acc = form.zero_element();
            for (j, &c) in x.iter().enumerate() {
                if c != 0 {
                    acc = form.add(&acc, &form.scale(c, &gen_images[j]));
                }
            }
            acc
        };
        let mapped: BTreeSet<DiscElement> = glue_set.iter().map(&image_of).collect();
        if mapped == glue_set {
            stabilizer_maps.push(gen_images);
        }
    }
    let stab_order = stabilizer_maps.len() as u64;

    // the glued form: cosets of G inside G-perp
    let perp: Vec<DiscElement> = form
        .elements()
        .into_iter()
        .filter(|x| glue.gens.iter().all(|g| form.b(x, g).is_zero()))
        .collect();
    let coset_of = |x: &DiscElement| -> DiscElement {
        glue_set
            .iter()
            .map(|g| form.add(x, g))
            .min()
            .expect("glue group nonempty")
    };
    let mut coset_reps: Vec<DiscElement> = perp.iter().map(&coset_of).collect();
    coset_reps.sort();
    coset_reps.dedup();
    let coset_index: BTreeMap<DiscElement, usize> = coset_reps
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, x)| (x, i))
        .collect();

    let induced_on_cosets = |gen_images: &[DiscElement]| -> Vec<usize> {
        coset_reps
            .iter()
            .map(|x| {
                let mut acc = form.zero_element();
                for (j, &c) in x.iter().enumerate() {
                    if c != 0 {
                        acc = form.add(&acc, &form.scale(c, &gen_images[j]));
                    }
                }
                coset_index[&coset_of(&acc)]
            })
            .collect()
    };

    let mut image_set: BTreeSet<Vec<usize>> = BTreeSet::new();
    for maps in &stabilizer_maps {
        image_set.insert(induced_on_cosets(maps));
    }
    let image_order = image_set.len() as u64;

    // negation on the glued form
    let negation: Vec<usize> = coset_reps
        .iter()
        .map(|x| coset_index[&coset_of(&form.neg(x))])
        .collect();
    let identity: Vec<usize> = (0..coset_reps.len()).collect();
    let mod_sign = if negation != identity && image_set.contains(&negation) {
        image_order / 2
    } else {
        image_order
    };
    Ok((stab_order, image_order, mod_sign))
}

fn diagram_elements_preserve_gram(group: &DynkinSymmetryGroup, elements: &[Vec<usize>]) -> bool {
    let gram = root_lattice(&group.roots).gram;
    elements.iter().take(24).all(|p| {
        (0..gram.len())
            .all(|i| (0..gram.len()).all(|j| gram[p[i]][p[j]] == gram[i][j]))
    })
}

#[cfg(test)]
mod tests {
    use super::super::isotropic::{admissible_isotropics, AbelianType};
    use super::*;

    #[test]
    fn orders_multiply() {
        let g = dynkin_group(&RootSum::parse("D4+2A6+A1").unwrap());
        assert_eq!(g.order(), 6 * 2 * 2 * 2); // triality, two flips, swap
        let g = dynkin_group(&RootSum::parse("8A1").unwrap());
        assert_eq!(g.order(), 40320);
        let g = dynkin_group(&RootSum::parse("A1").unwrap());
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn elements_preserve_gram() {
        let roots = RootSum::parse("D4+A2+A2").unwrap();
        let g = dynkin_group(&roots);
        let elements = g.enumerate_elements(10_000).unwrap();
        assert_eq!(elements.len() as u64, g.order());
        assert!(diagram_elements_preserve_gram(&g, &elements));
        // elements are pairwise distinct permutations
        let set: BTreeSet<&Vec<usize>> = elements.iter().collect();
        assert_eq!(set.len(), elements.len());
    }

    #[test]
    fn single_a1_gives_trivial_data() {
        let roots = RootSum::parse("A1").unwrap();
        let g = dynkin_group(&roots);
        let form = component_disc_form(&roots);
        let trivial = IsotropicSubgroup::trivial(&form);
        let (stab, image, modsign) = stabilized_image(&g, &trivial, 1 << 20).unwrap();
        assert_eq!(stab, 1);
        assert_eq!(image, 1);
        assert_eq!(modsign, 1);
    }

    #[test]
    fn eight_a1_all_ones_glue_is_fully_symmetric() {
        let roots = RootSum::parse("8A1").unwrap();
        let g = dynkin_group(&roots);
        let glue = admissible_isotropics(&roots, AbelianType::new(2, 1), 1)
            .pop()
            .unwrap();
        let (stab, _image, _modsign) = stabilized_image(&g, &glue, 1 << 20).unwrap();
        assert_eq!(stab, 40320);
    }

    #[test]
    fn d4_triality_acts_faithfully_on_disc() {
        let roots = RootSum::parse("D4").unwrap();
        let g = dynkin_group(&roots);
        let form = component_disc_form(&roots);
        let trivial = IsotropicSubgroup::trivial(&form);
        let (stab, image, modsign) = stabilized_image(&g, &trivial, 100).unwrap();
        assert_eq!(stab, 6);
        assert_eq!(image, 6);
        // negation is the identity on an exponent-2 group
        assert_eq!(modsign, 6);
    }
}
