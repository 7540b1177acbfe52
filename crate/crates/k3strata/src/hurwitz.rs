//! The braid-group action on factorization tuples and the block-system
//! criterion for factoring a branched cover of the sphere through a cyclic
//! cover.

use thiserror::Error;

use crate::perm::Perm;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HurwitzError {
    #[error("index {0} out of range 1..{1}")]
    IndexOutOfRange(usize, usize),
    #[error("tuple product is not the identity")]
    ProductNotIdentity,
    #[error("tuple does not generate a transitive group")]
    NotTransitive,
    #[error("degree mismatch in tuple")]
    DegreeMismatch,
    #[error("{0} does not divide the degree {1}")]
    NotADivisor(usize, usize),
    #[error("node budget {0} exceeded while exploring the orbit")]
    OrbitBudget(usize),
}

/// An ordered tuple `(s1, ..., sr)` of permutations with identity product
/// whose entries generate a transitive group: the monodromy data of a
/// branched cover with `r` branch points.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FactorizationTuple {
    degree: usize,
    sigmas: Vec<Perm>,
}

impl FactorizationTuple {
    pub fn new(sigmas: Vec<Perm>) -> Result<Self, HurwitzError> {
        let degree = sigmas.first().map_or(0, Perm::degree);
        if sigmas.iter().any(|s| s.degree() != degree) {
            return Err(HurwitzError::DegreeMismatch);
        }
        let mut prod = Perm::identity(degree);
        for s in &sigmas {
            prod = prod.then(s);
        }
        if !prod.is_identity() {
            return Err(HurwitzError::ProductNotIdentity);
        }
        let refs: Vec<&Perm> = sigmas.iter().collect();
        if !Perm::transitive(&refs) {
            return Err(HurwitzError::NotTransitive);
        }
        Ok(FactorizationTuple { degree, sigmas })
    }

    /// Parses the `cycles;cycles;...` wire format; the degree is the largest
    /// point mentioned.
    pub fn parse(s: &str) -> Result<Self, HurwitzError> {
        let degree = s
            .split(|c: char| !c.is_ascii_digit())
            .filter(|t| !t.is_empty())
            .filter_map(|t| t.parse::<usize>().ok())
            .max()
            .unwrap_or(0);
        let sigmas: Result<Vec<Perm>, _> = s
            .split(';')
            .map(|p| Perm::parse(degree, p).map_err(|_| HurwitzError::DegreeMismatch))
            .collect();
        FactorizationTuple::new(sigmas?)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn entries(&self) -> &[Perm] {
        &self.sigmas
    }

    pub fn len(&self) -> usize {
        self.sigmas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigmas.is_empty()
    }

    /// Multiset of cycle types of the entries, sorted.
    pub fn class_multiset(&self) -> Vec<Vec<usize>> {
        let mut v: Vec<Vec<usize>> = self.sigmas.iter().map(Perm::cycle_type).collect();
        v.sort();
        v
    }
}

/// One braid move on adjacent entries: positions `i, i+1` (1-based,
/// `i < r`) are replaced by `(s_{i+1}, s_{i+1}^-1 s_i s_{i+1})` for
/// `dir = +1` and by `(s_i s_{i+1} s_i^-1, s_i)` for `dir = -1`.  The
/// product and the generated subgroup are unchanged.
pub fn hurwitz_move(
    t: &FactorizationTuple,
    i: usize,
    dir: i8,
) -> Result<FactorizationTuple, HurwitzError> {
    if i == 0 || i >= t.sigmas.len() {
        return Err(HurwitzError::IndexOutOfRange(i, t.sigmas.len()));
    }
    let mut sigmas = t.sigmas.clone();
    let (a, b) = (sigmas[i - 1].clone(), sigmas[i].clone());
    if dir >= 0 {
        sigmas[i - 1] = b.clone();
        sigmas[i] = b.inverse().then(&a).then(&b);
    } else {
        sigmas[i - 1] = a.then(&b).then(&a.inverse());
        sigmas[i] = a;
    }
    Ok(FactorizationTuple {
        degree: t.degree,
        sigmas,
    })
}

/// Explores the orbit of a tuple under all braid moves, up to `budget`
/// distinct tuples; errors out when the budget is exhausted.
pub fn hurwitz_orbit(
    t: &FactorizationTuple,
    budget: usize,
) -> Result<Vec<FactorizationTuple>, HurwitzError> {
    let mut seen = std::collections::BTreeSet::new();
    seen.insert(t.clone());
    let mut queue = vec![t.clone()];
    while let Some(x) = queue.pop() {
        for i in 1..x.len() {
            for dir in [1, -1] {
                let y = hurwitz_move(&x, i, dir)?;
                if seen.insert(y.clone()) {
                    if seen.len() > budget {
                        return Err(HurwitzError::OrbitBudget(budget));
                    }
                    queue.push(y);
                }
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// A partition of the points into `k` blocks of equal size, stored as the
/// block index of each 0-indexed point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSystem {
    pub k: usize,
    pub block_of: Vec<usize>,
}

impl BlockSystem {
    /// Blocks as sorted lists of 1-indexed points.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.k];
        for (p, &b) in self.block_of.iter().enumerate() {
            blocks[b].push(p + 1);
        }
        blocks
    }

    /// Whether a permutation maps blocks onto blocks.
    pub fn respected_by(&self, s: &Perm) -> bool {
        let mut image = vec![usize::MAX; self.k];
        for p in 0..s.degree() {
            let (b, ib) = (self.block_of[p], self.block_of[s.apply0(p)]);
            if image[b] == usize::MAX {
                image[b] = ib;
            } else if image[b] != ib {
                return false;
            }
        }
        true
    }

    /// Whether a permutation fixes every block setwise.
    pub fn preserved_by(&self, s: &Perm) -> bool {
        (0..s.degree()).all(|p| self.block_of[p] == self.block_of[s.apply0(p)])
    }

    fn is_valid_for(&self, t: &FactorizationTuple) -> bool {
        let size = t.degree() / self.k;
        self.blocks().iter().all(|b| b.len() == size)
            && t.entries().iter().all(|s| self.respected_by(s))
            && t.entries()[2..].iter().all(|s| self.preserved_by(s))
    }
}

fn canonical_blocks(block_of: &[usize]) -> BlockSystem {
    let k = block_of.iter().max().map_or(0, |&m| m + 1);
    let mut names = vec![usize::MAX; k];
    let mut next = 0;
    let mut out = vec![0usize; block_of.len()];
    for (p, &b) in block_of.iter().enumerate() {
        if names[b] == usize::MAX {
            names[b] = next;
            next += 1;
        }
        out[p] = names[b];
    }
    BlockSystem { k, block_of: out }
}

/// Sufficient divisibility condition for a factorization through a cyclic
/// degree-`k` cover branched at the first two branch points: all parts of
/// both partitions are divisible by `k`.
pub fn divisibility_factor_exists(p1: &[usize], p2: &[usize], k: usize) -> bool {
    k >= 2 && p1.iter().chain(p2).all(|&part| part % k == 0)
}

/// Searches for a partition of the points into `k` blocks of size `d/k`
/// preserved by `s3, ..., sr` and permuted by `s1, s2`.  A returned system
/// certifies that the cover factors as (degree d/k) after (cyclic degree k,
/// branched at the first two branch points).
///
/// In any such system the quotient action of `s1` is a `k`-cycle (the tail
/// acts trivially on blocks, `s2` induces the inverse of `s1`, and the
/// block action is transitive), so the system is determined by the block
/// containing point 1: a union of orbits of `<s3, ..., sr, s1^k>` whose
/// `s1`-translates tile all points.  The search runs over such unions.
pub fn find_block_factorization(
    t: &FactorizationTuple,
    k: usize,
) -> Result<Option<BlockSystem>, HurwitzError> {
    let d = t.degree();
    if k < 2 || !d.is_multiple_of(k) {
        return Err(HurwitzError::NotADivisor(k, d));
    }
    if t.len() < 2 {
        return Ok(None);
    }
    let mut s1_pow = Perm::identity(d);
    for _ in 0..k {
        s1_pow = s1_pow.then(&t.sigmas[0]);
    }
    let mut stab_gens: Vec<&Perm> = t.sigmas[2..].iter().collect();
    stab_gens.push(&s1_pow);
    let orbit_of = orbit_partition(d, &stab_gens);
    let n_orbits = orbit_of.iter().max().map_or(0, |&m| m + 1);
    let mut orbit_sizes = vec![0usize; n_orbits];
    for &o in &orbit_of {
        orbit_sizes[o] += 1;
    }
    // depth-first over unions of orbits containing the orbit of point 1
    let size = d / k;
    let mut chosen = vec![false; n_orbits];
    chosen[orbit_of[0]] = true;
    let start_size = orbit_sizes[orbit_of[0]];
    if start_size > size {
        return Ok(None);
    }
    #[allow(clippy::too_many_arguments)]
    fn dfs(
        next: usize,
        total: usize,
        size: usize,
        chosen: &mut Vec<bool>,
        orbit_sizes: &[usize],
        orbit_of: &[usize],
        t: &FactorizationTuple,
        k: usize,
    ) -> Option<BlockSystem> {
        if total == size {
            return check_translates(chosen, orbit_of, t, k);
        }
        if next >= orbit_sizes.len() {
            return None;
        }
        // skip this orbit
        if let Some(found) = dfs(next + 1, total, size, chosen, orbit_sizes, orbit_of, t, k) {
            return Some(found);
        }
        // take it
        if !chosen[next] && total + orbit_sizes[next] <= size {
            chosen[next] = true;
            let r = dfs(
                next + 1,
                total + orbit_sizes[next],
                size,
                chosen,
                orbit_sizes,
                orbit_of,
                t,
                k,
            );
            chosen[next] = false;
            if r.is_some() {
                return r;
            }
        }
        None
    }
    Ok(dfs(
        0,
        start_size,
        size,
        &mut chosen,
        &orbit_sizes,
        &orbit_of,
        t,
        k,
    ))
}

/// Tries the candidate first block (the union of chosen orbits): its
/// `s1`-translates must partition the points, and the resulting system must
/// pass the full validity checks.
fn check_translates(
    chosen: &[bool],
    orbit_of: &[usize],
    t: &FactorizationTuple,
    k: usize,
) -> Option<BlockSystem> {
    let d = t.degree();
    let mut block_of = vec![usize::MAX; d];
    let base: Vec<usize> = (0..d).filter(|&p| chosen[orbit_of[p]]).collect();
    let s1 = &t.entries()[0];
    let mut points = base;
    for b in 0..k {
        for &p in &points {
            if block_of[p] != usize::MAX {
                return None;
            }
            block_of[p] = b;
        }
        points = points.iter().map(|&p| s1.apply0(p)).collect();
    }
    if block_of.contains(&usize::MAX) {
        return None;
    }
    let sys = canonical_blocks(&block_of);
    (sys.k == k && sys.is_valid_for(t)).then_some(sys)
}

/// Orbit index of every point under the listed permutations.
fn orbit_partition(d: usize, perms: &[&Perm]) -> Vec<usize> {
    let mut orbit = vec![usize::MAX; d];
    let mut next = 0;
    for start in 0..d {
        if orbit[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        orbit[start] = next;
        while let Some(p) = stack.pop() {
            for s in perms {
                let q = s.apply0(p);
                if orbit[q] == usize::MAX {
                    orbit[q] = next;
                    stack.push(q);
                }
            }
        }
        next += 1;
    }
    orbit
}

/// Second route to a block system: complete the second entry to a full
/// `d`-cycle `rho` by absorbing tail entries, then take the orbits of
/// `rho^k` as blocks.  Absorption is tried over prefixes and suffixes of
/// the tail, which covers the generic factorization shape; used for
/// differential testing against `find_block_factorization`.
pub fn block_factorization_by_power(
    t: &FactorizationTuple,
    k: usize,
) -> Result<Option<BlockSystem>, HurwitzError> {
    let d = t.degree();
    if k < 2 || !d.is_multiple_of(k) {
        return Err(HurwitzError::NotADivisor(k, d));
    }
    if t.len() < 2 {
        return Ok(None);
    }
    let mut candidates: Vec<Perm> = Vec::new();
    let mut acc = t.sigmas[1].clone();
    candidates.push(acc.clone());
    for s in &t.sigmas[2..] {
        acc = acc.then(s);
        candidates.push(acc.clone());
    }
    let mut acc = t.sigmas[1].clone();
    for s in t.sigmas[2..].iter().rev() {
        acc = acc.then(s);
        candidates.push(acc.clone());
    }
    for rho in candidates {
        if rho.cycle_type() != vec![d] {
            continue;
        }
        let mut rho_k = Perm::identity(d);
        for _ in 0..k {
            rho_k = rho_k.then(&rho);
        }
        let mut block_of = vec![usize::MAX; d];
        let mut next = 0;
        for p in 0..d {
            if block_of[p] != usize::MAX {
                continue;
            }
            let mut x = p;
            loop {
                block_of[x] = next;
                x = rho_k.apply0(x);
                if x == p {
                    break;
                }
            }
            next += 1;
        }
        if next != k {
            continue;
        }
        let sys = canonical_blocks(&block_of);
        if sys.is_valid_for(t) {
            return Ok(Some(sys));
        }
    }
    Ok(None)
}

/// Exhaustive reference search over all partitions of the points into `k`
/// equal blocks; exponential, for small degrees only.
pub fn block_factorization_exhaustive(
    t: &FactorizationTuple,
    k: usize,
) -> Result<Option<BlockSystem>, HurwitzError> {
    let d = t.degree();
    if k < 2 || !d.is_multiple_of(k) {
        return Err(HurwitzError::NotADivisor(k, d));
    }
    let size = d / k;

    fn assign(
        p: usize,
        k: usize,
        size: usize,
        block_of: &mut Vec<usize>,
        t: &FactorizationTuple,
    ) -> Option<BlockSystem> {
        let d = block_of.len();
        if p == d {
            let sys = canonical_blocks(block_of);
            if sys.k == k && sys.is_valid_for(t) {
                return Some(sys);
            }
            return None;
        }
        let mut used = vec![0usize; k];
        for &b in block_of[..p].iter() {
            used[b] += 1;
        }
        let first_empty = (0..k).find(|&b| used[b] == 0);
        for (b, &occupancy) in used.iter().enumerate() {
            if occupancy >= size {
                continue;
            }
            // block labels are interchangeable: a point may only open the
            // first empty block
            if occupancy == 0 && Some(b) != first_empty {
                continue;
            }
            block_of[p] = b;
            if let Some(found) = assign(p + 1, k, size, block_of, t) {
                return Some(found);
            }
            block_of[p] = usize::MAX;
        }
        None
    }

    let mut block_of = vec![usize::MAX; d];
    Ok(assign(0, k, size, &mut block_of, t))
}

/// Branch data of the degree-`deg_je` second factor of a j-map at the
/// special points upstairs: the 2-torsion and 3-torsion points of the first
/// factor's target and its poles.
#[derive(Clone, Debug, Default)]
pub struct BranchDataJE {
    pub deg_je: usize,
    pub at_2_torsion: Vec<Vec<usize>>,
    pub at_3_torsion: Vec<Vec<usize>>,
    pub at_poles: Vec<Vec<usize>>,
    pub n_ivstar: usize,
}

/// One violated branching condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RamiViolation {
    /// (1) a 2-torsion partition has an odd part.
    OddPartAt2Torsion,
    /// (2) at 3-torsion points, parts of size 2 mod 3 are forbidden and the
    /// parts of size 1 mod 3 must number exactly `#IV*`.
    BadPartsAt3Torsion,
    /// (3) `e2 >= 2`.
    TooMany2Torsion,
    /// (4) `e3 >= 2` with no `IV*` fiber.
    TooMany3TorsionNoIVStar,
    /// (5) `e3 >= 3` with at most two `IV*` fibers.
    TooMany3TorsionFewIVStar,
    /// (6) `e3 = 2` with `#IV* < 3` forces `deg = 1 mod 3` and `#IV* = 2`.
    TwoThreeTorsionConstraint,
}

/// Evaluates the branching restrictions at torsion points.  Returns the
/// full list of violations; empty means admissible.
pub fn rami_check(b: &BranchDataJE, e2: usize, e3: usize) -> Vec<RamiViolation> {
    let mut v = Vec::new();
    if b.at_2_torsion
        .iter()
        .any(|p| p.iter().any(|&part| part % 2 == 1))
    {
        v.push(RamiViolation::OddPartAt2Torsion);
    }
    let mut ones = 0usize;
    let mut twos = 0usize;
    for p in &b.at_3_torsion {
        for &part in p {
            match part % 3 {
                1 => ones += 1,
                2 => twos += 1,
                _ => {}
            }
        }
    }
    if twos > 0 || ones != b.n_ivstar {
        v.push(RamiViolation::BadPartsAt3Torsion);
    }
    if e2 >= 2 {
        v.push(RamiViolation::TooMany2Torsion);
    }
    if e3 >= 2 && b.n_ivstar == 0 {
        v.push(RamiViolation::TooMany3TorsionNoIVStar);
    }
    if e3 >= 3 && b.n_ivstar <= 2 {
        v.push(RamiViolation::TooMany3TorsionFewIVStar);
    }
    if e3 == 2 && b.n_ivstar < 3 && !(b.deg_je % 3 == 1 && b.n_ivstar == 2) {
        v.push(RamiViolation::TwoThreeTorsionConstraint);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hurwitz_move_invariants() {
        let s1 = Perm::parse(4, "(1 2)").unwrap();
        let s2 = Perm::parse(4, "(2 3)").unwrap();
        let s3 = Perm::parse(4, "(3 4)").unwrap();
        let s4 = s1.then(&s2).then(&s3).inverse();
        let t = FactorizationTuple::new(vec![s1, s2, s3, s4]).unwrap();
        for i in 1..t.len() {
            let moved = hurwitz_move(&t, i, 1).unwrap();
            assert_eq!(moved.class_multiset(), t.class_multiset());
            let back = hurwitz_move(&moved, i, -1).unwrap();
            assert_eq!(back, t);
        }
        assert!(hurwitz_move(&t, 0, 1).is_err());
        assert!(hurwitz_move(&t, 4, 1).is_err());
    }

    #[test]
    fn orbit_budget_is_enforced() {
        let s1 = Perm::parse(4, "(1 2)").unwrap();
        let s2 = Perm::parse(4, "(2 3)").unwrap();
        let s3 = Perm::parse(4, "(3 4)").unwrap();
        let s4 = s1.then(&s2).then(&s3).inverse();
        let t = FactorizationTuple::new(vec![s1, s2, s3, s4]).unwrap();
        assert_eq!(hurwitz_orbit(&t, 1), Err(HurwitzError::OrbitBudget(1)));
        let orbit = hurwitz_orbit(&t, 100_000).unwrap();
        assert!(orbit.len() > 1);
        // the orbit is closed under one more round of moves
        for x in orbit.iter().take(10) {
            for i in 1..x.len() {
                assert!(orbit.contains(&hurwitz_move(x, i, 1).unwrap()));
            }
        }
    }

    #[test]
    fn divisibility_filter() {
        assert!(divisibility_factor_exists(&[2, 2], &[2, 2], 2));
        assert!(!divisibility_factor_exists(&[3, 1], &[2, 2], 2));
        assert!(divisibility_factor_exists(&[6], &[6], 3));
    }

    #[test]
    fn block_factorization_degree_4() {
        let s1 = Perm::parse(4, "(1 3)(2 4)").unwrap();
        let s3 = Perm::parse(4, "(1 2)(3 4)").unwrap();
        let s2 = s1.then(&s3).inverse();
        assert_eq!(s2.cycle_type(), vec![2, 2]);
        let t = FactorizationTuple::new(vec![s1, s2, s3]).unwrap();
        let sys = find_block_factorization(&t, 2).unwrap().unwrap();
        assert_eq!(sys.blocks(), vec![vec![1, 2], vec![3, 4]]);
        let ex = block_factorization_exhaustive(&t, 2).unwrap().unwrap();
        assert_eq!(ex.blocks(), sys.blocks());
        assert!(find_block_factorization(&t, 3).is_err());
    }

    #[test]
    fn no_blocks_when_parts_coprime() {
        let s1 = Perm::parse(6, "(1 2 3)").unwrap();
        let s2 = Perm::parse(6, "(3 4 5 6)").unwrap();
        let s3 = s1.then(&s2).inverse();
        let t = FactorizationTuple::new(vec![s1, s2, s3]).unwrap();
        assert_eq!(find_block_factorization(&t, 2).unwrap(), None);
        assert_eq!(block_factorization_exhaustive(&t, 2).unwrap(), None);
        assert_eq!(block_factorization_by_power(&t, 2).unwrap(), None);
    }

    #[test]
    fn pullback_through_power_map_has_blocks() {
        // degree-6 tuple whose blocks {1,2},{3,4},{5,6} are permuted
        // cyclically by s1, s2 and preserved by the tail
        let s1 = Perm::parse(6, "(1 3 5)(2 4 6)").unwrap();
        let s2 = Perm::parse(6, "(1 5 3)(2 6 4)").unwrap();
        let s3 = Perm::parse(6, "(1 2)(3 4)(5 6)").unwrap();
        let s4 = s1.then(&s2).then(&s3).inverse();
        let t = FactorizationTuple::new(vec![s1, s2, s3, s4]).unwrap();
        let sys = find_block_factorization(&t, 3).unwrap().unwrap();
        assert_eq!(sys.blocks(), vec![vec![1, 2], vec![3, 4], vec![5, 6]]);
        let ex = block_factorization_exhaustive(&t, 3).unwrap().unwrap();
        assert_eq!(ex.blocks(), sys.blocks());
    }

    #[test]
    fn rami_conditions() {
        let ok = BranchDataJE {
            deg_je: 8,
            at_2_torsion: vec![vec![2, 2, 2, 2]],
            ..Default::default()
        };
        assert!(rami_check(&ok, 1, 0).is_empty());

        let odd = BranchDataJE {
            deg_je: 4,
            at_2_torsion: vec![vec![3, 1]],
            ..Default::default()
        };
        assert!(rami_check(&odd, 1, 0).contains(&RamiViolation::OddPartAt2Torsion));

        // e3 = 2 with one IV* fiber and degree 3 breaks condition (6)
        let six = BranchDataJE {
            deg_je: 3,
            at_3_torsion: vec![vec![3], vec![3]],
            n_ivstar: 1,
            ..Default::default()
        };
        let violations = rami_check(&six, 0, 2);
        assert!(violations.contains(&RamiViolation::TwoThreeTorsionConstraint));
    }
}
