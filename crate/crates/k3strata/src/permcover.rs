//! Permutation-triple models of finite-index subgroups of the modular group,
//! equivalently connected covers of the sphere branched over three points
//! with local multiplicities in {1,3} over the first and {1,2} over the
//! second point.
//!
//! A triple `(mu0, mu1, mu_inf)` of permutations of `{1..d}` satisfies
//! `mu0 * mu1 * mu_inf = id` (right action), the group generated by `mu0`
//! and `mu1` is transitive, `mu0` has cycle lengths in {1,3} and `mu1` in
//! {1,2}.  Conjugacy classes of such triples in the symmetric group
//! correspond to conjugacy classes of index-`d` subgroups.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::Perm;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TripleError {
    #[error("product mu0 * mu1 * mu_inf is not the identity")]
    ProductNotIdentity,
    #[error("the generated group is not transitive")]
    NotTransitive,
    #[error("mu0 has a cycle of length {0}, expected 1 or 3")]
    BadOrder3Cycle(usize),
    #[error("mu1 has a cycle of length {0}, expected 1 or 2")]
    BadOrder2Cycle(usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("negative genus: inconsistent data")]
    NegativeGenus,
    #[error("constraints violate degree congruences (e2 = d mod 2, e3 = d mod 3)")]
    BadConstraints,
}

/// A triple of permutations with identity product; `mu_inf` is always
/// `(mu0 * mu1)^-1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PermTriple {
    mu0: Perm,
    mu1: Perm,
    mu_inf: Perm,
}

impl fmt::Debug for PermTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl fmt::Display for PermTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, {}, {}", self.mu0, self.mu1, self.mu_inf)
    }
}

/// Cycle-type partitions over the three branch points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Passport {
    pub p0: Vec<usize>,
    pub p1: Vec<usize>,
    pub p_inf: Vec<usize>,
}

impl PermTriple {
    /// Builds the triple from the first two permutations; `mu_inf` is forced
    /// by the product relation.
    pub fn from_pair(mu0: Perm, mu1: Perm) -> Result<Self, TripleError> {
        if mu0.degree() != mu1.degree() {
            return Err(TripleError::DegreeMismatch(mu0.degree(), mu1.degree()));
        }
        let mu_inf = mu0.then(&mu1).inverse();
        Ok(PermTriple { mu0, mu1, mu_inf })
    }

    /// Builds from all three permutations, checking the product relation.
    pub fn new(mu0: Perm, mu1: Perm, mu_inf: Perm) -> Result<Self, TripleError> {
        if mu0.degree() != mu1.degree() || mu1.degree() != mu_inf.degree() {
            return Err(TripleError::DegreeMismatch(mu0.degree(), mu_inf.degree()));
        }
        if !mu0.then(&mu1).then(&mu_inf).is_identity() {
            return Err(TripleError::ProductNotIdentity);
        }
        Ok(PermTriple { mu0, mu1, mu_inf })
    }

    pub fn degree(&self) -> usize {
        self.mu0.degree()
    }

    pub fn mu0(&self) -> &Perm {
        &self.mu0
    }

    pub fn mu1(&self) -> &Perm {
        &self.mu1
    }

    pub fn mu_inf(&self) -> &Perm {
        &self.mu_inf
    }

    /// Full validity check; `Ok(())` means the triple models a subgroup.
    pub fn validate(&self) -> Result<(), TripleError> {
        for len in self.mu0.cycle_type() {
            if len != 1 && len != 3 {
                return Err(TripleError::BadOrder3Cycle(len));
            }
        }
        for len in self.mu1.cycle_type() {
            if len != 1 && len != 2 {
                return Err(TripleError::BadOrder2Cycle(len));
            }
        }
        if !self.mu0.then(&self.mu1).then(&self.mu_inf).is_identity() {
            return Err(TripleError::ProductNotIdentity);
        }
        if !Perm::transitive(&[&self.mu0, &self.mu1]) {
            return Err(TripleError::NotTransitive);
        }
        Ok(())
    }

    pub fn passport(&self) -> Passport {
        Passport {
            p0: self.mu0.cycle_type(),
            p1: self.mu1.cycle_type(),
            p_inf: self.mu_inf.cycle_type(),
        }
    }

    /// `(e2, e3)`: fixed points of `mu1` and of `mu0`, counting the order-2
    /// and order-3 torsion classes of the corresponding subgroup.
    pub fn torsion_counts(&self) -> (usize, usize) {
        (self.mu1.fixed_points(), self.mu0.fixed_points())
    }

    /// Cycle type of `mu_inf`; its parts are the cusp widths.
    pub fn cusp_partition(&self) -> Vec<usize> {
        self.mu_inf.cycle_type()
    }

    /// Genus of the covering curve from the ramification count:
    /// `2 - 2g = 2d - sum over branch points of (d - #parts)`.
    pub fn genus(&self) -> Result<usize, TripleError> {
        let d = self.degree() as i64;
        let parts = |p: &Perm| p.cycles().len() as i64;
        let chi = 2 * d - 3 * d + parts(&self.mu0) + parts(&self.mu1) + parts(&self.mu_inf);
        if chi % 2 != 0 || chi > 2 {
            return Err(TripleError::NegativeGenus);
        }
        Ok(((2 - chi) / 2) as usize)
    }

    /// Lexicographically minimal simultaneous relabeling over the
    /// breadth-first labelings of the Schreier graph rooted at each point,
    /// exploring images in generator order `(mu0, mu1)`.  Conjugate triples
    /// have identical canonical forms.
    pub fn canonical_form(&self) -> PermTriple {
        let d = self.degree();
        let mut best: Option<(Vec<u16>, Vec<u16>)> = None;
        let mut relabel = vec![u16::MAX; d];
        let mut order = Vec::with_capacity(d);
        for root in 0..d {
            relabel.iter_mut().for_each(|x| *x = u16::MAX);
            order.clear();
            relabel[root] = 0;
            order.push(root);
            let mut next = 1u16;
            let mut head = 0usize;
            while head < order.len() {
                let p = order[head];
                head += 1;
                for q in [self.mu0.apply0(p), self.mu1.apply0(p)] {
                    if relabel[q] == u16::MAX {
                        relabel[q] = next;
                        next += 1;
                        order.push(q);
                    }
                }
            }
            if order.len() < d {
                // not transitive; canonical form is only meaningful for
                // valid triples, fall back to the input labeling
                return self.clone();
            }
            let mut m0 = vec![0u16; d];
            let mut m1 = vec![0u16; d];
            for p in 0..d {
                m0[relabel[p] as usize] = relabel[self.mu0.apply0(p)];
                m1[relabel[p] as usize] = relabel[self.mu1.apply0(p)];
            }
            let cand = (m0, m1);
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
        let (m0, m1) = best.expect("degree > 0");
        PermTriple::from_pair(Perm::from_images(m0), Perm::from_images(m1))
            .expect("relabeling preserves degrees")
    }

    /// Conjugacy test by direct propagation: a conjugator of transitive
    /// triples is determined by the image of one point, so try each image
    /// and propagate along the Schreier graph.
    fn conjugate_by_propagation(&self, other: &PermTriple) -> bool {
        let d = self.degree();
        if d != other.degree() {
            return false;
        }
        'candidates: for target in 0..d {
            let mut sigma = vec![u16::MAX; d];
            let mut hit = vec![false; d];
            sigma[0] = target as u16;
            hit[target] = true;
            let mut stack = vec![0usize];
            while let Some(p) = stack.pop() {
                let sp = sigma[p] as usize;
                for (mine, theirs) in [(&self.mu0, &other.mu0), (&self.mu1, &other.mu1)] {
                    let q = mine.apply0(p);
                    let sq = theirs.apply0(sp);
                    if sigma[q] == u16::MAX {
                        if hit[sq] {
                            continue 'candidates;
                        }
                        sigma[q] = sq as u16;
                        hit[sq] = true;
                        stack.push(q);
                    } else if sigma[q] as usize != sq {
                        continue 'candidates;
                    }
                }
            }
            if sigma.iter().all(|&x| x != u16::MAX) {
                return true;
            }
        }
        false
    }

    /// True if the triples are simultaneously conjugate in the symmetric
    /// group.  Decided by canonical forms and cross-checked against the
    /// propagation test.
    pub fn is_conjugate(&self, other: &PermTriple) -> Result<bool, TripleError> {
        if self.degree() != other.degree() {
            return Err(TripleError::DegreeMismatch(self.degree(), other.degree()));
        }
        let by_canon = self.canonical_form() == other.canonical_form();
        let by_prop = self.conjugate_by_propagation(other);
        assert_eq!(by_canon, by_prop, "conjugacy routes disagree");
        Ok(by_canon)
    }
}

/// Search constraints for the enumeration.  `None` means unconstrained.
#[derive(Clone, Debug, Default)]
pub struct EnumConstraints {
    pub degree: usize,
    pub e2: Option<usize>,
    pub e3: Option<usize>,
    pub genus: Option<usize>,
    pub cusp_count: Option<usize>,
    pub cusp_partition: Option<Vec<usize>>,
    pub torsion_free: bool,
}

impl EnumConstraints {
    pub fn torsion_free_genus0(degree: usize) -> Self {
        EnumConstraints {
            degree,
            e2: Some(0),
            e3: Some(0),
            genus: Some(0),
            torsion_free: true,
            ..Default::default()
        }
    }

    fn normalize(&self) -> Result<EnumConstraints, TripleError> {
        let mut c = self.clone();
        if c.torsion_free {
            if c.e2.unwrap_or(0) != 0 || c.e3.unwrap_or(0) != 0 {
                return Err(TripleError::BadConstraints);
            }
            c.e2 = Some(0);
            c.e3 = Some(0);
        }
        if let Some(e2) = c.e2 {
            if e2 % 2 != c.degree % 2 || e2 > c.degree {
                return Err(TripleError::BadConstraints);
            }
        }
        if let Some(e3) = c.e3 {
            if e3 % 3 != c.degree % 3 || e3 > c.degree {
                return Err(TripleError::BadConstraints);
            }
        }
        if let Some(p) = &mut c.cusp_partition {
            p.sort_unstable_by(|a, b| b.cmp(a));
            if p.iter().sum::<usize>() != c.degree {
                return Err(TripleError::BadConstraints);
            }
            match c.cusp_count {
                Some(n) if n != p.len() => return Err(TripleError::BadConstraints),
                _ => c.cusp_count = Some(p.len()),
            }
        }
        Ok(c)
    }

    /// Number of cusps forced by genus and fixed-point counts, if any.
    fn forced_cusps(&self, e2: usize, e3: usize) -> Option<i64> {
        self.genus.map(|g| {
            let d = self.degree as i64;
            let parts0 = (self.degree - e3) as i64 / 3 + e3 as i64;
            let parts1 = (self.degree - e2) as i64 / 2 + e2 as i64;
            2 + d - 2 * g as i64 - parts0 - parts1
        })
    }
}

const UNSET: u16 = u16::MAX;

/// Backtracking over `mu0` with `mu1` fixed to the canonical involution
/// `(1 2)(3 4)...`.  Fresh points are interchangeable under the centralizer
/// of `mu1`, so whenever a choice would reach into untouched territory only
/// the first untouched block (through its lower point) and the first
/// untouched fixed point are tried.  Partial cusps are tracked through the
/// product `rho = mu0 * mu1`, whose cycles are the cusps.
struct Search {
    d: usize,
    t: usize, // number of mu1 transpositions
    mu1: Vec<u16>,
    mu0: Vec<u16>,
    used: Vec<bool>,
    blocks_touched: usize,
    fixed_touched: usize,
    three_cycles_left: usize,
    fixed0_left: usize,
    rho_succ: Vec<u16>,
    rho_pred: Vec<u16>,
    closed_cycles: Vec<usize>,
    target_cusps: Option<usize>,
    target_partition: Option<Vec<usize>>,
    out: Vec<PermTriple>,
}

impl Search {
    fn new(c: &EnumConstraints, e2: usize, e3: usize) -> Option<Search> {
        let d = c.degree;
        let t = (d - e2) / 2;
        let mut mu1 = vec![0u16; d];
        for i in 0..t {
            mu1[2 * i] = (2 * i + 1) as u16;
            mu1[2 * i + 1] = (2 * i) as u16;
        }
        for (p, slot) in mu1.iter_mut().enumerate().skip(2 * t) {
            *slot = p as u16;
        }
        let target_cusps = match c.forced_cusps(e2, e3) {
            Some(n) if n < 1 => return None,
            Some(n) => match c.cusp_count {
                Some(m) if m as i64 != n => return None,
                _ => Some(n as usize),
            },
            None => c.cusp_count,
        };
        Some(Search {
            d,
            t,
            mu1,
            mu0: vec![UNSET; d],
            used: vec![false; d],
            blocks_touched: 0,
            fixed_touched: 0,
            three_cycles_left: (d - e3) / 3,
            fixed0_left: e3,
            rho_succ: vec![UNSET; d],
            rho_pred: vec![UNSET; d],
            closed_cycles: Vec::new(),
            target_cusps,
            target_partition: c.cusp_partition.clone(),
            out: Vec::new(),
        })
    }

    fn touch(&mut self, p: usize) {
        if p < 2 * self.t {
            debug_assert_eq!(p, 2 * self.blocks_touched);
            self.blocks_touched += 1;
        } else {
            debug_assert_eq!(p, 2 * self.t + self.fixed_touched);
            self.fixed_touched += 1;
        }
    }

    fn untouch(&mut self, p: usize) {
        if p < 2 * self.t {
            self.blocks_touched -= 1;
        } else {
            self.fixed_touched -= 1;
        }
    }

    /// Candidate values for the next element of the current mu0 cycle:
    /// introduced unused points plus at most one fresh point of each kind.
    fn candidates(&self, buf: &mut Vec<(usize, bool)>) {
        buf.clear();
        for p in (0..2 * self.blocks_touched).chain(2 * self.t..2 * self.t + self.fixed_touched) {
            if !self.used[p] {
                buf.push((p, false));
            }
        }
        if self.blocks_touched < self.t {
            buf.push((2 * self.blocks_touched, true));
        }
        if 2 * self.t + self.fixed_touched < self.d {
            buf.push((2 * self.t + self.fixed_touched, true));
        }
    }

    /// Adds the rho-edge `p -> mu1(q)` implied by assigning `mu0(p) = q`.
    /// Returns `Some(len)` if this closed a rho-cycle of that length, and
    /// `None` otherwise.
    fn add_rho_edge(&mut self, p: usize, q: usize) -> Option<usize> {
        let r = self.mu1[q] as usize;
        debug_assert!(self.rho_succ[p] == UNSET && self.rho_pred[r] == UNSET);
        self.rho_succ[p] = r as u16;
        self.rho_pred[r] = p as u16;
        // the edge closes a cycle exactly when the chain from r ends at p
        let mut x = r;
        let mut len = 1;
        loop {
            if x == p {
                self.closed_cycles.push(len);
                return Some(len);
            }
            match self.rho_succ[x] {
                UNSET => return None,
                next => {
                    x = next as usize;
                    len += 1;
                }
            }
        }
    }

    fn remove_rho_edge(&mut self, p: usize, q: usize, closed: Option<usize>) {
        let r = self.mu1[q] as usize;
        self.rho_succ[p] = UNSET;
        self.rho_pred[r] = UNSET;
        if closed.is_some() {
            self.closed_cycles.pop();
        }
    }

    /// Cusp-count and cusp-partition feasibility.
    fn cusps_feasible(&self, just_closed: Option<usize>) -> bool {
        if let (Some(partition), Some(len)) = (&self.target_partition, just_closed) {
            let avail = partition.iter().filter(|&&x| x == len).count();
            let have = self.closed_cycles.iter().filter(|&&x| x == len).count();
            if have > avail {
                return false;
            }
        }
        if let Some(target) = self.target_cusps {
            let closed = self.closed_cycles.len();
            if closed > target {
                return false;
            }
            let mut open = 0;
            let mut isolated = 0;
            for p in 0..self.d {
                if self.rho_pred[p] == UNSET {
                    if self.rho_succ[p] == UNSET {
                        isolated += 1;
                    } else {
                        open += 1;
                    }
                }
            }
            // every open chain and every untouched point must still close
            // into at least one more cycle, and can close into at most one
            if closed == target && (open > 0 || isolated > 0) {
                return false;
            }
            if closed + open + isolated < target {
                return false;
            }
        }
        true
    }

    fn run(&mut self) {
        self.place_next_cycle();
    }

    fn place_next_cycle(&mut self) {
        let start = (0..2 * self.blocks_touched)
            .chain(2 * self.t..2 * self.t + self.fixed_touched)
            .find(|&p| !self.used[p]);
        match start {
            Some(s) => self.branch_cycle_at(s, false),
            None => {
                if self.mu0.iter().all(|&x| x != UNSET) {
                    self.emit();
                    return;
                }
                if self.blocks_touched < self.t {
                    self.branch_cycle_at(2 * self.blocks_touched, true);
                }
                if 2 * self.t + self.fixed_touched < self.d {
                    self.branch_cycle_at(2 * self.t + self.fixed_touched, true);
                }
            }
        }
    }

    fn branch_cycle_at(&mut self, s: usize, fresh: bool) {
        if fresh {
            self.touch(s);
        }
        if self.fixed0_left > 0 {
            self.fixed0_left -= 1;
            self.used[s] = true;
            self.mu0[s] = s as u16;
            let closed = self.add_rho_edge(s, s);
            if self.cusps_feasible(closed) {
                self.place_next_cycle();
            }
            self.remove_rho_edge(s, s, closed);
            self.mu0[s] = UNSET;
            self.used[s] = false;
            self.fixed0_left += 1;
        }
        if self.three_cycles_left > 0 {
            self.three_cycles_left -= 1;
            self.used[s] = true;
            let mut cands_a = Vec::new();
            let mut cands_b = Vec::new();
            self.candidates(&mut cands_a);
            for &(a, fresh_a) in &cands_a {
                if a == s {
                    continue;
                }
                if fresh_a {
                    self.touch(a);
                }
                self.used[a] = true;
                self.mu0[s] = a as u16;
                let closed_a = self.add_rho_edge(s, a);
                if self.cusps_feasible(closed_a) {
                    self.candidates(&mut cands_b);
                    for &(b, fresh_b) in &cands_b {
                        if b == s || b == a {
                            continue;
                        }
                        if fresh_b {
                            self.touch(b);
                        }
                        self.used[b] = true;
                        self.mu0[a] = b as u16;
                        self.mu0[b] = s as u16;
                        let closed_b = self.add_rho_edge(a, b);
                        if self.cusps_feasible(closed_b) {
                            let closed_c = self.add_rho_edge(b, s);
                            if self.cusps_feasible(closed_c) {
                                self.place_next_cycle();
                            }
                            self.remove_rho_edge(b, s, closed_c);
                        }
                        self.remove_rho_edge(a, b, closed_b);
                        self.mu0[a] = UNSET;
                        self.mu0[b] = UNSET;
                        self.used[b] = false;
                        if fresh_b {
                            self.untouch(b);
                        }
                    }
                }
                self.remove_rho_edge(s, a, closed_a);
                self.mu0[s] = UNSET;
                self.used[a] = false;
                if fresh_a {
                    self.untouch(a);
                }
            }
            self.used[s] = false;
            self.three_cycles_left += 1;
        }
        if fresh {
            self.untouch(s);
        }
    }

    fn emit(&mut self) {
        let mu0 = Perm::from_images(self.mu0.clone());
        let mu1 = Perm::from_images(self.mu1.clone());
        if !Perm::transitive(&[&mu0, &mu1]) {
            return;
        }
        let t = PermTriple::from_pair(mu0, mu1).expect("degrees match");
        if let Some(p) = &self.target_partition {
            if &t.cusp_partition() != p {
                return;
            }
        }
        if let Some(n) = self.target_cusps {
            if t.cusp_partition().len() != n {
                return;
            }
        }
        self.out.push(t);
    }
}

/// Complete, duplicate-free list of conjugacy classes of valid triples
/// meeting the constraints, as canonical forms in lexicographic order.
pub fn enumerate_triples(c: &EnumConstraints) -> Result<Vec<PermTriple>, TripleError> {
    let c = c.normalize()?;
    let d = c.degree;
    if d == 0 {
        return Ok(Vec::new());
    }
    let e2_options: Vec<usize> = match c.e2 {
        Some(e) => vec![e],
        None => (0..=d).filter(|e| e % 2 == d % 2).collect(),
    };
    let e3_options: Vec<usize> = match c.e3 {
        Some(e) => vec![e],
        None => (0..=d).filter(|e| e % 3 == d % 3).collect(),
    };
    let mut classes: BTreeSet<PermTriple> = BTreeSet::new();
    for &e2 in &e2_options {
        for &e3 in &e3_options {
            let Some(mut search) = Search::new(&c, e2, e3) else {
                continue;
            };
            search.run();
            for t in std::mem::take(&mut search.out) {
                classes.insert(t.canonical_form());
            }
        }
    }
    let out: Vec<PermTriple> = classes.into_iter().collect();
    for t in &out {
        debug_assert!(t.validate().is_ok());
        if let Some(g) = c.genus {
            debug_assert_eq!(t.genus().ok(), Some(g));
        }
    }
    Ok(out)
}

/// Alternative enumeration by standardized coset tables: both permutations
/// are built together in breadth-first label order, with images constrained
/// by `mu1^2 = 1` and `mu0` cycle lengths in {1,3}.  Each conjugacy class is
/// found in at least one labeling; duplicates are removed by canonical form.
/// Cross-validates `enumerate_triples` at small degree.
pub fn enumerate_by_tables(c: &EnumConstraints) -> Result<Vec<PermTriple>, TripleError> {
    let c = c.normalize()?;
    let d = c.degree;
    if d == 0 {
        return Ok(Vec::new());
    }

    struct Tables<'a> {
        d: usize,
        mu0: Vec<u16>,
        mu0_inv: Vec<u16>,
        mu1: Vec<u16>,
        defined: usize,
        c: &'a EnumConstraints,
        out: BTreeSet<PermTriple>,
    }

    impl Tables<'_> {
        fn count_fixed(&self, table: &[u16]) -> usize {
            table
                .iter()
                .enumerate()
                .filter(|&(i, &v)| v != UNSET && v as usize == i)
                .count()
        }

        fn first_slot(&self) -> Option<(usize, bool)> {
            for p in 0..self.defined {
                if self.mu0[p] == UNSET {
                    return Some((p, true));
                }
                if self.mu1[p] == UNSET {
                    return Some((p, false));
                }
            }
            None
        }

        /// Checks that assigning mu0(p) = q keeps every mu0 path inside a
        /// 1- or 3-cycle.
        fn mu0_edge_ok(&self, p: usize, q: usize) -> bool {
            if self.mu0_inv[q] != UNSET {
                return false;
            }
            if q == p {
                return true;
            }
            // forward walk from q; ending at p means the edge closes a cycle
            let mut fwd = 1;
            let mut y = q;
            while self.mu0[y] != UNSET {
                y = self.mu0[y] as usize;
                fwd += 1;
                if fwd > 3 {
                    return false;
                }
            }
            if y == p {
                return fwd == 3;
            }
            // open chain: the combined path through the new edge must still
            // fit inside a 3-cycle
            let mut back = 1;
            let mut x = p;
            while self.mu0_inv[x] != UNSET {
                x = self.mu0_inv[x] as usize;
                back += 1;
                if back > 3 {
                    return false;
                }
            }
            back + fwd <= 3
        }

        fn extend(&mut self) {
            let Some((p, is_mu0)) = self.first_slot() else {
                if self.defined == self.d {
                    self.finish();
                }
                return;
            };
            let limit = (self.defined + 1).min(self.d);
            for q in 0..limit {
                let grew = q == self.defined;
                if is_mu0 {
                    // fixed-point budgets prune torsion-constrained searches
                    if q == p
                        && self
                            .c
                            .e3
                            .is_some_and(|e3| self.count_fixed(&self.mu0) >= e3)
                    {
                        continue;
                    }
                    if !self.mu0_edge_ok(p, q) {
                        continue;
                    }
                    self.mu0[p] = q as u16;
                    self.mu0_inv[q] = p as u16;
                    if grew {
                        self.defined += 1;
                    }
                    self.extend();
                    if grew {
                        self.defined -= 1;
                    }
                    self.mu0[p] = UNSET;
                    self.mu0_inv[q] = UNSET;
                } else {
                    if q != p && self.mu1[q] != UNSET {
                        continue;
                    }
                    if q == p
                        && self
                            .c
                            .e2
                            .is_some_and(|e2| self.count_fixed(&self.mu1) >= e2)
                    {
                        continue;
                    }
                    self.mu1[p] = q as u16;
                    let other = q != p;
                    if other {
                        self.mu1[q] = p as u16;
                    }
                    if grew {
                        self.defined += 1;
                    }
                    self.extend();
                    if grew {
                        self.defined -= 1;
                    }
                    self.mu1[p] = UNSET;
                    if other {
                        self.mu1[q] = UNSET;
                    }
                }
            }
        }

        fn finish(&mut self) {
            let mu0 = Perm::from_images(self.mu0.clone());
            let mu1 = Perm::from_images(self.mu1.clone());
            if mu0.cycle_type().iter().any(|&l| l != 1 && l != 3) {
                return;
            }
            if !Perm::transitive(&[&mu0, &mu1]) {
                return;
            }
            let t = PermTriple::from_pair(mu0, mu1).expect("same degree");
            let (e2, e3) = t.torsion_counts();
            if self.c.e2.is_some_and(|want| want != e2)
                || self.c.e3.is_some_and(|want| want != e3)
            {
                return;
            }
            if self.c.genus.is_some_and(|g| t.genus().ok() != Some(g)) {
                return;
            }
            if let Some(p) = &self.c.cusp_partition {
                if &t.cusp_partition() != p {
                    return;
                }
            }
            if self
                .c
                .cusp_count
                .is_some_and(|n| t.cusp_partition().len() != n)
            {
                return;
            }
            self.out.insert(t.canonical_form());
        }
    }

    let mut ts = Tables {
        d,
        mu0: vec![UNSET; d],
        mu0_inv: vec![UNSET; d],
        mu1: vec![UNSET; d],
        defined: 1,
        c: &c,
        out: BTreeSet::new(),
    };
    ts.extend();
    Ok(ts.out.into_iter().collect())
}
