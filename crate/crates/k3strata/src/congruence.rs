//! Congruence subgroups of SL(2,Z): membership by defining congruences,
//! indices through the finite groups SL(2,Z/n), torsion inference for the
//! Mordell-Weil group, and the -id test.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CongruenceError {
    #[error("matrix has determinant != 1")]
    NotUnimodular,
    #[error("level {0} exceeds the configured bound {1}")]
    LevelTooLarge(u32, u32),
    #[error("generator group needs a level hint to decide -id membership")]
    NeedsLevel,
}

/// Largest level the finite-group machinery will touch.
pub const LEVEL_BOUND: u32 = 24;

/// An integer 2x2 matrix, unimodular when used as a group element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl IntMatrix2 {
    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        IntMatrix2 { a, b, c, d }
    }

    pub const IDENTITY: IntMatrix2 = IntMatrix2::new(1, 0, 0, 1);
    pub const NEG_IDENTITY: IntMatrix2 = IntMatrix2::new(-1, 0, 0, -1);
    /// Order-4 generator of SL(2,Z).
    pub const S: IntMatrix2 = IntMatrix2::new(0, -1, 1, 0);
    /// Translation generator of SL(2,Z).
    pub const T: IntMatrix2 = IntMatrix2::new(1, 1, 0, 1);

    pub fn det(self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, o: IntMatrix2) -> IntMatrix2 {
        IntMatrix2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> IntMatrix2 {
        IntMatrix2::new(-self.a, -self.b, -self.c, -self.d)
    }

    pub fn reduce(self, n: u32) -> MatMod {
        let n = i64::from(n);
        let r = |x: i64| x.rem_euclid(n) as u32;
        [r(self.a), r(self.b), r(self.c), r(self.d)]
    }

    /// Parses the `a,b;c,d` wire format.
    pub fn parse(s: &str) -> Result<Self, CongruenceError> {
        let nums: Vec<i64> = s
            .split([',', ';'])
            .map(|t| t.trim().parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|_| CongruenceError::NotUnimodular)?;
        if nums.len() != 4 {
            return Err(CongruenceError::NotUnimodular);
        }
        let m = IntMatrix2::new(nums[0], nums[1], nums[2], nums[3]);
        if m.det() != 1 {
            return Err(CongruenceError::NotUnimodular);
        }
        Ok(m)
    }
}

impl fmt::Display for IntMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

/// Matrix mod n as `[a, b, c, d]`.
pub type MatMod = [u32; 4];

fn mul_mod(x: MatMod, y: MatMod, n: u32) -> MatMod {
    let n = u64::from(n);
    let m = |a: u32, b: u32| (u64::from(a) * u64::from(b)) % n;
    [
        ((m(x[0], y[0]) + m(x[1], y[2])) % n) as u32,
        ((m(x[0], y[1]) + m(x[1], y[3])) % n) as u32,
        ((m(x[2], y[0]) + m(x[3], y[2])) % n) as u32,
        ((m(x[2], y[1]) + m(x[3], y[3])) % n) as u32,
    ]
}

/// The full group SL(2,Z/n), generated by S and T mod n by closure.
pub fn sl2_mod(n: u32) -> Result<Vec<MatMod>, CongruenceError> {
    if n == 0 || n > LEVEL_BOUND {
        return Err(CongruenceError::LevelTooLarge(n, LEVEL_BOUND));
    }
    Ok(closure_mod(&[IntMatrix2::S.reduce(n), IntMatrix2::T.reduce(n)], n))
}

/// Closure of a generating set under multiplication mod n.
pub fn closure_mod(gens: &[MatMod], n: u32) -> Vec<MatMod> {
    let id: MatMod = [1 % n, 0, 0, 1 % n];
    let mut seen: HashSet<MatMod> = HashSet::new();
    let mut queue = vec![id];
    seen.insert(id);
    while let Some(x) = queue.pop() {
        for &g in gens {
            let y = mul_mod(x, g, n);
            if seen.insert(y) {
                queue.push(y);
            }
        }
    }
    let mut v: Vec<MatMod> = seen.into_iter().collect();
    v.sort_unstable();
    v
}

/// Order of SL(2,Z/n) by the multiplicative formula, used as an oracle for
/// the closure computation: `n^3 * prod_{p | n} (1 - 1/p^2)`.
pub fn sl2_order_formula(n: u64) -> u64 {
    let mut order = n * n * n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            order = order / (p * p) * (p * p - 1);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        order = order / (m * m) * (m * m - 1);
    }
    order
}

/// The named congruence subgroup families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CongruenceSpec {
    /// `a = d = 1, b = c = 0 (mod n)`.
    Gamma(u32),
    /// `a = d = 1, c = 0 (mod n)`.
    Gamma1(u32),
    /// `c = 0 (mod n)`.
    Gamma0(u32),
    /// `Gamma(m) intersect Gamma1(n)`, `m | n`.
    GammaM { m: u32, n: u32 },
}

impl CongruenceSpec {
    pub fn level(self) -> u32 {
        match self {
            CongruenceSpec::Gamma(n)
            | CongruenceSpec::Gamma1(n)
            | CongruenceSpec::Gamma0(n)
            | CongruenceSpec::GammaM { n, .. } => n,
        }
    }

    fn holds_mod(self, m: MatMod, modulus: u32) -> bool {
        let r = |x: u32, k: u32| {
            let k = gcd_u32(k, modulus);
            if k <= 1 {
                0
            } else {
                x % k
            }
        };
        let one = |x: u32, k: u32| {
            let k = gcd_u32(k, modulus);
            k <= 1 || x % k == 1 % k
        };
        match self {
            CongruenceSpec::Gamma(n) => {
                one(m[0], n) && one(m[3], n) && r(m[1], n) == 0 && r(m[2], n) == 0
            }
            CongruenceSpec::Gamma1(n) => one(m[0], n) && one(m[3], n) && r(m[2], n) == 0,
            CongruenceSpec::Gamma0(n) => r(m[2], n) == 0,
            CongruenceSpec::GammaM { m: mm, n } => {
                CongruenceSpec::Gamma(mm).holds_mod(m, modulus)
                    && CongruenceSpec::Gamma1(n).holds_mod(m, modulus)
            }
        }
    }
}

impl fmt::Display for CongruenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CongruenceSpec::Gamma(n) => write!(f, "Gamma({n})"),
            CongruenceSpec::Gamma1(n) => write!(f, "Gamma1({n})"),
            CongruenceSpec::Gamma0(n) => write!(f, "Gamma0({n})"),
            CongruenceSpec::GammaM { m, n } => write!(f, "Gamma_{m}({n})"),
        }
    }
}

/// Evaluates the defining congruences of `g` on `mat`.
pub fn in_congruence(mat: IntMatrix2, g: CongruenceSpec) -> Result<bool, CongruenceError> {
    if mat.det() != 1 {
        return Err(CongruenceError::NotUnimodular);
    }
    let n = g.level().max(1);
    Ok(g.holds_mod(mat.reduce(n), n))
}

/// A subgroup of SL(2,Z) closed under the congruence conditions that define
/// it: either a named spec, the full group, an explicit finite subset of
/// SL(2,Z/level) whose preimage it is, or a plain generator list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModularGroup {
    Full,
    Spec(CongruenceSpec),
    /// Preimage of the listed matrices mod `level`.
    ModSubset { level: u32, elements: Vec<MatMod> },
    /// Subgroup generated by explicit matrices; `level_hint` bounds the
    /// congruence level at which reductions are faithful.
    Generators {
        gens: Vec<IntMatrix2>,
        level_hint: Option<u32>,
    },
}

impl ModularGroup {
    /// Image of the group in SL(2,Z/n).
    pub fn image_mod(&self, n: u32) -> Result<Vec<MatMod>, CongruenceError> {
        let full = sl2_mod(n)?;
        match self {
            ModularGroup::Full => Ok(full),
            ModularGroup::Spec(spec) => {
                Ok(full.into_iter().filter(|&m| spec.holds_mod(m, n)).collect())
            }
            ModularGroup::ModSubset { level, elements } => {
                // the image mod n is the preimage of the reduction mod gcd(n, level)
                let g = gcd_u32(n, *level);
                let reductions: HashSet<MatMod> = elements
                    .iter()
                    .map(|&m| {
                        if g <= 1 {
                            [0, 0, 0, 0]
                        } else {
                            [m[0] % g, m[1] % g, m[2] % g, m[3] % g]
                        }
                    })
                    .collect();
                Ok(full
                    .into_iter()
                    .filter(|&m| {
                        g <= 1
                            || reductions.contains(&[m[0] % g, m[1] % g, m[2] % g, m[3] % g])
                    })
                    .collect())
            }
            ModularGroup::Generators { gens, .. } => {
                let gmods: Vec<MatMod> = gens.iter().map(|g| g.reduce(n)).collect();
                Ok(closure_mod(&gmods, n))
            }
        }
    }

    /// Chooses the level at which subgroup containments are decided.
    pub fn level(&self) -> Option<u32> {
        match self {
            ModularGroup::Full => Some(1),
            ModularGroup::Spec(s) => Some(s.level()),
            ModularGroup::ModSubset { level, .. } => Some(*level),
            ModularGroup::Generators { level_hint, .. } => *level_hint,
        }
    }

    /// Whether every element of the group lies in `Gamma_m(n)`.  For a
    /// generator list this is the generator check; for congruence-defined
    /// groups it is decided on the image mod n.
    pub fn contained_in_gamma_m(&self, m: u32, n: u32) -> Result<bool, CongruenceError> {
        let spec = CongruenceSpec::GammaM { m, n };
        match self {
            ModularGroup::Generators { gens, .. } => {
                for g in gens {
                    if !in_congruence(*g, spec)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => Ok(self.image_mod(n)?.iter().all(|&x| spec.holds_mod(x, n))),
        }
    }

    pub fn contains_minus_id(&self) -> Result<bool, CongruenceError> {
        match self {
            ModularGroup::Full => Ok(true),
            ModularGroup::Spec(s) => in_congruence(IntMatrix2::NEG_IDENTITY, *s),
            ModularGroup::ModSubset { level, elements } => {
                Ok(elements.contains(&IntMatrix2::NEG_IDENTITY.reduce(*level)))
            }
            ModularGroup::Generators { gens, level_hint } => {
                let level = level_hint.ok_or(CongruenceError::NeedsLevel)?;
                let gmods: Vec<MatMod> = gens.iter().map(|g| g.reduce(level)).collect();
                Ok(closure_mod(&gmods, level).contains(&IntMatrix2::NEG_IDENTITY.reduce(level)))
            }
        }
    }
}

fn gcd_u32(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd_u32(b, a % b)
    }
}

/// Index of the subgroup in SL(2,Z), via the quotient SL(2,Z/level).
pub fn index_in_sl2(g: &ModularGroup) -> Result<u64, CongruenceError> {
    let n = g.level().ok_or(CongruenceError::NeedsLevel)?.max(1);
    let full = sl2_mod(n)?;
    let image = g.image_mod(n)?;
    Ok(full.len() as u64 / image.len() as u64)
}

/// Index of the image subgroup in PSL(2,Z).
pub fn index_in_psl2(g: &ModularGroup) -> Result<u64, CongruenceError> {
    let idx = index_in_sl2(g)?;
    if g.contains_minus_id()? {
        Ok(idx)
    } else {
        Ok(idx / 2)
    }
}

/// Largest `(n, m)` with `m | n`, `n <= n_max`, ordered lexicographically by
/// `n` then `m`, such that the group lies in `Gamma_m(n)`.  The torsion part
/// of the Mordell-Weil group of a fibration with this monodromy contains
/// `Z/n x Z/m`, with equality for a generic member.
pub fn mw_torsion(g: &ModularGroup, n_max: u32) -> Result<(u32, u32), CongruenceError> {
    let mut best = (1, 1);
    for n in 1..=n_max.min(LEVEL_BOUND) {
        for m in (1..=n).filter(|m| n % m == 0) {
            if (n, m) > best && g.contained_in_gamma_m(m, n)? {
                best = (n, m);
            }
        }
    }
    Ok(best)
}

/// Canonical generator lists for the groups that need them.
pub mod generators {
    use super::IntMatrix2;

    /// `Gamma_1(2) = Gamma_0(2)`: the translation and an order-4 element
    /// squaring to -id.
    pub fn gamma1_2() -> Vec<IntMatrix2> {
        vec![IntMatrix2::T, IntMatrix2::new(1, -1, 2, -1)]
    }

    /// `Gamma_1(3)`: the translation and an order-3 element.
    pub fn gamma1_3() -> Vec<IntMatrix2> {
        vec![IntMatrix2::T, IntMatrix2::new(1, -1, 3, -2)]
    }

    /// `Gamma_0(4)`: free part on two parabolics, plus -id.
    pub fn gamma0_4() -> Vec<IntMatrix2> {
        vec![
            IntMatrix2::NEG_IDENTITY,
            IntMatrix2::T,
            IntMatrix2::new(1, 0, 4, 1),
        ]
    }

    /// `Gamma(2)`: -id and the two standard parabolics.
    pub fn gamma_2() -> Vec<IntMatrix2> {
        vec![
            IntMatrix2::NEG_IDENTITY,
            IntMatrix2::new(1, 2, 0, 1),
            IntMatrix2::new(1, 0, 2, 1),
        ]
    }

    /// `Gamma_1(4)`: free of rank 2.
    pub fn gamma1_4() -> Vec<IntMatrix2> {
        vec![IntMatrix2::T, IntMatrix2::new(1, 0, 4, 1)]
    }

    /// Full SL(2,Z).
    pub fn sl2z() -> Vec<IntMatrix2> {
        vec![IntMatrix2::S, IntMatrix2::T]
    }
}

/// The two index-6 lifts cut out by conditions mod 4 rather than by a named
/// family: the cyclic one (image mod 4 generated by `[[-1,1],[0,-1]]`) and
/// the Klein one (`b, c` even, `a, d = 1 mod 4`).
pub mod mod4_groups {
    use super::{IntMatrix2, MatMod, ModularGroup};

    pub fn cyclic_mod4() -> ModularGroup {
        let g = IntMatrix2::new(-1, 1, 0, -1);
        let mut elements: Vec<MatMod> = Vec::new();
        let mut x = IntMatrix2::IDENTITY;
        for _ in 0..4 {
            elements.push(x.reduce(4));
            x = x.mul(g);
        }
        elements.sort_unstable();
        ModularGroup::ModSubset { level: 4, elements }
    }

    pub fn klein_mod4() -> ModularGroup {
        let mut elements: Vec<MatMod> = Vec::new();
        for b in [0u32, 2] {
            for c in [0u32, 2] {
                elements.push([1, b, c, 1]);
            }
        }
        elements.sort_unstable();
        ModularGroup::ModSubset { level: 4, elements }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_closure_matches_formula() {
        for n in 1..=LEVEL_BOUND {
            assert_eq!(
                sl2_mod(n).unwrap().len() as u64,
                sl2_order_formula(u64::from(n)),
                "n = {n}"
            );
        }
    }

    #[test]
    fn membership_basics() {
        let t2 = IntMatrix2::new(1, 2, 0, 1);
        assert!(in_congruence(t2, CongruenceSpec::Gamma(2)).unwrap());
        assert!(in_congruence(IntMatrix2::T, CongruenceSpec::Gamma1(2)).unwrap());
        assert!(!in_congruence(IntMatrix2::T, CongruenceSpec::Gamma(2)).unwrap());
        assert!(in_congruence(IntMatrix2::NEG_IDENTITY, CongruenceSpec::Gamma0(4)).unwrap());
        assert!(!in_congruence(IntMatrix2::NEG_IDENTITY, CongruenceSpec::Gamma1(4)).unwrap());
        assert!(in_congruence(IntMatrix2::new(1, 1, 4, 5), CongruenceSpec::Gamma1(4)).unwrap());
        assert!(
            in_congruence(IntMatrix2::new(1, 2, 2, 5), CongruenceSpec::GammaM { m: 2, n: 2 })
                .unwrap()
        );
    }

    #[test]
    fn psl_indices() {
        let cases = [
            (ModularGroup::Full, 1),
            (ModularGroup::Spec(CongruenceSpec::Gamma1(2)), 3),
            (ModularGroup::Spec(CongruenceSpec::Gamma1(3)), 4),
            (ModularGroup::Spec(CongruenceSpec::Gamma(2)), 6),
            (ModularGroup::Spec(CongruenceSpec::Gamma1(4)), 6),
            (ModularGroup::Spec(CongruenceSpec::Gamma0(4)), 6),
            (mod4_groups::cyclic_mod4(), 6),
            (mod4_groups::klein_mod4(), 6),
        ];
        for (g, want) in cases {
            assert_eq!(index_in_psl2(&g).unwrap(), want, "{g:?}");
        }
    }

    #[test]
    fn gamma0_equals_gamma1_at_levels_2_and_3() {
        // the images in PSL coincide: Gamma0 = +/- Gamma1 at levels 2 and 3
        for n in [2, 3] {
            let a = ModularGroup::Spec(CongruenceSpec::Gamma0(n));
            let b = ModularGroup::Spec(CongruenceSpec::Gamma1(n));
            assert_eq!(index_in_psl2(&a).unwrap(), index_in_psl2(&b).unwrap());
            let neg = IntMatrix2::NEG_IDENTITY.reduce(n);
            let mut plus_minus: Vec<MatMod> = b
                .image_mod(n)
                .unwrap()
                .into_iter()
                .flat_map(|m| [m, mul_mod(m, neg, n)])
                .collect();
            plus_minus.sort_unstable();
            plus_minus.dedup();
            assert_eq!(a.image_mod(n).unwrap(), plus_minus);
        }
    }

    #[test]
    fn generator_lists_have_the_right_closures() {
        let named: Vec<(Vec<IntMatrix2>, ModularGroup)> = vec![
            (generators::sl2z(), ModularGroup::Full),
            (
                generators::gamma1_2(),
                ModularGroup::Spec(CongruenceSpec::Gamma1(2)),
            ),
            (
                generators::gamma1_3(),
                ModularGroup::Spec(CongruenceSpec::Gamma1(3)),
            ),
            (
                generators::gamma0_4(),
                ModularGroup::Spec(CongruenceSpec::Gamma0(4)),
            ),
            (
                generators::gamma_2(),
                ModularGroup::Spec(CongruenceSpec::Gamma(2)),
            ),
            (
                generators::gamma1_4(),
                ModularGroup::Spec(CongruenceSpec::Gamma1(4)),
            ),
        ];
        for (gens, group) in named {
            for g in &gens {
                assert_eq!(g.det(), 1);
            }
            for n in 1..=LEVEL_BOUND {
                let by_gens = ModularGroup::Generators {
                    gens: gens.clone(),
                    level_hint: group.level(),
                }
                .image_mod(n)
                .unwrap();
                let by_spec = group.image_mod(n).unwrap();
                assert_eq!(by_gens, by_spec, "{group:?} mod {n}");
            }
        }
    }

    #[test]
    fn minus_id_membership() {
        assert!(ModularGroup::Spec(CongruenceSpec::Gamma0(4))
            .contains_minus_id()
            .unwrap());
        assert!(!ModularGroup::Spec(CongruenceSpec::Gamma1(4))
            .contains_minus_id()
            .unwrap());
        assert!(ModularGroup::Spec(CongruenceSpec::Gamma(2))
            .contains_minus_id()
            .unwrap());
        assert!(!mod4_groups::cyclic_mod4().contains_minus_id().unwrap());
        assert!(!mod4_groups::klein_mod4().contains_minus_id().unwrap());
        let gens_no_hint = ModularGroup::Generators {
            gens: generators::gamma_2(),
            level_hint: None,
        };
        assert_eq!(
            gens_no_hint.contains_minus_id(),
            Err(CongruenceError::NeedsLevel)
        );
    }

    #[test]
    fn mw_torsion_examples() {
        let cases: Vec<(ModularGroup, (u32, u32))> = vec![
            (ModularGroup::Full, (1, 1)),
            (ModularGroup::Spec(CongruenceSpec::Gamma1(2)), (2, 1)),
            (ModularGroup::Spec(CongruenceSpec::Gamma1(3)), (3, 1)),
            (ModularGroup::Spec(CongruenceSpec::Gamma0(4)), (2, 1)),
            (ModularGroup::Spec(CongruenceSpec::Gamma(2)), (2, 2)),
            (mod4_groups::cyclic_mod4(), (2, 1)),
            (mod4_groups::klein_mod4(), (2, 2)),
            (ModularGroup::Spec(CongruenceSpec::Gamma1(4)), (4, 1)),
        ];
        for (g, want) in cases {
            assert_eq!(mw_torsion(&g, 12).unwrap(), want, "{g:?}");
        }
        // generator-list route agrees for Gamma1(4)
        let g = ModularGroup::Generators {
            gens: generators::gamma1_4(),
            level_hint: Some(4),
        };
        assert_eq!(mw_torsion(&g, 12).unwrap(), (4, 1));
    }

    #[test]
    fn every_gamma0_4_generator_sits_in_gamma1_2() {
        for g in generators::gamma0_4() {
            assert!(in_congruence(g, CongruenceSpec::Gamma1(2)).unwrap());
        }
    }
}
