//! Kodaira fiber types of elliptic surfaces: the numerical dictionary between
//! vanishing orders of a Weierstrass datum, fiber symbols, Euler numbers, ADE
//! summands and local monodromy, plus the dimension and rank formulas for
//! whole fiber configurations.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::roots::RootSymbol;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FiberError {
    #[error("non-minimal Weierstrass datum: min(3*nu2, 2*nu3) >= 12")]
    NonMinimal,
    #[error("inconsistent orders (nu2={0}, nu3={1}, nuDelta={2})")]
    InconsistentOrders(u32, u32, u32),
    #[error("not a fiber monodromy")]
    NotFiberMonodromy,
    #[error("matrix has determinant != 1")]
    NotUnimodular,
    #[error("dimension formula needs an I_nu or I*_nu fiber with nu > 0")]
    Isotrivial,
    #[error("invalid fiber symbol: {0}")]
    Symbol(String),
}

/// A Kodaira fiber symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FiberType {
    /// `I_b`, `b >= 0`; `I_0` is the smooth fiber.
    I(u32),
    /// `I*_b`, `b >= 0`.
    IStar(u32),
    II,
    III,
    IV,
    IVStar,
    IIIStar,
    IIStar,
}

use FiberType::*;

impl FiberType {
    pub fn euler(self) -> u32 {
        match self {
            I(b) => b,
            IStar(b) => 6 + b,
            II => 2,
            III => 3,
            IV => 4,
            IVStar => 8,
            IIIStar => 9,
            IIStar => 10,
        }
    }

    /// The ADE summand contributed to the fiber root lattice, if any.
    pub fn ade(self) -> Option<RootSymbol> {
        match self {
            I(0) | I(1) | II => None,
            I(b) => Some(RootSymbol::A(b - 1)),
            IStar(b) => Some(RootSymbol::D(4 + b)),
            III => Some(RootSymbol::A(1)),
            IV => Some(RootSymbol::A(2)),
            IVStar => Some(RootSymbol::E(6)),
            IIIStar => Some(RootSymbol::E(7)),
            IIStar => Some(RootSymbol::E(8)),
        }
    }

    /// Representative of the local monodromy conjugacy class in SL(2,Z).
    pub fn monodromy(self) -> [[i64; 2]; 2] {
        match self {
            I(b) => [[1, i64::from(b)], [0, 1]],
            IStar(b) => [[-1, -i64::from(b)], [0, -1]],
            II => [[1, 1], [-1, 0]],
            III => [[0, 1], [-1, 0]],
            IV => [[0, 1], [-1, -1]],
            IVStar => [[-1, -1], [1, 0]],
            IIIStar => [[0, -1], [1, 0]],
            IIStar => [[0, -1], [1, 1]],
        }
    }

    /// Multiplicative fibers are the `I_b` with `b >= 1`.
    pub fn is_multiplicative(self) -> bool {
        matches!(self, I(b) if b >= 1)
    }

    /// Additive singular fibers: everything singular that is not `I_b`.
    pub fn is_additive(self) -> bool {
        !matches!(self, I(_))
    }

    /// The star fibers together with `IV*`, `III*`, `II*` enter the
    /// configuration dimension count.
    pub fn is_star_or_e_type(self) -> bool {
        matches!(self, IStar(_) | IVStar | IIIStar | IIStar)
    }

    pub fn parse(s: &str) -> Result<Self, FiberError> {
        let s = s.trim();
        let t = match s {
            "II" => II,
            "III" => III,
            "IV" => IV,
            "IV*" => IVStar,
            "III*" => IIIStar,
            "II*" => IIStar,
            _ => {
                let (body, star) = match s.strip_suffix('*') {
                    Some(b) => (b, true),
                    None => (s, false),
                };
                let num = body
                    .strip_prefix('I')
                    .ok_or_else(|| FiberError::Symbol(s.into()))?;
                let b: u32 = num.parse().map_err(|_| FiberError::Symbol(s.into()))?;
                if star {
                    IStar(b)
                } else {
                    I(b)
                }
            }
        };
        Ok(t)
    }
}

impl fmt::Display for FiberType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            I(b) => write!(f, "I{b}"),
            IStar(b) => write!(f, "I{b}*"),
            II => write!(f, "II"),
            III => write!(f, "III"),
            IV => write!(f, "IV"),
            IVStar => write!(f, "IV*"),
            IIIStar => write!(f, "III*"),
            IIStar => write!(f, "II*"),
        }
    }
}

/// Orders of vanishing of `g2`, `g3` and the discriminant at one point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VanishingOrders {
    pub nu2: u32,
    pub nu3: u32,
    pub nu_delta: u32,
}

impl VanishingOrders {
    pub fn new(nu2: u32, nu3: u32, nu_delta: u32) -> Self {
        VanishingOrders { nu2, nu3, nu_delta }
    }

    pub fn is_minimal(self) -> bool {
        (3 * self.nu2).min(2 * self.nu3) < 12
    }
}

/// The Tate dictionary from vanishing orders to the fiber type.  The three
/// smooth columns (j = 0, 1, generic) all yield `I_0`, and likewise for
/// `I*_0`; the j-value refinement is not kept.
pub fn classify_fiber(v: VanishingOrders) -> Result<FiberType, FiberError> {
    if !v.is_minimal() {
        return Err(FiberError::NonMinimal);
    }
    let VanishingOrders { nu2, nu3, nu_delta } = v;
    let t = match (nu2, nu3, nu_delta) {
        (a, 0, 0) if a > 0 => I(0),
        (0, b, 0) if b > 0 => I(0),
        (0, 0, 0) => I(0),
        (0, 0, k) if k >= 1 => I(k),
        (a, 3, 6) if a > 2 => IStar(0),
        (2, b, 6) if b > 3 => IStar(0),
        (2, 3, 6) => IStar(0),
        (2, 3, k) if k > 6 => IStar(k - 6),
        (a, 1, 2) if a > 0 => II,
        (1, b, 3) if b > 1 => III,
        (a, 2, 4) if a > 1 => IV,
        (a, 4, 8) if a > 2 => IVStar,
        (3, b, 9) if b > 4 => IIIStar,
        (a, 5, 10) if a > 3 => IIStar,
        _ => return Err(FiberError::InconsistentOrders(nu2, nu3, nu_delta)),
    };
    Ok(t)
}

/// Euler number, ADE summand and monodromy representative of a fiber type.
pub fn fiber_invariants(t: FiberType) -> (u32, Option<RootSymbol>, [[i64; 2]; 2]) {
    (t.euler(), t.ade(), t.monodromy())
}

fn det2(m: [[i64; 2]; 2]) -> i64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

fn trace2(m: [[i64; 2]; 2]) -> i64 {
    m[0][0] + m[1][1]
}

/// For a trace-2 matrix `m != id`, the conjugation invariant `b` with
/// `m ~ [[1,b],[0,1]]` in SL(2,Z): write `m - id = v u^T` with `v` primitive;
/// then `b` is the coefficient in `(m - id) w = b v` for any `w` completing
/// `v` to a determinant-1 basis.
fn unipotent_translation(m: [[i64; 2]; 2]) -> i64 {
    let n = [[m[0][0] - 1, m[0][1]], [m[1][0], m[1][1] - 1]];
    // v spans the image of the rank-1 matrix n
    let (mut v0, mut v1) = if n[0][0] != 0 || n[1][0] != 0 {
        (n[0][0], n[1][0])
    } else {
        (n[0][1], n[1][1])
    };
    let g = gcd(v0.abs(), v1.abs());
    v0 /= g;
    v1 /= g;
    // w with det [v w] = v0*w1 - v1*w0 = 1
    let (_, x, y) = ext_gcd(v0, v1);
    let (w0, w1) = (-y, x);
    debug_assert_eq!(v0 * w1 - v1 * w0, 1);
    let nw = (n[0][0] * w0 + n[0][1] * w1, n[1][0] * w0 + n[1][1] * w1);
    // nw = b * v
    if v0 != 0 {
        nw.0 / v0
    } else {
        nw.1 / v1
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Returns (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// All fiber types whose monodromy class contains `m`.  A `star_hint`
/// widens the lookup to `m` and `-m` and keeps the star (resp. non-star)
/// candidates, for callers that only know the class modulo `-id`.
pub fn fiber_from_monodromy(
    m: [[i64; 2]; 2],
    star_hint: Option<bool>,
) -> Result<Vec<FiberType>, FiberError> {
    if det2(m) != 1 {
        return Err(FiberError::NotUnimodular);
    }
    let single = |m: [[i64; 2]; 2]| -> Result<FiberType, FiberError> {
        match trace2(m) {
            2 => {
                if m == [[1, 0], [0, 1]] {
                    Ok(I(0))
                } else {
                    let b = unipotent_translation(m);
                    if b > 0 {
                        Ok(I(b as u32))
                    } else {
                        Err(FiberError::NotFiberMonodromy)
                    }
                }
            }
            -2 => {
                let neg = [[-m[0][0], -m[0][1]], [-m[1][0], -m[1][1]]];
                if neg == [[1, 0], [0, 1]] {
                    Ok(IStar(0))
                } else {
                    let b = unipotent_translation(neg);
                    if b > 0 {
                        Ok(IStar(b as u32))
                    } else {
                        Err(FiberError::NotFiberMonodromy)
                    }
                }
            }
            // elliptic classes: the sign of the lower-left entry is the
            // conjugation invariant separating a torsion class from its
            // inverse (it is a positive definite form in the conjugator)
            1 => Ok(if m[1][0] > 0 { IIStar } else { II }),
            -1 => Ok(if m[1][0] > 0 { IVStar } else { IV }),
            0 => Ok(if m[1][0] > 0 { IIIStar } else { III }),
            _ => Err(FiberError::NotFiberMonodromy),
        }
    };
    match star_hint {
        None => Ok(vec![single(m)?]),
        Some(want_star) => {
            let neg = [[-m[0][0], -m[0][1]], [-m[1][0], -m[1][1]]];
            let mut out = Vec::new();
            for cand in [single(m), single(neg)].into_iter().flatten() {
                if cand.is_star_or_e_type() == want_star && !out.contains(&cand) {
                    out.push(cand);
                }
            }
            if out.is_empty() {
                Err(FiberError::NotFiberMonodromy)
            } else {
                Ok(out)
            }
        }
    }
}

/// A multiset of singular fibers (`I_0` excluded).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FiberConfiguration {
    counts: Vec<(FiberType, u32)>,
}

impl FiberConfiguration {
    pub fn new(mut counts: Vec<(FiberType, u32)>) -> Self {
        counts.retain(|&(t, n)| t != I(0) && n > 0);
        counts.sort_unstable();
        let mut merged: Vec<(FiberType, u32)> = Vec::new();
        for (t, n) in counts {
            match merged.last_mut() {
                Some((lt, ln)) if *lt == t => *ln += n,
                _ => merged.push((t, n)),
            }
        }
        FiberConfiguration { counts: merged }
    }

    /// Parses the `8I1+8I2` grammar: `mult` then a fiber symbol, `+`-joined.
    pub fn parse(s: &str) -> Result<Self, FiberError> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(FiberConfiguration::default());
        }
        let mut counts = Vec::new();
        for term in s.split('+') {
            let term = term.trim();
            let digits: String = term.chars().take_while(|c| c.is_ascii_digit()).collect();
            let mult: u32 = if digits.is_empty() {
                1
            } else {
                digits.parse().map_err(|_| FiberError::Symbol(term.into()))?
            };
            let t = FiberType::parse(&term[digits.len()..])?;
            counts.push((t, mult));
        }
        Ok(FiberConfiguration::new(counts))
    }

    pub fn counts(&self) -> &[(FiberType, u32)] {
        &self.counts
    }

    pub fn total_euler(&self) -> u32 {
        self.counts.iter().map(|&(t, n)| t.euler() * n).sum()
    }

    pub fn n_singular(&self) -> u32 {
        self.counts.iter().map(|&(_, n)| n).sum()
    }

    pub fn count_where(&self, pred: impl Fn(FiberType) -> bool) -> u32 {
        self.counts
            .iter()
            .filter(|&&(t, _)| pred(t))
            .map(|&(_, n)| n)
            .sum()
    }

    pub fn is_non_isotrivial(&self) -> bool {
        self.counts
            .iter()
            .any(|&(t, _)| matches!(t, I(b) | IStar(b) if b > 0))
    }

    /// Root summands of all fibers, in configuration order.
    pub fn root_lattice(&self) -> Vec<RootSymbol> {
        let mut out = Vec::new();
        for &(t, n) in &self.counts {
            if let Some(sym) = t.ade() {
                for _ in 0..n {
                    out.push(sym);
                }
            }
        }
        out
    }
}

impl fmt::Display for FiberConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.counts.is_empty() {
            return write!(f, "0");
        }
        for (i, &(t, n)) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if n > 1 {
                write!(f, "{n}")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// Rank of the trivial Neron-Severi part `U + R`:
/// `26 - #multiplicative - 2 #additive`.
pub fn trivial_rank(c: &FiberConfiguration) -> i64 {
    let mult = c.count_where(FiberType::is_multiplicative);
    let add = c.count_where(FiberType::is_additive);
    26 - i64::from(mult) - 2 * i64::from(add)
}

/// Dimension of the configuration locus, computed two ways and checked for
/// agreement:
/// `#singular + #{II*, III*, IV*, I*_nu} - 6` and
/// `20 - trivial_rank - #{II, III, IV}`.
pub fn config_dimension(c: &FiberConfiguration) -> Result<i64, FiberError> {
    if !c.is_non_isotrivial() {
        return Err(FiberError::Isotrivial);
    }
    let by_fibers =
        i64::from(c.n_singular()) + i64::from(c.count_where(FiberType::is_star_or_e_type)) - 6;
    let bad = c.count_where(|t| matches!(t, II | III | IV));
    let by_rank = 20 - trivial_rank(c) - i64::from(bad);
    assert_eq!(by_fibers, by_rank, "dimension formulas disagree for {c}");
    Ok(by_fibers)
}

/// Fiber-type restriction for a configuration to generate a stratum of both
/// kinds: no `II`, `III`, `IV`, `II*`, `III*`, and with `-id` in the
/// monodromy also no `I*_b` (b > 0) and no `IV*`.
pub fn ambi_typical_filter(c: &FiberConfiguration, contains_minus_id: bool) -> bool {
    for &(t, _) in c.counts() {
        match t {
            II | III | IV | IIStar | IIIStar => return false,
            IVStar if contains_minus_id => return false,
            IStar(b) if b > 0 && contains_minus_id => return false,
            _ => {}
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    type GoldenRow = (FiberType, u32, Option<RootSymbol>, [[i64; 2]; 2]);

    /// The full fiber-type table: (type, euler, ade, monodromy).
    fn golden_rows() -> Vec<GoldenRow> {
        vec![
            (I(0), 0, None, [[1, 0], [0, 1]]),
            (I(1), 1, None, [[1, 1], [0, 1]]),
            (I(5), 5, Some(RootSymbol::A(4)), [[1, 5], [0, 1]]),
            (IStar(0), 6, Some(RootSymbol::D(4)), [[-1, 0], [0, -1]]),
            (IStar(2), 8, Some(RootSymbol::D(6)), [[-1, -2], [0, -1]]),
            (II, 2, None, [[1, 1], [-1, 0]]),
            (III, 3, Some(RootSymbol::A(1)), [[0, 1], [-1, 0]]),
            (IV, 4, Some(RootSymbol::A(2)), [[0, 1], [-1, -1]]),
            (IVStar, 8, Some(RootSymbol::E(6)), [[-1, -1], [1, 0]]),
            (IIIStar, 9, Some(RootSymbol::E(7)), [[0, -1], [1, 0]]),
            (IIStar, 10, Some(RootSymbol::E(8)), [[0, -1], [1, 1]]),
        ]
    }

    #[test]
    fn fiber_table_golden() {
        for (t, e, ade, m) in golden_rows() {
            assert_eq!(fiber_invariants(t), (e, ade, m), "{t}");
            assert_eq!(det2(m), 1, "{t}");
            // multiplicative iff trace 2 and != id
            let mult = trace2(m) == 2 && m != [[1, 0], [0, 1]];
            assert_eq!(t.is_multiplicative(), mult, "{t}");
            // I*_b iff trace -2 (including -id)
            assert_eq!(matches!(t, IStar(_)), trace2(m) == -2, "{t}");
        }
    }

    #[test]
    fn tate_dictionary_all_columns() {
        // one representative per column of the vanishing-order table
        let cols: Vec<((u32, u32, u32), FiberType)> = vec![
            ((1, 0, 0), I(0)),
            ((0, 1, 0), I(0)),
            ((0, 0, 0), I(0)),
            ((0, 0, 5), I(5)),
            ((3, 3, 6), IStar(0)),
            ((2, 4, 6), IStar(0)),
            ((2, 3, 6), IStar(0)),
            ((2, 3, 8), IStar(2)),
            ((1, 1, 2), II),
            ((1, 2, 3), III),
            ((2, 2, 4), IV),
            ((3, 4, 8), IVStar),
            ((3, 5, 9), IIIStar),
            ((4, 5, 10), IIStar),
        ];
        for ((a, b, c), want) in cols {
            assert_eq!(
                classify_fiber(VanishingOrders::new(a, b, c)).unwrap(),
                want,
                "({a},{b},{c})"
            );
        }
    }

    #[test]
    fn tate_errors() {
        assert_eq!(
            classify_fiber(VanishingOrders::new(4, 6, 12)),
            Err(FiberError::NonMinimal)
        );
        assert_eq!(
            classify_fiber(VanishingOrders::new(1, 1, 5)),
            Err(FiberError::InconsistentOrders(1, 1, 5))
        );
    }

    #[test]
    fn monodromy_lookup() {
        assert_eq!(
            fiber_from_monodromy([[-1, -2], [0, -1]], None).unwrap(),
            vec![IStar(2)]
        );
        assert_eq!(
            fiber_from_monodromy([[1, 4], [0, 1]], None).unwrap(),
            vec![I(4)]
        );
        assert_eq!(
            fiber_from_monodromy([[1, 0], [0, 1]], None).unwrap(),
            vec![I(0)]
        );
        // conjugates land in the same class: [[1,0],[2,1]]-conjugate of I_1
        assert_eq!(
            fiber_from_monodromy([[-1, 1], [-4, 3]], None).unwrap(),
            vec![I(1)]
        );
        // trace 2 with negative translation length is no fiber class
        assert!(fiber_from_monodromy([[3, -1], [4, -1]], None).is_err());
        assert!(fiber_from_monodromy([[2, 1], [1, 1]], None).is_err()); // trace 3
        assert!(fiber_from_monodromy([[1, 2], [1, 1]], None).is_err()); // det -1
    }

    #[test]
    fn monodromy_lookup_torsion_classes() {
        // each representative identifies itself, and conjugating by a few
        // SL(2,Z) elements does not change the answer
        let conjugators = [[[1i64, 1], [0, 1]], [[1, 0], [1, 1]], [[2, 1], [1, 1]]];
        for (t, _, _, m) in golden_rows() {
            for g in conjugators {
                let gi = [[g[1][1], -g[0][1]], [-g[1][0], g[0][0]]];
                // g^-1 m g
                let mg = mat_mul(mat_mul(gi, m), g);
                assert_eq!(fiber_from_monodromy(mg, None).unwrap(), vec![t], "{t}");
            }
        }
    }

    fn mat_mul(a: [[i64; 2]; 2], b: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
        [
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ]
    }

    #[test]
    fn star_hint_resolves_sign_ambiguity() {
        // [[1,2],[0,1]] is I_2; its negative is I*_2
        let m = [[1, 2], [0, 1]];
        assert_eq!(
            fiber_from_monodromy(m, Some(true)).unwrap(),
            vec![IStar(2)]
        );
        assert_eq!(fiber_from_monodromy(m, Some(false)).unwrap(), vec![I(2)]);
    }

    #[test]
    fn trivial_rank_examples() {
        let c = FiberConfiguration::parse("12I2").unwrap();
        assert_eq!(trivial_rank(&c), 14);
        let c = FiberConfiguration::parse("8I1+8I2").unwrap();
        assert_eq!(trivial_rank(&c), 10);
        assert_eq!(trivial_rank(&FiberConfiguration::default()), 2 + 24);
    }

    #[test]
    fn config_dimension_examples() {
        for (cfg, dim) in [("8I1+8I2", 10), ("12I2", 6), ("6I3+6I1", 6)] {
            let c = FiberConfiguration::parse(cfg).unwrap();
            assert_eq!(config_dimension(&c).unwrap(), dim, "{cfg}");
        }
        assert_eq!(
            config_dimension(&FiberConfiguration::parse("2II*+2I0*").unwrap()),
            Err(FiberError::Isotrivial)
        );
    }

    #[test]
    fn ambi_filter() {
        let c = FiberConfiguration::parse("12I2").unwrap();
        assert!(ambi_typical_filter(&c, true));
        let c = FiberConfiguration::parse("2II+5I3+5I1").unwrap();
        assert!(!ambi_typical_filter(&c, false));
        assert!(ambi_typical_filter(&FiberConfiguration::default(), true));
        let c = FiberConfiguration::parse("I2*+2IV*").unwrap();
        assert!(ambi_typical_filter(&c, false));
        assert!(!ambi_typical_filter(&c, true));
    }

    #[test]
    fn config_parse_display() {
        let c = FiberConfiguration::parse("2I4+8I2+I0*").unwrap();
        assert_eq!(c.to_string(), "8I2+2I4+I0*");
        assert_eq!(c.total_euler(), 8 + 16 + 6);
        assert_eq!(
            c.root_lattice(),
            vec![
                RootSymbol::A(1),
                RootSymbol::A(1),
                RootSymbol::A(1),
                RootSymbol::A(1),
                RootSymbol::A(1),
                RootSymbol::A(1),
                RootSymbol::A(1),
                RootSymbol::A(1),
                RootSymbol::A(3),
                RootSymbol::A(3),
                RootSymbol::D(4)
            ]
        );
    }
}
