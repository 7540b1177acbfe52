//! Rational self-maps of the projective line as coprime polynomial pairs,
//! with exact branching data over any value.

use std::fmt;

use num::{One, Zero};
use thiserror::Error;

use super::poly::{yun, PolyError, Q, RatPoly};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MapError {
    #[error("constant map")]
    Constant,
    #[error("identically zero denominator")]
    ZeroDenominator,
    #[error("{0}")]
    Poly(#[from] PolyError),
}

/// A nonconstant rational map `num/den` with `gcd(num, den) = 1`; the
/// degree as a self-map of the line is `max(deg num, deg den)`.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMap {
    num: RatPoly,
    den: RatPoly,
}

impl RationalMap {
    pub fn new(num: RatPoly, den: RatPoly) -> Result<Self, MapError> {
        if den.is_zero() {
            return Err(MapError::ZeroDenominator);
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.exact_div(&g), den.exact_div(&g))
        };
        if num.is_constant() && den.is_constant() {
            return Err(MapError::Constant);
        }
        Ok(RationalMap { num, den })
    }

    pub fn identity() -> Self {
        RationalMap {
            num: RatPoly::x(),
            den: RatPoly::one(),
        }
    }

    pub fn num(&self) -> &RatPoly {
        &self.num
    }

    pub fn den(&self) -> &RatPoly {
        &self.den
    }

    pub fn degree(&self) -> usize {
        self.num.degree().max(self.den.degree())
    }

    /// Equality as maps: cross-multiplied polynomial identity.
    pub fn same_map(&self, other: &RationalMap) -> bool {
        let lhs = &self.num * &other.den;
        let rhs = &other.num * &self.den;
        // proportional with a constant factor
        if lhs.is_zero() || rhs.is_zero() {
            return lhs.is_zero() && rhs.is_zero();
        }
        let c = lhs.leading() / rhs.leading();
        &rhs.scale(&c) - &lhs == RatPoly::zero()
    }

    /// Branching partition over a finite value: multiplicities of the roots
    /// of `num - v * den`, plus the multiplicity at the point at infinity
    /// (the degree deficit) when infinity maps to `v`.
    pub fn partition_over(&self, v: &Q) -> Vec<usize> {
        let p = &self.num - &self.den.scale(v);
        self.partition_of_numerator(&p)
    }

    /// Branching partition over infinity: pole orders.
    pub fn partition_over_infinity(&self) -> Vec<usize> {
        let den = self.den.clone();
        self.partition_of_numerator(&den)
    }

    fn partition_of_numerator(&self, p: &RatPoly) -> Vec<usize> {
        let mut parts = Vec::new();
        let (_, factors) = yun(p);
        for (f, m) in factors {
            for _ in 0..f.degree() {
                parts.push(m);
            }
        }
        let deficit = self.degree() - p.degree();
        if deficit > 0 {
            parts.push(deficit);
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        parts
    }

    /// The three partitions over 0, 1, infinity.
    pub fn branching_passport(&self) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
        (
            self.partition_over(&Q::zero()),
            self.partition_over(&Q::one()),
            self.partition_over_infinity(),
        )
    }

    /// Finite critical values other than 0, 1, infinity would show up as
    /// roots of the Wronskian `num' den - num den'` away from the fibers
    /// over those three values; returns true when there are none and the
    /// value of the map at infinity (if critical there) is 0, 1 or infinity.
    pub fn is_branched_only_over_0_1_infinity(&self) -> bool {
        let w = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        let special = &(&self.num * &self.den) * &(&self.num - &self.den);
        // strip from w every factor shared with the three special fibers
        let mut rest = w.clone();
        loop {
            let g = rest.gcd(&special);
            if g.is_constant() {
                break;
            }
            rest = rest.exact_div(&g);
        }
        if !rest.is_constant() {
            return false;
        }
        // at infinity the map is critical iff its local multiplicity
        // exceeds 1; the value there is lc-ratio (equal degrees) or 0/inf
        if self.num.degree() == self.den.degree() {
            let c = self.num.leading() / self.den.leading();
            let mult = self.degree() - (&self.num - &self.den.scale(&c)).degree();
            if mult > 1 && !c.is_zero() && !c.is_one() {
                return false;
            }
        }
        true
    }

    /// Genus of the source curve by the ramification count over 0, 1,
    /// infinity, valid when the map is branched only there.
    pub fn genus_as_three_point_cover(&self) -> Option<i64> {
        if !self.is_branched_only_over_0_1_infinity() {
            return None;
        }
        let d = self.degree() as i64;
        let (p0, p1, pi) = self.branching_passport();
        let parts = (p0.len() + p1.len() + pi.len()) as i64;
        let chi = 2 * d - (3 * d - parts);
        Some((2 - chi) / 2)
    }

    /// Exact composition `outer(inner)` with cancellation.
    pub fn compose(&self, inner: &RationalMap) -> Result<RationalMap, MapError> {
        let n = self.num.degree().max(self.den.degree());
        let homog = |p: &RatPoly| -> RatPoly {
            // p(u/v) * v^n with u = inner.num, v = inner.den
            let mut acc = RatPoly::zero();
            for i in 0..=n {
                let c = p.coeff(i);
                if c.is_zero() {
                    continue;
                }
                let term = &inner.num.pow(i) * &inner.den.pow(n - i);
                acc = &acc + &term.scale(&c);
            }
            acc
        };
        RationalMap::new(homog(&self.num), homog(&self.den))
    }
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

impl fmt::Debug for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalMap[{self}]")
    }
}

/// The modular invariant of a Weierstrass pair: `g2^3 / (g2^3 - 27 g3^2)`,
/// reduced.
pub fn j_from_weierstrass(g2: &RatPoly, g3: &RatPoly) -> Result<RationalMap, MapError> {
    let g2cube = g2.pow(3);
    let disc = &g2cube - &g3.pow(2).scale(&super::poly::q(27));
    RationalMap::new(g2cube, disc)
}

#[cfg(test)]
mod tests {
    use super::super::poly::parse_poly;
    use super::*;

    fn map(num: &str, den: &str) -> RationalMap {
        RationalMap::new(parse_poly(num).unwrap(), parse_poly(den).unwrap()).unwrap()
    }

    #[test]
    fn square_map_passport() {
        let f = map("z^2", "1");
        assert_eq!(f.branching_passport(), (vec![2], vec![1, 1], vec![2]));
        assert!(f.is_branched_only_over_0_1_infinity());
        assert_eq!(f.genus_as_three_point_cover(), Some(0));
    }

    #[test]
    fn reduction_and_equality() {
        let f = map("z^2 - 1", "z - 1");
        assert_eq!(f.degree(), 1);
        assert!(f.same_map(&map("z + 1", "1")));
        assert!(!f.same_map(&map("z", "1")));
        assert!(RationalMap::new(parse_poly("3").unwrap(), parse_poly("5").unwrap()).is_err());
    }

    #[test]
    fn composition_degree_multiplies() {
        let f = map("z^2 + 1", "z");
        let g = map("z^3 - 2", "z + 4");
        let fg = f.compose(&g).unwrap();
        assert_eq!(fg.degree(), f.degree() * g.degree());
        let id = RationalMap::identity();
        assert!(f.compose(&id).unwrap().same_map(&f));
        assert!(id.compose(&f).unwrap().same_map(&f));
    }

    #[test]
    fn map_with_extra_branching_is_flagged() {
        // z^3 - 3z has critical values +/- 2, away from {0, 1, inf}
        let f = map("z^3 - 3z", "1");
        assert!(!f.is_branched_only_over_0_1_infinity());
    }
}
