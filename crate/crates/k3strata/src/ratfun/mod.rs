//! Exact rational-function arithmetic: univariate and sparse multivariate
//! polynomials over the rationals, rational self-maps of the line with
//! branching passports, and the verified quotient-map and Weierstrass-family
//! identities for the low-index monodromy groups.

pub mod map;
pub mod multi;
pub mod poly;

pub use map::{j_from_weierstrass, MapError, RationalMap};
pub use multi::MPoly;
pub use poly::{parse_poly, q, q_ratio, yun, PolyError, Q, RatPoly};

use num::Zero;

/// One verified row of the quotient-map table: the map for a low-index
/// group in a chosen coordinate, the numerator of `j - 1`, and the expected
/// branching passport.
pub struct JRow {
    pub name: &'static str,
    pub map: RationalMap,
    pub one_num: RatPoly,
    pub passport: (Vec<usize>, Vec<usize>, Vec<usize>),
}

/// Rows 1..=5: the index-6, 6, 4, 3, 2 quotient maps.
pub fn jtable_row(row: usize) -> Option<JRow> {
    let build = |name, num, den, one, p0: &[usize], p1: &[usize], pi: &[usize]| -> JRow {
        JRow {
            name,
            map: RationalMap::new(parse_poly(num).unwrap(), parse_poly(den).unwrap())
                .expect("table data is a valid map"),
            one_num: parse_poly(one).unwrap(),
            passport: (p0.to_vec(), p1.to_vec(), pi.to_vec()),
        }
    };
    let row = match row {
        1 => build(
            "Gamma(2)",
            "(z^2+3)^3",
            "z^2 (z^2-9)^2",
            "27 (z^2-1)^2",
            &[3, 3],
            &[2, 2, 2],
            &[2, 2, 2],
        ),
        2 => build(
            "Gamma1(4)",
            "4 (z^2-4z+1)^3",
            "27 z (z-4)",
            "(z-2)^2 (2z^2-8z-1)^2",
            &[3, 3],
            &[2, 2, 2],
            &[4, 1, 1],
        ),
        3 => build(
            "Gamma1(3)",
            "z (z+8)^3",
            "64 (z-1)^3",
            "(z^2-20z-8)^2",
            &[3, 1],
            &[2, 2],
            &[3, 1],
        ),
        4 => build(
            "Gamma1(2)",
            "(z+3)^3",
            "27 (z-1)^2",
            "z (z-9)^2",
            &[3],
            &[2, 1],
            &[2, 1],
        ),
        5 => build(
            "Gamma^2",
            "4z",
            "(z+1)^2",
            "-(z-1)^2",
            &[1, 1],
            &[2],
            &[2],
        ),
        _ => return None,
    };
    Some(row)
}

/// Verifies one table row exactly: the polynomial identity
/// `num - den = one_num`, the expected degree and passport, the location
/// data of the poles and torsion points, and that the map is branched only
/// over 0, 1 and infinity with genus 0.
pub fn verify_jtable_row(row: usize) -> bool {
    let Some(r) = jtable_row(row) else {
        return false;
    };
    let m = &r.map;
    // j - 1 = one_num / den as an exact polynomial identity
    if &(m.num() - m.den()) - &r.one_num != RatPoly::zero() {
        return false;
    }
    if m.branching_passport() != r.passport {
        return false;
    }
    if m.genus_as_three_point_cover() != Some(0) {
        return false;
    }
    // location remarks, one per row
    let at = |p: &RatPoly, v: i64| p.eval(&q(v)).is_zero();
    match row {
        // poles at 0 and +/-3, of order 2 each (no pole at infinity)
        1 => {
            m.num().degree() == m.den().degree()
                && at(m.den(), 0)
                && at(m.den(), 3)
                && at(m.den(), -3)
        }
        // poles at 0, 4 of order 1 and at infinity of order 4
        2 => {
            m.num().degree() == m.den().degree() + 4 && at(m.den(), 0) && at(m.den(), 4)
        }
        // no 2-torsion; z = 0 the only simple preimage of 0
        3 => at(m.num(), 0) && !r.passport.1.contains(&1),
        // no 3-torsion; z = 0 the only simple preimage of 1
        4 => at(&r.one_num, 0) && !r.passport.0.contains(&1),
        // the two simple preimages of 0 are z = 0 and infinity
        5 => at(m.num(), 0) && m.num().degree() + 1 == m.den().degree(),
        _ => false,
    }
}

/// The six Weierstrass coefficient families, as polynomial identities in
/// their parameter polynomials treated as independent indeterminates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeierstrassFamily {
    /// `Gamma(2)`: two degree-4 parameters.
    I,
    /// `Gamma1(4)`: two degree-4 parameters.
    II,
    /// `Gamma1(3)`, even second-factor degree: degrees 2 and 6.
    III,
    /// `Gamma1(3)`, second-factor degree 3: degrees 1, 3, 2.
    IV,
    /// `Gamma1(2)`: degrees 4 and 8.
    V,
    /// `Gamma^2`: four linear parameters.
    VI,
}

impl WeierstrassFamily {
    pub fn all() -> [WeierstrassFamily; 6] {
        use WeierstrassFamily::*;
        [I, II, III, IV, V, VI]
    }

    pub fn from_index(i: usize) -> Option<Self> {
        use WeierstrassFamily::*;
        [I, II, III, IV, V, VI].get(i.wrapping_sub(1)).copied()
    }

    pub fn label(self) -> &'static str {
        match self {
            WeierstrassFamily::I => "i",
            WeierstrassFamily::II => "ii",
            WeierstrassFamily::III => "iii",
            WeierstrassFamily::IV => "iv",
            WeierstrassFamily::V => "v",
            WeierstrassFamily::VI => "vi",
        }
    }
}

/// `(g2, g3, stated discriminant)` of a family, in the indeterminates
/// `a, b, c, d` standing for its parameter polynomials.
pub fn weierstrass_family(f: WeierstrassFamily) -> (MPoly, MPoly, MPoly) {
    use WeierstrassFamily::*;
    let n = match f {
        I | II | III | V => 2,
        IV => 3,
        VI => 4,
    };
    let int = |k: i64| MPoly::int(n, k);
    let a = MPoly::var(n, 0);
    let b = MPoly::var(n, 1);
    match f {
        // g2 = a^2 + 3b^2, g3 = b(a^2 - b^2), delta = a^2 (a^2 - 9b^2)^2
        I => (
            &a.pow(2) + &(&int(3) * &b.pow(2)),
            &b * &(&a.pow(2) - &b.pow(2)),
            &a.pow(2) * &(&a.pow(2) - &(&int(9) * &b.pow(2))).pow(2),
        ),
        // g2 = 12(a^2 - 4ab + b^2), g3 = 4(a - 2b)(2a^2 - 8ab - b^2),
        // delta = a (a - 4b) b^4
        II => (
            &int(12) * &(&(&a.pow(2) - &(&int(4) * &(&a * &b))) + &b.pow(2)),
            &int(4)
                * &(&(&a - &(&int(2) * &b))
                    * &(&(&(&int(2) * &a.pow(2)) - &(&int(8) * &(&a * &b))) - &b.pow(2))),
            &(&a * &(&a - &(&int(4) * &b))) * &b.pow(4),
        ),
        // g2 = 3a(a^3 + 8b), g3 = a^6 - 20a^3 b - 8b^2,
        // delta = (a^3 - b)^3 b
        III => (
            &(&int(3) * &a) * &(&a.pow(3) + &(&int(8) * &b)),
            &(&a.pow(6) - &(&int(20) * &(&a.pow(3) * &b))) - &(&int(8) * &b.pow(2)),
            &(&a.pow(3) - &b).pow(3) * &b,
        ),
        // g2 = 3 a c^2 (a^3 + 8b), g3 = c^3 (a^6 - 20a^3 b - 8b^2),
        // delta = c^6 (a^3 - b)^3 b
        IV => {
            let g = MPoly::var(n, 2);
            (
                &(&(&int(3) * &a) * &g.pow(2)) * &(&a.pow(3) + &(&int(8) * &b)),
                &g.pow(3) * &(&(&a.pow(6) - &(&int(20) * &(&a.pow(3) * &b))) - &(&int(8) * &b.pow(2))),
                &(&g.pow(6) * &(&a.pow(3) - &b).pow(3)) * &b,
            )
        }
        // g2 = 3a^2 + 9b, g3 = a(a^2 - 9b), delta = (a^2 - b)^2 b
        V => (
            &(&int(3) * &a.pow(2)) + &(&int(9) * &b),
            &a * &(&a.pow(2) - &(&int(9) * &b)),
            &(&a.pow(2) - &b).pow(2) * &b,
        ),
        // g2 = -12 a b c^3 d^3, g3 = 4 c^4 d^4 (a^3 c - b^3 d),
        // delta = (a^3 c + b^3 d)^2 c^8 d^8
        VI => {
            let g = MPoly::var(n, 2);
            let e = MPoly::var(n, 3);
            (
                &(&int(-12) * &(&a * &b)) * &(&g.pow(3) * &e.pow(3)),
                &(&int(4) * &(&g.pow(4) * &e.pow(4)))
                    * &(&(&a.pow(3) * &g) - &(&b.pow(3) * &e)),
                &(&(&a.pow(3) * &g) + &(&b.pow(3) * &e)).pow(2) * &(&g.pow(8) * &e.pow(8)),
            )
        }
    }
}

/// Verifies `g2^3 - 27 g3^2 = c * delta` as an exact multivariate identity
/// and returns the nonzero constant `c`, determined by the leading terms.
pub fn verify_weierstrass_family(f: WeierstrassFamily) -> Option<Q> {
    let (g2, g3, delta) = weierstrass_family(f);
    let disc = &g2.pow(3) - &(&MPoly::int(g2.nvars(), 27) * &g3.pow(2));
    let (de, dc) = disc.leading_term()?;
    let (se, sc) = delta.leading_term()?;
    if de != se {
        return None;
    }
    let c = dc / sc;
    if c.is_zero() {
        return None;
    }
    if (&disc - &delta.scale(&c)).is_zero() {
        Some(c)
    } else {
        None
    }
}
