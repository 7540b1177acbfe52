//! Sparse multivariate polynomials over exact rationals, in at most a
//! handful of indeterminates, ordered graded-lexicographically.  Just enough
//! arithmetic for polynomial identity checking.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Zero};

use super::poly::{q, Q};

/// Exponent vectors keyed by (total degree, exponents) so the natural map
/// order is graded lex.
type Key = (u32, Vec<u16>);

#[derive(Clone, PartialEq, Eq, Default)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Key, Q>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = MPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert((0, vec![0; nvars]), c);
        }
        p
    }

    pub fn int(nvars: usize, c: i64) -> Self {
        MPoly::constant(nvars, q(c))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut exps = vec![0u16; nvars];
        exps[i] = 1;
        let mut p = MPoly::zero(nvars);
        p.terms.insert((1, exps), Q::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    /// Leading (greatest graded-lex) term as (exponents, coefficient).
    pub fn leading_term(&self) -> Option<(&[u16], &Q)> {
        self.terms.iter().next_back().map(|((_, e), c)| (&e[..], c))
    }

    fn insert(&mut self, exps: Vec<u16>, c: Q) {
        if c.is_zero() {
            return;
        }
        let key = (exps.iter().map(|&e| u32::from(e)).sum(), exps);
        match self.terms.get_mut(&key) {
            Some(existing) => {
                *existing = existing.clone() + c;
                if existing.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn pow(&self, e: usize) -> MPoly {
        let mut acc = MPoly::constant(self.nvars, Q::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale(&self, c: &Q) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v * c))
                .collect(),
        }
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for ((_, e), c) in &rhs.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self + &(-rhs)
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = MPoly::zero(self.nvars);
        for ((_, ea), ca) in &self.terms {
            for ((_, eb), cb) in &rhs.terms {
                let exps: Vec<u16> = ea.iter().zip(eb).map(|(&a, &b)| a + b).collect();
                out.insert(exps, ca * cb);
            }
        }
        out
    }
}

const VAR_NAMES: [&str; 4] = ["a", "b", "c", "d"];

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, ((_, exps), c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (v, &e) in exps.iter().enumerate() {
                if e == 1 {
                    write!(f, "*{}", VAR_NAMES[v.min(3)])?;
                } else if e > 1 {
                    write!(f, "*{}^{}", VAR_NAMES[v.min(3)], e)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly[{self}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_cube() {
        // (a + b)^3 = a^3 + 3a^2 b + 3a b^2 + b^3
        let a = MPoly::var(2, 0);
        let b = MPoly::var(2, 1);
        let cube = (&a + &b).pow(3);
        assert_eq!(cube.n_terms(), 4);
        let direct = &(&a.pow(3) + &(&MPoly::int(2, 3) * &(&a.pow(2) * &b)))
            + &(&(&MPoly::int(2, 3) * &(&a * &b.pow(2))) + &b.pow(3));
        assert_eq!(cube, direct);
        assert!((&cube - &direct).is_zero());
    }

    #[test]
    fn leading_term_graded_lex() {
        let a = MPoly::var(2, 0);
        let b = MPoly::var(2, 1);
        let p = &(&a * &b.pow(2)) + &a.pow(2); // a b^2 + a^2: degree 3 beats 2
        let (exps, _) = p.leading_term().unwrap();
        assert_eq!(exps, &[1, 2]);
    }
}
