//! Dense univariate polynomials over exact rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

pub type Q = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Coefficients in increasing degree, trailing zeros trimmed; an empty
/// vector is the zero polynomial.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<Q>,
}

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_ratio(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

impl RatPoly {
    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        RatPoly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        let mut p = RatPoly { coeffs: vec![c] };
        p.trim();
        p
    }

    pub fn x() -> Self {
        RatPoly {
            coeffs: vec![Q::zero(), Q::one()],
        }
    }

    pub fn from_coeffs(coeffs: Vec<Q>) -> Self {
        let mut p = RatPoly { coeffs };
        p.trim();
        p
    }

    /// Coefficients given from the constant term up, as integers.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        RatPoly::from_coeffs(coeffs.iter().map(|&c| q(c)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree of a nonzero polynomial; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn leading(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> RatPoly {
        if self.coeffs.len() <= 1 {
            return RatPoly::zero();
        }
        RatPoly::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * q(i as i64 + 1))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Q) -> RatPoly {
        RatPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> RatPoly {
        if self.is_zero() {
            return RatPoly::zero();
        }
        let lead = self.leading();
        self.scale(&lead.recip())
    }

    pub fn pow(&self, e: usize) -> RatPoly {
        let mut acc = RatPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Quotient and remainder with `rem = self - quo * div`, `deg rem < deg div`.
    pub fn divrem(&self, div: &RatPoly) -> Result<(RatPoly, RatPoly), PolyError> {
        if div.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let mut rem = self.clone();
        let mut quo = vec![Q::zero(); self.coeffs.len().saturating_sub(div.coeffs.len() - 1)];
        let dlead = div.leading();
        while !rem.is_zero() && rem.degree() >= div.degree() && !div.is_constant() {
            let shift = rem.degree() - div.degree();
            let c = rem.leading() / dlead.clone();
            for (i, dc) in div.coeffs.iter().enumerate() {
                let t = dc * &c;
                rem.coeffs[i + shift] = rem.coeffs[i + shift].clone() - t;
            }
            rem.trim();
            quo[shift] = c;
        }
        if div.is_constant() {
            return Ok((self.scale(&dlead.recip()), RatPoly::zero()));
        }
        Ok((RatPoly::from_coeffs(quo), rem))
    }

    /// Exact division; panics if the division leaves a remainder.
    pub fn exact_div(&self, div: &RatPoly) -> RatPoly {
        let (q_, r) = self.divrem(div).expect("nonzero divisor");
        assert!(r.is_zero(), "inexact polynomial division");
        q_
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("b nonzero");
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Substitution `self(inner)`.
    pub fn compose_poly(&self, inner: &RatPoly) -> RatPoly {
        let mut acc = RatPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &RatPoly::constant(c.clone());
        }
        acc
    }

    /// Squarefree decomposition; see [`yun`].
    pub fn squarefree_decomposition(&self) -> (Q, Vec<(RatPoly, usize)>) {
        yun(self)
    }
}

/// Yun's squarefree decomposition: returns the leading constant and monic
/// squarefree factors with multiplicities whose product reconstructs the
/// input.
pub fn yun(p: &RatPoly) -> (Q, Vec<(RatPoly, usize)>) {
    if p.is_zero() {
        return (Q::zero(), Vec::new());
    }
    let lead = p.leading();
    let f = p.monic();
    if f.is_constant() {
        return (lead, Vec::new());
    }
    let df = f.derivative();
    let g0 = f.gcd(&df);
    let mut w = f.exact_div(&g0);
    let mut y = df.exact_div(&g0);
    let mut out = Vec::new();
    let mut i = 1usize;
    loop {
        let z = &y - &w.derivative();
        if w.is_constant() {
            break;
        }
        let gi = w.gcd(&z);
        if !gi.is_constant() {
            out.push((gi.monic(), i));
        }
        w = w.exact_div(&gi);
        y = z.exact_div(&gi);
        i += 1;
    }
    (lead, out)
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) + rhs.coeff(i));
        }
        RatPoly::from_coeffs(coeffs)
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) - rhs.coeff(i));
        }
        RatPoly::from_coeffs(coeffs)
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut coeffs = vec![Q::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a * b;
            }
        }
        RatPoly::from_coeffs(coeffs)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if i == 0 || !a.is_one() {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "z")?,
                _ => write!(f, "z^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatPoly[{self}]")
    }
}

/// Parses `integer/rational` coefficient polynomials in one variable with
/// `^`, parentheses and implicit multiplication, e.g. `(z^2+3)^3` or
/// `27z(z-9)^2`.
pub fn parse_poly(input: &str) -> Result<RatPoly, PolyError> {
    let mut p = Parser {
        chars: input.chars().collect(),
        pos: 0,
        var: None,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.chars.len() {
        return Err(PolyError::Parse(format!(
            "unexpected input at position {}",
            p.pos
        )));
    }
    Ok(e)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    var: Option<char>,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RatPoly, PolyError> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                -&self.term()?
            }
            Some('+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                '-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatPoly, PolyError> {
        let mut acc = self.factor()?;
        while let Some(c) = self.peek() {
            match c {
                '*' => {
                    self.pos += 1;
                    acc = &acc * &self.factor()?;
                }
                '(' => acc = &acc * &self.factor()?,
                c if c.is_ascii_digit() || c.is_alphabetic() => {
                    acc = &acc * &self.factor()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RatPoly, PolyError> {
        let base = self.base()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.integer()? as usize;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<RatPoly, PolyError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(PolyError::Parse("expected ')'".into()));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                if self.peek() == Some('/') {
                    self.pos += 1;
                    let d = self.integer()?;
                    if d == 0 {
                        return Err(PolyError::Parse("zero denominator".into()));
                    }
                    Ok(RatPoly::constant(q_ratio(n, d)))
                } else {
                    Ok(RatPoly::constant(q(n)))
                }
            }
            Some(c) if c.is_alphabetic() => {
                match self.var {
                    None => self.var = Some(c),
                    Some(v) if v == c => {}
                    Some(v) => {
                        return Err(PolyError::Parse(format!(
                            "two variables {v:?} and {c:?} in a univariate polynomial"
                        )))
                    }
                }
                self.pos += 1;
                Ok(RatPoly::x())
            }
            other => Err(PolyError::Parse(format!("unexpected {other:?}"))),
        }
    }

    fn integer(&mut self) -> Result<i64, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(PolyError::Parse("expected an integer".into()));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| PolyError::Parse(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_arithmetic() {
        let p = parse_poly("(z^2+3)^3").unwrap();
        assert_eq!(p.degree(), 6);
        assert_eq!(p.coeff(0), q(27));
        let r = parse_poly("z^2 (z^2-9)^2").unwrap();
        assert_eq!(r.degree(), 6);
        assert_eq!(r.coeff(2), q(81));
        let s = parse_poly("1/2 z + 3").unwrap();
        assert_eq!(s.coeff(1), q_ratio(1, 2));
        assert!(parse_poly("x + y").is_err());
    }

    #[test]
    fn divrem_and_gcd() {
        let a = parse_poly("z^3 - 1").unwrap();
        let b = parse_poly("z - 1").unwrap();
        let (q_, r) = a.divrem(&b).unwrap();
        assert!(r.is_zero());
        assert_eq!(q_, parse_poly("z^2 + z + 1").unwrap());
        let g = a.gcd(&parse_poly("z^2 - 1").unwrap());
        assert_eq!(g, parse_poly("z - 1").unwrap());
    }

    #[test]
    fn yun_reconstructs() {
        let p = parse_poly("2 z^2 (z-1)^3 (z^2+1)").unwrap();
        let (lead, factors) = yun(&p);
        let mut rebuilt = RatPoly::constant(lead);
        for (f, m) in &factors {
            rebuilt = &rebuilt * &f.pow(*m);
        }
        assert_eq!(rebuilt, p);
        let mults: Vec<usize> = factors.iter().map(|&(_, m)| m).collect();
        assert_eq!(mults, vec![1, 2, 3]);
    }

    #[test]
    fn compose_poly_degree() {
        let outer = parse_poly("z^2 + 1").unwrap();
        let inner = parse_poly("z^3 - z").unwrap();
        assert_eq!(outer.compose_poly(&inner).degree(), 6);
    }
}
