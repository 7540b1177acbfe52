//! Permutations of `{1..d}` in one-line form, with the cycle notation used
//! throughout the cover and factorization machinery.
//!
//! Composition convention: permutations act on the right, so in a product
//! `a * b` the permutation `a` is applied first.  Points are 1-indexed at the
//! API surface and in display; storage is 0-indexed.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("point {0} out of range for degree {1}")]
    OutOfRange(usize, usize),
    #[error("point {0} repeated in cycle notation")]
    Repeated(usize),
    #[error("malformed cycle notation: {0}")]
    Parse(String),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
}

/// A permutation of `{1..d}` stored as 0-indexed images.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    img: Vec<u16>,
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm {
            img: (0..degree as u16).collect(),
        }
    }

    /// Builds a permutation from 0-indexed images. Panics if not a bijection.
    pub fn from_images(img: Vec<u16>) -> Self {
        let mut seen = vec![false; img.len()];
        for &y in &img {
            assert!(
                (y as usize) < img.len() && !seen[y as usize],
                "images do not form a permutation"
            );
            seen[y as usize] = true;
        }
        Perm { img }
    }

    /// Builds a permutation of the given degree from 1-indexed cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        let mut img: Vec<u16> = (0..degree as u16).collect();
        let mut seen = vec![false; degree];
        for cyc in cycles {
            for (i, &x) in cyc.iter().enumerate() {
                if x == 0 || x > degree {
                    return Err(PermError::OutOfRange(x, degree));
                }
                if seen[x - 1] {
                    return Err(PermError::Repeated(x));
                }
                seen[x - 1] = true;
                let y = cyc[(i + 1) % cyc.len()];
                if y == 0 || y > degree {
                    return Err(PermError::OutOfRange(y, degree));
                }
                img[x - 1] = (y - 1) as u16;
            }
        }
        Ok(Perm { img })
    }

    /// Parses cycle notation like `(1 2 3)(4 5)`; separators are spaces or
    /// commas, fixed points may be written as singleton cycles or omitted.
    pub fn parse(degree: usize, s: &str) -> Result<Self, PermError> {
        let s = s.trim();
        if s.is_empty() || s == "()" || s == "id" {
            return Ok(Perm::identity(degree));
        }
        let mut cycles = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let rest2 = rest.trim_start();
            if !rest2.starts_with('(') {
                return Err(PermError::Parse(format!("expected '(' in {rest2:?}")));
            }
            let close = rest2
                .find(')')
                .ok_or_else(|| PermError::Parse("unbalanced parenthesis".into()))?;
            let inner = &rest2[1..close];
            let cyc: Result<Vec<usize>, _> = inner
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| PermError::Parse(format!("bad point {t:?}")))
                })
                .collect();
            cycles.push(cyc?);
            rest = &rest2[close + 1..];
        }
        Perm::from_cycles(degree, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.img.len()
    }

    /// Image of a 1-indexed point.
    pub fn apply(&self, x: usize) -> usize {
        self.img[x - 1] as usize + 1
    }

    /// 0-indexed image, for hot loops.
    #[inline]
    pub fn apply0(&self, x: usize) -> usize {
        self.img[x] as usize
    }

    pub fn inverse(&self) -> Perm {
        let mut img = vec![0u16; self.img.len()];
        for (x, &y) in self.img.iter().enumerate() {
            img[y as usize] = x as u16;
        }
        Perm { img }
    }

    /// Product `self * other` with the right-action convention: the result
    /// maps `x` to `other(self(x))`.
    pub fn then(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree());
        Perm {
            img: self.img.iter().map(|&y| other.img[y as usize]).collect(),
        }
    }

    /// Conjugate `g^-1 * self * g`, i.e. the relabeling of `self` by `g`.
    pub fn conjugate_by(&self, g: &Perm) -> Perm {
        let mut img = vec![0u16; self.img.len()];
        for x in 0..self.img.len() {
            img[g.img[x] as usize] = g.img[self.img[x] as usize];
        }
        Perm { img }
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(x, &y)| x == y as usize)
    }

    pub fn fixed_points(&self) -> usize {
        self.img
            .iter()
            .enumerate()
            .filter(|&(x, &y)| x == y as usize)
            .count()
    }

    /// Cycles in canonical presentation: each cycle starts at its least
    /// point, cycles sorted by least point, fixed points included.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let d = self.degree();
        let mut seen = vec![false; d];
        let mut out = Vec::new();
        for start in 0..d {
            if seen[start] {
                continue;
            }
            let mut cyc = vec![start + 1];
            seen[start] = true;
            let mut x = self.img[start] as usize;
            while x != start {
                seen[x] = true;
                cyc.push(x + 1);
                x = self.img[x] as usize;
            }
            out.push(cyc);
        }
        out
    }

    /// Cycle lengths sorted in decreasing order (a partition of the degree).
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    /// One-line images as a slice, 0-indexed.
    pub fn images(&self) -> &[u16] {
        &self.img
    }

    /// True if the group generated by the given permutations is transitive.
    pub fn transitive(perms: &[&Perm]) -> bool {
        if perms.is_empty() {
            return false;
        }
        let d = perms[0].degree();
        if d == 0 {
            return true;
        }
        let mut seen = vec![false; d];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for p in perms {
                for y in [p.apply0(x), p.inverse().apply0(x)] {
                    if !seen[y] {
                        seen[y] = true;
                        count += 1;
                        stack.push(y);
                    }
                }
            }
        }
        count == d
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cyc in self.cycles() {
            write!(f, "(")?;
            for (i, x) in cyc.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm[{self}]")
    }
}

impl serde::Serialize for Perm {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Perm {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        // fixed points are explicit in the display form, so the degree is
        // the largest point mentioned
        let degree = s
            .split(|c: char| !c.is_ascii_digit())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().unwrap_or(0))
            .max()
            .unwrap_or(0);
        Perm::parse(degree, &s).map_err(serde::de::Error::custom)
    }
}
