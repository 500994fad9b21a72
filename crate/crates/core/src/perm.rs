//! Permutations of `{1..degree}` in image form.
//!
//! The product convention is left-to-right throughout the crate: `a * b`
//! means "apply `a`, then `b`". Conjugation is `a^b = b * a * b^-1`, so that
//! `(a^b)` is "what `a` becomes after relabelling by `b`" under this product.

use std::fmt;

use crate::error::Error;

/// A permutation stored as the sequence of 0-based images of `0..degree`.
///
/// Ordering and equality are lexicographic on the image sequence; this is the
/// tie-breaking order used everywhere (element ids, class representatives,
/// canonical tuples).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u16>,
}

impl Perm {
    pub fn identity(degree: u16) -> Self {
        Perm {
            images: (0..degree).collect(),
        }
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<u16>) -> Result<Self, Error> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &img in &images {
            if (img as usize) >= n || seen[img as usize] {
                return Err(Error::Degenerate(format!(
                    "image sequence {:?} is not a bijection of 0..{}",
                    images, n
                )));
            }
            seen[img as usize] = true;
        }
        Ok(Perm { images })
    }

    pub fn degree(&self) -> u16 {
        self.images.len() as u16
    }

    pub fn images(&self) -> &[u16] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, point: u16) -> u16 {
        self.images[point as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u16 == j)
    }

    /// `self * other`: apply `self`, then `other`.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: self.images.iter().map(|&i| other.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u16; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j as usize] = i as u16;
        }
        Perm { images }
    }

    /// `b * self * b^-1`, i.e. `self^b` under the crate's conjugation convention.
    pub fn conjugate_by(&self, b: &Perm) -> Perm {
        b.compose(self).compose(&b.inverse())
    }

    pub fn pow(&self, mut exp: i64) -> Perm {
        let base = if exp < 0 {
            exp = -exp;
            self.inverse()
        } else {
            self.clone()
        };
        let mut acc = Perm::identity(self.degree());
        let mut sq = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.compose(&sq);
            }
            sq = sq.compose(&sq);
            exp >>= 1;
        }
        acc
    }

    pub fn order(&self) -> u64 {
        let mut p = self.clone();
        let mut n = 1u64;
        while !p.is_identity() {
            p = p.compose(self);
            n += 1;
        }
        n
    }

    /// Parses a product of cycles in 1-based cycle notation, e.g. `(1 2)(3 4)`.
    ///
    /// `()` denotes the identity. Non-disjoint cycles are composed left to
    /// right. Whitespace is insignificant; points may also be comma-separated.
    pub fn parse_cycles(text: &str, degree: u16) -> Result<Self, Error> {
        let mut result = Perm::identity(degree);
        let mut rest = text.trim();
        if rest.is_empty() {
            return Err(Error::Parse("empty cycle expression".into()));
        }
        while !rest.is_empty() {
            let Some(open) = rest.find('(') else {
                return Err(Error::Parse(format!("expected '(' in cycle expression near {rest:?}")));
            };
            if !rest[..open].trim().is_empty() {
                return Err(Error::Parse(format!(
                    "unexpected text {:?} in cycle expression",
                    &rest[..open]
                )));
            }
            let Some(close) = rest[open..].find(')') else {
                return Err(Error::Parse(format!("unbalanced '(' in {text:?}")));
            };
            let inner = &rest[open + 1..open + close];
            rest = &rest[open + close + 1..];
            let points: Vec<u16> = inner
                .split(|ch: char| ch.is_whitespace() || ch == ',')
                .filter(|tok| !tok.is_empty())
                .map(|tok| {
                    tok.parse::<u16>()
                        .map_err(|_| Error::Parse(format!("bad point {tok:?} in cycle")))
                })
                .collect::<Result<_, _>>()?;
            if points.is_empty() {
                continue; // "()" is the identity cycle
            }
            for &pt in &points {
                if pt == 0 || pt > degree {
                    return Err(Error::Degenerate(format!(
                        "point {pt} outside 1..{degree} in cycle {text:?}"
                    )));
                }
            }
            let mut distinct = points.clone();
            distinct.sort_unstable();
            distinct.dedup();
            if distinct.len() != points.len() {
                return Err(Error::Parse(format!("repeated point in cycle {text:?}")));
            }
            let mut cycle = Perm::identity(degree);
            for window in 0..points.len() {
                let from = points[window];
                let to = points[(window + 1) % points.len()];
                cycle.images[(from - 1) as usize] = to - 1;
            }
            result = result.compose(&cycle);
        }
        Ok(result)
    }

    /// 1-based disjoint-cycle form, fixed points omitted; the identity is `()`.
    pub fn cycle_string(&self) -> String {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = String::new();
        for start in 0..n {
            if seen[start] || self.images[start] as usize == start {
                seen[start] = true;
                continue;
            }
            out.push('(');
            let mut p = start;
            let mut first = true;
            while !seen[p] {
                seen[p] = true;
                if !first {
                    out.push(' ');
                }
                out.push_str(&(p + 1).to_string());
                first = false;
                p = self.images[p] as usize;
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycle_string())
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycle_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str, degree: u16) -> Perm {
        Perm::parse_cycles(text, degree).unwrap()
    }

    #[test]
    fn parse_and_format_round_trip() {
        for text in ["(1 2)", "(1 2 3)", "(1 2)(3 4)", "()"] {
            let perm = p(text, 4);
            assert_eq!(perm.cycle_string(), text);
        }
    }

    #[test]
    fn left_to_right_product() {
        // (1 2) then (1 3): 1 -> 2 -> 2, 2 -> 1 -> 3, 3 -> 3 -> 1.
        let a = p("(1 2)", 3);
        let b = p("(1 3)", 3);
        assert_eq!(a.compose(&b), p("(1 2 3)", 3));
    }

    #[test]
    fn conjugation_convention() {
        // (1 3)(2 3)(1 3) = (1 2) under apply-left-then-right.
        let a = p("(2 3)", 3);
        let b = p("(1 3)", 3);
        assert_eq!(a.conjugate_by(&b), p("(1 2)", 3));
    }

    #[test]
    fn inverse_and_pow() {
        let c = p("(1 2 3 4)", 4);
        assert!(c.compose(&c.inverse()).is_identity());
        assert_eq!(c.pow(5), c);
        assert_eq!(c.pow(-1), c.inverse());
        assert_eq!(c.order(), 4);
    }

    #[test]
    fn rejects_bad_cycles() {
        assert!(Perm::parse_cycles("(1 5)", 3).is_err());
        assert!(Perm::parse_cycles("(1 1)", 3).is_err());
        assert!(Perm::parse_cycles("1 2", 3).is_err());
    }
}
