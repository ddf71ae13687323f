//! Permutations of `{0, .., degree-1}`, printed 1-based in cycle notation.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("image table is not a bijection")]
    NotBijection,
    #[error("bad cycle notation {0:?}")]
    Syntax(String),
    #[error("point {point} exceeds degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Permutation {
        Permutation { images: (0..degree).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Permutation, PermError> {
        let mut hit = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || hit[i] {
                return Err(PermError::NotBijection);
            }
            hit[i] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from 1-based cycles, e.g. `[[1, 5], [2, 6], [3, 4]]`.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Permutation, PermError> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            for &p in cycle {
                if p == 0 || p > degree {
                    return Err(PermError::PointOutOfRange { point: p, degree });
                }
                if used[p - 1] {
                    return Err(PermError::NotBijection);
                }
                used[p - 1] = true;
            }
            for (k, &p) in cycle.iter().enumerate() {
                images[p - 1] = cycle[(k + 1) % cycle.len()] - 1;
            }
        }
        Ok(Permutation { images })
    }

    /// Transposition of the 0-based points `a` and `b`.
    pub fn swap(degree: usize, a: usize, b: usize) -> Permutation {
        let mut p = Permutation::identity(degree);
        p.images.swap(a, b);
        p
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`: maps `i` to `self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(Permutation { images: other.images.iter().map(|&j| self.images[j]).collect() })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    /// Disjoint cycles of length ≥ 2, 0-based, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut cur = self.images[start];
            while cur != start {
                seen[cur] = true;
                cycle.push(cur);
                cur = self.images[cur];
            }
            out.push(cycle);
        }
        out
    }

    /// Parses cycle notation against a known degree: `()`, `(1,2)(3,4,5)`.
    pub fn parse_cycles(degree: usize, text: &str) -> Result<Permutation, PermError> {
        let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || PermError::Syntax(text.clone());
        if text == "()" {
            return Ok(Permutation::identity(degree));
        }
        let mut cycles = Vec::new();
        let mut rest = text.as_str();
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(bad)?;
            let close = body.find(')').ok_or_else(bad)?;
            let points = body[..close]
                .split(',')
                .map(|s| s.parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()?;
            cycles.push(points);
            rest = &body[close + 1..];
        }
        Permutation::from_cycles(degree, &cycles)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            f.write_str("(")?;
            for (k, p) in cycle.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", p + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    /// Parses cycle notation with the degree inferred from the largest point.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let max = s.split(|c: char| !c.is_ascii_digit()).filter_map(|t| t.parse::<usize>().ok()).max().unwrap_or(0);
        Permutation::parse_cycles(max, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn perm(degree: usize, s: &str) -> Permutation {
        Permutation::parse_cycles(degree, s).unwrap()
    }

    #[test]
    fn involution_squares_to_identity() {
        let t = perm(3, "(1,2)");
        assert!(t.compose(&t).unwrap().is_identity());
    }

    #[test]
    fn compose_matches_image_table() {
        // (1,2) ∘ (2,3): 1 -> 1 -> 2, 2 -> 3 -> 3, 3 -> 2 -> 1.
        let a = perm(3, "(1,2)");
        let b = perm(3, "(2,3)");
        let c = a.compose(&b).unwrap();
        assert_eq!(c.images(), &[1, 2, 0]);
        assert_eq!(c.to_string(), "(1,2,3)");
        for i in 0..3 {
            assert_eq!(c.apply(i), a.apply(b.apply(i)));
        }
    }

    #[test]
    fn identity_is_neutral() {
        let p = perm(5, "(1,4,2)(3,5)");
        let id = Permutation::identity(5);
        assert_eq!(id.compose(&p).unwrap(), p);
        assert_eq!(p.compose(&id).unwrap(), p);
    }

    #[test]
    fn errors() {
        assert_eq!(perm(2, "(1,2)").compose(&Permutation::identity(3)), Err(PermError::DegreeMismatch(2, 3)));
        assert_eq!(Permutation::from_images(vec![0, 0]), Err(PermError::NotBijection));
        assert!(Permutation::parse_cycles(3, "(1,2,4)").is_err());
        assert!(Permutation::parse_cycles(3, "(1,2)(2,3)").is_err());
        assert!(Permutation::parse_cycles(3, "1,2").is_err());
    }

    #[test]
    fn cycle_notation_round_trip() {
        let p = perm(8, "(1,5)(2,6)(3,4)");
        assert_eq!(p.to_string(), "(1,5)(2,6)(3,4)");
        assert_eq!(Permutation::identity(4).to_string(), "()");
        assert_eq!("(2,3)".parse::<Permutation>().unwrap().degree(), 3);
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Permutation::from_images(v).unwrap())
    }

    proptest! {
        #[test]
        fn inverse_and_display_round_trip(p in arb_perm(9), q in arb_perm(9)) {
            prop_assert!(p.compose(&p.inverse()).unwrap().is_identity());
            prop_assert_eq!(Permutation::parse_cycles(9, &p.to_string()).unwrap(), p.clone());
            let pq = p.compose(&q).unwrap();
            prop_assert_eq!(pq.inverse(), q.inverse().compose(&p.inverse()).unwrap());
        }
    }
}
