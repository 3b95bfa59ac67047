//! Permutations of `{0, .., n-1}` acting on the right.
//!
//! Products read left to right: `p * q` applies `p` first, then `q`, so
//! `i^(pq) = (i^p)^q`. Points are 0-based in memory and 1-based in every
//! external form (cycle notation, JSON image arrays).

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u32>,
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection on {n} points"
                )));
            }
            seen[x] = true;
        }
        Ok(Perm { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Perm::from_images(images.clone()).is_ok());
        Perm { images }
    }

    /// Builds a permutation from 1-based images.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        let mut v = Vec::with_capacity(images.len());
        for &x in images {
            if x == 0 {
                return Err(Error::InvalidPermutation(
                    "1-based images must be positive".into(),
                ));
            }
            v.push((x - 1) as u32);
        }
        Perm::from_images(v)
    }

    /// Builds a permutation from 1-based disjoint cycles, e.g. `&[&[1, 2, 3]]`
    /// sends 1 to 2, 2 to 3 and 3 to 1.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &p) in cycle.iter().enumerate() {
                let q = cycle[(k + 1) % cycle.len()];
                if p == 0 || p > degree || q == 0 || q > degree || touched[p - 1] {
                    return Err(Error::InvalidPermutation(format!(
                        "bad cycle {cycle:?} on {degree} points"
                    )));
                }
                touched[p - 1] = true;
                images[p - 1] = (q - 1) as u32;
            }
        }
        Perm::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn one_based_images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &x)| i == x as usize)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree(), "degree mismatch in product");
        Perm {
            images: self
                .images
                .iter()
                .map(|&x| other.images[x as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm { images: inv }
    }

    pub fn pow(&self, mut k: u64) -> Perm {
        let mut base = self.clone();
        let mut acc = Perm::identity(self.degree());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            k >>= 1;
        }
        acc
    }

    /// The conjugate `by^-1 * self * by`.
    pub fn conjugate_by(&self, by: &Perm) -> Perm {
        by.inverse().then(self).then(by)
    }

    /// `[self, other] = self^-1 other^-1 self other`.
    pub fn commutator(&self, other: &Perm) -> Perm {
        self.inverse().then(&other.inverse()).then(self).then(other)
    }

    /// Non-trivial cycles in 1-based notation, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.image(start) == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = Vec::new();
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                cycle.push(p + 1);
                p = self.image(p);
            }
            out.push(cycle);
        }
        out
    }

    pub fn order(&self) -> u128 {
        fn gcd(a: u128, b: u128) -> u128 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        self.cycles().iter().fold(1u128, |acc, c| {
            let len = c.len() as u128;
            acc / gcd(acc, len) * len
        })
    }

    /// +1 for even permutations, -1 for odd ones.
    pub fn sign(&self) -> i8 {
        let transpositions: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        if transpositions.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Smallest moved point, if any.
    pub fn first_moved(&self) -> Option<usize> {
        self.images
            .iter()
            .enumerate()
            .find(|&(i, &x)| i != x as usize)
            .map(|(i, _)| i)
    }
}

impl Mul for &Perm {
    type Output = Perm;
    fn mul(self, rhs: &Perm) -> Perm {
        self.then(rhs)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (k, p) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm[{}]{}", self.degree(), self)
    }
}

impl Serialize for Perm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based_images().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        Perm::from_one_based(&v).map_err(serde::de::Error::custom)
    }
}
