//! Linear algebra over GF(2) with bit-packed vectors.
//!
//! Subspaces keep their basis in reduced row-echelon form, so two subspaces
//! are equal exactly when their stored bases are equal.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::words::{Word, WreathRecursion};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2Vector {
    dim: usize,
    words: Vec<u64>,
}

impl F2Vector {
    pub fn zero(dim: usize) -> Self {
        F2Vector {
            dim,
            words: vec![0; dim.div_ceil(64)],
        }
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = F2Vector::zero(dim);
        v.set(i, true);
        v
    }

    /// From 0/1 entries; anything non-zero counts as 1.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = F2Vector::zero(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.set(i, true);
            }
        }
        v
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.dim).map(|i| self.get(i) as u8).collect()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.dim, "coordinate {i} out of range {}", self.dim);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.dim, "coordinate {i} out of range {}", self.dim);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.dim, "coordinate {i} out of range {}", self.dim);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn leading(&self) -> Option<usize> {
        (0..self.dim).find(|&i| self.get(i))
    }

    pub fn add_assign(&mut self, other: &F2Vector) -> Result<()> {
        check_dim(self.dim, other.dim)?;
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        Ok(())
    }

    pub fn add(&self, other: &F2Vector) -> Result<F2Vector> {
        let mut out = self.clone();
        out.add_assign(other)?;
        Ok(out)
    }

    /// Concatenation `(self | other)`.
    pub fn concat(&self, other: &F2Vector) -> F2Vector {
        let mut out = F2Vector::zero(self.dim + other.dim);
        for i in (0..self.dim).filter(|&i| self.get(i)) {
            out.set(i, true);
        }
        for i in (0..other.dim).filter(|&i| other.get(i)) {
            out.set(self.dim + i, true);
        }
        out
    }

    /// Coordinates `start..end`.
    pub fn slice(&self, start: usize, end: usize) -> F2Vector {
        assert!(start <= end && end <= self.dim, "bad slice {start}..{end}");
        let mut out = F2Vector::zero(end - start);
        for i in (start..end).filter(|&i| self.get(i)) {
            out.set(i - start, true);
        }
        out
    }
}

fn check_dim(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left, right })
    }
}

impl fmt::Display for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for i in 0..self.dim {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.get(i) as u8)?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for F2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F2Vector{self}")
    }
}

impl Serialize for F2Vector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_bits().serialize(s)
    }
}

impl<'de> Deserialize<'de> for F2Vector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let bits = Vec::<u8>::deserialize(d)?;
        if bits.iter().any(|&b| b > 1) {
            return Err(serde::de::Error::custom("entries must be 0 or 1"));
        }
        Ok(F2Vector::from_bits(&bits))
    }
}

/// Reduces `rows` in place to reduced row-echelon form, dropping zero rows.
/// When `track` is given, the same row operations are applied to it, and the
/// tracked rows of every row that became zero are returned as dependencies.
fn rref(rows: &mut Vec<F2Vector>, mut track: Option<&mut Vec<F2Vector>>) -> Vec<F2Vector> {
    let dim = rows.first().map_or(0, |r| r.dim);
    let mut pivot_row = 0;
    for col in 0..dim {
        let Some(found) = (pivot_row..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(pivot_row, found);
        if let Some(t) = track.as_deref_mut() {
            t.swap(pivot_row, found);
        }
        for r in 0..rows.len() {
            if r != pivot_row && rows[r].get(col) {
                let p = rows[pivot_row].clone();
                rows[r].add_assign(&p).expect("rows share a dimension");
                if let Some(t) = track.as_deref_mut() {
                    let tp = t[pivot_row].clone();
                    t[r].add_assign(&tp)
                        .expect("tracking rows share a dimension");
                }
            }
        }
        pivot_row += 1;
    }
    let deps = match track {
        Some(t) => t.split_off(pivot_row),
        None => Vec::new(),
    };
    rows.truncate(pivot_row);
    deps
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Subspace {
    ambient: usize,
    basis: Vec<F2Vector>,
}

impl F2Subspace {
    pub fn zero(ambient: usize) -> Self {
        F2Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        F2Subspace {
            ambient,
            basis: (0..ambient).map(|i| F2Vector::unit(ambient, i)).collect(),
        }
    }

    pub fn span(ambient: usize, vectors: &[F2Vector]) -> Result<Self> {
        for v in vectors {
            check_dim(ambient, v.dim)?;
        }
        let mut rows = vectors.to_vec();
        rref(&mut rows, None);
        Ok(F2Subspace {
            ambient,
            basis: rows,
        })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The reduced row-echelon basis.
    pub fn basis(&self) -> &[F2Vector] {
        &self.basis
    }

    pub fn order_log2(&self) -> usize {
        self.dim()
    }

    pub fn contains(&self, v: &F2Vector) -> Result<bool> {
        check_dim(self.ambient, v.dim)?;
        let mut r = v.clone();
        for b in &self.basis {
            let lead = b.leading().expect("basis rows are non-zero");
            if r.get(lead) {
                r.add_assign(b)?;
            }
        }
        Ok(r.is_zero())
    }

    pub fn is_subspace_of(&self, other: &F2Subspace) -> Result<bool> {
        check_dim(self.ambient, other.ambient)?;
        for b in &self.basis {
            if !other.contains(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &F2Subspace) -> Result<F2Subspace> {
        check_dim(self.ambient, other.ambient)?;
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        F2Subspace::span(self.ambient, &all)
    }

    /// Intersection via the kernel of the stacked system `[A; B]`: every
    /// dependency `sum x_i a_i + sum y_j b_j = 0` yields `sum x_i a_i` in both.
    pub fn intersect(&self, other: &F2Subspace) -> Result<F2Subspace> {
        check_dim(self.ambient, other.ambient)?;
        let k = self.basis.len();
        let total = k + other.basis.len();
        let mut rows: Vec<F2Vector> = self.basis.iter().chain(&other.basis).cloned().collect();
        let mut track: Vec<F2Vector> = (0..total).map(|i| F2Vector::unit(total, i)).collect();
        let deps = rref(&mut rows, Some(&mut track));
        let mut out = Vec::with_capacity(deps.len());
        for dep in deps {
            let mut v = F2Vector::zero(self.ambient);
            for (i, a) in self.basis.iter().enumerate() {
                if dep.get(i) {
                    v.add_assign(a)?;
                }
            }
            out.push(v);
        }
        F2Subspace::span(self.ambient, &out)
    }

    /// Image under the coordinate projection onto `start..end`.
    pub fn project(&self, start: usize, end: usize) -> F2Subspace {
        let rows: Vec<F2Vector> = self.basis.iter().map(|b| b.slice(start, end)).collect();
        F2Subspace::span(end - start, &rows).expect("slices share a dimension")
    }
}

impl fmt::Debug for F2Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F2Subspace(dim {} in {}: ", self.dim(), self.ambient)?;
        f.debug_list().entries(&self.basis).finish()?;
        write!(f, ")")
    }
}

impl Serialize for F2Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw<'a> {
            ambient: usize,
            basis: &'a [F2Vector],
        }
        Raw {
            ambient: self.ambient,
            basis: &self.basis,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for F2Subspace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            ambient: usize,
            basis: Vec<F2Vector>,
        }
        let raw = Raw::deserialize(d)?;
        F2Subspace::span(raw.ambient, &raw.basis).map_err(serde::de::Error::custom)
    }
}

/// Image of a first-level-stabilizer word in `(Z/2)^{3d}`: the `(a, b, c)`
/// parities of its states at vertices `1..d`, subtree-major.
pub fn stab1_vector(recursion: &WreathRecursion, w: &Word) -> Result<F2Vector> {
    let (states, root) = recursion.word_states(w);
    if !root.is_identity() {
        return Err(Error::NotInStabilizer(w.to_string()));
    }
    Ok(states
        .iter()
        .fold(F2Vector::zero(0), |acc, s| acc.concat(&s.parity_vector())))
}
