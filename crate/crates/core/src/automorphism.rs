//! Finite-depth automorphisms of the rooted `d`-ary tree.
//!
//! A [`Portrait`] of depth `N` stores one permutation of `{1..d}` for every
//! vertex of level `< N`. A vertex `u = (u_1, .., u_n)` is moved to
//! `(u_1^{g(root)}, u_2^{g(u_1)}, .., u_n^{g(u_1..u_{n-1})})`, and portraits act
//! on the right: `compose(g, h)` is "first `g`, then `h`".

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Perm;

/// A vertex of the tree, stored with 0-based digits. External forms
/// (`Display`, `FromStr`, [`Vertex::one_based`]) use digits `1..=d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Vertex {
    digits: Vec<u32>,
}

impl Vertex {
    pub fn root() -> Self {
        Vertex { digits: Vec::new() }
    }

    /// From 1-based digits.
    pub fn new(digits: &[usize]) -> Result<Self> {
        let mut v = Vec::with_capacity(digits.len());
        for &d in digits {
            if d == 0 {
                return Err(Error::DigitOutOfRange { digit: 0, arity: 0 });
            }
            v.push((d - 1) as u32);
        }
        Ok(Vertex { digits: v })
    }

    pub fn from_zero_based(digits: Vec<u32>) -> Self {
        Vertex { digits }
    }

    /// The vertex of `level` whose 0-based lexicographic index is `index`.
    pub fn from_lex_index(arity: usize, level: usize, mut index: usize) -> Self {
        let mut digits = vec![0u32; level];
        for slot in digits.iter_mut().rev() {
            *slot = (index % arity) as u32;
            index /= arity;
        }
        Vertex { digits }
    }

    pub fn level(&self) -> usize {
        self.digits.len()
    }

    pub fn zero_based(&self) -> &[u32] {
        &self.digits
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.digits.iter().map(|&d| d as usize + 1).collect()
    }

    /// 0-based position among the `arity^level` vertices of this level.
    pub fn lex_index(&self, arity: usize) -> usize {
        self.digits
            .iter()
            .fold(0usize, |acc, &d| acc * arity + d as usize)
    }

    pub fn truncate(&self, level: usize) -> Vertex {
        Vertex {
            digits: self.digits[..level.min(self.digits.len())].to_vec(),
        }
    }

    pub fn child(&self, digit: u32) -> Vertex {
        let mut digits = self.digits.clone();
        digits.push(digit);
        Vertex { digits }
    }

    pub fn concat(&self, other: &Vertex) -> Vertex {
        let mut digits = self.digits.clone();
        digits.extend_from_slice(&other.digits);
        Vertex { digits }
    }

    fn check_arity(&self, arity: usize) -> Result<()> {
        match self.digits.iter().find(|&&d| d as usize >= arity) {
            Some(&d) => Err(Error::DigitOutOfRange {
                digit: d as usize + 1,
                arity,
            }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, d) in self.digits.iter().enumerate() {
            if k > 0 {
                f.write_char(',')?;
            }
            write!(f, "{}", d + 1)?;
        }
        Ok(())
    }
}

impl FromStr for Vertex {
    type Err = Error;

    /// Parses comma separated 1-based digits; the empty string is the root.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() {
            return Ok(Vertex::root());
        }
        let digits = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("vertex digit {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Vertex::new(&digits)
    }
}

fn level_offsets(arity: usize, depth: usize) -> Vec<usize> {
    // offsets[k] = number of vertices on levels < k
    let mut offsets = Vec::with_capacity(depth + 2);
    let mut total = 0usize;
    let mut width = 1usize;
    for _ in 0..=depth {
        offsets.push(total);
        total += width;
        width *= arity;
    }
    offsets
}

/// A depth-`N` truncation of a tree automorphism.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Portrait {
    arity: usize,
    depth: usize,
    /// Row-major: `labels[(offset(level) + index) * arity + x]` is the 0-based
    /// image of `x` under the label of that vertex.
    labels: Vec<u32>,
}

impl Portrait {
    pub fn identity(arity: usize, depth: usize) -> Self {
        assert!(arity >= 1, "arity must be positive");
        let internal = level_offsets(arity, depth)[depth];
        let mut labels = Vec::with_capacity(internal * arity);
        for _ in 0..internal {
            labels.extend(0..arity as u32);
        }
        Portrait {
            arity,
            depth,
            labels,
        }
    }

    /// Builds a portrait by asking for the label of every internal vertex.
    pub fn from_fn<F>(arity: usize, depth: usize, mut label: F) -> Result<Self>
    where
        F: FnMut(&Vertex) -> Perm,
    {
        let mut g = Portrait::identity(arity, depth);
        let mut idx = 0;
        for level in 0..depth {
            for j in 0..arity.pow(level as u32) {
                let p = label(&Vertex::from_lex_index(arity, level, j));
                if p.degree() != arity {
                    return Err(Error::Shape(format!(
                        "label of degree {} on a {arity}-ary tree",
                        p.degree()
                    )));
                }
                g.labels[idx * arity..(idx + 1) * arity].copy_from_slice(p.images());
                idx += 1;
            }
        }
        Ok(g)
    }

    /// Wreath recursion `g = (g_1, .., g_d) root`: states of depth `N - 1`
    /// below a root label, giving a portrait of depth `N`.
    pub fn from_states(root: &Perm, states: &[Portrait]) -> Result<Self> {
        let arity = root.degree();
        if states.len() != arity {
            return Err(Error::Shape(format!(
                "{} states for arity {arity}",
                states.len()
            )));
        }
        let sub_depth = states[0].depth;
        if states
            .iter()
            .any(|s| s.arity != arity || s.depth != sub_depth)
        {
            return Err(Error::Shape("states differ in shape".into()));
        }
        let depth = sub_depth + 1;
        let offsets = level_offsets(arity, depth);
        let sub_offsets = level_offsets(arity, sub_depth);
        let mut labels = Vec::with_capacity(offsets[depth] * arity);
        labels.extend_from_slice(root.images());
        for level in 1..depth {
            let width = arity.pow(level as u32 - 1);
            for s in states {
                let start = sub_offsets[level - 1] * arity;
                labels.extend_from_slice(&s.labels[start..start + width * arity]);
            }
        }
        Ok(Portrait {
            arity,
            depth,
            labels,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    fn offsets(&self) -> Vec<usize> {
        level_offsets(self.arity, self.depth)
    }

    #[inline]
    fn label_slice(&self, flat: usize) -> &[u32] {
        &self.labels[flat * self.arity..(flat + 1) * self.arity]
    }

    fn check_level(&self, level: usize) -> Result<()> {
        if level > self.depth {
            Err(Error::DepthExceeded {
                level,
                depth: self.depth,
            })
        } else {
            Ok(())
        }
    }

    fn check_shape(&self, other: &Portrait) -> Result<()> {
        if self.arity != other.arity || self.depth != other.depth {
            return Err(Error::Shape(format!(
                "portraits ({}-ary, depth {}) and ({}-ary, depth {})",
                self.arity, self.depth, other.arity, other.depth
            )));
        }
        Ok(())
    }

    /// Label at an internal vertex (level `< depth`).
    pub fn label(&self, v: &Vertex) -> Result<Perm> {
        v.check_arity(self.arity)?;
        if v.level() >= self.depth {
            return Err(Error::DepthExceeded {
                level: v.level(),
                depth: self.depth.saturating_sub(1),
            });
        }
        let flat = level_offsets(self.arity, v.level())[v.level()] + v.lex_index(self.arity);
        Ok(Perm::from_images_unchecked(self.label_slice(flat).to_vec()))
    }

    pub fn root_label(&self) -> Perm {
        if self.depth == 0 {
            Perm::identity(self.arity)
        } else {
            Perm::from_images_unchecked(self.label_slice(0).to_vec())
        }
    }

    pub fn is_identity(&self) -> bool {
        self.labels
            .chunks(self.arity)
            .all(|c| c.iter().enumerate().all(|(i, &x)| i == x as usize))
    }

    pub fn apply(&self, v: &Vertex) -> Result<Vertex> {
        v.check_arity(self.arity)?;
        self.check_level(v.level())?;
        let offsets = self.offsets();
        let mut out = Vec::with_capacity(v.level());
        let mut index = 0usize;
        for (level, &d) in v.zero_based().iter().enumerate() {
            let label = self.label_slice(offsets[level] + index);
            out.push(label[d as usize]);
            index = index * self.arity + d as usize;
        }
        Ok(Vertex::from_zero_based(out))
    }

    /// For each level `k <= depth`, the image of every level-`k` vertex, as
    /// lexicographic indices.
    fn level_images(&self, upto: usize) -> Vec<Vec<u32>> {
        let d = self.arity;
        let offsets = self.offsets();
        let mut out = Vec::with_capacity(upto + 1);
        out.push(vec![0u32]);
        for level in 0..upto {
            let prev = &out[level];
            let mut next = Vec::with_capacity(prev.len() * d);
            for (j, &img) in prev.iter().enumerate() {
                let label = self.label_slice(offsets[level] + j);
                for &x in label {
                    next.push(img * d as u32 + x);
                }
            }
            out.push(next);
        }
        out
    }

    /// First `self`, then `other`.
    pub fn compose(&self, other: &Portrait) -> Result<Portrait> {
        self.check_shape(other)?;
        let d = self.arity;
        let offsets = self.offsets();
        let mut labels = vec![0u32; self.labels.len()];
        // lexicographic image of each vertex of the current level under self
        let mut images = vec![0u32];
        for &base in &offsets[..self.depth] {
            let mut next = Vec::with_capacity(images.len() * d);
            for (j, &img) in images.iter().enumerate() {
                let g = self.label_slice(base + j);
                let h = other.label_slice(base + img as usize);
                let out = &mut labels[(base + j) * d..(base + j + 1) * d];
                for x in 0..d {
                    out[x] = h[g[x] as usize];
                    next.push(img * d as u32 + g[x]);
                }
            }
            images = next;
        }
        Ok(Portrait {
            arity: d,
            depth: self.depth,
            labels,
        })
    }

    pub fn inverse(&self) -> Portrait {
        let d = self.arity;
        let offsets = self.offsets();
        let mut labels = vec![0u32; self.labels.len()];
        let images = self.level_images(self.depth.saturating_sub(1));
        for level in 0..self.depth {
            let base = offsets[level];
            for (j, &img) in images[level].iter().enumerate() {
                let g = self.label_slice(base + j);
                let out = &mut labels[(base + img as usize) * d..(base + img as usize + 1) * d];
                for x in 0..d {
                    out[g[x] as usize] = x as u32;
                }
            }
        }
        Portrait {
            arity: d,
            depth: self.depth,
            labels,
        }
    }

    /// The section `g@u`: the depth `N - |u|` portrait read off below `u`.
    pub fn state_at(&self, u: &Vertex) -> Result<Portrait> {
        u.check_arity(self.arity)?;
        self.check_level(u.level())?;
        let d = self.arity;
        let offsets = self.offsets();
        let sub_depth = self.depth - u.level();
        let root_index = u.lex_index(d);
        let mut labels = Vec::with_capacity(level_offsets(d, sub_depth)[sub_depth] * d);
        for k in 0..sub_depth {
            let width = d.pow(k as u32);
            let level = u.level() + k;
            let start = offsets[level] + root_index * width;
            labels.extend_from_slice(&self.labels[start * d..(start + width) * d]);
        }
        Ok(Portrait {
            arity: d,
            depth: sub_depth,
            labels,
        })
    }

    /// The first-level states `(g@1, .., g@d)`.
    pub fn states(&self) -> Result<Vec<Portrait>> {
        self.check_level(1)?;
        (0..self.arity as u32)
            .map(|x| self.state_at(&Vertex::from_zero_based(vec![x])))
            .collect()
    }

    /// `u * g`: acts as `g` below `u` and trivially elsewhere.
    pub fn embed(u: &Vertex, g: &Portrait) -> Result<Portrait> {
        u.check_arity(g.arity)?;
        let d = g.arity;
        let depth = u.level() + g.depth;
        let mut out = Portrait::identity(d, depth);
        let offsets = out.offsets();
        let sub_offsets = g.offsets();
        let root_index = u.lex_index(d);
        for k in 0..g.depth {
            let width = d.pow(k as u32);
            let start = offsets[u.level() + k] + root_index * width;
            let src = sub_offsets[k];
            out.labels[start * d..(start + width) * d]
                .copy_from_slice(&g.labels[src * d..(src + width) * d]);
        }
        Ok(out)
    }

    /// Restriction to the first `depth` levels.
    pub fn truncate(&self, depth: usize) -> Result<Portrait> {
        self.check_level(depth)?;
        let end = self.offsets()[depth] * self.arity;
        Ok(Portrait {
            arity: self.arity,
            depth,
            labels: self.labels[..end].to_vec(),
        })
    }

    /// Permutation of the `d^n` level-`n` vertices, indexed lexicographically.
    pub fn leaf_permutation(&self, n: usize) -> Result<Perm> {
        self.check_level(n)?;
        let images = self.level_images(n);
        Ok(Perm::from_images_unchecked(images[n].clone()))
    }

    /// Graphviz rendering, one node per vertex labelled with its permutation in
    /// cycle notation. Leaves (level `N`) are drawn as points.
    pub fn to_dot(&self) -> String {
        let d = self.arity;
        let mut s =
            String::from("digraph portrait {\n  node [shape=box, fontname=\"monospace\"];\n");
        for level in 0..=self.depth {
            for j in 0..d.pow(level as u32) {
                let v = Vertex::from_lex_index(d, level, j);
                let id = node_id(&v);
                if level < self.depth {
                    let label = self.label(&v).expect("internal vertex");
                    let _ = writeln!(s, "  {id} [label=\"{label}\"];");
                } else {
                    let _ = writeln!(s, "  {id} [shape=point, label=\"\"];");
                }
                if level > 0 {
                    let parent = node_id(&v.truncate(level - 1));
                    let last = v.zero_based()[level - 1] + 1;
                    let _ = writeln!(s, "  {parent} -> {id} [label=\"{last}\"];");
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

fn node_id(v: &Vertex) -> String {
    if v.level() == 0 {
        "v".to_string()
    } else {
        let digits: Vec<String> = v.one_based().iter().map(|d| d.to_string()).collect();
        format!("v_{}", digits.join("_"))
    }
}

impl fmt::Debug for Portrait {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Portrait({}-ary, depth {}, root {})",
            self.arity,
            self.depth,
            self.root_label()
        )
    }
}

/// On-disk form: `{"arity": d, "depth": N, "labels": {"1,2": [1, 3, 2], ..}}`
/// with 1-based images. Trivial labels may be omitted on input.
#[derive(Serialize, Deserialize)]
struct PortraitJson {
    arity: usize,
    depth: usize,
    labels: BTreeMap<String, Vec<usize>>,
}

impl Serialize for Portrait {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut labels = BTreeMap::new();
        for level in 0..self.depth {
            for j in 0..self.arity.pow(level as u32) {
                let v = Vertex::from_lex_index(self.arity, level, j);
                let p = self.label(&v).expect("internal vertex");
                labels.insert(v.to_string(), p.one_based_images());
            }
        }
        PortraitJson {
            arity: self.arity,
            depth: self.depth,
            labels,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Portrait {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = PortraitJson::deserialize(d)?;
        if raw.arity == 0 {
            return Err(D::Error::custom("arity must be positive"));
        }
        let mut parsed = BTreeMap::new();
        for (key, images) in &raw.labels {
            let v: Vertex = key.parse().map_err(D::Error::custom)?;
            v.check_arity(raw.arity).map_err(D::Error::custom)?;
            if v.level() >= raw.depth {
                return Err(D::Error::custom(format!(
                    "label at {key:?} lies below depth {}",
                    raw.depth
                )));
            }
            let p = Perm::from_one_based(images).map_err(D::Error::custom)?;
            if p.degree() != raw.arity {
                return Err(D::Error::custom(format!(
                    "label at {key:?} has wrong degree"
                )));
            }
            parsed.insert(v, p);
        }
        Portrait::from_fn(raw.arity, raw.depth, |v| {
            parsed
                .get(v)
                .cloned()
                .unwrap_or_else(|| Perm::identity(raw.arity))
        })
        .map_err(D::Error::custom)
    }
}
