//! Permutation groups with lazily built stabilizer chains.
//!
//! Points of groups that come from tree actions are the lexicographically
//! indexed leaves of a depth-`N` tree, so the level-`n` vertices are the
//! blocks of `d^(N-n)` consecutive points.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::chain::StabChain;
use crate::error::{Error, Result};
use crate::perm::Perm;

pub type Permutation = Perm;

#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    chain: OnceLock<StabChain>,
}

/// `{degree, generators, order}` export.
#[derive(Debug, Clone, Serialize)]
pub struct GroupSummary {
    pub degree: usize,
    pub generators: Vec<Perm>,
    pub order: String,
}

impl PermGroup {
    /// Generators are deduplicated and identity-filtered.
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<Self> {
        let mut gens: Vec<Perm> = Vec::with_capacity(generators.len());
        for g in generators {
            if g.degree() != degree {
                return Err(Error::Shape(format!(
                    "generator of degree {} in a group of degree {degree}",
                    g.degree()
                )));
            }
            if !g.is_identity() && !gens.contains(&g) {
                gens.push(g);
            }
        }
        Ok(PermGroup {
            degree,
            generators: gens,
            chain: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            generators: Vec::new(),
            chain: OnceLock::new(),
        }
    }

    fn with_chain(degree: usize, generators: Vec<Perm>, chain: StabChain) -> Self {
        let cell = OnceLock::new();
        let _ = cell.set(chain);
        PermGroup {
            degree,
            generators,
            chain: cell,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn chain(&self) -> &StabChain {
        self.chain
            .get_or_init(|| StabChain::from_generators(self.degree, &self.generators, &[]))
    }

    pub fn order(&self) -> BigUint {
        self.chain().order()
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn summary(&self) -> GroupSummary {
        GroupSummary {
            degree: self.degree,
            generators: self.generators.clone(),
            order: self.order().to_string(),
        }
    }

    pub fn contains(&self, g: &Perm) -> Result<bool> {
        if g.degree() != self.degree {
            return Err(Error::Shape(format!(
                "element of degree {} tested against a group of degree {}",
                g.degree(),
                self.degree
            )));
        }
        Ok(self.chain().contains(g))
    }

    /// Index of the first generator of `self` outside `other`, if any.
    fn first_outside(&self, other: &PermGroup) -> Result<Option<usize>> {
        if self.degree != other.degree {
            return Err(Error::Shape(format!(
                "degrees {} and {}",
                self.degree, other.degree
            )));
        }
        Ok(self
            .generators
            .iter()
            .position(|g| !other.chain().contains(g)))
    }

    pub fn is_subgroup_of(&self, other: &PermGroup) -> Result<bool> {
        Ok(self.first_outside(other)?.is_none())
    }

    /// `|self| / |sub|`, after checking `sub <= self` by sifting.
    pub fn index_of(&self, sub: &PermGroup) -> Result<BigUint> {
        if let Some(i) = sub.first_outside(self)? {
            return Err(Error::NotASubgroup(i));
        }
        Ok(self.order() / sub.order())
    }

    pub fn orbit(&self, point: usize) -> Vec<usize> {
        let mut seen = vec![false; self.degree];
        let mut orbit = vec![point];
        seen[point] = true;
        let mut head = 0;
        while head < orbit.len() {
            let x = orbit[head];
            for g in &self.generators {
                let y = g.image(x);
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                }
            }
            head += 1;
        }
        orbit
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().enumerate().all(|(i, g)| {
            self.generators[i + 1..]
                .iter()
                .all(|h| g.then(h) == h.then(g))
        })
    }

    /// Abelian with every generator of order dividing `p`.
    pub fn is_elementary_abelian(&self, p: u64) -> bool {
        self.is_abelian() && self.generators.iter().all(|g| g.pow(p).is_identity())
    }

    /// Whether `self` is normalized by every generator of `parent`.
    pub fn is_normal_in(&self, parent: &PermGroup) -> Result<bool> {
        if !self.is_subgroup_of(parent)? {
            return Ok(false);
        }
        Ok(parent.generators.iter().all(|g| {
            self.generators
                .iter()
                .all(|n| self.chain().contains(&n.conjugate_by(g)))
        }))
    }

    /// Smallest normal subgroup containing `elements`, which must lie in `self`.
    pub fn normal_closure(&self, elements: &[Perm]) -> Result<PermGroup> {
        for (i, e) in elements.iter().enumerate() {
            if !self.contains(e)? {
                return Err(Error::NotMember(i));
            }
        }
        Ok(self.normal_closure_unchecked(elements))
    }

    fn normal_closure_unchecked(&self, elements: &[Perm]) -> PermGroup {
        let mut chain = StabChain::with_base_prefix(self.degree, &[]);
        let mut gens: Vec<Perm> = Vec::new();
        for e in elements {
            if chain.add_generator(e) {
                gens.push(e.clone());
            }
        }
        let mut head = 0;
        while head < gens.len() {
            let n = gens[head].clone();
            for g in &self.generators {
                let c = n.conjugate_by(g);
                if chain.add_generator(&c) {
                    gens.push(c);
                }
            }
            head += 1;
        }
        PermGroup::with_chain(self.degree, gens, chain)
    }

    /// Normal closure of the commutators of all generator pairs.
    pub fn derived_subgroup(&self) -> PermGroup {
        let mut comms = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            for h in &self.generators[i + 1..] {
                let c = g.commutator(h);
                if !c.is_identity() {
                    comms.push(c);
                }
            }
        }
        self.normal_closure_unchecked(&comms)
    }

    /// Pointwise stabilizer of `points`.
    pub fn pointwise_stabilizer(&self, points: &[usize]) -> Result<PermGroup> {
        if let Some(&p) = points.iter().find(|&&p| p >= self.degree) {
            return Err(Error::Shape(format!(
                "point {p} out of range {}",
                self.degree
            )));
        }
        let chain = StabChain::from_generators(self.degree, &self.generators, points);
        PermGroup::new(self.degree, chain.stabilizer_generators(points.len()))
    }

    /// The group acting on leaves together with the `d^level` level-`level`
    /// vertices, appended as points `degree..degree + d^level`.
    fn with_block_points(&self, arity: usize, level: usize) -> Result<(Vec<Perm>, usize)> {
        let depth = tree_depth(self.degree, arity)?;
        if level > depth {
            return Err(Error::DepthExceeded { level, depth });
        }
        let block = arity.pow((depth - level) as u32);
        let blocks = self.degree / block;
        let mut out = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            let bp = block_image(g, block)?;
            let mut images: Vec<u32> = g.images().to_vec();
            images.extend(bp.images().iter().map(|&b| b + self.degree as u32));
            out.push(Perm::from_images_unchecked(images));
        }
        Ok((out, blocks))
    }

    /// Kernel of the action on level-`level` vertices (the level stabilizer),
    /// with its own generating set.
    pub fn kernel_of_level_action(&self, arity: usize, level: usize) -> Result<PermGroup> {
        let (ext, blocks) = self.with_block_points(arity, level)?;
        let prefix: Vec<usize> = (self.degree..self.degree + blocks).collect();
        let chain = StabChain::from_generators(self.degree + blocks, &ext, &prefix);
        let gens = chain
            .stabilizer_generators(blocks)
            .iter()
            .map(|g| restrict(g, 0, self.degree))
            .collect();
        PermGroup::new(self.degree, gens)
    }

    /// Stabilizer of the level-`level` vertex with lexicographic index `vertex`.
    pub fn vertex_stabilizer(
        &self,
        arity: usize,
        level: usize,
        vertex: usize,
    ) -> Result<PermGroup> {
        let (ext, blocks) = self.with_block_points(arity, level)?;
        if vertex >= blocks {
            return Err(Error::Shape(format!("vertex {vertex} out of {blocks}")));
        }
        let chain = StabChain::from_generators(self.degree + blocks, &ext, &[self.degree + vertex]);
        let gens = chain
            .stabilizer_generators(1)
            .iter()
            .map(|g| restrict(g, 0, self.degree))
            .collect();
        PermGroup::new(self.degree, gens)
    }

    /// The permutation group induced on the level-`level` blocks.
    pub fn block_action(&self, arity: usize, level: usize) -> Result<PermGroup> {
        let depth = tree_depth(self.degree, arity)?;
        if level > depth {
            return Err(Error::DepthExceeded { level, depth });
        }
        let block = arity.pow((depth - level) as u32);
        let gens = self
            .generators
            .iter()
            .map(|g| block_image(g, block))
            .collect::<Result<Vec<_>>>()?;
        PermGroup::new(self.degree / block, gens)
    }
}

/// `N` with `arity^N = degree`.
pub fn tree_depth(degree: usize, arity: usize) -> Result<usize> {
    if arity < 2 {
        return Err(Error::InvalidBlocks(format!("arity {arity}")));
    }
    let mut n = 0;
    let mut m = 1usize;
    while m < degree {
        m *= arity;
        n += 1;
    }
    if m != degree {
        return Err(Error::InvalidBlocks(format!(
            "degree {degree} is not a power of {arity}"
        )));
    }
    Ok(n)
}

/// Action of `g` on consecutive blocks of `block` points.
pub fn block_image(g: &Perm, block: usize) -> Result<Perm> {
    let blocks = g.degree() / block;
    let mut images = Vec::with_capacity(blocks);
    for k in 0..blocks {
        let target = g.image(k * block) / block;
        if (k * block..(k + 1) * block).any(|p| g.image(p) / block != target) {
            return Err(Error::InvalidBlocks(format!(
                "block {} is split by {g}",
                k + 1
            )));
        }
        images.push(target as u32);
    }
    Perm::from_images(images)
}

/// Restriction of `g` to the `g`-invariant segment `start..start + len`,
/// relabelled to `0..len`.
pub fn restrict(g: &Perm, start: usize, len: usize) -> Perm {
    let images = (start..start + len)
        .map(|p| {
            let q = g.image(p);
            debug_assert!(q >= start && q < start + len, "segment is not invariant");
            (q - start) as u32
        })
        .collect();
    Perm::from_images_unchecked(images)
}

/// `g` acting on the segment `offset..offset + g.degree()` of `degree` points
/// and fixing everything else.
pub fn embed_at(g: &Perm, offset: usize, degree: usize) -> Perm {
    let mut images: Vec<u32> = (0..degree as u32).collect();
    for p in 0..g.degree() {
        images[offset + p] = (offset + g.image(p)) as u32;
    }
    Perm::from_images_unchecked(images)
}

pub fn group_order(g: &PermGroup) -> BigUint {
    g.order()
}

pub fn subgroup_index(g: &PermGroup, h: &PermGroup) -> Result<BigUint> {
    g.index_of(h)
}

/// Product of the fundamental orbit lengths equals the order.
pub fn orbit_product(g: &PermGroup) -> BigUint {
    g.chain()
        .orbit_lengths()
        .iter()
        .fold(BigUint::one(), |acc, &l| acc * BigUint::from(l))
}
