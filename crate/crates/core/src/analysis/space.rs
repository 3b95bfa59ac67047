//! The GF(2)^9 picture of `Stab(1)/Rist(1)`.
//!
//! `Stab(1) <= X*Gamma` and `(X*Gamma)/(X*Gamma') = (Gamma/Gamma')^3`, so an
//! element of `Stab(1)` is recorded by the letter parities of its three
//! first-level states. Since `Rist(1) = X*Gamma'`, the image `U` of `Stab(1)` is
//! exactly `Gamma_1 = Stab(1)/Rist(1)`.

use num_bigint::BigUint;
use serde::Serialize;

use super::{pow_big, ser_big, Analyzer};
use crate::error::{Error, Result};
use crate::f2::{stab1_vector, F2Subspace, F2Vector};
use crate::perm::Perm;
use crate::permgroup::PermGroup;
use crate::words::{kernel_schreier_generators, Word, WreathRecursion};

/// `alpha, beta, delta, gamma` as words.
pub const STAB1_WORDS: [(&str, &str); 4] = [
    ("alpha", "acab"),
    ("beta", "abac"),
    ("delta", "bcba"),
    ("gamma", "babc"),
];

#[derive(Debug, Clone, Serialize)]
pub struct StabilizerSpace {
    /// `(name, word, image)` for `alpha, beta, delta, gamma`.
    pub vectors: Vec<(String, Word, F2Vector)>,
    /// Reidemeister-Schreier generators of `Stab(1)`.
    pub schreier_generators: Vec<Word>,
    /// Image of `Stab(1)`, spanned by the Schreier generators.
    pub u: F2Subspace,
    /// Whether `alpha, beta, delta, gamma` span `U` on their own.
    pub named_span_u: bool,
    /// Vectors vanishing outside the first subtree: the image of `Rist(1st vertex)`.
    pub w: F2Subspace,
    pub u_cap_w: F2Subspace,
    /// Image of `Stab(1) ∩ Gamma'`.
    pub derived: F2Subspace,
    /// `span{alpha~ + beta~, delta~ + gamma~}`.
    pub derived_expected: F2Subspace,
    #[serde(serialize_with = "ser_big")]
    pub gamma1: BigUint,
    /// `|Stab_{Gamma'}(1) / Rist_{Gamma'}(1)|`.
    #[serde(serialize_with = "ser_big")]
    pub base: BigUint,
}

pub fn stabilizer_space(recursion: &WreathRecursion) -> Result<StabilizerSpace> {
    let vectors = STAB1_WORDS
        .iter()
        .map(|(name, s)| {
            let w = Word::plain(s)?;
            let v = stab1_vector(recursion, &w)?;
            Ok((name.to_string(), w, v))
        })
        .collect::<Result<Vec<_>>>()?;
    let schreier = recursion.stab1_schreier_generators();

    // (state parities | total parity); total parity zero is membership in Gamma'
    let augmented = schreier
        .iter()
        .map(|w| Ok(stab1_vector(recursion, w)?.concat(&w.parity_vector())))
        .collect::<Result<Vec<_>>>()?;
    let aug = F2Subspace::span(12, &augmented)?;
    let u = aug.project(0, 9);
    let first_nine: Vec<F2Vector> = (0..9).map(|i| F2Vector::unit(12, i)).collect();
    let derived = aug
        .intersect(&F2Subspace::span(12, &first_nine)?)?
        .project(0, 9);

    let named: Vec<F2Vector> = vectors.iter().map(|(_, _, v)| v.clone()).collect();
    let named_span_u = F2Subspace::span(9, &named)? == u;
    let w = F2Subspace::span(9, &(0..3).map(|i| F2Vector::unit(9, i)).collect::<Vec<_>>())?;
    let u_cap_w = u.intersect(&w)?;
    let derived_expected =
        F2Subspace::span(9, &[named[0].add(&named[1])?, named[2].add(&named[3])?])?;
    Ok(StabilizerSpace {
        vectors,
        schreier_generators: schreier,
        gamma1: pow_big(2, u.dim()),
        base: pow_big(2, derived.dim()),
        u,
        named_span_u,
        w,
        u_cap_w,
        derived,
        derived_expected,
    })
}

/// Image of `Stab(2)` in `Gamma_1 = U`, i.e. the group `H_{1,2}`.
#[derive(Debug, Clone, Serialize)]
pub struct HSubspace {
    pub depth: usize,
    pub subspace: F2Subspace,
    /// Number of Reidemeister-Schreier generators of `Stab(2)` used.
    pub generators: usize,
    pub inside_u: bool,
    /// Whether `H` is `span{alpha~ + beta~, delta~ + gamma~}`.
    pub equals_derived_span: bool,
    /// Whether every generator lands in the level-2 stabilizer of `G_depth`.
    pub generators_in_stab2: bool,
    /// `|G_{depth-1} : [G_{depth-1}, G_{depth-1}]|`, for the record.
    #[serde(serialize_with = "ser_big")]
    pub abelianization_below: BigUint,
    /// `H` as a subspace of the named basis, in `(alpha, beta, delta, gamma)`
    /// coordinates.
    pub named_coordinates: Vec<Vec<u8>>,
}

/// Computes `H_{1,2}` from words: Reidemeister-Schreier generators of the
/// kernel of `Gamma -> G_2` (cosets = the 648 elements of `G_2`), each mapped
/// through the state-parity map. Truncations only enter as a sift check.
pub fn h_subspace(analyzer: &Analyzer, depth: usize) -> Result<HSubspace> {
    if depth < 2 {
        return Err(Error::Precondition(format!(
            "h_subspace needs depth >= 2, got {depth}"
        )));
    }
    let recursion = analyzer.recursion();
    let quotient = analyzer.quotient(depth)?;
    let below = analyzer.quotient(depth - 1)?;
    let abelianization_below = below.group().index_of(&below.derived())?;

    let level2 = recursion.generator_leaf_perms(2);
    let words = kernel_schreier_generators(&level2);
    let stab2 = quotient.level_stabilizer(2)?;
    let leaf_gens = recursion.generator_leaf_perms(depth);
    let mut generators_in_stab2 = true;
    let mut vectors = Vec::with_capacity(words.len());
    for w in &words {
        let g = w
            .letters()
            .iter()
            .fold(Perm::identity(quotient.degree()), |acc, l| {
                acc.then(&leaf_gens[l.index()])
            });
        if !stab2.contains(&g)? {
            generators_in_stab2 = false;
        }
        vectors.push(stab1_vector(recursion, w)?);
    }
    let subspace = F2Subspace::span(9, &vectors)?;
    let space = stabilizer_space(recursion)?;
    let named: Vec<F2Vector> = space.vectors.iter().map(|(_, _, v)| v.clone()).collect();
    Ok(HSubspace {
        depth,
        generators: words.len(),
        inside_u: subspace.is_subspace_of(&space.u)?,
        equals_derived_span: subspace == space.derived_expected,
        generators_in_stab2,
        abelianization_below,
        named_coordinates: coordinates(&named, &subspace)?,
        subspace,
    })
}

/// Coordinates of the basis of `sub` in terms of the independent `named`
/// vectors, found by trying all `2^k` combinations.
fn coordinates(named: &[F2Vector], sub: &F2Subspace) -> Result<Vec<Vec<u8>>> {
    let k = named.len();
    let mut out = Vec::new();
    for target in sub.basis() {
        let hit = (0u32..1 << k).find(|mask| {
            let mut acc = F2Vector::zero(target.dim());
            for (i, v) in named.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    acc.add_assign(v).expect("equal dimensions");
                }
            }
            &acc == target
        });
        match hit {
            Some(mask) => out.push((0..k).map(|i| (mask >> i & 1) as u8).collect()),
            None => {
                return Err(Error::Precondition(format!(
                    "{target} is outside the named span"
                )))
            }
        }
    }
    Ok(out)
}

/// Abelianization order `|G : [G, G]|`.
pub fn abelianization_order(group: &PermGroup) -> Result<BigUint> {
    group.index_of(&group.derived_subgroup())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_vectors_and_dimensions() {
        let s = stabilizer_space(&WreathRecursion::hanoi()).unwrap();
        assert_eq!(s.vectors[0].2.to_bits(), vec![1, 0, 0, 0, 1, 1, 1, 0, 0]);
        assert_eq!(s.vectors[3].2.to_bits(), vec![0, 1, 0, 0, 1, 0, 1, 0, 1]);
        assert_eq!(s.u.dim(), 4);
        assert!(s.named_span_u);
        assert_eq!(s.u_cap_w.dim(), 0);
        assert_eq!(s.derived, s.derived_expected);
        assert_eq!(s.gamma1, BigUint::from(16u32));
        assert_eq!(s.base, BigUint::from(4u32));
    }

    #[test]
    fn h_needs_depth_two() {
        let a = Analyzer::new();
        assert!(matches!(h_subspace(&a, 1), Err(Error::Precondition(_))));
    }
}
