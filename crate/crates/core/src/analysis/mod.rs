//! Finite-depth verification of the structure of the Hanoi towers group.
//!
//! Everything is computed in the congruence quotients `G_N = Gamma/Stab(N)`,
//! realised as permutation groups on the `3^N` leaves, plus exact GF(2)
//! computations on words for the quotients that no `G_N` can see.

mod expected;
mod kernel;
mod lemmas;
mod space;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::permgroup::{embed_at, PermGroup};
use crate::words::{Letter, WreathRecursion};

pub use expected::{expected, Entry, ExpectedTable};
pub use kernel::{gamma_formula, q_formula, KLEIN_FOUR};
pub use kernel::{KernelReport, KernelRow, QEntry};
pub use lemmas::{stab_quotient_formula, LemmaReport, LEMMAS};
pub use space::{
    abelianization_order, h_subspace, stabilizer_space, HSubspace, StabilizerSpace, STAB1_WORDS,
};

pub const ARITY: usize = 3;
/// Default depth budget (degree 81).
pub const DEFAULT_DEPTH: usize = 4;
/// Hard cap (degree 729); depths above the default need an explicit opt-in.
pub const MAX_DEPTH: usize = 6;

/// `G_N` with the images of `a, b, c`.
#[derive(Debug)]
pub struct TruncatedQuotient {
    depth: usize,
    group: PermGroup,
    generators: Vec<Perm>,
    derived: OnceLock<Arc<PermGroup>>,
    stabs: Mutex<HashMap<usize, Arc<PermGroup>>>,
}

impl TruncatedQuotient {
    pub fn build(recursion: &WreathRecursion, depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::Precondition(
                "quotient depth must be at least 1".into(),
            ));
        }
        if depth > MAX_DEPTH {
            return Err(Error::ResourceCap(format!(
                "depth {depth} exceeds the cap {MAX_DEPTH} (degree {})",
                ARITY.pow(MAX_DEPTH as u32)
            )));
        }
        let generators = recursion.generator_leaf_perms(depth);
        let group = PermGroup::new(ARITY.pow(depth as u32), generators.clone())?;
        Ok(TruncatedQuotient {
            depth,
            group,
            generators,
            derived: OnceLock::new(),
            stabs: Mutex::new(HashMap::new()),
        })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn degree(&self) -> usize {
        self.group.degree()
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn generator(&self, l: Letter) -> &Perm {
        &self.generators[l.index()]
    }

    pub fn order(&self) -> BigUint {
        self.group.order()
    }

    /// Image of the commutator subgroup, i.e. `[G_N, G_N]`.
    pub fn derived(&self) -> Arc<PermGroup> {
        self.derived
            .get_or_init(|| Arc::new(self.group.derived_subgroup()))
            .clone()
    }

    /// Image of `Stab(n)`: the kernel of the action on level `n`.
    pub fn level_stabilizer(&self, n: usize) -> Result<Arc<PermGroup>> {
        if n > self.depth {
            return Err(Error::DepthExceeded {
                level: n,
                depth: self.depth,
            });
        }
        if let Some(g) = self.stabs.lock().expect("stab cache").get(&n) {
            return Ok(g.clone());
        }
        let g = Arc::new(self.group.kernel_of_level_action(ARITY, n)?);
        self.stabs.lock().expect("stab cache").insert(n, g.clone());
        Ok(g)
    }

    pub fn stab(&self, n: usize) -> Result<SubgroupHandle> {
        Ok(SubgroupHandle {
            depth: self.depth,
            group: self.level_stabilizer(n)?,
            provenance: Provenance::Stab(n),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Stab(usize),
    Rist(usize),
    Derived,
    Closure,
    Custom,
}

/// A subgroup of some `G_N`, tagged with where it came from.
#[derive(Debug, Clone)]
pub struct SubgroupHandle {
    pub depth: usize,
    pub group: Arc<PermGroup>,
    pub provenance: Provenance,
}

impl SubgroupHandle {
    pub fn order(&self) -> BigUint {
        self.group.order()
    }
}

/// Caches quotients, rigid stabilizer images and derived subgroups across a
/// run. Safe to share between threads.
#[derive(Debug)]
pub struct Analyzer {
    recursion: WreathRecursion,
    depth_cap: usize,
    quotients: Mutex<HashMap<usize, Arc<TruncatedQuotient>>>,
    rists: Mutex<HashMap<(usize, usize), Arc<PermGroup>>>,
}

impl Default for Analyzer {
    fn default() -> Self {
        Analyzer::new()
    }
}

impl Analyzer {
    pub fn new() -> Self {
        Analyzer::with_depth_cap(DEFAULT_DEPTH)
    }

    /// `cap` is clamped to [`MAX_DEPTH`].
    pub fn with_depth_cap(cap: usize) -> Self {
        Analyzer {
            recursion: WreathRecursion::hanoi(),
            depth_cap: cap.min(MAX_DEPTH),
            quotients: Mutex::new(HashMap::new()),
            rists: Mutex::new(HashMap::new()),
        }
    }

    pub fn recursion(&self) -> &WreathRecursion {
        &self.recursion
    }

    pub fn depth_cap(&self) -> usize {
        self.depth_cap
    }

    pub(crate) fn check_depth(&self, depth: usize) -> Result<()> {
        if depth > self.depth_cap {
            Err(Error::ResourceCap(format!(
                "depth {depth} is above the budget {} (degree {}); raise the budget explicitly",
                self.depth_cap,
                ARITY.pow(depth as u32)
            )))
        } else {
            Ok(())
        }
    }

    pub fn quotient(&self, depth: usize) -> Result<Arc<TruncatedQuotient>> {
        self.check_depth(depth)?;
        let mut cache = self.quotients.lock().expect("quotient cache");
        if let Some(q) = cache.get(&depth) {
            return Ok(q.clone());
        }
        log::debug!("building G_{depth}");
        let q = Arc::new(TruncatedQuotient::build(&self.recursion, depth)?);
        cache.insert(depth, q.clone());
        Ok(q)
    }

    pub fn stab(&self, depth: usize, n: usize) -> Result<SubgroupHandle> {
        self.quotient(depth)?.stab(n)
    }

    /// Image of `Rist(n) = X^n * Gamma'` in `G_N`: copies of `[G_{N-n}, G_{N-n}]`
    /// placed below every level-`n` vertex.
    pub fn rist_image(&self, depth: usize, n: usize) -> Result<SubgroupHandle> {
        if n == 0 || n >= depth {
            return Err(Error::DepthExceeded { level: n, depth });
        }
        self.check_depth(depth)?;
        if let Some(g) = self.rists.lock().expect("rist cache").get(&(depth, n)) {
            return Ok(SubgroupHandle {
                depth,
                group: g.clone(),
                provenance: Provenance::Rist(n),
            });
        }
        let below = self.quotient(depth - n)?;
        let derived = below.derived();
        let block = below.degree();
        let degree = ARITY.pow(depth as u32);
        let mut gens = Vec::new();
        for u in 0..ARITY.pow(n as u32) {
            for c in derived.generators() {
                gens.push(embed_at(c, u * block, degree));
            }
        }
        let group = Arc::new(PermGroup::new(degree, gens)?);
        self.rists
            .lock()
            .expect("rist cache")
            .insert((depth, n), group.clone());
        Ok(SubgroupHandle {
            depth,
            group,
            provenance: Provenance::Rist(n),
        })
    }

    /// `|Q_{n,N}| = |Stab(n) : (X^n * Gamma') Stab(N)|`, computed as the index
    /// of the rigid stabilizer image in the level stabilizer of `G_N`.
    pub fn q_order(&self, depth: usize, n: usize) -> Result<BigUint> {
        let stab = self.stab(depth, n)?;
        let rist = self.rist_image(depth, n)?;
        stab.group.index_of(&rist.group)
    }

    /// Whether `Q_{n,N}` is an elementary abelian 2-group: squares and
    /// commutators of level-stabilizer generators fall into the rigid
    /// stabilizer image.
    pub fn q_is_elementary_abelian_2(&self, depth: usize, n: usize) -> Result<bool> {
        let stab = self.stab(depth, n)?;
        let rist = self.rist_image(depth, n)?;
        let gens = stab.group.generators();
        for (i, s) in gens.iter().enumerate() {
            if !rist.group.contains(&s.then(s))? {
                return Ok(false);
            }
            for t in &gens[i + 1..] {
                if !rist.group.contains(&s.commutator(t))? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn h_subspace(&self, depth: usize) -> Result<HSubspace> {
        space::h_subspace(self, depth)
    }

    pub fn kernel_report(&self, n_max: usize, depth: usize) -> Result<KernelReport> {
        kernel::kernel_report(self, n_max, depth)
    }

    pub fn verify(&self, id: &str, depth: usize) -> Result<LemmaReport> {
        lemmas::verify(self, id, depth)
    }

    /// `(N, |Q_{n,N}|)` for `n < N <= depth`, one row per `n <= n_max`.
    pub fn q_table(&self, n_max: usize, depth: usize) -> Result<Vec<(usize, Vec<QEntry>)>> {
        (1..=n_max)
            .map(|n| {
                let row = (n + 1..=depth)
                    .map(|d| {
                        Ok(QEntry {
                            depth: d,
                            order: self.q_order(d, n)?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok((n, row))
            })
            .collect()
    }
}

/// `G_N` on its own, outside any cache.
pub fn build_quotient(depth: usize) -> Result<TruncatedQuotient> {
    TruncatedQuotient::build(&WreathRecursion::hanoi(), depth)
}

/// Integers up to `u64` as JSON numbers, larger ones as decimal strings.
pub fn big_json(x: &BigUint) -> Value {
    match u64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

pub(crate) fn ser_big<S: serde::Serializer>(
    x: &BigUint,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    big_json(x).serialize(s)
}

pub(crate) fn pow_big(base: u64, exp: usize) -> BigUint {
    num_traits::pow(BigUint::from(base), exp)
}
