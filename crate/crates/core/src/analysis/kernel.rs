//! Bookkeeping for the exact sequences
//! `1 -> K_{n,n+1} -> Gamma_{n+1} -> Gamma_n -> Q_{n,n+1} -> 1`,
//! with `Gamma_n = Stab(n)/Rist(n)`.
//!
//! `|Q|` comes from truncations, `|Gamma_1|` and `|K|` from the GF(2)^9
//! picture; `|Gamma_n|` is never a truncated index.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

use super::space::{stabilizer_space, HSubspace};
use super::{ser_big, Analyzer, ARITY};
use crate::error::{Error, Result};

pub const KLEIN_FOUR: &str = "Klein four-group";

#[derive(Debug, Clone, Serialize)]
pub struct QEntry {
    pub depth: usize,
    #[serde(serialize_with = "ser_big")]
    pub order: BigUint,
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelRow {
    pub n: usize,
    /// `|Q_{n,N}|` for every truncation `N` examined.
    pub q: Vec<QEntry>,
    #[serde(serialize_with = "ser_big")]
    pub q_next: BigUint,
    #[serde(serialize_with = "ser_opt_big")]
    pub q_next2: Option<BigUint>,
    #[serde(serialize_with = "ser_big")]
    pub k: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub gamma_n: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub gamma_next: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub h: BigUint,
    pub q_stable: bool,
    /// `Q_{n,N}` is elementary abelian of exponent 2 for every examined `N`.
    pub elementary_abelian_2: bool,
    pub sequence_consistent: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelReport {
    pub n_max: usize,
    pub depth: usize,
    #[serde(serialize_with = "ser_big")]
    pub gamma1: BigUint,
    #[serde(serialize_with = "ser_big")]
    pub base: BigUint,
    pub rows: Vec<KernelRow>,
    pub h_subspace: HSubspace,
    #[serde(serialize_with = "ser_opt_big")]
    pub kernel_order: Option<BigUint>,
    pub kernel_type: Option<String>,
    pub pass: bool,
    pub first_failure: Option<String>,
}

fn ser_opt_big<S: serde::Serializer>(
    x: &Option<BigUint>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => ser_big(v, s),
        None => s.serialize_none(),
    }
}

pub(crate) fn kernel_report(
    analyzer: &Analyzer,
    n_max: usize,
    depth: usize,
) -> Result<KernelReport> {
    if n_max == 0 {
        return Err(Error::Precondition("n_max must be at least 1".into()));
    }
    if depth < n_max + 2 {
        return Err(Error::Precondition(format!(
            "depth {depth} is below n_max + 2 = {}",
            n_max + 2
        )));
    }
    analyzer.check_depth(depth)?;
    let space = stabilizer_space(analyzer.recursion())?;
    let mut first_failure: Option<String> = None;
    let mut fail = |what: String| {
        if first_failure.is_none() {
            first_failure = Some(what);
        }
    };
    if space.u_cap_w.dim() != 0 || space.derived != space.derived_expected {
        fail("rist".into());
    }

    let mut rows = Vec::with_capacity(n_max);
    let mut gamma_n = space.gamma1.clone();
    for n in 1..=n_max {
        log::info!("kernel report: row n = {n}");
        let mut q = Vec::new();
        let mut elab = true;
        for d in n + 1..=depth {
            q.push(QEntry {
                depth: d,
                order: analyzer.q_order(d, n)?,
            });
            elab &= analyzer.q_is_elementary_abelian_2(d, n)?;
        }
        let q_next = q[0].order.clone();
        let q_next2 = q.get(1).map(|e| e.order.clone());
        let q_stable = q.iter().all(|e| e.order == q_next);
        let k = num_traits::pow(space.base.clone(), ARITY.pow(n as u32));
        let product = &gamma_n * &k;
        let sequence_consistent = !q_next.is_zero() && (&product % &q_next).is_zero();
        let gamma_next = &product / &q_next;
        let h = if (&gamma_next % &k).is_zero() {
            &gamma_next / &k
        } else {
            BigUint::zero()
        };
        if !q_stable {
            fail(format!("q-stability at n = {n}"));
        }
        if !elab {
            fail(format!("elab at n = {n}"));
        }
        if !sequence_consistent || h.is_zero() {
            fail(format!("exact sequence at n = {n}"));
        }
        if h != BigUint::from(4u32) {
            fail(format!("|H_{{{n},{}}}| = {h}", n + 1));
        }
        rows.push(KernelRow {
            n,
            q,
            q_next,
            q_next2,
            k,
            gamma_n: gamma_n.clone(),
            gamma_next: gamma_next.clone(),
            h,
            q_stable,
            elementary_abelian_2: elab,
            sequence_consistent,
        });
        gamma_n = gamma_next;
    }

    let h_subspace = analyzer.h_subspace(depth)?;
    if h_subspace.subspace.dim() != 2 || !h_subspace.inside_u || !h_subspace.generators_in_stab2 {
        fail("h_subspace".into());
    }

    let pass = first_failure.is_none();
    Ok(KernelReport {
        n_max,
        depth,
        gamma1: space.gamma1,
        base: space.base,
        rows,
        h_subspace,
        kernel_order: pass.then(|| BigUint::from(4u32)),
        kernel_type: pass.then(|| KLEIN_FOUR.to_string()),
        pass,
        first_failure,
    })
}

/// `|Q_{n,n+1}| = 2^(2*3^(n-1))`.
pub fn q_formula(n: usize) -> BigUint {
    super::pow_big(2, 2 * ARITY.pow(n as u32 - 1))
}

/// `|Gamma_n| = 2^(2*(3^(n-1)+1))`.
pub fn gamma_formula(n: usize) -> BigUint {
    super::pow_big(2, 2 * (ARITY.pow(n as u32 - 1) + 1))
}
