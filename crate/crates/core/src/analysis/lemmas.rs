//! One check per structural statement about the Hanoi towers group, each
//! evaluated at a finite depth.

use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};

use super::space::stabilizer_space;
use super::{big_json, expected, pow_big, Analyzer, ARITY};
use crate::automorphism::{Portrait, Vertex};
use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::permgroup::{restrict, PermGroup};
use crate::words::{relator, Letter, Word};

#[derive(Debug, Clone, Serialize)]
pub struct LemmaReport {
    pub id: String,
    pub depth: usize,
    pub computed: Value,
    pub expected: Value,
    pub pass: bool,
}

/// Every lemma id with a one-line statement, in report order.
pub const LEMMAS: [(&str, &str); 11] = [
    (
        "transrec",
        "Stab(u)@u = Gamma for |u| <= 2 (self-replicating)",
    ),
    (
        "branching",
        "(acbc)^2, (abcb)^2, c(baca)^2c equal 1*[a,b], 1*[a,c], 1*[b,c]",
    ),
    (
        "rist",
        "Rist(n) = X^n*Gamma' via the GF(2)^9 argument; Rist <= Stab in G_N",
    ),
    (
        "stab12",
        "Stab(1)/Stab(2) is the sign-sum kernel in (S3)^3, order 108",
    ),
    (
        "stabquot",
        "|Stab(n)/Stab(n+1)| = 2^(2*3^(n-1)) * 3^(3^n), also for Gamma'",
    ),
    ("ristquot", "Rist(n)Stab(n+1)/Stab(n+1) = (A3)^(3^n)"),
    (
        "elab",
        "Stab(n)/Rist(n)Stab(N) is elementary abelian of exponent 2",
    ),
    (
        "index",
        "|Stab(1)/Rist(1)| = 16 and |Stab_Gamma'(1)/Rist_Gamma'(1)| = 4",
    ),
    ("selfsim", "states of a, b, c are generators or trivial"),
    ("transitive", "G_N is transitive on the 3^N leaves"),
    (
        "presentation",
        "a^2, b^2, c^2 and tau^n(w_i), n <= 4, are trivial; ab is not",
    ),
];

fn report(id: &str, depth: usize, computed: Value, expected: Value, pass: bool) -> LemmaReport {
    LemmaReport {
        id: id.to_string(),
        depth,
        computed,
        expected,
        pass,
    }
}

pub(crate) fn verify(analyzer: &Analyzer, id: &str, depth: usize) -> Result<LemmaReport> {
    log::info!("verifying {id} at depth {depth}");
    match id {
        "transrec" => transrec(analyzer, depth),
        "branching" => branching(analyzer, depth),
        "rist" => rist(analyzer, depth),
        "stab12" => stab12(analyzer, depth),
        "stabquot" => stabquot(analyzer, depth),
        "ristquot" => ristquot(analyzer, depth),
        "elab" => elab(analyzer, depth),
        "index" => index(analyzer, depth),
        "selfsim" => selfsim(analyzer, depth),
        "transitive" => transitive(analyzer, depth),
        "presentation" => presentation(analyzer, depth),
        _ => Err(Error::UnknownLemma(id.to_string())),
    }
}

fn need_depth(id: &str, depth: usize, min: usize) -> Result<()> {
    if depth < min {
        Err(Error::Precondition(format!(
            "{id} needs depth >= {min}, got {depth}"
        )))
    } else {
        Ok(())
    }
}

fn transrec(analyzer: &Analyzer, depth: usize) -> Result<LemmaReport> {
    need_depth("transrec", depth, 2)?;
    let q = analyzer.quotient(depth)?;
    let mut rows = Vec::new();
    let mut pass = true;
    for level in 1..=2.min(depth - 1) {
        let below = analyzer.quotient(depth - level)?;
        let block = below.degree();
        for v in 0..ARITY.pow(level as u32) {
            let stab = q.group().vertex_stabilizer(ARITY, level, v)?;
            let states: Vec<Perm> = stab
                .generators()
                .iter()
                .map(|g| restrict(g, v * block, block))
                .collect();
            let projected = PermGroup::new(block, states)?;
            let ok =
                projected.order() == below.order() && projected.is_subgroup_of(below.group())?;
            pass &= ok;
            rows.push(json!({
                "vertex": Vertex::from_lex_index(ARITY, level, v).to_string(),
                "order": big_json(&projected.order()),
                "pass": ok,
            }));
        }
    }
    let expected: Vec<Value> = (1..=2.min(depth - 1))
        .map(|l| json!({"level": l, "order": big_json(&analyzer.quotient(depth - l).map(|g| g.order()).unwrap_or_default())}))
        .collect();
    Ok(report(
        "transrec",
        depth,
        json!(rows),
        json!(expected),
        pass,
    ))
}

fn branching(analyzer: &Analyzer, depth: usize) -> Result<LemmaReport> {
    need_depth("branching", depth, 1)?;
    let rec = analyzer.recursion();
    let first = Vertex::new(&[1])?;
    let cases = [
        ("(acbc)^2", "abab"),
        ("(abcb)^2", "acac"),
        ("c(baca)^2c", "bcbc"),
    ];
    let mut computed = Vec::new();
    let mut pass = true;
    for (lhs, inner) in cases {
        let w: Word = lhs.parse()?;
        let left = rec.evaluate(&w, depth);
        let right = Portrait::embed(&first, &rec.evaluate(&Word::plain(inner)?, depth - 1))?;
        let ok = left == right && w.parity_vector().is_zero();
        pass &= ok;
        computed.push(json!({"word": lhs, "state": inner, "equal": left == right, "in_derived": w.parity_vector().is_zero()}));
    }
    let expected: Vec<Value> = cases
        .iter()
        .map(|(l, r)| json!({"word": l, "state": r, "equal": true, "in_derived": true}))
        .collect();
    Ok(report(
        "branching",
        depth,
        json!(computed),
        json!(expected),
        pass,
    ))
}

fn rist(analyzer: &Analyzer, depth: usize) -> Result<LemmaReport> {
    let space = stabilizer_space(analyzer.recursion())?;
    let table = expected();
    let mut pass = space.u.dim() == 4
        && space.named_span_u
        && space.u_cap_w.dim() == 0
        && space.derived == space.derived_expected;
    let mut vectors = serde_json::Map::new();
    let mut expected_vectors = serde_json::Map::new();
    for (name, _, v) in &space.vectors {
        let want = table.bits(&format!("gf2.{name}"));
        pass &= v.to_bits() == want;
        vectors.insert(name.clone(), json!(v.to_bits()));
        expected_vectors.insert(name.clone(), json!(want));
    }
    let mut containments = Vec::new();
    for d in 2..=depth {
        for n in 1..d {
            let r = analyzer.rist_image(d, n)?;
            let s = analyzer.stab(d, n)?;
            let ok = r.group.is_subgroup_of(&s.group)?;
            pass &= ok;
            containments.push(json!({"depth": d, "n": n, "rist_in_stab": ok}));
        }
    }
    let computed = json!({
        "vectors": vectors,
        "dim_u": space.u.dim(),
        "dim_u_cap_w": space.u_cap_w.dim(),
        "derived_part": space.derived,
        "containments": containments,
    });
    let expected = json!({
        "vectors": expected_vectors,
        "dim_u": 4,
        "dim_u_cap_w": 0,
        "derived_part": space.derived_expected,
    });
    Ok(report("rist", depth, computed, expected, pass))
}

/// Sign of each of the three block permutations.
fn block_signs(g: &Perm) -> i8 {
    (0..ARITY)
        .map(|k| restrict(g, k * ARITY, ARITY).sign())
        .product()
}

fn stab12(analyzer: &Analyzer, depth: usize) -> Result<LemmaReport> {
    need_depth("stab12", depth, 2)?;
    let table = expected();
    let s = analyzer.stab(2, 1)?;
    // brute force: the sign-sum kernel in (S3)^3
    let s3: Vec<Perm> = all_perms(ARITY);
    let mut kernel_size = 0u32;
    for x in &s3 {
        for y in &s3 {
            for z in &s3 {
                if x.sign() * y.sign() * z.sign() == 1 {
                    kernel_size += 1;
                }
            }
        }
    }
    let in_kernel = s.group.generators().iter().all(|g| block_signs(g) == 1);
    let order = s.order();
    let mut pass =
        order == table.int("stab12.order") && in_kernel && order == BigUint::from(kernel_size);
    let rec = analyzer.recursion();
    let triple_of = |word: &str| -> Result<(Perm, Vec<String>)> {
        let p = rec.evaluate(&Word::plain(word)?, 2).leaf_permutation(2)?;
        let t = (0..ARITY)
            .map(|k| restrict(&p, k * ARITY, ARITY).to_string())
            .collect();
        Ok((p, t))
    };
    let mut triples = serde_json::Map::new();
    let mut want_triples = serde_json::Map::new();
    let mut printed = serde_json::Map::new();
    for (name, word) in super::space::STAB1_WORDS {
        let (p, triple) = triple_of(word)?;
        let want = table.strings(&format!("stab12.{name}"));
        pass &= triple == want && s.group.contains(&p)?;
        // delta and gamma are printed with the other orientation of 3-cycles
        if let Some(e) = table.get(&format!("stab12.{name}_printed")) {
            printed.insert(
                name.to_string(),
                json!({"printed": e.value, "matches_printed": json!(triple) == table.json(&e.key)}),
            );
        }
        triples.insert(name.to_string(), json!(triple));
        want_triples.insert(name.to_string(), json!(want));
    }
    let mut products = serde_json::Map::new();
    let mut want_products = serde_json::Map::new();
    for (key, word) in [("alpha_beta", "acababac"), ("delta_gamma", "bcbababc")] {
        let (_, triple) = triple_of(word)?;
        let want = table.strings(&format!("stab12.{key}"));
        pass &= triple == want;
        products.insert(key.to_string(), json!(triple));
        want_products.insert(key.to_string(), json!(want));
    }
    let computed = json!({
        "order": big_json(&order),
        "sign_kernel_order": kernel_size,
        "inside_sign_kernel": in_kernel,
        "images": triples,
        "products": products,
        "printed_comparison": printed,
    });
    let expected = json!({
        "order": table.json("stab12.order"),
        "sign_kernel_order": 108,
        "inside_sign_kernel": true,
        "images": want_triples,
        "products": want_products,
    });
    Ok(report("stab12", depth, computed, expected, pass))
}

fn all_perms(n: usize) -> Vec<Perm> {
    fn rec(prefix: &mut Vec<u32>, n: usize, out: &mut Vec<Perm>) {
        if prefix.len() == n {
            out.push(Perm::from_images(prefix.clone()).expect("bijection"));
            return;
        }
        for x in 0..n as u32 {
            if !prefix.contains(&x) {
                prefix.push(x);
                rec(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), n, &mut out);
    out
}

/// `2^(2*3^(n-1)) * 3^(3^n)`.
pub fn stab_quotient_formula(n: usize) -> BigUint {
    pow_big(2, 2 * ARITY.pow(n as u32 - 1)) * pow_big(3, ARITY.pow(n as u32))
}

fn stabquot(analyzer: &Analyzer, depth: usize) -> Result<LemmaReport> {
    need_depth("stabquot", depth, 2)?;
    let q = analyzer.quotient(depth)?;
    let derived = q.derived();
    let base = analyzer.stab(2, 1)?.order();
    let mut computed = Vec::new();
    let mut expected = Vec::new();
    let mut pass = true;
    for n in 1..depth {
        let full = q.level_stabilizer(n)?.order() / q.level_stabilizer(n + 1)?.order();
        let dn = derived.kernel_of_level_action(ARITY, n)?;
        let dn1 = derived.kernel_of_level_action(ARITY, n + 1)?;
        let prime = dn.order() / dn1.order();
        let subtree = num_traits::pow(base.clone(), ARITY.pow(n as u32 - 1));
        let want = stab_quotient_formula(n);
        pass &= full == want && prime == want && subtree == want;
        computed.push(json!({
            "n": n,
            "stab": big_json(&full),
            "stab_derived": big_json(&prime),
            "subtree_product": big_json(&subtree),
        }));
        expected.push(json!({
            "n": n,
            "stab": big_json(&want),
            "stab_derived": big_json(&want),
            "subtree_product": big_json(&want),
        }));
    }
    Ok(report(
        "stabquot",
        depth,
        json!(computed),
        json!(expected),
        pass,
    ))
}

fn ristquot(analyzer: &Analyzer, depth: usize) -> Result<LemmaReport> {
    need_depth("ristquot", depth, 2)?;
    let table = expected();
    let mut computed = Vec::new();
    let mut expected = Vec::new();
    let mut pass = true;
    for n in 1..=2.min(depth - 1) {
        let r = analyzer.rist_image(n + 1, n)?;
        let order = r.order();
        let elab3 = r.group.is_elementary_abelian(3);
        let want = table.int(&format!("ristquot.{n}"));
        pass &= order == want && elab3;
        computed.push(json!({"n": n, "order": big_json(&order), "elementary_abelian_3": elab3}));
        expected.push(json!({"n": n, "order": big_json(&want), "elementary_abelian_3": true}));
    }
    Ok(report(
        "ristquot",
        depth,
        json!(computed),
        json!(expected),
        pass,
    ))
}

fn elab(analyzer: &Analyzer, depth: usize) -> Result<LemmaReport> {
    need_depth("elab", depth, 2)?;
    let mut computed = Vec::new();
    let mut expected = Vec::new();
    let mut pass = true;
    for d in 2..=depth {
        for n in 1..d {
            let ok = analyzer.q_is_elementary_abelian_2(d, n)?;
            pass &= ok;
            computed.push(json!({"depth": d, "n": n, "elementary_abelian_2": ok}));
            expected.push(json!({"depth": d, "n": n, "elementary_abelian_2": true}));
        }
    }
    Ok(report(
        "elab",
        depth,
        json!(computed),
        json!(expected),
        pass,
    ))
}

fn index(analyzer: &Analyzer, depth: usize) -> Result<LemmaReport> {
    let space = stabilizer_space(analyzer.recursion())?;
    let table = expected();
    let want_g = table.int("index.stab_over_rist");
    let want_b = table.int("index.derived_stab_over_rist");
    let pass = space.gamma1 == want_g && space.base == want_b;
    Ok(report(
        "index",
        depth,
        json!({"stab_over_rist": big_json(&space.gamma1), "derived_stab_over_rist": big_json(&space.base)}),
        json!({"stab_over_rist": big_json(&want_g), "derived_stab_over_rist": big_json(&want_b)}),
        pass,
    ))
}

fn selfsim(analyzer: &Analyzer, depth: usize) -> Result<LemmaReport> {
    need_depth("selfsim", depth, 1)?;
    let rec = analyzer.recursion();
    let mut computed = serde_json::Map::new();
    let mut pass = true;
    for l in Letter::ALL {
        let w = Word::letter(l);
        let (states, _) = rec.word_states(&w);
        let syntactic = states.iter().all(|s| s.len() <= 1);
        let portrait = rec.evaluate(&w, depth);
        let semantic = portrait
            .states()?
            .iter()
            .zip(&states)
            .all(|(p, s)| *p == rec.evaluate(s, depth - 1));
        pass &= syntactic && semantic;
        computed.insert(
            l.as_char().to_string(),
            json!(states
                .iter()
                .map(|s| if s.is_empty() {
                    "1".to_string()
                } else {
                    s.to_string()
                })
                .collect::<Vec<_>>()),
        );
    }
    let expected = json!({"a": ["a", "1", "1"], "b": ["1", "b", "1"], "c": ["1", "1", "c"]});
    pass &= Value::Object(computed.clone()) == expected;
    Ok(report(
        "selfsim",
        depth,
        Value::Object(computed),
        expected,
        pass,
    ))
}

fn transitive(analyzer: &Analyzer, depth: usize) -> Result<LemmaReport> {
    need_depth("transitive", depth, 1)?;
    let q = analyzer.quotient(depth)?;
    let orbit = q.group().orbit(0).len();
    let want = q.degree();
    Ok(report(
        "transitive",
        depth,
        json!({"orbit": orbit}),
        json!({"orbit": want}),
        orbit == want,
    ))
}

fn presentation(analyzer: &Analyzer, depth: usize) -> Result<LemmaReport> {
    let rec = analyzer.recursion();
    let mut words: Vec<(String, Word)> = ["aa", "bb", "cc"]
        .iter()
        .map(|s| (s.to_string(), Word::plain(s).expect("letters")))
        .collect();
    for i in 1..=4 {
        let w = relator(i)?;
        for n in 0..=4 {
            words.push((format!("tau^{n}(w{i})"), w.tau_pow(n)));
        }
    }
    let mut computed = serde_json::Map::new();
    let mut expected = serde_json::Map::new();
    let mut pass = true;
    for (name, w) in &words {
        let ok = rec.check_relator(w, depth);
        pass &= ok;
        computed.insert(name.clone(), json!(ok));
        expected.insert(name.clone(), json!(true));
    }
    let ab = rec.check_relator(&Word::plain("ab")?, depth);
    pass &= depth == 0 || !ab;
    computed.insert("ab".into(), json!(ab));
    expected.insert("ab".into(), json!(depth == 0));
    Ok(report(
        "presentation",
        depth,
        Value::Object(computed),
        Value::Object(expected),
        pass,
    ))
}
