//! Spec-level examples and independent brute-force oracles for the values the
//! analysis pipeline computes.

use std::collections::{HashMap, HashSet};

use hanoi_kernel::analysis::{
    abelianization_order, build_quotient, expected, gamma_formula, q_formula, stabilizer_space,
    Analyzer,
};
use hanoi_kernel::f2::stab1_vector;
use hanoi_kernel::game;
use hanoi_kernel::permgroup::{block_image, embed_at};
use hanoi_kernel::words::relator;
use hanoi_kernel::{
    Error, F2Subspace, F2Vector, Letter, Perm, PermGroup, Portrait, Vertex, Word, WreathRecursion,
};
use num_bigint::BigUint;

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

fn closure(degree: usize, gens: &[Perm]) -> HashSet<Perm> {
    let id = Perm::identity(degree);
    let mut seen = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.then(g);
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen
}

#[test]
fn portrait_examples() {
    let rec = WreathRecursion::hanoi();
    let v = Vertex::new(&[2, 1, 3, 2, 2, 1]).unwrap();
    assert_eq!(
        rec.evaluate(&w("b"), 6).apply(&v).unwrap(),
        Vertex::new(&[2, 3, 3, 2, 2, 1]).unwrap()
    );
    assert_eq!(Portrait::identity(3, 6).apply(&v).unwrap(), v);
    let ones = Vertex::new(&[1, 1, 1, 1]).unwrap();
    assert_eq!(rec.evaluate(&w("a"), 4).apply(&ones).unwrap(), ones);
    assert!(matches!(
        rec.evaluate(&w("a"), 3).apply(&ones),
        Err(Error::DepthExceeded { .. })
    ));

    let a = rec.evaluate(&w("a"), 4);
    assert!(a.compose(&a).unwrap().is_identity());
    assert_eq!(a.inverse(), a);
    assert_eq!(
        rec.evaluate(&w("ab"), 4).inverse(),
        rec.evaluate(&w("ba"), 4)
    );
    assert_eq!(
        rec.evaluate(&w("ac"), 4)
            .compose(&rec.evaluate(&w("bc"), 4))
            .unwrap(),
        rec.evaluate(&w("acbc"), 4)
    );
    assert!(a.compose(&Portrait::identity(3, 3)).is_err());

    assert_eq!(
        a.state_at(&Vertex::new(&[1]).unwrap()).unwrap(),
        rec.evaluate(&w("a"), 3)
    );
    assert!(a
        .state_at(&Vertex::new(&[2]).unwrap())
        .unwrap()
        .is_identity());
    let first = Vertex::new(&[1]).unwrap();
    assert_eq!(
        Portrait::embed(&first, &rec.evaluate(&w("[a,b]"), 3)).unwrap(),
        rec.evaluate(&w("(acbc)^2"), 4)
    );
    assert_eq!(Portrait::embed(&Vertex::root(), &a).unwrap(), a);

    assert_eq!(
        a.leaf_permutation(1).unwrap(),
        Perm::from_cycles(3, &[&[2, 3]]).unwrap()
    );
    assert!(a.leaf_permutation(5).is_err());
}

#[test]
fn leaf_permutation_of_c_matches_pointwise_application() {
    let rec = WreathRecursion::hanoi();
    let c = rec.evaluate(&w("c"), 2);
    let images: Vec<u32> = (0..9)
        .map(|i| {
            c.apply(&Vertex::from_lex_index(3, 2, i))
                .unwrap()
                .lex_index(3) as u32
        })
        .collect();
    let oracle = Perm::from_images(images).unwrap();
    assert_eq!(c.leaf_permutation(2).unwrap(), oracle);
    // frozen from the oracle above
    assert_eq!(oracle.one_based_images(), vec![4, 5, 6, 1, 2, 3, 8, 7, 9]);
}

#[test]
fn portrait_json_and_dot() {
    let rec = WreathRecursion::hanoi();
    let p = rec.evaluate(&w("acab"), 3);
    let text = serde_json::to_string(&p).unwrap();
    let back: Portrait = serde_json::from_str(&text).unwrap();
    assert_eq!(back, p);
    let sparse: Portrait =
        serde_json::from_str(r#"{"arity":3,"depth":1,"labels":{"":[1,3,2]}}"#).unwrap();
    assert_eq!(sparse, rec.evaluate(&w("a"), 1));
    let dot = p.to_dot();
    assert!(dot.starts_with("digraph"));
    assert!(dot.matches("label=\"").count() >= 13);
}

#[test]
fn word_examples() {
    let rec = WreathRecursion::hanoi();
    let (states, root) = rec.word_states(&w("acab"));
    assert_eq!(states, vec![w("a"), w("cb"), w("a")]);
    assert!(root.is_identity());
    let (states, _) = rec.word_states(&w("bcba"));
    assert_eq!(states, vec![w("ca"), w("b"), w("b")]);
    let (states, root) = rec.word_states(&w("a"));
    assert_eq!(states, vec![w("a"), Word::empty(), Word::empty()]);
    assert_eq!(root, Perm::from_cycles(3, &[&[2, 3]]).unwrap());
    assert!(rec.evaluate(&Word::empty(), 5).is_identity());
    assert_eq!(w("a").parity_vector().to_bits(), vec![1, 0, 0]);
    assert_eq!(w("acab").parity_vector().to_bits(), vec![0, 1, 1]);
    assert!(rec.check_relator(&w("aa"), 5));
    assert!(!rec.check_relator(&w("ab"), 1));
    let w3 = relator(3).unwrap();
    assert!(rec.check_relator(&w3, 6));
}

#[test]
fn schreier_generators_generate_the_stabilizer() {
    let rec = WreathRecursion::hanoi();
    let gens = rec.stab1_schreier_generators();
    for g in &gens {
        let p = rec.evaluate(g, 1);
        for i in 1..=3 {
            let v = Vertex::new(&[i]).unwrap();
            assert_eq!(p.apply(&v).unwrap(), v);
        }
    }
    for depth in 2..=3 {
        let leaf = |x: &Word| rec.evaluate(x, depth).leaf_permutation(depth).unwrap();
        let degree = 3usize.pow(depth as u32);
        let from_rs = PermGroup::new(degree, gens.iter().map(leaf).collect()).unwrap();
        let named = PermGroup::new(
            degree,
            ["acab", "abac", "bcba", "babc"]
                .iter()
                .map(|s| leaf(&w(s)))
                .collect(),
        )
        .unwrap();
        let g = build_quotient(depth).unwrap();
        assert_eq!(from_rs.order(), g.order() / big(6));
        assert!(named.is_subgroup_of(&from_rs).unwrap() && from_rs.is_subgroup_of(&named).unwrap());
    }
}

#[test]
fn quotient_orders_against_enumeration() {
    let rec = WreathRecursion::hanoi();
    let gens = rec.generator_leaf_perms(2);
    let elements = closure(9, &gens);
    assert_eq!(elements.len(), 648);
    assert_eq!(build_quotient(2).unwrap().order(), big(648));
    // G_3 by two chains with different bases, and the level-by-level product
    let g3 = build_quotient(3).unwrap();
    let reversed = hanoi_kernel::StabChain::from_generators(
        27,
        &rec.generator_leaf_perms(3),
        &(0..27).rev().collect::<Vec<_>>(),
    );
    assert_eq!(g3.order(), reversed.order());
    assert_eq!(g3.order(), big(6) * big(108) * big(64) * big(19683));
    assert_eq!(g3.order(), big(816_293_376));
}

#[test]
fn abelianization_is_two() {
    // brute force on G_2: the commutator subgroup is the closure of all commutators
    let rec = WreathRecursion::hanoi();
    let elements: Vec<Perm> = closure(9, &rec.generator_leaf_perms(2))
        .into_iter()
        .collect();
    let comms: Vec<Perm> = elements
        .iter()
        .flat_map(|x| elements.iter().map(move |y| x.commutator(y)))
        .collect::<HashSet<_>>()
        .into_iter()
        .collect();
    let derived = closure(9, &comms);
    assert_eq!(648 / derived.len(), 2);
    for n in 1..=4 {
        let g = build_quotient(n).unwrap();
        assert_eq!(abelianization_order(g.group()).unwrap(), big(2), "G_{n}");
    }
}

#[test]
fn group_structure_examples() {
    let a = Analyzer::new();
    let g2 = a.quotient(2).unwrap();
    let stab = a.stab(2, 1).unwrap();
    assert_eq!(g2.group().index_of(&stab.group).unwrap(), big(6));
    assert_eq!(g2.group().index_of(g2.group()).unwrap(), big(1));
    assert!(stab.group.is_normal_in(g2.group()).unwrap());
    let rist = a.rist_image(2, 1).unwrap();
    assert_eq!(stab.group.index_of(&rist.group).unwrap(), big(4));
    assert!(matches!(
        rist.group.index_of(&stab.group),
        Err(Error::NotASubgroup(_))
    ));
    let g3 = a.quotient(3).unwrap();
    assert_eq!(a.stab(3, 1).unwrap().order(), big(136_048_896));
    assert_eq!(a.stab(3, 0).unwrap().order(), g3.order());
    assert!(a.stab(3, 4).is_err());
    let s1 = build_quotient(1).unwrap();
    assert!(!s1.group().is_elementary_abelian(2));
    assert!(!s1.group().is_abelian());
}

#[test]
fn block_actions_agree_across_depths() {
    let a = Analyzer::new();
    for big_n in 2..=4 {
        let g = a.quotient(big_n).unwrap();
        for n in 1..big_n {
            let small = a.quotient(n).unwrap();
            let block = 3usize.pow((big_n - n) as u32);
            for l in Letter::ALL {
                assert_eq!(
                    &block_image(g.generator(l), block).unwrap(),
                    small.generator(l)
                );
            }
            let kernel = g.level_stabilizer(n).unwrap();
            assert!(kernel.is_normal_in(g.group()).unwrap());
            let induced = g.group().block_action(3, n).unwrap();
            assert_eq!(induced.order(), g.order() / kernel.order());
            assert_eq!(induced.order(), small.order());
        }
    }
}

#[test]
fn derived_subgroup_lies_in_abelian_kernels() {
    // sign of the leaf permutation and the sign on each level are homomorphisms
    // to an abelian group, so commutators are even everywhere
    let a = Analyzer::new();
    let g = a.quotient(3).unwrap();
    let d = g.derived();
    for c in d.generators() {
        assert_eq!(c.sign(), 1);
        for n in 1..=3 {
            assert_eq!(block_image(c, 3usize.pow(3 - n)).unwrap().sign(), 1);
        }
    }
    assert_eq!(g.order() / d.order(), big(2));
}

#[test]
fn rist_stab_identity_per_subtree() {
    // Stab(n+m) inside X^n * Gamma' is the product of the level-m stabilizers
    // of Gamma' placed below each level-n vertex
    let a = Analyzer::new();
    for (depth, n, m) in [(3usize, 1usize, 1usize), (4, 1, 1), (4, 1, 2), (4, 2, 1)] {
        let rist = a.rist_image(depth, n).unwrap();
        let lhs = rist.group.kernel_of_level_action(3, n + m).unwrap();
        let below = a.quotient(depth - n).unwrap();
        let inner = below.derived().kernel_of_level_action(3, m).unwrap();
        let block = below.degree();
        let gens: Vec<Perm> = (0..3usize.pow(n as u32))
            .flat_map(|u| {
                inner
                    .generators()
                    .iter()
                    .map(move |c| embed_at(c, u * block, 3usize.pow(depth as u32)))
            })
            .collect();
        let rhs = PermGroup::new(3usize.pow(depth as u32), gens).unwrap();
        assert_eq!(lhs.order(), rhs.order(), "({depth},{n},{m})");
        assert!(rhs.is_subgroup_of(&lhs).unwrap());
    }
}

#[test]
fn rist_images() {
    let a = Analyzer::new();
    let r21 = a.rist_image(2, 1).unwrap();
    assert_eq!(r21.order(), big(27));
    assert!(r21.group.is_elementary_abelian(3));
    let r32 = a.rist_image(3, 2).unwrap();
    assert_eq!(r32.order(), big(19683));
    assert!(r32.group.is_elementary_abelian(3));
    for (d, n) in [(2, 1), (3, 1), (3, 2), (4, 1), (4, 2), (4, 3)] {
        assert!(a
            .rist_image(d, n)
            .unwrap()
            .group
            .is_subgroup_of(&a.stab(d, n).unwrap().group)
            .unwrap());
    }
}

#[test]
fn q_values() {
    let a = Analyzer::new();
    for (d, n, q) in [(2, 1, 4u64), (3, 1, 4), (4, 1, 4), (3, 2, 64), (4, 2, 64)] {
        assert_eq!(a.q_order(d, n).unwrap(), big(q), "q({d},{n})");
    }
    assert_eq!(q_formula(3), big(262_144));
    assert_eq!(gamma_formula(3), big(1_048_576));
}

#[test]
fn gf2_examples() {
    let rec = WreathRecursion::hanoi();
    let table = expected();
    for (name, word) in [
        ("alpha", "acab"),
        ("beta", "abac"),
        ("delta", "bcba"),
        ("gamma", "babc"),
    ] {
        assert_eq!(
            stab1_vector(&rec, &w(word)).unwrap().to_bits(),
            table.bits(&format!("gf2.{name}"))
        );
    }
    assert!(stab1_vector(&rec, &Word::empty()).unwrap().is_zero());
    assert!(matches!(
        stab1_vector(&rec, &w("a")),
        Err(Error::NotInStabilizer(_))
    ));
    let s = stabilizer_space(&rec).unwrap();
    assert_eq!(s.u.dim(), 4);
    assert_eq!(s.u_cap_w, F2Subspace::zero(9));
    assert_eq!(s.derived.dim(), 2);
    assert_eq!(s.derived, s.derived_expected);
    assert!(F2Subspace::span(9, &[])
        .unwrap()
        .intersect(&F2Subspace::full(3))
        .is_err());
}

/// `H_{1,2}` by closure over pairs (state parities, level-2 image) of
/// `alpha, beta, delta, gamma`: `H` is the set of parity vectors paired with a
/// trivial level-2 image.
#[test]
fn h_subspace_against_closure_oracle() {
    let rec = WreathRecursion::hanoi();
    let gens: Vec<(F2Vector, Perm)> = ["acab", "abac", "bcba", "babc"]
        .iter()
        .map(|s| {
            let x = w(s);
            (
                stab1_vector(&rec, &x).unwrap(),
                rec.evaluate(&x, 2).leaf_permutation(2).unwrap(),
            )
        })
        .collect();
    let start = (F2Vector::zero(9), Perm::identity(9));
    let mut seen: HashMap<(Vec<u8>, Perm), ()> = HashMap::new();
    seen.insert((start.0.to_bits(), start.1.clone()), ());
    let mut frontier = vec![start];
    while let Some((v, p)) = frontier.pop() {
        for (gv, gp) in &gens {
            let next = (v.add(gv).unwrap(), p.then(gp));
            let key = (next.0.to_bits(), next.1.clone());
            if seen.insert(key, ()).is_none() {
                frontier.push(next);
            }
        }
    }
    let h_vectors: Vec<F2Vector> = seen
        .keys()
        .filter(|(_, p)| p.is_identity())
        .map(|(bits, _)| F2Vector::from_bits(bits))
        .collect();
    assert_eq!(h_vectors.len(), 4);
    let oracle = F2Subspace::span(9, &h_vectors).unwrap();

    let a = Analyzer::new();
    let h = a.h_subspace(3).unwrap();
    assert_eq!(h.subspace, oracle);
    assert_eq!(h.subspace.dim(), 2);
    assert!(h.inside_u && h.generators_in_stab2);
    // frozen: H is spanned by alpha~+beta~+delta~ and alpha~+delta~+gamma~
    let frozen = F2Subspace::span(
        9,
        &[
            F2Vector::from_bits(&[1, 0, 1, 1, 0, 1, 1, 0, 1]),
            F2Vector::from_bits(&[0, 1, 1, 0, 1, 1, 0, 1, 1]),
        ],
    )
    .unwrap();
    assert_eq!(h.subspace, frozen);
    assert!(!h.equals_derived_span);
    assert_eq!(h.abelianization_below, big(2));
}

#[test]
fn kernel_report_examples() {
    let a = Analyzer::new();
    let r = a.kernel_report(2, 4).unwrap();
    assert!(r.pass, "{:?}", r.first_failure);
    assert_eq!(r.gamma1, big(16));
    assert_eq!(r.rows[0].k, big(64));
    assert_eq!(r.rows[0].h, big(4));
    assert_eq!(r.rows[1].gamma_n, big(256));
    assert_eq!(r.rows[1].gamma_next, big(1_048_576));
    assert_eq!(r.rows[1].k, big(1 << 18));
    for row in &r.rows {
        assert_eq!(&row.gamma_next * &row.q_next, &row.gamma_n * &row.k);
    }
    assert_eq!(r.kernel_order, Some(big(4)));
    assert!(matches!(a.kernel_report(2, 3), Err(Error::Precondition(_))));
    assert!(matches!(a.kernel_report(0, 4), Err(Error::Precondition(_))));
    assert!(matches!(a.kernel_report(3, 5), Err(Error::ResourceCap(_))));
}

#[test]
fn lemma_examples() {
    let a = Analyzer::new();
    let r = a.verify("stab12", 2).unwrap();
    assert!(r.pass);
    assert_eq!(r.computed["order"], serde_json::json!(108));
    let r = a.verify("transitive", 4).unwrap();
    assert_eq!(r.computed["orbit"], serde_json::json!(81));
    let r = a.verify("stabquot", 3).unwrap();
    assert!(r.pass);
    assert_eq!(r.computed[1]["stab"], serde_json::json!(1_259_712));
    assert!(matches!(a.verify("bogus", 2), Err(Error::UnknownLemma(_))));
}

#[test]
fn game_examples() {
    assert!(game::consistency_check(6).unwrap());
    // one move then the other two generators never leave the 3^n states
    for n in 1..=8 {
        assert_eq!(game::reachable_states(n).unwrap(), 3usize.pow(n as u32));
    }
    // BFS lengths against the classical recursion T(n) = 2 T(n-1) + 1
    let mut t = 0usize;
    for n in 1..=10 {
        t = 2 * t + 1;
        let sol = game::solve(n).unwrap();
        assert_eq!(sol.len(), t);
        let end = game::apply_word(&game::GameState::tower(n, 1).unwrap(), &sol);
        assert_eq!(end, game::GameState::tower(n, 3).unwrap());
    }
    // the solution word moves the all-1 leaf to the all-3 leaf in the tree too
    let sol = game::solve(5).unwrap();
    let p = WreathRecursion::hanoi().evaluate(&sol, 5);
    assert_eq!(
        p.apply(&Vertex::new(&[1; 5]).unwrap()).unwrap(),
        Vertex::new(&[3; 5]).unwrap()
    );
}

#[test]
fn expected_table_matches_formulas() {
    let t = expected();
    for n in 1..=3 {
        assert_eq!(t.int(&format!("q.{n}")), q_formula(n));
        assert_eq!(t.int(&format!("gamma.{n}")), gamma_formula(n));
    }
}
