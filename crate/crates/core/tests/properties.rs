use std::collections::HashSet;

use hanoi_kernel::f2::stab1_vector;
use hanoi_kernel::permgroup::orbit_product;
use hanoi_kernel::{
    F2Subspace, F2Vector, Letter, Perm, PermGroup, Portrait, Vertex, Word, WreathRecursion,
};
use num_bigint::BigUint;
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 1000,
        rng_seed: RngSeed::Fixed(0x0068_616e_6f69),
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..3usize, 0..=max)
        .prop_map(|v| Word::from_letters(v.into_iter().map(|i| Letter::ALL[i]).collect()))
}

fn vertex(max_level: usize) -> impl Strategy<Value = Vertex> {
    prop::collection::vec(0..3u32, 0..=max_level).prop_map(Vertex::from_zero_based)
}

fn perm(degree: usize) -> impl Strategy<Value = Perm> {
    Just((0..degree as u32).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Perm::from_images(v).unwrap())
}

fn f2_vectors(dim: usize, max: usize) -> impl Strategy<Value = Vec<F2Vector>> {
    prop::collection::vec(prop::collection::vec(0..2u8, dim), 0..=max)
        .prop_map(|rows| rows.iter().map(|r| F2Vector::from_bits(r)).collect())
}

/// Words in `alpha, beta, delta, gamma` as index sequences.
fn stab1_letters() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..4usize, 0..12)
}

const STAB1: [&str; 4] = ["acab", "abac", "bcba", "babc"];

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

proptest! {
    #![proptest_config(config())]

    #[test]
    fn cocycle_identity(g in word(12), h in word(12), u in vertex(4), depth in 4usize..=5) {
        let rec = WreathRecursion::hanoi();
        let (pg, ph) = (rec.evaluate(&g, depth), rec.evaluate(&h, depth));
        let lhs = pg.compose(&ph).unwrap().state_at(&u).unwrap();
        let rhs = pg
            .state_at(&u)
            .unwrap()
            .compose(&ph.state_at(&pg.apply(&u).unwrap()).unwrap())
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_is_a_homomorphism(u in word(15), v in word(15), depth in 0usize..=4) {
        let rec = WreathRecursion::hanoi();
        let lhs = rec.evaluate(&u.concat(&v), depth);
        let rhs = rec.evaluate(&u, depth).compose(&rec.evaluate(&v, depth)).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        prop_assert!(lhs.compose(&lhs.inverse()).unwrap().is_identity());
        prop_assert_eq!(rec.evaluate(&u.inverse(), depth), rec.evaluate(&u, depth).inverse());
    }

    #[test]
    fn leaf_permutation_is_a_homomorphism(u in word(15), v in word(15), n in 0usize..=3) {
        let rec = WreathRecursion::hanoi();
        let (pu, pv) = (rec.evaluate(&u, 3), rec.evaluate(&v, 3));
        let lhs = pu.compose(&pv).unwrap().leaf_permutation(n).unwrap();
        let rhs = pu.leaf_permutation(n).unwrap().then(&pv.leaf_permutation(n).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn apply_preserves_prefixes(g in word(15), v in vertex(5), k in 0usize..=5) {
        let rec = WreathRecursion::hanoi();
        let p = rec.evaluate(&g, 5);
        let k = k.min(v.level());
        let image = p.apply(&v).unwrap();
        prop_assert_eq!(image.level(), v.level());
        prop_assert_eq!(image.truncate(k), p.apply(&v.truncate(k)).unwrap());
    }

    #[test]
    fn embed_then_state_round_trip(g in word(12), u in vertex(3), depth in 0usize..=2) {
        let rec = WreathRecursion::hanoi();
        let p = rec.evaluate(&g, depth);
        let e = Portrait::embed(&u, &p).unwrap();
        prop_assert_eq!(e.depth(), u.level() + depth);
        prop_assert_eq!(e.state_at(&u).unwrap(), p);
    }

    #[test]
    fn word_states_reconstruct_evaluation(w in word(20), depth in 1usize..=4) {
        let rec = WreathRecursion::hanoi();
        let (states, root) = rec.word_states(&w);
        let subs: Vec<Portrait> = states.iter().map(|s| rec.evaluate(s, depth - 1)).collect();
        prop_assert_eq!(Portrait::from_states(&root, &subs).unwrap(), rec.evaluate(&w, depth));
    }

    #[test]
    fn parity_is_a_homomorphism(u in word(20), v in word(20)) {
        let lhs = u.concat(&v).parity_vector();
        prop_assert_eq!(lhs, u.parity_vector().add(&v.parity_vector()).unwrap());
    }

    #[test]
    fn stab1_vector_is_a_homomorphism(x in stab1_letters(), y in stab1_letters()) {
        let rec = WreathRecursion::hanoi();
        let build = |ix: &[usize]| ix.iter().fold(Word::empty(), |w, &i| w.concat(&Word::plain(STAB1[i]).unwrap()));
        let (u, v) = (build(&x), build(&y));
        let lhs = stab1_vector(&rec, &u.concat(&v)).unwrap();
        let rhs = stab1_vector(&rec, &u).unwrap().add(&stab1_vector(&rec, &v).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn derived_membership_parity_rule(x in stab1_letters()) {
        // a word in alpha, beta, delta, gamma lies in Gamma' iff #alpha = #beta
        // and #delta = #gamma mod 2
        let rec = WreathRecursion::hanoi();
        let w = x.iter().fold(Word::empty(), |w, &i| w.concat(&Word::plain(STAB1[i]).unwrap()));
        let count = |k: usize| x.iter().filter(|&&i| i == k).count() % 2;
        let rule = count(0) == count(1) && count(2) == count(3);
        prop_assert_eq!(w.parity_vector().is_zero(), rule);
        let named: Vec<F2Vector> = STAB1.iter().map(|s| stab1_vector(&rec, &Word::plain(s).unwrap()).unwrap()).collect();
        let derived = F2Subspace::span(9, &[named[0].add(&named[1]).unwrap(), named[2].add(&named[3]).unwrap()]).unwrap();
        if rule {
            prop_assert!(derived.contains(&stab1_vector(&rec, &w).unwrap()).unwrap());
        }
    }

    #[test]
    fn dimension_formula(a in f2_vectors(9, 6), b in f2_vectors(9, 6)) {
        let a = F2Subspace::span(9, &a).unwrap();
        let b = F2Subspace::span(9, &b).unwrap();
        let sum = a.sum(&b).unwrap();
        let cap = a.intersect(&b).unwrap();
        prop_assert_eq!(sum.dim() + cap.dim(), a.dim() + b.dim());
        prop_assert!(cap.is_subspace_of(&a).unwrap() && cap.is_subspace_of(&b).unwrap());
        prop_assert!(a.is_subspace_of(&sum).unwrap());
    }

    #[test]
    fn orbit_stabilizer_factorization(gens in prop::collection::vec(perm(7), 1..=3)) {
        let g = PermGroup::new(7, gens).unwrap();
        prop_assert_eq!(g.order(), orbit_product(&g));
        let stab = g.pointwise_stabilizer(&[0]).unwrap();
        let orbit = g.orbit(0).len();
        prop_assert_eq!(g.order(), stab.order() * BigUint::from(orbit));
        prop_assert_eq!(g.index_of(&stab).unwrap(), BigUint::from(orbit));
    }

    #[test]
    fn closure_oracle_small_groups(gens in prop::collection::vec(perm(6), 1..=3), probes in prop::collection::vec(perm(6), 5)) {
        let g = PermGroup::new(6, gens.clone()).unwrap();
        let elements = closure(6, &gens);
        prop_assert!(elements.len() <= 5000);
        prop_assert_eq!(g.order(), BigUint::from(elements.len()));
        for p in &probes {
            prop_assert_eq!(g.contains(p).unwrap(), elements.contains(p));
        }
    }

    #[test]
    fn closure_oracle_level_two(ws in prop::collection::vec(word(6), 1..=3), probes in prop::collection::vec(word(8), 4)) {
        let rec = WreathRecursion::hanoi();
        let leaf = |w: &Word| rec.evaluate(w, 2).leaf_permutation(2).unwrap();
        let gens: Vec<Perm> = ws.iter().map(leaf).collect();
        let g = PermGroup::new(9, gens.clone()).unwrap();
        let elements = closure(9, &gens);
        prop_assert!(elements.len() <= 648);
        prop_assert_eq!(g.order(), BigUint::from(elements.len()));
        for w in &probes {
            let p = leaf(w);
            prop_assert_eq!(g.contains(&p).unwrap(), elements.contains(&p));
        }
    }
}
