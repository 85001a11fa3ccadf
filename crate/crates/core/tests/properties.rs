use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fg_core::parse::{
    parse_equation, parse_generating_set, parse_tower, parse_word, print_generating_set,
};
use fg_core::quadratic::{self, AbelianOutcome, SolveOutcome};
use fg_core::stallings::SubgroupGraph;
use fg_core::towers::TowerSpec;
use fg_core::whitehead::{self, WhiteheadMove};
use fg_core::{Alphabet, Letter, Word};

fn letters(rank: usize, max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((0..rank, any::<bool>()), 0..=max_len)
        .prop_map(|v| v.into_iter().map(|(i, inv)| Letter::new(i, inv)).collect())
}

fn word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    letters(rank, max_len).prop_map(Word::reduce)
}

fn abc() -> Alphabet {
    Alphabet::parse_list("a b c").unwrap()
}

proptest! {
    #[test]
    fn reduce_is_idempotent(raw in letters(3, 20)) {
        let w = Word::reduce(raw);
        prop_assert_eq!(Word::reduce(w.letters().iter().copied()), w.clone());
        prop_assert!(w.letters().windows(2).all(|p| p[0] != p[1].inverse()));
    }

    #[test]
    fn exponent_sum_is_a_homomorphism(u in word(3, 12), v in word(3, 12)) {
        let uv = &u * &v;
        for i in 0..3 {
            prop_assert_eq!(uv.exponent_sum(i), u.exponent_sum(i) + v.exponent_sum(i));
        }
    }

    #[test]
    fn words_round_trip_through_text(w in word(3, 16)) {
        let al = abc();
        prop_assert_eq!(parse_word(&al.render(&w), &al).unwrap(), w);
    }

    #[test]
    fn generating_sets_round_trip(gens in prop::collection::vec(word(3, 6), 1..4)) {
        let al = abc();
        let text = print_generating_set(&gens, &al);
        prop_assert_eq!(parse_generating_set(&text, &al).unwrap(), gens);
    }

    #[test]
    fn basis_generates_the_same_subgroup(gens in prop::collection::vec(word(2, 6), 1..4)) {
        let g = SubgroupGraph::build(&gens, 2);
        let basis = g.basis();
        prop_assert_eq!(basis.len(), g.rank());
        for w in &gens {
            prop_assert!(g.member(w));
        }
        prop_assert!(SubgroupGraph::build(&basis, 2).equal(&g));
    }

    #[test]
    fn membership_is_closed_under_inverse(gens in prop::collection::vec(word(2, 5), 1..3), w in word(2, 10)) {
        let g = SubgroupGraph::build(&gens, 2);
        prop_assert_eq!(g.member(&w), g.member(&w.inverse()));
    }

    #[test]
    fn subgroup_products_are_members(gens in prop::collection::vec(word(3, 5), 1..4), picks in prop::collection::vec((0usize..4, any::<bool>()), 0..6)) {
        let g = SubgroupGraph::build(&gens, 3);
        let mut w = Word::identity();
        for (i, inv) in picks {
            let x = &gens[i % gens.len()];
            w = &w * &if inv { x.inverse() } else { x.clone() };
        }
        prop_assert!(g.member(&w));
    }

    #[test]
    fn minimal_length_is_automorphism_invariant(w in word(3, 8), seed in any::<u64>()) {
        prop_assume!(!w.is_identity());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let moves: Vec<WhiteheadMove> = (0..3).map(|_| WhiteheadMove::random(&mut rng, 3)).collect();
        let image = whitehead::apply_all(&moves, &w);
        prop_assert_eq!(
            whitehead::minimize(&w, 3).unwrap().min_length,
            whitehead::minimize(&image, 3).unwrap().min_length
        );
    }

    #[test]
    fn moves_are_invertible(w in word(3, 10), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mv = WhiteheadMove::random(&mut rng, 3);
        prop_assert_eq!(mv.inverse().apply(&mv.apply(&w)), w);
    }

    #[test]
    fn cyclic_free_factor_agrees_with_primitivity(w in word(2, 6)) {
        prop_assume!(!w.is_identity());
        let g = SubgroupGraph::build(std::slice::from_ref(&w), 2);
        prop_assert_eq!(whitehead::is_free_factor(&g).unwrap(), whitehead::is_primitive(&w, 2).unwrap());
    }

    #[test]
    fn primitive_exponents_are_coprime(w in word(3, 7)) {
        prop_assume!(!w.is_identity());
        if whitehead::is_primitive(&w, 3).unwrap() {
            let g = w.exponent_vector(3).iter().fold(0i64, |g, &x| gcd(g, x.abs()));
            prop_assert_eq!(g, 1);
        }
    }

    #[test]
    fn normal_form_is_a_class_invariant(w in letters(4, 10), i in 0usize..10) {
        let spec = example_tower();
        let w = Word::reduce(w);
        let t = spec.stable_letters()[0];
        let u = spec.root_of(t).unwrap().clone();
        let relator = u.commutator(&Word::gen(t));
        let cut = i.min(w.len());
        let (left, right) = w.letters().split_at(cut);
        let with_rel = &(&Word::reduce(left.iter().copied()) * &relator) * &Word::reduce(right.iter().copied());
        prop_assert_eq!(spec.reduce(&with_rel), spec.reduce(&w));
        prop_assert!(spec.is_trivial(&(&w * &w.inverse())));
        prop_assert!(spec.is_trivial(&(&spec.reduce(&w) * &w.inverse())));
    }

    #[test]
    fn base_words_stay_nontrivial(w in word(3, 12)) {
        prop_assume!(!w.is_identity());
        prop_assert!(!example_tower().is_trivial(&w));
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn example_tower() -> TowerSpec {
    parse_tower("base: a b\nfree: x\next: t u=x^2 (b x^2)^1\n").unwrap()
}

#[test]
fn towers_round_trip_through_text() {
    let spec = example_tower();
    let text = fg_core::parse::print_tower(&spec);
    assert_eq!(parse_tower(&text).unwrap(), spec);
}

#[test]
fn obstruction_is_sound_against_search() {
    let al = Alphabet::parse_list("a b").unwrap();
    let cases = [
        "?x^2 = a^3",
        "?x^2 ?y^2 = a b",
        "?x ?y ?x^-1 ?y^-1 = a",
        "?x^2 ?y^-2 = a^2 b",
        "?x a ?x^-1 = b",
        "?x^3 = a^3",
        "?x ?y = a b",
    ];
    for text in cases {
        let eq = parse_equation(text, Some(&al)).unwrap();
        if let AbelianOutcome::Obstructed { .. } = quadratic::abelian_obstruction(&eq) {
            assert_eq!(
                quadratic::brute_solve(&eq, 3).unwrap(),
                SolveOutcome::NoneWithinBound { bound: 3 },
                "{text}"
            );
        }
        if let SolveOutcome::Solution(vals) = quadratic::brute_solve(&eq, 3).unwrap() {
            assert!(eq.evaluate(&vals).is_identity(), "{text}");
            assert!(matches!(
                quadratic::abelian_obstruction(&eq),
                AbelianOutcome::Solvable { .. }
            ));
        }
    }
}
