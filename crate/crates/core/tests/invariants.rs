//! Structural guarantees of the game classes, solvers and oracle.

use std::cmp::Ordering;

use hedonic::classes::random_game;
use hedonic::oracle::all_stable;
use hedonic::partition::integer_partition_count;
use hedonic::restrictions::{
    is_bottom_responsive, is_mutual_bottom, is_mutual_top, is_strong_bottom_responsive, is_top_responsive,
    unique_avoid_set,
};
use hedonic::solvers::{covers_choice_sets, NeighborRelation};
use hedonic::stability::LATTICE_EDGES;
use hedonic::{
    deviation_dynamics, find_gdot_maximal_ir, fixtures, top_covering, Caps, Checker, Coalition, Concept, DynamicsMode,
    GameKind, Player, Preference, PreferenceProfile,
};
use proptest::prelude::*;

fn expand(kind: GameKind, n: usize, seed: u64) -> PreferenceProfile {
    random_game(kind, n, seed).unwrap().profile().unwrap()
}

#[test]
fn ashg_expansion_matches_utility_sums() {
    for n in 1..=5 {
        for seed in 0..4 {
            let m = random_game(GameKind::Ashg, n, seed).unwrap().matrix().unwrap();
            let g = m.profile().unwrap();
            for i in g.players() {
                let cs: Vec<Coalition> = g.grand().subsets_containing(i).collect();
                for &s in &cs {
                    for &t in &cs {
                        let expected = match m.utility(i, s).cmp(&m.utility(i, t)) {
                            Ordering::Greater => Preference::Prefers,
                            Ordering::Equal => Preference::Indifferent,
                            Ordering::Less => Preference::Dispreferred,
                        };
                        assert_eq!(g.compare(i, s, t).unwrap(), expected);
                    }
                }
            }
        }
    }
}

#[test]
fn b_hedonic_self_rank_counterexample() {
    // A player ranking itself above two others breaks the smaller-is-better
    // rule among coalitions with the same choice set, so generated strict
    // B-hedonic games put each player last in its own ranking.
    let r = hedonic::BRanking::new(3, vec![vec![1, 2, 3], vec![1, 2, 3], vec![1, 2, 3]]).unwrap();
    assert!(!is_top_responsive(&r.profile().unwrap()).unwrap().holds());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn enemies_games_are_bottom_responsive(n in 1usize..7, seed in any::<u64>()) {
        let g = expand(GameKind::Enemies, n, seed);
        prop_assert!(is_bottom_responsive(&g).unwrap().holds());
        prop_assert!(is_strong_bottom_responsive(&g).unwrap().holds());
        let s = expand(GameKind::SymmetricEnemies, n, seed);
        prop_assert!(is_mutual_bottom(&s).unwrap().holds());
    }

    #[test]
    fn friends_games_are_top_responsive(n in 1usize..7, seed in any::<u64>()) {
        let g = expand(GameKind::SymmetricFriends, n, seed);
        prop_assert!(is_top_responsive(&g).unwrap().holds());
        prop_assert!(is_mutual_top(&g).unwrap().holds());
        prop_assert!(is_top_responsive(&expand(GameKind::BHedonicStrict, n, seed)).unwrap().holds());
    }

    #[test]
    fn neighbor_relation_is_symmetric_under_mutuality(n in 1usize..6, seed in any::<u64>()) {
        let g = expand(GameKind::SymmetricFriends, n, seed);
        for x in g.grand().nonempty_subsets() {
            prop_assert!(NeighborRelation::new(&g, x).unwrap().is_symmetric(), "context {{{}}}", x);
        }
    }

    #[test]
    fn tca_output_is_stable(n in 1usize..7, seed in any::<u64>()) {
        let g = expand(GameKind::SymmetricFriends, n, seed);
        let (pi, trace) = top_covering(&g).unwrap();
        let checker = Checker::new(&g, Caps::default());
        prop_assert!(checker.holds(&pi, Concept::Ssns).unwrap());
        prop_assert!(covers_choice_sets(&g, &pi).unwrap());
        let mut remaining = g.grand();
        for r in &trace.rounds {
            prop_assert_eq!(r.remaining, remaining);
            prop_assert!(r.component.is_subset(remaining) && r.component.contains(r.selected));
            remaining = remaining.difference(r.component);
        }
        prop_assert!(remaining.is_empty());
        let b = expand(GameKind::BHedonicStrict, n, seed);
        let (pi, _) = top_covering(&b).unwrap();
        prop_assert!(Checker::new(&b, Caps::default()).holds(&pi, Concept::Sc).unwrap());
    }

    #[test]
    fn dynamics_outputs_are_stable(n in 1usize..7, seed in any::<u64>(), symmetric in any::<bool>()) {
        let kind = if symmetric { GameKind::SymmetricEnemies } else { GameKind::Enemies };
        let g = expand(kind, n, seed);
        let checker = Checker::new(&g, Caps::default());
        for (mode, concept) in [(DynamicsMode::Is, Concept::Is), (DynamicsMode::Sis, Concept::Sis)] {
            let (pi, trace) = deviation_dynamics(&g, mode).unwrap();
            prop_assert!(checker.holds(&pi, concept).unwrap());
            prop_assert!(trace.potential_increases());
            prop_assert!(trace.steps.len() < integer_partition_count(n));
            for s in &trace.steps {
                prop_assert!(hedonic::stability::reachable(&s.partition, &s.successor, s.movers).unwrap());
            }
        }
    }

    #[test]
    fn maximal_ir_is_sns_and_individually_rational(n in 1usize..7, seed in any::<u64>()) {
        let g = expand(GameKind::SymmetricEnemies, n, seed);
        let pi = find_gdot_maximal_ir(&g).unwrap();
        let checker = Checker::new(&g, Caps::default());
        prop_assert!(checker.holds(&pi, Concept::Sns).unwrap());
        prop_assert!(checker.holds(&pi, Concept::Ir).unwrap());
        for &b in pi.blocks() {
            for i in b.players() {
                prop_assert_eq!(unique_avoid_set(&g, i, b).unwrap(), Coalition::singleton(i));
            }
        }
    }

    #[test]
    fn stable_sets_follow_the_lattice(seed in any::<u64>(), kind in 0usize..8) {
        let g = expand(GameKind::ALL[kind], 4, seed);
        let sets: Vec<_> = Concept::ALL.iter().map(|&c| all_stable(&g, c, Caps::default()).unwrap()).collect();
        let of = |c: Concept| &sets[Concept::ALL.iter().position(|&x| x == c).unwrap()];
        for (a, b) in LATTICE_EDGES {
            prop_assert!(of(a).iter().all(|p| of(b).contains(p)), "{} not within {}", a, b);
        }
    }
}

#[test]
fn bundled_games_have_documented_properties() {
    let g = |name: &str| fixtures::by_name(name).unwrap().profile().unwrap();
    assert!(is_mutual_top(&g("example1")).unwrap().holds());
    assert!(is_mutual_bottom(&g("example2")).unwrap().holds());
    let p2 = g("prop2");
    assert!(all_stable(&p2, Concept::Sns, Caps::default()).unwrap().is_empty());
    assert_eq!(all_stable(&p2, Concept::Sc, Caps::default()).unwrap().len(), 2);
    let e1 = g("example1");
    assert_eq!(e1.classes(Player::new(1))[0], vec![Coalition::of(&[1, 2])]);
}
