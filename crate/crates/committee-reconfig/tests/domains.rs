mod common;

use committee_reconfig::domains::{
    connect_jr_ci, connect_jr_vi, consecutive_ones_order, is_consecutive, pareto_dominators, pareto_optimal, recognize,
    DomainCertificate, DomainKind,
};
use committee_reconfig::reconfig::Predicate;
use committee_reconfig::{distance, Error, Instance};
use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arb_sets(max_u: usize, max_sets: usize) -> impl Strategy<Value = (usize, Vec<Vec<usize>>)> {
    (1..=max_u).prop_flat_map(move |u| {
        (Just(u), proptest::collection::vec(proptest::collection::btree_set(0..u, 0..=u), 0..=max_sets))
            .prop_map(|(u, sets)| (u, sets.into_iter().map(|s| s.into_iter().collect()).collect()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn consecutive_ones_matches_permutation_search((u, sets) in arb_sets(7, 6)) {
        match consecutive_ones_order(u, &sets) {
            Some(order) => {
                let mut sorted = order.clone();
                sorted.sort_unstable();
                prop_assert_eq!(sorted, (0..u).collect::<Vec<_>>());
                prop_assert!(is_consecutive(u, &sets, &order));
            }
            None => prop_assert!(!brute_consecutive(u, &sets)),
        }
    }

    #[test]
    fn recognition_matches_permutation_search(inst in arb_instance(7, 7, 3)) {
        let ballots: Vec<Vec<usize>> = (0..inst.n()).map(|v| inst.ballot(v)).collect();
        let supports: Vec<Vec<usize>> = (0..inst.m()).map(|c| inst.supporters(c).collect()).collect();
        for (kind, universe, sets) in [(DomainKind::Ci, inst.m(), &ballots), (DomainKind::Vi, inst.n(), &supports)] {
            match recognize(&inst, kind) {
                Some(cert) => {
                    prop_assert_eq!(cert.kind, kind);
                    prop_assert!(cert.verify(&inst).is_ok());
                }
                None => prop_assert!(!brute_consecutive(universe, sets)),
            }
        }
    }

    #[test]
    fn dominators_match_definition(inst in arb_instance(8, 8, 3)) {
        let supports: Vec<Vec<usize>> = (0..inst.m()).map(|c| inst.supporters(c).collect()).collect();
        let optimal = pareto_optimal(&inst);
        for c in 0..inst.m() {
            let expect: Vec<usize> = (0..inst.m())
                .filter(|&d| {
                    d != c
                        && supports[c].iter().all(|v| supports[d].contains(v))
                        && supports[d].len() > supports[c].len()
                })
                .collect();
            prop_assert_eq!(pareto_dominators(&inst, c).to_vec(), expect.clone());
            prop_assert_eq!(optimal.contains(c), expect.is_empty());
        }
    }
}

#[test]
fn ci_paths_have_distance_length() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..150 {
        let inst = random_ci(&mut rng, 8, 7, 3);
        let cert = recognize(&inst, DomainKind::Ci).unwrap();
        let all = all_satisfying(&inst, |w| Predicate::jr().holds(&inst, w));
        for a in all.iter().take(4) {
            for b in all.iter().rev().take(4) {
                let p = connect_jr_ci(&inst, &cert, a, b).unwrap();
                p.validate(&inst, &Predicate::jr()).unwrap();
                assert_eq!(p.len(), distance(a, b).unwrap());
            }
        }
    }
}

#[test]
fn vi_paths_connect_any_jr_pair() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..150 {
        let inst = random_vi(&mut rng, 9, 7, 3);
        let cert = recognize(&inst, DomainKind::Vi).unwrap();
        let all = all_satisfying(&inst, |w| Predicate::jr().holds(&inst, w));
        for a in all.iter().take(4) {
            for b in all.iter().rev().take(4) {
                let p = connect_jr_vi(&inst, &cert, a, b).unwrap();
                p.validate(&inst, &Predicate::jr()).unwrap();
                assert_eq!((p.first(), p.last()), (a, b));
            }
        }
    }
}

#[test]
fn certificates_are_checked() {
    let inst = Instance::parse("3 3 1\n0 1\n1 2\n0 2\n").unwrap();
    let bogus = DomainCertificate { kind: DomainKind::Ci, ordering: vec![0, 1, 2] };
    assert!(matches!(bogus.verify(&inst), Err(Error::Certificate(_))));
    let short = DomainCertificate { kind: DomainKind::Vi, ordering: vec![0, 1] };
    assert!(short.verify(&inst).is_err());
    assert!(recognize(&inst, DomainKind::Ci).is_none());
}

#[test]
fn kind_round_trips() {
    for kind in [DomainKind::Ci, DomainKind::Vi] {
        assert_eq!(kind.to_string().parse::<DomainKind>().unwrap(), kind);
    }
    assert!("interval".parse::<DomainKind>().is_err());
}
