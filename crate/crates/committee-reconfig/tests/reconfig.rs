mod common;

use committee_reconfig::axioms::Axiom;
use committee_reconfig::generators::{gen_fixture, gen_grid};
use committee_reconfig::reconfig::{
    bfs_connect, committee_graph, connect_ejr_4approx, connect_rule_outputs, connect_to_affordable_jr, connect_two_jr,
    isolation_radius, removal_order, removal_order_bound_holds, BfsOutcome, Predicate,
};
use committee_reconfig::rules::Rule;
use committee_reconfig::{distance, Alpha, CandidateSet, Error};
use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn bfs_matches_explicit_graph(inst in arb_instance(10, 7, 4), seed in any::<u64>()) {
        for pred in [Predicate::jr(), Predicate::ejr()] {
            let nodes = all_satisfying(&inst, |w| pred.holds(&inst, w));
            if nodes.is_empty() {
                continue;
            }
            let s = &nodes[seed as usize % nodes.len()];
            for t in &nodes {
                let expect = naive_distance(&nodes, s, t);
                match bfs_connect(&inst, s, t, &pred, 1_000_000).unwrap() {
                    BfsOutcome::Found { path } => {
                        prop_assert_eq!(Some(path.len()), expect);
                        path.validate(&inst, &pred).unwrap();
                    }
                    BfsOutcome::Disconnected { .. } => prop_assert_eq!(expect, None),
                    BfsOutcome::BudgetExceeded { .. } => prop_assert!(false, "budget"),
                }
            }
        }
    }

    #[test]
    fn isolation_radius_matches_enumeration(inst in arb_instance(10, 7, 4)) {
        let pred = Predicate::jr();
        let nodes = all_satisfying(&inst, |w| pred.holds(&inst, w));
        for w in &nodes {
            let rep = isolation_radius(&inst, w, &pred, inst.k(), 1_000_000).unwrap();
            let nearest = nodes.iter().filter(|x| *x != w).map(|x| distance(w, x).unwrap()).min();
            prop_assert_eq!(rep.nearest_distance, nearest);
            if let Some(d) = nearest {
                prop_assert_eq!(rep.radius, d - 1);
            }
        }
    }

    #[test]
    fn graph_components_agree_with_bfs(inst in arb_instance(8, 6, 3)) {
        let pred = Predicate::jr();
        let g = committee_graph(&inst, &pred, 10_000).unwrap();
        for comp in g.components() {
            for &i in &comp {
                let out = bfs_connect(&inst, &g.nodes[comp[0]], &g.nodes[i], &pred, 1_000_000).unwrap();
                prop_assert!(out.path().is_some());
            }
        }
    }

    #[test]
    fn removal_order_keeps_coverage_bound(inst in arb_instance(14, 8, 5)) {
        for w in all_satisfying(&inst, |w| Axiom::Jr(Alpha::one()).holds(&inst, w)) {
            prop_assert!(removal_order_bound_holds(&inst, &w, &removal_order(&inst, &w)));
        }
    }

    #[test]
    fn two_jr_paths_are_short(inst in arb_instance(14, 8, 5), seed in any::<u64>()) {
        let jr = all_satisfying(&inst, |w| Predicate::jr().holds(&inst, w));
        if jr.len() >= 2 {
            let a = &jr[seed as usize % jr.len()];
            let b = &jr[(seed / 7) as usize % jr.len()];
            let p = connect_two_jr(&inst, a, b).unwrap();
            p.validate(&inst, &Predicate::Jr(Alpha::integer(2))).unwrap();
            prop_assert!(p.len() <= 2 * inst.k());
            prop_assert_eq!((p.first(), p.last()), (a, b));
        }
    }

    #[test]
    fn four_ejr_paths_validate(inst in arb_instance(16, 8, 6), seed in any::<u64>()) {
        let ejr = all_satisfying(&inst, |w| Predicate::ejr().holds(&inst, w));
        if ejr.len() >= 2 {
            let a = &ejr[seed as usize % ejr.len()];
            let b = &ejr[(seed / 7) as usize % ejr.len()];
            let p = connect_ejr_4approx(&inst, a, b).unwrap();
            p.validate(&inst, &Predicate::Ejr(Alpha::integer(4))).unwrap();
            prop_assert_eq!((p.first(), p.last()), (a, b));
        }
    }

    #[test]
    fn affordable_ends_are_certified(inst in arb_instance(12, 8, 5)) {
        for rule in Rule::ALL {
            let w = rule.run(&inst).unwrap().committee;
            let (path, end) = connect_to_affordable_jr(&inst, &w, rule).unwrap();
            path.validate(&inst, &Predicate::jr()).unwrap();
            end.verify(&inst).unwrap();
            prop_assert!(end.core.is_subset(path.last()));
        }
    }
}

#[test]
fn example_connects_through_2jr() {
    let g = gen_fixture("example1").unwrap();
    let (w, w2) = (g.committee("W").unwrap(), g.committee("W2").unwrap());
    let p = connect_two_jr(&g.instance, &w, &w2).unwrap();
    assert!(p.len() <= 6);
    let bfs = bfs_connect(&g.instance, &w, &w2, &Predicate::jr(), 1000).unwrap();
    assert_eq!(bfs.path().unwrap().len(), 3);
}

#[test]
fn grid_optima_are_disconnected_in_choice_set() {
    let g = gen_grid(3).unwrap();
    let pred = Predicate::rule_choice_set(&g.instance, Rule::Pav).unwrap();
    let out = bfs_connect(&g.instance, &g.committee("rows").unwrap(), &g.committee("cols").unwrap(), &pred, 1000).unwrap();
    assert!(matches!(out, BfsOutcome::Disconnected { .. }));
}

#[test]
fn grid_rule_outputs_connect_in_jr() {
    let g = gen_grid(3).unwrap();
    let (rows, cols) = (g.committee("rows").unwrap(), g.committee("cols").unwrap());
    let p = connect_rule_outputs(&g.instance, &rows, Rule::Pav, &cols, Rule::Pav).unwrap();
    p.validate(&g.instance, &Predicate::jr()).unwrap();
}

#[test]
fn budget_is_reported_separately() {
    let g = gen_grid(3).unwrap();
    let (rows, cols) = (g.committee("rows").unwrap(), g.committee("cols").unwrap());
    let out = bfs_connect(&g.instance, &rows, &cols, &Predicate::jr(), 1).unwrap();
    assert!(matches!(out, BfsOutcome::BudgetExceeded { .. }));
}

#[test]
fn connectors_reject_bad_endpoints() {
    let g = gen_fixture("example1").unwrap();
    let bad = g.committee("not_jr").unwrap();
    let ok = g.committee("W").unwrap();
    assert!(matches!(connect_two_jr(&g.instance, &bad, &ok), Err(Error::PredicateViolated(_))));
    let w2 = g.committee("W2").unwrap();
    assert!(connect_ejr_4approx(&g.instance, &ok, &w2).is_err());
    let other = CandidateSet::from_indices(6, [0, 1]);
    assert!(bfs_connect(&g.instance, &ok, &other, &Predicate::jr(), 10).is_err());
}
