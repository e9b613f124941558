mod common;

use committee_reconfig::axioms::{check_ejr, check_ejr_plus, check_jr};
use committee_reconfig::generators::{gen_fixture, gen_grid};
use committee_reconfig::rules::{ccav_exact, is_affordable, pav_exact, Rule};
use committee_reconfig::{Alpha, CandidateSet, Instance};
use common::*;
use proptest::prelude::*;

/// Affordable iff every subset `X` is approved by at least `|X| n / k` voters.
fn hall_affordable(inst: &Instance, w: &[usize]) -> bool {
    (1u32..1 << w.len()).all(|mask| {
        let x: Vec<usize> = (0..w.len()).filter(|i| mask >> i & 1 == 1).map(|i| w[i]).collect();
        let covered = (0..inst.n()).filter(|&v| x.iter().any(|&c| inst.approves(v, c))).count();
        covered * inst.k() >= x.len() * inst.n()
    })
}

/// PAV score scaled by 60, exact for committees of size at most 5.
fn pav60(inst: &Instance, w: &[usize]) -> u64 {
    (0..inst.n())
        .map(|v| {
            let c = w.iter().filter(|&&x| inst.approves(v, x)).count() as u64;
            (1..=c).map(|y| 60 / y).sum::<u64>()
        })
        .sum()
}

fn argmax(inst: &Instance, score: impl Fn(&[usize]) -> u64) -> Vec<Vec<usize>> {
    let all = combinations(inst.m(), inst.k());
    let best = all.iter().map(|c| score(c)).max().unwrap();
    all.into_iter().filter(|c| score(c) == best).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn affordability_matches_hall_condition(inst in arb_instance(10, 7, 5)) {
        for size in 0..=inst.k() {
            for w in combinations(inst.m(), size) {
                let set = CandidateSet::from_indices(inst.m(), w.iter().copied());
                let pay = is_affordable(&inst, &set);
                prop_assert_eq!(pay.is_some(), hall_affordable(&inst, &w));
                if let Some(p) = pay {
                    prop_assert!(p.verify(&inst, &set).is_ok());
                }
            }
        }
    }

    #[test]
    fn exhaustive_rules_match_enumeration(inst in arb_instance(12, 8, 5)) {
        let pav: Vec<Vec<usize>> = pav_exact(&inst).unwrap().iter().map(|w| w.to_vec()).collect();
        prop_assert_eq!(pav, argmax(&inst, |w| pav60(&inst, w)));
        let cc: Vec<Vec<usize>> = ccav_exact(&inst).unwrap().iter().map(|w| w.to_vec()).collect();
        let cover = |w: &[usize]| (0..inst.n()).filter(|&v| w.iter().any(|&c| inst.approves(v, c))).count() as u64;
        prop_assert_eq!(cc, argmax(&inst, cover));
    }

    #[test]
    fn outputs_satisfy_their_axioms(inst in arb_instance(14, 8, 5)) {
        let one = Alpha::one();
        for rule in Rule::ALL {
            let out = rule.run(&inst).unwrap();
            prop_assert_eq!(out.committee.count(), inst.k());
            prop_assert!(out.core.is_subset(&out.committee));
            let w = &out.committee;
            match rule {
                Rule::Gjcr | Rule::Mes | Rule::Pav => prop_assert!(check_ejr_plus(&inst, w).is_none()),
                Rule::GreedyEjr => prop_assert!(check_ejr(&inst, w, &one, inst.k()).unwrap().is_none()),
                _ => prop_assert!(check_jr(&inst, w, &one).is_none()),
            }
            if let Some(p) = &out.payments {
                prop_assert!(p.verify(&inst, &out.core).is_ok(), "{} payments invalid", rule);
            }
        }
    }

    #[test]
    fn rules_are_deterministic(inst in arb_instance(10, 7, 4)) {
        for rule in Rule::ALL {
            prop_assert_eq!(rule.run(&inst).unwrap(), rule.run(&inst).unwrap());
        }
    }
}

#[test]
fn ccav_table_has_no_affordable_member() {
    let g = gen_fixture("ccav_table").unwrap();
    let inst = &g.instance;
    let w = g.committee("ccav").unwrap();
    assert!(ccav_exact(inst).unwrap().contains(&w));
    for c in w.iter() {
        assert!(is_affordable(inst, &CandidateSet::from_indices(4, [c])).is_none());
    }
    assert!(is_affordable(inst, &CandidateSet::from_indices(4, [3])).is_some());
}

#[test]
fn grid_pav_optima_are_rows_and_columns() {
    let g = gen_grid(3).unwrap();
    let best = pav_exact(&g.instance).unwrap();
    assert_eq!(best, vec![g.committee("rows").unwrap(), g.committee("cols").unwrap()]);
}

#[test]
fn rule_names_parse() {
    for rule in Rule::ALL {
        assert_eq!(rule.name().parse::<Rule>().unwrap(), rule);
    }
    assert!("borda".parse::<Rule>().is_err());
}
