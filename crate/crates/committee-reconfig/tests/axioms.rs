mod common;

use committee_reconfig::axioms::{check_ejr, check_ejr_plus, check_jr, ejr_plus_violators, Axiom};
use committee_reconfig::{Alpha, CandidateSet, Instance};
use common::*;
use proptest::prelude::*;

fn committees(inst: &Instance) -> Vec<CandidateSet> {
    combinations(inst.m(), inst.k()).into_iter().map(|c| CandidateSet::from_indices(inst.m(), c)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn checkers_match_group_enumeration(inst in arb_instance(9, 7, 4)) {
        let b = Ballots::of(&inst);
        let g = groups(&b);
        for w in committees(&inst) {
            let members = w.to_vec();
            for (num, den) in [(1u64, 1u64), (4, 3), (2, 1), (4, 1)] {
                let a = Alpha::ratio(num, den).unwrap();
                let (bj, be, bp) = brute_axioms(&b, &g, &members, num, den);
                prop_assert_eq!(check_jr(&inst, &w, &a).is_none(), bj);
                prop_assert_eq!(check_ejr(&inst, &w, &a, inst.k()).unwrap().is_none(), be);
                if num == den {
                    prop_assert_eq!(check_ejr_plus(&inst, &w).is_none(), bp);
                }
            }
        }
    }

    #[test]
    fn witnesses_are_genuine(inst in arb_instance(12, 8, 5)) {
        let (n, k) = (inst.n(), inst.k());
        let counts_of = |w: &CandidateSet| inst.approval_counts(w);
        for w in committees(&inst) {
            let counts = counts_of(&w);
            if let Some(x) = check_jr(&inst, &w, &Alpha::one()) {
                prop_assert!(x.group.count() * k >= n);
                for v in x.group.iter() {
                    prop_assert!(inst.approves(v, x.candidate));
                    prop_assert_eq!(counts[v], 0);
                }
            }
            if let Some(x) = check_ejr(&inst, &w, &Alpha::one(), k).unwrap() {
                prop_assert!(x.group.count() * k >= x.ell * n);
                prop_assert_eq!(x.common.count(), x.ell);
                for v in x.group.iter() {
                    prop_assert!((counts[v] as usize) < x.ell);
                    prop_assert!(x.common.iter().all(|c| inst.approves(v, c)));
                }
            }
            if let Some(x) = check_ejr_plus(&inst, &w) {
                prop_assert!(!w.contains(x.candidate));
                prop_assert!(x.group.count() * k >= x.ell * n);
                for v in x.group.iter() {
                    prop_assert!((counts[v] as usize) < x.ell && inst.approves(v, x.candidate));
                }
            }
        }
    }

    #[test]
    fn axioms_are_nested(inst in arb_instance(12, 8, 5)) {
        for w in committees(&inst) {
            let jr = Axiom::Jr(Alpha::one()).holds(&inst, &w);
            let ejr = Axiom::Ejr(Alpha::one()).holds(&inst, &w);
            let plus = Axiom::EjrPlus.holds(&inst, &w);
            prop_assert!(!plus || ejr);
            prop_assert!(!ejr || jr);
            prop_assert!(!jr || Axiom::Jr(Alpha::integer(2)).holds(&inst, &w));
            prop_assert!(!ejr || Axiom::Ejr(Alpha::integer(4)).holds(&inst, &w));
        }
    }

    #[test]
    fn violators_list_extends_first_witness(inst in arb_instance(12, 8, 5)) {
        for w in committees(&inst) {
            let all = ejr_plus_violators(&inst, &w);
            match check_ejr_plus(&inst, &w) {
                None => prop_assert!(all.is_empty()),
                Some(first) => prop_assert!(all.iter().any(|x| x.candidate == first.candidate)),
            }
        }
    }
}

#[test]
fn witness_json_uses_fraction_strings() {
    let inst = Instance::parse("9 6 3\n0\n0 1\n0 1\n2 3 4\n2 3 4\n2 3 4\n2 3 4\n2 3 5\n2 3 5\n").unwrap();
    let w = inst.committee(&[1, 4, 5]).unwrap();
    let wit = Axiom::Ejr(Alpha::one()).check(&inst, &w).unwrap();
    let j = serde_json::to_value(&wit).unwrap();
    assert_eq!(j["alpha"], "1/1");
    assert_eq!(j["ell"], 2);
}

#[test]
fn tightness_alpha_threshold() {
    // with n/k = 5 and alpha = 6/5, six uncovered supporters are needed
    let a: Alpha = "6/5".parse().unwrap();
    assert_eq!(a.min_group(1, 60, 12), 6);
    assert!("1/2".parse::<Alpha>().is_err());
}
