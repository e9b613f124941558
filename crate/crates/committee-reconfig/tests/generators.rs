mod common;

use committee_reconfig::combin::binomial;
use committee_reconfig::generators::{
    colex_rank, colex_unrank, gen_fixture, gen_grid, gen_isolated, gen_random, gen_tightness, Family, IsolatedLayout,
    TightnessLayout, FIXTURES,
};
use committee_reconfig::reconfig::Predicate;
use committee_reconfig::{Error, Instance};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #[test]
    fn colex_round_trips(mut s in proptest::collection::btree_set(0usize..40, 0..8)) {
        let v: Vec<usize> = std::mem::take(&mut s).into_iter().collect();
        prop_assert_eq!(colex_unrank(colex_rank(&v), v.len()), v.clone());
        if let Some(&top) = v.last() {
            prop_assert!(colex_rank(&v) < binomial(top as u64 + 1, v.len() as u64));
        }
    }
}

fn supporters_set(inst: &Instance, c: usize) -> Vec<usize> {
    inst.supporters(c).collect()
}

#[test]
fn isolated_supports_follow_layout() {
    let g = gen_isolated(3).unwrap();
    let lay = IsolatedLayout { k: 3 };
    let inst = &g.instance;
    assert_eq!((inst.n(), inst.k()), (27, 3));
    assert_eq!(inst.m() as u128, 9 * binomial(18, 8) + 3);
    for i in 0..3 {
        assert_eq!(supporters_set(inst, i), (3 * i..3 * i + 3).collect::<Vec<_>>());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..500 {
        let c = rng.gen_range(3..inst.m());
        let (i, s) = lay.decode(c).unwrap();
        assert_eq!(lay.d_index(i, &s), c);
        let mut expect: Vec<usize> = std::iter::once(i).chain(s.iter().map(|x| 9 + x)).collect();
        expect.sort_unstable();
        assert_eq!(supporters_set(inst, c), expect);
        assert_eq!(expect.len(), 9);
    }
    let classes = g.descriptor.automorphism_classes.as_ref().unwrap();
    assert_eq!(classes.iter().map(|c| lay.swap_class(c.remove, c.add)).collect::<Vec<_>>(), vec![0, 1]);
    assert!(Predicate::jr().holds(inst, &g.committee("W").unwrap()));
}

#[test]
fn tightness_supports_follow_layout() {
    let g = gen_tightness(3).unwrap();
    let lay = TightnessLayout { r: 3 };
    let inst = &g.instance;
    assert_eq!((inst.n(), inst.k()), (60, 12));
    assert_eq!(inst.m() as u128, lay.m());
    assert_eq!(lay.alpha(), (6, 5));
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..500 {
        let mut a: Vec<usize> = rand::seq::index::sample(&mut rng, 48, 3).into_vec();
        let mut b: Vec<usize> = rand::seq::index::sample(&mut rng, 12, 3).into_vec();
        a.sort_unstable();
        b.sort_unstable();
        let expect: Vec<usize> = a.iter().copied().chain(b.iter().map(|x| 48 + x)).collect();
        assert_eq!(supporters_set(inst, lay.d_index(&a, &b)), expect);
    }
    let w2 = g.committee("W2").unwrap();
    assert_eq!(w2.iter().filter(|&c| c >= 12).count(), 4);
    for w in ["W", "W2"] {
        assert!(Predicate::jr().holds(inst, &g.committee(w).unwrap()), "{w}");
    }
}

#[test]
fn random_density_is_calibrated() {
    let (n, m, p) = (400, 250, 0.3);
    let inst = gen_random(n, m, 5, p, 99).unwrap().instance;
    let ones: usize = (0..m).map(|c| inst.support_size(c)).sum();
    let cells = (n * m) as f64;
    let sd = (cells * p * (1.0 - p)).sqrt();
    assert!((ones as f64 - cells * p).abs() < 3.0 * sd, "{ones} approvals");
    assert_ne!(inst, gen_random(n, m, 5, p, 100).unwrap().instance);
}

#[test]
fn sidecar_carries_family_and_committees() {
    let g = gen_isolated(3).unwrap();
    let j = g.sidecar();
    assert_eq!(j["descriptor"]["family"], "isolated");
    assert_eq!(j["descriptor"]["k"], 3);
    assert_eq!(j["descriptor"]["automorphism_classes"][1]["label"], "other-block");
    assert_eq!(j["committees"][0]["members"], serde_json::json!([0, 1, 2]));
    let back: Family = serde_json::from_value(j["descriptor"].clone()).unwrap();
    assert_eq!(back, Family::Isolated { k: 3 });
    let grid = gen_grid(2).unwrap().sidecar();
    assert!(grid["descriptor"].get("automorphism_classes").is_none());
}

#[test]
fn fixtures_round_trip_through_text() {
    for f in FIXTURES {
        let g = gen_fixture(f).unwrap();
        assert_eq!(Instance::parse(&g.instance.to_text()).unwrap(), g.instance);
    }
}

#[test]
fn bad_parameters_are_rejected() {
    assert!(matches!(gen_isolated(2), Err(Error::InvalidInput(_))));
    assert!(matches!(gen_tightness(2), Err(Error::InvalidInput(_))));
    assert!(matches!(gen_isolated(5000), Err(Error::TooLarge { .. })));
    assert!(gen_grid(1).is_err());
    assert!(gen_random(3, 2, 3, 0.5, 0).is_err());
    assert!(gen_random(3, 4, 2, 1.5, 0).is_err());
}
