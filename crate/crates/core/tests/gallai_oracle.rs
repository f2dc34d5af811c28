mod common;

use hafpack_core::gallai::{build_gallai, build_s_pq, build_s_signed, matching_to_packing};
use hafpack_core::oracle::{
    enumerate_all_packings, enumerate_matchings, is_ab_packing, matching_product, verify_lemma_hafs,
};
use hafpack_core::pmp::chi_decomposition_check;
use hafpack_core::{
    haf_bruteforce, shortest_packing_oracle, subdivide_terminal_edges, EnumerationBudget, Modulus,
    TruncatedPoly,
};
use rand::Rng;

fn budget() -> EnumerationBudget {
    EnumerationBudget::default()
}

#[test]
fn matching_sum_equals_pairing_hafnian() {
    let mut rng = common::rng(21);
    for i in 0..30 {
        let (a, b) = [(2, 0), (0, 2), (2, 2)][i % 3];
        let (g, t) = common::random_instance(&mut rng, 4 + i % 4, 0.6, a, b, 4, false);
        let h = build_gallai(&g, &t).unwrap();
        let modulus = Modulus::new(64, 64).unwrap();
        let s = build_s_signed(&h, modulus).unwrap();
        let mut sum = TruncatedPoly::zero(modulus);
        for m in enumerate_matchings(&h, &budget()).unwrap() {
            sum = &sum + &matching_product(&s, &m);
        }
        assert_eq!(sum, haf_bruteforce(&s).unwrap());
    }
}

#[test]
fn matchings_trace_exactly_the_terminal_packings() {
    let mut rng = common::rng(22);
    for i in 0..30 {
        let (a, b) = [(2, 0), (0, 4), (2, 2)][i % 3];
        let (g, t) = common::random_instance(&mut rng, 5 + i % 3, 0.5, a, b, 3, false);
        let h = build_gallai(&g, &t).unwrap();
        let mut traced: Vec<_> = enumerate_matchings(&h, &budget())
            .unwrap()
            .iter()
            .map(|m| matching_to_packing(&h, m).unwrap().canonical())
            .collect();
        traced.sort();
        traced.dedup();
        assert_eq!(traced, enumerate_all_packings(&g, &t, &budget()).unwrap());
    }
}

#[test]
fn oracle_optimum_survives_subdivision() {
    let mut rng = common::rng(23);
    for i in 0..40 {
        let (a, b) = [(2, 2), (4, 0), (0, 2)][i % 3];
        let (g, t) = common::random_instance(&mut rng, 6, 0.5, a, b, 5, true);
        let direct = shortest_packing_oracle(&g, &t, |p| is_ab_packing(p, &t), &budget());
        let sub = subdivide_terminal_edges(&g, &t);
        let via = shortest_packing_oracle(&sub.graph, &t, |p| is_ab_packing(p, &t), &budget());
        match (direct, via) {
            (Ok(x), Ok(y)) => {
                assert_eq!(x.weight, y.weight);
                let mut restored: Vec<_> = y.packings.iter().map(|p| sub.restore(p).canonical()).collect();
                restored.sort();
                assert_eq!(restored, x.packings);
            }
            (Err(x), Err(y)) => assert_eq!(x, y),
            (x, y) => panic!("{x:?} vs {y:?}"),
        }
    }
}

#[test]
fn lemma_audit_passes_on_random_instances() {
    let mut rng = common::rng(24);
    for i in 0..20 {
        let (a, b) = [(2, 0), (0, 2), (2, 2), (0, 4)][i % 4];
        let (g, t) = common::random_instance(&mut rng, 5 + i % 3, 0.55, a, b, 4, true);
        let report = verify_lemma_hafs(&g, &t, &budget()).unwrap();
        assert!(report.passed(), "{report:?}");
    }
}

#[test]
fn chi_decomposition_holds() {
    let mut rng = common::rng(25);
    for i in 0..15 {
        let (g, t) = common::random_instance(&mut rng, 5 + i % 2, 0.55, 2, 2, 3, false);
        let h = build_gallai(&g, &t).unwrap();
        let p: Vec<i64> = (0..4).map(|_| rng.random_range(-3..=3)).collect();
        let q: Vec<i64> = (0..4).map(|_| rng.random_range(-3..=3)).collect();
        assert!(chi_decomposition_check(&h, &p, &q).unwrap().holds());
        let direct = haf_bruteforce(&build_s_pq(&h, Modulus::new(64, 64).unwrap(), &p, &q).unwrap()).unwrap();
        assert_eq!(direct, chi_decomposition_check(&h, &p, &q).unwrap().lhs.truncate_cap(64));
    }
}
