mod common;

use std::time::Instant;

use hafpack_core::gallai::subdivide_terminal_edges;
use hafpack_core::oracle::is_ab_packing;
use hafpack_core::solver::{extract, randomize_weights, Objective};
use hafpack_core::{
    shortest_packing_oracle, solve_hrep, solve_randomized, solve_unique, EnumerationBudget, Error, HRepresentation,
    SolverConfig,
};

fn budget() -> EnumerationBudget {
    EnumerationBudget::default()
}

#[test]
fn unique_optimum_is_recovered() {
    let mut rng = common::rng(11);
    let mut checked = 0;
    while checked < 25 {
        let n = 5 + checked % 3;
        let (a, b) = [(2, 0), (2, 2), (0, 4), (4, 0), (0, 2)][checked % 5];
        let (g, t) = common::random_instance(&mut rng, n, 0.55, a, b, 25, true);
        let Ok(opt) = shortest_packing_oracle(&g, &t, |p| is_ab_packing(p, &t), &budget()) else {
            continue;
        };
        if !opt.is_unique() {
            continue;
        }
        let sol = solve_unique(&g, &t, None).unwrap();
        assert_eq!(sol.packing.canonical(), opt.packings[0]);
        assert_eq!(sol.weight, opt.weight);

        let sub = subdivide_terminal_edges(&g, &t);
        let ex = extract(&sub.graph, &t, &Objective::AbPacking).unwrap();
        assert_eq!(ex.leading, (opt.weight as usize, 1 << t.tau()));
        checked += 1;
    }
}

#[test]
fn deleting_an_edge_never_lowers_the_leading_degree() {
    let mut rng = common::rng(12);
    let mut checked = 0;
    while checked < 15 {
        let (g, t) = common::random_instance(&mut rng, 7, 0.5, 2, 2, 30, false);
        let Ok(opt) = shortest_packing_oracle(&g, &t, |p| is_ab_packing(p, &t), &budget()) else {
            continue;
        };
        if !opt.is_unique() {
            continue;
        }
        let cap = 7 * 30;
        let base = Objective::AbPacking.scalar(&g, &t, cap).unwrap().leading_term().unwrap().0;
        for e in 0..g.edge_count() {
            let after = Objective::AbPacking.scalar(&g.without_edge(e), &t, cap).unwrap().leading_term();
            assert!(after.is_none_or(|(d, _)| d >= base));
        }
        checked += 1;
    }
}

#[test]
fn certificate_and_signed_scalar_select_the_same_edges() {
    let mut rng = common::rng(13);
    let mut checked = 0;
    while checked < 10 {
        let (a, b) = [(2, 2), (4, 0), (0, 4)][checked % 3];
        let (g, t) = common::random_instance(&mut rng, 7, 0.5, a, b, 30, false);
        let direct = extract(&g, &t, &Objective::AbPacking);
        let cert = extract(&g, &t, &Objective::Certificate(HRepresentation::ab_certificate(a, b)));
        match (direct, cert) {
            (Ok(x), Ok(y)) => {
                assert_eq!(x.selected, y.selected);
                assert_eq!(x.leading.0, y.leading.0);
                checked += 1;
            }
            (x, y) => assert_eq!(x.map(|_| ()).unwrap_err(), y.map(|_| ()).unwrap_err()),
        }
    }
}

#[test]
fn randomized_solver_matches_the_oracle() {
    let mut rng = common::rng(14);
    let mut solved = 0;
    let mut rounds = 0;
    let start = Instant::now();
    while solved < 12 {
        let n = 6 + solved % 3;
        let (a, b) = [(2, 2), (4, 0), (0, 4)][solved % 3];
        let (g, t) = common::random_instance(&mut rng, n, 0.4, a, b, 1, true);
        let oracle = shortest_packing_oracle(&g, &t, |p| is_ab_packing(p, &t), &budget());
        let config = SolverConfig { seed: solved as u64, trials: 20 };
        match (oracle, solve_randomized(&g, &t, &config)) {
            (Ok(opt), Ok(sol)) => {
                assert_eq!(sol.weight, opt.weight);
                assert!(opt.packings.contains(&sol.packing.clone().canonical()));
                rounds += sol.trials;
                solved += 1;
            }
            (Err(Error::Infeasible), Err(Error::Infeasible)) => {}
            (o, s) => panic!("oracle {o:?} vs solver {s:?}"),
        }
    }
    eprintln!("12 instances, {rounds} rounds, {:?}", start.elapsed());
}

#[test]
fn randomized_solver_is_deterministic() {
    let mut rng = common::rng(15);
    let (g, t) = loop {
        let (g, t) = common::random_instance(&mut rng, 8, 0.5, 2, 2, 1, true);
        if shortest_packing_oracle(&g, &t, |p| is_ab_packing(p, &t), &budget()).is_ok() {
            break (g, t);
        }
    };
    let config = SolverConfig { seed: 99, trials: 20 };
    assert_eq!(solve_randomized(&g, &t, &config), solve_randomized(&g, &t, &config));
}

#[test]
fn two_path_certificates_match_filtered_oracles() {
    let mut rng = common::rng(16);
    for (rep, odd) in [(HRepresentation::two_paths(), false), (HRepresentation::two_paths_odd(), true)] {
        let mut solved = 0;
        while solved < 8 {
            let (g, t) = common::random_instance(&mut rng, 7, 0.45, 2, 2, 1, false);
            let family = |p: &hafpack_core::PathPacking| {
                let pairs = p.paths.iter().all(|q| {
                    let (s, e) = (q[0].min(*q.last().unwrap()), q[0].max(*q.last().unwrap()));
                    (s, e) == (0, 1) || (s, e) == (2, 3)
                });
                pairs && (!odd || p.length() % 2 == 1)
            };
            let oracle = shortest_packing_oracle(&g, &t, family, &budget());
            let config = SolverConfig { seed: solved as u64, trials: 20 };
            match (oracle, solve_hrep(&g, &t, &rep, &config)) {
                (Ok(opt), Ok(sol)) => {
                    assert_eq!(sol.weight, opt.weight);
                    assert!(family(&sol.packing));
                    solved += 1;
                }
                (Err(Error::Infeasible), Err(Error::Infeasible)) => {}
                (o, s) => panic!("oracle {o:?} vs solver {s:?}"),
            }
        }
    }
}

#[test]
fn certificate_solver_rejects_terminal_edges_and_wrong_sizes() {
    let g = hafpack_core::Graph::from_edges(4, [(0, 1, 1), (2, 3, 1)]).unwrap();
    let t = hafpack_core::Terminals::new(vec![0, 1], vec![2, 3]).unwrap();
    let config = SolverConfig::default();
    assert_eq!(solve_hrep(&g, &t, &HRepresentation::two_paths(), &config).unwrap_err(), Error::TerminalEdge(0, 1));
    let rep = HRepresentation::ab_certificate(2, 0);
    assert!(matches!(solve_hrep(&g, &t, &rep, &config), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn random_weights_are_uniform_on_their_window() {
    let g = hafpack_core::Graph::from_edges(4, [(0, 1, 1), (1, 2, 1), (2, 3, 1)]).unwrap();
    let (m, n) = (3u64, 4u64);
    let low = 2 * m * n;
    let mut counts = [0usize; 6];
    let mut rng = common::rng(17);
    let draws = 20_000;
    for _ in 0..draws {
        for w in randomize_weights(&g, &mut rng) {
            assert!((low..low + 2 * m).contains(&w));
            counts[(w - low) as usize] += 1;
        }
    }
    let expected = (draws * m as usize) as f64 / 6.0;
    for c in counts {
        assert!((c as f64 - expected).abs() <= 0.05 * expected, "{counts:?}");
    }
}
