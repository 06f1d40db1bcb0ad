mod common;

use frontier_dyn::lp::{solve, LinearProgram, LpStatus, Sense, SolverOptions};

#[test]
fn segment_vertices_enumerated() {
    // minimize −x−y on x+y ≤ 1: both (1,0) and (0,1) are optimal vertices.
    let lp = LinearProgram::from_dense(vec![-1.0, -1.0], &[vec![1.0, 1.0]], &[Sense::Le], &[1.0])
        .unwrap();
    assert_eq!(common::vertex_enumeration(&lp), Some(-1.0));
    let sol = solve(&lp, &SolverOptions::default()).unwrap();
    assert_eq!(sol.primal.unwrap(), vec![1.0, 0.0]);
}

#[test]
fn matches_vertex_enumeration_on_random_lps() {
    let mut rng = common::rng(2024);
    let mut checked = 0;
    for case in 0..200 {
        let n = 2 + case % 5;
        let m = 1 + (case / 5) % 6;
        let lp = common::random_bounded_lp(&mut rng, n, m);
        let Some(expected) = common::vertex_enumeration(&lp) else {
            continue;
        };
        let sol = solve(&lp, &SolverOptions::default()).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal, "case {case}");
        assert!(
            (sol.objective - expected).abs() < 1e-7,
            "case {case}: simplex {} vs oracle {expected}",
            sol.objective
        );
        let x = sol.primal.unwrap();
        assert!(
            lp.max_violation(&x) < 1e-9 * 10.0,
            "case {case} infeasible point"
        );
        checked += 1;
    }
    assert!(checked >= 50, "only {checked} feasible cases");
}

#[test]
fn reruns_are_bit_identical() {
    let mut rng = common::rng(7);
    for _ in 0..20 {
        let lp = common::random_bounded_lp(&mut rng, 6, 6);
        let a = solve(&lp, &SolverOptions::default()).unwrap();
        let b = solve(&lp, &SolverOptions::default()).unwrap();
        assert_eq!(a.status, b.status);
        assert_eq!(a.objective.to_bits(), b.objective.to_bits());
        assert_eq!(a.primal, b.primal);
    }
}

#[test]
fn lower_and_upper_bounds_match_oracle() {
    let mut rng = common::rng(99);
    for _ in 0..30 {
        let mut lp = common::random_bounded_lp(&mut rng, 4, 3);
        lp.set_bounds(0, 0.25, Some(2.0));
        lp.set_bounds(2, 0.0, Some(1.5));
        let oracle = common::vertex_enumeration(&lp);
        let sol = solve(&lp, &SolverOptions::default()).unwrap();
        match oracle {
            Some(z) => {
                assert_eq!(sol.status, LpStatus::Optimal);
                assert!((sol.objective - z).abs() < 1e-7);
            }
            None => assert_eq!(sol.status, LpStatus::Infeasible),
        }
    }
}
