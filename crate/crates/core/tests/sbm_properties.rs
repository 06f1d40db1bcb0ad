mod common;

use frontier_dyn::lp::LpStatus;
use frontier_dyn::sbm::{
    build_model, evaluate_all, evaluate_dmu, full_reference, static_sbm, SbmConfig, Variant,
};

#[test]
fn two_dmu_scores_match_grid_search() {
    let data = common::two_dmu_dataset();
    let cfg = SbmConfig::default();
    for j in 0..2 {
        let lp = evaluate_dmu(&data, j, &[0, 1], &cfg).unwrap().rho;
        let grid = common::grid_sbm_two(&data, j, 10_000);
        assert!((lp - grid).abs() < 1e-6, "dmu {j}: {lp} vs grid {grid}");
    }
    assert!((common::grid_sbm_two(&data, 1, 10_000) - 0.25).abs() < 1e-12);
    let stat = static_sbm(&data, 0, 1, &cfg).unwrap();
    assert!((stat.rho - 0.25).abs() < 1e-9);
}

#[test]
fn super_efficiency_two_dmus_matches_closed_form() {
    let data = common::two_dmu_dataset();
    let cfg = SbmConfig::super_efficiency();
    let a = evaluate_dmu(&data, 0, &[1], &cfg).unwrap();
    let expected = common::super_single_reference(&data, 0, 1);
    assert_eq!(a.status, LpStatus::Optimal);
    assert!((a.rho - expected).abs() < 1e-9);
    assert!(a.rho > 1.0);
}

#[test]
fn standard_scores_bounded_and_characterized() {
    for (seed, n, t) in [(1, 5, 1), (2, 30, 3), (3, 30, 1), (4, 12, 3)] {
        let data = common::bank_dataset(n, t, seed);
        for r in evaluate_all(&data, &SbmConfig::default()).unwrap() {
            let res = &r.result;
            assert_eq!(res.status, LpStatus::Optimal);
            assert!(res.rho > 0.0 && res.rho <= 1.0 + 1e-9, "rho {}", res.rho);
            let efficient = (res.rho - 1.0).abs() < 1e-6;
            assert_eq!(efficient, res.max_slack() < 1e-6, "dmu {}", r.dmu_id);
            assert_eq!(res.dropped_ratio_terms, 0);
            for lambdas in &res.lambdas {
                assert!((lambdas.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            }
            assert!(common::balance_residual(&data, r.dmu, res) < 1e-7);
        }
    }
}

#[test]
fn crs_variant_is_bounded_too() {
    let data = common::bank_dataset(15, 3, 11);
    let cfg = SbmConfig {
        vrs: false,
        ..SbmConfig::default()
    };
    for r in evaluate_all(&data, &cfg).unwrap() {
        assert_eq!(r.result.status, LpStatus::Optimal);
        assert!(r.result.rho > 0.0 && r.result.rho <= 1.0 + 1e-9);
    }
}

#[test]
fn units_invariance() {
    let data = common::bank_dataset(20, 3, 5);
    let cfg = SbmConfig::default();
    let base = evaluate_all(&data, &cfg).unwrap();
    for v in 0..data.n_variables() {
        for c in [0.5, 10.0] {
            let scaled = evaluate_all(&data.scale_variable(v, c), &cfg).unwrap();
            for (a, b) in base.iter().zip(&scaled) {
                assert_eq!(a.dmu, b.dmu, "ranking changed (var {v}, c {c})");
                assert!((a.result.rho - b.result.rho).abs() < 1e-6);
            }
        }
    }
}

#[test]
fn larger_reference_never_raises_score() {
    let data = common::bank_dataset(30, 3, 8);
    let cfg = SbmConfig::default();
    for j in [0, 7, 19] {
        let small: Vec<usize> = (0..15).chain([j]).collect();
        let a = evaluate_dmu(&data, j, &small, &cfg).unwrap().rho;
        let b = evaluate_dmu(&data, j, &full_reference(&data, j, Variant::Standard), &cfg)
            .unwrap()
            .rho;
        assert!(b <= a + 1e-9, "dmu {j}: full {b} > subset {a}");
    }
}

#[test]
fn single_period_dynamic_equals_static() {
    for seed in 0..5 {
        let data = common::plain_dataset(12, 2, 2, seed);
        let cfg = SbmConfig::default();
        for j in 0..data.n_dmus() {
            let d =
                evaluate_dmu(&data, j, &full_reference(&data, j, Variant::Standard), &cfg).unwrap();
            let s = static_sbm(&data, 0, j, &cfg).unwrap();
            assert!((d.rho - s.rho).abs() < 1e-9);
        }
    }
}

#[test]
fn zero_inputs_are_dropped_not_fatal() {
    let data = common::bank_dataset(10, 2, 3);
    // Zero out DMU 0's first input in every period by scaling a copy.
    let mut values = Vec::new();
    for j in 0..data.n_dmus() {
        for t in 0..data.n_periods() {
            for v in 0..data.n_variables() {
                let x = data.value(j, t, v);
                values.push(if j == 0 && v == 0 { 0.0 } else { x });
            }
        }
    }
    let zeroed = frontier_dyn::PanelDataset::new(
        data.dmu_ids().to_vec(),
        data.periods().to_vec(),
        data.variables().to_vec(),
        values,
    )
    .unwrap();
    let r = evaluate_dmu(
        &zeroed,
        0,
        &(0..10).collect::<Vec<_>>(),
        &SbmConfig::default(),
    )
    .unwrap();
    assert_eq!(r.dropped_ratio_terms, 2);
    assert!(r.rho.is_finite() && r.rho > 0.0 && r.rho <= 1.0 + 1e-9);
}

#[test]
fn weights_change_score_but_not_bounds() {
    let data = common::bank_dataset(10, 3, 21);
    let cfg = SbmConfig {
        period_weights: Some(vec![0.5, 1.0, 1.5]),
        ..SbmConfig::default()
    };
    for r in evaluate_all(&data, &cfg).unwrap() {
        assert!(r.result.rho > 0.0 && r.result.rho <= 1.0 + 1e-9);
    }
}

#[test]
fn super_efficiency_of_dominating_dmu() {
    // DMU 0 strictly dominates: less of every input-like, more of every
    // output-like variable, in every period.
    let base = common::bank_dataset(12, 3, 31);
    let mut values = Vec::new();
    for j in 0..base.n_dmus() {
        for t in 0..base.n_periods() {
            for (v, var) in base.variables().iter().enumerate() {
                let x = base.value(j, t, v);
                values.push(match (j, var.role.is_input_like()) {
                    (0, true) => 0.001,
                    (0, false) => 0.2,
                    _ => x,
                });
            }
        }
    }
    let data = frontier_dyn::PanelDataset::new(
        base.dmu_ids().to_vec(),
        base.periods().to_vec(),
        base.variables().to_vec(),
        values,
    )
    .unwrap();
    let cfg = SbmConfig::super_efficiency();
    let r = evaluate_dmu(&data, 0, &(1..12).collect::<Vec<_>>(), &cfg).unwrap();
    assert_eq!(r.status, LpStatus::Optimal);
    assert!(r.super_efficient);
    assert!(r.rho > 1.0, "rho {}", r.rho);
    let ranked = evaluate_all(&data, &cfg).unwrap();
    assert_eq!(ranked[0].dmu, 0);
}

#[test]
fn super_scores_never_below_standard() {
    let data = common::bank_dataset(25, 3, 41);
    let std = evaluate_all(&data, &SbmConfig::default()).unwrap();
    let sup = evaluate_all(&data, &SbmConfig::super_efficiency()).unwrap();
    for s in &std {
        let p = sup.iter().find(|r| r.dmu == s.dmu).unwrap();
        if p.result.is_optimal() {
            assert!(p.result.rho >= s.result.rho - 1e-9);
            if p.result.super_efficient {
                assert!(p.result.rho >= 1.0 - 1e-9);
            }
        }
    }
}

#[test]
fn model_shape_counts() {
    let data = common::bank_dataset(40, 3, 2);
    let all: Vec<usize> = (0..40).collect();
    let m = build_model(&data, 3, &all, &SbmConfig::default()).unwrap();
    assert_eq!(m.lp.n_cols(), 40 * 3 + 5 * 3 + 1);
    assert_eq!(m.lp.n_rows(), 5 * 3 + 2 * 2 + 3 + 1);
    let crs = SbmConfig {
        vrs: false,
        ..SbmConfig::default()
    };
    assert_eq!(build_model(&data, 3, &all, &crs).unwrap().lp.n_rows(), 20);
}
