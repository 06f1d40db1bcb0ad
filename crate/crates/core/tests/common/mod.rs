//! Test-only oracles and fixtures. Nothing here calls into the simplex or the
//! SBM model builder.
#![allow(dead_code)]

use frontier_dyn::lp::{LinearProgram, Sense};
use frontier_dyn::panel_data::{
    generate_synthetic, GeneratorSpec, PanelDataset, Variable, VariableRole,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Solves the square system `a x = b` by Gaussian elimination with partial
/// pivoting; `None` when (near) singular.
pub fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-10 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                if f != 0.0 {
                    let pivot_row = a[col].clone();
                    for (x, p) in a[r][col..].iter_mut().zip(&pivot_row[col..]) {
                        *x -= f * p;
                    }
                    b[r] -= f * b[col];
                }
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

/// Minimum objective over all basic feasible points, found by enumerating
/// every choice of `n` active constraints (rows and bounds). `None` when no
/// vertex is feasible. Only valid for bounded programs.
pub fn vertex_enumeration(lp: &LinearProgram) -> Option<f64> {
    let n = lp.n_cols();
    // every constraint as (a, b, sense) meaning a·x {sense} b
    let mut cons: Vec<(Vec<f64>, f64, Sense)> = Vec::new();
    for i in 0..lp.n_rows() {
        cons.push((lp.row(i).to_vec(), lp.rhs()[i], lp.senses()[i]));
    }
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        cons.push((e.clone(), lp.lower()[j], Sense::Ge));
        if let Some(u) = lp.upper()[j] {
            cons.push((e, u, Sense::Le));
        }
    }
    let feasible = |x: &[f64]| {
        cons.iter().all(|(a, b, s)| {
            let lhs: f64 = a.iter().zip(x).map(|(p, q)| p * q).sum();
            let tol = 1e-9 * (1.0 + b.abs());
            match s {
                Sense::Le => lhs <= b + tol,
                Sense::Ge => lhs >= b - tol,
                Sense::Eq => (lhs - b).abs() <= tol,
            }
        })
    };
    let mut best: Option<f64> = None;
    let m = cons.len();
    let mut idx: Vec<usize> = (0..n).collect();
    if n > m {
        return None;
    }
    loop {
        let a: Vec<Vec<f64>> = idx.iter().map(|&i| cons[i].0.clone()).collect();
        let b: Vec<f64> = idx.iter().map(|&i| cons[i].1).collect();
        if let Some(x) = solve_square(a, b) {
            if feasible(&x) {
                let z: f64 = lp.objective().iter().zip(&x).map(|(c, v)| c * v).sum();
                best = Some(best.map_or(z, |b: f64| b.min(z)));
            }
        }
        // next combination
        let mut k = n;
        loop {
            if k == 0 {
                return best;
            }
            k -= 1;
            if idx[k] < m - n + k {
                idx[k] += 1;
                for l in k + 1..n {
                    idx[l] = idx[l - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Random bounded, feasible LP with `n` variables and `m` rows, built
/// around a known interior point. Includes a bounding row `Σx ≤ B`.
pub fn random_bounded_lp(rng: &mut ChaCha8Rng, n: usize, m: usize) -> LinearProgram {
    let point: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..3.0)).collect();
    let mut lp = LinearProgram::new(n);
    for j in 0..n {
        lp.set_objective(j, rng.gen_range(-1.0..1.0));
    }
    let sum: f64 = point.iter().sum();
    lp.add_row(&vec![1.0; n], Sense::Le, sum + rng.gen_range(0.5..5.0));
    for _ in 1..m {
        let a: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let at: f64 = a.iter().zip(&point).map(|(p, q)| p * q).sum();
        let (sense, b) = match rng.gen_range(0..5) {
            0 => (Sense::Eq, at),
            1 | 2 => (Sense::Le, at + rng.gen_range(0.0..2.0)),
            _ => (Sense::Ge, at - rng.gen_range(0.0..2.0)),
        };
        lp.add_row(&a, sense, b);
    }
    lp
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Synthetic panel with the five bank-ratio roles.
pub fn bank_dataset(n: usize, periods: usize, seed: u64) -> PanelDataset {
    let mut spec = GeneratorSpec::bank_ratios(n, seed);
    spec.period_count = periods;
    spec.period_labels = None;
    // keep denominators away from zero so no ratio term is dropped
    for v in &mut spec.variables {
        v.min = 0.05 * v.max;
    }
    generate_synthetic(&spec).unwrap()
}

/// Single-period panel of `n` DMUs with `m` inputs and `s` outputs, no links.
pub fn plain_dataset(n: usize, m: usize, s: usize, seed: u64) -> PanelDataset {
    let mut r = rng(seed);
    let mut vars = Vec::new();
    for i in 0..m {
        vars.push(Variable::new(format!("x{i}"), VariableRole::Input));
    }
    for i in 0..s {
        vars.push(Variable::new(format!("y{i}"), VariableRole::Output));
    }
    let values = (0..n * (m + s)).map(|_| r.gen_range(1.0..10.0)).collect();
    PanelDataset::new(
        (0..n).map(|j| format!("u{j:03}")).collect(),
        vec!["p".into()],
        vars,
        values,
    )
    .unwrap()
}

/// Two DMUs, one input and one output: A = (1, 2), B = (2, 1).
pub fn two_dmu_dataset() -> PanelDataset {
    PanelDataset::new(
        vec!["A".into(), "B".into()],
        vec!["p1".into()],
        vec![
            Variable::new("x", VariableRole::Input),
            Variable::new("y", VariableRole::Output),
        ],
        vec![1.0, 2.0, 2.0, 1.0],
    )
    .unwrap()
}

/// Brute-force standard SBM for a single-period, single-input,
/// single-output, two-DMU panel: scans λ_A over `[0, 1]` in `steps` steps
/// (λ_B = 1 − λ_A) with the slacks forced by the balance equations.
pub fn grid_sbm_two(data: &PanelDataset, evaluated: usize, steps: usize) -> f64 {
    let x = |j| data.value(j, 0, 0);
    let y = |j| data.value(j, 0, 1);
    let mut best = f64::INFINITY;
    for k in 0..=steps {
        let la = k as f64 / steps as f64;
        let lb = 1.0 - la;
        let s_minus = x(evaluated) - (la * x(0) + lb * x(1));
        let s_plus = (la * y(0) + lb * y(1)) - y(evaluated);
        if s_minus < -1e-12 || s_plus < -1e-12 {
            continue;
        }
        let ratio =
            (1.0 - s_minus.max(0.0) / x(evaluated)) / (1.0 + s_plus.max(0.0) / y(evaluated));
        best = best.min(ratio);
    }
    best
}

/// Super-efficiency score of a single-input, single-output DMU against one
/// other DMU: the projection is forced to `(max(x_o, x_r), min(y_o, y_r))`.
pub fn super_single_reference(data: &PanelDataset, evaluated: usize, reference: usize) -> f64 {
    let (xo, yo) = (data.value(evaluated, 0, 0), data.value(evaluated, 0, 1));
    let (xr, yr) = (data.value(reference, 0, 0), data.value(reference, 0, 1));
    let phi = (xr - xo).max(0.0);
    let psi = (yo - yr).max(0.0);
    (1.0 + phi / xo) / (1.0 - psi / yo)
}

/// Largest residual of the balance equations when the recovered λ and
/// slacks are substituted back, for a standard-variant result.
pub fn balance_residual(
    data: &PanelDataset,
    evaluated: usize,
    result: &frontier_dyn::EfficiencyResult,
) -> f64 {
    let mut worst: f64 = 0.0;
    for t in 0..data.n_periods() {
        for (v, var) in data.variables().iter().enumerate() {
            let combo: f64 = result
                .reference
                .iter()
                .zip(&result.lambdas[t])
                .map(|(&j, &l)| l * data.value(j, t, v))
                .sum();
            let s = result.slacks[t][v];
            let lhs = if var.role.is_input_like() {
                combo + s
            } else {
                combo - s
            };
            worst = worst.max((lhs - data.value(evaluated, t, v)).abs());
        }
    }
    worst
}
