//! Dynamic slacks-based measure.
//!
//! For an evaluated DMU `o` and a reference set `R`, the standard score is
//!
//! ```text
//!        Σ_t W_t [1 − 1/(m+n_bad)  (Σ_i s⁻_it/x_iot + Σ_i s^bad_it/z^bad_iot)]
//! ρ = min ─────────────────────────────────────────────────────────────────────
//!        Σ_t W_t [1 + 1/(s+n_good) (Σ_i s⁺_it/y_iot + Σ_i s^good_it/z^good_iot)]
//! ```
//!
//! (both sums averaged over the T periods) subject to per-period balance
//! rows for every variable, link continuity between consecutive periods,
//! and optionally convexity `Σ_j λ^t_j = 1`. The fraction is linearized by a
//! scaling variable `q`: every λ and slack is multiplied by `q` and the
//! scaled denominator is pinned to 1, so the LP optimum equals ρ.
//!
//! The super-efficiency variant scores DMUs that are efficient under the
//! standard model against a reference set that excludes them, letting the
//! projected point move outside the DMU (more input, less output); its score
//! is ≥ 1. DMUs that are inefficient under the standard model keep their
//! standard score.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lp::{self, LinearProgram, LpError, LpStatus, Sense, SolverOptions};
use crate::panel_data::PanelDataset;

/// Standard rho at or above `1 − EFFICIENT_TOL` counts as efficient.
pub const EFFICIENT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Standard,
    SuperEfficiency,
}

/// Algebraic form of the ratio objective. Only the non-oriented dynamic SBM
/// form exists today.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveForm {
    #[default]
    NonOriented,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SbmConfig {
    /// Period weights; `None` means all ones. Must have one entry per period.
    pub period_weights: Option<Vec<f64>>,
    pub variant: Variant,
    /// Variable returns to scale (convexity row per period).
    pub vrs: bool,
    /// Ratio terms whose denominator datum is below this are dropped.
    pub zero_denominator_epsilon: f64,
    pub objective_form: ObjectiveForm,
    pub solver: SolverOptions,
}

impl Default for SbmConfig {
    fn default() -> Self {
        Self {
            period_weights: None,
            variant: Variant::Standard,
            vrs: true,
            zero_denominator_epsilon: 1e-12,
            objective_form: ObjectiveForm::NonOriented,
            solver: SolverOptions::default(),
        }
    }
}

impl SbmConfig {
    pub fn super_efficiency() -> Self {
        Self {
            variant: Variant::SuperEfficiency,
            ..Self::default()
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SbmError {
    #[error("reference set is empty")]
    EmptyReferenceSet,
    #[error("standard variant requires the evaluated DMU in its reference set")]
    EvaluatedNotInReference,
    #[error("super-efficiency variant requires the evaluated DMU outside its reference set")]
    EvaluatedInReference,
    #[error("DMU index {0} out of range")]
    DmuOutOfRange(usize),
    #[error("period {period} out of range (dataset has {periods})")]
    PeriodOutOfRange { period: usize, periods: usize },
    #[error("{got} period weights given for {expected} periods")]
    WeightCount { expected: usize, got: usize },
    #[error("period weights must be positive and finite")]
    NonPositiveWeight,
    #[error("zero-denominator epsilon must be positive")]
    BadEpsilon,
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// Column and row layout of a built model.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelLayout {
    pub variant: Variant,
    /// Dataset period indices covered, in order.
    pub periods: Vec<usize>,
    /// Reference DMU indices, ascending; λ columns follow this order.
    pub reference: Vec<usize>,
    pub n_vars: usize,
}

impl ModelLayout {
    pub fn lambda_col(&self, k: usize, r: usize) -> usize {
        k * self.reference.len() + r
    }

    pub fn slack_col(&self, k: usize, v: usize) -> usize {
        self.periods.len() * self.reference.len() + k * self.n_vars + v
    }

    pub fn q_col(&self) -> usize {
        self.periods.len() * (self.reference.len() + self.n_vars)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SbmModel {
    pub lp: LinearProgram,
    pub layout: ModelLayout,
    pub dropped_ratio_terms: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyResult {
    /// Efficiency score; NaN unless `status` is `Optimal`.
    pub rho: f64,
    pub status: LpStatus,
    /// `slacks[t][v]` in original units. Input-like variables hold excess,
    /// output-like variables hold shortage. When `super_efficient` is set
    /// they hold the distance by which the projection lies outside the DMU
    /// (extra input, missing output) instead.
    pub slacks: Vec<Vec<f64>>,
    /// `lambdas[t][r]`, aligned with `reference`.
    pub lambdas: Vec<Vec<f64>>,
    pub reference: Vec<usize>,
    pub dropped_ratio_terms: usize,
    pub super_efficient: bool,
    pub iterations: usize,
}

impl EfficiencyResult {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }

    pub fn max_slack(&self) -> f64 {
        self.slacks
            .iter()
            .flatten()
            .fold(0.0_f64, |acc, &s| acc.max(s))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedResult {
    /// 1-based rank; infeasible results rank after all optimal ones.
    pub rank: usize,
    pub dmu: usize,
    pub dmu_id: String,
    pub result: EfficiencyResult,
}

fn check_config(data: &PanelDataset, config: &SbmConfig) -> Result<Vec<f64>, SbmError> {
    if config.zero_denominator_epsilon.is_nan() || config.zero_denominator_epsilon <= 0.0 {
        return Err(SbmError::BadEpsilon);
    }
    let t = data.n_periods();
    match &config.period_weights {
        None => Ok(vec![1.0; t]),
        Some(w) if w.len() != t => Err(SbmError::WeightCount {
            expected: t,
            got: w.len(),
        }),
        Some(w) if w.iter().any(|&v| !(v > 0.0 && v.is_finite())) => {
            Err(SbmError::NonPositiveWeight)
        }
        Some(w) => Ok(w.clone()),
    }
}

fn normalize_reference(data: &PanelDataset, reference: &[usize]) -> Result<Vec<usize>, SbmError> {
    let mut r = reference.to_vec();
    if let Some(&bad) = r.iter().find(|&&j| j >= data.n_dmus()) {
        return Err(SbmError::DmuOutOfRange(bad));
    }
    r.sort_unstable();
    r.dedup();
    if r.is_empty() {
        return Err(SbmError::EmptyReferenceSet);
    }
    Ok(r)
}

/// Builds the linearized dynamic SBM program for `evaluated` against
/// `reference` over all periods.
///
/// Standard: the evaluated DMU must be in `reference`. SuperEfficiency: it
/// must not be, and the program is the super-efficiency form (see module
/// docs).
pub fn build_model(
    data: &PanelDataset,
    evaluated: usize,
    reference: &[usize],
    config: &SbmConfig,
) -> Result<SbmModel, SbmError> {
    let weights = check_config(data, config)?;
    if evaluated >= data.n_dmus() {
        return Err(SbmError::DmuOutOfRange(evaluated));
    }
    let reference = normalize_reference(data, reference)?;
    let contains = reference.binary_search(&evaluated).is_ok();
    match config.variant {
        Variant::Standard if !contains => return Err(SbmError::EvaluatedNotInReference),
        Variant::SuperEfficiency if contains => return Err(SbmError::EvaluatedInReference),
        _ => {}
    }
    let periods: Vec<usize> = (0..data.n_periods()).collect();
    Ok(assemble(
        data,
        evaluated,
        reference,
        periods,
        &weights,
        true,
        config,
        config.variant,
    ))
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    data: &PanelDataset,
    evaluated: usize,
    reference: Vec<usize>,
    periods: Vec<usize>,
    weights: &[f64],
    continuity: bool,
    config: &SbmConfig,
    variant: Variant,
) -> SbmModel {
    let vars = data.variables();
    let n_vars = vars.len();
    let n_ref = reference.len();
    let n_per = periods.len();
    let layout = ModelLayout {
        variant,
        periods,
        reference,
        n_vars,
    };
    let n_cols = layout.q_col() + 1;
    let q = layout.q_col();
    let mut lp = LinearProgram::new(n_cols);
    let mut normalization = vec![0.0; n_cols];
    let mut dropped = 0;
    let eps = config.zero_denominator_epsilon;
    let is_super = variant == Variant::SuperEfficiency;

    for (k, &t) in layout.periods.iter().enumerate() {
        let wt = weights[t] / n_per as f64;
        let kept = |input_like: bool| {
            vars.iter()
                .enumerate()
                .filter(|(v, var)| {
                    var.role.is_input_like() == input_like && data.value(evaluated, t, *v) >= eps
                })
                .count()
        };
        let (kept_in, kept_out) = (kept(true), kept(false));
        dropped += n_vars - kept_in - kept_out;

        lp.set_objective(q, lp.objective()[q] + wt);
        normalization[q] += wt;

        for (v, var) in vars.iter().enumerate() {
            let own = data.value(evaluated, t, v);
            let s = layout.slack_col(k, v);
            let mut row = vec![0.0; n_cols];
            for (r, &j) in layout.reference.iter().enumerate() {
                row[layout.lambda_col(k, r)] = data.value(j, t, v);
            }
            row[q] = -own;
            let input_like = var.role.is_input_like();
            let ratio = own >= eps;
            match (is_super, input_like) {
                // Σλx + s⁻ = q·x₀
                (false, true) => {
                    row[s] = 1.0;
                    lp.add_row(&row, Sense::Eq, 0.0);
                    if ratio {
                        lp.set_objective(s, -wt / (kept_in as f64 * own));
                    }
                }
                // Σλy − s⁺ = q·y₀
                (false, false) => {
                    row[s] = -1.0;
                    lp.add_row(&row, Sense::Eq, 0.0);
                    if ratio {
                        normalization[s] = wt / (kept_out as f64 * own);
                    }
                }
                // Σλx ≤ q·x₀ + φ
                (true, true) => {
                    row[s] = -1.0;
                    lp.add_row(&row, Sense::Le, 0.0);
                    if ratio {
                        lp.set_objective(s, wt / (kept_in as f64 * own));
                    }
                }
                // Σλy ≥ q·y₀ − ψ
                (true, false) => {
                    row[s] = 1.0;
                    lp.add_row(&row, Sense::Ge, 0.0);
                    if ratio {
                        normalization[s] = -wt / (kept_out as f64 * own);
                    }
                }
            }
        }
    }

    if continuity {
        for k in 0..n_per.saturating_sub(1) {
            let t = layout.periods[k];
            for (v, var) in vars.iter().enumerate() {
                if !var.role.is_link() {
                    continue;
                }
                let mut row = vec![0.0; n_cols];
                for (r, &j) in layout.reference.iter().enumerate() {
                    let z = data.value(j, t, v);
                    row[layout.lambda_col(k, r)] = z;
                    row[layout.lambda_col(k + 1, r)] = -z;
                }
                lp.add_row(&row, Sense::Eq, 0.0);
            }
        }
    }

    if config.vrs {
        for k in 0..n_per {
            let mut row = vec![0.0; n_cols];
            for r in 0..n_ref {
                row[layout.lambda_col(k, r)] = 1.0;
            }
            row[q] = -1.0;
            lp.add_row(&row, Sense::Eq, 0.0);
        }
    }

    lp.add_row(&normalization, Sense::Eq, 1.0);

    if is_super {
        // Projected outputs stay non-negative: ψ ≤ q·y₀.
        for (k, &t) in layout.periods.iter().enumerate() {
            for (v, var) in vars.iter().enumerate() {
                if var.role.is_input_like() {
                    continue;
                }
                let mut row = vec![0.0; n_cols];
                row[layout.slack_col(k, v)] = 1.0;
                row[q] = -data.value(evaluated, t, v);
                lp.add_row(&row, Sense::Le, 0.0);
            }
        }
    }

    SbmModel {
        lp,
        layout,
        dropped_ratio_terms: dropped,
    }
}

fn solve_model(model: &SbmModel, config: &SbmConfig) -> Result<EfficiencyResult, SbmError> {
    let sol = lp::solve(&model.lp, &config.solver)?;
    let layout = &model.layout;
    let n_per = layout.periods.len();
    let (rho, slacks, lambdas) = match &sol.primal {
        Some(x) => {
            let q = x[layout.q_col()];
            let slacks = (0..n_per)
                .map(|k| {
                    (0..layout.n_vars)
                        .map(|v| x[layout.slack_col(k, v)] / q)
                        .collect()
                })
                .collect();
            let lambdas = (0..n_per)
                .map(|k| {
                    (0..layout.reference.len())
                        .map(|r| x[layout.lambda_col(k, r)] / q)
                        .collect()
                })
                .collect();
            (sol.objective, slacks, lambdas)
        }
        None => (f64::NAN, Vec::new(), Vec::new()),
    };
    Ok(EfficiencyResult {
        rho,
        status: sol.status,
        slacks,
        lambdas,
        reference: layout.reference.clone(),
        dropped_ratio_terms: model.dropped_ratio_terms,
        super_efficient: layout.variant == Variant::SuperEfficiency && sol.primal.is_some(),
        iterations: sol.iterations,
    })
}

fn evaluate_periods(
    data: &PanelDataset,
    evaluated: usize,
    reference: &[usize],
    periods: Vec<usize>,
    continuity: bool,
    config: &SbmConfig,
) -> Result<EfficiencyResult, SbmError> {
    let weights = check_config(data, config)?;
    if evaluated >= data.n_dmus() {
        return Err(SbmError::DmuOutOfRange(evaluated));
    }
    let reference = normalize_reference(data, reference)?;
    let contains = reference.binary_search(&evaluated).is_ok();
    match config.variant {
        Variant::Standard => {
            if !contains {
                return Err(SbmError::EvaluatedNotInReference);
            }
            let model = assemble(
                data,
                evaluated,
                reference,
                periods,
                &weights,
                continuity,
                config,
                Variant::Standard,
            );
            solve_model(&model, config)
        }
        Variant::SuperEfficiency => {
            if contains {
                return Err(SbmError::EvaluatedInReference);
            }
            let mut with_self = reference.clone();
            with_self.push(evaluated);
            with_self.sort_unstable();
            let standard = assemble(
                data,
                evaluated,
                with_self,
                periods.clone(),
                &weights,
                continuity,
                config,
                Variant::Standard,
            );
            let first = solve_model(&standard, config)?;
            if !first.is_optimal() || first.rho < 1.0 - EFFICIENT_TOL {
                return Ok(first);
            }
            let model = assemble(
                data,
                evaluated,
                reference,
                periods,
                &weights,
                continuity,
                config,
                Variant::SuperEfficiency,
            );
            let mut second = solve_model(&model, config)?;
            second.iterations += first.iterations;
            Ok(second)
        }
    }
}

/// Scores `evaluated` against `reference` over all periods.
///
/// Under `SuperEfficiency`, `reference` must exclude the evaluated DMU; the
/// standard score against `reference ∪ {evaluated}` is computed first and
/// returned unless the DMU is efficient.
pub fn evaluate_dmu(
    data: &PanelDataset,
    evaluated: usize,
    reference: &[usize],
    config: &SbmConfig,
) -> Result<EfficiencyResult, SbmError> {
    let periods = (0..data.n_periods()).collect();
    evaluate_periods(data, evaluated, reference, periods, true, config)
}

/// The reference set used for a whole-dataset evaluation of `evaluated`.
pub fn full_reference(data: &PanelDataset, evaluated: usize, variant: Variant) -> Vec<usize> {
    (0..data.n_dmus())
        .filter(|&j| variant == Variant::Standard || j != evaluated)
        .collect()
}

/// Single-period SBM for period index `period` (0-based) against the whole
/// dataset. Desirable links count as outputs and undesirable links as
/// inputs; there are no continuity rows.
pub fn static_sbm(
    data: &PanelDataset,
    period: usize,
    evaluated: usize,
    config: &SbmConfig,
) -> Result<EfficiencyResult, SbmError> {
    if period >= data.n_periods() {
        return Err(SbmError::PeriodOutOfRange {
            period,
            periods: data.n_periods(),
        });
    }
    // Weights do not affect a single-period ratio.
    let single = SbmConfig {
        period_weights: None,
        ..config.clone()
    };
    check_config(data, config)?;
    let reference = full_reference(data, evaluated, config.variant);
    evaluate_periods(data, evaluated, &reference, vec![period], false, &single)
}

/// Positions of `entries` (id, score) from best to worst: defined scores
/// descending, scores within `EFFICIENT_TOL` of each other tied and broken
/// by id, then undefined scores by id.
pub fn ranking_order(entries: &[(&str, Option<f64>)]) -> Vec<usize> {
    // quantizing keeps the comparison transitive
    let key = |s: Option<f64>| s.map(|r| (r / EFFICIENT_TOL).round() as i64);
    let mut order: Vec<usize> = (0..entries.len()).collect();
    order.sort_by(|&a, &b| {
        let (ia, sa) = entries[a];
        let (ib, sb) = entries[b];
        match (key(sa), key(sb)) {
            (Some(x), Some(y)) => y.cmp(&x),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => std::cmp::Ordering::Equal,
        }
        .then_with(|| ia.cmp(ib))
    });
    order
}

/// Orders results by descending rho (ties by DMU id), non-optimal last, and
/// assigns 1-based ranks.
pub fn rank_results(
    data: &PanelDataset,
    results: Vec<(usize, EfficiencyResult)>,
) -> Vec<RankedResult> {
    let ids = data.dmu_ids();
    let entries: Vec<(&str, Option<f64>)> = results
        .iter()
        .map(|(j, r)| (ids[*j].as_str(), r.is_optimal().then_some(r.rho)))
        .collect();
    let order = ranking_order(&entries);
    let mut slots: Vec<Option<(usize, EfficiencyResult)>> = results.into_iter().map(Some).collect();
    order
        .into_iter()
        .enumerate()
        .map(|(i, pos)| {
            let (dmu, result) = slots[pos].take().expect("each position once");
            RankedResult {
                rank: i + 1,
                dmu,
                dmu_id: ids[dmu].clone(),
                result,
            }
        })
        .collect()
}

pub(crate) fn for_each_dmu<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Scores every DMU against the whole dataset (minus itself under
/// super-efficiency) and returns the ranking.
pub fn evaluate_all(
    data: &PanelDataset,
    config: &SbmConfig,
) -> Result<Vec<RankedResult>, SbmError> {
    check_config(data, config)?;
    let results = for_each_dmu(data.n_dmus(), |j| {
        let reference = full_reference(data, j, config.variant);
        evaluate_dmu(data, j, &reference, config).map(|r| (j, r))
    });
    let results = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(rank_results(data, results))
}

/// Static scores of every DMU for one period, in dataset order.
pub fn static_all(
    data: &PanelDataset,
    period: usize,
    config: &SbmConfig,
) -> Result<Vec<EfficiencyResult>, SbmError> {
    for_each_dmu(data.n_dmus(), |j| static_sbm(data, period, j, config))
        .into_iter()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::panel_data::{generate_synthetic, GeneratorSpec, Variable, VariableRole};

    fn two_dmus() -> PanelDataset {
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

    #[test]
    fn case_study_dimensions() {
        let data = generate_synthetic(&GeneratorSpec::bank_ratios(531, 1)).unwrap();
        let all: Vec<usize> = (0..531).collect();
        let model = build_model(&data, 0, &all, &SbmConfig::default()).unwrap();
        assert_eq!(model.lp.n_cols(), 1609);
        assert_eq!(model.lp.n_rows(), 23);
    }

    #[test]
    fn single_period_has_no_continuity_rows() {
        let mut spec = GeneratorSpec::bank_ratios(4, 2);
        spec.period_count = 1;
        spec.period_labels = None;
        let data = generate_synthetic(&spec).unwrap();
        let model = build_model(&data, 0, &[0, 1, 2, 3], &SbmConfig::default()).unwrap();
        // 5 balance rows + 1 convexity + 1 normalization
        assert_eq!(model.lp.n_rows(), 7);
    }

    #[test]
    fn reference_rules() {
        let data = two_dmus();
        let std = SbmConfig::default();
        let sup = SbmConfig::super_efficiency();
        assert_eq!(
            build_model(&data, 0, &[1], &std).unwrap_err(),
            SbmError::EvaluatedNotInReference
        );
        assert_eq!(
            build_model(&data, 0, &[0, 1], &sup).unwrap_err(),
            SbmError::EvaluatedInReference
        );
        assert_eq!(
            build_model(&data, 0, &[], &std).unwrap_err(),
            SbmError::EmptyReferenceSet
        );
        let bad_w = SbmConfig {
            period_weights: Some(vec![1.0, 1.0]),
            ..SbmConfig::default()
        };
        assert!(matches!(
            build_model(&data, 0, &[0], &bad_w),
            Err(SbmError::WeightCount { .. })
        ));
    }

    #[test]
    fn two_dmu_scores() {
        let data = two_dmus();
        let cfg = SbmConfig::default();
        let a = evaluate_dmu(&data, 0, &[0, 1], &cfg).unwrap();
        let b = evaluate_dmu(&data, 1, &[0, 1], &cfg).unwrap();
        assert!((a.rho - 1.0).abs() < 1e-9);
        assert!((b.rho - 0.25).abs() < 1e-9);
        assert!((b.lambdas[0][0] - 1.0).abs() < 1e-9);
        assert!((b.slacks[0][0] - 1.0).abs() < 1e-9);
        assert!((b.slacks[0][1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn self_reference_only() {
        let data = two_dmus();
        let r = evaluate_dmu(&data, 1, &[1], &SbmConfig::default()).unwrap();
        assert!((r.rho - 1.0).abs() < 1e-12);
        assert!(r.max_slack() < 1e-12);
    }

    #[test]
    fn super_efficiency_two_dmus() {
        let data = two_dmus();
        let cfg = SbmConfig::super_efficiency();
        let a = evaluate_dmu(&data, 0, &[1], &cfg).unwrap();
        assert!(a.super_efficient);
        // x̄ = 2, ȳ = 1: (1 + 1/1) / (1 − 1/2)
        assert!((a.rho - 4.0).abs() < 1e-9);
        let b = evaluate_dmu(&data, 1, &[0], &cfg).unwrap();
        assert!(!b.super_efficient);
        assert!((b.rho - 0.25).abs() < 1e-9);
    }

    #[test]
    fn zero_denominator_terms_are_dropped() {
        let data = PanelDataset::new(
            vec!["A".into(), "B".into()],
            vec!["p1".into()],
            vec![
                Variable::new("x1", VariableRole::Input),
                Variable::new("x2", VariableRole::Input),
                Variable::new("y", VariableRole::Output),
            ],
            vec![0.0, 1.0, 1.0, 1.0, 1.0, 2.0],
        )
        .unwrap();
        let r = evaluate_dmu(&data, 0, &[0, 1], &SbmConfig::default()).unwrap();
        assert_eq!(r.dropped_ratio_terms, 1);
        assert!(r.rho.is_finite() && r.rho > 0.0 && r.rho <= 1.0 + 1e-9);
    }

    #[test]
    fn ranking_ties_by_id() {
        let data = PanelDataset::new(
            vec!["b".into(), "a".into()],
            vec!["p".into()],
            vec![
                Variable::new("x", VariableRole::Input),
                Variable::new("y", VariableRole::Output),
            ],
            vec![1.0, 1.0, 1.0, 1.0],
        )
        .unwrap();
        let ranked = evaluate_all(&data, &SbmConfig::default()).unwrap();
        assert_eq!(ranked[0].dmu_id, "a");
        assert_eq!(ranked[1].dmu_id, "b");
        assert!(ranked.iter().all(|r| (r.result.rho - 1.0).abs() < 1e-12));
    }
}
