//! Browser bindings for the demo page in `www/`. Every export takes plain
//! numbers or a JSON string and returns JSON, so the page only needs
//! `JSON.parse`.

use frontier_dyn::clustering::{grade_clusters, select_k};
use frontier_dyn::panel_data::{generate_synthetic, GeneratorSpec, PanelDataset};
use frontier_dyn::partition::{evaluate_heuristic, PartitionError};
use frontier_dyn::sbm::{evaluate_all, ranking_order, SbmConfig};
use frontier_dyn::sensitivity::{grade_groups, sensitivity_report, Aggregation};
use frontier_dyn::{Grading as GradeNames, KSelection};
use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::*;

/// Largest panel the page may request; the solver runs on the UI thread.
const MAX_DMUS: usize = 120;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Score {
    pub rank: usize,
    pub dmu: String,
    /// `None` when the solve was infeasible.
    pub rho: Option<f64>,
    pub status: String,
}

#[derive(Debug, Serialize)]
struct Grade {
    label: String,
    center: f64,
    members: Vec<(String, f64)>,
}

#[derive(Debug, Serialize)]
struct Grading {
    silhouettes: Vec<(usize, f64)>,
    chosen: usize,
    best: usize,
    grades: Vec<Grade>,
}

#[derive(Debug, Serialize)]
struct UpgradeRow {
    branch: String,
    cells: Vec<String>,
}

#[derive(Debug, Serialize)]
struct Upgrade {
    source: String,
    target: String,
    worst_target: String,
    variables: Vec<String>,
    rows: Vec<UpgradeRow>,
}

fn panel(dmus: usize, periods: usize, seed: u64) -> Result<PanelDataset, String> {
    if !(2..=MAX_DMUS).contains(&dmus) || !(1..=6).contains(&periods) {
        return Err(format!("need 2..={MAX_DMUS} DMUs and 1..=6 periods"));
    }
    let mut spec = GeneratorSpec::bank_ratios(dmus, seed);
    spec.period_count = periods;
    spec.period_labels = None;
    generate_synthetic(&spec).map_err(|e| e.to_string())
}

fn config(variant: &str) -> Result<SbmConfig, String> {
    match variant {
        "standard" => Ok(SbmConfig::default()),
        "super" => Ok(SbmConfig::super_efficiency()),
        other => Err(format!("unknown variant `{other}`")),
    }
}

/// Scores a synthetic bank panel, exactly when `p` is 0 and by the partition
/// heuristic otherwise.
pub fn score_panel(
    dmus: usize,
    periods: usize,
    seed: u64,
    variant: &str,
    p: usize,
) -> Result<Vec<Score>, String> {
    let data = panel(dmus, periods, seed)?;
    let cfg = config(variant)?;
    if p == 0 {
        let ranked = evaluate_all(&data, &cfg).map_err(|e| e.to_string())?;
        return Ok(ranked
            .into_iter()
            .map(|r| Score {
                rank: r.rank,
                dmu: r.dmu_id,
                rho: r.result.is_optimal().then_some(r.result.rho),
                status: r.result.status.as_str().to_string(),
            })
            .collect());
    }
    let mut means = Vec::with_capacity(dmus);
    for j in 0..dmus {
        match evaluate_heuristic(&data, j, p, seed, &cfg) {
            Ok(h) => means.push(Some(h.mean_rho)),
            Err(PartitionError::AllClassesInfeasible) => means.push(None),
            Err(e) => return Err(e.to_string()),
        }
    }
    let ids = data.dmu_ids();
    let entries: Vec<(&str, Option<f64>)> = ids
        .iter()
        .map(String::as_str)
        .zip(means.iter().copied())
        .collect();
    Ok(ranking_order(&entries)
        .into_iter()
        .enumerate()
        .map(|(i, j)| Score {
            rank: i + 1,
            dmu: ids[j].clone(),
            rho: means[j],
            status: if means[j].is_some() {
                "optimal"
            } else {
                "infeasible"
            }
            .into(),
        })
        .collect())
}

/// Optimal `(dmu, rho)` pairs with their clustering and grade names.
type Graded = (Vec<(String, f64)>, KSelection, GradeNames);

fn grading_of(
    scores: &[Score],
    k_min: usize,
    k_max: usize,
    seed: u64,
    k: Option<usize>,
) -> Result<Graded, String> {
    let scored: Vec<(String, f64)> = scores
        .iter()
        .filter_map(|s| s.rho.map(|r| (s.dmu.clone(), r)))
        .collect();
    let points: Vec<Vec<f64>> = scored.iter().map(|s| vec![s.1]).collect();
    let k_max = k_max.min(points.len().saturating_sub(1)).max(k_min);
    let sel = select_k(&points, k_min, k_max, seed, k).map_err(|e| e.to_string())?;
    let rho: Vec<f64> = scored.iter().map(|s| s.1).collect();
    let grading = grade_clusters(&sel.model, &rho);
    Ok((scored, sel, grading))
}

/// Clusters a score list (as returned by [`score_panel`]) and names the
/// grades, best first. `k` of 0 picks the best silhouette.
pub fn grade_scores(
    scores_json: &str,
    k_min: usize,
    k_max: usize,
    seed: u64,
    k: usize,
) -> Result<String, String> {
    let scores: Vec<Score> = serde_json::from_str(scores_json).map_err(|e| e.to_string())?;
    let (scored, sel, grading) = grading_of(&scores, k_min, k_max, seed, (k > 0).then_some(k))?;
    let grades = grading
        .order
        .iter()
        .map(|&c| Grade {
            label: grading.labels[c].clone(),
            center: grading.center_efficiency[c],
            members: sel
                .model
                .members(c)
                .into_iter()
                .map(|i| scored[i].clone())
                .collect(),
        })
        .collect();
    serde_json::to_string(&Grading {
        silhouettes: sel.table.clone(),
        chosen: sel.chosen,
        best: sel.best_by_silhouette,
        grades,
    })
    .map_err(|e| e.to_string())
}

/// Scores, grades and upgrade deltas for one synthetic panel in a single
/// call; the panel is regenerated from the same seed.
pub fn upgrade_plan(dmus: usize, periods: usize, seed: u64, k: usize) -> Result<String, String> {
    let data = panel(dmus, periods, seed)?;
    let scores = score_panel(dmus, periods, seed, "standard", 0)?;
    let (scored, sel, grading) = grading_of(&scores, 2, 12, seed, (k > 0).then_some(k))?;
    let index: Vec<usize> = scored
        .iter()
        .map(|(id, _)| data.dmu_index(id).expect("scored DMU comes from the panel"))
        .collect();
    let rho: Vec<f64> = scored.iter().map(|s| s.1).collect();
    let groups = grade_groups(&sel.model, &grading, &index, &rho);
    let reports = sensitivity_report(&data, &groups, Aggregation::MeanOverPeriods)
        .map_err(|e| e.to_string())?;
    let variables: Vec<String> = data.variables().iter().map(|v| v.name.clone()).collect();
    let plan: Vec<Upgrade> = reports
        .iter()
        .map(|r| Upgrade {
            source: r.source_label.clone(),
            target: r.target_label.clone(),
            worst_target: r.worst_target_id.clone(),
            variables: variables.clone(),
            rows: r
                .rows
                .iter()
                .map(|row| UpgradeRow {
                    branch: row.branch_id.clone(),
                    cells: row.deltas.iter().map(|d| d.signed_cell()).collect(),
                })
                .collect(),
        })
        .collect();
    serde_json::to_string(&plan).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn evaluate(
    dmus: usize,
    periods: usize,
    seed: u32,
    variant: &str,
    p: usize,
) -> Result<String, JsValue> {
    let scores = score_panel(dmus, periods, u64::from(seed), variant, p)
        .map_err(|e| JsValue::from_str(&e))?;
    serde_json::to_string(&scores).map_err(|e| JsValue::from_str(&e.to_string()))
}

#[wasm_bindgen]
pub fn grade(
    scores_json: &str,
    k_min: usize,
    k_max: usize,
    seed: u32,
    k: usize,
) -> Result<String, JsValue> {
    grade_scores(scores_json, k_min, k_max, u64::from(seed), k).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn upgrades(dmus: usize, periods: usize, seed: u32, k: usize) -> Result<String, JsValue> {
    upgrade_plan(dmus, periods, u64::from(seed), k).map_err(|e| JsValue::from_str(&e))
}
