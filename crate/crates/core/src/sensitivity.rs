//! Upgrade sensitivity: how far each branch must move, variable by variable,
//! to match the worst member of the next-better grade.
//!
//! Values are aggregated over periods first. Input-like variables (inputs,
//! undesirable links) may only decrease and output-like variables may only
//! increase; a variable on which the branch is already at least as good as
//! the target needs no change.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clustering::{ClusterModel, Grading};
use crate::panel_data::{PanelDataset, VariableRole};

#[derive(Debug, Error, PartialEq)]
pub enum SensitivityError {
    #[error("cluster has no members")]
    EmptyCluster,
    #[error("DMU index {0} out of range")]
    DmuOutOfRange(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Delta {
    NoChange,
    Increase(f64),
    Decrease(f64),
}

impl Delta {
    pub fn signed(self) -> f64 {
        match self {
            Delta::NoChange => 0.0,
            Delta::Increase(a) => a,
            Delta::Decrease(a) => -a,
        }
    }

    pub fn apply(self, value: f64) -> f64 {
        match self {
            Delta::NoChange => value,
            Delta::Increase(a) => value + a,
            Delta::Decrease(a) => value - a,
        }
    }

    /// Signed number, or `No Change`.
    pub fn signed_cell(self) -> String {
        match self {
            Delta::NoChange => "No Change".to_string(),
            Delta::Increase(a) => format!("{a}"),
            Delta::Decrease(a) => format!("-{a}"),
        }
    }

    /// `NoChange`, `Increase(a)` or `Decrease(a)`.
    pub fn machine_cell(self) -> String {
        match self {
            Delta::NoChange => "NoChange".to_string(),
            Delta::Increase(a) => format!("Increase({a})"),
            Delta::Decrease(a) => format!("Decrease({a})"),
        }
    }
}

/// Cells of one row in signed form, joined by `", "`.
pub fn render_signed_row(deltas: &[Delta]) -> String {
    deltas
        .iter()
        .map(|d| d.signed_cell())
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    #[default]
    MeanOverPeriods,
}

impl Aggregation {
    pub fn as_str(self) -> &'static str {
        match self {
            Aggregation::MeanOverPeriods => "mean_over_periods",
        }
    }
}

/// Per-variable aggregate of one DMU across periods, schema order.
pub fn aggregate(data: &PanelDataset, dmu: usize, aggregation: Aggregation) -> Vec<f64> {
    let t = data.n_periods();
    (0..data.n_variables())
        .map(|v| match aggregation {
            Aggregation::MeanOverPeriods => {
                (0..t).map(|p| data.value(dmu, p, v)).sum::<f64>() / t as f64
            }
        })
        .collect()
}

/// Member with the lowest score; ties go to the smallest id.
pub fn worst_branch<'a, I>(members: I) -> Result<&'a str, SensitivityError>
where
    I: IntoIterator<Item = (&'a str, f64)>,
{
    members
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(b.0)))
        .map(|(id, _)| id)
        .ok_or(SensitivityError::EmptyCluster)
}

fn differs(a: f64, b: f64) -> bool {
    (a - b).abs() > 4.0 * f64::EPSILON * a.abs().max(b.abs())
}

/// Deltas taking aggregated `branch` values to at least `target` role-wise.
pub fn deltas_between(branch: &[f64], target: &[f64], roles: &[VariableRole]) -> Vec<Delta> {
    branch
        .iter()
        .zip(target)
        .zip(roles)
        .map(|((&b, &w), role)| {
            if role.is_input_like() {
                if b > w && differs(b, w) {
                    Delta::Decrease(b - w)
                } else {
                    Delta::NoChange
                }
            } else if b < w && differs(b, w) {
                Delta::Increase(w - b)
            } else {
                Delta::NoChange
            }
        })
        .collect()
}

pub fn apply_deltas(values: &[f64], deltas: &[Delta]) -> Vec<f64> {
    values
        .iter()
        .zip(deltas)
        .map(|(&v, d)| d.apply(v))
        .collect()
}

/// Whether `branch` is at least as good as `target` on every variable, up
/// to `tol`.
pub fn dominates(branch: &[f64], target: &[f64], roles: &[VariableRole], tol: f64) -> bool {
    branch
        .iter()
        .zip(target)
        .zip(roles)
        .all(|((&b, &w), role)| {
            if role.is_input_like() {
                b <= w + tol
            } else {
                b >= w - tol
            }
        })
}

fn roles(data: &PanelDataset) -> Vec<VariableRole> {
    data.variables().iter().map(|v| v.role).collect()
}

/// Changes `branch` needs to match `target_worst`, per variable in schema
/// order.
pub fn compute_deltas(
    data: &PanelDataset,
    branch: usize,
    target_worst: usize,
    aggregation: Aggregation,
) -> Result<Vec<Delta>, SensitivityError> {
    for &d in &[branch, target_worst] {
        if d >= data.n_dmus() {
            return Err(SensitivityError::DmuOutOfRange(d));
        }
    }
    Ok(deltas_between(
        &aggregate(data, branch, aggregation),
        &aggregate(data, target_worst, aggregation),
        &roles(data),
    ))
}

/// One graded cluster: its members as `(dmu index, score)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradeGroup {
    pub cluster: usize,
    pub label: String,
    pub members: Vec<(usize, f64)>,
}

/// Groups DMUs by grade, best grade first. `dmus[i]` is the dataset index of
/// clustering point `i`, whose score is `rho[i]`.
pub fn grade_groups(
    model: &ClusterModel,
    grading: &Grading,
    dmus: &[usize],
    rho: &[f64],
) -> Vec<GradeGroup> {
    grading
        .order
        .iter()
        .map(|&c| GradeGroup {
            cluster: c,
            label: grading.labels[c].clone(),
            members: model
                .members(c)
                .into_iter()
                .map(|i| (dmus[i], rho[i]))
                .collect(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityRow {
    pub branch: usize,
    pub branch_id: String,
    pub deltas: Vec<Delta>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    /// 1-based grade positions (1 = best).
    pub source_grade: usize,
    pub target_grade: usize,
    pub source_label: String,
    pub target_label: String,
    pub worst_target: usize,
    pub worst_target_id: String,
    pub aggregation: Aggregation,
    /// One row per source member, ordered by branch id.
    pub rows: Vec<SensitivityRow>,
}

/// One report per grade below the top, each pairing every member with the
/// worst member of the grade directly above. `groups` must be ordered best
/// grade first.
pub fn sensitivity_report(
    data: &PanelDataset,
    groups: &[GradeGroup],
    aggregation: Aggregation,
) -> Result<Vec<SensitivityReport>, SensitivityError> {
    let ids = data.dmu_ids();
    let roles = roles(data);
    let mut reports = Vec::new();
    for g in 1..groups.len() {
        let better = &groups[g - 1];
        for &(d, _) in better.members.iter().chain(&groups[g].members) {
            if d >= data.n_dmus() {
                return Err(SensitivityError::DmuOutOfRange(d));
            }
        }
        let worst_id = worst_branch(better.members.iter().map(|&(d, r)| (ids[d].as_str(), r)))?;
        let worst = data.dmu_index(worst_id).expect("member of dataset");
        let target = aggregate(data, worst, aggregation);
        let mut rows: Vec<SensitivityRow> = groups[g]
            .members
            .iter()
            .map(|&(d, _)| SensitivityRow {
                branch: d,
                branch_id: ids[d].clone(),
                deltas: deltas_between(&aggregate(data, d, aggregation), &target, &roles),
            })
            .collect();
        rows.sort_by(|a, b| a.branch_id.cmp(&b.branch_id));
        reports.push(SensitivityReport {
            source_grade: g + 1,
            target_grade: g,
            source_label: groups[g].label.clone(),
            target_label: better.label.clone(),
            worst_target: worst,
            worst_target_id: worst_id.to_string(),
            aggregation,
            rows,
        });
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worst_is_minimum_then_id() {
        assert_eq!(worst_branch([("a", 1.9), ("b", 1.7)]).unwrap(), "b");
        assert_eq!(worst_branch([("b", 1.7), ("a", 1.7)]).unwrap(), "a");
        assert_eq!(
            worst_branch(std::iter::empty::<(&str, f64)>()),
            Err(SensitivityError::EmptyCluster)
        );
    }

    #[test]
    fn cost_reduction_example() {
        let d = deltas_between(&[15.0], &[10.0], &[VariableRole::Input]);
        assert_eq!(d, vec![Delta::Decrease(5.0)]);
    }

    #[test]
    fn dominating_branch_needs_nothing() {
        let roles = [
            VariableRole::Input,
            VariableRole::BadLink,
            VariableRole::GoodLink,
            VariableRole::Output,
        ];
        let d = deltas_between(&[1.0, 1.0, 5.0, 5.0], &[2.0, 1.0, 4.0, 5.0], &roles);
        assert!(d.iter().all(|&x| x == Delta::NoChange));
    }

    #[test]
    fn signed_rendering() {
        let row = [
            Delta::Decrease(3332.33),
            Delta::NoChange,
            Delta::Increase(6265.667),
            Delta::NoChange,
            Delta::NoChange,
        ];
        assert_eq!(
            render_signed_row(&row),
            "-3332.33, No Change, 6265.667, No Change, No Change"
        );
        assert_eq!(Delta::Decrease(5.0).machine_cell(), "Decrease(5)");
    }
}
