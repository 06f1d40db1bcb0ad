use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::Args;
use frontier_dyn::panel_data::{load_dataset, PanelDataset, VariableRole};
use frontier_dyn::sensitivity::{
    aggregate, apply_deltas, deltas_between, dominates, sensitivity_report, Aggregation, Delta,
    GradeGroup, SensitivityReport,
};
use serde::Serialize;

use crate::report::{field, prepare_out, read_table, write_run_config, Cell, Table};
use crate::{CommonArgs, Failure};

#[derive(Args, Debug, Serialize)]
pub struct SensitivityArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub schema: PathBuf,
    /// Assignments report written by `cluster`
    #[arg(long)]
    pub clusters: PathBuf,
    /// Signed numbers and `No Change` instead of `Increase(x)`/`Decrease(x)`
    #[arg(long)]
    pub signed: bool,
    /// Re-check dominance and idempotence of every row; exit 1 on failure
    #[arg(long)]
    pub verify: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

/// Grade groups, best first, from the assignments report.
fn read_groups(path: &Path, data: &PanelDataset) -> anyhow::Result<Vec<GradeGroup>> {
    let rows = read_table(path)?;
    let mut by_cluster: BTreeMap<usize, GradeGroup> = BTreeMap::new();
    for (i, row) in rows.iter().enumerate() {
        let line = i + 1;
        let cluster: usize = field(row, "cluster", line)?
            .parse()
            .with_context(|| format!("record {line}: bad cluster number"))?;
        let label = field(row, "grade", line)?;
        let id = field(row, "dmu", line)?;
        let rho: f64 = field(row, "rho", line)?
            .parse()
            .with_context(|| format!("record {line}: bad rho"))?;
        let dmu = data
            .dmu_index(id)
            .ok_or_else(|| anyhow!("record {line}: DMU `{id}` is not in the dataset"))?;
        let group = by_cluster.entry(cluster).or_insert_with(|| GradeGroup {
            cluster,
            label: label.to_string(),
            members: Vec::new(),
        });
        if group.label != label {
            bail!("record {line}: cluster {cluster} has two grade labels");
        }
        group.members.push((dmu, rho));
    }
    if by_cluster.is_empty() {
        bail!("{} has no rows", path.display());
    }
    let expected: Vec<usize> = (1..=by_cluster.len()).collect();
    if by_cluster.keys().copied().collect::<Vec<_>>() != expected {
        bail!(
            "cluster numbers must run 1..{} without gaps",
            by_cluster.len()
        );
    }
    Ok(by_cluster.into_values().collect())
}

fn delta_table(data: &PanelDataset, report: &SensitivityReport, signed: bool) -> Table {
    let mut columns = vec!["branch".to_string()];
    columns.extend(data.variables().iter().map(|v| v.name.clone()));
    let mut t = Table::new(columns);
    for row in &report.rows {
        let mut cells: Vec<Cell> = vec![row.branch_id.clone().into()];
        cells.extend(row.deltas.iter().map(|d| {
            Cell::Text(if signed {
                d.signed_cell()
            } else {
                d.machine_cell()
            })
        }));
        t.push(cells);
    }
    t
}

/// Rows that fail dominance or idempotence after their deltas are applied.
fn verify(data: &PanelDataset, reports: &[SensitivityReport], agg: Aggregation) -> Vec<String> {
    let roles: Vec<VariableRole> = data.variables().iter().map(|v| v.role).collect();
    let mut bad = Vec::new();
    for r in reports {
        let target = aggregate(data, r.worst_target, agg);
        for row in &r.rows {
            let moved = apply_deltas(&aggregate(data, row.branch, agg), &row.deltas);
            let idempotent = deltas_between(&moved, &target, &roles)
                .iter()
                .all(|&d| d == Delta::NoChange);
            if !dominates(&moved, &target, &roles, 1e-9) || !idempotent {
                bad.push(format!(
                    "cluster {} branch {}",
                    r.source_grade, row.branch_id
                ));
            }
        }
    }
    bad
}

pub fn run(args: &SensitivityArgs) -> Result<(), Failure> {
    let data = load_dataset(&args.data, &args.schema).map_err(Failure::user)?;
    let groups = read_groups(&args.clusters, &data).map_err(Failure::User)?;
    let agg = Aggregation::MeanOverPeriods;
    let reports = sensitivity_report(&data, &groups, agg).map_err(Failure::user)?;

    let out = &args.common.out;
    let format = args.common.format;
    prepare_out(out)?;
    let write = || -> anyhow::Result<()> {
        let mut summary = Table::new([
            "source_cluster",
            "source_grade",
            "target_cluster",
            "target_grade",
            "worst_target",
            "branches",
            "aggregation",
        ]);
        for r in &reports {
            delta_table(&data, r, args.signed).write(
                out,
                &format!("sensitivity_cluster_{}", r.source_grade),
                format,
            )?;
            summary.push(vec![
                r.source_grade.into(),
                r.source_label.clone().into(),
                r.target_grade.into(),
                r.target_label.clone().into(),
                r.worst_target_id.clone().into(),
                r.rows.len().into(),
                agg.as_str().into(),
            ]);
        }
        summary.write(out, "sensitivity_summary", format)?;

        #[derive(Serialize)]
        struct Resolved<'a> {
            data: &'a PathBuf,
            schema: &'a PathBuf,
            clusters: &'a PathBuf,
            aggregation: &'static str,
            signed: bool,
            verify: bool,
            format: crate::report::Format,
            jobs: Option<usize>,
        }
        write_run_config(
            out,
            "sensitivity",
            &Resolved {
                data: &args.data,
                schema: &args.schema,
                clusters: &args.clusters,
                aggregation: agg.as_str(),
                signed: args.signed,
                verify: args.verify,
                format,
                jobs: args.common.jobs,
            },
        )
    };
    write().map_err(Failure::internal)?;

    if args.verify {
        let bad = verify(&data, &reports, agg);
        if !bad.is_empty() {
            return Err(Failure::internal(anyhow!(
                "{} row(s) failed the post-delta check: {}",
                bad.len(),
                bad.join("; ")
            )));
        }
        let rows: usize = reports.iter().map(|r| r.rows.len()).sum();
        eprintln!("verify: {rows} rows dominate their targets and are idempotent");
    }
    Ok(())
}
