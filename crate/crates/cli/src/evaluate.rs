use std::path::PathBuf;

use anyhow::anyhow;
use clap::{Args, ValueEnum};
use frontier_dyn::lp::{LpStatus, SolverOptions};
use frontier_dyn::panel_data::{load_dataset, PanelDataset};
use frontier_dyn::partition::{evaluate_heuristic, HeuristicResult, PartitionError};
use frontier_dyn::sbm::{
    evaluate_all, rank_results, ranking_order, static_sbm, RankedResult, SbmConfig, Variant,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::report::{prepare_out, write_run_config, Cell, Table};
use crate::{CommonArgs, Failure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VariantArg {
    Standard,
    Super,
}

#[derive(Args, Debug, Serialize)]
pub struct EvaluateArgs {
    /// Long-format data CSV (dmu,period,variable,value)
    #[arg(long)]
    pub data: PathBuf,
    /// Schema file, one `name=role` per line
    #[arg(long)]
    pub schema: PathBuf,
    #[arg(long, value_enum, default_value = "standard")]
    pub variant: VariantArg,
    /// Average class scores over a random partition instead of one full solve
    #[arg(long)]
    pub heuristic: bool,
    /// Number of partition classes for --heuristic
    #[arg(short = 'p', default_value_t = 10)]
    pub p: usize,
    /// Period weights, one per period
    #[arg(long, value_delimiter = ',')]
    pub weights: Option<Vec<f64>>,
    /// Single-period SBM for --period instead of the dynamic model
    #[arg(long)]
    pub r#static: bool,
    /// Period label or 1-based position, for --static
    #[arg(long)]
    pub period: Option<String>,
    /// Also write per-period static scores beside the dynamic score
    #[arg(long)]
    pub compare: bool,
    /// Simplex tolerance
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Simplex pivot limit per solve
    #[arg(long, default_value_t = 50_000)]
    pub max_iter: usize,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Serialize)]
struct Resolved<'a> {
    data: &'a PathBuf,
    schema: &'a PathBuf,
    variant: VariantArg,
    mode: &'static str,
    p: Option<usize>,
    seed: Option<u64>,
    weights: Vec<f64>,
    period: Option<String>,
    compare: bool,
    vrs: bool,
    zero_denominator_epsilon: f64,
    tol: f64,
    max_iter: usize,
    format: crate::report::Format,
    jobs: Option<usize>,
}

/// Resolves `--period` as a label first, then as a 1-based position.
fn resolve_period(data: &PanelDataset, arg: &str) -> Option<usize> {
    data.periods().iter().position(|p| p == arg).or_else(|| {
        arg.parse::<usize>()
            .ok()
            .filter(|&t| (1..=data.n_periods()).contains(&t))
            .map(|t| t - 1)
    })
}

fn ranking_table(ranked: &[RankedResult]) -> Table {
    let mut t = Table::new(["rank", "dmu", "rho", "status", "dropped_ratio_terms"]);
    for r in ranked {
        t.push(vec![
            r.rank.into(),
            r.dmu_id.clone().into(),
            r.result.rho.into(),
            r.result.status.as_str().into(),
            r.result.dropped_ratio_terms.into(),
        ]);
    }
    t
}

/// One row of the heuristic ranking; `None` when every class was
/// infeasible.
struct HeuristicRow {
    dmu: usize,
    outcome: Option<HeuristicResult>,
}

fn heuristic_table(data: &PanelDataset, rows: &[HeuristicRow], order: &[usize]) -> Table {
    let mut t = Table::new([
        "rank",
        "dmu",
        "rho",
        "status",
        "dropped_ratio_terms",
        "class_mean",
        "class_min",
        "class_max",
        "feasible_classes",
    ]);
    for (i, &pos) in order.iter().enumerate() {
        let row = &rows[pos];
        let id = data.dmu_ids()[row.dmu].clone();
        let cells: Vec<Cell> = match &row.outcome {
            Some(h) => vec![
                (i + 1).into(),
                id.into(),
                h.mean_rho.into(),
                LpStatus::Optimal.as_str().into(),
                h.dropped_ratio_terms().into(),
                h.mean_rho.into(),
                h.min_rho().into(),
                h.max_rho().into(),
                h.feasible_class_count.into(),
            ],
            None => vec![
                (i + 1).into(),
                id.into(),
                f64::NAN.into(),
                LpStatus::Infeasible.as_str().into(),
                0.into(),
                f64::NAN.into(),
                f64::NAN.into(),
                f64::NAN.into(),
                0.into(),
            ],
        };
        t.push(cells);
    }
    t
}

fn run_heuristic(
    data: &PanelDataset,
    p: usize,
    seed: u64,
    config: &SbmConfig,
) -> Result<Vec<HeuristicRow>, Failure> {
    (0..data.n_dmus())
        .into_par_iter()
        .map(|j| match evaluate_heuristic(data, j, p, seed, config) {
            Ok(h) => Ok(HeuristicRow {
                dmu: j,
                outcome: Some(h),
            }),
            Err(PartitionError::AllClassesInfeasible) => Ok(HeuristicRow {
                dmu: j,
                outcome: None,
            }),
            Err(e @ (PartitionError::PTooLarge { .. } | PartitionError::PZero)) => {
                Err(Failure::user(e))
            }
            Err(e) => Err(Failure::internal(e)),
        })
        .collect()
}

fn static_period(
    data: &PanelDataset,
    period: usize,
    config: &SbmConfig,
) -> Result<Vec<RankedResult>, Failure> {
    let results = (0..data.n_dmus())
        .into_par_iter()
        .map(|j| static_sbm(data, period, j, config).map(|r| (j, r)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(Failure::internal)?;
    Ok(rank_results(data, results))
}

pub fn run(args: &EvaluateArgs) -> Result<(), Failure> {
    let data = load_dataset(&args.data, &args.schema).map_err(Failure::user)?;
    if args.r#static && (args.heuristic || args.compare) {
        return Err(Failure::user(anyhow!(
            "--static cannot be combined with --heuristic or --compare"
        )));
    }
    if !args.r#static && args.period.is_some() {
        return Err(Failure::user(anyhow!("--period needs --static")));
    }
    let period = match (&args.period, args.r#static) {
        (Some(p), true) => Some(resolve_period(&data, p).ok_or_else(|| {
            Failure::user(anyhow!(
                "period `{p}` not found (labels: {})",
                data.periods().join(", ")
            ))
        })?),
        (None, true) => return Err(Failure::user(anyhow!("--static needs --period"))),
        _ => None,
    };
    if let Some(w) = &args.weights {
        if w.len() != data.n_periods() {
            return Err(Failure::user(anyhow!(
                "{} weights given for {} periods",
                w.len(),
                data.n_periods()
            )));
        }
        if w.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(Failure::user(anyhow!("weights must be positive")));
        }
    }
    if !(args.tol > 0.0 && args.tol.is_finite()) || args.max_iter == 0 {
        return Err(Failure::user(anyhow!(
            "--tol must be positive and --max-iter at least 1"
        )));
    }
    let variant = match args.variant {
        VariantArg::Standard => Variant::Standard,
        VariantArg::Super => Variant::SuperEfficiency,
    };
    let config = SbmConfig {
        period_weights: args.weights.clone(),
        variant,
        solver: SolverOptions {
            tol: args.tol,
            max_iter: args.max_iter,
            ..SolverOptions::default()
        },
        ..SbmConfig::default()
    };
    let seed = args.common.resolved_seed()?;
    let out = &args.common.out;
    let format = args.common.format;
    prepare_out(out)?;

    // (dmu, score or None) in ranking order, for the compare report
    let dynamic: Vec<(usize, Option<f64>)>;
    let statuses: Vec<LpStatus>;
    if let Some(t) = period {
        let ranked = static_period(&data, t, &config)?;
        ranking_table(&ranked)
            .write(out, "ranking", format)
            .map_err(Failure::internal)?;
        statuses = ranked.iter().map(|r| r.result.status).collect();
        dynamic = Vec::new();
    } else if args.heuristic {
        let rows = run_heuristic(&data, args.p, seed, &config)?;
        let ids = data.dmu_ids();
        let entries: Vec<(&str, Option<f64>)> = rows
            .iter()
            .map(|r| (ids[r.dmu].as_str(), r.outcome.as_ref().map(|h| h.mean_rho)))
            .collect();
        let order = ranking_order(&entries);
        heuristic_table(&data, &rows, &order)
            .write(out, "ranking", format)
            .map_err(Failure::internal)?;
        statuses = rows
            .iter()
            .map(|r| match r.outcome {
                Some(_) => LpStatus::Optimal,
                None => LpStatus::Infeasible,
            })
            .collect();
        dynamic = order.iter().map(|&i| (rows[i].dmu, entries[i].1)).collect();
    } else {
        let ranked = evaluate_all(&data, &config).map_err(Failure::internal)?;
        ranking_table(&ranked)
            .write(out, "ranking", format)
            .map_err(Failure::internal)?;
        statuses = ranked.iter().map(|r| r.result.status).collect();
        dynamic = ranked
            .iter()
            .map(|r| (r.dmu, r.result.is_optimal().then_some(r.result.rho)))
            .collect();
    }

    if args.compare {
        let mut per_period = Vec::with_capacity(data.n_periods());
        for t in 0..data.n_periods() {
            let mut rho = vec![f64::NAN; data.n_dmus()];
            for r in static_period(&data, t, &config)? {
                rho[r.dmu] = r.result.rho;
            }
            per_period.push(rho);
        }
        let mut columns: Vec<String> = data.periods().iter().map(|p| format!("rho_{p}")).collect();
        columns.push("rho_ddea".into());
        columns.push("dmu".into());
        let mut table = Table::new(columns);
        for &(j, score) in &dynamic {
            let mut row: Vec<Cell> = per_period.iter().map(|rho| rho[j].into()).collect();
            row.push(score.unwrap_or(f64::NAN).into());
            row.push(data.dmu_ids()[j].clone().into());
            table.push(row);
        }
        table
            .write(out, "compare", format)
            .map_err(Failure::internal)?;
    }

    let mode = if args.r#static {
        "static"
    } else if args.heuristic {
        "heuristic"
    } else {
        "exact"
    };
    write_run_config(
        out,
        "evaluate",
        &Resolved {
            data: &args.data,
            schema: &args.schema,
            variant: args.variant,
            mode,
            p: args.heuristic.then_some(args.p),
            seed: args.heuristic.then_some(seed),
            weights: config
                .period_weights
                .clone()
                .unwrap_or_else(|| vec![1.0; data.n_periods()]),
            period: period.map(|t| data.periods()[t].clone()),
            compare: args.compare,
            vrs: config.vrs,
            zero_denominator_epsilon: config.zero_denominator_epsilon,
            tol: args.tol,
            max_iter: args.max_iter,
            format,
            jobs: args.common.jobs,
        },
    )
    .map_err(Failure::internal)?;

    let failed = statuses.iter().filter(|&&s| s != LpStatus::Optimal).count();
    if variant == Variant::Standard && failed > 0 {
        return Err(Failure::internal(anyhow!(
            "{failed} standard-model solve(s) did not reach optimality"
        )));
    }
    Ok(())
}
