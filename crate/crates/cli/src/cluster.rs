use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use clap::Args;
use frontier_dyn::clustering::{grade_clusters, select_k, ClusterError};
use serde::Serialize;

use crate::report::{field, prepare_out, read_table, write_run_config, Table};
use crate::{CommonArgs, Failure};

#[derive(Args, Debug, Serialize)]
pub struct ClusterArgs {
    /// Ranking report written by `evaluate` (CSV or JSON)
    #[arg(long)]
    pub ranking: PathBuf,
    /// Use this many clusters instead of the best-silhouette k
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub k_min: usize,
    /// Upper end of the k scan; defaults to 12, capped at the number of
    /// distinct scores
    #[arg(long)]
    pub k_max: Option<usize>,
    #[command(flatten)]
    pub common: CommonArgs,
}

/// One clustered DMU from the ranking report.
struct Scored {
    dmu: String,
    rho: f64,
    rank: usize,
}

fn read_ranking(path: &Path) -> anyhow::Result<Vec<Scored>> {
    let rows = read_table(path)?;
    let mut out = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let line = i + 1;
        if field(row, "status", line)? != "optimal" {
            continue;
        }
        let rho: f64 = field(row, "rho", line)?
            .parse()
            .with_context(|| format!("record {line}: bad rho"))?;
        let rank: usize = field(row, "rank", line)?
            .parse()
            .with_context(|| format!("record {line}: bad rank"))?;
        if !rho.is_finite() {
            anyhow::bail!("record {line}: rho is not finite");
        }
        out.push(Scored {
            dmu: field(row, "dmu", line)?.to_string(),
            rho,
            rank,
        });
    }
    if out.is_empty() {
        anyhow::bail!("{} has no optimal rows to cluster", path.display());
    }
    Ok(out)
}

pub fn run(args: &ClusterArgs) -> Result<(), Failure> {
    let scored = read_ranking(&args.ranking).map_err(Failure::User)?;
    let seed = args.common.resolved_seed()?;
    let points: Vec<Vec<f64>> = scored.iter().map(|s| vec![s.rho]).collect();
    let rho: Vec<f64> = scored.iter().map(|s| s.rho).collect();
    let distinct = rho
        .iter()
        .map(|r| r.to_bits())
        .collect::<BTreeSet<_>>()
        .len();
    let k_max = args.k_max.unwrap_or_else(|| 12.min(distinct));
    let selection = select_k(&points, args.k_min, k_max, seed, args.k).map_err(|e| match e {
        ClusterError::KTooLarge { .. } | ClusterError::BadRange { .. } | ClusterError::KZero => {
            Failure::user(anyhow!("{e} ({distinct} distinct scores)"))
        }
        other => Failure::internal(other),
    })?;
    let model = &selection.model;
    let grading = grade_clusters(model, &rho);

    let out = &args.common.out;
    let format = args.common.format;
    prepare_out(out)?;
    let write = || -> anyhow::Result<()> {
        let mut sil = Table::new(["k", "silhouette", "chosen", "best"]);
        for &(k, s) in &selection.table {
            sil.push(vec![
                k.into(),
                s.into(),
                usize::from(k == selection.chosen).into(),
                usize::from(k == selection.best_by_silhouette).into(),
            ]);
        }
        sil.write(out, "silhouette", format)?;

        // cluster numbers are grade positions, 1 = best
        let mut members: Vec<(usize, usize)> = model
            .assignments
            .iter()
            .enumerate()
            .map(|(i, &c)| (grading.grade_of(c), i))
            .collect();
        members.sort_by(|a, b| a.0.cmp(&b.0).then(scored[a.1].rank.cmp(&scored[b.1].rank)));
        let mut assign = Table::new(["cluster", "grade", "rho", "dmu", "rank"]);
        for &(g, i) in &members {
            let c = model.assignments[i];
            assign.push(vec![
                g.into(),
                grading.labels[c].clone().into(),
                scored[i].rho.into(),
                scored[i].dmu.clone().into(),
                scored[i].rank.into(),
            ]);
        }
        assign.write(out, "assignments", format)?;

        let n = scored.len();
        let mut centers = Table::new(["cluster", "grade", "center_efficiency", "members"]);
        let mut shares = Table::new(["cluster", "grade", "count", "share"]);
        for (g, &c) in grading.order.iter().enumerate() {
            let count = model.assignments.iter().filter(|&&a| a == c).count();
            centers.push(vec![
                (g + 1).into(),
                grading.labels[c].clone().into(),
                grading.center_efficiency[c].into(),
                count.into(),
            ]);
            shares.push(vec![
                (g + 1).into(),
                grading.labels[c].clone().into(),
                count.into(),
                (count as f64 / n as f64).into(),
            ]);
        }
        centers.write(out, "centers", format)?;
        shares.write(out, "grade_shares", format)?;

        #[derive(Serialize)]
        struct Resolved<'a> {
            ranking: &'a PathBuf,
            seed: u64,
            k_min: usize,
            k_max: usize,
            k_override: Option<usize>,
            chosen_k: usize,
            best_by_silhouette: usize,
            dispersion: f64,
            restarts: usize,
            clustered_points: usize,
            format: crate::report::Format,
            jobs: Option<usize>,
        }
        write_run_config(
            out,
            "cluster",
            &Resolved {
                ranking: &args.ranking,
                seed,
                k_min: args.k_min,
                k_max,
                k_override: args.k,
                chosen_k: selection.chosen,
                best_by_silhouette: selection.best_by_silhouette,
                dispersion: model.dispersion,
                restarts: frontier_dyn::clustering::SELECT_RESTARTS,
                clustered_points: n,
                format,
                jobs: args.common.jobs,
            },
        )
    };
    write().map_err(Failure::internal)
}
