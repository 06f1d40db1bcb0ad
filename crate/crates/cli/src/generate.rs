use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use anyhow::Context;
use clap::Args;
use frontier_dyn::panel_data::{generate_synthetic, GeneratorSpec};
use serde::Serialize;

use crate::report::{prepare_out, write_run_config};
use crate::{CommonArgs, Failure};

#[derive(Args, Debug, Serialize)]
pub struct GenerateArgs {
    /// Generator spec file (`dmus = N`, `periods = T`, `name = role, min, max, variance`)
    #[arg(long)]
    pub spec: PathBuf,
    #[command(flatten)]
    pub common: CommonArgs,
}

/// Writes `data.csv` and `schema.txt`. `--seed` overrides a seed in the spec
/// file; the environment fallback only fills in a missing one.
pub fn run(args: &GenerateArgs) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&args.spec)
        .with_context(|| format!("cannot read spec {}", args.spec.display()))
        .map_err(Failure::User)?;
    let fallback = args.common.resolved_seed()?;
    let mut spec = GeneratorSpec::parse(&text, fallback).map_err(Failure::user)?;
    if let Some(seed) = args.common.seed {
        spec.seed = seed;
    }
    let data = generate_synthetic(&spec).map_err(Failure::user)?;

    let out = &args.common.out;
    prepare_out(out)?;
    let write = || -> anyhow::Result<()> {
        data.write_csv(BufWriter::new(File::create(out.join("data.csv"))?))?;
        data.write_schema(BufWriter::new(File::create(out.join("schema.txt"))?))?;
        #[derive(Serialize)]
        struct Resolved<'a> {
            spec_file: &'a PathBuf,
            seed: u64,
            dmus: usize,
            periods: usize,
            format: &'static str,
        }
        write_run_config(
            out,
            "generate",
            &Resolved {
                spec_file: &args.spec,
                seed: spec.seed,
                dmus: spec.dmu_count,
                periods: spec.period_count,
                format: "csv",
            },
        )
    };
    write().map_err(Failure::internal)
}
