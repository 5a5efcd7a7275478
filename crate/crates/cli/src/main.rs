//! Command-line harness for the correlation toolkit.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when a
//! reference-tagged reproduction claim fails its tolerance.

mod commands;
mod manifest;
mod report;

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use commands::{cluster, counterexamples, fig2, length, roof, table1};
use manifest::RunManifest;

#[derive(Debug, Parser)]
#[command(
    name = "randcorr",
    version,
    about = "Correlations of random local measurements: lengths, witnesses, convex roofs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Correlation length, sector lengths, and entanglement verdict.
    Length(length::LengthArgs),
    /// Detection-probability grid for GHZ states, one setting per party.
    Table1(table1::Table1Args),
    /// Cluster-state correlation lengths via the stabilizer fast path.
    Cluster(cluster::ClusterArgs),
    /// Correlation-length counterexamples to monotonicity.
    Counterexamples(counterexamples::CounterexamplesArgs),
    /// Rank-m witness sweep over the W-state family.
    Fig2(fig2::Fig2Args),
    /// Convex roof (exact for rank ≤ 2) or witness bound of a state.
    Roof(roof::RoofArgs),
    /// Re-run a recorded manifest into a fresh output path.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
struct ReplayArgs {
    /// Manifest written next to a previous output.
    #[arg(long)]
    manifest: PathBuf,

    /// Fresh output path; results must be byte-identical to the original.
    #[arg(long)]
    out: PathBuf,
}

fn dispatch(cli: &Cli, raw_args: &[String]) -> Result<i32> {
    match &cli.command {
        Command::Length(args) => length::run(args, raw_args),
        Command::Table1(args) => table1::run(args, raw_args),
        Command::Cluster(args) => cluster::run(args, raw_args),
        Command::Counterexamples(args) => counterexamples::run(args, raw_args),
        Command::Fig2(args) => fig2::run(args, raw_args),
        Command::Roof(args) => roof::run(args, raw_args),
        Command::Replay(args) => replay(args),
    }
}

fn replay(args: &ReplayArgs) -> Result<i32> {
    let manifest = RunManifest::load(&args.manifest)?;
    if manifest.command == "replay" {
        bail!("refusing to replay a replay");
    }
    let mut argv: Vec<String> = vec!["randcorr".into()];
    argv.extend(manifest.args.iter().cloned());
    argv.push("--out".into());
    argv.push(args.out.to_string_lossy().into_owned());
    let cli = Cli::try_parse_from(&argv)
        .with_context(|| format!("manifest args do not parse: {:?}", manifest.args))?;
    println!("replaying `{}` into {}", manifest.command, args.out.display());
    dispatch(&cli, &argv[1..])
}

fn main() {
    let raw_args: Vec<String> = std::env::args().skip(1).collect();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match dispatch(&cli, &raw_args) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}
