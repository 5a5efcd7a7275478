//! `randcorr table1`: detection probabilities of GHZ states under a single
//! random setting per party, for finite and infinite shot counts, compared
//! against the published grid.

use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::Args;
use randcorr::{detection_probability, ghz, Shots, State, WitnessConfig};
use serde_json::json;

use super::exit_code_for;
use crate::manifest::{resolve_out, RunManifest};
use crate::report::{fmt_full, ClaimKind, ReproReport};

/// Reference detection rates (percent) at 95.4% confidence, one random
/// setting per party, for N = 3..=10.
const REFERENCE_K1000: [f64; 8] = [26.0, 44.0, 47.0, 57.0, 52.0, 48.0, 41.0, 34.0];
const REFERENCE_INF: [f64; 8] = [26.0, 44.0, 48.0, 63.0, 67.0, 77.0, 80.0, 86.0];
/// Reference witness bound for N = 6, K = 1000.
const REFERENCE_BOUND_N6_K1000: f64 = 0.01;

#[derive(Debug, Args)]
pub struct Table1Args {
    #[arg(long, default_value_t = 3)]
    pub n_min: usize,

    #[arg(long, default_value_t = 10)]
    pub n_max: usize,

    /// Comma-separated shot counts per cell; `inf` for exact correlations.
    #[arg(long, default_value = "1000,inf")]
    pub shots: String,

    /// Witness trials per cell.
    #[arg(long, default_value_t = 100_000)]
    pub trials: usize,

    /// Calibration trials per cell for the δ quantile.
    #[arg(long, default_value_t = 1_000_000)]
    pub calibration_trials: usize,

    #[arg(long, default_value_t = 0.954)]
    pub confidence: f64,

    #[arg(long, default_value_t = 2024)]
    pub seed: u64,

    /// Output CSV path; a JSON report lands next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_shots(text: &str) -> Result<Vec<Shots>> {
    text.split(',')
        .map(|s| match s.trim() {
            "inf" | "infinity" => Ok(Shots::Infinite),
            other => other
                .parse::<u64>()
                .map(Shots::Finite)
                .map_err(|_| anyhow::anyhow!("bad shot count '{other}'")),
        })
        .collect()
}

pub fn run(args: &Table1Args, raw_args: &[String]) -> Result<i32> {
    if args.n_min < 3 || args.n_max > 10 || args.n_min > args.n_max {
        bail!("N range must sit inside [3, 10]");
    }
    let shot_list = parse_shots(&args.shots)?;
    if shot_list.is_empty() {
        bail!("need at least one shot count");
    }
    let at_reference_confidence = (args.confidence - 0.954).abs() < 1e-12;
    let mut report = ReproReport::new("table1");
    let mut witness_reports = Vec::new();
    let mut grid: Vec<Vec<f64>> = vec![Vec::new(); shot_list.len()];

    for (row, &shots) in shot_list.iter().enumerate() {
        for n in args.n_min..=args.n_max {
            let config = WitnessConfig {
                shots,
                confidence: args.confidence,
                calibration_trials: args.calibration_trials,
                ..WitnessConfig::default()
            };
            let state: State = ghz(n, 2)?.into();
            let seed = args
                .seed
                .wrapping_mul(1000)
                .wrapping_add((row * 100 + n) as u64);
            let rep = detection_probability(&state, &config, args.trials, seed)?;
            grid[row].push(rep.detection_probability);
            if at_reference_confidence {
                let reference = match shots {
                    Shots::Finite(1000) => Some(REFERENCE_K1000[n - 3]),
                    Shots::Infinite => Some(REFERENCE_INF[n - 3]),
                    _ => None,
                };
                if let Some(r) = reference {
                    report.push_value(
                        &format!("detection/N={n}/K={shots}"),
                        rep.detection_probability,
                        r / 100.0,
                        0.04,
                        ClaimKind::Reference,
                    );
                }
                if n == 6 && shots == Shots::Finite(1000) {
                    report.push_value(
                        "bound/N=6/K=1000",
                        rep.bound,
                        REFERENCE_BOUND_N6_K1000,
                        0.003,
                        ClaimKind::Reference,
                    );
                }
            }
            witness_reports.push(json!({
                "parties": rep.parties,
                "shots": shots.to_string(),
                "confidence": rep.confidence,
                "delta": rep.delta,
                "bound": rep.bound,
                "detection_probability": rep.detection_probability,
                "std_error": rep.std_error,
                "trials": rep.trials,
            }));
        }
    }

    // human-readable grid
    let ns: Vec<usize> = (args.n_min..=args.n_max).collect();
    let header: Vec<String> = ns.iter().map(|n| format!("N={n:<5}")).collect();
    println!("detection probability, one random setting per party");
    println!("{:>8}  {}", "K", header.join(" "));
    for (row, &shots) in shot_list.iter().enumerate() {
        let cells: Vec<String> = grid[row].iter().map(|p| format!("{:>5.1}%", 100.0 * p)).collect();
        println!("{:>8}  {}", shots.to_string(), cells.join(" "));
    }
    report.print_human();

    if let Some(out) = &args.out {
        let out = resolve_out(out);
        let mut csv = String::from("shots");
        for n in &ns {
            csv.push_str(&format!(",n{n}"));
        }
        csv.push('\n');
        for (row, &shots) in shot_list.iter().enumerate() {
            csv.push_str(&shots.to_string());
            for v in &grid[row] {
                csv.push(',');
                csv.push_str(&fmt_full(*v));
            }
            csv.push('\n');
        }
        std::fs::write(&out, csv)?;
        let report_path = out.with_extension("report.json");
        let doc = json!({
            "report": report,
            "witness_reports": witness_reports,
        });
        std::fs::write(&report_path, serde_json::to_string_pretty(&doc)?)?;
        let manifest = RunManifest::new(
            "table1",
            raw_args,
            Some(args.seed),
            &[out.clone(), report_path.clone()],
        );
        manifest.write_next_to(&out)?;
        println!("wrote {} and {}", out.display(), report_path.display());
    }
    Ok(exit_code_for(&report))
}
