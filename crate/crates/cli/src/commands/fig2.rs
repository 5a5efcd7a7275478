//! `randcorr fig2`: sweep of the rank-m witness over the W-state family
//! (1−p)|W⟩⟨W| + p ρ_n, emitting plot-ready columns.

use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::Args;
use randcorr::{w_family, witness_rank_m};

use super::exit_code_for;
use crate::manifest::{resolve_out, RunManifest};
use crate::report::{fmt_full, ClaimKind, ReproReport};

#[derive(Debug, Args)]
pub struct Fig2Args {
    /// Number of p samples on [0, 1], endpoints included.
    #[arg(long, default_value_t = 21)]
    pub p_steps: usize,

    /// Output CSV path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: &Fig2Args, raw_args: &[String]) -> Result<i32> {
    if args.p_steps < 2 {
        bail!("need at least two p samples");
    }
    let mut report = ReproReport::new("witness family sweep");
    let mut rows = Vec::new();
    println!("    p     witness   variant         C    purity     w_min  rank  entangled");
    for i in 0..args.p_steps {
        let p = i as f64 / (args.p_steps - 1) as f64;
        let w = witness_rank_m(&w_family(p)?)?;
        println!(
            " {p:.3}  {:>9.6} {:>9.6} {:>9.6} {:>9.6} {:>9.2e}  {:>4}  {}",
            w.value, w.variant_value, w.c, w.purity, w.w_min, w.m, w.entangled
        );
        if p < 1.0 {
            report.push_lower_bound(
                &format!("witness-above-one/p={p:.3}"),
                w.value,
                1.0,
                -1e-9,
                ClaimKind::Reference,
            );
        } else {
            report.push_upper_bound(
                "witness-at-separable-endpoint/p=1",
                w.value,
                1.0,
                1e-9,
                ClaimKind::Reference,
            );
        }
        if w.w_min < -1e-9 && w.value > w.variant_value {
            eprintln!(
                "diagnostic: printed prefactor exceeds the w_min/m variant at p={p:.3} \
                 ({} vs {})",
                w.value, w.variant_value
            );
        }
        rows.push((p, w));
    }
    report.print_human();

    if let Some(out) = &args.out {
        let out = resolve_out(out);
        let mut csv =
            String::from("p,witness,witness_variant,c,purity,w_min,rank,entangled\n");
        for (p, w) in &rows {
            csv.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                fmt_full(*p),
                fmt_full(w.value),
                fmt_full(w.variant_value),
                fmt_full(w.c),
                fmt_full(w.purity),
                fmt_full(w.w_min),
                w.m,
                w.entangled
            ));
        }
        std::fs::write(&out, csv)?;
        let manifest = RunManifest::new("fig2", raw_args, None, std::slice::from_ref(&out));
        manifest.write_next_to(&out)?;
        println!("wrote {}", out.display());
    }
    Ok(exit_code_for(&report))
}
