//! `randcorr length`: correlation length, sector lengths, and the
//! pure-state verdict for a named state or a state file.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::Args;
use randcorr::{
    basis_by_name, correlation_tensor, length_by_subset_purities, length_of_correlations,
    sector_lengths, two_copy_length, State, StateSpec,
};
use serde_json::json;

use super::OutFormat;
use crate::manifest::{resolve_out, RunManifest};
use crate::report::fmt_full;

#[derive(Debug, Args)]
pub struct LengthArgs {
    /// State spec: `ghz:N[:d]`, `dicke:N:k`, `w:N`, `bell:psi-`,
    /// `double_singlet`, `five_qubit`, `locc_psi`, `locc_phi`,
    /// `cluster:RxC`, `product:i,j,k[:d]`, `wfamily:p`, or `file:<path>`.
    #[arg(long)]
    pub state: String,

    /// Operator basis: `pauli`, `gell-mann`, `weyl`, or `mixed:<seed>`.
    #[arg(long, default_value = "gell-mann")]
    pub basis: String,

    /// Output path; JSON summary or tensor CSV depending on --format.
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "json")]
    pub format: OutFormat,

    /// Cross-check the string-enumeration value against the two-copy and
    /// subset-purity routes (dense; small systems only).
    #[arg(long)]
    pub verify: bool,
}

pub fn run(args: &LengthArgs, raw_args: &[String]) -> Result<i32> {
    let spec = StateSpec::parse(&args.state)?;
    let state = spec.build().context("building state")?;
    let shape = state.shape().clone();
    let d = match shape.uniform_dim() {
        Some(d) => d,
        None => bail!("the correlation length needs a uniform local dimension"),
    };
    let basis = basis_by_name(&args.basis, d)?;
    let n = shape.party_count();
    // string enumeration costs (d²−1)^N passes over the dense state
    let log_cost = ((d * d - 1) as f64).ln() * n as f64 + (shape.total_dim() as f64).ln();
    if log_cost > 25.0 {
        eprintln!(
            "note: dense enumeration over {}^{n} operator strings — this may take a while; \
             stabilizer states have an exact fast path (see `cluster`)",
            d * d - 1
        );
    }
    let c = length_of_correlations(&state, &basis)?;

    // the sector sweep costs another factor of (4/3)^N on top of C
    let sectors = if shape.is_qubits() && n <= 10 {
        Some(sector_lengths(&state)?)
    } else {
        None
    };
    // the threshold reuses the basis-independent value computed above
    let verdict = match &state {
        State::Pure(_) => {
            let threshold = ((d - 1) as f64).powi(n as i32);
            Some(randcorr::EntanglementVerdict {
                c,
                threshold,
                margin: c - threshold,
                entangled: c - threshold > 1e-9,
            })
        }
        State::Mixed(_) => None,
    };

    println!(
        "state {} ({} parties, d = {d}, {}): C = {c:.12}",
        args.state,
        shape.party_count(),
        match &state {
            State::Pure(_) => "pure",
            State::Mixed(_) => "mixed",
        }
    );
    if let Some(v) = &verdict {
        println!(
            "threshold (d−1)^N = {}; margin = {:.12}; entangled: {}",
            v.threshold, v.margin, v.entangled
        );
    }
    if let Some(s) = &sectors {
        let rendered: Vec<String> = s.values().iter().map(|v| format!("{v:.9}")).collect();
        println!("sector lengths C_0..C_N: [{}]", rendered.join(", "));
    }

    let mut verification = None;
    if args.verify {
        let purity_route = length_by_subset_purities(&state)?;
        let two_copy = match &state {
            State::Pure(psi) => Some(two_copy_length(psi)?),
            State::Mixed(_) => None,
        };
        let mut worst = (c - purity_route).abs();
        if let Some(t) = two_copy {
            worst = worst.max((c - t).abs());
        }
        println!(
            "verification: purity route {purity_route:.12}{}; max deviation {worst:.3e}",
            two_copy
                .map(|t| format!(", two-copy route {t:.12}"))
                .unwrap_or_default()
        );
        if worst > 1e-8 {
            eprintln!("warning: cross-check routes disagree beyond 1e-8");
        }
        verification = Some(json!({
            "purity_route": purity_route,
            "two_copy_route": two_copy,
            "max_deviation": worst,
        }));
    }

    if let Some(out) = &args.out {
        let out = resolve_out(out);
        match args.format {
            OutFormat::Json => {
                let doc = json!({
                    "state": args.state,
                    "dims": shape.dims(),
                    "kind": match &state { State::Pure(_) => "pure", State::Mixed(_) => "mixed" },
                    "basis": basis.tag().to_string(),
                    "c": c,
                    "sector_lengths": sectors.as_ref().map(|s| s.values().to_vec()),
                    "threshold": verdict.as_ref().map(|v| v.threshold),
                    "margin": verdict.as_ref().map(|v| v.margin),
                    "entangled": verdict.as_ref().map(|v| v.entangled),
                    "verification": verification,
                });
                std::fs::write(&out, serde_json::to_string_pretty(&doc)?)?;
            }
            OutFormat::Csv => {
                let tensor = correlation_tensor(&state, &basis)?;
                let n = shape.party_count();
                let mut text = String::new();
                let header: Vec<String> = (1..=n).map(|i| format!("mu_{i}")).collect();
                text.push_str(&header.join(","));
                text.push_str(",re,im\n");
                for (idx, value) in tensor.entries() {
                    let cells: Vec<String> = idx.iter().map(|m| m.to_string()).collect();
                    text.push_str(&cells.join(","));
                    text.push(',');
                    text.push_str(&fmt_full(value.re));
                    text.push(',');
                    text.push_str(&fmt_full(value.im));
                    text.push('\n');
                }
                std::fs::write(&out, text)?;
            }
        }
        let manifest = RunManifest::new("length", raw_args, None, std::slice::from_ref(&out));
        manifest.write_next_to(&out)?;
        println!("wrote {}", out.display());
    }
    Ok(0)
}
