//! `randcorr cluster`: correlation lengths of n×n cluster states via the
//! stabilizer fast path, dense-verified where feasible, with GHZ and
//! product baselines for the scaling comparison.

use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::Args;
use randcorr::{
    cluster, cluster_group, ghz_group, length_of_correlations, pauli_basis, State,
};

use super::exit_code_for;
use crate::manifest::{resolve_out, RunManifest};
use crate::report::{ClaimKind, ReproReport};

#[derive(Debug, Args)]
pub struct ClusterArgs {
    /// Largest lattice side; sides 2..=max_n are computed (cap 5).
    #[arg(long, default_value_t = 4)]
    pub max_n: usize,

    /// Output CSV path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: &ClusterArgs, raw_args: &[String]) -> Result<i32> {
    if !(2..=5).contains(&args.max_n) {
        bail!("lattice side must lie in 2..=5 (group enumeration guard)");
    }
    let mut report = ReproReport::new("cluster scaling");
    let mut rows = Vec::new();
    println!("  n  qubits  C(cluster)     log2 C   C(ghz)        dense check");
    for n in 2..=args.max_n {
        let qubits = n * n;
        let c_cluster = cluster_group(n, n)?.full_weight_count();
        let c_ghz = ghz_group(qubits)?.full_weight_count();
        let (dense_checked, dense_match) = if n <= 3 {
            let state: State = cluster(n, n)?.into();
            let dense = length_of_correlations(&state, &pauli_basis())?;
            report.push_value(
                &format!("dense-vs-stabilizer/{n}x{n}"),
                dense,
                c_cluster as f64,
                1e-6,
                ClaimKind::CrossCheck,
            );
            (true, (dense - c_cluster as f64).abs() < 1e-6)
        } else {
            (false, true)
        };
        // scaling ordering: strictly between the product and GHZ extremes
        // (integer counts, so strict inequalities become ±1 thresholds)
        report.push_lower_bound(
            &format!("ordering/product<cluster/{n}x{n}"),
            c_cluster as f64,
            2.0,
            0.0,
            ClaimKind::Reference,
        );
        report.push_upper_bound(
            &format!("ordering/cluster<ghz/{n}x{n}"),
            c_cluster as f64,
            c_ghz as f64 - 1.0,
            0.0,
            ClaimKind::Reference,
        );
        let log2c = (c_cluster as f64).log2();
        println!(
            "  {n}  {qubits:>6}  {c_cluster:>12}  {log2c:>8.3}  {c_ghz:>12}  {}",
            if !dense_checked {
                "skipped (n > 3)"
            } else if dense_match {
                "match"
            } else {
                "MISMATCH"
            }
        );
        rows.push((n, qubits, c_cluster, log2c, c_ghz, dense_checked, dense_match));
    }
    report.print_human();

    if let Some(out) = &args.out {
        let out = resolve_out(out);
        let mut csv =
            String::from("n,qubits,c_cluster,log2_c,c_ghz,c_product,dense_checked,dense_match\n");
        for (n, qubits, c, log2c, c_ghz, checked, matched) in &rows {
            csv.push_str(&format!(
                "{n},{qubits},{c},{log2c:.12},{c_ghz},1,{checked},{matched}\n"
            ));
        }
        std::fs::write(&out, csv)?;
        let manifest = RunManifest::new("cluster", raw_args, None, std::slice::from_ref(&out));
        manifest.write_next_to(&out)?;
        println!("wrote {}", out.display());
    }
    Ok(exit_code_for(&report))
}
