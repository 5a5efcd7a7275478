//! `randcorr counterexamples`: the five-qubit state whose correlation
//! length grows under a local measurement (to 9 on both branches), and the
//! five-qubit pair convertible by local operations against the ordering of
//! their correlation lengths.

use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use randcorr::{
    dicke, five_qubit_counterexample, ghz, length_of_correlations, locc_phi, locc_psi,
    pauli_basis, product_basis_state, tensor_product,
};

use super::exit_code_for;
use crate::manifest::{resolve_out, RunManifest};
use crate::report::{ClaimKind, ReproReport};

#[derive(Debug, Args)]
pub struct CounterexamplesArgs {
    /// Output JSON path for the report.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: &CounterexamplesArgs, raw_args: &[String]) -> Result<i32> {
    let b = pauli_basis();
    let tol = 1e-9;
    let mut report = ReproReport::new("counterexamples");

    let c_initial = length_of_correlations(&five_qubit_counterexample().into(), &b)?;
    report.push_value("five-qubit/initial", c_initial, 8.0, tol, ClaimKind::Reference);

    let zero = product_basis_state(&[0], 2)?;
    let one = product_basis_state(&[1], 2)?;
    let branch0 = tensor_product(&[zero, ghz(4, 2)?])?;
    let branch1 = tensor_product(&[one, dicke(4, 2)?])?;
    let c_b0 = length_of_correlations(&branch0.into(), &b)?;
    let c_b1 = length_of_correlations(&branch1.into(), &b)?;
    report.push_value("five-qubit/branch-0", c_b0, 9.0, tol, ClaimKind::Reference);
    report.push_value("five-qubit/branch-1", c_b1, 9.0, tol, ClaimKind::Reference);

    // both outcomes are equally likely, so the post-measurement average
    // exceeds the initial value: C increases under this local measurement
    let average = 0.5 * c_b0 + 0.5 * c_b1;
    report.push_value(
        "five-qubit/branch-average-minus-initial",
        average - c_initial,
        1.0,
        tol,
        ClaimKind::Reference,
    );

    let c_psi = length_of_correlations(&locc_psi().into(), &b)?;
    let c_phi = length_of_correlations(&locc_phi().into(), &b)?;
    report.push_value("conversion-pair/source", c_psi, 8.0, tol, ClaimKind::Reference);
    report.push_value("conversion-pair/target", c_phi, 9.0, tol, ClaimKind::Reference);

    println!(
        "five-qubit: C = {c_initial:.9}; measuring qubit 1 gives branches with \
         C = {c_b0:.9} and {c_b1:.9} (average {average:.9} — increases on average)"
    );
    println!(
        "conversion pair: source C = {c_psi:.9} converts locally to target with C = {c_phi:.9}"
    );
    report.print_human();

    if let Some(out) = &args.out {
        let out = resolve_out(out);
        std::fs::write(&out, serde_json::to_string_pretty(&report)?)?;
        let manifest = RunManifest::new("counterexamples", raw_args, None, std::slice::from_ref(&out));
        manifest.write_next_to(&out)?;
        println!("wrote {}", out.display());
    }
    Ok(exit_code_for(&report))
}
