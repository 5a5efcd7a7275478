//! `randcorr roof`: convex-roof evaluation of a mixed state — the exact
//! closed form when the rank is 2 (or the plain correlation length when
//! pure), the lower-bound witness otherwise.

use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use randcorr::{convex_roof_rank2_with_tol, witness_rank_m_with_tol, State, StateSpec, RANK_TOL};
use serde_json::json;

use crate::manifest::{resolve_out, RunManifest};

#[derive(Debug, Args)]
pub struct RoofArgs {
    /// State spec (see `length --help`); mixed states are the point here.
    #[arg(long)]
    pub state: String,

    /// Eigenvalue cutoff separating support from kernel.
    #[arg(long, default_value_t = RANK_TOL)]
    pub rank_tol: f64,

    /// Output JSON path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: &RoofArgs, raw_args: &[String]) -> Result<i32> {
    let state = StateSpec::parse(&args.state)?.build()?;
    let rho = match state {
        State::Mixed(m) => m,
        State::Pure(p) => p.to_density_matrix(),
    };
    let witness = witness_rank_m_with_tol(&rho, args.rank_tol)?;
    let exact = if witness.m == 2 {
        Some(convex_roof_rank2_with_tol(&rho, args.rank_tol)?)
    } else {
        None
    };
    let (value, is_exact) = match &exact {
        Some(roof) => (roof.value, true),
        // rank 1 is exact as well: the roof of a pure state is its length
        None => (witness.value, witness.m == 1),
    };
    let entangled = value > 1.0 + 1e-9;
    println!(
        "state {}: rank {} at tol {:.0e}; C = {:.9}; purity = {:.9}; w_min = {:.9}",
        args.state, witness.m, args.rank_tol, witness.c, witness.purity, witness.w_min
    );
    println!(
        "{} = {value:.9} (variant with w_min/m: {:.9}); entangled: {entangled}",
        if is_exact { "roof" } else { "witness bound" },
        witness.variant_value
    );
    if let Some(out) = &args.out {
        let out = resolve_out(out);
        let doc = json!({
            "state": args.state,
            "rank": witness.m,
            "c": witness.c,
            "purity": witness.purity,
            "w_min": exact.as_ref().map(|r| r.w_min).unwrap_or(witness.w_min),
            "value": value,
            "exact": is_exact,
            "variant_w_min_over_m": witness.variant_value,
            "entangled": entangled,
        });
        std::fs::write(&out, serde_json::to_string_pretty(&doc)?)?;
        let manifest = RunManifest::new("roof", raw_args, None, std::slice::from_ref(&out));
        manifest.write_next_to(&out)?;
        println!("wrote {}", out.display());
    }
    Ok(0)
}
