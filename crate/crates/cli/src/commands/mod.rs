pub mod cluster;
pub mod counterexamples;
pub mod fig2;
pub mod length;
pub mod roof;
pub mod table1;

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Csv,
}

/// Exit policy shared by every command: 0 on success, 2 when a
/// reference-tagged claim fails its tolerance.
pub fn exit_code_for(report: &crate::report::ReproReport) -> i32 {
    if report.reference_failures() > 0 {
        2
    } else {
        0
    }
}
