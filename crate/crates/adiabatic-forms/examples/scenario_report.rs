//! Runs every command on the shipped scenario files and folds the reports into
//! a pass/fail matrix, as the `adiabatic` binary would.

use std::path::PathBuf;

use adiabatic_forms::harness::{self, Command, RunOptions};

fn main() -> adiabatic_forms::error::Result<()> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let out = std::env::temp_dir().join("adiabatic-forms-report");
    let opts = RunOptions { out: Some(out.clone()), ..RunOptions::default() };
    let plan = [
        ("t2_u1_c1zero", vec![Command::LieCheck, Command::VerifyCs1, Command::Pages]),
        ("t2_u1_c1nonzero", vec![Command::VerifyCs1, Command::Pages]),
        ("t4_su2_cs3", vec![Command::VerifyCs3, Command::Spectrum]),
        ("t4_su2_flat", vec![Command::Pages]),
        ("t3_su2_pages", vec![Command::Pages]),
    ];
    for (name, commands) in plan {
        let path = root.join("scenarios").join(format!("{name}.toml"));
        for c in commands {
            let r = harness::run(c, &path, &opts);
            println!("{name:<16} {:<11} {:?}", c.name(), r.outcome);
        }
    }
    let summary = harness::cmd_report(&out)?;
    for row in &summary.criteria {
        println!("criterion {}: {}", row.criterion, if row.pass { "pass" } else { "FAIL" });
    }
    println!("reports under {}", out.display());
    Ok(())
}
