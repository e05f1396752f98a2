//! Runs the built-in verification suite for the Bessel space, as the
//! `verify` command does.

use debranges::cli::{execute, Command, JobConfig};
use debranges::spaces::SpaceSpec;

fn main() -> debranges::Result<()> {
    let mut config = JobConfig::new(Command::Verify, SpaceSpec::Bessel { nu: 0.0 });
    config.interval = Some((-20.0, 400.0));
    let report = execute(&config)?;
    let table = report
        .table("checks")
        .expect("verify writes a checks table");
    for row in &table.rows {
        println!("{:<32} {:>24} {:>12} {}", row[0], row[1], row[2], row[3]);
    }
    Ok(())
}
