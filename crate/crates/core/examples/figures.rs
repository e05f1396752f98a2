//! Writes the Airy and Bessel ν = 1/2 plot grids of ρ₁ and φ′ as CSV.

use debranges::cli::{run, Command, JobConfig};
use debranges::spaces::SpaceSpec;

fn main() -> debranges::Result<()> {
    let dir = std::env::temp_dir().join("debranges-figures");
    std::fs::create_dir_all(&dir)?;
    for (name, space, interval) in [
        ("airy", SpaceSpec::Airy, (-20.0, 5.0)),
        ("bessel", SpaceSpec::Bessel { nu: 0.5 }, (-20.0, 100.0)),
    ] {
        let mut config = JobConfig::new(Command::Figures, space);
        config.interval = Some(interval);
        config.grid = 2000;
        config.out = Some(dir.join(format!("{name}.csv")));
        for path in run(&config)?.written {
            println!("{}", path.display());
        }
    }
    Ok(())
}
