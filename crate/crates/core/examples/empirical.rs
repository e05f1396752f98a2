//! Monte Carlo histogram of Bessel zeros against the analytic intensity.

use debranges::spaces::SpaceSpec;
use debranges::stats::{compare_closed_form, empirical_intensity};

fn main() -> debranges::Result<()> {
    let hist = empirical_intensity(
        &SpaceSpec::Bessel { nu: 0.5 },
        0.0,
        (-20.0, 200.0),
        11,
        2000,
        0,
    )?;
    let cmp = compare_closed_form(&hist)?;
    println!(
        "{:>8} {:>8} {:>12} {:>12} {:>7}",
        "lo", "hi", "empirical", "analytic", "z"
    );
    for b in &cmp.per_bin {
        println!(
            "{:>8.1} {:>8.1} {:>12.6} {:>12.6} {:>7.2}",
            b.lo, b.hi, b.empirical, b.analytic, b.z
        );
    }
    println!(
        "max |z| = {:.2} over {} samples",
        cmp.max_abs_z, hist.n_samples
    );
    Ok(())
}
