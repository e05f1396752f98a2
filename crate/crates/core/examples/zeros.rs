//! One realization of the Airy GAF and its real zeros.

use debranges::gaf::{real_zeros, sample};
use debranges::intensity::expected_count;
use debranges::spaces::SpaceSpec;

fn main() -> debranges::Result<()> {
    let space = SpaceSpec::Airy;
    let interval = (-30.0, 5.0);
    let s = sample(&space, 0.0, interval, 42)?;
    let z = real_zeros(&s, interval)?;
    println!(
        "{} zeros on [{}, {}], expected {:.3}",
        z.zeros.len(),
        interval.0,
        interval.1,
        expected_count(&space, interval.0, interval.1)?
    );
    for x in &z.zeros {
        println!("{x:.12}");
    }
    if !z.unresolved.is_empty() {
        println!("possible double zeros near {:?}", z.unresolved);
    }
    Ok(())
}
