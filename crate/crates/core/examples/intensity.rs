//! ρ₁ for each family by the three independent routes.

use std::f64::consts::PI;

use debranges::intensity::{ek_default_step, rho1_closed, rho1_ek_fd, rho1_rice_covariance};
use debranges::spaces::SpaceSpec;

fn main() -> debranges::Result<()> {
    let cases = [
        (SpaceSpec::PaleyWiener { a: PI }, [0.0, 7.3]),
        (SpaceSpec::Airy, [-10.0, 3.0]),
        (SpaceSpec::Bessel { nu: 0.5 }, [-50.0, 400.0]),
        (SpaceSpec::Rational { a: 2.0, n: 7 }, [0.0, 25.0]),
    ];
    println!(
        "{:<28} {:>8} {:>22} {:>22} {:>22}",
        "space", "x", "closed", "rice", "edelman-kostlan"
    );
    for (space, xs) in cases {
        for x in xs {
            let closed = rho1_closed(&space, x)?;
            let rice = rho1_rice_covariance(&space, x)?;
            let ek = rho1_ek_fd(&space, x, ek_default_step(&space, x)?)?;
            println!(
                "{:<28} {x:>8} {closed:>22.15e} {rice:>22.15e} {ek:>22.15e}",
                space.to_string()
            );
        }
    }
    Ok(())
}
