//! Isochronous orbits and a warped Airy phase with unchanged intensity.

use std::f64::consts::PI;

use debranges::intensity::rho1_closed;
use debranges::rigidity::{build_isophase, integrate_orbit, u_integral, DEFAULT_TOL};
use debranges::spaces::{phase_jet, SpaceSpec};

fn main() -> debranges::Result<()> {
    for c in [8.5, 10.0, 100.0, 1e4] {
        let orbit = integrate_orbit(c, 0.0, DEFAULT_TOL)?;
        println!(
            "C = {c:>7}: period − π = {:+.2e}, U(π/2) − π/2 = {:+.2e}",
            orbit.period - PI,
            u_integral(c, PI / 2.0)? - PI / 2.0
        );
    }
    let space = SpaceSpec::Airy;
    let iso = build_isophase(&space, 10.0, 0.0)?;
    println!(
        "\n{:>6} {:>12} {:>12} {:>12} {:>12}",
        "x", "φ′", "warped φ′", "ρ₁", "warped ρ₁"
    );
    for x in [-8.0, -4.0, -1.0, 0.5, 2.0] {
        println!(
            "{x:>6} {:>12.6} {:>12.6} {:>12.8} {:>12.8}",
            phase_jet(&space, x)?.d1,
            iso.jet(x)?.d1,
            rho1_closed(&space, x)?,
            iso.rho1(x)?
        );
    }
    Ok(())
}
