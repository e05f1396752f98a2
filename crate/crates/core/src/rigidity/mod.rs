//! The system x′ = y, y′ = 2 − 2e^{2x} + y²/2 governing x = log ψ′ for
//! phase reparametrizations ψ with ψ′² + Sψ/2 = 1, which preserve the first
//! intensity.
//!
//! Orbits are labelled by the conserved quantity C = (y² + 4(1 + e^{2x}))/e^x
//! and start at the left turning point (x₋(C), 0). All of them are periodic
//! with period π.

mod isophase;
pub mod rk78;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::roots::brent;
use rk78::{step, Stepper};

pub use isophase::{build_isophase, IsoPhase};

/// Default relative tolerance of the orbit integrator.
pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitState {
    pub t: f64,
    /// log ψ′(t)
    pub x: f64,
    /// x′(t)
    pub y: f64,
    /// U(t) = ∫₀ᵗ e^{x(τ)} dτ
    pub u: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Orbit {
    pub c: f64,
    pub states: Vec<OrbitState>,
    pub period: f64,
}

pub fn ode_rhs(s: &OrbitState) -> (f64, f64) {
    (s.y, 2.0 - 2.0 * (2.0 * s.x).exp() + 0.5 * s.y * s.y)
}

fn augmented(v: &[f64; 3]) -> [f64; 3] {
    let ex = v[0].exp();
    [v[1], 2.0 - 2.0 * ex * ex + 0.5 * v[1] * v[1], ex]
}

pub fn conserved(x: f64, y: f64) -> f64 {
    (y * y + 4.0 * (1.0 + (2.0 * x).exp())) / x.exp()
}

/// (x₋, x₊) = (log r₋, log r₊) with r± = (C ± √(C² − 64))/8; r₊r₋ = 1.
pub fn turning_points(c: f64) -> Result<(f64, f64)> {
    if !(c >= 8.0) || !c.is_finite() {
        return Err(Error::invalid(
            "c",
            format!("orbit constant must be at least 8, got {c}"),
        ));
    }
    let d = ((c - 8.0) * (c + 8.0)).sqrt();
    let r_plus = (c + d) / 8.0;
    let r_minus = 8.0 / (c + d);
    Ok((r_minus.ln(), r_plus.ln()))
}

fn check(c: f64, tol: f64) -> Result<()> {
    if !(c > 8.0) || !c.is_finite() {
        return Err(Error::invalid(
            "c",
            format!("orbit constant must exceed 8, got {c}"),
        ));
    }
    if !(1e-12..1e-2).contains(&tol) {
        return Err(Error::invalid(
            "tol",
            format!("tolerance {tol} outside [1e-12, 1e-2)"),
        ));
    }
    Ok(())
}

fn initial_step(c: f64) -> f64 {
    // the fast part of a wide orbit near x₊ lasts about 1/√C
    0.05 / c.sqrt().max(1.0)
}

/// Integrates the orbit with constant `c` from (x₋, 0) until both `t_end`
/// and the first full return (y back to 0 from below) have been reached.
/// The return time is localized by root finding on single steps.
pub fn integrate_orbit(c: f64, t_end: f64, tol: f64) -> Result<Orbit> {
    check(c, tol)?;
    let (x_minus, _) = turning_points(c)?;
    let mut stepper = Stepper::new(augmented, tol, initial_step(c));
    let mut v = [x_minus, 0.0, 0.0];
    let mut t = 0.0;
    let mut states = vec![OrbitState {
        t,
        x: v[0],
        y: v[1],
        u: v[2],
    }];
    let mut period = None;
    let mut descended = false;
    while t < t_end || period.is_none() {
        let max_h = if period.is_some() {
            t_end - t
        } else {
            f64::INFINITY
        };
        let (h, next) = stepper.advance(t, &v, max_h)?;
        if period.is_none() {
            if next[1] < 0.0 {
                descended = true;
            } else if descended {
                let tau = brent(|s| step(&augmented, &v, s).0[1], 0.0, h, 1e-15)?;
                period = Some(t + tau);
            }
        }
        v = next;
        t = if h == max_h { t_end } else { t + h };
        states.push(OrbitState {
            t,
            x: v[0],
            y: v[1],
            u: v[2],
        });
        if t > 1e6 {
            return Err(Error::Numeric(format!(
                "no return of the orbit with C = {c}"
            )));
        }
    }
    Ok(Orbit {
        c,
        states,
        period: period.expect("loop exits with a period"),
    })
}

/// State of the orbit with constant `c` at time s ≥ 0.
pub fn orbit_state(c: f64, s: f64) -> Result<OrbitState> {
    check(c, DEFAULT_TOL)?;
    if !(s >= 0.0) {
        return Err(Error::invalid("s", "must be non-negative"));
    }
    let (x_minus, _) = turning_points(c)?;
    let mut stepper = Stepper::new(augmented, DEFAULT_TOL, initial_step(c));
    let v = stepper.run_to(0.0, &[x_minus, 0.0, 0.0], s)?;
    Ok(OrbitState {
        t: s,
        x: v[0],
        y: v[1],
        u: v[2],
    })
}

/// U(s) = ∫₀ˢ e^{x(t)} dt along the orbit with constant `c`.
pub fn u_integral(c: f64, s: f64) -> Result<f64> {
    Ok(orbit_state(c, s)?.u)
}
