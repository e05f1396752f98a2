//! Phases warped by an orbit: φ₂ = Ψ∘φ₁ with Ψ′ = e^{x(t)}. Because
//! Ψ′² + SΨ/2 = 1 along every orbit, φ₂ has the same first intensity as φ₁.

use crate::error::Result;
use crate::intensity::rho1_from_jet;
use crate::numeric::jet::Jet;
use crate::spaces::{phase_jet, PhaseJet, SpaceSpec};

use super::rk78::Stepper;
use super::{augmented, initial_step, integrate_orbit, OrbitState, DEFAULT_TOL};

#[derive(Clone, Debug)]
pub struct IsoPhase {
    pub space: SpaceSpec,
    pub c: f64,
    pub t0: f64,
    /// One period of the orbit; empty at the fixed point C = 8.
    pub knots: Vec<OrbitState>,
    pub period: f64,
    /// U over one period.
    pub u_period: f64,
}

/// Warps the phase of `space` by the orbit with constant `c`, entered at
/// orbit time `t0`: φ₂(x) = Ψ(φ₁(x)) with Ψ(t) = U(t + t0) − U(t0).
pub fn build_isophase(space: &SpaceSpec, c: f64, t0: f64) -> Result<IsoPhase> {
    space.validate()?;
    super::turning_points(c)?;
    if c == 8.0 {
        return Ok(IsoPhase {
            space: *space,
            c,
            t0,
            knots: Vec::new(),
            period: 0.0,
            u_period: 0.0,
        });
    }
    let orbit = integrate_orbit(c, 0.0, DEFAULT_TOL)?;
    let mut knots: Vec<OrbitState> = orbit
        .states
        .into_iter()
        .filter(|s| s.t < orbit.period)
        .collect();
    let last = *knots.last().expect("orbit has a start");
    let mut stepper = Stepper::new(augmented, DEFAULT_TOL, initial_step(c));
    let end = stepper.run_to(last.t, &[last.x, last.y, last.u], orbit.period)?;
    knots.push(OrbitState {
        t: orbit.period,
        x: end[0],
        y: end[1],
        u: end[2],
    });
    Ok(IsoPhase {
        space: *space,
        c,
        t0,
        knots,
        period: orbit.period,
        u_period: end[2],
    })
}

impl IsoPhase {
    /// (x, y, U) at orbit time s, any real s.
    fn orbit_at(&self, s: f64) -> Result<(f64, f64, f64)> {
        let k = (s / self.period).floor();
        let r = (s - k * self.period).clamp(0.0, self.period);
        let i = self.knots.partition_point(|q| q.t <= r).max(1) - 1;
        let q = self.knots[i];
        let mut stepper = Stepper::new(augmented, DEFAULT_TOL, initial_step(self.c));
        let v = stepper.run_to(q.t, &[q.x, q.y, q.u], r)?;
        Ok((v[0], v[1], v[2] + k * self.u_period))
    }

    /// [Ψ, Ψ′, Ψ″, Ψ‴] at t.
    pub fn psi_jet(&self, t: f64) -> Result<[f64; 4]> {
        if self.knots.is_empty() {
            return Ok([t, 1.0, 0.0, 0.0]);
        }
        let (x, y, u) = self.orbit_at(t + self.t0)?;
        let (_, _, u0) = self.orbit_at(self.t0)?;
        let e = x.exp();
        Ok([u - u0, e, e * y, e * (2.0 - 2.0 * e * e + 1.5 * y * y)])
    }

    /// Ψ′² + SΨ/2 − 1 at t, from the jet.
    pub fn residual(&self, t: f64) -> Result<f64> {
        let [_, p1, p2, p3] = self.psi_jet(t)?;
        let s = p3 / p1 - 1.5 * (p2 / p1).powi(2);
        Ok(p1 * p1 + 0.5 * s - 1.0)
    }

    /// Jet of the warped phase φ₂ at x.
    pub fn jet(&self, x: f64) -> Result<PhaseJet> {
        let j1 = phase_jet(&self.space, x)?;
        let psi = self.psi_jet(j1.phi)?;
        let j = Jet([j1.phi, j1.d1, j1.d2, j1.d3]).compose(psi);
        Ok(PhaseJet::from_derivatives(j.0[0], j.0[1], j.0[2], j.0[3]))
    }

    pub fn rho1(&self, x: f64) -> Result<f64> {
        rho1_from_jet(&self.jet(x)?)
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::intensity::rho1_closed;

    #[test]
    fn fixed_point_is_the_identity() {
        let space = SpaceSpec::Airy;
        let iso = build_isophase(&space, 8.0, 0.3).unwrap();
        for x in [-5.0, 0.0, 2.0] {
            assert_eq!(iso.rho1(x).unwrap(), rho1_closed(&space, x).unwrap());
        }
    }

    #[test]
    fn paley_wiener_intensity_is_preserved() {
        let space = SpaceSpec::PaleyWiener { a: PI };
        let iso = build_isophase(&space, 10.0, 0.0).unwrap();
        let mut worst = 0.0f64;
        for i in 0..=200 {
            let x = i as f64 * 0.05;
            worst = worst.max((iso.rho1(x).unwrap() - 1.0 / 3f64.sqrt()).abs());
        }
        assert!(worst < 1e-6, "{worst}");
        // the warped phase is genuinely different
        let spread = (0..20)
            .map(|i| iso.jet(0.05 * i as f64).unwrap().d1)
            .fold((f64::MAX, 0.0f64), |(lo, hi), d| (lo.min(d), hi.max(d)));
        assert!(spread.1 > 1.5 * PI && spread.0 < 0.75 * PI, "{spread:?}");
    }

    #[test]
    fn chain_rule_identity_holds_on_the_orbit() {
        let iso = build_isophase(&SpaceSpec::PaleyWiener { a: 1.0 }, 100.0, 0.7).unwrap();
        for i in 0..50 {
            let t = -3.0 + i as f64 * 0.17;
            assert!(iso.residual(t).unwrap().abs() < 1e-8);
        }
    }

    #[test]
    fn bessel_intensity_is_preserved() {
        let space = SpaceSpec::Bessel { nu: 0.5 };
        let iso = build_isophase(&space, 12.0, 1.1).unwrap();
        for x in [0.5, 3.0, 40.0, 900.0] {
            let (a, b) = (iso.rho1(x).unwrap(), rho1_closed(&space, x).unwrap());
            assert!((a / b - 1.0).abs() < 1e-6, "{x}: {a} vs {b}");
        }
    }
}
