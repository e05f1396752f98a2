//! The phase φ with E(x) = |E(x)|e^{−iφ(x)} and its derivatives.
//!
//! Additive constants are fixed per family: Paley-Wiener φ(0) = 0, Airy
//! φ(a₁) = 0, Bessel φ(j²_{ν,1}) = 0 and Rational φ(0) = nπ/2. The value of φ
//! is read off E by atan2, with the multiple of π taken from the nearest zero
//! of the relevant special function.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use super::zeros::{nearest_airy_zero, nearest_bessel_zero_sq};
use super::SpaceSpec;
use crate::error::{Error, Result};
use crate::numeric::Jet;
use crate::specfun::airy::coeffs as airy_coeffs;
use crate::specfun::{airy_scaled, bessel_entire_derivatives};

/// φ and its first three derivatives at a point, with the Schwarzian.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseJet {
    pub phi: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub schwarzian: f64,
}

impl PhaseJet {
    /// Assembles a jet from φ and its derivatives, computing Sφ.
    pub fn from_derivatives(phi: f64, d1: f64, d2: f64, d3: f64) -> Self {
        let r = d2 / d1;
        PhaseJet {
            phi,
            d1,
            d2,
            d3,
            schwarzian: d3 / d1 - 1.5 * r * r,
        }
    }

    /// φ′²/3 + Sφ/6, the quantity under the root in the intensity.
    pub fn radicand(&self) -> f64 {
        self.d1 * self.d1 / 3.0 + self.schwarzian / 6.0
    }
}

/// (A, B, log_scale) with A = |E|cos φ, B = |E|sin φ in the reference
/// convention, each multiplied by e^{−log_scale}.
pub fn e_components(space: &SpaceSpec, x: f64) -> Result<(f64, f64, f64)> {
    match *space {
        SpaceSpec::PaleyWiener { a } => {
            let (s, c) = (a * x).sin_cos();
            Ok((c, s, 0.0))
        }
        SpaceSpec::Airy => {
            let (p, ls) = airy_scaled(x);
            Ok((p.ai_prime, p.ai, ls))
        }
        SpaceSpec::Bessel { nu } => {
            let (d, ls) = bessel_entire_derivatives(nu, x)?;
            // E_ν = A_ν − iB_ν has phase π at the first zero of B_ν; the
            // reference convention puts 0 there, which flips both signs.
            let a = 2.0 * x * d[1] + nu * d[0];
            Ok((-a, -d[0], ls))
        }
        SpaceSpec::Rational { a, n } => {
            let phi = rational_phase(a, n, x);
            let (s, c) = phi.sin_cos();
            let log_mod = 0.5 * n as f64 * (x * x + a * a).ln();
            Ok((c, s, log_mod))
        }
    }
}

fn rational_phase(a: f64, n: u32, x: f64) -> f64 {
    n as f64 * (FRAC_PI_2 + (x / a).atan())
}

/// φ′ as a jet [φ′, φ″, φ‴, φ⁗] from derivatives of A and B up to order 4.
fn jet_from_pair(a: [f64; 5], b: [f64; 5]) -> Jet {
    let a0 = Jet([a[0], a[1], a[2], a[3]]);
    let a1 = Jet([a[1], a[2], a[3], a[4]]);
    let b0 = Jet([b[0], b[1], b[2], b[3]]);
    let b1 = Jet([b[1], b[2], b[3], b[4]]);
    let num = a0 * b1 - a1 * b0;
    let den = a0 * a0 + b0 * b0;
    num / den
}

/// Partial sum Σ c_k t^k of an asymptotic series as a jet, stopping at the
/// smallest term of the scalar series after index `settle`.
fn jet_series(c: &[f64], t: Jet, start: usize, settle: usize) -> Jet {
    let tv = t.value().abs();
    let mut last = f64::INFINITY;
    let mut n = start;
    for (k, ck) in c.iter().enumerate().skip(start) {
        let m = ck.abs() * tv.powi(k as i32);
        if (m > last && k > settle) || (m < 1e-17 && k > start) {
            break;
        }
        last = m;
        n = k + 1;
    }
    let mut acc = Jet::constant(0.0);
    for k in (start..n).rev() {
        acc = acc * t + c[k];
    }
    for _ in 0..start {
        acc = acc * t;
    }
    acc
}

/// Airy φ′ jet for x ≥ 10 from the large-x expansions, free of the
/// cancellation in Ai′² − xAi².
fn airy_asymptotic_jet(x: f64) -> Jet {
    let (u, v) = airy_coeffs();
    let alt = |k: usize| if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let cu: Vec<f64> = u.iter().enumerate().map(|(k, c)| alt(k) * c).collect();
    let cd: Vec<f64> = u
        .iter()
        .zip(v.iter())
        .enumerate()
        .map(|(k, (uc, vc))| alt(k) * (vc - uc))
        .collect();
    let xj = Jet::variable(x);
    let t = (xj.powf(1.5) * (2.0 / 3.0)).recip();
    let uu = jet_series(&cu, t, 0, 0);
    let vmu = jet_series(&cd, t, 1, 0);
    let vv = uu + vmu;
    (xj * vmu * (vv + uu)) / (xj * vv * vv + uu * uu)
}

/// Bessel φ′ jet for large negative x from the expansion of I_ν, free of the
/// cancellation in the entire-pair formula there.
fn bessel_asymptotic_jet(nu: f64, x: f64) -> Jet {
    let mu = 4.0 * nu * nu;
    let mut a = vec![1.0];
    for k in 1..60 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        a.push(a[k - 1] * (mu - odd * odd) / (kf * 8.0));
    }
    let alt = |k: usize| if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let cp: Vec<f64> = a.iter().enumerate().map(|(k, c)| alt(k) * c).collect();
    // dP/ds = −Σ k c_k u^{k+1}
    let mut cdp = vec![0.0; a.len() + 1];
    for (k, c) in cp.iter().enumerate() {
        cdp[k + 1] = -(k as f64) * c;
    }
    let xj = Jet::variable(x);
    let s2 = -xj;
    let u = s2.powf(-0.5);
    // terms grow while (2k − 1)² < 4ν²
    let settle = (nu + 1.0).ceil() as usize;
    let p = jet_series(&cp, u, 0, settle);
    let dp = jet_series(&cdp, u, 2, settle + 1);
    let p_minus_q = p * u * 0.5 - dp;
    let q = p - p_minus_q;
    let num = p * p * (nu * nu) + s2 * p_minus_q * (p + q);
    let den = s2 * (s2 * q * q + p * p) * 2.0;
    num / den
}

/// −x beyond which the Bessel jet comes from the I_ν expansion. For large
/// orders the entire-pair formula loses φ″ and φ‴ well before (20 + ν²)².
fn bessel_jet_radius(nu: f64) -> f64 {
    let s = 30.0 + 2.0 * nu;
    crate::specfun::bessel::asymptotic_radius(nu).min(s * s)
}

/// [φ′, φ″, φ‴].
pub(crate) fn phase_derivatives(space: &SpaceSpec, x: f64) -> Result<[f64; 3]> {
    let j = match *space {
        SpaceSpec::PaleyWiener { a } => return Ok([a, 0.0, 0.0]),
        SpaceSpec::Rational { a, n } => {
            let n = n as f64;
            let p = x * x + a * a;
            return Ok([
                n * a / p,
                -2.0 * n * a * x / (p * p),
                n * a * (6.0 * x * x - 2.0 * a * a) / (p * p * p),
            ]);
        }
        SpaceSpec::Airy => {
            if x >= 10.0 {
                airy_asymptotic_jet(x)
            } else {
                let (p, _) = airy_scaled(x);
                let (ai, aip) = (p.ai, p.ai_prime);
                let b = [ai, aip, x * ai, ai + x * aip, 2.0 * aip + x * x * ai];
                let a = [
                    aip,
                    x * ai,
                    ai + x * aip,
                    2.0 * aip + x * x * ai,
                    4.0 * x * ai + x * x * aip,
                ];
                jet_from_pair(a, b)
            }
        }
        SpaceSpec::Bessel { nu } => {
            if x <= -bessel_jet_radius(nu) {
                bessel_asymptotic_jet(nu, x)
            } else {
                let (b, _) = bessel_entire_derivatives(nu, x)?;
                let mut a = [0.0; 5];
                a[0] = 2.0 * x * b[1] + nu * b[0];
                for m in 1..5 {
                    a[m] = -nu * b[m] - 0.5 * b[m - 1];
                }
                jet_from_pair(a, b)
            }
        }
    };
    let d = [j.0[0], j.0[1], j.0[2]];
    if !(d[0] > 0.0) || !d.iter().all(|v| v.is_finite()) {
        return Err(Error::Numeric(format!(
            "phase derivative {d:?} at x = {x} in {space}"
        )));
    }
    Ok(d)
}

/// The phase φ(x) in the reference convention.
pub fn phase(space: &SpaceSpec, x: f64) -> Result<f64> {
    match *space {
        SpaceSpec::PaleyWiener { a } => Ok(a * x),
        SpaceSpec::Rational { a, n } => Ok(rational_phase(a, n, x)),
        SpaceSpec::Airy => {
            let (a, b, _) = e_components(space, x)?;
            let a1 = crate::specfun::airy_zero(1);
            if x >= a1 {
                let t = b.atan2(a);
                // Ai ≥ 0 here, so the angle lies in [0, π)
                return Ok(if t < 0.0 { 0.0 } else { t });
            }
            let (k, z) = nearest_airy_zero(x);
            let base = -((k - 1) as f64) * PI;
            Ok(base + branch_offset(space, z, x, a, b)?)
        }
        SpaceSpec::Bessel { nu } => {
            let (a, b, _) = e_components(space, x)?;
            let (k, z) = nearest_bessel_zero_sq(nu, x);
            if k == 1 && x <= z {
                // φ ∈ (−π, 0] here; small positive angles are rounding at z
                let t = b.atan2(a);
                return Ok(if t > FRAC_PI_2 { t - 2.0 * PI } else { t });
            }
            let base = (k - 1) as f64 * PI;
            Ok(base + branch_offset(space, z, x, a, b)?)
        }
    }
}

/// φ(x) − φ(z) where z is a zero of B and x lies within the neighbouring
/// arches.
fn branch_offset(space: &SpaceSpec, z: f64, x: f64, a: f64, b: f64) -> Result<f64> {
    let (az, _, _) = e_components(space, z)?;
    let sigma = az.signum();
    let mut d = (sigma * b).atan2(sigma * a);
    if x > z && d < -FRAC_PI_2 {
        d += 2.0 * PI;
    } else if x < z && d > FRAC_PI_2 {
        d -= 2.0 * PI;
    }
    Ok(d)
}

/// φ, φ′, φ″, φ‴ and Sφ at x.
pub fn phase_jet(space: &SpaceSpec, x: f64) -> Result<PhaseJet> {
    space.validate()?;
    if !x.is_finite() {
        return Err(Error::invalid("x", "must be finite"));
    }
    let [d1, d2, d3] = phase_derivatives(space, x)?;
    let mut j = PhaseJet::from_derivatives(phase(space, x)?, d1, d2, d3);
    if let SpaceSpec::Rational { a, .. } = *space {
        // closed form, exact up to rounding
        let p = x * x + a * a;
        j.schwarzian = -2.0 * a * a / (p * p);
    }
    Ok(j)
}
