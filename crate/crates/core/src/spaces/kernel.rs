//! Reproducing kernels K(x, y) = (B(x)A(y) − A(x)B(y))/(π(x − y)).

use std::f64::consts::PI;

use super::phase::{e_components, phase_derivatives};
use super::SpaceSpec;
use crate::error::{Error, Result};
use crate::numeric::quad::{integrate, Tolerance};

/// φ(x) − φ(y) by quadrature of φ′; meant for nearby points.
///
/// φ′ is only as accurate as the phase it is built from, about ε|φ|
/// relative, so the tolerance never asks for more than that.
pub(crate) fn phase_difference(space: &SpaceSpec, y: f64, x: f64) -> Result<f64> {
    let rel = 1e-13f64.max(1e-14 * super::phase(space, y)?.abs());
    let mut failure = None;
    let v = integrate(
        |t| match phase_derivatives(space, t) {
            Ok(d) => d[0],
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        y,
        x,
        Tolerance::rel(rel),
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

/// K(x, y) as (value, log_scale); the kernel is value·e^{log_scale}.
///
/// Points whose phases differ by less than one radian go through
/// |E(x)||E(y)| sin(φ(x) − φ(y)) with the phase difference integrated
/// directly, which avoids the cancellation of the difference quotient.
pub fn kernel_scaled(space: &SpaceSpec, x: f64, y: f64) -> Result<(f64, f64)> {
    if !(x.is_finite() && y.is_finite()) {
        return Err(Error::invalid("x", "kernel arguments must be finite"));
    }
    match *space {
        SpaceSpec::PaleyWiener { a } => {
            if x == y {
                return Ok((a / PI, 0.0));
            }
            Ok(((a * (x - y)).sin() / (PI * (x - y)), 0.0))
        }
        SpaceSpec::Rational { a, n } => {
            // per-point halves, so that scales cancel exactly in correlations
            let half = |t: f64| 0.5 * n as f64 * (t * t + a * a).ln();
            let ls = half(x) + half(y);
            if x == y {
                return Ok((n as f64 * a / (x * x + a * a) / PI, ls));
            }
            let d = (a * (x - y)).atan2(a * a + x * y);
            Ok(((n as f64 * d).sin() / (PI * (x - y)), ls))
        }
        SpaceSpec::Airy | SpaceSpec::Bessel { .. } => {
            let (ax, bx, lx) = e_components(space, x)?;
            if x == y {
                let d1 = phase_derivatives(space, x)?[0];
                return Ok((d1 * (ax * ax + bx * bx) / PI, 2.0 * lx));
            }
            let (ay, by, ly) = e_components(space, y)?;
            let value = if (super::phase(space, x)? - super::phase(space, y)?).abs() < 1.0 {
                let dphi = phase_difference(space, y, x)?;
                ax.hypot(bx) * ay.hypot(by) * dphi.sin() / (PI * (x - y))
            } else {
                (bx * ay - ax * by) / (PI * (x - y))
            };
            Ok((value, lx + ly))
        }
    }
}

/// K(x, y); may underflow to 0 or overflow for extreme arguments, where
/// [`kernel_scaled`] should be used.
pub fn kernel(space: &SpaceSpec, x: f64, y: f64) -> Result<f64> {
    let (v, ls) = kernel_scaled(space, x, y)?;
    Ok(v * ls.exp())
}

/// k_y(x) = K(x, y)/√K(y, y).
pub fn normalized_kernel(space: &SpaceSpec, y: f64, x: f64) -> Result<f64> {
    let (kxy, l1) = kernel_scaled(space, x, y)?;
    let (kyy, l2) = kernel_scaled(space, y, y)?;
    if !(kyy > 0.0 && kyy.is_finite()) {
        return Err(Error::Numeric(format!(
            "K({y}, {y}) = {kyy} is not positive"
        )));
    }
    Ok(kxy / kyy.sqrt() * (l1 - 0.5 * l2).exp())
}

/// Sφ(x) from five-point central differences of φ′, Richardson-extrapolated
/// over steps h and h/2.
pub fn schwarzian_fd(space: &SpaceSpec, x: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::invalid("h", "step must be positive"));
    }
    let s = |h: f64| -> Result<f64> {
        let f = |t: f64| phase_derivatives(space, t).map(|d| d[0]);
        let (m2, m1, z, p1, p2) = (
            f(x - 2.0 * h)?,
            f(x - h)?,
            f(x)?,
            f(x + h)?,
            f(x + 2.0 * h)?,
        );
        let d2 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
        let d3 = (-m2 + 16.0 * m1 - 30.0 * z + 16.0 * p1 - p2) / (12.0 * h * h);
        let r = d2 / z;
        Ok(d3 / z - 1.5 * r * r)
    };
    let coarse = s(h)?;
    let fine = s(0.5 * h)?;
    Ok((16.0 * fine - coarse) / 15.0)
}
