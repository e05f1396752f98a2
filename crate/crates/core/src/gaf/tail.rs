//! Aggregate contribution of the basis points outside the explicit window.
//!
//! For |x − c| < R ≤ |ωₙ − c| every remote summand expands as
//! 1/(x − ωₙ) = −(1/R) Σⱼ ((x − c)/R)ʲ ρₙ^{j+1} with ρₙ = R/(ωₙ − c), so the
//! remote part is a polynomial in (x − c)/R with jointly Gaussian
//! coefficients Yⱼ = Σ cₙ ρₙ^{j+1}. Their covariance is the moment matrix
//! Cov(Yⱼ, Yₖ) = Σ wₙ² ρₙ^{j+k+2}, accumulated from exactly located points
//! near the window and from the smooth asymptotic index model further out.

use serde::Serialize;

use crate::error::Result;
use crate::numeric::quad::{integrate, Tolerance};
use crate::spaces::{asymptotic_point, SpaceSpec};

#[derive(Clone, Debug, Serialize)]
pub struct TailModel {
    pub center: f64,
    pub radius: f64,
    /// Lower-triangular factor of the coefficient covariance, row-major.
    pub factor: Vec<f64>,
    pub order: usize,
}

impl TailModel {
    /// Correlated coefficients Y = L·g.
    pub fn correlate(&self, normals: &[f64]) -> Vec<f64> {
        let j = self.order;
        (0..j)
            .map(|r| (0..=r).map(|k| self.factor[r * j + k] * normals[k]).sum())
            .collect()
    }

    pub fn value(&self, coeffs: &[f64], x: f64) -> f64 {
        let u = (x - self.center) / self.radius;
        let mut acc = 0.0;
        for &y in coeffs.iter().rev() {
            acc = acc * u + y;
        }
        -acc / self.radius
    }

    /// Variance of `value` at x.
    pub fn variance(&self, x: f64) -> f64 {
        let j = self.order;
        let u = (x - self.center) / self.radius;
        let mut pw = vec![1.0; j];
        for k in 1..j {
            pw[k] = pw[k - 1] * u;
        }
        // ‖Lᵀv‖²
        let mut s = 0.0;
        for k in 0..j {
            let t: f64 = (k..j).map(|r| self.factor[r * j + k] * pw[r]).sum();
            s += t * t;
        }
        s / (self.radius * self.radius)
    }
}

/// Which index ranges beyond the exactly located points still hold basis
/// points, as (from, to) in continuous index with infinite ends allowed.
pub(crate) fn remainder_ranges(space: &SpaceSpec, first: i64, last: i64) -> Vec<(f64, f64)> {
    let lo = first as f64 - 0.5;
    let hi = last as f64 + 0.5;
    let mut out = Vec::new();
    match space {
        SpaceSpec::PaleyWiener { .. } => {
            out.push((f64::NEG_INFINITY, lo));
            out.push((hi, f64::INFINITY));
        }
        SpaceSpec::Airy => {
            out.push((f64::NEG_INFINITY, lo));
            if last < 0 {
                out.push((hi, 0.5));
            }
        }
        SpaceSpec::Bessel { .. } => {
            if first > 0 {
                out.push((-0.5, lo));
            }
            out.push((hi, f64::INFINITY));
        }
        SpaceSpec::Rational { .. } => {}
    }
    out
}

/// Σ w² ρ^p over a continuous index range of the smooth model, p = 0..=max_p.
pub(crate) fn model_moments(
    space: &SpaceSpec,
    alpha: f64,
    center: f64,
    radius: f64,
    range: (f64, f64),
    scale: f64,
    max_p: usize,
) -> Result<Vec<f64>> {
    let term = |n: f64, p: usize| -> f64 {
        match asymptotic_point(space, alpha, n) {
            Some((w, d1)) => (radius / (w - center)).powi(p as i32) / d1,
            None => 0.0,
        }
    };
    let tol = Tolerance {
        abs: 1e-18,
        rel: 1e-10,
        max_panels: 4000,
    };
    let mut out = vec![0.0; max_p + 1];
    let (a, b) = range;
    for (p, slot) in out.iter_mut().enumerate().skip(2) {
        *slot = if a.is_finite() && b.is_finite() {
            integrate(|n| term(n, p), a, b, tol)?
        } else {
            let (n0, dir) = if b.is_infinite() { (a, 1.0) } else { (b, -1.0) };
            integrate(
                |v: f64| {
                    let n = n0 + dir * scale * (v.powi(-3) - 1.0);
                    term(n, p) * 3.0 * scale * v.powi(-4)
                },
                0.0,
                1.0,
                tol,
            )?
        };
    }
    Ok(out)
}

/// Cholesky factor of a positive semi-definite matrix; pivots below a
/// relative floor are treated as exact zeros.
pub(crate) fn clipped_cholesky(m: &[f64], j: usize) -> Vec<f64> {
    let scale = (0..j).map(|k| m[k * j + k]).fold(0.0, f64::max);
    let floor = 1e-13 * scale;
    let mut l = vec![0.0; j * j];
    for c in 0..j {
        let d = m[c * j + c] - (0..c).map(|k| l[c * j + k] * l[c * j + k]).sum::<f64>();
        if d <= floor {
            continue;
        }
        let piv = d.sqrt();
        l[c * j + c] = piv;
        for r in c + 1..j {
            let s = m[r * j + c] - (0..c).map(|k| l[r * j + k] * l[c * j + k]).sum::<f64>();
            l[r * j + c] = s / piv;
        }
    }
    l
}
