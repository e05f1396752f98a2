//! The first intensity ρ₁ of the real zeros: closed form through the phase,
//! the Rice covariance route, Edelman-Kostlan differences of log K, and
//! special-case formulas.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::quad::{integrate, integrate_with_breaks, Tolerance};
use crate::spaces::{
    asymptotic_point, basis_points, kernel_scaled, phase_derivatives, phase_jet, BasisPoints,
    PhaseJet, SpaceSpec,
};
use crate::specfun::airy_scaled;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    EdelmanKostlanFd,
    RiceCovariance,
    AirySpecial,
    RationalSpecial,
    MonteCarlo,
}

/// ρ₁ sampled on a grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntensityCurve {
    pub space: SpaceSpec,
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ci_halfwidth: Option<Vec<f64>>,
}

/// ρ₁ from a phase jet: (1/π)√(φ′²/3 + Sφ/6).
pub fn rho1_from_jet(j: &PhaseJet) -> Result<f64> {
    let r = j.radicand();
    let scale = j.d1 * j.d1 / 3.0 + j.schwarzian.abs() / 6.0;
    if r < -1e-12 * scale || !r.is_finite() {
        return Err(Error::Numeric(format!("negative intensity radicand {r}")));
    }
    Ok(r.max(0.0).sqrt() / PI)
}

/// ρ₁(x) by the closed form in φ′ and Sφ.
pub fn rho1_closed(space: &SpaceSpec, x: f64) -> Result<f64> {
    rho1_from_jet(&phase_jet(space, x)?)
}

/// Covariance of (F(x), F′(x)) for the |E|-normalized field.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RiceCovariance {
    /// Var F = φ′/π.
    pub a: f64,
    /// Cov(F, F′) = φ″/(2π).
    pub b: f64,
    /// Var F′ = (2φ′³ + φ‴)/(6π).
    pub d: f64,
}

pub fn rice_covariance(space: &SpaceSpec, x: f64) -> Result<RiceCovariance> {
    let [d1, d2, d3] = phase_derivatives(space, x)?;
    Ok(RiceCovariance {
        a: d1 / PI,
        b: d2 / (2.0 * PI),
        d: (2.0 * d1 * d1 * d1 + d3) / (6.0 * PI),
    })
}

/// ρ₁(x) = √(ad − b²)/(πa) from the covariance entries.
pub fn rho1_rice_covariance(space: &SpaceSpec, x: f64) -> Result<f64> {
    let c = rice_covariance(space, x)?;
    let q = c.d / c.a - (c.b / c.a) * (c.b / c.a);
    if q < -1e-12 * (c.d / c.a).abs() || !q.is_finite() {
        return Err(Error::Numeric(format!(
            "covariance determinant negative at {x}"
        )));
    }
    Ok(q.max(0.0).sqrt() / PI)
}

/// Step used by [`rho1_ek_fd`] when none is given.
///
/// Paley-Wiener and rational correlations are evaluated without
/// cancellation, so a small fraction of the local length scale of the phase
/// is used. For Airy and Bessel the step is first lengthened, up to a larger
/// fraction of that scale, until the correlation at x ± h differs from 1 by
/// about 1e−5; of the steps h/2, h, 2h, 4h the one whose extrapolated value
/// best agrees with the next longer step is returned.
pub fn ek_default_step(space: &SpaceSpec, x: f64) -> Result<f64> {
    let [d1, d2, d3] = phase_derivatives(space, x)?;
    let rate = d1 + (d2 / d1).abs() + (d3 / d1).abs().sqrt() + 1.0 / (1.0 + x.abs());
    let (h_min, h_max) = (0.02 / rate, 2.0 / rate);
    if matches!(
        space,
        SpaceSpec::PaleyWiener { .. } | SpaceSpec::Rational { .. }
    ) {
        return Ok(h_min);
    }
    let v = ek_stencil(space, x, h_min)?;
    let h = (1e-5 / (2.0 * v)).sqrt().clamp(h_min, h_max);
    let steps = [0.5 * h, h, 2.0 * h, 4.0 * h];
    let values: Vec<Option<f64>> = steps
        .iter()
        .map(|&s| rho1_ek_fd(space, x, s).ok())
        .collect();
    let mut best = (f64::INFINITY, h);
    for k in 0..3 {
        if let (Some(e0), Some(e1)) = (values[k], values[k + 1]) {
            let d = (e1 / e0 - 1.0).abs();
            if d < best.0 {
                best = (d, steps[k]);
            }
        }
    }
    Ok(best.1)
}

/// 1 − sin(nd)/(n sin d), summed as a series for small nd.
fn dirichlet_gap(n: f64, d: f64) -> f64 {
    if (n * d).abs() > 0.5 {
        return 1.0 - (n * d).sin() / (n * d.sin());
    }
    // n sin d − sin nd = Σ_{k≥1} (−1)^k (n − n^{2k+1}) d^{2k+1}/(2k+1)!
    let (mut sum, mut dk, mut nk, mut fact) = (0.0, d, n, 1.0);
    for k in 1..30 {
        let kf = k as f64;
        dk *= d * d;
        nk *= n * n;
        fact *= 2.0 * kf * (2.0 * kf + 1.0);
        let t = (n - nk) * dk / fact;
        let t = if k % 2 == 0 { t } else { -t };
        sum += t;
        if t.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum / (n * d.sin())
}

/// 1 − K(x, y)/√(K(x, x)K(y, y)). The Paley-Wiener and rational
/// correlations are closed-form and evaluated without cancellation.
fn correlation_gap(space: &SpaceSpec, x: f64, y: f64) -> Result<f64> {
    match *space {
        SpaceSpec::PaleyWiener { a } => {
            // limit n → ∞ of the rational form: 1 − sin(u)/u
            let u = a * (x - y);
            if u.abs() > 0.5 {
                return Ok(1.0 - u.sin() / u);
            }
            let (mut sum, mut uk, mut fact) = (0.0, 1.0, 1.0);
            for k in 1..30 {
                let kf = k as f64;
                uk *= u * u;
                fact *= 2.0 * kf * (2.0 * kf + 1.0);
                let t = if k % 2 == 0 { -uk / fact } else { uk / fact };
                sum += t;
                if t.abs() <= 1e-17 * sum.abs() {
                    break;
                }
            }
            Ok(sum)
        }
        SpaceSpec::Rational { a, n } => {
            Ok(dirichlet_gap(n as f64, (a * (x - y)).atan2(a * a + x * y)))
        }
        SpaceSpec::Airy | SpaceSpec::Bessel { .. } => {
            let (kxy, lxy) = kernel_scaled(space, x, y)?;
            let (kxx, lxx) = kernel_scaled(space, x, x)?;
            let (kyy, lyy) = kernel_scaled(space, y, y)?;
            Ok(1.0 - kxy / (kxx.sqrt() * kyy.sqrt()) * (lxy - 0.5 * (lxx + lyy)).exp())
        }
    }
}

/// −log of the normalized kernel correlation at x ± h over 2h², which equals
/// the four-point cross difference of log K.
fn ek_stencil(space: &SpaceSpec, x: f64, h: f64) -> Result<f64> {
    let gap = correlation_gap(space, x + h, x - h)?;
    let v = -(-gap).ln_1p() / (2.0 * h * h);
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::Numeric(format!(
            "log-kernel stencil {v} at x = {x}, h = {h}; step too large"
        )));
    }
    Ok(v)
}

/// ρ₁(x) from the mixed second derivative of log K on the diagonal,
/// Richardson-extrapolated over steps h and h/2.
pub fn rho1_ek_fd(space: &SpaceSpec, x: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::invalid("h", "step must be positive"));
    }
    let coarse = ek_stencil(space, x, h)?;
    let fine = ek_stencil(space, x, 0.5 * h)?;
    let v = (4.0 * fine - coarse) / 3.0;
    if !(v > 0.0) {
        return Err(Error::Numeric(format!(
            "extrapolated stencil {v} at x = {x}"
        )));
    }
    Ok(v.sqrt() / PI)
}

/// The explicit Airy-space expression in Ai and Ai′.
pub fn rho1_airy_special(x: f64) -> Result<f64> {
    let (p, _) = airy_scaled(x);
    let (b, a) = (p.ai, p.ai_prime);
    let n = a * a - x * b * b;
    if !(n.abs() > 0.0) {
        return Err(Error::Numeric(format!("vanishing denominator at x = {x}")));
    }
    let r = -2.0 / 3.0 * a * b / n - b.powi(4) / (4.0 * n * n) - x / 3.0;
    if r < -1e-12 * (x.abs() + 1.0) {
        return Err(Error::Numeric(format!("negative radicand {r} at x = {x}")));
    }
    Ok(r.max(0.0).sqrt() / PI)
}

/// (1/π)√((n²−1)/3)·a/(x²+a²) for the rational family.
pub fn rho1_rational_special(a: f64, n: u32, x: f64) -> f64 {
    let nf = n as f64;
    ((nf * nf - 1.0) / 3.0).sqrt() / PI * a / (x * x + a * a)
}

/// ρ₁ on a grid by the chosen analytic method.
pub fn intensity_curve(space: &SpaceSpec, xs: &[f64], method: Method) -> Result<IntensityCurve> {
    space.validate()?;
    if xs.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::invalid("grid", "points must be strictly increasing"));
    }
    let eval = |x: f64| -> Result<f64> {
        match method {
            Method::ClosedForm => rho1_closed(space, x),
            Method::RiceCovariance => rho1_rice_covariance(space, x),
            Method::EdelmanKostlanFd => rho1_ek_fd(space, x, ek_default_step(space, x)?),
            Method::AirySpecial => match space {
                SpaceSpec::Airy => rho1_airy_special(x),
                _ => Err(Error::invalid(
                    "method",
                    "airy_special needs the Airy space",
                )),
            },
            Method::RationalSpecial => match *space {
                SpaceSpec::Rational { a, n } => Ok(rho1_rational_special(a, n, x)),
                _ => Err(Error::invalid(
                    "method",
                    "rational_special needs the rational space",
                )),
            },
            Method::MonteCarlo => Err(Error::invalid(
                "method",
                "Monte Carlo curves come from stats::empirical_intensity",
            )),
        }
    };
    let values = xs
        .par_iter()
        .map(|&x| eval(x))
        .collect::<Result<Vec<_>>>()?;
    Ok(IntensityCurve {
        space: *space,
        xs: xs.to_vec(),
        values,
        method,
        ci_halfwidth: None,
    })
}

/// Truncated left side and exact right side of
/// Σ_{n≠k} φ′(ω_k)/((ω_k − ωₙ)²φ′(ωₙ)) = φ′(ω_k)²/3 + Sφ(ω_k)/6.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaselSum {
    pub partial_sum: f64,
    pub target: f64,
    /// Estimate of the omitted terms from the asymptotic point locations;
    /// zero when the basis is exhaustive.
    pub tail_estimate: f64,
    pub terms: usize,
}

/// Omitted terms next to the stored points that are summed one by one before
/// the remainder is integrated.
const NEAR_TAIL: usize = 256;

/// Evaluates the series at the basis point with index `k`, using stored points
/// within `n_terms` positions of it on each side.
pub fn basel_series(
    space: &SpaceSpec,
    basis: &BasisPoints,
    k: i64,
    n_terms: usize,
) -> Result<BaselSum> {
    let pos = k - basis.index_offset;
    if pos < 0 || pos as usize >= basis.points.len() {
        return Err(Error::invalid("k", format!("index {k} not in the basis")));
    }
    let pos = pos as usize;
    let wk = basis.points[pos];
    let jk = phase_jet(space, wk)?;
    let lo = pos.saturating_sub(n_terms);
    let hi = (pos + n_terms).min(basis.points.len() - 1);
    let mut partial = 0.0;
    let mut terms = 0;
    for i in lo..=hi {
        if i == pos {
            continue;
        }
        let w = basis.points[i];
        let d1 = phase_derivatives(space, w)?[0];
        partial += jk.d1 / ((wk - w) * (wk - w) * d1);
        terms += 1;
    }
    let mut tail = 0.0;
    if !basis.exhaustive {
        let term = |n: f64| -> f64 {
            match asymptotic_point(space, basis.alpha, n) {
                Some((w, d1)) if w != wk => jk.d1 / ((wk - w) * (wk - w) * d1),
                _ => 0.0,
            }
        };
        let n_lo = basis.index(lo) as f64;
        let n_hi = basis.index(hi) as f64;
        // midpoint-rule tails Σ_{n>N} f(n) ≈ ∫_{N+1/2}^∞ f, with n − N − 1/2 =
        // w⁻³ − 1 taming the algebraic decay of the terms
        let side = |from: f64, dir: f64| -> Result<f64> {
            integrate(
                |w: f64| {
                    let w3 = w * w * w;
                    let n = from + dir * (1.0 / w3 - 1.0);
                    term(n) * 3.0 / (w3 * w)
                },
                0.0,
                1.0,
                Tolerance {
                    abs: 1e-15,
                    rel: 1e-10,
                    max_panels: 5000,
                },
            )
        };
        // index range of the α = 0 bases: Airy n ≤ 0, Bessel n ≥ 0
        let (n_min, n_max) = match space {
            SpaceSpec::Airy => (f64::NEG_INFINITY, 0.0),
            SpaceSpec::Bessel { .. } => (0.0, f64::INFINITY),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        };
        if n_max.is_finite() {
            let mut n = n_hi + 1.0;
            while n <= n_max {
                tail += term(n);
                n += 1.0;
            }
        } else {
            tail += (1..=NEAR_TAIL).map(|m| term(n_hi + m as f64)).sum::<f64>();
            tail += side(n_hi + NEAR_TAIL as f64 + 0.5, 1.0)?;
        }
        if n_min.is_finite() {
            let mut n = n_lo - 1.0;
            while n >= n_min {
                tail += term(n);
                n -= 1.0;
            }
        } else {
            tail += (1..=NEAR_TAIL).map(|m| term(n_lo - m as f64)).sum::<f64>();
            tail += side(n_lo - NEAR_TAIL as f64 - 0.5, -1.0)?;
        }
    }
    Ok(BaselSum {
        partial_sum: partial,
        target: jk.d1 * jk.d1 / 3.0 + jk.schwarzian / 6.0,
        tail_estimate: tail,
        terms,
    })
}

/// ρ₁(ω_k) from the dual-ℓ² sum over the other basis points, including the
/// asymptotic tail estimate.
pub fn rho1_bergman(space: &SpaceSpec, basis: &BasisPoints, k: i64) -> Result<f64> {
    let s = basel_series(space, basis, k, usize::MAX / 4)?;
    Ok((s.partial_sum + s.tail_estimate).sqrt() / PI)
}

/// Breakpoints that resolve the oscillation of ρ₁ on [lo, hi].
fn breakpoints(space: &SpaceSpec, lo: f64, hi: f64) -> Vec<f64> {
    let mut b = vec![lo];
    match space {
        SpaceSpec::Airy | SpaceSpec::Bessel { .. } => {
            let inner_lo = lo.max(-1e6);
            let inner_hi = hi.min(1e8);
            if inner_lo < inner_hi {
                if let Ok(bp) = basis_points(space, 0.0, inner_lo, inner_hi) {
                    if bp.points.len() < 200_000 {
                        b.extend(bp.points.iter().filter(|&&w| w > lo && w < hi));
                    }
                }
            }
        }
        SpaceSpec::PaleyWiener { a } => {
            let n = (((hi - lo) * a / PI).ceil() as usize).min(100_000);
            for i in 1..n {
                b.push(lo + (hi - lo) * i as f64 / n as f64);
            }
        }
        SpaceSpec::Rational { a, .. } => {
            for x in [-*a, 0.0, *a] {
                if x > lo && x < hi {
                    b.push(x);
                }
            }
        }
    }
    // geometric refinement away from the origin for wide windows
    let mut extra = Vec::new();
    for w in b
        .windows(2)
        .chain(std::iter::once(&[*b.last().unwrap(), hi][..]))
    {
        let (l, r) = (w[0], w[1]);
        if l > 0.0 && r / l > 4.0 {
            let mut x = l * 2.0;
            while x < r {
                extra.push(x);
                x *= 2.0;
            }
        } else if r < 0.0 && l / r > 4.0 {
            let mut x = r * 2.0;
            while x > l {
                extra.push(x);
                x *= 2.0;
            }
        }
    }
    b.extend(extra);
    b.push(hi);
    b.sort_by(f64::total_cmp);
    b.dedup();
    b
}

fn integrate_rho1(space: &SpaceSpec, lo: f64, hi: f64, abs_tol: f64) -> Result<f64> {
    let mut failure = None;
    let r = integrate_with_breaks(
        |x| match rho1_closed(space, x) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        &breakpoints(space, lo, hi),
        Tolerance {
            abs: abs_tol,
            rel: 1e-12,
            max_panels: 400_000,
        },
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(r.value),
    }
}

/// Ratio of ∫ρ₁ over consecutive decades at the far end of a half-line; a
/// ratio above 10^{−0.05} means the tail decays no faster than |x|^{−1.05}
/// and the integral is treated as divergent.
fn tail_diverges(space: &SpaceSpec, anchor: f64, dir: f64) -> Result<bool> {
    let scale = match *space {
        SpaceSpec::Rational { a, .. } => a,
        _ => 1.0,
    };
    let x0 = 1e4 * (1.0 + anchor.abs()) * scale;
    let seg = |l: f64, r: f64| -> Result<f64> {
        let (l, r) = if dir > 0.0 { (l, r) } else { (-r, -l) };
        integrate_rho1(space, l, r, 0.0)
    };
    let i1 = seg(x0, 10.0 * x0)?;
    let i2 = seg(10.0 * x0, 100.0 * x0)?;
    Ok(i2 >= 10f64.powf(-0.05) * i1)
}

/// Expected number of zeros in [lo, hi]; infinite endpoints are allowed and a
/// divergent integral is reported as +∞.
pub fn expected_count(space: &SpaceSpec, lo: f64, hi: f64) -> Result<f64> {
    space.validate()?;
    if !(lo < hi) || lo.is_nan() || hi.is_nan() {
        return Err(Error::invalid(
            "interval",
            format!("empty interval [{lo}, {hi}]"),
        ));
    }
    if lo.is_finite() && hi.is_finite() {
        return integrate_rho1(space, lo, hi, 1e-9);
    }
    if hi == f64::INFINITY && tail_diverges(space, if lo.is_finite() { lo } else { 0.0 }, 1.0)? {
        return Ok(f64::INFINITY);
    }
    if lo == f64::NEG_INFINITY && tail_diverges(space, if hi.is_finite() { hi } else { 0.0 }, -1.0)?
    {
        return Ok(f64::INFINITY);
    }
    // x = c + s·tan θ maps a bounded θ-interval onto the half-line or line
    let (c, s) = match *space {
        SpaceSpec::Rational { a, .. } => (0.0, a),
        _ => (
            if lo.is_finite() {
                lo
            } else if hi.is_finite() {
                hi
            } else {
                0.0
            },
            1.0,
        ),
    };
    let t_lo = if lo.is_finite() {
        ((lo - c) / s).atan()
    } else {
        -std::f64::consts::FRAC_PI_2
    };
    let t_hi = if hi.is_finite() {
        ((hi - c) / s).atan()
    } else {
        std::f64::consts::FRAC_PI_2
    };
    let mut failure = None;
    let v = integrate(
        |t| {
            let ct = t.cos();
            if ct == 0.0 {
                return 0.0;
            }
            let x = c + s * t.tan();
            match rho1_closed(space, x) {
                Ok(r) => r * s / (ct * ct),
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        t_lo,
        t_hi,
        Tolerance {
            abs: 1e-11,
            rel: 1e-12,
            max_panels: 200_000,
        },
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

/// (x²·Sφ(x), α(2−α)/2): a phase with φ′ ≍ |x|^{−α} has Sφ ~ α(2−α)/(2x²).
pub fn schwarzian_asymptotic_check(
    alpha_exp: f64,
    space: &SpaceSpec,
    x: f64,
) -> Result<(f64, f64)> {
    let j = phase_jet(space, x)?;
    Ok((x * x * j.schwarzian, alpha_exp * (2.0 - alpha_exp) / 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paley_wiener_constant() {
        let sp = SpaceSpec::PaleyWiener { a: PI };
        let v = rho1_closed(&sp, 12.3).unwrap();
        assert!((v - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        let c = rice_covariance(&sp, 0.0).unwrap();
        assert!((c.a - 1.0).abs() < 1e-15 && c.b == 0.0);
        assert!((c.d - PI * PI / 3.0).abs() < 1e-14);
        let ek = rho1_ek_fd(&sp, 0.4, 1e-3).unwrap();
        assert!((ek - 1.0 / 3f64.sqrt()).abs() < 1e-7);
    }

    #[test]
    fn rational_forms_agree() {
        let sp = SpaceSpec::Rational { a: 1.0, n: 2 };
        let v = rho1_closed(&sp, 0.0).unwrap();
        assert!((v - 1.0 / PI).abs() < 1e-15);
        let w = rho1_rational_special(1.0, 2, 0.0);
        assert!((v - w).abs() < 1e-15);
    }

    #[test]
    fn rational_counts() {
        let sp = SpaceSpec::Rational { a: 2.0, n: 7 };
        let c = expected_count(&sp, f64::NEG_INFINITY, f64::INFINITY).unwrap();
        assert!((c - 4.0).abs() < 1e-8, "{c}");
    }

    #[test]
    fn divergent_half_lines() {
        assert_eq!(
            expected_count(&SpaceSpec::Airy, 0.0, f64::INFINITY).unwrap(),
            f64::INFINITY
        );
        let pw = SpaceSpec::PaleyWiener { a: 1.0 };
        assert_eq!(
            expected_count(&pw, 0.0, f64::INFINITY).unwrap(),
            f64::INFINITY
        );
    }

    #[test]
    fn rejects_bad_step() {
        assert!(rho1_ek_fd(&SpaceSpec::Airy, 0.0, 0.0).is_err());
    }
}
