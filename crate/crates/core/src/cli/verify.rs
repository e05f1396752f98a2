use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::JobConfig;
use crate::error::Result;
use crate::intensity::{
    basel_series, ek_default_step, expected_count, rho1_airy_special, rho1_closed, rho1_ek_fd,
    rho1_rational_special, rho1_rice_covariance,
};
use crate::numeric::quad::{integrate, Tolerance};
use crate::numeric::rng::uniform;
use crate::spaces::{basis_points, phase, phase_jet, SpaceSpec};
use crate::specfun::{airy, airy_prime_zero, airy_zero, bessel_j, bessel_zero};

const POINT_STREAM: u64 = 0x7E51;
const N_POINTS: usize = 200;

/// One verified identity or bound with the measured value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    /// Human-readable acceptance condition on `measured`.
    pub bound: String,
    pub passed: bool,
}

fn at_most(name: &str, measured: f64, tol: f64) -> Check {
    Check {
        name: name.into(),
        measured,
        bound: format!("<= {tol:e}"),
        passed: measured <= tol,
    }
}

fn within(name: &str, measured: f64, lo: f64, hi: f64) -> Check {
    Check {
        name: name.into(),
        measured,
        bound: format!("in [{lo}, {hi}]"),
        passed: (lo..=hi).contains(&measured),
    }
}

fn max_of(it: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    it.into_iter().try_fold(0.0, |m, v| Ok(f64::max(m, v?)))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Checks for the configured space: the family-independent identities on
/// random points of the configured interval, then family-specific ones.
pub fn verification_checks(config: &JobConfig) -> Result<Vec<Check>> {
    let space = config.space;
    let (lo, hi) = config.interval_or_default();
    let xs: Vec<f64> = (0..N_POINTS)
        .map(|i| lo + (hi - lo) * uniform(config.seed, POINT_STREAM, i as i64))
        .collect();
    let mut checks = Vec::new();

    let three_way = max_of(xs.iter().map(|&x| {
        let c = rho1_closed(&space, x)?;
        let r = rho1_rice_covariance(&space, x)?;
        let e = rho1_ek_fd(&space, x, ek_default_step(&space, x)?)?;
        Ok(rel(r, c).max(rel(e, c)))
    }))?;
    checks.push(at_most("three_way_agreement", three_way, 1e-5));

    let fd = max_of(xs.iter().take(40).map(|&x| {
        let j = phase_jet(&space, x)?;
        let h = 1e-3 / j.d1;
        let d = (8.0 * (phase(&space, x + h)? - phase(&space, x - h)?)
            - (phase(&space, x + 2.0 * h)? - phase(&space, x - 2.0 * h)?))
            / (12.0 * h);
        Ok(rel(d, j.d1))
    }))?;
    checks.push(at_most("phase_derivative_consistency", fd, 1e-6));

    let radicand = xs.iter().try_fold(f64::INFINITY, |m, &x| -> Result<f64> {
        let j = phase_jet(&space, x)?;
        Ok(m.min(j.radicand() / (j.d1 * j.d1 / 3.0)))
    })?;
    checks.push(Check {
        name: "radicand_nonnegative".into(),
        measured: radicand,
        bound: ">= 0".into(),
        passed: radicand >= 0.0,
    });

    match space {
        SpaceSpec::PaleyWiener { a } => paley_wiener(&space, a, &xs, &mut checks)?,
        SpaceSpec::Airy => airy_checks(&space, &xs, &mut checks)?,
        SpaceSpec::Bessel { nu } => bessel_checks(&space, nu, &mut checks)?,
        SpaceSpec::Rational { a, n } => rational(&space, a, n, &xs, &mut checks)?,
    }
    Ok(checks)
}

fn paley_wiener(space: &SpaceSpec, a: f64, xs: &[f64], checks: &mut Vec<Check>) -> Result<()> {
    let target = a / (PI * 3f64.sqrt());
    let dev = max_of(xs.iter().map(|&x| Ok(rel(rho1_closed(space, x)?, target))))?;
    checks.push(at_most("rho1_equals_a_over_pi_sqrt3", dev, 1e-14));
    let count = expected_count(space, 0.0, 10.0)?;
    checks.push(at_most(
        "expected_count_linear",
        rel(count, 10.0 * target),
        1e-10,
    ));
    // error in the a = π normalization, where the sum tends to π²/3
    let n = 1000;
    let spacing = PI / a;
    let basis = basis_points(
        space,
        0.0,
        -(n as f64 + 2.0) * spacing,
        (n as f64 + 2.0) * spacing,
    )?;
    let k = basis.index(basis.points.len() / 2);
    let s = basel_series(space, &basis, k, n)?;
    let err = (s.target - s.partial_sum).abs() * spacing * spacing;
    checks.push(at_most("basel_error_times_n", err * n as f64, 2.5));
    Ok(())
}

fn airy_checks(space: &SpaceSpec, xs: &[f64], checks: &mut Vec<Check>) -> Result<()> {
    let special = max_of(
        xs.iter()
            .filter(|x| (-20.0..=5.0).contains(*x))
            .map(|&x| Ok(rel(rho1_airy_special(x)?, rho1_closed(space, x)?))),
    )?;
    checks.push(at_most("airy_special_formula", special, 1e-8));
    checks.push(within(
        "airy_asymptotic_minus_100",
        rho1_closed(space, -100.0)? * PI / (100f64 / 3.0).sqrt(),
        0.95,
        1.05,
    ));
    checks.push(within(
        "airy_asymptotic_plus_100",
        rho1_closed(space, 100.0)? * 400.0 * PI,
        0.85,
        1.15,
    ));
    let residual = max_of((1..=20).map(|k| {
        let p = airy(airy_zero(k));
        Ok((p.ai / p.ai_prime).abs())
    }))?;
    checks.push(at_most("airy_zero_residual", residual, 1e-12));

    // 2000 terms on each side of the 2001st zero
    let basis = basis_points(space, 0.0, -720.0, 0.0)?;
    let s = basel_series(space, &basis, basis.index(basis.points.len() - 2001), 2000)?;
    checks.push(at_most(
        "basel_truncated",
        rel(s.partial_sum, s.target),
        1e-3,
    ));
    let s = basel_series(space, &basis, basis.index(basis.points.len() - 1), 2000)?;
    checks.push(at_most(
        "basel_with_tail",
        rel(s.partial_sum + s.tail_estimate, s.target),
        1e-3,
    ));

    let n = 1e4;
    let growth = expected_count(space, 1.0, n)? / (n.ln() / (4.0 * PI));
    checks.push(within("log_growth_positive_axis", growth, 0.9, 1.1));
    let total = expected_count(space, 0.0, f64::INFINITY)?;
    checks.push(Check {
        name: "positive_axis_divergent".into(),
        measured: total,
        bound: "= inf".into(),
        passed: total == f64::INFINITY,
    });

    // φ is π times the normalized phase; the identities read
    // |φ(b_k) − φ(a_k)| = π/2, φ′(a_k) = 1 and φ′(b_k) = |b_k|
    let (mut gap, mut slope) = (0.0f64, 0.0f64);
    for k in 1..=50 {
        let (ak, bk) = (airy_zero(k), airy_prime_zero(k));
        gap = gap.max(((phase(space, bk)? - phase(space, ak)?).abs() / PI - 0.5).abs());
        slope = slope.max((phase_jet(space, bk)?.d1 - bk.abs()).abs());
        slope = slope.max((phase_jet(space, ak)?.d1 - 1.0).abs());
    }
    checks.push(at_most("non_doubling_phase_gap", gap, 1e-8));
    checks.push(at_most("non_doubling_phase_slope", slope, 1e-8));
    Ok(())
}

fn bessel_checks(space: &SpaceSpec, nu: f64, checks: &mut Vec<Check>) -> Result<()> {
    let zeros: Vec<f64> = (1..=21)
        .map(|k| bessel_zero(nu, k))
        .collect::<Result<_>>()?;
    let residual = max_of(zeros.iter().map(|&j| {
        let (v, d) = bessel_j(nu, j)?;
        Ok((v / d).abs() / j)
    }))?;
    checks.push(at_most("bessel_zero_residual", residual, 1e-12));
    let slope = max_of(zeros.iter().take(20).map(|&j| {
        let z = j * j;
        Ok((phase_jet(space, z)?.d1 - 1.0 / (2.0 * z)).abs())
    }))?;
    checks.push(at_most("phi_prime_at_squared_zeros", slope, 1e-10));
    let arches = max_of(zeros.windows(2).map(|w| {
        let v = integrate(
            |x| phase_jet(space, x).map(|j| j.d1).unwrap_or(f64::NAN),
            w[0] * w[0],
            w[1] * w[1],
            Tolerance::rel(1e-12),
        )?;
        Ok((v - PI).abs())
    }))?;
    checks.push(at_most("arch_integrals", arches, 1e-8));
    checks.push(within(
        "asymptotic_minus_1e4",
        rho1_closed(space, -1e4)? * 4.0 * PI * 1e4,
        0.9,
        1.1,
    ));

    let k = (phase(space, 1e4)? / PI).floor() as usize + 1;
    let (l, r) = (bessel_zero(nu, k)?.powi(2), bessel_zero(nu, k + 1)?.powi(2));
    let avg = integrate(
        |x| rho1_closed(space, x).unwrap_or(f64::NAN) * 2.0 * PI * (3.0 * x).sqrt(),
        l,
        r,
        Tolerance::rel(1e-10),
    )? / (r - l);
    checks.push(within("arch_average_near_1e4", avg, 0.8, 1.2));

    let basis = basis_points(space, 0.0, -1.0, 2e6)?;
    let s = basel_series(space, &basis, basis.index(0), 2000)?;
    checks.push(at_most(
        "basel_with_tail",
        rel(s.partial_sum + s.tail_estimate, s.target),
        1e-3,
    ));
    Ok(())
}

fn rational(space: &SpaceSpec, a: f64, n: u32, xs: &[f64], checks: &mut Vec<Check>) -> Result<()> {
    let count = expected_count(space, f64::NEG_INFINITY, f64::INFINITY)?;
    let target = (((n * n - 1) as f64) / 3.0).sqrt();
    checks.push(at_most("expected_real_zeros", (count - target).abs(), 1e-8));
    let special = max_of(
        xs.iter()
            .map(|&x| Ok(rel(rho1_rational_special(a, n, x), rho1_closed(space, x)?))),
    )?;
    checks.push(at_most("rational_special_formula", special, 1e-12));
    let basis = basis_points(space, PI / 2.0, f64::NEG_INFINITY, f64::INFINITY)?;
    let basel = max_of((0..basis.points.len()).map(|i| {
        let s = basel_series(space, &basis, basis.index(i), n as usize)?;
        Ok(rel(s.partial_sum, s.target))
    }))?;
    checks.push(at_most("basel_exhaustive", basel, 1e-10));
    Ok(())
}
