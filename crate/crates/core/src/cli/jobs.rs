use std::f64::consts::PI;

use serde_json::json;

use super::output::{num, Report, Table};
use super::verify::verification_checks;
use super::{Command, JobConfig, MethodChoice};
use crate::error::Result;
use crate::gaf::{real_zeros, sample};
use crate::intensity::{intensity_curve, rho1_closed, IntensityCurve, Method};
use crate::rigidity::{build_isophase, conserved, integrate_orbit, turning_points, u_integral};
use crate::spaces::phase_jet;
use crate::stats::{compare_curves, empirical_intensity, CountHistogram};

pub fn dispatch(config: &JobConfig) -> Result<Report> {
    log::info!("running {:?} on {}", config.command, config.space);
    match config.command {
        Command::Intensity => intensity(config),
        Command::Sample => sample_job(config),
        Command::Zeros => zeros(config),
        Command::Empirical => empirical(config),
        Command::Verify => verify(config),
        Command::Rigidity => rigidity(config),
        Command::Figures => figures(config),
    }
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + step * i as f64 })
        .collect()
}

fn histogram(config: &JobConfig) -> Result<CountHistogram> {
    empirical_intensity(
        &config.space,
        config.alpha_or_default(),
        config.interval_or_default(),
        config.bins,
        config.samples,
        config.seed,
    )
}

fn curve_table(name: &str, c: &IntensityCurve) -> Table {
    let mut t = match c.ci_halfwidth {
        Some(_) => Table::new(name, &["x", "value", "ci_halfwidth"]),
        None => Table::new(name, &["x", "value"]),
    };
    for (i, (&x, &v)) in c.xs.iter().zip(&c.values).enumerate() {
        let mut row = vec![num(x), num(v)];
        if let Some(ci) = &c.ci_halfwidth {
            row.push(num(ci[i]));
        }
        t.push(row);
    }
    t
}

fn intensity(config: &JobConfig) -> Result<Report> {
    let (lo, hi) = config.interval_or_default();
    let xs = linspace(lo, hi, config.grid);
    let mut curves = Vec::new();
    let mut tables = Vec::new();
    for &m in &config.methods {
        let (name, curve) = match m {
            MethodChoice::Closed => (
                "closed",
                intensity_curve(&config.space, &xs, Method::ClosedForm)?,
            ),
            MethodChoice::Ek => (
                "ek",
                intensity_curve(&config.space, &xs, Method::EdelmanKostlanFd)?,
            ),
            MethodChoice::Rice => (
                "rice",
                intensity_curve(&config.space, &xs, Method::RiceCovariance)?,
            ),
            MethodChoice::Mc => {
                let h = histogram(config)?;
                let curve = IntensityCurve {
                    space: config.space,
                    xs: h.bins.iter().map(|b| 0.5 * (b.lo + b.hi)).collect(),
                    values: h.bins.iter().map(|b| b.mean).collect(),
                    method: Method::MonteCarlo,
                    ci_halfwidth: Some(h.bins.iter().map(|b| 1.96 * b.std_error).collect()),
                };
                ("mc", curve)
            }
        };
        tables.push(curve_table(name, &curve));
        curves.push(curve);
    }
    Ok(Report::new(&json!({ "curves": curves }), tables))
}

fn sample_job(config: &JobConfig) -> Result<Report> {
    let s = sample(
        &config.space,
        config.alpha_or_default(),
        config.interval_or_default(),
        config.seed,
    )?;
    let mut t = Table::new("coefficients", &["n", "omega", "weight", "coeff"]);
    let basis = s.basis();
    for (i, (&w, &a)) in basis.points.iter().zip(&s.coeffs).enumerate() {
        t.push(vec![
            basis.index(i).to_string(),
            num(w),
            num(s.model().weights[i]),
            num(a),
        ]);
    }
    let mut tail = Table::new("tail", &["j", "coeff"]);
    for (j, &c) in s.tail_coeffs.iter().enumerate() {
        tail.push(vec![j.to_string(), num(c)]);
    }
    let mut tables = vec![t];
    if !s.tail_coeffs.is_empty() {
        tables.push(tail);
    }
    Ok(Report::new(&s, tables))
}

fn zeros(config: &JobConfig) -> Result<Report> {
    let interval = config.interval_or_default();
    let s = sample(
        &config.space,
        config.alpha_or_default(),
        interval,
        config.seed,
    )?;
    let z = real_zeros(&s, interval)?;
    let mut t = Table::new("zeros", &["x", "kind"]);
    for &x in &z.zeros {
        t.push(vec![num(x), "zero".into()]);
    }
    for &x in &z.unresolved {
        t.push(vec![num(x), "unresolved".into()]);
    }
    Ok(Report::new(&z, vec![t]))
}

fn empirical(config: &JobConfig) -> Result<Report> {
    let h = histogram(config)?;
    let (lo, hi) = config.interval_or_default();
    let xs = linspace(lo, hi, config.grid.max(20 * config.bins + 1));
    let analytic = intensity_curve(&config.space, &xs, Method::ClosedForm)?;
    let cmp = compare_curves(&h, &analytic)?;
    let mut t = Table::new("bins", &["lo", "hi", "mean", "std_error", "analytic", "z"]);
    for (b, c) in h.bins.iter().zip(&cmp.per_bin) {
        t.push(vec![
            num(b.lo),
            num(b.hi),
            num(b.mean),
            num(b.std_error),
            num(c.analytic),
            num(c.z),
        ]);
    }
    Ok(Report::new(
        &json!({ "histogram": h, "comparison": cmp }),
        vec![t],
    ))
}

fn verify(config: &JobConfig) -> Result<Report> {
    let checks = verification_checks(config)?;
    let mut t = Table::new("checks", &["check", "measured", "bound", "passed"]);
    for c in &checks {
        log::info!(
            "{} {}: {} ({})",
            if c.passed { "ok" } else { "FAILED" },
            c.name,
            c.measured,
            c.bound
        );
        t.push(vec![
            c.name.clone(),
            num(c.measured),
            c.bound.clone(),
            c.passed.to_string(),
        ]);
    }
    let mut r = Report::new(&json!({ "checks": checks }), vec![t]);
    r.passed = checks.iter().all(|c| c.passed);
    Ok(r)
}

#[derive(serde::Serialize)]
struct OrbitSummary {
    c: f64,
    period: f64,
    period_error: f64,
    /// Largest relative change of C over ten periods.
    c_drift: f64,
    x_minus: f64,
    x_plus: f64,
    /// max over k = 1..4 of |U(kπ/2) − kπ/2|.
    u_error: f64,
    /// Largest relative difference between the intensities of the configured
    /// space and its warped phase on the grid.
    iso_residual: f64,
}

fn rigidity(config: &JobConfig) -> Result<Report> {
    let tol = config.tol_or_default();
    let (lo, hi) = config.interval_or_default();
    let xs = linspace(lo, hi, config.grid);
    let mut summaries = Vec::new();
    let mut orbits = Table::new(
        "orbits",
        &[
            "c",
            "period",
            "period_error",
            "c_drift",
            "x_minus",
            "x_plus",
            "u_error",
            "iso_residual",
        ],
    );
    let mut trace = Table::new("trace", &["c", "t", "x", "y", "u"]);
    for c in config.orbits_or_default() {
        let orbit = integrate_orbit(c, 10.0 * PI, tol)?;
        let c_drift = orbit
            .states
            .iter()
            .map(|s| (conserved(s.x, s.y) / c - 1.0).abs())
            .fold(0.0, f64::max);
        let (x_minus, x_plus) = turning_points(c)?;
        let mut u_error = 0.0f64;
        for k in 1..=4 {
            let s = k as f64 * PI / 2.0;
            u_error = u_error.max((u_integral(c, s)? - s).abs());
        }
        let iso = build_isophase(&config.space, c, 0.0)?;
        let mut iso_residual = 0.0f64;
        for &x in &xs {
            let r = rho1_closed(&config.space, x)?;
            iso_residual = iso_residual.max((iso.rho1(x)? - r).abs() / r);
        }
        for s in orbit.states.iter().filter(|s| s.t <= orbit.period) {
            trace.push(vec![num(c), num(s.t), num(s.x), num(s.y), num(s.u)]);
        }
        let sm = OrbitSummary {
            c,
            period: orbit.period,
            period_error: (orbit.period - PI).abs(),
            c_drift,
            x_minus,
            x_plus,
            u_error,
            iso_residual,
        };
        orbits.push(
            [
                sm.c,
                sm.period,
                sm.period_error,
                sm.c_drift,
                sm.x_minus,
                sm.x_plus,
                sm.u_error,
                sm.iso_residual,
            ]
            .iter()
            .map(|&v| num(v))
            .collect(),
        );
        summaries.push(sm);
    }
    Ok(Report::new(
        &json!({ "orbits": summaries }),
        vec![orbits, trace],
    ))
}

fn figures(config: &JobConfig) -> Result<Report> {
    let (lo, hi) = config.interval_or_default();
    let xs = linspace(lo, hi, config.grid);
    let rho = intensity_curve(&config.space, &xs, Method::ClosedForm)?;
    let mut rho_t = Table::new("rho1", &["x", "value"]);
    let mut phi_t = Table::new("phi_prime", &["x", "value"]);
    let mut phi_prime = Vec::with_capacity(xs.len());
    for (&x, &v) in xs.iter().zip(&rho.values) {
        let d1 = phase_jet(&config.space, x)?.d1;
        rho_t.push(vec![num(x), num(v)]);
        phi_t.push(vec![num(x), num(d1)]);
        phi_prime.push(d1);
    }
    let result = json!({
        "rho1": { "x": xs, "value": rho.values },
        "phi_prime": { "x": xs, "value": phi_prime },
    });
    Ok(Report::new(&result, vec![rho_t, phi_t]))
}
