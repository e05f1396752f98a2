//! Real zeros of a realization: sign changes on an intensity-adaptive grid,
//! Brent refinement, and a check of every local minimum of |F| for a pair of
//! nearby zeros or a near tangency.

use serde::{Deserialize, Serialize};

use super::{GafModel, GafSample, Prepared};
use crate::error::{Error, Result};
use crate::intensity::rho1_closed;
use crate::numeric::roots::brent;
use crate::spaces::{phase_derivatives, SpaceSpec};

/// Grid step as a fraction of the local mean zero spacing 1/ρ₁.
const STEP_FRACTION: f64 = 0.2;
const CHUNKS: usize = 64;
const TANGENCY: f64 = 1e-9;
const XTOL: f64 = 1e-11;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroSet {
    pub zeros: Vec<f64>,
    pub interval: (f64, f64),
    /// Largest scan step; measured in t = atan(x/a) for rational spaces.
    pub resolution: f64,
    /// Critical points where |F| fell below the tangency threshold without a
    /// sign change: possibly a double zero.
    pub unresolved: Vec<f64>,
}

/// Scan grid in the variable t (x itself, or atan(x/a) for rational spaces).
#[derive(Clone, Debug, Default)]
pub(crate) struct Scan {
    interval: (f64, f64),
    ts: Vec<f64>,
    prepared: Vec<Prepared>,
    resolution: f64,
}

impl Scan {
    pub(crate) fn build(model: &GafModel, (lo, hi): (f64, f64)) -> Result<Scan> {
        if let SpaceSpec::Rational { a, n } = model.space {
            let (t0, t1) = ((lo / a).atan(), (hi / a).atan());
            // ρ₁ dx = √((n² − 1)/3)/π dt
            let rho_t = (((n * n) as f64 - 1.0) / 3.0).sqrt() / std::f64::consts::PI;
            let steps = ((t1 - t0) * rho_t / STEP_FRACTION)
                .ceil()
                .max(CHUNKS as f64) as usize;
            let ts = uniform(t0, t1, steps);
            return Ok(Scan {
                interval: (lo, hi),
                ts,
                prepared: Vec::new(),
                resolution: (t1 - t0) / steps as f64,
            });
        }
        let mut ts = vec![lo];
        let mut resolution = 0.0f64;
        let width = (hi - lo) / CHUNKS as f64;
        for k in 0..CHUNKS {
            let (a, b) = (lo + width * k as f64, lo + width * (k + 1) as f64);
            let mut rho = 0.0f64;
            for i in 0..=8 {
                rho = rho.max(rho1_closed(&model.space, a + (b - a) * i as f64 / 8.0)?);
            }
            let step = STEP_FRACTION / (1.25 * rho);
            let m = (width / step).ceil().max(1.0) as usize;
            resolution = resolution.max(width / m as f64);
            ts.extend(uniform(a, b, m).into_iter().skip(1));
        }
        *ts.last_mut().expect("nonempty") = hi;
        let prepared = ts
            .iter()
            .map(|&x| model.prepare(x))
            .collect::<Result<_>>()?;
        Ok(Scan {
            interval: (lo, hi),
            ts,
            prepared,
            resolution,
        })
    }
}

fn uniform(a: f64, b: f64, steps: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..=steps)
        .map(|i| a + (b - a) * i as f64 / steps as f64)
        .collect();
    v[steps] = b;
    v
}

/// Evaluation in the scan variable, collecting the first error.
struct Probe<'a> {
    model: &'a GafModel,
    sample: &'a GafSample,
    failure: Option<Error>,
}

impl Probe<'_> {
    fn h(&mut self, t: f64) -> f64 {
        let m = self.model;
        if matches!(m.space, SpaceSpec::Rational { .. }) {
            return m.angle_value(&self.sample.coeffs, t);
        }
        match m.value(&self.sample.coeffs, &self.sample.tail_coeffs, t) {
            Ok(v) => v,
            Err(e) => {
                self.failure.get_or_insert(e);
                0.0
            }
        }
    }

    fn x(&self, t: f64) -> f64 {
        match self.model.space {
            SpaceSpec::Rational { a, .. } => a * t.tan(),
            _ => t,
        }
    }

    fn xtol(&self, t: f64) -> f64 {
        match self.model.space {
            SpaceSpec::Rational { a, .. } => XTOL * t.cos().powi(2) / a,
            _ => XTOL,
        }
    }

    fn root(&mut self, a: f64, b: f64) -> Result<f64> {
        let tol = self.xtol(0.5 * (a + b));
        brent(|t| self.h(t), a, b, tol)
    }

    /// Tangency threshold in the units of `h`, scaled with the coefficients.
    fn threshold(&mut self, t: f64, coeff_scale: f64) -> f64 {
        let base = match self.model.space {
            SpaceSpec::Rational { a, n } => (n as f64 / (a * std::f64::consts::PI)).sqrt(),
            _ => match phase_derivatives(&self.model.space, t) {
                Ok(d) => (d[0] / std::f64::consts::PI).sqrt(),
                Err(e) => {
                    self.failure.get_or_insert(e);
                    0.0
                }
            },
        };
        TANGENCY * base * coeff_scale
    }

    /// Minimizer of sign·h on [a, b]: a root of the central-difference
    /// derivative when it brackets one, golden section otherwise.
    fn critical_point(&mut self, a: f64, b: f64, sign: f64) -> f64 {
        let delta = 1e-6 * (b - a);
        let dh = |p: &mut Self, t: f64| sign * (p.h(t + delta) - p.h(t - delta)) / (2.0 * delta);
        let (da, db) = (dh(self, a + delta), dh(self, b - delta));
        if da < 0.0 && db > 0.0 {
            let mut probe = |t: f64| dh(self, t);
            if let Ok(t) = brent(&mut probe, a + delta, b - delta, 1e-9 * (b - a)) {
                return t;
            }
        }
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let (mut lo, mut hi) = (a, b);
        let mut c = hi - g * (hi - lo);
        let mut d = lo + g * (hi - lo);
        let (mut fc, mut fd) = (sign * self.h(c), sign * self.h(d));
        while hi - lo > 1e-9 * (b - a) {
            if fc < fd {
                hi = d;
                d = c;
                fd = fc;
                c = hi - g * (hi - lo);
                fc = sign * self.h(c);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + g * (hi - lo);
                fd = sign * self.h(d);
            }
        }
        0.5 * (lo + hi)
    }
}

/// Real zeros of the realization on `interval`, which must lie inside the
/// interval the sample was drawn for.
pub fn real_zeros(sample: &GafSample, interval: (f64, f64)) -> Result<ZeroSet> {
    let model: &GafModel = sample.model();
    let (lo, hi) = interval;
    let (mlo, mhi) = model.interval;
    if !(lo < hi) || lo < mlo || hi > mhi {
        return Err(Error::invalid(
            "interval",
            format!("[{lo}, {hi}] is not inside the sampled interval [{mlo}, {mhi}]"),
        ));
    }
    let owned;
    let scan = if model.scan.interval == interval {
        &model.scan
    } else {
        owned = Scan::build(model, interval)?;
        &owned
    };
    let mut probe = Probe {
        model,
        sample,
        failure: None,
    };
    let values: Vec<f64> = if scan.prepared.is_empty() {
        scan.ts.iter().map(|&t| probe.h(t)).collect()
    } else {
        scan.prepared
            .iter()
            .map(|p| model.value_prepared(&sample.coeffs, &sample.tail_coeffs, p))
            .collect()
    };
    let coeff_scale = if sample.coeffs.is_empty() {
        1.0
    } else {
        (sample.coeffs.iter().map(|c| c * c).sum::<f64>() / sample.coeffs.len() as f64).sqrt()
    };

    let ts = &scan.ts;
    let mut zs: Vec<f64> = Vec::new();
    let mut unresolved = Vec::new();
    for i in 0..ts.len() {
        if values[i] == 0.0 {
            zs.push(ts[i]);
            continue;
        }
        if i + 1 < ts.len() && values[i + 1] != 0.0 && (values[i] < 0.0) != (values[i + 1] < 0.0) {
            zs.push(probe.root(ts[i], ts[i + 1])?);
        }
    }
    for i in 1..ts.len().saturating_sub(1) {
        let (h0, h1, h2) = (values[i - 1], values[i], values[i + 1]);
        let sign = h1.signum();
        if h1 == 0.0 || h0 * sign <= 0.0 || h2 * sign <= 0.0 {
            continue;
        }
        if !(h1.abs() < h0.abs() && h1.abs() <= h2.abs()) {
            continue;
        }
        let tc = probe.critical_point(ts[i - 1], ts[i + 1], sign);
        let hc = probe.h(tc);
        if hc * sign < 0.0 {
            zs.push(probe.root(ts[i - 1], tc)?);
            zs.push(probe.root(tc, ts[i + 1])?);
        } else if hc.abs() <= probe.threshold(probe.x(tc), coeff_scale) {
            unresolved.push(probe.x(tc));
        }
    }
    if let Some(e) = probe.failure {
        return Err(e);
    }
    let mut zeros: Vec<f64> = zs
        .into_iter()
        .map(|t| probe.x(t))
        .filter(|x| x.is_finite() && *x >= lo && *x <= hi)
        .collect();
    zeros.sort_by(f64::total_cmp);
    zeros.dedup();
    Ok(ZeroSet {
        zeros,
        interval,
        resolution: scan.resolution,
        unresolved,
    })
}
