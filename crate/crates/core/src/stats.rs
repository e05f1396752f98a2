//! Monte Carlo zero counts: per-bin empirical intensity, count moments, and
//! z-scores against analytic intensity curves.
//!
//! Realizations are processed in parallel, but every per-sample count is kept
//! in seed order and all sums are taken in that order, so results do not
//! depend on the number of workers.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaf::{real_zeros, GafModel};
use crate::intensity::{expected_count, IntensityCurve};
use crate::spaces::SpaceSpec;

/// Largest tolerated fraction of samples excluded for unresolved tangencies.
pub const MAX_EXCLUDED_FRACTION: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bin {
    pub lo: f64,
    pub hi: f64,
    /// Mean zero count per unit length.
    pub mean: f64,
    pub std_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountHistogram {
    pub space: SpaceSpec,
    pub alpha: f64,
    pub interval: (f64, f64),
    pub bins: Vec<Bin>,
    /// Samples that entered the averages.
    pub n_samples: usize,
    pub seed_base: u64,
    /// Samples dropped for an unresolved tangency.
    pub excluded: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountMoments {
    pub mean: f64,
    pub variance: f64,
    /// Standard errors of the mean and of the variance.
    pub std_errors: (f64, f64),
    pub n_samples: usize,
    pub excluded: usize,
}

/// Zero counts per bin for each accepted sample, in seed order.
struct Counts {
    rows: Vec<Vec<u32>>,
    excluded: usize,
}

fn collect_counts(
    space: &SpaceSpec,
    alpha: f64,
    interval: (f64, f64),
    edges: &[f64],
    n_samples: usize,
    seed_base: u64,
) -> Result<Counts> {
    if n_samples < 2 {
        return Err(Error::invalid("samples", "need at least 2 samples"));
    }
    let model = Arc::new(GafModel::new(space, alpha, interval)?);
    let per_sample: Vec<Result<Option<Vec<u32>>>> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let s = model.sample(seed_base.wrapping_add(i as u64));
            let z = real_zeros(&s, interval)?;
            if !z.unresolved.is_empty() {
                log::warn!(
                    "seed {}: unresolved tangency near {:?}",
                    s.seed,
                    z.unresolved
                );
                return Ok(None);
            }
            let nb = edges.len() - 1;
            let mut row = vec![0u32; nb];
            for &x in &z.zeros {
                let k = edges
                    .partition_point(|&e| e <= x)
                    .saturating_sub(1)
                    .min(nb - 1);
                row[k] += 1;
            }
            Ok(Some(row))
        })
        .collect();
    let mut rows = Vec::with_capacity(n_samples);
    let mut excluded = 0;
    for r in per_sample {
        match r? {
            Some(row) => rows.push(row),
            None => excluded += 1,
        }
    }
    if excluded as f64 > MAX_EXCLUDED_FRACTION * n_samples as f64 || rows.len() < 2 {
        return Err(Error::TooManyExclusions {
            excluded,
            total: n_samples,
        });
    }
    Ok(Counts { rows, excluded })
}

fn mean_and_se(values: impl Iterator<Item = u64> + Clone, n: usize) -> (f64, f64) {
    // integer sums are exact and order independent
    let (s1, s2) = values.fold((0u64, 0u64), |(a, b), v| (a + v, b + v * v));
    let nf = n as f64;
    let mean = s1 as f64 / nf;
    let var = ((s2 as f64 - s1 as f64 * mean) / (nf - 1.0)).max(0.0);
    (mean, (var / nf).sqrt())
}

/// Per-bin mean zero count per unit length over seeds
/// `seed_base..seed_base + n_samples`.
pub fn empirical_intensity(
    space: &SpaceSpec,
    alpha: f64,
    interval: (f64, f64),
    n_bins: usize,
    n_samples: usize,
    seed_base: u64,
) -> Result<CountHistogram> {
    let (lo, hi) = interval;
    if n_bins == 0 {
        return Err(Error::invalid("bins", "need at least one bin"));
    }
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::invalid(
            "interval",
            "histogram needs a bounded nonempty interval",
        ));
    }
    let mut edges: Vec<f64> = (0..=n_bins)
        .map(|k| lo + (hi - lo) * k as f64 / n_bins as f64)
        .collect();
    edges[n_bins] = hi;
    let counts = collect_counts(space, alpha, interval, &edges, n_samples, seed_base)?;
    let n = counts.rows.len();
    let bins = (0..n_bins)
        .map(|k| {
            let (mean, se) = mean_and_se(counts.rows.iter().map(|r| r[k] as u64), n);
            let w = edges[k + 1] - edges[k];
            Bin {
                lo: edges[k],
                hi: edges[k + 1],
                mean: mean / w,
                std_error: se / w,
            }
        })
        .collect();
    Ok(CountHistogram {
        space: *space,
        alpha,
        interval,
        bins,
        n_samples: n,
        seed_base,
        excluded: counts.excluded,
    })
}

/// Mean and variance of the number of real zeros in `interval`. Rational
/// spaces accept infinite intervals.
pub fn count_moments(
    space: &SpaceSpec,
    alpha: f64,
    interval: (f64, f64),
    n_samples: usize,
    seed_base: u64,
) -> Result<CountMoments> {
    let counts = collect_counts(
        space,
        alpha,
        interval,
        &[interval.0, interval.1],
        n_samples,
        seed_base,
    )?;
    let n = counts.rows.len();
    let totals: Vec<u64> = counts.rows.iter().map(|r| r[0] as u64).collect();
    let (mean, se_mean) = mean_and_se(totals.iter().copied(), n);
    let nf = n as f64;
    let m2 = totals
        .iter()
        .map(|&c| (c as f64 - mean).powi(2))
        .sum::<f64>()
        / nf;
    let m4 = totals
        .iter()
        .map(|&c| (c as f64 - mean).powi(4))
        .sum::<f64>()
        / nf;
    let variance = m2 * nf / (nf - 1.0);
    let se_var = ((m4 - m2 * m2 * (nf - 3.0) / (nf - 1.0)) / nf)
        .max(0.0)
        .sqrt();
    Ok(CountMoments {
        mean,
        variance,
        std_errors: (se_mean, se_var),
        n_samples: n,
        excluded: counts.excluded,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinComparison {
    pub lo: f64,
    pub hi: f64,
    pub empirical: f64,
    /// Bin average of the analytic intensity.
    pub analytic: f64,
    pub z: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveComparison {
    pub max_abs_z: f64,
    pub per_bin: Vec<BinComparison>,
}

fn z_score(empirical: f64, analytic: f64, se: f64) -> f64 {
    let d = empirical - analytic;
    if d == 0.0 {
        0.0
    } else if se > 0.0 {
        d / se
    } else {
        f64::INFINITY.copysign(d)
    }
}

fn finish(per_bin: Vec<BinComparison>) -> CurveComparison {
    let max_abs_z = per_bin.iter().map(|b| b.z.abs()).fold(0.0, f64::max);
    CurveComparison { max_abs_z, per_bin }
}

/// Linear interpolation of a sampled curve.
fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let j = xs.partition_point(|&v| v < x).clamp(1, xs.len() - 1);
    let (x0, x1) = (xs[j - 1], xs[j]);
    let t = if x1 > x0 { (x - x0) / (x1 - x0) } else { 0.0 };
    ys[j - 1] + t * (ys[j] - ys[j - 1])
}

/// Trapezoidal average of the curve over [a, b].
fn curve_average(c: &IntensityCurve, a: f64, b: f64) -> f64 {
    let mut pts = vec![a];
    pts.extend(c.xs.iter().copied().filter(|&x| x > a && x < b));
    pts.push(b);
    let mut s = 0.0;
    for w in pts.windows(2) {
        let (fa, fb) = (
            interpolate(&c.xs, &c.values, w[0]),
            interpolate(&c.xs, &c.values, w[1]),
        );
        s += 0.5 * (fa + fb) * (w[1] - w[0]);
    }
    s / (b - a)
}

/// z-scores of the histogram against bin averages of a sampled analytic
/// curve (trapezoidal rule on the curve's grid).
pub fn compare_curves(hist: &CountHistogram, analytic: &IntensityCurve) -> Result<CurveComparison> {
    let (xs, (lo, hi)) = (&analytic.xs, hist.interval);
    if xs.len() < 2 || xs[0] > lo || xs[xs.len() - 1] < hi {
        return Err(Error::invalid(
            "analytic",
            "curve does not cover the histogram interval",
        ));
    }
    let per_bin = hist
        .bins
        .iter()
        .map(|b| {
            let analytic = curve_average(analytic, b.lo, b.hi);
            BinComparison {
                lo: b.lo,
                hi: b.hi,
                empirical: b.mean,
                analytic,
                z: z_score(b.mean, analytic, b.std_error),
            }
        })
        .collect();
    Ok(finish(per_bin))
}

/// z-scores against exact bin integrals of the closed-form intensity.
pub fn compare_closed_form(hist: &CountHistogram) -> Result<CurveComparison> {
    let per_bin = hist
        .bins
        .iter()
        .map(|b| {
            let analytic = expected_count(&hist.space, b.lo, b.hi)? / (b.hi - b.lo);
            Ok(BinComparison {
                lo: b.lo,
                hi: b.hi,
                empirical: b.mean,
                analytic,
                z: z_score(b.mean, analytic, b.std_error),
            })
        })
        .collect::<Result<_>>()?;
    Ok(finish(per_bin))
}
