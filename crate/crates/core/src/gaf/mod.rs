//! Random series F = Σ aₙ k_{ωₙ} with i.i.d. standard normal aₙ over the
//! normalized kernels at the basis points.
//!
//! All values are reported as F/|E|, which has the same real zeros as F.
//! Writing cₙ = (−1)ⁿ φ′(ωₙ)^{−1/2} aₙ,
//!
//! F(x)/|E(x)| = sin(φ(x) − α)/√π · Σ cₙ/(x − ωₙ).
//!
//! Summands with ωₙ near the interval are kept explicitly. The others are
//! replaced by a Gaussian polynomial with the exact covariance of their sum
//! (see [`TailModel`]), so sample variances match K(x,x)/|E(x)|² without
//! millions of explicit terms.
//!
//! Rational spaces are finite dimensional and use every basis point. They
//! are evaluated in the angle t = atan(x/a), where the series becomes
//! F/|E| = cos t/√(πna) · Σ aₘ sin(n(t − tₘ))/sin(t − tₘ).

mod scan;
mod tail;

use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::rng::standard_normal;
use crate::spaces::{basis_points, e_components, phase_derivatives, BasisPoints, SpaceSpec};

pub use scan::{real_zeros, ZeroSet};
pub use tail::TailModel;

const COEFF_STREAM: u64 = 0xC0EF;
const TAIL_STREAM: u64 = 0x7A11;

/// Taylor order of the remote-summand polynomial.
pub const TAIL_ORDER: usize = 12;
/// Allowed relative mismatch between the sampled variance and K(x,x).
pub const MAX_VARIANCE_DEFICIT: f64 = 1e-4;
/// Largest explicit window, in basis points.
pub const MAX_BASIS_SIZE: usize = 400_000;
/// Exactly located remote points extend this many window radii out.
const GHOST_REACH: f64 = 8.0;
/// Below this phase offset from a basis point the pole term is expanded.
const POLE_PHASE: f64 = 1e-4;

/// Everything about a sampling problem that does not depend on the seed.
#[derive(Clone, Debug, Serialize)]
pub struct GafModel {
    pub space: SpaceSpec,
    pub interval: (f64, f64),
    pub basis: BasisPoints,
    /// (−1)ⁿ φ′(ωₙ)^{−1/2} per explicit point.
    pub weights: Vec<f64>,
    /// Distance beyond the interval covered by explicit points; `None` when
    /// the basis is exhaustive.
    pub window_pad: Option<f64>,
    pub tail: Option<TailModel>,
    /// Worst relative variance mismatch found on the check grid.
    pub variance_deficit: f64,
    #[serde(skip)]
    scan: scan::Scan,
}

impl GafModel {
    /// Validates the request and builds the explicit window, the remote
    /// polynomial, and the scan grid for `interval`.
    ///
    /// Airy and Bessel bases are used with α = 0 only, where completeness of
    /// the kernels is known. Rational spaces accept infinite intervals.
    pub fn new(space: &SpaceSpec, alpha: f64, interval: (f64, f64)) -> Result<Self> {
        space.validate()?;
        let (lo, hi) = interval;
        if !(lo < hi) {
            return Err(Error::invalid(
                "interval",
                format!("empty interval [{lo}, {hi}]"),
            ));
        }
        if matches!(space, SpaceSpec::Airy | SpaceSpec::Bessel { .. }) && alpha != 0.0 {
            return Err(Error::invalid(
                "alpha",
                "sampling over Airy and Bessel bases requires alpha = 0",
            ));
        }
        let mut model = if space.is_finite_dimensional() {
            let basis = basis_points(space, alpha, f64::NEG_INFINITY, f64::INFINITY)?;
            let weights = signed_weights(space, &basis)?;
            GafModel {
                space: *space,
                interval,
                basis,
                weights,
                window_pad: None,
                tail: None,
                variance_deficit: 0.0,
                scan: scan::Scan::default(),
            }
        } else {
            if !(lo.is_finite() && hi.is_finite()) {
                return Err(Error::invalid(
                    "interval",
                    "must be bounded for this family",
                ));
            }
            windowed(space, alpha, interval)?
        };
        model.scan = scan::Scan::build(&model, interval)?;
        Ok(model)
    }

    pub fn alpha(&self) -> f64 {
        self.basis.alpha
    }

    /// Draws the coefficients for `seed`. The n-th coefficient depends only on
    /// (seed, n).
    pub fn sample(self: &Arc<Self>, seed: u64) -> GafSample {
        let coeffs = (0..self.basis.points.len())
            .map(|i| standard_normal(seed, COEFF_STREAM, self.basis.index(i)))
            .collect();
        let tail_coeffs = match &self.tail {
            Some(t) => {
                let g: Vec<f64> = (0..t.order)
                    .map(|j| standard_normal(seed, TAIL_STREAM, j as i64))
                    .collect();
                t.correlate(&g)
            }
            None => Vec::new(),
        };
        GafSample {
            model: Arc::clone(self),
            coeffs,
            tail_coeffs,
            seed,
        }
    }

    /// sin(φ(x) − α), from the reference components of E.
    fn shifted_sine(&self, x: f64) -> Result<f64> {
        let (a, b, _) = e_components(&self.space, x)?;
        let (s, c) = self.alpha().sin_cos();
        Ok((b * c - a * s) / a.hypot(b))
    }

    /// Sample-independent data for evaluating at x.
    fn prepare(&self, x: f64) -> Result<Prepared> {
        let pts = &self.basis.points;
        let sine = self.shifted_sine(x)?;
        let j = pts.partition_point(|&w| w < x);
        let nearest = [j.checked_sub(1), (j < pts.len()).then_some(j)]
            .into_iter()
            .flatten()
            .min_by(|&p, &q| (x - pts[p]).abs().total_cmp(&(x - pts[q]).abs()));
        if let Some(m) = nearest {
            let delta = x - pts[m];
            let w = self.weights[m];
            if (delta / (w * w)).abs() < POLE_PHASE {
                let [d1, d2, d3] = phase_derivatives(&self.space, pts[m])?;
                let dphi = delta * (d1 + delta * (0.5 * d2 + delta * d3 / 6.0));
                let sign = if self.basis.index(m) % 2 == 0 {
                    1.0
                } else {
                    -1.0
                };
                let ratio = if delta == 0.0 {
                    sign * d1
                } else {
                    sign * dphi.sin() / delta
                };
                return Ok(Prepared {
                    x,
                    sine: sign * dphi.sin(),
                    pole: Some((m, ratio)),
                });
            }
        }
        Ok(Prepared {
            x,
            sine,
            pole: None,
        })
    }

    fn value_prepared(&self, coeffs: &[f64], tail: &[f64], p: &Prepared) -> f64 {
        let skip = p.pole.map_or(usize::MAX, |q| q.0);
        let mut sum = 0.0;
        for (i, (&w, &om)) in self.weights.iter().zip(&self.basis.points).enumerate() {
            if i != skip {
                sum += coeffs[i] * w / (p.x - om);
            }
        }
        if let Some(t) = &self.tail {
            sum += t.value(tail, p.x);
        }
        let mut v = p.sine * sum;
        if let Some((m, ratio)) = p.pole {
            v += coeffs[m] * self.weights[m] * ratio;
        }
        v / PI.sqrt()
    }

    /// F/|E| for the rational family as a function of t = atan(x/a), divided
    /// by cos t. Finite at t = ±π/2.
    fn angle_value(&self, coeffs: &[f64], t: f64) -> f64 {
        let SpaceSpec::Rational { a, n } = self.space else {
            unreachable!()
        };
        let nf = n as f64;
        let mut s = 0.0;
        for (i, &c) in coeffs.iter().enumerate() {
            let tm = (self.alpha() + PI * self.basis.index(i) as f64) / nf - PI / 2.0;
            let d = t - tm;
            let dir = if d == 0.0 {
                nf
            } else {
                (nf * d).sin() / d.sin()
            };
            s += c * dir;
        }
        s / (PI * nf * a).sqrt()
    }

    fn value(&self, coeffs: &[f64], tail: &[f64], x: f64) -> Result<f64> {
        if let SpaceSpec::Rational { a, .. } = self.space {
            let t = (x / a).atan();
            return Ok(self.angle_value(coeffs, t) * t.cos());
        }
        let p = self.prepare(x)?;
        Ok(self.value_prepared(coeffs, tail, &p))
    }

    /// Var(F(x)/|E(x)|) implied by the explicit terms and the tail model.
    pub fn variance(&self, x: f64) -> Result<f64> {
        if let SpaceSpec::Rational { a, n } = self.space {
            let t = (x / a).atan();
            let nf = n as f64;
            let mut s = 0.0;
            for i in 0..self.basis.points.len() {
                let tm = (self.alpha() + PI * self.basis.index(i) as f64) / nf - PI / 2.0;
                let d = t - tm;
                let dir = if d == 0.0 {
                    nf
                } else {
                    (nf * d).sin() / d.sin()
                };
                s += dir * dir;
            }
            return Ok(s * t.cos().powi(2) / (PI * nf * a));
        }
        let p = self.prepare(x)?;
        let skip = p.pole.map_or(usize::MAX, |q| q.0);
        let mut sum = 0.0;
        for (i, (&w, &om)) in self.weights.iter().zip(&self.basis.points).enumerate() {
            if i != skip {
                sum += (w / (x - om)).powi(2);
            }
        }
        if let Some(t) = &self.tail {
            sum += t.variance(x);
        }
        let mut v = p.sine * p.sine * sum;
        if let Some((m, ratio)) = p.pole {
            v += (self.weights[m] * ratio).powi(2);
        }
        Ok(v / PI)
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct Prepared {
    x: f64,
    sine: f64,
    /// Nearby basis point and the accurately computed sin(φ − α)/(x − ωₘ).
    pole: Option<(usize, f64)>,
}

fn signed_weights(space: &SpaceSpec, basis: &BasisPoints) -> Result<Vec<f64>> {
    basis
        .points
        .iter()
        .enumerate()
        .map(|(i, &w)| {
            let d1 = phase_derivatives(space, w)?[0];
            let sign = if basis.index(i) % 2 == 0 { 1.0 } else { -1.0 };
            Ok(sign / d1.sqrt())
        })
        .collect()
}

fn windowed(space: &SpaceSpec, alpha: f64, (lo, hi): (f64, f64)) -> Result<GafModel> {
    let c = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let d1_max = (0..=16)
        .map(|i| phase_derivatives(space, lo + (hi - lo) * i as f64 / 16.0).map(|d| d[0]))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let mut radius = (4.0 * half).max(20.0 * PI / d1_max);
    loop {
        let model = windowed_at(space, alpha, (lo, hi), c, radius)?;
        let size = model.basis.points.len();
        if model.variance_deficit <= MAX_VARIANCE_DEFICIT {
            return Ok(model);
        }
        log::debug!(
            "variance deficit {:e} at radius {radius}",
            model.variance_deficit
        );
        if 2 * size > MAX_BASIS_SIZE {
            return Err(Error::Truncation {
                deficit: model.variance_deficit,
                basis_size: size,
            });
        }
        radius *= 2.0;
    }
}

fn windowed_at(
    space: &SpaceSpec,
    alpha: f64,
    (lo, hi): (f64, f64),
    c: f64,
    radius: f64,
) -> Result<GafModel> {
    let reach = basis_points(
        space,
        alpha,
        c - GHOST_REACH * radius,
        c + GHOST_REACH * radius,
    )?;
    if reach.points.is_empty() {
        return Err(Error::Numeric(format!(
            "no basis points within {} of {c}",
            GHOST_REACH * radius
        )));
    }
    let weights_all = signed_weights(space, &reach)?;
    let inside: Vec<usize> = (0..reach.points.len())
        .filter(|&i| (reach.points[i] - c).abs() < radius)
        .collect();

    let j = TAIL_ORDER;
    let max_p = 2 * j;
    let mut moments = vec![0.0; max_p + 1];
    for (&w, &om) in weights_all.iter().zip(&reach.points) {
        if (om - c).abs() < radius {
            continue;
        }
        let rho = radius / (om - c);
        let w2 = w * w;
        let mut r = rho * rho;
        for m in moments.iter_mut().skip(2) {
            *m += w2 * r;
            r *= rho;
        }
    }
    let first = reach.index(0);
    let last = reach.index(reach.points.len() - 1);
    let scale = (reach.points.len() as f64).max(1.0);
    for range in tail::remainder_ranges(space, first, last) {
        let m = tail::model_moments(space, alpha, c, radius, range, scale, max_p)?;
        for (acc, v) in moments.iter_mut().zip(m) {
            *acc += v;
        }
    }
    let cov: Vec<f64> = (0..j * j).map(|k| moments[k / j + k % j + 2]).collect();
    let tail = TailModel {
        center: c,
        radius,
        factor: tail::clipped_cholesky(&cov, j),
        order: j,
    };

    let (offset, points, weights) = match (inside.first(), inside.last()) {
        (Some(&a), Some(&b)) => (
            reach.index(a),
            reach.points[a..=b].to_vec(),
            weights_all[a..=b].to_vec(),
        ),
        _ => (0, Vec::new(), Vec::new()),
    };
    if points.len() > MAX_BASIS_SIZE {
        return Err(Error::invalid(
            "interval",
            format!(
                "needs {} explicit basis points, above the limit {MAX_BASIS_SIZE}",
                points.len()
            ),
        ));
    }
    let basis = BasisPoints {
        alpha,
        points,
        index_offset: offset,
        exhaustive: false,
    };
    let mut model = GafModel {
        space: *space,
        interval: (lo, hi),
        basis,
        weights,
        window_pad: Some(radius - 0.5 * (hi - lo)),
        tail: Some(tail),
        variance_deficit: 0.0,
        scan: scan::Scan::default(),
    };
    model.variance_deficit = variance_deficit(&model)?;
    Ok(model)
}

/// max |1 − Var/(φ′/π)| over a grid on the interval.
fn variance_deficit(model: &GafModel) -> Result<f64> {
    let (lo, hi) = model.interval;
    let mut worst = 0.0f64;
    for i in 0..=64 {
        let x = lo + (hi - lo) * i as f64 / 64.0;
        let target = phase_derivatives(&model.space, x)?[0] / PI;
        let v = model.variance(x)?;
        worst = worst.max((1.0 - v / target).abs());
    }
    Ok(worst)
}

/// One realization.
#[derive(Clone, Debug)]
pub struct GafSample {
    model: Arc<GafModel>,
    /// aₙ for the explicit basis points, in basis order.
    pub coeffs: Vec<f64>,
    /// Correlated coefficients of the remote-summand polynomial.
    pub tail_coeffs: Vec<f64>,
    pub seed: u64,
}

impl GafSample {
    /// A realization with prescribed coefficients (e.g. a single nonzero aₙ).
    pub fn with_coeffs(
        model: Arc<GafModel>,
        coeffs: Vec<f64>,
        tail_coeffs: Vec<f64>,
    ) -> Result<Self> {
        if coeffs.len() != model.basis.points.len() {
            return Err(Error::invalid("coeffs", "length must match the basis"));
        }
        let order = model.tail.as_ref().map_or(0, |t| t.order);
        if tail_coeffs.len() != order {
            return Err(Error::invalid(
                "tail_coeffs",
                format!("expected {order} values"),
            ));
        }
        Ok(GafSample {
            model,
            coeffs,
            tail_coeffs,
            seed: 0,
        })
    }

    pub fn model(&self) -> &Arc<GafModel> {
        &self.model
    }

    pub fn space(&self) -> &SpaceSpec {
        &self.model.space
    }

    pub fn basis(&self) -> &BasisPoints {
        &self.model.basis
    }

    pub fn window_pad(&self) -> Option<f64> {
        self.model.window_pad
    }

    /// F(x)/|E(x)|.
    pub fn eval(&self, x: f64) -> Result<f64> {
        self.model.value(&self.coeffs, &self.tail_coeffs, x)
    }

    /// Same realization with every coefficient multiplied by `lambda`.
    pub fn scaled(&self, lambda: f64) -> Self {
        GafSample {
            model: Arc::clone(&self.model),
            coeffs: self.coeffs.iter().map(|c| c * lambda).collect(),
            tail_coeffs: self.tail_coeffs.iter().map(|c| c * lambda).collect(),
            seed: self.seed,
        }
    }
}

impl Serialize for GafSample {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct View<'a> {
            space: &'a SpaceSpec,
            interval: (f64, f64),
            basis: &'a BasisPoints,
            coeffs: &'a [f64],
            seed: u64,
            window_pad: Option<f64>,
            tail: Option<TailView<'a>>,
        }
        #[derive(Serialize)]
        struct TailView<'a> {
            center: f64,
            radius: f64,
            coeffs: &'a [f64],
        }
        let m = &self.model;
        View {
            space: &m.space,
            interval: m.interval,
            basis: &m.basis,
            coeffs: &self.coeffs,
            seed: self.seed,
            window_pad: m.window_pad,
            tail: m.tail.as_ref().map(|t| TailView {
                center: t.center,
                radius: t.radius,
                coeffs: &self.tail_coeffs,
            }),
        }
        .serialize(s)
    }
}

/// One realization on `interval` (see [`GafModel::new`]). For many seeds,
/// build the model once and call [`GafModel::sample`].
pub fn sample(space: &SpaceSpec, alpha: f64, interval: (f64, f64), seed: u64) -> Result<GafSample> {
    Ok(Arc::new(GafModel::new(space, alpha, interval)?).sample(seed))
}

pub fn eval(sample: &GafSample, x: f64) -> Result<f64> {
    sample.eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::normalized_kernel;

    fn pw() -> SpaceSpec {
        SpaceSpec::PaleyWiener { a: PI }
    }

    #[test]
    fn coefficients_are_keyed_by_index() {
        let small = Arc::new(GafModel::new(&pw(), 0.0, (0.0, 5.0)).unwrap()).sample(9);
        let large = Arc::new(GafModel::new(&pw(), 0.0, (-20.0, 30.0)).unwrap()).sample(9);
        let b = small.basis();
        for i in 0..b.points.len() {
            let n = b.index(i);
            let j = (n - large.basis().index_offset) as usize;
            assert_eq!(small.coeffs[i], large.coeffs[j]);
        }
    }

    #[test]
    fn value_at_basis_point_is_scaled_coefficient() {
        let space = SpaceSpec::Airy;
        let s = sample(&space, 0.0, (-10.0, 2.0), 4).unwrap();
        for i in [0, 3, 7] {
            let w = s.basis().points[i];
            // φ′ = 1 at the Airy zeros
            let expect = s.coeffs[i] / PI.sqrt();
            let v = s.eval(w).unwrap();
            assert!((v - expect).abs() < 1e-12, "{v} vs {expect}");
        }
    }

    #[test]
    fn matches_direct_kernel_sum() {
        let space = SpaceSpec::PaleyWiener { a: 2.0 };
        let s = sample(&space, 0.3, (-4.0, 4.0), 11).unwrap();
        let tail = s.model.tail.clone().unwrap();
        for &x in &[0.5, -3.2, 3.9] {
            let mut direct = 0.0;
            for (i, &w) in s.basis().points.iter().enumerate() {
                direct += s.coeffs[i] * normalized_kernel(&space, w, x).unwrap();
            }
            let sine = (2.0 * x - 0.3).sin();
            direct += sine / PI.sqrt() * tail.value(&s.tail_coeffs, x);
            assert!((s.eval(x).unwrap() - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn variance_matches_kernel_diagonal() {
        for (space, iv) in [
            (pw(), (0.0, 10.0)),
            (SpaceSpec::Airy, (-10.0, 2.0)),
            (SpaceSpec::Bessel { nu: 0.5 }, (0.0, 100.0)),
            (SpaceSpec::Rational { a: 1.0, n: 4 }, (-5.0, 5.0)),
        ] {
            let m = GafModel::new(
                &space,
                if space.family() == crate::spaces::Family::Rational {
                    0.4
                } else {
                    0.0
                },
                iv,
            )
            .unwrap();
            for k in 0..20 {
                let x = iv.0 + (iv.1 - iv.0) * (k as f64 + 0.37) / 20.0;
                let target = phase_derivatives(&space, x).unwrap()[0] / PI;
                let v = m.variance(x).unwrap();
                assert!(
                    (v / target - 1.0).abs() < MAX_VARIANCE_DEFICIT,
                    "{space} at {x}: {v} vs {target}"
                );
            }
        }
    }

    #[test]
    fn rejects_unsupported_requests() {
        assert!(GafModel::new(&SpaceSpec::Airy, 0.5, (-1.0, 1.0)).is_err());
        assert!(GafModel::new(&pw(), 0.0, (1.0, 1.0)).is_err());
        assert!(GafModel::new(&pw(), 0.0, (0.0, f64::INFINITY)).is_err());
        assert!(GafModel::new(&SpaceSpec::Rational { a: 1.0, n: 3 }, 0.0, (-1.0, 1.0)).is_err());
    }

    #[test]
    fn serializes_with_window_fields() {
        let s = sample(&pw(), 0.0, (0.0, 2.0), 1).unwrap();
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(
            v["coeffs"].as_array().unwrap().len(),
            s.basis().points.len()
        );
        assert!(v["window_pad"].as_f64().unwrap() > 0.0);
        assert_eq!(v["seed"], 1);
    }
}
