//! Zero tables used to fix the branch of the phase.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use crate::numeric::roots::newton_bracketed;
use crate::specfun::{airy_zero, bessel_j};

/// Index estimate of the Airy zero nearest to x < 0, from the leading
/// asymptotics of a_k.
fn airy_index_estimate(x: f64) -> usize {
    let t = (-x).powf(1.5);
    ((8.0 * t / (3.0 * PI) + 1.0) / 4.0).round().max(1.0) as usize
}

/// The Airy zero nearest to x (x < 0) and its index.
pub(crate) fn nearest_airy_zero(x: f64) -> (usize, f64) {
    let k0 = airy_index_estimate(x);
    let mut best = (k0, airy_zero(k0));
    for k in [k0.saturating_sub(1), k0 + 1] {
        if k == 0 {
            continue;
        }
        let z = airy_zero(k);
        if (z - x).abs() < (best.1 - x).abs() {
            best = (k, z);
        }
    }
    best
}

type Table = HashMap<u64, Vec<f64>>;

fn tables() -> &'static Mutex<Table> {
    static T: OnceLock<Mutex<Table>> = OnceLock::new();
    T.get_or_init(|| Mutex::new(HashMap::new()))
}

fn next_bessel_zero(nu: f64, after: f64) -> f64 {
    let j = |x: f64| bessel_j(nu, x).expect("validated order");
    // consecutive zeros are more than 2 apart
    let step = 0.5;
    let mut x = if after > 0.0 { after + 0.25 } else { 1e-3 };
    let mut f = j(x).0;
    loop {
        let xn = x + step;
        let fx = j(xn).0;
        if fx == 0.0 {
            return xn;
        }
        if fx.signum() != f.signum() {
            return newton_bracketed(j, x, xn, 0.5 * (x + xn), 1e-14 * xn)
                .expect("sign change brackets a zero");
        }
        x = xn;
        f = fx;
    }
}

/// Runs `f` on the cached zeros j_{ν,1} < j_{ν,2} < … of J_ν, extended until
/// the last one exceeds `s_min` and there are at least `count` of them.
pub(crate) fn with_bessel_zeros<R>(
    nu: f64,
    s_min: f64,
    count: usize,
    f: impl FnOnce(&[f64]) -> R,
) -> R {
    let mut guard = tables().lock().unwrap_or_else(|e| e.into_inner());
    let zs = guard.entry(nu.to_bits()).or_default();
    while zs.len() < count || zs.last().is_none_or(|&z| z <= s_min) {
        let after = zs.last().copied().unwrap_or(0.0);
        zs.push(next_bessel_zero(nu, after));
    }
    f(zs)
}

/// The squared Bessel zero j²_{ν,k} nearest to z and its index k (1-based).
pub(crate) fn nearest_bessel_zero_sq(nu: f64, z: f64) -> (usize, f64) {
    let s = z.max(0.0).sqrt();
    with_bessel_zeros(nu, s + 4.0, 1, |zs| {
        let i = zs.partition_point(|&j| j < s);
        let mut best = (0, zs[0] * zs[0]);
        for idx in [i.saturating_sub(1), i] {
            if idx < zs.len() {
                let sq = zs[idx] * zs[idx];
                if (sq - z).abs() < (best.1 - z).abs() {
                    best = (idx, sq);
                }
            }
        }
        (best.0 + 1, best.1)
    })
}

/// j²_{ν,k} from the cache.
pub(crate) fn bessel_zero_sq(nu: f64, k: usize) -> f64 {
    with_bessel_zeros(nu, 0.0, k, |zs| zs[k - 1] * zs[k - 1])
}


/// Smooth interpolation n ↦ (ωₙ, φ′(ωₙ)) of the α = 0 basis points from the
/// asymptotics of the zeros; used for tails beyond explicitly computed
/// points. `None` for finite-dimensional spaces.
pub fn asymptotic_point(
    space: &crate::spaces::SpaceSpec,
    alpha: f64,
    n: f64,
) -> Option<(f64, f64)> {
    use crate::spaces::SpaceSpec;
    match *space {
        SpaceSpec::PaleyWiener { a } => Some(((alpha + PI * n) / a, a)),
        SpaceSpec::Airy => {
            // a_k with k = 1 − n; φ′(a_k) = 1
            let k = 1.0 - n;
            let t = 3.0 * PI * (4.0 * k - 1.0) / 8.0;
            let t2 = 1.0 / (t * t);
            let w = -t.powf(2.0 / 3.0)
                * (1.0 + t2 * (5.0 / 48.0 + t2 * (-5.0 / 36.0 + t2 * (77125.0 / 82944.0))));
            Some((w, 1.0))
        }
        SpaceSpec::Bessel { nu } => {
            // j²_{ν,k} with k = n + 1; φ′(j²) = 1/(2j²)
            let mu = 4.0 * nu * nu;
            let beta = (n + 1.0 + 0.5 * nu - 0.25) * PI;
            let e = 8.0 * beta;
            let j =
                beta - (mu - 1.0) / e - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e * e * e);
            Some((j * j, 0.5 / (j * j)))
        }
        SpaceSpec::Rational { .. } => None,
    }
}
