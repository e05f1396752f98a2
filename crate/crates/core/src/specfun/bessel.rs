//! Bessel functions of the first kind and the entire pair
//! B_ν(z) = z^{−ν/2} J_ν(√z), A_ν(z) = z^{(1−ν)/2} J′_ν(√z).
//!
//! B_ν solves zB″ + (ν+1)B′ + B/4 = 0, which has no singular behaviour at
//! z = 0 for the entire solution. Small |z| uses the power series; for
//! moderate positive z the series value at z = 16 is continued by Taylor
//! stepping of that equation; large positive z uses Hankel's expansion and
//! large negative z the expansion of I_ν, with the growth e^{√−z} factored
//! out.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numeric::gamma::gamma;
use crate::numeric::roots::newton_bracketed;

const SERIES_POS: f64 = 16.0;

/// Values of the entire pair at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesselEntirePair {
    pub b: f64,
    pub a: f64,
    pub nu: f64,
}

/// z beyond which (in absolute value) the asymptotic expansions take over.
pub(crate) fn asymptotic_radius(nu: f64) -> f64 {
    let s = 20.0 + nu * nu;
    s * s
}

fn check_order(nu: f64) -> Result<()> {
    if !(nu >= -0.5) || !nu.is_finite() {
        return Err(Error::invalid(
            "nu",
            format!("order must be >= -1/2, got {nu}"),
        ));
    }
    Ok(())
}

/// B and B′ by the power series in z.
fn series(nu: f64, z: f64) -> (f64, f64) {
    let c0 = 1.0 / (2f64.powf(nu) * gamma(nu + 1.0));
    let mut b = c0;
    let mut db = 0.0;
    // u = c_k z^{k−1}, kept as a running product so that neither factor
    // over- or underflows on its own
    let mut u = c0;
    let scale = |b: f64, db: f64| b.abs() + (db * z).abs();
    for k in 1..4000 {
        let kf = k as f64;
        u *= -1.0 / (4.0 * kf * (kf + nu));
        if k > 1 {
            u *= z;
        }
        let t = u * z;
        b += t;
        db += kf * u;
        if t.abs() <= 1e-17 * scale(b, db) && kf > z.abs().sqrt() {
            break;
        }
    }
    (b, db)
}

/// Advances (B, B′) from z0 by h with the Taylor series of the ODE solution.
fn taylor(nu: f64, z0: f64, b: f64, db: f64, h: f64) -> (f64, f64) {
    let mut c0 = b;
    let mut c1 = db;
    let mut val = b + db * h;
    let mut der = db;
    let mut hk = h;
    let scale = b.abs() + (db * h).abs();
    let mut small = 0;
    for k in 0..200 {
        let kf = k as f64;
        let c2 = -((kf + 1.0) * (kf + nu + 1.0) * c1 + 0.25 * c0) / (z0 * (kf + 1.0) * (kf + 2.0));
        der += (kf + 2.0) * c2 * hk;
        hk *= h;
        let t = c2 * hk;
        val += t;
        c0 = c1;
        c1 = c2;
        if t.abs() <= 1e-18 * scale {
            small += 1;
            if small >= 3 {
                break;
            }
        } else {
            small = 0;
        }
    }
    (val, der)
}

fn stepped(nu: f64, z: f64) -> (f64, f64) {
    let (mut b, mut db) = series(nu, SERIES_POS);
    let mut z0 = SERIES_POS;
    while z0 < z {
        let h = (0.25 * z0).min(4.0 * z0.sqrt()).min(z - z0);
        let next = taylor(nu, z0, b, db, h);
        b = next.0;
        db = next.1;
        z0 += h;
    }
    (b, db)
}

fn hankel_coeffs(nu: f64, n: usize) -> Vec<f64> {
    let mu = 4.0 * nu * nu;
    let mut a = vec![1.0];
    for k in 1..n {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        a.push(a[k - 1] * (mu - odd * odd) / (kf * 8.0));
    }
    a
}

/// J_ν(s) for s ≥ 20 + ν² by Hankel's expansion.
fn hankel_j(nu: f64, s: f64) -> f64 {
    let a = hankel_coeffs(nu, 60);
    let (mut p, mut q) = (0.0, 0.0);
    let mut sk = 1.0;
    let mut last = f64::INFINITY;
    for (k, ak) in a.iter().enumerate() {
        let t = ak * sk;
        if t.abs() > last && k > 2 {
            break;
        }
        last = t.abs();
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * t;
        } else {
            q += sign * t;
        }
        if last < 1e-18 {
            break;
        }
        sk /= s;
    }
    let chi = s - (0.5 * nu + 0.25) * PI;
    let (sn, cs) = chi.sin_cos();
    (2.0 / (PI * s)).sqrt() * (p * cs - q * sn)
}

/// e^{−s} I_ν(s) for s ≥ 20 + ν².
fn scaled_i(nu: f64, s: f64) -> f64 {
    let a = hankel_coeffs(nu, 60);
    let mut sum = 0.0;
    let mut sk = 1.0;
    let mut last = f64::INFINITY;
    for (k, ak) in a.iter().enumerate() {
        let t = ak * sk;
        if t.abs() > last && k > 2 {
            break;
        }
        last = t.abs();
        sum += if k % 2 == 0 { t } else { -t };
        if last < 1e-18 {
            break;
        }
        sk /= s;
    }
    sum / (2.0 * PI * s).sqrt()
}

/// (B, B′, log_scale) with the true values equal to the first two times
/// e^{log_scale}.
fn b_pair(nu: f64, z: f64) -> (f64, f64, f64) {
    let r = asymptotic_radius(nu);
    if z >= r {
        let s = z.sqrt();
        let jn = hankel_j(nu, s);
        let jn1 = hankel_j(nu + 1.0, s);
        let b = jn / s.powf(nu);
        let b1 = jn1 / s.powf(nu + 1.0);
        (b, -0.5 * b1, 0.0)
    } else if z <= -r {
        let s = (-z).sqrt();
        let b = scaled_i(nu, s) / s.powf(nu);
        let b1 = scaled_i(nu + 1.0, s) / s.powf(nu + 1.0);
        (b, -0.5 * b1, s)
    } else if z > SERIES_POS {
        let (b, db) = stepped(nu, z);
        (b, db, 0.0)
    } else {
        let (b, db) = series(nu, z);
        (b, db, 0.0)
    }
}

/// B_ν and A_ν at z, with the factor e^{√−z} removed for large negative z.
///
/// The true pair is the returned one times e^{log_scale}; `log_scale` is 0
/// except for z ≤ −(20+ν²)².
pub fn bessel_entire_scaled(nu: f64, z: f64) -> Result<(BesselEntirePair, f64)> {
    check_order(nu)?;
    let (b, db, ls) = b_pair(nu, z);
    Ok((
        BesselEntirePair {
            b,
            a: 2.0 * z * db + nu * b,
            nu,
        },
        ls,
    ))
}

/// B_ν(z) and A_ν(z) for any real z.
pub fn bessel_entire(nu: f64, z: f64) -> Result<BesselEntirePair> {
    let (p, ls) = bessel_entire_scaled(nu, z)?;
    if ls == 0.0 {
        return Ok(p);
    }
    let f = ls.exp();
    Ok(BesselEntirePair {
        b: p.b * f,
        a: p.a * f,
        nu,
    })
}

/// B_ν^{(m)}(z) for m = 0..=4, scaled like [`bessel_entire_scaled`].
pub fn bessel_entire_derivatives(nu: f64, z: f64) -> Result<([f64; 5], f64)> {
    check_order(nu)?;
    if z.abs() <= SERIES_POS {
        // B_ν^{(m)} = (−1/2)^m B_{ν+m} keeps the origin regular.
        let mut d = [0.0; 5];
        let mut f = 1.0;
        for (m, slot) in d.iter_mut().enumerate() {
            *slot = f * series(nu + m as f64, z).0;
            f *= -0.5;
        }
        return Ok((d, 0.0));
    }
    let (b, db, ls) = b_pair(nu, z);
    let d2 = -((nu + 1.0) * db + 0.25 * b) / z;
    let d3 = -((nu + 2.0) * d2 + 0.25 * db) / z;
    let d4 = -((nu + 3.0) * d3 + 0.25 * d2) / z;
    Ok(([b, db, d2, d3, d4], ls))
}

/// J_ν(x) and J′_ν(x) for x > 0.
pub fn bessel_j(nu: f64, x: f64) -> Result<(f64, f64)> {
    check_order(nu)?;
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::invalid(
            "x",
            format!("argument must be positive, got {x}"),
        ));
    }
    let z = x * x;
    if z >= asymptotic_radius(nu) {
        let j = hankel_j(nu, x);
        let j1 = hankel_j(nu + 1.0, x);
        return Ok((j, nu / x * j - j1));
    }
    let (b, db, _) = b_pair(nu, z);
    let xn = x.powf(nu);
    // J = x^ν B(x²), J′ = x^{ν−1}(2x²B′ + νB)
    Ok((xn * b, xn / x * (2.0 * z * db + nu * b)))
}

fn mcmahon(nu: f64, k: usize) -> f64 {
    let mu = 4.0 * nu * nu;
    let beta = (k as f64 + 0.5 * nu - 0.25) * PI;
    let e = 8.0 * beta;
    beta - (mu - 1.0) / e - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e * e * e)
}

/// The k-th positive zero j_{ν,k} of J_ν.
pub fn bessel_zero(nu: f64, k: usize) -> Result<f64> {
    check_order(nu)?;
    if k == 0 {
        return Err(Error::invalid("k", "zeros are indexed from 1"));
    }
    let j = |x: f64| bessel_j(nu, x).expect("validated order");
    let (lo, hi, guess) = if k <= 50 || nu * nu > 0.1 * k as f64 {
        // consecutive zeros are more than 2 apart, so a 0.5 scan cannot
        // step over a pair
        let step = 0.5;
        let mut x = 1e-3;
        let mut f = j(x).0;
        let mut count = 0;
        loop {
            let xn = x + step;
            let fn_ = j(xn).0;
            if fn_ == 0.0 || fn_.signum() != f.signum() {
                count += 1;
                if count == k {
                    break (x, xn, 0.5 * (x + xn));
                }
            }
            x = xn;
            f = fn_;
        }
    } else {
        let g = mcmahon(nu, k);
        (g - 1.0, g + 1.0, g)
    };
    newton_bracketed(j, lo, hi, guess, 1e-14 * (1.0 + guess))
}
