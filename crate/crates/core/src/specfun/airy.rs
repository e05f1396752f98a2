//! Airy function Ai and its derivative on the real line, plus the zeros of
//! Ai and Ai′.
//!
//! On [−12, 10] values come from a table of anchors spaced 0.25 apart and a
//! local Taylor expansion of u″ = xu around the nearest anchor. The negative
//! anchors are stepped outward from the exact values at 0; the positive ones
//! are stepped inward from the asymptotic value at 10, the direction in which
//! Ai dominates. Outside the table the classical asymptotic expansions are
//! used.

use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::OnceLock;

use crate::numeric::gamma::gamma;
use crate::numeric::roots::newton_bracketed;

const GRID_LO: f64 = -12.0;
const GRID_HI: f64 = 10.0;
const GRID_STEP: f64 = 0.25;

/// Values of Ai and Ai′ at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AiryPair {
    pub ai: f64,
    pub ai_prime: f64,
    /// Set when Ai(x) is below the smallest normal double and the pair has
    /// been flushed to zero.
    pub underflow: bool,
}

struct Anchors {
    ai: Vec<f64>,
    aip: Vec<f64>,
}

fn anchors() -> &'static Anchors {
    static TABLE: OnceLock<Anchors> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n_neg = (-GRID_LO / GRID_STEP).round() as usize;
        let n_pos = (GRID_HI / GRID_STEP).round() as usize;
        let len = n_neg + n_pos + 1;
        let mut ai = vec![0.0; len];
        let mut aip = vec![0.0; len];

        ai[n_neg] = ai_at_zero();
        aip[n_neg] = aip_at_zero();
        for i in (0..n_neg).rev() {
            let x0 = GRID_LO + (i + 1) as f64 * GRID_STEP;
            let (v, d) = taylor(x0, ai[i + 1], aip[i + 1], -GRID_STEP);
            ai[i] = v;
            aip[i] = d;
        }

        // Right of the origin the table holds e^{ζ(10)}·(Ai, Ai′).
        let (top, _) = asymptotic_positive(GRID_HI);
        ai[len - 1] = top.ai;
        aip[len - 1] = top.ai_prime;
        for i in (n_neg + 1..len - 1).rev() {
            let x0 = GRID_LO + (i + 1) as f64 * GRID_STEP;
            let (v, d) = taylor(x0, ai[i + 1], aip[i + 1], -GRID_STEP);
            ai[i] = v;
            aip[i] = d;
        }
        Anchors { ai, aip }
    })
}

fn ai_at_zero() -> f64 {
    1.0 / (3f64.powf(2.0 / 3.0) * gamma(2.0 / 3.0))
}

fn aip_at_zero() -> f64 {
    -1.0 / (3f64.cbrt() * gamma(1.0 / 3.0))
}

fn zeta(x: f64) -> f64 {
    2.0 / 3.0 * x * x.abs().sqrt()
}

/// Advances (u, u′) of u″ = xu from `x0` by `h` with the Taylor series of the
/// solution about `x0`.
pub(crate) fn taylor(x0: f64, u: f64, du: f64, h: f64) -> (f64, f64) {
    let scale = u.abs() + (du * h).abs();
    let mut prev2 = 0.0; // c_{k-1}
    let mut prev = u; // c_k
    let mut cur = du; // c_{k+1}
    let mut val = u + du * h;
    let mut der = du;
    let mut hk = h; // h^{k+1}
    let mut small = 0;
    for k in 0..80 {
        let next = (x0 * prev + prev2) / ((k + 1) as f64 * (k + 2) as f64);
        let kk = (k + 2) as f64;
        der += kk * next * hk;
        hk *= h;
        let term = next * hk;
        val += term;
        prev2 = prev;
        prev = cur;
        cur = next;
        if term.abs() <= 1e-18 * scale {
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

fn asymptotic_coeffs(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut u = vec![1.0];
    let mut v = vec![1.0];
    for k in 1..n {
        let kf = k as f64;
        let uk = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
        u.push(uk);
        v.push(-(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * uk);
    }
    (u, v)
}

pub(crate) fn coeffs() -> &'static (Vec<f64>, Vec<f64>) {
    static C: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    C.get_or_init(|| asymptotic_coeffs(40))
}

/// Sums Σ sign_k c_k t^k up to the smallest term.
fn asym_sum(c: &[f64], t: f64, alternate: bool) -> f64 {
    let mut s = 0.0;
    let mut tk = 1.0;
    let mut last = f64::INFINITY;
    for (k, ck) in c.iter().enumerate() {
        let sign = if alternate && k % 2 == 1 { -1.0 } else { 1.0 };
        let term = sign * ck * tk;
        if term.abs() > last {
            break;
        }
        s += term;
        last = term.abs();
        if last < 1e-18 * s.abs() {
            break;
        }
        tk *= t;
    }
    s
}

/// Ai and Ai′ for x ≥ 10 with the factor e^{−ζ} removed; returns the pair and
/// ζ.
fn asymptotic_positive(x: f64) -> (AiryPair, f64) {
    let z = zeta(x);
    let (u, v) = coeffs();
    let t = 1.0 / z;
    let su = asym_sum(u, t, true);
    let sv = asym_sum(v, t, true);
    let q = x.powf(0.25);
    let c = 0.5 / PI.sqrt();
    (
        AiryPair {
            ai: c * su / q,
            ai_prime: -c * q * sv,
            underflow: false,
        },
        z,
    )
}

fn asymptotic_negative(x: f64) -> AiryPair {
    let r = -x;
    let z = zeta(r);
    let (u, v) = coeffs();
    let t = 1.0 / z;
    // Even and odd parts of the alternating series.
    let split = |c: &[f64]| -> (f64, f64) {
        let mut even = 0.0;
        let mut odd = 0.0;
        let mut tk = 1.0;
        let mut last = f64::INFINITY;
        for (k, ck) in c.iter().enumerate() {
            let term = ck * tk;
            if term.abs() > last {
                break;
            }
            last = term.abs();
            let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            if k % 2 == 0 {
                even += sign * term;
            } else {
                odd += sign * term;
            }
            if last < 1e-18 {
                break;
            }
            tk *= t;
        }
        (even, odd)
    };
    let (p, q) = split(u);
    let (rr, ss) = split(v);
    let (s, c) = (z + FRAC_PI_4).sin_cos();
    let q4 = r.powf(0.25);
    let k = 1.0 / PI.sqrt();
    AiryPair {
        ai: k / q4 * (s * p - c * q),
        ai_prime: -k * q4 * (c * rr + s * ss),
        underflow: false,
    }
}

/// Ai(x) and Ai′(x), scaled by e^{ζ} with ζ = (2/3)x^{3/2} when x > 0.
///
/// Returns the pair and the logarithm of the factor that was removed, so the
/// true values are `pair * exp(log_scale)`.
pub fn airy_scaled(x: f64) -> (AiryPair, f64) {
    if x >= GRID_HI {
        let (p, z) = asymptotic_positive(x);
        return (p, -z);
    }
    if x < GRID_LO {
        return (asymptotic_negative(x), 0.0);
    }
    let t = anchors();
    let i = ((x - GRID_LO) / GRID_STEP).round() as usize;
    let x0 = GRID_LO + i as f64 * GRID_STEP;
    let (v, d) = taylor(x0, t.ai[i], t.aip[i], x - x0);
    if x0 > 0.0 {
        let zx = zeta(x);
        let f = (zx - zeta(GRID_HI)).exp();
        (
            AiryPair {
                ai: v * f,
                ai_prime: d * f,
                underflow: false,
            },
            -zx,
        )
    } else {
        (
            AiryPair {
                ai: v,
                ai_prime: d,
                underflow: false,
            },
            0.0,
        )
    }
}

/// Ai(x) and Ai′(x).
///
/// For large positive x, where Ai drops below the normal range, both values
/// are returned as zero with `underflow` set.
pub fn airy(x: f64) -> AiryPair {
    let (p, ls) = airy_scaled(x);
    if ls == 0.0 {
        return p;
    }
    let f = ls.exp();
    let ai = p.ai * f;
    let aip = p.ai_prime * f;
    if ai.abs() < f64::MIN_POSITIVE || !ai.is_normal() {
        AiryPair {
            ai: 0.0,
            ai_prime: 0.0,
            underflow: true,
        }
    } else {
        AiryPair {
            ai,
            ai_prime: aip,
            underflow: false,
        }
    }
}

fn zero_t(t: f64) -> f64 {
    let t2 = 1.0 / (t * t);
    t.powf(2.0 / 3.0)
        * (1.0
            + t2 * (5.0 / 48.0
                + t2 * (-5.0 / 36.0 + t2 * (77125.0 / 82944.0 + t2 * (-108056875.0 / 6967296.0)))))
}

fn zero_u(t: f64) -> f64 {
    let t2 = 1.0 / (t * t);
    t.powf(2.0 / 3.0)
        * (1.0
            + t2 * (-7.0 / 48.0
                + t2 * (35.0 / 288.0
                    + t2 * (-181223.0 / 207360.0 + t2 * (18683371.0 / 1244160.0)))))
}

fn refine<F: FnMut(f64) -> (f64, f64)>(mut f: F, guess: f64) -> f64 {
    let half = 0.3 * PI / guess.abs().max(1.0).sqrt();
    let (mut lo, mut hi) = (guess - half, (guess + half).min(0.0));
    let mut tries = 0;
    while f(lo).0.signum() == f(hi).0.signum() && tries < 20 {
        lo -= 0.5 * half;
        hi = (hi + 0.5 * half).min(0.0);
        tries += 1;
    }
    newton_bracketed(f, lo, hi, guess, 1e-14 * (1.0 + guess.abs()))
        .expect("Airy zero bracket from the asymptotic estimate")
}

/// The k-th zero of Ai, counting from the origin: 0 > a₁ > a₂ > ….
///
/// # Panics
/// If `k == 0`.
pub fn airy_zero(k: usize) -> f64 {
    assert!(k >= 1, "Airy zeros are indexed from 1");
    let t = 3.0 * PI * (4.0 * k as f64 - 1.0) / 8.0;
    refine(
        |x| {
            let p = airy(x);
            (p.ai, p.ai_prime)
        },
        -zero_t(t),
    )
}

/// The k-th zero of Ai′, counting from the origin: 0 > b₁ > b₂ > ….
///
/// # Panics
/// If `k == 0`.
pub fn airy_prime_zero(k: usize) -> f64 {
    assert!(k >= 1, "Airy zeros are indexed from 1");
    let t = 3.0 * PI * (4.0 * k as f64 - 3.0) / 8.0;
    let guess = if k == 1 { -1.0188 } else { -zero_u(t) };
    refine(
        |x| {
            let p = airy(x);
            (p.ai_prime, x * p.ai)
        },
        guess,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn values_at_origin() {
        let p = airy(0.0);
        assert!(rel(p.ai, 0.355_028_053_887_817_2) < 1e-15);
        assert!(rel(p.ai_prime, -0.258_819_403_792_806_8) < 1e-15);
    }

    #[test]
    fn table_meets_exact_origin_from_above() {
        // the positive anchors are stepped down from x = 10
        let (p, ls) = airy_scaled(0.2);
        let q = taylor(0.0, ai_at_zero(), aip_at_zero(), 0.2);
        assert!(rel(p.ai * ls.exp(), q.0) < 1e-14);
        assert!(rel(p.ai_prime * ls.exp(), q.1) < 1e-14);
    }

    #[test]
    fn large_positive_limit() {
        let x = 50.0f64;
        let (p, ls) = airy_scaled(x);
        assert!((ls + zeta(x)).abs() < 1e-12);
        let r = p.ai * 2.0 * PI.sqrt() * x.powf(0.25);
        assert!((r - 1.0).abs() < 1e-3);
    }

    #[test]
    fn underflow_is_flagged() {
        let p = airy(120.0);
        assert!(p.underflow);
        assert_eq!(p.ai, 0.0);
        assert!(!airy(90.0).underflow);
    }

    #[test]
    fn first_zeros() {
        assert!((airy_zero(1) + 2.338_107_410_459_767).abs() < 1e-13);
        assert!((airy_prime_zero(1) + 1.018_792_971_647_471).abs() < 1e-13);
    }
}
