//! Fehlberg's embedded Runge-Kutta 7(8) pair for autonomous systems.

use crate::error::{Error, Result};

const A: [[f64; 12]; 13] = [
    [0.0; 12],
    [
        2.0 / 27.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        1.0 / 36.0,
        1.0 / 12.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        1.0 / 24.0,
        0.0,
        1.0 / 8.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        5.0 / 12.0,
        0.0,
        -25.0 / 16.0,
        25.0 / 16.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        1.0 / 20.0,
        0.0,
        0.0,
        1.0 / 4.0,
        1.0 / 5.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        -25.0 / 108.0,
        0.0,
        0.0,
        125.0 / 108.0,
        -65.0 / 27.0,
        125.0 / 54.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        31.0 / 300.0,
        0.0,
        0.0,
        0.0,
        61.0 / 225.0,
        -2.0 / 9.0,
        13.0 / 900.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        2.0,
        0.0,
        0.0,
        -53.0 / 6.0,
        704.0 / 45.0,
        -107.0 / 9.0,
        67.0 / 90.0,
        3.0,
        0.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        -91.0 / 108.0,
        0.0,
        0.0,
        23.0 / 108.0,
        -976.0 / 135.0,
        311.0 / 54.0,
        -19.0 / 60.0,
        17.0 / 6.0,
        -1.0 / 12.0,
        0.0,
        0.0,
        0.0,
    ],
    [
        2383.0 / 4100.0,
        0.0,
        0.0,
        -341.0 / 164.0,
        4496.0 / 1025.0,
        -301.0 / 82.0,
        2133.0 / 4100.0,
        45.0 / 82.0,
        45.0 / 164.0,
        18.0 / 41.0,
        0.0,
        0.0,
    ],
    [
        3.0 / 205.0,
        0.0,
        0.0,
        0.0,
        0.0,
        -6.0 / 41.0,
        -3.0 / 205.0,
        -3.0 / 41.0,
        3.0 / 41.0,
        6.0 / 41.0,
        0.0,
        0.0,
    ],
    [
        -1777.0 / 4100.0,
        0.0,
        0.0,
        -341.0 / 164.0,
        4496.0 / 1025.0,
        -289.0 / 82.0,
        2193.0 / 4100.0,
        51.0 / 82.0,
        33.0 / 164.0,
        12.0 / 41.0,
        0.0,
        1.0,
    ],
];

/// Eighth-order weights; the seventh-order solution differs by
/// (41/840)(k₁ + k₁₁ − k₁₂ − k₁₃)h.
const B8: [f64; 13] = [
    0.0,
    0.0,
    0.0,
    0.0,
    0.0,
    34.0 / 105.0,
    9.0 / 35.0,
    9.0 / 35.0,
    9.0 / 280.0,
    9.0 / 280.0,
    0.0,
    41.0 / 840.0,
    41.0 / 840.0,
];

/// One step of size h: (eighth-order state, error estimate per component).
pub fn step<const N: usize, F: Fn(&[f64; N]) -> [f64; N]>(
    f: &F,
    y: &[f64; N],
    h: f64,
) -> ([f64; N], [f64; N]) {
    let mut k = [[0.0; N]; 13];
    for s in 0..13 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(s) {
            let a = A[s][j];
            if a != 0.0 {
                for i in 0..N {
                    ys[i] += h * a * kj[i];
                }
            }
        }
        k[s] = f(&ys);
    }
    let mut out = *y;
    let mut err = [0.0; N];
    for i in 0..N {
        let mut acc = 0.0;
        for s in 0..13 {
            acc += B8[s] * k[s][i];
        }
        out[i] += h * acc;
        err[i] = (41.0 / 840.0) * h * (k[0][i] + k[10][i] - k[11][i] - k[12][i]);
    }
    (out, err)
}

/// Error norm relative to tol·max(1, |y|).
fn norm<const N: usize>(err: &[f64; N], y0: &[f64; N], y1: &[f64; N], tol: f64) -> f64 {
    (0..N)
        .map(|i| err[i].abs() / (tol * 1f64.max(y0[i].abs()).max(y1[i].abs())))
        .fold(0.0, f64::max)
}

/// Adaptive integrator state.
pub struct Stepper<const N: usize, F> {
    pub f: F,
    pub tol: f64,
    pub h: f64,
}

impl<const N: usize, F: Fn(&[f64; N]) -> [f64; N]> Stepper<N, F> {
    pub fn new(f: F, tol: f64, h0: f64) -> Self {
        Stepper { f, tol, h: h0 }
    }

    /// One accepted step of at most `max_h` from y at time t (t only
    /// enters the step-collapse report); returns the step taken and the new
    /// state.
    pub fn advance(&mut self, t: f64, y: &[f64; N], max_h: f64) -> Result<(f64, [f64; N])> {
        let mut h = self.h.min(max_h);
        loop {
            if !(h > 1e-14 * t.abs().max(1.0)) {
                return Err(Error::StepCollapse { t, h });
            }
            let (y1, err) = step(&self.f, y, h);
            let e = norm(&err, y, &y1, self.tol);
            let grow = if e == 0.0 {
                4.0
            } else {
                (0.9 * e.powf(-1.0 / 8.0)).clamp(0.2, 4.0)
            };
            if e <= 1.0 && y1.iter().all(|v| v.is_finite()) {
                // a step clipped by max_h says nothing about the natural size
                if h < max_h || grow < 1.0 {
                    self.h = h * grow;
                }
                return Ok((h, y1));
            }
            h *= if e.is_finite() { grow.min(0.9) } else { 0.25 };
        }
    }

    /// Integrates from (t0, y0) to t1 ≥ t0.
    pub fn run_to(&mut self, t0: f64, y0: &[f64; N], t1: f64) -> Result<[f64; N]> {
        let (mut t, mut y) = (t0, *y0);
        while t < t1 {
            let rest = t1 - t;
            let (h, yn) = self.advance(t, &y, rest)?;
            y = yn;
            t = if h == rest { t1 } else { t + h };
        }
        Ok(y)
    }
}
