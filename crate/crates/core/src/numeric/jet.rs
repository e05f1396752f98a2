//! Truncated derivative jets: `[f, f', f'', f''']` at a point.
//!
//! Arithmetic follows the Leibniz and Faà di Bruno rules, so composing closed
//! forms through `Jet` yields exact derivatives up to rounding.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet(pub [f64; 4]);

impl Jet {
    pub const fn constant(c: f64) -> Self {
        Jet([c, 0.0, 0.0, 0.0])
    }

    /// The identity function evaluated at `x`.
    pub const fn variable(x: f64) -> Self {
        Jet([x, 1.0, 0.0, 0.0])
    }

    pub fn value(&self) -> f64 {
        self.0[0]
    }

    pub fn d(&self, k: usize) -> f64 {
        self.0[k]
    }

    /// Derivative jet; the top slot becomes unknown and is zeroed.
    pub fn shift(&self) -> Self {
        Jet([self.0[1], self.0[2], self.0[3], 0.0])
    }

    /// Composes an outer scalar function, given its derivatives `h0..h3` at
    /// `self.value()`.
    pub fn compose(&self, h: [f64; 4]) -> Self {
        let [_, u1, u2, u3] = self.0;
        Jet([
            h[0],
            h[1] * u1,
            h[2] * u1 * u1 + h[1] * u2,
            h[3] * u1 * u1 * u1 + 3.0 * h[2] * u1 * u2 + h[1] * u3,
        ])
    }

    pub fn recip(&self) -> Self {
        let v = self.0[0];
        let r = 1.0 / v;
        self.compose([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }

    pub fn powf(&self, p: f64) -> Self {
        let v = self.0[0];
        let f0 = v.powf(p);
        self.compose([
            f0,
            p * f0 / v,
            p * (p - 1.0) * f0 / (v * v),
            p * (p - 1.0) * (p - 2.0) * f0 / (v * v * v),
        ])
    }

    pub fn powi(&self, n: i32) -> Self {
        let v = self.0[0];
        let p = n as f64;
        let f0 = v.powi(n);
        let f1 = if n == 0 { 0.0 } else { p * v.powi(n - 1) };
        let f2 = if n == 0 || n == 1 {
            0.0
        } else {
            p * (p - 1.0) * v.powi(n - 2)
        };
        let f3 = if (0..=2).contains(&n) {
            0.0
        } else {
            p * (p - 1.0) * (p - 2.0) * v.powi(n - 3)
        };
        self.compose([f0, f1, f2, f3])
    }

    pub fn sqrt(&self) -> Self {
        self.powf(0.5)
    }

    pub fn exp(&self) -> Self {
        let e = self.0[0].exp();
        self.compose([e, e, e, e])
    }

    pub fn ln(&self) -> Self {
        let v = self.0[0];
        self.compose([v.ln(), 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v)])
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.0[0].sin_cos();
        self.compose([s, c, -s, -c])
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.0[0].sin_cos();
        self.compose([c, -s, -c, s])
    }

    pub fn scale(&self, k: f64) -> Self {
        Jet(self.0.map(|v| v * k))
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet([
            self.0[0] + o.0[0],
            self.0[1] + o.0[1],
            self.0[2] + o.0[2],
            self.0[3] + o.0[3],
        ])
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet([
            self.0[0] - o.0[0],
            self.0[1] - o.0[1],
            self.0[2] - o.0[2],
            self.0[3] - o.0[3],
        ])
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let [a0, a1, a2, a3] = self.0;
        let [b0, b1, b2, b3] = o.0;
        Jet([
            a0 * b0,
            a1 * b0 + a0 * b1,
            a2 * b0 + 2.0 * a1 * b1 + a0 * b2,
            a3 * b0 + 3.0 * a2 * b1 + 3.0 * a1 * b2 + a0 * b3,
        ])
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, k: f64) -> Jet {
        self.scale(k)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, k: f64) -> Jet {
        let mut j = self;
        j.0[0] += k;
        j
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn quotient_matches_hand_derivatives() {
        // f(x) = sin(x) / (1 + x^2) at x = 0.7
        let x = Jet::variable(0.7);
        let f = x.sin() / (x * x + 1.0);
        let h = 1e-3;
        let g = |t: f64| t.sin() / (1.0 + t * t);
        let d1 = (g(0.7 - 2.0 * h) - 8.0 * g(0.7 - h) + 8.0 * g(0.7 + h) - g(0.7 + 2.0 * h))
            / (12.0 * h);
        assert!(close(f.d(1), d1, 1e-10));
        let d2 = (g(0.7 + h) - 2.0 * g(0.7) + g(0.7 - h)) / (h * h);
        assert!(close(f.d(2), d2, 1e-6));
    }

    #[test]
    fn powf_and_exp_chain() {
        let x = Jet::variable(2.0);
        let f = x.powf(1.5).exp();
        // d/dx exp(x^1.5) = 1.5 x^0.5 exp(x^1.5)
        let e = 2f64.powf(1.5).exp();
        assert!(close(f.d(1), 1.5 * 2f64.sqrt() * e, 1e-14));
        let third = x.powi(3);
        assert_eq!(third.0, [8.0, 12.0, 12.0, 6.0]);
    }
}
