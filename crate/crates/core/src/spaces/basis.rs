//! Points ωₙ with φ(ωₙ) = α + πn; their normalized kernels form an
//! orthonormal basis (for all but at most one α).

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use super::phase::e_components;
use super::zeros::{bessel_zero_sq, nearest_airy_zero, nearest_bessel_zero_sq};
use super::SpaceSpec;
use crate::error::{Error, Result};
use crate::numeric::roots::brent;
use crate::specfun::airy_zero;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisPoints {
    pub alpha: f64,
    pub points: Vec<f64>,
    /// n of the first stored point.
    pub index_offset: i64,
    /// True when the points are all basis points of the space.
    pub exhaustive: bool,
}

impl BasisPoints {
    /// Index n of the i-th stored point.
    pub fn index(&self, i: usize) -> i64 {
        self.index_offset + i as i64
    }
}

/// |E|·sin(φ − α) up to a positive factor; vanishes exactly at the basis
/// points.
fn shifted_sine(space: &SpaceSpec, alpha: f64, x: f64) -> Result<f64> {
    let (a, b, _) = e_components(space, x)?;
    let (s, c) = alpha.sin_cos();
    Ok(b * c - a * s)
}

fn solve(space: &SpaceSpec, alpha: f64, lo: f64, hi: f64) -> Result<f64> {
    let mut failure = None;
    let r = brent(
        |x| match shifted_sine(space, alpha, x) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        lo,
        hi,
        1e-15 * lo.abs().max(hi.abs()).max(1e-3),
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(r),
    }
}

/// Basis points inside [x_lo, x_hi].
///
/// Rational spaces accept infinite bounds and return all n points; α = 0 is
/// rejected there because only n − 1 points exist. For Airy and Bessel
/// spaces α = 0 gives the zeros of Ai and of B_ν, whose kernels are known to
/// be complete; other α are accepted with a logged warning.
pub fn basis_points(space: &SpaceSpec, alpha: f64, x_lo: f64, x_hi: f64) -> Result<BasisPoints> {
    space.validate()?;
    if !(0.0..PI).contains(&alpha) {
        return Err(Error::invalid(
            "alpha",
            format!("must lie in [0, π), got {alpha}"),
        ));
    }
    if !(x_lo < x_hi) {
        return Err(Error::invalid(
            "interval",
            format!("empty window [{x_lo}, {x_hi}]"),
        ));
    }
    if !space.is_finite_dimensional() && !(x_lo.is_finite() && x_hi.is_finite()) {
        return Err(Error::invalid(
            "interval",
            "window must be bounded for this family",
        ));
    }
    match *space {
        SpaceSpec::PaleyWiener { a } => {
            let first = ((a * x_lo - alpha) / PI).ceil() as i64;
            let last = ((a * x_hi - alpha) / PI).floor() as i64;
            let points = (first..=last)
                .map(|n| (alpha + PI * n as f64) / a)
                .collect();
            Ok(BasisPoints {
                alpha,
                points,
                index_offset: first,
                exhaustive: false,
            })
        }
        SpaceSpec::Rational { a, n } => {
            if alpha == 0.0 {
                return Err(Error::invalid(
                    "alpha",
                    "alpha = 0 is exceptional for the rational family (only n - 1 points)",
                ));
            }
            let nf = n as f64;
            let all: Vec<(i64, f64)> = (0..n as i64)
                .map(|m| (m, a * ((alpha + PI * m as f64) / nf - FRAC_PI_2).tan()))
                .collect();
            let inside: Vec<_> = all
                .iter()
                .filter(|(_, w)| *w >= x_lo && *w <= x_hi)
                .collect();
            let index_offset = inside.first().map_or(0, |p| p.0);
            Ok(BasisPoints {
                alpha,
                points: inside.iter().map(|p| p.1).collect(),
                index_offset,
                exhaustive: inside.len() == n as usize,
            })
        }
        SpaceSpec::Airy => {
            if alpha != 0.0 {
                log::warn!("Airy basis with alpha = {alpha}; completeness is proven for alpha = 0");
            }
            airy_points(space, alpha, x_lo, x_hi)
        }
        SpaceSpec::Bessel { nu } => {
            if alpha != 0.0 {
                log::warn!(
                    "Bessel basis with alpha = {alpha}; completeness is proven for alpha = 0"
                );
            }
            bessel_points(space, nu, alpha, x_lo, x_hi)
        }
    }
}

/// Point with φ = α − mπ: the zero a_{m+1} when α = 0, otherwise the root in
/// the arch (a_{m+1}, a_m), with a_0 = +∞.
fn airy_point(space: &SpaceSpec, alpha: f64, m: usize) -> Result<f64> {
    let left = airy_zero(m + 1);
    if alpha == 0.0 {
        return Ok(left);
    }
    let right = if m == 0 {
        let mut r = 1.0;
        while shifted_sine(space, alpha, r)? <= 0.0 {
            r *= 2.0;
            if r > 1e300 {
                return Err(Error::Root(format!(
                    "no Airy basis point for alpha = {alpha}"
                )));
            }
        }
        r
    } else {
        airy_zero(m)
    };
    solve(space, alpha, left, right)
}

fn airy_points(space: &SpaceSpec, alpha: f64, lo: f64, hi: f64) -> Result<BasisPoints> {
    let mut m = if hi < airy_zero(1) {
        nearest_airy_zero(hi).0.saturating_sub(2)
    } else {
        0
    };
    let mut pts = Vec::new();
    let mut first_m = None;
    loop {
        let w = airy_point(space, alpha, m)?;
        if w < lo {
            break;
        }
        if w <= hi {
            pts.push(w);
            first_m.get_or_insert(m);
        }
        m += 1;
    }
    pts.reverse();
    // n = −m; after reversal the first point has the largest m
    let index_offset = -((first_m.unwrap_or(m) + pts.len()) as i64 - 1);
    Ok(BasisPoints {
        alpha,
        points: pts,
        index_offset,
        exhaustive: false,
    })
}

/// Point with φ = α + πn (n ≥ −1), if it exists.
fn bessel_point(space: &SpaceSpec, nu: f64, alpha: f64, n: i64) -> Result<Option<f64>> {
    if n >= 0 {
        let left = bessel_zero_sq(nu, n as usize + 1);
        if alpha == 0.0 {
            return Ok(Some(left));
        }
        let right = bessel_zero_sq(nu, n as usize + 2);
        return solve(space, alpha, left, right).map(Some);
    }
    // left of the first zero φ only covers (φ(−∞), 0)
    if alpha == 0.0 {
        return Ok(None);
    }
    let right = bessel_zero_sq(nu, 1);
    let mut left = -1.0;
    while shifted_sine(space, alpha, left)? <= 0.0 {
        left *= 10.0;
        if left < -1e300 {
            return Ok(None);
        }
    }
    solve(space, alpha, left, right).map(Some)
}

fn bessel_points(space: &SpaceSpec, nu: f64, alpha: f64, lo: f64, hi: f64) -> Result<BasisPoints> {
    let mut n = if lo > 0.0 {
        nearest_bessel_zero_sq(nu, lo).0 as i64 - 3
    } else {
        -1
    }
    .max(-1);
    let mut pts = Vec::new();
    let mut first_n = None;
    loop {
        if let Some(w) = bessel_point(space, nu, alpha, n)? {
            if w > hi {
                break;
            }
            if w >= lo {
                pts.push(w);
                first_n.get_or_insert(n);
            }
        }
        n += 1;
    }
    Ok(BasisPoints {
        alpha,
        points: pts,
        index_offset: first_n.unwrap_or(0),
        exhaustive: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::phase;

    #[test]
    fn paley_wiener_integers() {
        let b = basis_points(&SpaceSpec::PaleyWiener { a: PI }, 0.0, -5.0, 5.0).unwrap();
        assert_eq!(b.index_offset, -5);
        assert_eq!(b.points.len(), 11);
        for (i, w) in b.points.iter().enumerate() {
            assert!((w - (i as f64 - 5.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn airy_zero_basis() {
        let a10 = airy_zero(10);
        let b = basis_points(&SpaceSpec::Airy, 0.0, a10 - 1e-9, 0.0).unwrap();
        assert_eq!(b.points.len(), 10);
        assert_eq!(b.points[0], a10);
        assert_eq!(b.index_offset, -9);
        assert_eq!(b.points[9], airy_zero(1));
    }

    #[test]
    fn rational_count_and_phases() {
        let sp = SpaceSpec::Rational { a: 1.0, n: 4 };
        let b = basis_points(&sp, PI / 8.0, f64::NEG_INFINITY, f64::INFINITY).unwrap();
        assert!(b.exhaustive);
        assert_eq!(b.points.len(), 4);
        for (i, w) in b.points.iter().enumerate() {
            let p = phase(&sp, *w).unwrap();
            assert!((p - PI / 8.0 - PI * b.index(i) as f64).abs() < 1e-12);
        }
        assert!(basis_points(&sp, 0.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn generic_alpha_phases() {
        for sp in [SpaceSpec::Airy, SpaceSpec::Bessel { nu: 0.3 }] {
            let b = basis_points(&sp, 1.1, -30.0, 600.0).unwrap();
            assert!(b.points.len() > 5);
            for (i, w) in b.points.iter().enumerate() {
                let p = phase(&sp, *w).unwrap();
                assert!(
                    (p - 1.1 - PI * b.index(i) as f64).abs() < 1e-10,
                    "{sp} {i} {w} {p}"
                );
            }
        }
    }
}
