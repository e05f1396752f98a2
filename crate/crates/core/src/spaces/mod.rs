//! The de Branges spaces: phase functions, reproducing kernels and the
//! orthonormal bases of normalized kernels.

mod basis;
mod kernel;
mod phase;
mod zeros;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use basis::{basis_points, BasisPoints};
pub use kernel::{kernel, kernel_scaled, normalized_kernel, schwarzian_fd};
pub use phase::{e_components, phase, phase_jet, PhaseJet};
pub use zeros::asymptotic_point;

pub(crate) use phase::phase_derivatives;

/// Largest Bessel order accepted; the moderate-argument evaluation cost grows
/// like ν².
pub const MAX_BESSEL_ORDER: f64 = 20.0;

/// Which space a computation runs in.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpace", into = "RawSpace")]
pub enum SpaceSpec {
    /// E(z) = e^{−iaz}; functions of exponential type a.
    PaleyWiener { a: f64 },
    /// E = Ai′ − i·Ai.
    Airy,
    /// E_ν = A_ν − i·B_ν built from J_ν.
    Bessel { nu: f64 },
    /// E(z) = (z + ia)ⁿ up to sign; polynomials of degree below n.
    Rational { a: f64, n: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    PaleyWiener,
    Airy,
    Bessel,
    Rational,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpace {
    family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    nu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<i64>,
}

impl TryFrom<RawSpace> for SpaceSpec {
    type Error = Error;

    fn try_from(r: RawSpace) -> Result<Self> {
        SpaceSpec::from_parts(r.family, r.a, r.nu, r.n)
    }
}

impl From<SpaceSpec> for RawSpace {
    fn from(s: SpaceSpec) -> Self {
        let family = s.family();
        match s {
            SpaceSpec::PaleyWiener { a } => RawSpace {
                family,
                a: Some(a),
                nu: None,
                n: None,
            },
            SpaceSpec::Airy => RawSpace {
                family,
                a: None,
                nu: None,
                n: None,
            },
            SpaceSpec::Bessel { nu } => RawSpace {
                family,
                a: None,
                nu: Some(nu),
                n: None,
            },
            SpaceSpec::Rational { a, n } => RawSpace {
                family,
                a: Some(a),
                nu: None,
                n: Some(n as i64),
            },
        }
    }
}

fn forbid<T>(field: &'static str, v: Option<T>, family: Family) -> Result<()> {
    if v.is_some() {
        return Err(Error::invalid(
            field,
            format!("not a parameter of the {family} family"),
        ));
    }
    Ok(())
}

fn require<T>(field: &'static str, v: Option<T>, family: Family) -> Result<T> {
    v.ok_or_else(|| Error::invalid(field, format!("required by the {family} family")))
}

impl SpaceSpec {
    /// Builds and validates a space from loose parameters, rejecting
    /// parameters that do not belong to the family.
    pub fn from_parts(
        family: Family,
        a: Option<f64>,
        nu: Option<f64>,
        n: Option<i64>,
    ) -> Result<Self> {
        let s = match family {
            Family::PaleyWiener => {
                forbid("nu", nu, family)?;
                forbid("n", n, family)?;
                SpaceSpec::PaleyWiener {
                    a: require("a", a, family)?,
                }
            }
            Family::Airy => {
                forbid("a", a, family)?;
                forbid("nu", nu, family)?;
                forbid("n", n, family)?;
                SpaceSpec::Airy
            }
            Family::Bessel => {
                forbid("a", a, family)?;
                forbid("n", n, family)?;
                SpaceSpec::Bessel {
                    nu: require("nu", nu, family)?,
                }
            }
            Family::Rational => {
                forbid("nu", nu, family)?;
                let n = require("n", n, family)?;
                if !(2..=u32::MAX as i64).contains(&n) {
                    return Err(Error::invalid(
                        "n",
                        format!("exponent must be >= 2, got {n}"),
                    ));
                }
                SpaceSpec::Rational {
                    a: require("a", a, family)?,
                    n: n as u32,
                }
            }
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            SpaceSpec::PaleyWiener { a } | SpaceSpec::Rational { a, .. } => {
                if !(a > 0.0 && a.is_finite()) {
                    return Err(Error::invalid(
                        "a",
                        format!("must be positive and finite, got {a}"),
                    ));
                }
                if let SpaceSpec::Rational { n, .. } = *self {
                    if n < 2 {
                        return Err(Error::invalid(
                            "n",
                            format!("exponent must be >= 2, got {n}"),
                        ));
                    }
                }
            }
            SpaceSpec::Airy => {}
            SpaceSpec::Bessel { nu } => {
                if !(-0.5..=MAX_BESSEL_ORDER).contains(&nu) {
                    return Err(Error::invalid(
                        "nu",
                        format!("order must lie in [-1/2, {MAX_BESSEL_ORDER}], got {nu}"),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn family(&self) -> Family {
        match self {
            SpaceSpec::PaleyWiener { .. } => Family::PaleyWiener,
            SpaceSpec::Airy => Family::Airy,
            SpaceSpec::Bessel { .. } => Family::Bessel,
            SpaceSpec::Rational { .. } => Family::Rational,
        }
    }

    /// True when the space is finite dimensional, so that a basis is a finite
    /// list of points covering the whole line.
    pub fn is_finite_dimensional(&self) -> bool {
        matches!(self, SpaceSpec::Rational { .. })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::PaleyWiener => "paley_wiener",
            Family::Airy => "airy",
            Family::Bessel => "bessel",
            Family::Rational => "rational",
        })
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceSpec::PaleyWiener { a } => write!(f, "paley_wiener(a={a})"),
            SpaceSpec::Airy => write!(f, "airy"),
            SpaceSpec::Bessel { nu } => write!(f, "bessel(nu={nu})"),
            SpaceSpec::Rational { a, n } => write!(f, "rational(a={a}, n={n})"),
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "paley_wiener" | "pw" => Ok(Family::PaleyWiener),
            "airy" => Ok(Family::Airy),
            "bessel" => Ok(Family::Bessel),
            "rational" => Ok(Family::Rational),
            other => Err(Error::invalid("space", format!("unknown family '{other}'"))),
        }
    }
}
