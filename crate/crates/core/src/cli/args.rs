use std::path::PathBuf;

use clap::Parser;

use super::{Command, Format, JobConfig, MethodChoice};
use crate::error::{Error, Result};
use crate::spaces::{Family, SpaceSpec};

/// Real zeros of Gaussian analytic functions on de Branges spaces.
///
/// Settings come from `--config FILE` (a job config, or any artifact written
/// by an earlier run) and are overridden by flags.
#[derive(Debug, Parser)]
#[command(name = "debranges", version)]
pub struct CliArgs {
    /// Job to run; taken from the config file when omitted.
    #[arg(value_enum)]
    pub command: Option<Command>,
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Space family: paley_wiener, airy, bessel or rational.
    #[arg(long)]
    pub space: Option<Family>,
    /// Type (Paley-Wiener) or pole distance (rational).
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Bessel order.
    #[arg(long, allow_negative_numbers = true)]
    pub nu: Option<f64>,
    /// Rational exponent.
    #[arg(long, allow_negative_numbers = true)]
    pub n: Option<i64>,
    /// Basis parameter in [0, π).
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// LO:HI; bounds may be -inf/inf where the command allows it.
    #[arg(long, value_name = "LO:HI", value_parser = parse_interval, allow_hyphen_values = true)]
    pub interval: Option<(f64, f64)>,
    #[arg(long, value_name = "N")]
    pub grid: Option<usize>,
    #[arg(long, value_name = "N")]
    pub samples: Option<usize>,
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
    #[arg(long, value_name = "N")]
    pub bins: Option<usize>,
    /// Intensity methods, comma separated.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub method: Vec<MethodChoice>,
    /// Output file; CSV jobs with several tables write one file per table
    /// next to it. Standard output when omitted.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Monte Carlo worker threads (default: logical cores).
    #[arg(long, value_name = "N")]
    pub workers: Option<usize>,
    /// Orbit integration tolerance.
    #[arg(long, value_name = "X")]
    pub tol: Option<f64>,
    /// Orbit constants for `rigidity`, comma separated.
    #[arg(long, value_delimiter = ',', value_name = "C")]
    pub orbits: Vec<f64>,
}

pub fn parse_interval(s: &str) -> std::result::Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected LO:HI, got {s:?}"))?;
    let p = |v: &str| {
        v.trim()
            .parse::<f64>()
            .map_err(|_| format!("bad bound {v:?} in {s:?}"))
    };
    Ok((p(lo)?, p(hi)?))
}

impl CliArgs {
    /// The job config: the file's settings with the given flags applied.
    pub fn into_config(self) -> Result<JobConfig> {
        let base = self
            .config
            .as_deref()
            .map(JobConfig::from_file)
            .transpose()?;
        let command = self
            .command
            .or(base.as_ref().map(|b| b.command))
            .ok_or_else(|| Error::invalid("command", "no command given and no config file"))?;
        let space = self.space_spec(base.as_ref().map(|b| b.space))?;
        let mut c = base.unwrap_or_else(|| JobConfig::new(command, space));
        c.command = command;
        c.space = space;
        c.alpha = self.alpha.or(c.alpha);
        c.interval = self.interval.or(c.interval);
        c.grid = self.grid.unwrap_or(c.grid);
        c.samples = self.samples.unwrap_or(c.samples);
        c.seed = self.seed.unwrap_or(c.seed);
        c.bins = self.bins.unwrap_or(c.bins);
        if !self.method.is_empty() {
            c.methods = self.method;
        }
        c.out = self.out.or(c.out);
        c.format = self.format.unwrap_or(c.format);
        c.workers = self.workers.or(c.workers);
        c.tol = self.tol.or(c.tol);
        if !self.orbits.is_empty() {
            c.orbits = Some(self.orbits);
        }
        Ok(c)
    }

    fn space_spec(&self, base: Option<SpaceSpec>) -> Result<SpaceSpec> {
        let (mut a, mut nu, mut n) = (None, None, None);
        let family = match (self.space, base) {
            (None, None) => {
                return Err(Error::invalid("space", "no space given and no config file"))
            }
            (Some(f), Some(b)) if f != b.family() => f,
            (f, Some(b)) => {
                match b {
                    SpaceSpec::PaleyWiener { a: pa } => a = Some(pa),
                    SpaceSpec::Airy => {}
                    SpaceSpec::Bessel { nu: bn } => nu = Some(bn),
                    SpaceSpec::Rational { a: ra, n: rn } => {
                        a = Some(ra);
                        n = Some(rn as i64);
                    }
                }
                f.unwrap_or(b.family())
            }
            (Some(f), None) => f,
        };
        SpaceSpec::from_parts(family, self.a.or(a), self.nu.or(nu), self.n.or(n))
    }
}
