//! Job configuration, command dispatch and artifact writing behind the
//! `debranges` binary.
//!
//! A job is fully described by a [`JobConfig`]; every artifact echoes it, so
//! feeding the echoed JSON back through `--config` reproduces the output.

mod args;
mod jobs;
mod output;
mod verify;

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spaces::{Family, SpaceSpec};

pub use args::{parse_interval, CliArgs};
pub use jobs::linspace;
pub use output::{num, table_path, Report, Table};
pub use verify::{verification_checks, Check};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Intensity,
    Sample,
    Zeros,
    Empirical,
    Verify,
    Rigidity,
    Figures,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum MethodChoice {
    Closed,
    Ek,
    Rice,
    Mc,
}

fn default_grid() -> usize {
    200
}

fn default_samples() -> usize {
    1000
}

fn default_bins() -> usize {
    10
}

fn default_methods() -> Vec<MethodChoice> {
    vec![MethodChoice::Closed]
}

fn default_format() -> Format {
    Format::Csv
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub command: Command,
    pub space: SpaceSpec,
    /// Basis parameter; 0 by default, π/2 for rational spaces.
    #[serde(default)]
    pub alpha: Option<f64>,
    /// Family-dependent default when absent. Infinite bounds are written as
    /// the strings "-inf"/"inf".
    #[serde(default, with = "bounds")]
    pub interval: Option<(f64, f64)>,
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_bins")]
    pub bins: usize,
    #[serde(default = "default_methods")]
    pub methods: Vec<MethodChoice>,
    /// Orbit integration tolerance for `rigidity`.
    #[serde(default)]
    pub tol: Option<f64>,
    /// Worker threads for Monte Carlo jobs; logical core count when absent.
    /// Results do not depend on it.
    #[serde(default)]
    pub workers: Option<usize>,
    /// Orbit constants for `rigidity`.
    #[serde(default)]
    pub orbits: Option<Vec<f64>>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default = "default_format")]
    pub format: Format,
}

mod bounds {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Bound {
        Num(f64),
        Text(String),
    }

    fn to_bound(v: f64) -> Bound {
        if v.is_finite() {
            Bound::Num(v)
        } else {
            Bound::Text(format!("{v}"))
        }
    }

    fn from_bound<E: serde::de::Error>(b: Bound) -> Result<f64, E> {
        match b {
            Bound::Num(v) => Ok(v),
            Bound::Text(s) => s
                .parse()
                .map_err(|_| E::custom(format!("invalid interval bound {s:?}"))),
        }
    }

    pub fn serialize<S: Serializer>(v: &Option<(f64, f64)>, s: S) -> Result<S::Ok, S::Error> {
        v.map(|(lo, hi)| (to_bound(lo), to_bound(hi))).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<(f64, f64)>, D::Error> {
        match Option::<(Bound, Bound)>::deserialize(d)? {
            None => Ok(None),
            Some((lo, hi)) => Ok(Some((from_bound(lo)?, from_bound(hi)?))),
        }
    }
}

impl JobConfig {
    pub fn new(command: Command, space: SpaceSpec) -> Self {
        JobConfig {
            command,
            space,
            alpha: None,
            interval: None,
            grid: default_grid(),
            samples: default_samples(),
            seed: 0,
            bins: default_bins(),
            methods: default_methods(),
            tol: None,
            workers: None,
            orbits: None,
            out: None,
            format: default_format(),
        }
    }

    /// Parses a config, or the echoed config of a JSON artifact.
    pub fn from_json(text: &str) -> Result<Self> {
        let mut v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::invalid("config", e.to_string()))?;
        if v.get("schema_version").is_some() {
            if let Some(c) = v.get_mut("config") {
                v = c.take();
            }
        }
        serde_json::from_value(v).map_err(|e| Error::invalid("config", e.to_string()))
    }

    /// Reads a config file, a JSON artifact or a CSV artifact.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::invalid("config", format!("{}: {e}", path.display())))?;
        if text.starts_with('#') {
            let line = text
                .lines()
                .take_while(|l| l.starts_with('#'))
                .find_map(|l| l.strip_prefix("# config: "))
                .ok_or_else(|| Error::invalid("config", "CSV file has no echoed config"))?;
            return Self::from_json(line);
        }
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn alpha_or_default(&self) -> f64 {
        self.alpha.unwrap_or(match self.space {
            SpaceSpec::Rational { .. } => PI / 2.0,
            _ => 0.0,
        })
    }

    pub fn interval_or_default(&self) -> (f64, f64) {
        self.interval.unwrap_or(match self.space.family() {
            Family::PaleyWiener => (0.0, 10.0),
            Family::Airy => (-20.0, 5.0),
            Family::Bessel => (-20.0, 100.0),
            Family::Rational => (-10.0, 10.0),
        })
    }

    pub fn tol_or_default(&self) -> f64 {
        self.tol.unwrap_or(crate::rigidity::DEFAULT_TOL)
    }

    pub fn orbits_or_default(&self) -> Vec<f64> {
        self.orbits
            .clone()
            .unwrap_or_else(|| vec![8.5, 10.0, 100.0, 1e4])
    }

    pub fn validate(&self) -> Result<()> {
        self.space.validate()?;
        if let Some(a) = self.alpha {
            if !(0.0..PI).contains(&a) {
                return Err(Error::invalid(
                    "alpha",
                    format!("must lie in [0, π), got {a}"),
                ));
            }
        }
        let (lo, hi) = self.interval_or_default();
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::invalid(
                "interval",
                format!("need lo < hi, got {lo}:{hi}"),
            ));
        }
        let needs_finite = match self.command {
            Command::Intensity
            | Command::Figures
            | Command::Empirical
            | Command::Rigidity
            | Command::Verify => true,
            Command::Sample | Command::Zeros => !matches!(self.space, SpaceSpec::Rational { .. }),
        };
        if needs_finite && !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::invalid(
                "interval",
                "bounds must be finite for this command",
            ));
        }
        if self.grid < 2 {
            return Err(Error::invalid("grid", "need at least 2 points"));
        }
        if self.samples < 2 {
            return Err(Error::invalid("samples", "need at least 2 samples"));
        }
        if self.bins == 0 {
            return Err(Error::invalid("bins", "need at least one bin"));
        }
        if self.methods.is_empty() {
            return Err(Error::invalid("method", "no method requested"));
        }
        if let Some(t) = self.tol {
            if !(1e-12..1e-2).contains(&t) {
                return Err(Error::invalid(
                    "tol",
                    format!("must lie in [1e-12, 1e-2), got {t}"),
                ));
            }
        }
        if self.workers == Some(0) {
            return Err(Error::invalid("workers", "need at least one worker"));
        }
        if let Some(cs) = &self.orbits {
            if cs.is_empty() || cs.iter().any(|&c| !(c > 8.0 && c.is_finite())) {
                return Err(Error::invalid("orbits", "orbit constants must exceed 8"));
            }
        }
        Ok(())
    }
}

/// What a finished job produced.
#[derive(Clone, Debug)]
pub struct Outcome {
    /// False when a verification check failed.
    pub passed: bool,
    /// Files written; empty when the output went to stdout.
    pub written: Vec<PathBuf>,
    pub report: Report,
}

/// Computes the job's report without writing anything.
pub fn execute(config: &JobConfig) -> Result<Report> {
    config.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = config.workers {
        builder = builder.num_threads(w);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Numeric(format!("worker pool: {e}")))?;
    pool.install(|| jobs::dispatch(config))
}

/// Runs the job and writes its artifacts to `config.out`, or to stdout.
pub fn run(config: &JobConfig) -> Result<Outcome> {
    let report = execute(config)?;
    let written = match &config.out {
        Some(path) => output::write_files(config, &report, path)?,
        None => {
            let stdout = std::io::stdout();
            output::write_stream(config, &report, &mut stdout.lock())?;
            Vec::new()
        }
    };
    Ok(Outcome {
        passed: report.passed,
        written,
        report,
    })
}

/// Exit status for a finished or failed job: 0 success, 1 invalid input,
/// 2 failed verification, 3 numeric or I/O failure.
pub fn exit_code(result: &Result<Outcome>) -> i32 {
    match result {
        Ok(o) if o.passed => 0,
        Ok(_) => 2,
        Err(Error::Invalid { .. }) => 1,
        Err(_) => 3,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trips_through_json() {
        let mut c = JobConfig::new(Command::Zeros, SpaceSpec::Rational { a: 2.0, n: 7 });
        c.interval = Some((f64::NEG_INFINITY, f64::INFINITY));
        c.methods = vec![MethodChoice::Closed, MethodChoice::Mc];
        c.out = Some(PathBuf::from("z.json"));
        let text = c.to_json();
        assert!(text.contains("\"-inf\""));
        assert_eq!(JobConfig::from_json(&text).unwrap(), c);
    }

    #[test]
    fn minimal_config_takes_defaults() {
        let c = JobConfig::from_json(
            r#"{"command":"verify","space":{"family":"paley_wiener","a":1.0}}"#,
        )
        .unwrap();
        assert_eq!(c.grid, 200);
        assert_eq!(c.methods, vec![MethodChoice::Closed]);
        assert_eq!(c.format, Format::Csv);
        assert_eq!(c.interval_or_default(), (0.0, 10.0));
    }

    #[test]
    fn invalid_space_names_field() {
        let e =
            JobConfig::from_json(r#"{"command":"verify","space":{"family":"bessel","nu":-1.0}}"#)
                .unwrap_err();
        assert!(matches!(e, Error::Invalid { .. }));
        assert!(e.to_string().contains("nu"), "{e}");
    }

    #[test]
    fn validation_names_field() {
        let mut c = JobConfig::new(Command::Intensity, SpaceSpec::Airy);
        c.interval = Some((3.0, 1.0));
        assert!(c.validate().unwrap_err().to_string().contains("interval"));
        c.interval = None;
        c.grid = 1;
        assert!(c.validate().unwrap_err().to_string().contains("grid"));
        c.grid = 10;
        c.alpha = Some(4.0);
        assert!(c.validate().unwrap_err().to_string().contains("alpha"));
    }
}
