//! The `debranges` binary end to end: exit codes, artifact schema and
//! replay of echoed configs.

use std::path::Path;
use std::process::{Command, Output};

use debranges::cli::{exit_code, Outcome, Report};
use debranges::intensity::rho1_closed;
use debranges::spaces::{phase_jet, SpaceSpec};
use debranges::Error;

fn debranges(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_debranges"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8(bytes.to_vec()).unwrap()
}

/// (metadata lines, header, rows) of a CSV artifact.
fn read_csv(path: &Path) -> (Vec<String>, Vec<String>, Vec<Vec<f64>>) {
    let body = std::fs::read_to_string(path).unwrap();
    let mut lines = body.lines();
    let meta: Vec<String> = lines
        .by_ref()
        .take_while(|l| l.starts_with('#'))
        .map(str::to_owned)
        .collect();
    let mut rest: Vec<&str> = body.lines().skip(meta.len()).collect();
    let header = rest.remove(0).split(',').map(str::to_owned).collect();
    let rows = rest
        .iter()
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (meta, header, rows)
}

#[test]
fn verify_paley_wiener_passes() {
    let out = debranges(&["verify", "--space", "paley_wiener", "--a", "2.5"]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let stdout = text(&out.stdout);
    let line = stdout
        .lines()
        .find(|l| l.starts_with("rho1_equals_a_over_pi_sqrt3,"))
        .expect("check row");
    assert!(line.ends_with(",true"), "{line}");
    assert!(stdout
        .lines()
        .filter(|l| !l.starts_with('#') && l.contains(','))
        .skip(1)
        .all(|l| l.ends_with(",true")));
}

#[test]
fn verify_other_families_pass() {
    for args in [
        &["verify", "--space", "airy"][..],
        &[
            "verify",
            "--space",
            "bessel",
            "--nu",
            "0.5",
            "--interval=-20:400",
        ],
        &["verify", "--space", "rational", "--a", "2", "--n", "7"],
    ] {
        let out = debranges(args);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{args:?}: {}{}",
            text(&out.stdout),
            text(&out.stderr)
        );
    }
}

#[test]
fn airy_figures() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig.csv");
    let o = debranges(&[
        "figures",
        "--space",
        "airy",
        "--interval=-20:5",
        "--grid",
        "1000",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", text(&o.stderr));
    let rho1 = |x: f64| rho1_closed(&SpaceSpec::Airy, x).unwrap();
    let phi_prime = |x: f64| phase_jet(&SpaceSpec::Airy, x).unwrap().d1;
    let figures: [(&str, &dyn Fn(f64) -> f64); 2] = [("rho1", &rho1), ("phi_prime", &phi_prime)];
    for (name, value) in figures {
        let (meta, header, rows) = read_csv(&dir.path().join(format!("fig-{name}.csv")));
        assert!(meta.iter().any(|l| l == "# schema_version: 1"));
        assert!(meta.iter().any(|l| l == &format!("# table: {name}")));
        assert!(meta.iter().any(|l| l.starts_with("# config: {")));
        assert_eq!(header, ["x", "value"]);
        assert_eq!(rows.len(), 1000);
        assert_eq!((rows[0][0], rows[999][0]), (-20.0, 5.0));
        for r in rows.iter().step_by(37) {
            let v = value(r[0]);
            assert!(
                (r[1] - v).abs() <= 1e-12 * v.abs(),
                "{name}({}) = {} vs {v}",
                r[0],
                r[1]
            );
        }
    }
}

#[test]
fn echoed_configs_reproduce_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("zeros.csv");
    let json = dir.path().join("hist.json");
    let runs: [(&Path, Vec<&str>); 2] = [
        (
            &csv,
            vec![
                "zeros",
                "--space",
                "bessel",
                "--nu",
                "3",
                "--interval=0:300",
                "--seed",
                "5",
            ],
        ),
        (
            &json,
            vec![
                "empirical",
                "--space",
                "airy",
                "--interval=-12:2",
                "--samples",
                "200",
                "--format",
                "json",
            ],
        ),
    ];
    for (path, mut args) in runs {
        let p = path.to_str().unwrap();
        args.extend(["--out", p]);
        assert_eq!(debranges(&args).status.code(), Some(0));
        let first = std::fs::read(path).unwrap();
        let replay = dir.path().join("replay");
        std::fs::rename(path, &replay).unwrap();
        let o = debranges(&["--config", replay.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", text(&o.stderr));
        assert_eq!(std::fs::read(path).unwrap(), first, "{p}");
    }
}

#[test]
fn worker_count_does_not_change_results() {
    let run = |workers: &str| {
        let o = debranges(&[
            "empirical",
            "--space",
            "paley_wiener",
            "--a",
            "3.14",
            "--samples",
            "300",
            "--workers",
            workers,
        ]);
        assert_eq!(o.status.code(), Some(0));
        // the echoed config records the worker count; the data must not
        text(&o.stdout)
            .lines()
            .filter(|l| !l.starts_with('#'))
            .map(str::to_owned)
            .collect::<Vec<_>>()
    };
    let one = run("1");
    assert!(one.len() > 10);
    assert_eq!(one, run("4"));
}

#[test]
fn invalid_input_exits_one_and_names_the_field() {
    let o = debranges(&["verify", "--space", "bessel", "--nu", "-1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(text(&o.stderr).contains("nu"), "{}", text(&o.stderr));
    let o = debranges(&["intensity", "--space", "airy", "--grid", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(text(&o.stderr).contains("grid"));
    let o = debranges(&["intensity", "--space", "nowhere"]);
    assert_eq!(o.status.code(), Some(1));
    let o = debranges(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn failure_kinds_map_to_exit_codes() {
    let report = Report::new(&serde_json::Value::Null, Vec::new());
    let outcome = |passed| {
        Ok(Outcome {
            passed,
            written: Vec::new(),
            report: report.clone(),
        })
    };
    assert_eq!(exit_code(&outcome(true)), 0);
    assert_eq!(exit_code(&outcome(false)), 2);
    assert_eq!(exit_code(&Err(Error::invalid("grid", "too small"))), 1);
    assert_eq!(exit_code(&Err(Error::Numeric("no convergence".into()))), 3);
}
