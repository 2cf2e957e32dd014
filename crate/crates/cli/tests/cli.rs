//! End-to-end checks against the built binary.

use std::process::{Command, Output};

use freqpred_cli::output::render;
use freqpred_cli::{curve_rows, Format};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freqpred"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn coeffs_csv() {
    let out = run(&["coeffs", "--a-max", "0"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "a,i,alpha,note\n0,1,1,\n0,2,-2,\n");
}

#[test]
fn accuracy_reports_agreement() {
    let out = run(&[
        "accuracy", "--k", "70", "--theta", "9/20", "--path", "all", "--digits", "4",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "path,k,theta,pi,exact,agree");
    assert_eq!(lines.len(), 6);
    for line in &lines[1..] {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[3], "0.5298");
        assert_eq!(fields[5], "true");
    }
}

#[test]
fn threshold_output_and_exit_codes() {
    let out = run(&["threshold", "--theta", "9/20", "--target", "0.53"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "theta,target,k\n9/20,53/100,71\n");

    let out = run(&["threshold", "--theta", "9/20", "--target", "0.56"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).ends_with("unreachable\n"));

    let out = run(&["threshold", "--theta", "nine", "--target", "0.56"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn domain_and_parse_errors_are_nonzero() {
    for args in [
        vec!["accuracy", "--k", "3", "--theta", "1.5"],
        vec![
            "accuracy", "--k", "0", "--theta", "0.3", "--path", "expanded",
        ],
        vec!["posterior", "--prior", "beta:1", "--k", "2", "--n", "1"],
        vec!["posterior", "--prior", "beta:1,1", "--k", "2", "--n", "3"],
        vec!["simulate", "--source", "0.5", "--k-max", "3", "--reps", "0"],
        vec!["curve", "--theta", "0.4", "--k-max", "0"],
    ] {
        let out = run(&args);
        assert!(!out.status.success(), "{args:?} should fail");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn unwritable_destination() {
    let out = run(&[
        "coeffs",
        "--a-max",
        "2",
        "--out",
        "/nonexistent-dir/coeffs.csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nonexistent-dir"));
}

#[test]
fn writes_to_file() {
    let dir = std::env::temp_dir().join(format!("freqpred-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("curve.json");
    let out = run(&[
        "curve",
        "--theta",
        "0.4",
        "--k-max",
        "5",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    let rows = doc.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0]["k"], 1);
    assert_eq!(rows[0]["ideal"], "0.6");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn posterior_json() {
    let out = run(&[
        "posterior",
        "--prior",
        "beta:1,1",
        "--k",
        "4",
        "--n",
        "3",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc[0]["posterior_mean_exact"], "2/3");
    assert_eq!(doc[0]["phi"], "1");
    assert_eq!(doc[0]["probability_exact"], "2/3");
}

#[test]
fn simulate_is_deterministic() {
    let args = [
        "simulate", "--source", "0.5", "--k-max", "10", "--reps", "100000", "--seed", "1",
    ];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let text = stdout(&first);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "k,hits,trials,estimate,stderr,analytic_pi,z"
    );
    for line in lines {
        let z: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(z.abs() <= 3.0, "{line}");
    }
    let other = run(&[
        "simulate", "--source", "0.5", "--k-max", "10", "--reps", "100000", "--seed", "2",
    ]);
    assert_ne!(first.stdout, other.stdout);
}

#[test]
fn simulate_with_prior_has_no_analytic_column_values() {
    let out = run(&[
        "simulate", "--source", "beta:2,2", "--k-max", "3", "--reps", "500", "--seed", "4",
    ]);
    assert!(out.status.success());
    for line in stdout(&out).lines().skip(1) {
        assert!(line.ends_with(",,"), "{line}");
    }
}

#[test]
fn csv_round_trips_byte_for_byte() {
    for bytes in [
        render(Format::Csv, &curve_rows("9/20", 40, 10).unwrap()).unwrap(),
        stdout(&run(&["coeffs", "--a-max", "6"])).into_bytes(),
        stdout(&run(&[
            "simulate", "--source", "1/3", "--k-max", "6", "--reps", "999", "--seed", "3",
        ]))
        .into_bytes(),
    ] {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .from_reader(bytes.as_slice());
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        for record in reader.records() {
            writer.write_record(&record.unwrap()).unwrap();
        }
        assert_eq!(writer.into_inner().unwrap(), bytes);
    }
}
