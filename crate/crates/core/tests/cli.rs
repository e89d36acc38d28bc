use std::path::{Path, PathBuf};
use std::process::Command;

use qmckay::bundled::{Z5_ORBIFOLD_JSON, Z5_RESOLUTION_JSON};
use qmckay::cli::{cmd_selftest, run_with, Outcome, VerificationReport, DEFAULT_SEED};
use qmckay::exactnum::Lanczos;
use qmckay::potential::Stage;
use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn qmckay(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("qmckay").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

struct Files {
    dir: TempDir,
}

impl Files {
    fn new() -> Self {
        let files = Files {
            dir: tempfile::tempdir().unwrap(),
        };
        files.write("orb.json", Z5_ORBIFOLD_JSON);
        files.write("res.json", Z5_RESOLUTION_JSON);
        files
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn arg(&self, name: &str) -> String {
        self.path(name).to_str().unwrap().to_string()
    }

    fn write(&self, name: &str, text: &str) -> String {
        std::fs::write(self.path(name), text).unwrap();
        self.arg(name)
    }
}

fn read_report(path: &Path) -> (String, VerificationReport) {
    let text = std::fs::read_to_string(path).unwrap();
    let report = serde_json::from_str(&text).unwrap();
    (text, report)
}

fn verify(
    files: &Files,
    orb: &str,
    res: &str,
    fh: &str,
    extra: &[&str],
) -> (Run, VerificationReport) {
    let report = files.arg("report.json");
    let (o, r) = (files.arg(orb), files.arg(res));
    let mut args = vec![
        "verify",
        "--orbifold",
        &o,
        "--resolution",
        &r,
        "--framing-hat",
        fh,
        "--m0-max",
        "15",
        "--report",
        &report,
    ];
    args.extend_from_slice(extra);
    let run = qmckay(&args);
    let (_, rep) = read_report(&files.path("report.json"));
    (run, rep)
}

#[test]
fn verify_bundled_pair() {
    let files = Files::new();
    let (run, rep) = verify(&files, "orb.json", "res.json", "0", &[]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let d = rep.derived.as_ref().unwrap();
    assert_eq!(d.s1, 5);
    assert_eq!(d.framing_relation, "f = 5*fh + 2");
    assert_eq!(d.framing.to_string(), "2");
    assert_eq!(rep.counts.as_ref().unwrap().matched_terms, 86);
    assert_eq!(rep.status.outcome, Outcome::Pass);
    assert!(run.stdout.contains("s1 = 5"));
    assert!(run.stdout.contains("status: PASS"));
}

#[test]
fn verify_orbifold_against_itself() {
    let files = Files::new();
    let (run, rep) = verify(&files, "orb.json", "orb.json", "2", &[]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let d = rep.derived.unwrap();
    assert_eq!(d.s1, 1);
    assert_eq!(d.substitution, ["q4 = q4", "q5 = q5", "q0 = q0"]);
    assert_eq!(
        (d.alpha.to_string(), d.beta.to_string()),
        ("1".into(), "0".into())
    );
}

#[test]
fn verify_perturbed_resolution() {
    let files = Files::new();
    let perturbed = Z5_RESOLUTION_JSON.replacen("{\"c0\": \"-5\"}", "{\"c0\": \"-4\"}", 1);
    assert_ne!(perturbed, Z5_RESOLUTION_JSON);
    files.write("bad.json", &perturbed);
    let (run, rep) = verify(&files, "orb.json", "bad.json", "0", &[]);
    assert_eq!(run.code, 3);
    assert_eq!(rep.status.outcome, Outcome::Error);
    assert_eq!(rep.status.stage, Some(Stage::SolveTransition));
    assert!(
        run.stderr.contains("toric entries sum to 1"),
        "{}",
        run.stderr
    );
}

#[test]
fn report_round_trips() {
    let files = Files::new();
    verify(&files, "orb.json", "res.json", "1", &[]);
    let (text, rep) = read_report(&files.path("report.json"));
    let squash = |s: &str| s.split_whitespace().collect::<String>();
    assert_eq!(squash(&serde_json::to_string(&rep).unwrap()), squash(&text));
    assert_eq!(rep.exit_code(), 0);
}

#[test]
fn reports_do_not_depend_on_jobs() {
    let files = Files::new();
    verify(&files, "orb.json", "res.json", "3", &["--jobs", "1"]);
    let (a, _) = read_report(&files.path("report.json"));
    verify(&files, "orb.json", "res.json", "3", &["--jobs", "4"]);
    let (b, _) = read_report(&files.path("report.json"));
    assert_eq!(a, b);
}

#[test]
fn usage_and_io_errors() {
    let files = Files::new();
    let missing = files.arg("missing.json");
    let res = files.arg("res.json");
    let run = qmckay(&[
        "verify",
        "--orbifold",
        &missing,
        "--resolution",
        &res,
        "--framing-hat",
        "0",
        "--m0-max",
        "3",
    ]);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("cannot read"));

    assert_eq!(qmckay(&["verify", "--orbifold", &res]).code, 1);
    assert_eq!(
        qmckay(&[
            "eval",
            "--bundle",
            &res,
            "--framing",
            "x/y",
            "--m0-max",
            "1"
        ])
        .code,
        1
    );
    assert_eq!(qmckay(&["frobnicate"]).code, 1);
    assert_eq!(qmckay(&["--help"]).code, 0);

    files.write("broken.json", "{\"name\": ");
    let broken = files.arg("broken.json");
    let run = qmckay(&["fan", "--bundle", &broken]);
    assert_eq!(run.code, 1);
}

#[test]
fn negative_framing_flag_value() {
    let files = Files::new();
    let res = files.arg("res.json");
    let run = qmckay(&["eval", "--bundle", &res, "--framing", "-1", "--m0-max", "2"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
}

#[test]
fn eval_series() {
    let files = Files::new();
    let res = files.arg("res.json");
    let orb = files.arg("orb.json");

    let run = qmckay(&["eval", "--bundle", &res, "--framing", "0", "--m0-max", "1"]);
    assert_eq!(run.code, 0);
    let v: Value = serde_json::from_str(&run.stdout).unwrap();
    assert_eq!(
        v,
        serde_json::json!([{"monomial": {"qh0": "1"}, "coeff": {"order": 10, "coords": ["0", "0", "-1", "0"]}}])
    );

    let run = qmckay(&["eval", "--bundle", &res, "--framing", "0", "--m0-max", "0"]);
    assert_eq!(run.code, 0);
    assert_eq!(
        serde_json::from_str::<Value>(&run.stdout).unwrap(),
        serde_json::json!([])
    );

    let out = files.arg("w.json");
    let run = qmckay(&[
        "eval",
        "--bundle",
        &orb,
        "--framing",
        "2",
        "--m0-max",
        "15",
        "--out",
        &out,
    ]);
    assert_eq!(run.code, 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 86);
}

#[test]
fn eval_non_generic_framing() {
    let files = Files::new();
    let toy = Z5_RESOLUTION_JSON.replacen(
        "\"(fh+1)*mh0 - 2*mh1 - mh5\"",
        "\"fh*mh0 - 2*mh1 - mh5\"",
        1,
    );
    let toy = files.write("toy.json", &toy);
    let run = qmckay(&["eval", "--bundle", &toy, "--framing", "0", "--m0-max", "4"]);
    assert_eq!(run.code, 4);
    assert!(
        run.stderr.contains("(mh0=1, mh1=0, mh5=0)"),
        "{}",
        run.stderr
    );
}

fn with_fan_rows(rows: &str) -> String {
    let from = "\"fan_charge_rows\": [[1, 0, 0, 1, -2], [0, 1, 1, -3, 1]]";
    assert!(Z5_RESOLUTION_JSON.contains(from));
    Z5_RESOLUTION_JSON.replacen(from, &format!("\"fan_charge_rows\": {rows}"), 1)
}

#[test]
fn fan_rays() {
    let files = Files::new();
    let res = files.arg("res.json");
    let run = qmckay(&["fan", "--bundle", &res]);
    assert_eq!(run.code, 0);
    let mut rays: Vec<&str> = run.stdout.lines().collect();
    rays.sort();
    assert_eq!(rays, ["(-2,1)", "(0,1)", "(1,-3)", "(1,0)"]);

    let rank1 = files.write(
        "rank1.json",
        &with_fan_rows("[[1, 0, 0, 1, -2], [2, 0, 0, 2, -4]]"),
    );
    assert_eq!(qmckay(&["fan", "--bundle", &rank1]).code, 5);

    let dup = files.write(
        "dup.json",
        &with_fan_rows("[[1, 1, 2, 0, 0], [0, 0, 0, 1, 0]]"),
    );
    let run = qmckay(&["fan", "--bundle", &dup]);
    assert_eq!(run.code, 0);
    assert_eq!(run.stdout, "(0,1)\n(1,0)\n");
}

#[test]
fn selftest_runs() {
    let run = qmckay(&["selftest"]);
    assert_eq!(run.code, 0, "{}{}", run.stdout, run.stderr);
    assert!(run.stdout.contains("max relative error"));

    let a = qmckay(&["selftest", "--seed", "42", "--samples", "100"]);
    let b = qmckay(&["selftest", "--seed", "42", "--samples", "100"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn selftest_catches_bad_oracle() {
    let bad = Lanczos {
        g: 6.5,
        ..Lanczos::default()
    };
    let (mut out, mut err) = (Vec::new(), Vec::new());
    assert_eq!(cmd_selftest(DEFAULT_SEED, 100, &bad, &mut out, &mut err), 2);
    assert!(String::from_utf8(out).unwrap().contains("selftest: FAIL"));
}

#[test]
fn binary_exit_codes() {
    let files = Files::new();
    let bin = env!("CARGO_BIN_EXE_qmckay");
    let status = Command::new(bin)
        .args([
            "verify",
            "--orbifold",
            &files.arg("orb.json"),
            "--resolution",
            &files.arg("res.json"),
        ])
        .args(["--framing-hat", "2", "--m0-max", "10"])
        .env("QMCKAY_JOBS", "3")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(0));

    let status = Command::new(bin).args(["fan"]).output().unwrap();
    assert_eq!(status.status.code(), Some(1));
}
