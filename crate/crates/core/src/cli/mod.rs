//! Command-line front end: `verify`, `eval`, `fan` and `selftest`.

mod report;
mod selftest;

pub use report::{
    Counts, Derived, DiffSection, ErrorKind, Inputs, Outcome, Status, VerificationReport,
    DIFF_DISPLAY_CAP,
};
pub use selftest::{
    gamma_samples, run_selftest, SelftestResult, DEFAULT_SAMPLES, DEFAULT_SEED, GAMMA_TOLERANCE,
};

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::exactnum::{Lanczos, Rational};
use crate::lattice::{secondary_fan_rays, LatticeError};
use crate::potential::{
    build_with, parse_bundle, verify_correspondence, BuildOptions, GeometryBundle, PotentialError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;
pub const EXIT_STRUCTURAL: i32 = 3;
pub const EXIT_NON_GENERIC: i32 = 4;
pub const EXIT_WRONG_RANK: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "qmckay",
    version,
    about = "Disc potentials of a toric orbifold and its resolution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that the substituted orbifold series equals s1 times the
    /// resolution series.
    Verify {
        #[arg(long, value_name = "FILE")]
        orbifold: PathBuf,
        #[arg(long, value_name = "FILE")]
        resolution: PathBuf,
        /// Framing of the resolution, e.g. 0 or -1.
        #[arg(long, value_name = "RATIONAL", allow_hyphen_values = true)]
        framing_hat: Rational,
        #[arg(long, value_name = "INT")]
        m0_max: u64,
        /// Write the full JSON report here.
        #[arg(long, value_name = "FILE")]
        report: Option<PathBuf>,
        #[arg(long, value_name = "INT", env = "QMCKAY_JOBS", default_value_t = 1)]
        jobs: usize,
    },
    /// Print the truncated superpotential series of one bundle as JSON.
    Eval {
        #[arg(long, value_name = "FILE")]
        bundle: PathBuf,
        #[arg(long, value_name = "RATIONAL", allow_hyphen_values = true)]
        framing: Rational,
        #[arg(long, value_name = "INT")]
        m0_max: u64,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        #[arg(long, value_name = "INT", env = "QMCKAY_JOBS", default_value_t = 1)]
        jobs: usize,
    },
    /// Print the rays of the secondary fan, one per line.
    Fan {
        #[arg(long, value_name = "FILE")]
        bundle: PathBuf,
    },
    /// Compare exact Gamma ratios with a floating oracle and check
    /// cyclotomic identities.
    Selftest {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
}

/// Runs the command line against the process's stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(
        args,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}

/// Runs the command line with explicit output streams; returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match cli.command {
        Command::Verify {
            orbifold,
            resolution,
            framing_hat,
            m0_max,
            report,
            jobs,
        } => cmd_verify(
            &orbifold,
            &resolution,
            &framing_hat,
            m0_max,
            report.as_deref(),
            jobs,
            out,
            err,
        ),
        Command::Eval {
            bundle,
            framing,
            m0_max,
            out: out_path,
            jobs,
        } => cmd_eval(
            &bundle,
            &framing,
            m0_max,
            out_path.as_deref(),
            jobs,
            out,
            err,
        ),
        Command::Fan { bundle } => cmd_fan(&bundle, out, err),
        Command::Selftest { seed, samples } => {
            cmd_selftest(seed, samples, &Lanczos::default(), out, err)
        }
    }
}

fn load_bundle(path: &Path) -> Result<GeometryBundle, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_bundle(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, contents: &str) -> Result<(), String> {
    std::fs::write(path, contents).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_verify(
    orbifold: &Path,
    resolution: &Path,
    framing_hat: &Rational,
    m0_max: u64,
    report_path: Option<&Path>,
    jobs: usize,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let bundles = load_bundle(orbifold).and_then(|a| Ok((a, load_bundle(resolution)?)));
    let (source, target) = match bundles {
        Ok(pair) => pair,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };

    let result = verify_correspondence(&source, &target, framing_hat, m0_max, jobs);
    let inputs = Inputs {
        orbifold: source.name.clone(),
        resolution: target.name.clone(),
        framing_hat: framing_hat.clone(),
        m0_max,
    };
    let symbols = (
        source.spec.framing_symbol.as_str(),
        target.spec.framing_symbol.as_str(),
    );
    let mut report = VerificationReport::from_result(inputs, symbols, &result);
    if report.derived.is_none() {
        let mut d = source.diagnostics();
        d.extend(target.diagnostics());
        report.diagnostics = d;
    }

    for d in &report.diagnostics {
        let _ = writeln!(err, "warning: {d}");
    }
    if let Some(path) = report_path {
        if let Err(e) = write_file(path, &(report.to_json() + "\n")) {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    }
    let _ = write!(out, "{}", report.summary(DIFF_DISPLAY_CAP));
    if let Some(m) = report
        .status
        .message
        .as_ref()
        .filter(|_| report.status.outcome == Outcome::Error)
    {
        let _ = writeln!(err, "error: {m}");
    }
    report.exit_code()
}

pub fn cmd_eval(
    bundle: &Path,
    framing: &Rational,
    m0_max: u64,
    out_path: Option<&Path>,
    jobs: usize,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let bundle = match load_bundle(bundle) {
        Ok(b) => b,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let options = BuildOptions { order: None, jobs };
    let series = match build_with(&bundle.spec, framing, m0_max, &options) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return match e {
                PotentialError::NonGenericFraming { .. } => EXIT_NON_GENERIC,
                _ => EXIT_STRUCTURAL,
            };
        }
    };
    let json = serde_json::to_string_pretty(&series).expect("series serializes") + "\n";
    match out_path {
        Some(path) => {
            if let Err(e) = write_file(path, &json) {
                let _ = writeln!(err, "error: {e}");
                return EXIT_USAGE;
            }
            let _ = writeln!(out, "{} terms written to {}", series.len(), path.display());
        }
        None => {
            let _ = write!(out, "{json}");
        }
    }
    EXIT_OK
}

pub fn cmd_fan(bundle: &Path, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let rows = match load_bundle(bundle).and_then(|b| b.fan_rows()) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    match secondary_fan_rays(&rows) {
        Ok(rays) => {
            for (x, y) in rays {
                let _ = writeln!(out, "({x},{y})");
            }
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                LatticeError::WrongRank { .. } => EXIT_WRONG_RANK,
                _ => EXIT_STRUCTURAL,
            }
        }
    }
}

/// `oracle` is the floating Gamma under test against the exact ratios.
pub fn cmd_selftest(
    seed: u64,
    samples: usize,
    oracle: &Lanczos,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let r = run_selftest(seed, samples, oracle);
    let _ = writeln!(
        out,
        "gamma_ratio: {} cases (seed {seed}), max relative error {:.3e}, {} above {GAMMA_TOLERANCE:e}",
        r.gamma_cases,
        r.max_relative_error,
        r.gamma_failures.len()
    );
    let _ = writeln!(
        out,
        "cyclotomic: {} identities, {} failed",
        r.identities_checked,
        r.identity_failures.len()
    );
    for (a, b, exact, float) in r.gamma_failures.iter().take(DIFF_DISPLAY_CAP) {
        let _ = writeln!(
            err,
            "Gamma({a})/Gamma({b}): exact {exact:e}, oracle {float:e}"
        );
    }
    for f in r.identity_failures.iter().take(DIFF_DISPLAY_CAP) {
        let _ = writeln!(err, "{f}");
    }
    if r.passed() {
        let _ = writeln!(out, "selftest: PASS");
        EXIT_OK
    } else {
        let _ = writeln!(out, "selftest: FAIL");
        EXIT_MISMATCH
    }
}
