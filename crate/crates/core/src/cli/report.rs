use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::exactnum::Rational;
use crate::lattice::TransitionMatrix;
use crate::potential::{PotentialError, Stage, VerificationOutcome, VerifyError};
use crate::series::DiffReport;

/// Entries of the diff shown in the human-readable summary.
pub const DIFF_DISPLAY_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inputs {
    pub orbifold: String,
    pub resolution: String,
    pub framing_hat: Rational,
    pub m0_max: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derived {
    pub row_order: Vec<String>,
    pub column_order: Vec<String>,
    pub transition: TransitionMatrix,
    pub alpha: Rational,
    pub beta: Rational,
    pub framing_relation: String,
    pub framing: Rational,
    pub substitution: Vec<String>,
    pub s1: u64,
    pub cyclotomic_order: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub admissible_indices: usize,
    pub source_terms: usize,
    pub target_terms: usize,
    pub matched_terms: usize,
    pub collisions: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffSection {
    pub total: usize,
    pub entries: DiffReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    /// No framing relation, no bijection, bad spec data.
    Structural,
    NonGenericFraming,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Status {
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stage: Option<Stage>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<ErrorKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl Status {
    pub fn exit_code(&self) -> i32 {
        match (self.outcome, self.kind) {
            (Outcome::Pass, _) => 0,
            (Outcome::Fail, _) => 2,
            (Outcome::Error, Some(ErrorKind::NonGenericFraming)) => 4,
            (Outcome::Error, _) => 3,
        }
    }
}

/// Machine-readable result of `verify`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub inputs: Inputs,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derived: Option<Derived>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<Counts>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diff: Option<DiffSection>,
    pub diagnostics: Vec<String>,
    pub status: Status,
}

impl VerificationReport {
    pub fn from_result(
        inputs: Inputs,
        symbols: (&str, &str),
        result: &Result<VerificationOutcome, VerifyError>,
    ) -> Self {
        match result {
            Ok(out) => {
                let passed = out.passed();
                VerificationReport {
                    inputs,
                    derived: Some(Derived {
                        row_order: out.cov.source_vars.clone(),
                        column_order: out.cov.target_vars.clone(),
                        transition: out.transition.clone(),
                        alpha: out.relation.alpha.clone(),
                        beta: out.relation.beta.clone(),
                        framing_relation: out.relation.describe(symbols.0, symbols.1),
                        framing: out.framing.clone(),
                        substitution: out.cov.rules(),
                        s1: out.s1,
                        cyclotomic_order: out.cyclotomic_order,
                    }),
                    counts: Some(Counts {
                        admissible_indices: out.admissible_indices,
                        source_terms: out.source_terms,
                        target_terms: out.target_terms,
                        matched_terms: out.matched_terms,
                        collisions: out.collisions,
                    }),
                    diff: Some(DiffSection {
                        total: out.diff.total(),
                        entries: out.diff.clone(),
                    }),
                    diagnostics: out.diagnostics.clone(),
                    status: Status {
                        outcome: if passed { Outcome::Pass } else { Outcome::Fail },
                        stage: None,
                        kind: None,
                        message: (!passed)
                            .then(|| format!("{} coefficient differences", out.diff.total())),
                    },
                }
            }
            Err(e) => VerificationReport {
                inputs,
                derived: None,
                counts: None,
                diff: None,
                diagnostics: Vec::new(),
                status: Status {
                    outcome: Outcome::Error,
                    stage: Some(e.stage),
                    kind: Some(match e.error {
                        PotentialError::NonGenericFraming { .. } => ErrorKind::NonGenericFraming,
                        _ => ErrorKind::Structural,
                    }),
                    message: Some(e.error.to_string()),
                },
            },
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Plain-text summary with the diff capped at `cap` entries.
    pub fn summary(&self, cap: usize) -> String {
        let mut s = String::new();
        let i = &self.inputs;
        let _ = writeln!(
            s,
            "{} vs {}  (framing_hat = {}, m0 <= {})",
            i.orbifold, i.resolution, i.framing_hat, i.m0_max
        );
        if let Some(d) = &self.derived {
            let _ = writeln!(
                s,
                "transition matrix (rows {:?}, columns {:?}):",
                d.row_order, d.column_order
            );
            for row in &d.transition.entries {
                let cells: Vec<String> = row
                    .iter()
                    .map(|x| format!("{:>5}", x.to_string()))
                    .collect();
                let _ = writeln!(s, "  [{}]", cells.join(" "));
            }
            let _ = writeln!(
                s,
                "framing relation: {}  (framing = {})",
                d.framing_relation, d.framing
            );
            for rule in &d.substitution {
                let _ = writeln!(s, "  {rule}");
            }
            let _ = writeln!(s, "s1 = {}", d.s1);
        }
        if let Some(c) = &self.counts {
            let _ = writeln!(
                s,
                "admissible indices: {}, terms: {} / {}, matched: {}, collisions: {}",
                c.admissible_indices, c.source_terms, c.target_terms, c.matched_terms, c.collisions
            );
        }
        if let Some(diff) = self.diff.as_ref().filter(|d| d.total > 0) {
            let shown = diff.entries.truncated(cap);
            let _ = writeln!(s, "differences: {} (showing {})", diff.total, shown.total());
            for m in &shown.mismatches {
                let _ = writeln!(s, "  {}: {} vs {}", m.monomial, m.left, m.right);
            }
            for m in &shown.left_only {
                let _ = writeln!(s, "  {m}: only in substituted series");
            }
            for m in &shown.right_only {
                let _ = writeln!(s, "  {m}: only in scaled target series");
            }
        }
        let st = &self.status;
        let outcome = match st.outcome {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Error => "ERROR",
        };
        let _ = write!(s, "status: {outcome}");
        if let Some(stage) = st.stage {
            let _ = write!(s, " at {stage}");
        }
        if let Some(m) = &st.message {
            let _ = write!(s, ": {m}");
        }
        s.push('\n');
        s
    }
}
