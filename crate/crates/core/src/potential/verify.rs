use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::enumerate::{admissible_indices, build_with, BuildOptions};
use super::{GeometryBundle, IndexVector, PotentialError, SuperpotentialSpec};
use crate::exactnum::Rational;
use crate::lattice::{
    change_of_variables, determine_s1, solve_transition, ChangeOfVariables, FramingRelation,
    TransitionMatrix,
};
use crate::series::{compare, DiffReport};

/// Admissible source indices paired with the target indices their
/// substituted monomials land on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexCorrespondence {
    pub pairs: Vec<(IndexVector, IndexVector)>,
    pub source_framing: Rational,
    pub target_framing: Rational,
}

/// Checks that monomial substitution maps the admissible source indices
/// bijectively onto the admissible target indices, preserving the brane
/// index.
pub fn index_correspondence(
    cov: &ChangeOfVariables,
    source: &SuperpotentialSpec,
    target: &SuperpotentialSpec,
    framings: (&Rational, &Rational),
    m0_max: u64,
) -> Result<IndexCorrespondence, PotentialError> {
    let (f_src, f_tgt) = framings;
    let src_indices = admissible_indices(source, f_src, m0_max)?;
    let tgt_indices = admissible_indices(target, f_tgt, m0_max)?;

    let mut by_monomial = HashMap::with_capacity(tgt_indices.len());
    for idx in &tgt_indices {
        if let Some(prev) = by_monomial.insert(target.monomial(idx), idx) {
            return Err(PotentialError::NotBijective(format!(
                "target indices {prev} and {idx} give the same monomial"
            )));
        }
    }

    let mut used: HashMap<&IndexVector, &IndexVector> = HashMap::new();
    let mut pairs = Vec::with_capacity(src_indices.len());
    for idx in &src_indices {
        let image = source.monomial(idx).substitute(cov)?;
        let hit = by_monomial.get(&image).ok_or_else(|| {
            PotentialError::NotBijective(format!(
                "source index {idx} maps to {image}, which is not an admissible target term"
            ))
        })?;
        if let Some(prev) = used.insert(hit, idx) {
            return Err(PotentialError::NotBijective(format!(
                "source indices {prev} and {idx} both map to {hit}"
            )));
        }
        if idx.get(&source.brane_index) != hit.get(&target.brane_index) {
            return Err(PotentialError::NotBijective(format!(
                "brane index not preserved: {idx} maps to {hit}"
            )));
        }
        pairs.push((idx.clone(), (*hit).clone()));
    }
    if let Some(missed) = tgt_indices.iter().find(|t| !used.contains_key(t)) {
        return Err(PotentialError::NotBijective(format!(
            "target index {missed} has no preimage"
        )));
    }

    Ok(IndexCorrespondence {
        pairs,
        source_framing: f_src.clone(),
        target_framing: f_tgt.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    SolveTransition,
    IndexCorrespondence,
    DetermineS1,
    BuildSource,
    BuildTarget,
    Substitute,
    Compare,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("stage serializes");
        write!(f, "{}", s.as_str().unwrap_or("?"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{stage}: {error}")]
pub struct VerifyError {
    pub stage: Stage,
    pub error: PotentialError,
}

trait AtStage<T> {
    fn at(self, stage: Stage) -> Result<T, VerifyError>;
}

impl<T, E: Into<PotentialError>> AtStage<T> for Result<T, E> {
    fn at(self, stage: Stage) -> Result<T, VerifyError> {
        self.map_err(|e| VerifyError {
            stage,
            error: e.into(),
        })
    }
}

/// Everything derived while checking one orbifold/resolution pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationOutcome {
    pub transition: TransitionMatrix,
    pub relation: FramingRelation,
    pub cov: ChangeOfVariables,
    pub s1: u64,
    pub framing: Rational,
    pub framing_hat: Rational,
    pub cyclotomic_order: u32,
    pub source_terms: usize,
    pub target_terms: usize,
    pub admissible_indices: usize,
    pub matched_terms: usize,
    pub collisions: usize,
    pub diff: DiffReport,
    pub diagnostics: Vec<String>,
}

impl VerificationOutcome {
    pub fn passed(&self) -> bool {
        self.diff.is_empty()
    }
}

/// Runs the whole check: transition matrix and framing relation, change of
/// variables, index bijection, s1, both series, substitution, scaling and
/// comparison. `framing_hat` is the target framing; the source framing comes
/// from the derived relation.
pub fn verify_correspondence(
    source: &GeometryBundle,
    target: &GeometryBundle,
    framing_hat: &Rational,
    m0_max: u64,
    jobs: usize,
) -> Result<VerificationOutcome, VerifyError> {
    verify_with_scale(source, target, framing_hat, m0_max, jobs, None)
}

/// As [`verify_correspondence`], but scales the target series by
/// `scale_override` instead of the derived s1 when one is given.
pub fn verify_with_scale(
    source: &GeometryBundle,
    target: &GeometryBundle,
    framing_hat: &Rational,
    m0_max: u64,
    jobs: usize,
    scale_override: Option<i64>,
) -> Result<VerificationOutcome, VerifyError> {
    let mut diagnostics = source.diagnostics();
    diagnostics.extend(target.diagnostics());

    let (transition, relation) =
        solve_transition(&source.charges, &target.charges).at(Stage::SolveTransition)?;
    let framing = relation.apply(framing_hat);

    let mut cov = change_of_variables(
        &transition,
        &relation,
        &source.spec.variables,
        &target.spec.variables,
    );
    let corr = index_correspondence(
        &cov,
        &source.spec,
        &target.spec,
        (&framing, framing_hat),
        m0_max,
    )
    .at(Stage::IndexCorrespondence)?;
    let s1 = determine_s1(&source.spec, &target.spec, &corr).at(Stage::DetermineS1)?;
    cov.s1 = Some(s1);

    let order = 2 * source.spec.root_order.lcm(&target.spec.root_order);
    let options = BuildOptions {
        order: Some(order),
        jobs,
    };
    let w = build_with(&source.spec, &framing, m0_max, &options).at(Stage::BuildSource)?;
    let w_hat = build_with(&target.spec, framing_hat, m0_max, &options).at(Stage::BuildTarget)?;

    let (substituted, collisions) = w.substitute_counted(&cov).at(Stage::Substitute)?;
    let factor = scale_override.unwrap_or(s1 as i64);
    let scaled = w_hat.scale(factor);
    let diff = compare(&substituted, &scaled).at(Stage::Compare)?;
    let matched_terms = substituted.len() - diff.mismatches.len() - diff.left_only.len();

    Ok(VerificationOutcome {
        transition,
        relation,
        cov,
        s1,
        framing,
        framing_hat: framing_hat.clone(),
        cyclotomic_order: order,
        source_terms: w.len(),
        target_terms: w_hat.len(),
        admissible_indices: corr.pairs.len(),
        matched_terms,
        collisions,
        diff,
        diagnostics,
    })
}
