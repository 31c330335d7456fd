//! Job profiles: required level-3 scores, cumulative-voting allocations and
//! eligibility rules for one position.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::eligibility::EligibilityRule;
use crate::hcv::{HcvAllocation, HcvError};
use crate::matrix::{Level, ScoreMatrix};
use crate::scalar::Real;
use crate::tree::{importance_to_score, CompetenceId, CompetenceTree, UnknownTerm};

/// Row label used for requirement vectors in matrices and exports.
pub const REQUIREMENT_LABEL: &str = "Req";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProfileError {
    #[error("required scores missing leaf {0}")]
    IncompleteRcd(String),
    #[error("required score references {0} which is not a leaf of the tree")]
    UnknownCompetence(String),
    #[error("required score {score} for {id} outside [1, 5]")]
    ScoreOutOfRange { id: String, score: String },
    #[error(transparent)]
    UnknownTerm(#[from] UnknownTerm),
    #[error(transparent)]
    Hcv(#[from] HcvError),
    #[error("eligibility rule references {0} which is not in the tree")]
    UnknownCompetenceInRule(String),
    #[error("eligibility threshold {score} for {id} outside [1, 5]")]
    RuleScoreOutOfRange { id: String, score: String },
}

impl ProfileError {
    pub fn rule_name(&self) -> &'static str {
        match self {
            ProfileError::IncompleteRcd(_) => "IncompleteRcd",
            ProfileError::UnknownCompetence(_) => "UnknownCompetence",
            ProfileError::ScoreOutOfRange { .. } => "ScoreOutOfRange",
            ProfileError::UnknownTerm(e) => e.rule_name(),
            ProfileError::Hcv(e) => e.rule_name(),
            ProfileError::UnknownCompetenceInRule(_) => "UnknownCompetenceInRule",
            ProfileError::RuleScoreOutOfRange { .. } => "RuleScoreOutOfRange",
        }
    }
}

/// A required score given either numerically or as a lexical importance term.
#[derive(Debug, Clone, PartialEq)]
pub enum RcdValue<T> {
    Score(T),
    Term(String),
}

/// Validated job profile: complete leaf-level requirements, a cumulative
/// voting allocation and optional eligibility rules.
#[derive(Debug, Clone, PartialEq)]
pub struct JobProfile<T> {
    pub job_id: String,
    rcd3: BTreeMap<CompetenceId, T>,
    pub hcv: HcvAllocation<T>,
    pub eligibility: Vec<EligibilityRule<T>>,
}

impl<T: Real> JobProfile<T> {
    /// Builds and validates a profile against a tree. Lexical terms in the
    /// requirements are converted to scores; every leaf of the tree must be
    /// covered and every HCV group must sum to the allocation total.
    pub fn build(
        tree: &CompetenceTree,
        job_id: impl Into<String>,
        rcd3: impl IntoIterator<Item = (CompetenceId, RcdValue<T>)>,
        hcv1: BTreeMap<CompetenceId, T>,
        hcv2: BTreeMap<CompetenceId, T>,
        eligibility: Vec<EligibilityRule<T>>,
        f: T,
    ) -> Result<Self, ProfileError> {
        let mut scores = BTreeMap::new();
        for (id, value) in rcd3 {
            let node = tree
                .node(&id)
                .map_err(|_| ProfileError::UnknownCompetence(id.to_string()))?;
            if node.level() != 3 {
                return Err(ProfileError::UnknownCompetence(id.to_string()));
            }
            let score = match value {
                RcdValue::Score(s) => s,
                RcdValue::Term(term) => T::of_usize(importance_to_score(&term)? as usize),
            };
            if score < T::one() || score > T::of(5.0) {
                return Err(ProfileError::ScoreOutOfRange {
                    id: id.to_string(),
                    score: format!("{score}"),
                });
            }
            scores.insert(id, score);
        }
        for leaf in tree.level_ids(3) {
            if !scores.contains_key(leaf) {
                return Err(ProfileError::IncompleteRcd(leaf.to_string()));
            }
        }

        let hcv = HcvAllocation::new(f, hcv1, hcv2, tree)?;

        for rule in &eligibility {
            if !tree.contains(&rule.competence) {
                return Err(ProfileError::UnknownCompetenceInRule(
                    rule.competence.to_string(),
                ));
            }
            if rule.min_score < T::one() || rule.min_score > T::of(5.0) {
                return Err(ProfileError::RuleScoreOutOfRange {
                    id: rule.competence.to_string(),
                    score: format!("{}", rule.min_score),
                });
            }
        }

        Ok(JobProfile {
            job_id: job_id.into(),
            rcd3: scores,
            hcv,
            eligibility,
        })
    }

    pub fn rcd3(&self) -> &BTreeMap<CompetenceId, T> {
        &self.rcd3
    }

    /// The level-3 requirements as a single-row matrix in tree leaf order.
    pub fn rcd3_matrix(&self, tree: &CompetenceTree) -> (Level, ScoreMatrix<T>) {
        let leaves: Vec<CompetenceId> = tree.level_ids(3).into_iter().cloned().collect();
        let values = leaves.iter().map(|id| self.rcd3[id]).collect();
        (
            Level::Three,
            ScoreMatrix::single_row(REQUIREMENT_LABEL, leaves, values)
                .expect("leaf ids are unique"),
        )
    }
}
