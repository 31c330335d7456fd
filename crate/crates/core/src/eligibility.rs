//! Pre-ranking eligibility filter: candidates whose scores fall below any
//! minimum threshold are excluded before ANOVA and clustering.

use thiserror::Error;

use crate::assess::{rollup, AssessError, RollupWeights};
use crate::matrix::AcdMatrix;
use crate::scalar::Real;
use crate::tree::{CompetenceId, CompetenceTree};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EligibilityError {
    #[error("eligibility rule references {0} which is not in the tree")]
    UnknownCompetenceInRule(String),
    #[error(transparent)]
    Rollup(#[from] AssessError),
}

impl EligibilityError {
    pub fn rule_name(&self) -> &'static str {
        match self {
            EligibilityError::UnknownCompetenceInRule(_) => "UnknownCompetenceInRule",
            EligibilityError::Rollup(e) => e.rule_name(),
        }
    }
}

/// Minimum score required on one competence (any level).
#[derive(Debug, Clone, PartialEq)]
pub struct EligibilityRule<T> {
    pub competence: CompetenceId,
    pub min_score: T,
    pub description: String,
}

/// One excluded candidate with the rule it violated.
#[derive(Debug, Clone, PartialEq)]
pub struct Exclusion<T> {
    pub candidate: String,
    pub rule: EligibilityRule<T>,
    pub actual: T,
}

/// Outcome of the eligibility check: retained candidates in input order and
/// one exclusion entry per violated rule.
#[derive(Debug, Clone, PartialEq)]
pub struct EligibilityOutcome<T> {
    pub eligible: Vec<String>,
    pub exclusions: Vec<Exclusion<T>>,
}

/// Applies all rules to the level-3 scores; values for level-1/2 rules are
/// rolled up on demand with the supplied weights. A candidate is retained
/// iff every rule is satisfied.
pub fn filter_eligible<T: Real>(
    acd3: &AcdMatrix<T>,
    tree: &CompetenceTree,
    rules: &[EligibilityRule<T>],
    weights_l3: &RollupWeights<T>,
    weights_l2: &RollupWeights<T>,
) -> Result<EligibilityOutcome<T>, EligibilityError> {
    for rule in rules {
        if !tree.contains(&rule.competence) {
            return Err(EligibilityError::UnknownCompetenceInRule(
                rule.competence.to_string(),
            ));
        }
    }

    let needs_l2 = rules.iter().any(|r| r.competence.level() <= 2);
    let needs_l1 = rules.iter().any(|r| r.competence.level() == 1);
    let acd2 = if needs_l2 {
        Some(rollup(acd3, weights_l3, tree)?)
    } else {
        None
    };
    let acd1 = if needs_l1 {
        Some(rollup(acd2.as_ref().expect("level 2 computed"), weights_l2, tree)?)
    } else {
        None
    };

    let value_of = |candidate: &str, id: &CompetenceId| -> T {
        let source = match id.level() {
            3 => acd3,
            2 => acd2.as_ref().expect("computed on demand"),
            _ => acd1.as_ref().expect("computed on demand"),
        };
        source
            .matrix
            .value_at(candidate, id)
            .expect("columns cover the tree level")
    };

    let mut eligible = Vec::new();
    let mut exclusions = Vec::new();
    for candidate in acd3.matrix.candidates() {
        let mut ok = true;
        for rule in rules {
            let actual = value_of(candidate, &rule.competence);
            if actual < rule.min_score {
                ok = false;
                exclusions.push(Exclusion {
                    candidate: candidate.clone(),
                    rule: rule.clone(),
                    actual,
                });
            }
        }
        if ok {
            eligible.push(candidate.clone());
        }
    }

    Ok(EligibilityOutcome {
        eligible,
        exclusions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{Level, ScoreMatrix};
    use crate::tree::canonical_tree;

    fn cid(s: &str) -> CompetenceId {
        CompetenceId::parse(s).unwrap()
    }

    fn rule(id: &str, min: f64) -> EligibilityRule<f64> {
        EligibilityRule {
            competence: cid(id),
            min_score: min,
            description: format!("{id} >= {min}"),
        }
    }

    fn toy_acd3() -> (CompetenceTree, AcdMatrix<f64>) {
        let tree = canonical_tree();
        let leaves: Vec<CompetenceId> = tree.level_ids(3).into_iter().cloned().collect();
        // two candidates: "low" scores 2 everywhere, "high" scores 4
        let mut values = vec![2.0; 48];
        values.extend(vec![4.0; 48]);
        let matrix =
            ScoreMatrix::new(vec!["low".into(), "high".into()], leaves, values).unwrap();
        (tree, AcdMatrix::new(Level::Three, matrix))
    }

    #[test]
    fn empty_rules_keep_everyone() {
        let (tree, acd3) = toy_acd3();
        let w3 = RollupWeights::equal(&tree, Level::Three);
        let w2 = RollupWeights::equal(&tree, Level::Two);
        let out = filter_eligible(&acd3, &tree, &[], &w3, &w2).unwrap();
        assert_eq!(out.eligible, vec!["low".to_string(), "high".to_string()]);
        assert!(out.exclusions.is_empty());
    }

    #[test]
    fn leaf_rule_excludes() {
        let (tree, acd3) = toy_acd3();
        let w3 = RollupWeights::equal(&tree, Level::Three);
        let w2 = RollupWeights::equal(&tree, Level::Two);
        let out =
            filter_eligible(&acd3, &tree, &[rule("C1.3.1", 3.0)], &w3, &w2).unwrap();
        assert_eq!(out.eligible, vec!["high".to_string()]);
        assert_eq!(out.exclusions.len(), 1);
        assert_eq!(out.exclusions[0].candidate, "low");
        assert_eq!(out.exclusions[0].actual, 2.0);
    }

    #[test]
    fn rolled_up_rule_uses_level_values() {
        let (tree, acd3) = toy_acd3();
        let w3 = RollupWeights::equal(&tree, Level::Three);
        let w2 = RollupWeights::equal(&tree, Level::Two);
        // level-2 and level-1 rollups of constant rows equal the constant
        let out = filter_eligible(
            &acd3,
            &tree,
            &[rule("C1.1", 4.0), rule("C3", 1.0)],
            &w3,
            &w2,
        )
        .unwrap();
        assert_eq!(out.eligible, vec!["high".to_string()]);
    }

    #[test]
    fn unknown_rule_competence() {
        let (tree, acd3) = toy_acd3();
        let w3 = RollupWeights::equal(&tree, Level::Three);
        let w2 = RollupWeights::equal(&tree, Level::Two);
        assert!(matches!(
            filter_eligible(&acd3, &tree, &[rule("C9", 1.0)], &w3, &w2),
            Err(EligibilityError::UnknownCompetenceInRule(_))
        ));
    }
}
