//! Assessment aggregation: statement scoring, assessment-type combination,
//! hierarchy rollups and descriptive statistics.
//!
//! Raw Likert responses are aggregated per (assessee, competence,
//! assessment type) by a weighted mean, combined across assessment types by
//! a second weighted mean, and rolled up the tree by per-group weighted
//! means. Every step is a convex combination, so scores never leave the
//! 1-5 mark range.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::matrix::{AcdMatrix, Level, ScoreMatrix};
use crate::scalar::Real;
use crate::tree::{CompetenceId, CompetenceTree};

/// Absolute tolerance for "weights sum to one" checks.
pub(crate) fn weight_tolerance<T: Real>() -> T {
    T::of(1e-9).max(T::epsilon() * T::of(64.0))
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AssessError {
    #[error("empty response set")]
    EmptyResponseSet,
    #[error("responses mix keys: {0} vs {1}")]
    MixedKeys(String, String),
    #[error("weights sum to {0}, expected 1")]
    WeightSumViolation(String),
    #[error("Likert value {0} outside 1..=5")]
    ScoreOutOfRange(String),
    #[error("no value for assessment type {0:?}")]
    MissingTypeValue(String),
    #[error("rollup weights do not cover {0}")]
    WeightCoverageGap(String),
    #[error("cannot roll up a level-{0} matrix")]
    LevelMismatch(u8),
    #[error("candidate {candidate:?} has no score for {competence}")]
    MissingValue {
        candidate: String,
        competence: String,
    },
    #[error("empty input")]
    EmptyInput,
}

impl AssessError {
    pub fn rule_name(&self) -> &'static str {
        match self {
            AssessError::EmptyResponseSet => "EmptyResponseSet",
            AssessError::MixedKeys(..) => "MixedKeys",
            AssessError::WeightSumViolation(_) => "WeightSumViolation",
            AssessError::ScoreOutOfRange(_) => "ScoreOutOfRange",
            AssessError::MissingTypeValue(_) => "MissingTypeValue",
            AssessError::WeightCoverageGap(_) => "WeightCoverageGap",
            AssessError::LevelMismatch(_) => "LevelMismatch",
            AssessError::MissingValue { .. } => "MissingValue",
            AssessError::EmptyInput => "EmptyInput",
        }
    }
}

/// Who provided a response in the multi-source round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum AssessorRole {
    SelfAssessor,
    Colleague,
    Manager,
}

impl AssessorRole {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "self" => Some(AssessorRole::SelfAssessor),
            "colleague" => Some(AssessorRole::Colleague),
            "manager" => Some(AssessorRole::Manager),
            _ => None,
        }
    }
}

/// The two supported assessment channels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum AssessmentType {
    MultiSource,
    SelfAssessment,
}

impl AssessmentType {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "multi_source" => Some(AssessmentType::MultiSource),
            "self_assessment" => Some(AssessmentType::SelfAssessment),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AssessmentType::MultiSource => "multi_source",
            AssessmentType::SelfAssessment => "self_assessment",
        }
    }
}

impl fmt::Display for AssessmentType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One statement answer for one assessee/competence/assessment-type.
#[derive(Debug, Clone, PartialEq)]
pub struct StatementResponse<T> {
    pub assessee: String,
    pub competence: CompetenceId,
    pub statement_id: String,
    pub value: u8,
    pub weight: T,
    pub assessor_role: AssessorRole,
    pub assessment_type: AssessmentType,
}

impl<T: Real> StatementResponse<T> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        assessee: impl Into<String>,
        competence: CompetenceId,
        statement_id: impl Into<String>,
        value: u8,
        weight: T,
        assessor_role: AssessorRole,
        assessment_type: AssessmentType,
    ) -> Result<Self, AssessError> {
        if !(1..=5).contains(&value) {
            return Err(AssessError::ScoreOutOfRange(value.to_string()));
        }
        Ok(StatementResponse {
            assessee: assessee.into(),
            competence,
            statement_id: statement_id.into(),
            value,
            weight,
            assessor_role,
            assessment_type,
        })
    }
}

/// Normalized weights over assessment types.
#[derive(Debug, Clone, PartialEq)]
pub struct AssessmentTypeWeights<T> {
    weights: BTreeMap<AssessmentType, T>,
}

impl<T: Real> AssessmentTypeWeights<T> {
    /// Accepts non-negative amounts and normalizes them to sum 1.
    pub fn new(amounts: BTreeMap<AssessmentType, T>) -> Result<Self, AssessError> {
        if amounts.is_empty() {
            return Err(AssessError::EmptyInput);
        }
        let total: T = amounts.values().copied().sum();
        if amounts.values().any(|w| *w < T::zero()) || total <= T::zero() {
            return Err(AssessError::WeightSumViolation(format!("{total}")));
        }
        let weights = amounts.into_iter().map(|(k, v)| (k, v / total)).collect();
        Ok(AssessmentTypeWeights { weights })
    }

    /// Equal weight for every listed type.
    pub fn equal(types: &[AssessmentType]) -> Result<Self, AssessError> {
        Self::new(types.iter().map(|&t| (t, T::one())).collect())
    }

    pub fn get(&self, t: AssessmentType) -> Option<T> {
        self.weights.get(&t).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (AssessmentType, T)> + '_ {
        self.weights.iter().map(|(&k, &v)| (k, v))
    }
}

impl<T: Real> Default for AssessmentTypeWeights<T> {
    fn default() -> Self {
        Self::equal(&[AssessmentType::MultiSource, AssessmentType::SelfAssessment]).unwrap()
    }
}

/// Weighted mean of one statement set; weights must sum to 1 and all
/// responses must share the same (assessee, competence, assessment type).
pub fn score_statement_set<T: Real>(responses: &[StatementResponse<T>]) -> Result<T, AssessError> {
    let first = responses.first().ok_or(AssessError::EmptyResponseSet)?;
    let key = (
        &first.assessee,
        &first.competence,
        first.assessment_type,
    );
    for r in responses {
        let k = (&r.assessee, &r.competence, r.assessment_type);
        if k != key {
            return Err(AssessError::MixedKeys(
                format!("{}/{}/{}", key.0, key.1, key.2),
                format!("{}/{}/{}", k.0, k.1, k.2),
            ));
        }
    }
    let total: T = responses.iter().map(|r| r.weight).sum();
    if (total - T::one()).abs() > weight_tolerance::<T>() {
        return Err(AssessError::WeightSumViolation(format!("{total}")));
    }
    Ok(responses
        .iter()
        .map(|r| r.weight * T::of_usize(r.value as usize))
        .sum())
}

/// Combines per-type values into one level-3 score.
pub fn combine_assessment_types<T: Real>(
    values: &BTreeMap<AssessmentType, T>,
    weights: &AssessmentTypeWeights<T>,
) -> Result<T, AssessError> {
    let total: T = weights.iter().map(|(_, w)| w).sum();
    if (total - T::one()).abs() > weight_tolerance::<T>() {
        return Err(AssessError::WeightSumViolation(format!("{total}")));
    }
    let mut acc = T::zero();
    for (t, w) in weights.iter() {
        let v = values
            .get(&t)
            .copied()
            .ok_or_else(|| AssessError::MissingTypeValue(t.to_string()))?;
        acc = acc + w * v;
    }
    Ok(acc)
}

/// Per-parent weights over child competences, each group summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct RollupWeights<T> {
    groups: BTreeMap<CompetenceId, BTreeMap<CompetenceId, T>>,
}

impl<T: Real> RollupWeights<T> {
    pub fn new(
        groups: BTreeMap<CompetenceId, BTreeMap<CompetenceId, T>>,
    ) -> Result<Self, AssessError> {
        for (parent, children) in &groups {
            if children.is_empty() {
                return Err(AssessError::WeightCoverageGap(parent.to_string()));
            }
            let total: T = children.values().copied().sum();
            if (total - T::one()).abs() > weight_tolerance::<T>() {
                return Err(AssessError::WeightSumViolation(format!(
                    "{total} in group {parent}"
                )));
            }
            if children.values().any(|w| *w < T::zero() || *w > T::one()) {
                return Err(AssessError::WeightSumViolation(format!(
                    "weight outside [0,1] in group {parent}"
                )));
            }
        }
        Ok(RollupWeights { groups })
    }

    /// Equal weights over each parent's children at `child_level`.
    pub fn equal(tree: &CompetenceTree, child_level: Level) -> Self {
        let parent_level = child_level.parent().expect("child level has a parent");
        let mut groups = BTreeMap::new();
        for parent in tree.level_ids(parent_level.as_u8()) {
            let children = tree.children(parent).expect("parent exists");
            let w = T::one() / T::of_usize(children.len());
            groups.insert(
                parent.clone(),
                children.into_iter().map(|c| (c.clone(), w)).collect(),
            );
        }
        RollupWeights { groups }
    }

    pub fn group(&self, parent: &CompetenceId) -> Option<&BTreeMap<CompetenceId, T>> {
        self.groups.get(parent)
    }
}

/// Rolls a matrix one level up: each parent column is the weighted mean of
/// its child columns. Works on ACD matrices and single-row RCD matrices
/// alike.
pub fn rollup<T: Real>(
    child: &AcdMatrix<T>,
    weights: &RollupWeights<T>,
    tree: &CompetenceTree,
) -> Result<AcdMatrix<T>, AssessError> {
    let parent_level = child
        .level
        .parent()
        .ok_or(AssessError::LevelMismatch(child.level.as_u8()))?;
    let parents: Vec<CompetenceId> = tree
        .level_ids(parent_level.as_u8())
        .into_iter()
        .cloned()
        .collect();
    let m = &child.matrix;

    // resolve child columns and weights once per parent
    let mut plan: Vec<Vec<(usize, T)>> = Vec::with_capacity(parents.len());
    for parent in &parents {
        let group = weights
            .group(parent)
            .ok_or_else(|| AssessError::WeightCoverageGap(parent.to_string()))?;
        let children = tree.children(parent).expect("parent is internal");
        let mut cols = Vec::with_capacity(children.len());
        for ch in children {
            let w = group
                .get(ch)
                .copied()
                .ok_or_else(|| AssessError::WeightCoverageGap(ch.to_string()))?;
            let col = m.competence_index(ch).map_err(|_| AssessError::MissingValue {
                candidate: "<all>".into(),
                competence: ch.to_string(),
            })?;
            cols.push((col, w));
        }
        plan.push(cols);
    }

    let mut values = Vec::with_capacity(m.n_candidates() * parents.len());
    for row in 0..m.n_candidates() {
        for cols in &plan {
            let mut acc = T::zero();
            for &(col, w) in cols {
                let v = m.get(row, col);
                if !v.is_finite() {
                    return Err(AssessError::MissingValue {
                        candidate: m.candidates()[row].clone(),
                        competence: m.competences()[col].to_string(),
                    });
                }
                acc = acc + w * v;
            }
            values.push(acc);
        }
    }

    Ok(AcdMatrix::new(
        parent_level,
        ScoreMatrix::new(m.candidates().to_vec(), parents, values)
            .expect("shape is consistent by construction"),
    ))
}

/// Level-1 scores via two rollups, plus the per-candidate total (plain mean
/// of all leaf scores).
pub fn level1_scores<T: Real>(
    acd3: &AcdMatrix<T>,
    tree: &CompetenceTree,
    weights_l3: &RollupWeights<T>,
    weights_l2: &RollupWeights<T>,
) -> Result<(AcdMatrix<T>, Vec<T>), AssessError> {
    if acd3.level != Level::Three {
        return Err(AssessError::LevelMismatch(acd3.level.as_u8()));
    }
    let acd2 = rollup(acd3, weights_l3, tree)?;
    let acd1 = rollup(&acd2, weights_l2, tree)?;
    let m = &acd3.matrix;
    let n_leaves = T::of_usize(m.n_competences());
    let totals = (0..m.n_candidates())
        .map(|i| m.row(i).iter().copied().sum::<T>() / n_leaves)
        .collect();
    Ok((acd1, totals))
}

/// Aggregates raw statement responses into a level-3 ACD matrix: weighted
/// mean per statement set, then the weighted combination across assessment
/// types. Candidates keep their first-appearance order; every candidate
/// must cover every leaf with every weighted assessment type.
pub fn acd3_from_responses<T: Real>(
    responses: &[StatementResponse<T>],
    type_weights: Option<&AssessmentTypeWeights<T>>,
    tree: &CompetenceTree,
) -> Result<AcdMatrix<T>, AssessError> {
    if responses.is_empty() {
        return Err(AssessError::EmptyResponseSet);
    }

    let mut candidates: Vec<String> = Vec::new();
    let mut present_types: Vec<AssessmentType> = Vec::new();
    let mut sets: BTreeMap<(String, CompetenceId, AssessmentType), Vec<&StatementResponse<T>>> =
        BTreeMap::new();
    for r in responses {
        if !candidates.contains(&r.assessee) {
            candidates.push(r.assessee.clone());
        }
        if !present_types.contains(&r.assessment_type) {
            present_types.push(r.assessment_type);
        }
        sets.entry((r.assessee.clone(), r.competence.clone(), r.assessment_type))
            .or_default()
            .push(r);
    }
    present_types.sort();

    let equal = AssessmentTypeWeights::equal(&present_types)?;
    let weights = type_weights.unwrap_or(&equal);

    let leaves: Vec<CompetenceId> = tree.level_ids(3).into_iter().cloned().collect();
    let mut values = Vec::with_capacity(candidates.len() * leaves.len());
    for candidate in &candidates {
        for leaf in &leaves {
            let mut per_type = BTreeMap::new();
            for (t, _) in weights.iter() {
                let set = sets
                    .get(&(candidate.clone(), leaf.clone(), t))
                    .ok_or_else(|| AssessError::MissingValue {
                        candidate: candidate.clone(),
                        competence: format!("{leaf} ({t})"),
                    })?;
                let owned: Vec<StatementResponse<T>> =
                    set.iter().map(|r| (*r).clone()).collect();
                per_type.insert(t, score_statement_set(&owned)?);
            }
            values.push(combine_assessment_types(&per_type, weights)?);
        }
    }

    Ok(AcdMatrix::new(
        Level::Three,
        ScoreMatrix::new(candidates, leaves, values).expect("unique keys by construction"),
    ))
}

/// Describes a sample: count, mean, sample standard deviation (absent for
/// fewer than two values), median, min and max.
#[derive(Debug, Clone, PartialEq)]
pub struct DescriptiveStats<T> {
    pub n: usize,
    pub mean: T,
    pub sd: Option<T>,
    pub median: T,
    pub min: T,
    pub max: T,
}

pub fn describe<T: Real>(values: &[T]) -> Result<DescriptiveStats<T>, AssessError> {
    if values.is_empty() {
        return Err(AssessError::EmptyInput);
    }
    let n = values.len();
    let nf = T::of_usize(n);
    let mean = values.iter().copied().sum::<T>() / nf;
    let sd = if n >= 2 {
        let ss = values
            .iter()
            .map(|&v| (v - mean) * (v - mean))
            .sum::<T>();
        Some((ss / (nf - T::one())).sqrt())
    } else {
        None
    };
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / T::of(2.0)
    };
    Ok(DescriptiveStats {
        n,
        mean,
        sd,
        median,
        min: sorted[0],
        max: sorted[n - 1],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::canonical_tree;

    fn cid(s: &str) -> CompetenceId {
        CompetenceId::parse(s).unwrap()
    }

    fn resp(value: u8, weight: f64) -> StatementResponse<f64> {
        StatementResponse::new(
            "cand",
            cid("C1.1.1"),
            format!("s{value}-{weight}"),
            value,
            weight,
            AssessorRole::Colleague,
            AssessmentType::MultiSource,
        )
        .unwrap()
    }

    #[test]
    fn statement_set_weighted_mean() {
        let all_fours: Vec<_> = (0..4).map(|_| resp(4, 0.25)).collect();
        assert_eq!(score_statement_set(&all_fours).unwrap(), 4.0);

        let midpoint = [resp(3, 0.5), resp(5, 0.5)];
        assert_eq!(score_statement_set(&midpoint).unwrap(), 4.0);

        let skewed = [resp(2, 0.9), resp(5, 0.1)];
        assert!((score_statement_set(&skewed).unwrap() - 2.3).abs() < 1e-12);
    }

    #[test]
    fn statement_set_errors() {
        assert!(matches!(
            score_statement_set::<f64>(&[]),
            Err(AssessError::EmptyResponseSet)
        ));
        assert!(matches!(
            score_statement_set(&[resp(3, 0.5), resp(4, 0.4)]),
            Err(AssessError::WeightSumViolation(_))
        ));
        let mut other = resp(3, 0.5);
        other.assessment_type = AssessmentType::SelfAssessment;
        assert!(matches!(
            score_statement_set(&[resp(3, 0.5), other]),
            Err(AssessError::MixedKeys(..))
        ));
        assert!(matches!(
            StatementResponse::<f64>::new(
                "c",
                cid("C1.1.1"),
                "s",
                6,
                1.0,
                AssessorRole::Manager,
                AssessmentType::MultiSource
            ),
            Err(AssessError::ScoreOutOfRange(_))
        ));
    }

    #[test]
    fn combine_types() {
        let single = AssessmentTypeWeights::new(
            [(AssessmentType::MultiSource, 1.0)].into_iter().collect(),
        )
        .unwrap();
        let values: BTreeMap<_, _> = [(AssessmentType::MultiSource, 3.5)].into_iter().collect();
        assert_eq!(combine_assessment_types(&values, &single).unwrap(), 3.5);

        let equal = AssessmentTypeWeights::default();
        let values: BTreeMap<_, _> = [
            (AssessmentType::MultiSource, 3.0),
            (AssessmentType::SelfAssessment, 5.0),
        ]
        .into_iter()
        .collect();
        assert_eq!(combine_assessment_types(&values, &equal).unwrap(), 4.0);

        // integer amounts are normalized: 3:1 becomes 0.75:0.25
        let weighted = AssessmentTypeWeights::new(
            [
                (AssessmentType::MultiSource, 3.0),
                (AssessmentType::SelfAssessment, 1.0),
            ]
            .into_iter()
            .collect(),
        )
        .unwrap();
        let values: BTreeMap<_, _> = [
            (AssessmentType::MultiSource, 4.25),
            (AssessmentType::SelfAssessment, 3.25),
        ]
        .into_iter()
        .collect();
        assert_eq!(combine_assessment_types(&values, &weighted).unwrap(), 4.0);

        let missing: BTreeMap<_, _> = [(AssessmentType::MultiSource, 4.0)].into_iter().collect();
        assert!(matches!(
            combine_assessment_types(&missing, &equal),
            Err(AssessError::MissingTypeValue(_))
        ));
    }

    #[test]
    fn rollup_single_group() {
        let tree = canonical_tree();
        let leaves: Vec<CompetenceId> = tree.level_ids(3).into_iter().cloned().collect();
        let mut values = vec![3.0f64; 48];
        // C1.1 children are the first four leaf columns in id order
        values[..4].copy_from_slice(&[4.0, 4.0, 4.0, 3.0]);
        let acd3 = AcdMatrix::new(
            Level::Three,
            ScoreMatrix::new(vec!["Cnd 1".into()], leaves.clone(), values).unwrap(),
        );
        let acd2 = rollup(&acd3, &RollupWeights::equal(&tree, Level::Three), &tree).unwrap();
        assert_eq!(acd2.level, Level::Two);
        assert!((acd2.matrix.value_at("Cnd 1", &cid("C1.1")).unwrap() - 3.75).abs() < 1e-12);

        // selector weights pick out a single child
        let mut groups = BTreeMap::new();
        for parent in tree.level_ids(2) {
            let children = tree.children(parent).unwrap();
            let mut g = BTreeMap::new();
            for (i, ch) in children.iter().enumerate() {
                g.insert((*ch).clone(), if i == 0 { 1.0 } else { 0.0 });
            }
            groups.insert(parent.clone(), g);
        }
        let selector = RollupWeights::new(groups).unwrap();
        let picked = rollup(&acd3, &selector, &tree).unwrap();
        assert_eq!(picked.matrix.value_at("Cnd 1", &cid("C1.1")).unwrap(), 4.0);
    }

    #[test]
    fn rollup_requires_full_coverage() {
        let tree = canonical_tree();
        let equal3 = RollupWeights::<f64>::equal(&tree, Level::Three);
        let acd1 = AcdMatrix::new(
            Level::One,
            ScoreMatrix::new(
                vec!["x".into()],
                tree.level_ids(1).into_iter().cloned().collect(),
                vec![3.0; 3],
            )
            .unwrap(),
        );
        assert!(matches!(
            rollup(&acd1, &equal3, &tree),
            Err(AssessError::LevelMismatch(1))
        ));

        let mut groups = BTreeMap::new();
        groups.insert(
            cid("C1.1"),
            [(cid("C1.1.1"), 1.0)].into_iter().collect::<BTreeMap<_, _>>(),
        );
        let partial = RollupWeights::new(groups).unwrap();
        let acd3 = AcdMatrix::new(
            Level::Three,
            ScoreMatrix::new(
                vec!["x".into()],
                tree.level_ids(3).into_iter().cloned().collect(),
                vec![3.0; 48],
            )
            .unwrap(),
        );
        assert!(matches!(
            rollup(&acd3, &partial, &tree),
            Err(AssessError::WeightCoverageGap(_))
        ));
    }

    #[test]
    fn level1_constant_matrix() {
        let tree = canonical_tree();
        let acd3 = AcdMatrix::new(
            Level::Three,
            ScoreMatrix::new(
                vec!["x".into()],
                tree.level_ids(3).into_iter().cloned().collect(),
                vec![5.0; 48],
            )
            .unwrap(),
        );
        let w3 = RollupWeights::equal(&tree, Level::Three);
        let w2 = RollupWeights::equal(&tree, Level::Two);
        let (acd1, totals) = level1_scores(&acd3, &tree, &w3, &w2).unwrap();
        assert!(acd1.matrix.values().iter().all(|&v| v == 5.0));
        assert_eq!(totals, vec![5.0]);
    }

    #[test]
    fn describe_basics() {
        let single = describe(&[3.0]).unwrap();
        assert_eq!(single.n, 1);
        assert_eq!(single.mean, 3.0);
        assert_eq!(single.sd, None);
        assert_eq!(single.median, 3.0);

        let even = describe(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(even.median, 2.5);

        let constant = describe(&[2.0; 5]).unwrap();
        assert_eq!(constant.sd, Some(0.0));
        assert_eq!(constant.mean, constant.median);
        assert_eq!(constant.min, constant.max);

        assert!(matches!(
            describe::<f64>(&[]),
            Err(AssessError::EmptyInput)
        ));
    }

    #[test]
    fn describe_sample_sd() {
        // sample (n-1) standard deviation of 1..5 is sqrt(2.5)
        let stats = describe(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert!((stats.sd.unwrap() - 2.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn responses_aggregate_to_acd3() {
        // single-leaf tree keeps the fixture small
        let tree = CompetenceTree::build(vec![
            crate::tree::CompetenceNode::new("C1", "r", None).unwrap(),
            crate::tree::CompetenceNode::new("C1.1", "m", Some("C1")).unwrap(),
            crate::tree::CompetenceNode::new("C1.1.1", "l", Some("C1.1")).unwrap(),
        ])
        .unwrap();
        let mk = |value, weight, t| {
            StatementResponse::new(
                "p1",
                cid("C1.1.1"),
                format!("{t:?}-{value}"),
                value,
                weight,
                AssessorRole::Colleague,
                t,
            )
            .unwrap()
        };
        let responses = vec![
            mk(4, 0.5, AssessmentType::MultiSource),
            mk(2, 0.5, AssessmentType::MultiSource),
            mk(5, 1.0, AssessmentType::SelfAssessment),
        ];
        // equal type weights: (3 + 5) / 2 = 4
        let acd = acd3_from_responses(&responses, None, &tree).unwrap();
        assert_eq!(acd.matrix.value_at("p1", &cid("C1.1.1")).unwrap(), 4.0);

        // a candidate missing one weighted type is an error
        let partial = vec![mk(4, 1.0, AssessmentType::MultiSource)];
        let both = AssessmentTypeWeights::default();
        assert!(matches!(
            acd3_from_responses(&partial, Some(&both), &tree),
            Err(AssessError::MissingValue { .. })
        ));
        // but aggregating over only the present types works
        let acd = acd3_from_responses(&partial, None, &tree).unwrap();
        assert_eq!(acd.matrix.value_at("p1", &cid("C1.1.1")).unwrap(), 4.0);
    }
}
