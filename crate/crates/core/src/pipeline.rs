//! End-to-end pipeline: eligibility filter, rollups, weighting, gaps,
//! ANOVA, clustering and the ranked report, with every intermediate
//! artifact kept for export.

use thiserror::Error;

use crate::assess::{describe, level1_scores, rollup, AssessError, AssessmentTypeWeights,
    DescriptiveStats, RollupWeights};
use crate::dist::DistError;
use crate::eligibility::{filter_eligible, EligibilityError, EligibilityOutcome};
use crate::gap::{gap_scores, qualification_points, GapError, GapKind, GapMatrix,
    QualificationPoint};
use crate::anova::{rcbd_anova, AnovaError, AnovaTable};
use crate::hcv::{apply_weights, HcvError, WeightScheme};
use crate::matrix::{AcdMatrix, Level, MatrixError, ScoreMatrix};
use crate::profile::JobProfile;
use crate::rank::{apply_policy, rank_and_label, Policy, RankError, RankedRow};
use crate::scalar::Real;
use crate::scott_knott::{scott_knott, ClusterPartition, SkError};
use crate::tree::CompetenceTree;

/// Error from one pipeline stage, tagged with the stage name.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{stage}: {source}")]
pub struct PipelineError {
    pub stage: &'static str,
    #[source]
    pub source: StageError,
}

impl PipelineError {
    pub fn rule_name(&self) -> &'static str {
        self.source.rule_name()
    }

    /// True for numerical failures (degenerate variance and friends), as
    /// opposed to input validation problems.
    pub fn is_computational(&self) -> bool {
        matches!(
            self.source,
            StageError::Anova(AnovaError::DegenerateVariance)
                | StageError::Sk(SkError::NonpositiveVariance(_))
        )
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StageError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Assess(#[from] AssessError),
    #[error(transparent)]
    Eligibility(#[from] EligibilityError),
    #[error(transparent)]
    Hcv(#[from] HcvError),
    #[error(transparent)]
    Gap(#[from] GapError),
    #[error(transparent)]
    Anova(#[from] AnovaError),
    #[error(transparent)]
    Sk(#[from] SkError),
    #[error(transparent)]
    Rank(#[from] RankError),
    #[error(transparent)]
    Dist(#[from] DistError),
}

impl StageError {
    pub fn rule_name(&self) -> &'static str {
        match self {
            StageError::Matrix(e) => e.rule_name(),
            StageError::Assess(e) => e.rule_name(),
            StageError::Eligibility(e) => e.rule_name(),
            StageError::Hcv(e) => e.rule_name(),
            StageError::Gap(e) => e.rule_name(),
            StageError::Anova(e) => e.rule_name(),
            StageError::Sk(e) => e.rule_name(),
            StageError::Rank(e) => e.rule_name(),
            StageError::Dist(e) => e.rule_name(),
        }
    }
}

fn at<E: Into<StageError>>(stage: &'static str) -> impl FnOnce(E) -> PipelineError {
    move |e| PipelineError {
        stage,
        source: e.into(),
    }
}

/// Run configuration; the defaults reproduce the reference dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig<T> {
    pub alpha: T,
    pub gap_kind: GapKind,
    pub policy: Policy,
    pub display_decimals: usize,
    pub assessment_type_weights: AssessmentTypeWeights<T>,
    /// Level-3 to level-2 rollup weights; equal per group when absent.
    pub rollup_weights_l3: Option<RollupWeights<T>>,
    /// Level-2 to level-1 rollup weights; equal per group when absent.
    pub rollup_weights_l2: Option<RollupWeights<T>>,
}

impl<T: Real> Default for PipelineConfig<T> {
    fn default() -> Self {
        PipelineConfig {
            alpha: T::of(0.05),
            gap_kind: GapKind::Simple,
            policy: Policy::MostQualified,
            display_decimals: 2,
            assessment_type_weights: AssessmentTypeWeights::default(),
            rollup_weights_l3: None,
            rollup_weights_l2: None,
        }
    }
}

/// Descriptive statistics row of the level-1 summary table.
#[derive(Debug, Clone, PartialEq)]
pub struct StatsRow<T> {
    pub label: String,
    pub stats: DescriptiveStats<T>,
}

/// Everything one run produces. `acd3` keeps all candidates; every other
/// matrix covers the post-filter eligible set.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult<T> {
    pub job_id: String,
    pub config: PipelineConfig<T>,
    pub acd3: AcdMatrix<T>,
    pub eligibility: EligibilityOutcome<T>,
    pub acd2: AcdMatrix<T>,
    pub rcd2: ScoreMatrix<T>,
    pub acd1: AcdMatrix<T>,
    pub totals: Vec<T>,
    pub stats: Vec<StatsRow<T>>,
    pub weights: WeightScheme<T>,
    pub weighted_acd2: ScoreMatrix<T>,
    pub weighted_rcd2: ScoreMatrix<T>,
    /// Signed gaps; feeds the indicators, the ANOVA and the clustering.
    pub gaps: GapMatrix<T>,
    /// Present when the configured export kind is not the signed gap.
    pub gaps_alt: Option<GapMatrix<T>>,
    pub points: Vec<QualificationPoint<T>>,
    pub anova: AnovaTable<T>,
    pub partition: ClusterPartition<T>,
    pub ranking: Vec<RankedRow<T>>,
    /// Ranking rows re-ordered by the configured policy.
    pub recommendation: Vec<RankedRow<T>>,
}

/// Checks that every level-3 score sits inside the 1-5 mark range.
pub fn check_acd_scores<T: Real>(acd3: &AcdMatrix<T>) -> Result<(), AssessError> {
    let m = &acd3.matrix;
    for (i, &v) in m.values().iter().enumerate() {
        if !v.is_finite() || v < T::one() || v > T::of(5.0) {
            let cols = m.n_competences();
            return Err(AssessError::ScoreOutOfRange(format!(
                "{} for {} / {}",
                v,
                m.candidates()[i / cols],
                m.competences()[i % cols]
            )));
        }
    }
    Ok(())
}

/// Level-1 rollup plus the descriptive-statistics rows (the total first,
/// then one row per level-1 category).
pub fn level1_stats<T: Real>(
    tree: &CompetenceTree,
    acd3: &AcdMatrix<T>,
    weights_l3: &RollupWeights<T>,
    weights_l2: &RollupWeights<T>,
) -> Result<(AcdMatrix<T>, Vec<T>, Vec<StatsRow<T>>), PipelineError> {
    let (acd1, totals) =
        level1_scores(acd3, tree, weights_l3, weights_l2).map_err(at("rollup"))?;
    let mut stats = vec![StatsRow {
        label: "Total".to_string(),
        stats: describe(&totals).map_err(at("stats"))?,
    }];
    for (j, id) in acd1.matrix.competences().iter().enumerate() {
        let column: Vec<T> = (0..acd1.matrix.n_candidates())
            .map(|i| acd1.matrix.get(i, j))
            .collect();
        stats.push(StatsRow {
            label: id.to_string(),
            stats: describe(&column).map_err(at("stats"))?,
        });
    }
    Ok((acd1, totals, stats))
}

/// Runs the whole pipeline over validated inputs.
pub fn run_pipeline<T: Real>(
    tree: &CompetenceTree,
    acd3: &AcdMatrix<T>,
    profile: &JobProfile<T>,
    config: &PipelineConfig<T>,
) -> Result<RunResult<T>, PipelineError> {
    // -- validate
    if !(config.alpha > T::zero() && config.alpha < T::one()) {
        return Err(at("validate")(DistError::InvalidAlpha(format!(
            "{}",
            config.alpha
        ))));
    }
    acd3.check_columns(tree).map_err(at("validate"))?;
    check_acd_scores(acd3).map_err(at("validate"))?;

    let equal_l3 = RollupWeights::equal(tree, Level::Three);
    let equal_l2 = RollupWeights::equal(tree, Level::Two);
    let w3 = config.rollup_weights_l3.as_ref().unwrap_or(&equal_l3);
    let w2 = config.rollup_weights_l2.as_ref().unwrap_or(&equal_l2);

    // -- eligibility
    let eligibility = filter_eligible(acd3, tree, &profile.eligibility, w3, w2)
        .map_err(at("eligibility"))?;
    let eligible_matrix = acd3
        .matrix
        .select_candidates(&eligibility.eligible)
        .map_err(at("eligibility"))?;
    let eligible_acd3 = AcdMatrix::new(Level::Three, eligible_matrix);

    // -- rollup
    let acd2 = rollup(&eligible_acd3, w3, tree).map_err(at("rollup"))?;
    let (rcd_level, rcd3_matrix) = profile.rcd3_matrix(tree);
    let rcd3 = AcdMatrix::new(rcd_level, rcd3_matrix);
    let rcd2 = rollup(&rcd3, w3, tree).map_err(at("rollup"))?;

    // -- stats
    let (acd1, totals, stats) = level1_stats(tree, &eligible_acd3, w3, w2)?;

    // -- weights
    let weights = profile.hcv.absolute_weights();
    let weighted_acd2 = apply_weights(&acd2.matrix, &weights).map_err(at("weights"))?;
    let weighted_rcd2 = apply_weights(&rcd2.matrix, &weights).map_err(at("weights"))?;

    // -- gap
    let gaps =
        gap_scores(&weighted_acd2, &weighted_rcd2, GapKind::Simple).map_err(at("gap"))?;
    let gaps_alt = if config.gap_kind != GapKind::Simple {
        Some(
            gap_scores(&weighted_acd2, &weighted_rcd2, config.gap_kind)
                .map_err(at("gap"))?,
        )
    } else {
        None
    };
    let points = qualification_points(&gaps).map_err(at("gap"))?;

    // -- anova
    let anova = rcbd_anova(&gaps).map_err(at("anova"))?;

    // -- clustering
    let msg: Vec<(String, T)> = points
        .iter()
        .map(|p| (p.candidate.clone(), p.msg))
        .collect();
    let partition = scott_knott(
        &msg,
        anova.s2(),
        gaps.matrix.n_competences(),
        config.alpha,
    )
    .map_err(at("clustering"))?;

    // -- ranking
    let ranking = rank_and_label(&partition, &points, &gaps).map_err(at("ranking"))?;
    let recommendation = apply_policy(&ranking, config.policy);

    Ok(RunResult {
        job_id: profile.job_id.clone(),
        config: config.clone(),
        acd3: acd3.clone(),
        eligibility,
        acd2,
        rcd2: rcd2.matrix,
        acd1,
        totals,
        stats,
        weights,
        weighted_acd2,
        weighted_rcd2,
        gaps,
        gaps_alt,
        points,
        anova,
        partition,
        ranking,
        recommendation,
    })
}
