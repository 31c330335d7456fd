//! Competence gap analytics over a three-level taxonomy: Likert score
//! rollups, cumulative-voting weight schemes, gap indicators in the
//! qualification space, blocked two-way ANOVA and Scott-Knott clustering
//! of candidates, plus the file formats and reports the CLI exposes.
//!
//! All numeric code is generic over the [`scalar::Real`] scalar (`f32` or
//! `f64`); the aliases at the crate root fix `f64`, which is what the file
//! formats and the CLI use.

pub mod anova;
pub mod assess;
pub mod dist;
pub mod eligibility;
pub mod gap;
pub mod hcv;
pub mod io;
pub mod matrix;
pub mod pipeline;
pub mod profile;
pub mod rank;
pub mod scalar;
pub mod scott_knott;
pub mod special;
pub mod tree;

pub use matrix::Level;
pub use rank::{Policy, Qualification};
pub use scalar::Real;
pub use tree::{CompetenceId, CompetenceNode, CompetenceTree};
pub use gap::{GapKind, QsSide};

/// Default scalar used by the CLI and the file formats.
pub type Scalar = f64;

pub type ScoreMatrix = matrix::ScoreMatrix<Scalar>;
pub type AcdMatrix = matrix::AcdMatrix<Scalar>;
pub type JobProfile = profile::JobProfile<Scalar>;
pub type HcvAllocation = hcv::HcvAllocation<Scalar>;
pub type WeightScheme = hcv::WeightScheme<Scalar>;
pub type RollupWeights = assess::RollupWeights<Scalar>;
pub type AssessmentTypeWeights = assess::AssessmentTypeWeights<Scalar>;
pub type StatementResponse = assess::StatementResponse<Scalar>;
pub type DescriptiveStats = assess::DescriptiveStats<Scalar>;
pub type GapMatrix = gap::GapMatrix<Scalar>;
pub type QualificationPoint = gap::QualificationPoint<Scalar>;
pub type EligibilityRule = eligibility::EligibilityRule<Scalar>;
pub type AnovaTable = anova::AnovaTable<Scalar>;
pub type ClusterPartition = scott_knott::ClusterPartition<Scalar>;
pub type RankedRow = rank::RankedRow<Scalar>;
pub type PipelineConfig = pipeline::PipelineConfig<Scalar>;
pub type RunResult = pipeline::RunResult<Scalar>;
pub type PipelineError = pipeline::PipelineError;
