//! The ranked report and selection policies.
//!
//! Joins the cluster partition with the qualification points and the gap
//! matrix into one row per candidate, ordered by descending mean gap, and
//! re-orders clusters under the two hiring policies.

use thiserror::Error;

use crate::gap::{GapKind, GapMatrix, QualificationPoint};
use crate::scalar::Real;
use crate::scott_knott::ClusterPartition;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RankError {
    #[error("partition, points and gap matrix cover different candidates ({0})")]
    CandidateMismatch(String),
    #[error("expected a simple-gap matrix, got {0:?}")]
    KindMismatch(GapKind),
}

impl RankError {
    pub fn rule_name(&self) -> &'static str {
        match self {
            RankError::CandidateMismatch(_) => "CandidateMismatch",
            RankError::KindMismatch(_) => "KindMismatch",
        }
    }
}

/// Over- or under-qualified, by the sign of the mean gap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Qualification {
    Over,
    Under,
}

impl Qualification {
    pub fn as_str(self) -> &'static str {
        match self {
            Qualification::Over => "Over-",
            Qualification::Under => "Under-",
        }
    }
}

/// One row of the ranked report.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedRow<T> {
    pub rank: usize,
    pub candidate: String,
    pub msg: T,
    /// Mean gap minus one sample standard deviation of the candidate's gaps.
    pub lower: T,
    /// Mean gap plus one sample standard deviation of the candidate's gaps.
    pub upper: T,
    /// 1-based cluster index, best cluster first.
    pub cluster: usize,
    pub qualification: Qualification,
}

/// Builds the report rows: descending mean gap, ties broken by candidate id.
pub fn rank_and_label<T: Real>(
    partition: &ClusterPartition<T>,
    points: &[QualificationPoint<T>],
    gaps: &GapMatrix<T>,
) -> Result<Vec<RankedRow<T>>, RankError> {
    if gaps.kind != GapKind::Simple {
        return Err(RankError::KindMismatch(gaps.kind));
    }
    let n = points.len();
    if partition.candidate_count() != n || gaps.matrix.n_candidates() != n {
        return Err(RankError::CandidateMismatch(format!(
            "{} in partition, {} points, {} gap rows",
            partition.candidate_count(),
            n,
            gaps.matrix.n_candidates()
        )));
    }

    let mut rows = Vec::with_capacity(n);
    for point in points {
        let cluster = partition.cluster_of(&point.candidate).ok_or_else(|| {
            RankError::CandidateMismatch(format!("{:?} missing from partition", point.candidate))
        })?;
        let row = gaps.matrix.candidate_index(&point.candidate).map_err(|_| {
            RankError::CandidateMismatch(format!("{:?} missing from gap matrix", point.candidate))
        })?;
        let sd = sample_sd(gaps.matrix.row(row));
        let qualification = if point.msg >= T::zero() {
            Qualification::Over
        } else {
            Qualification::Under
        };
        rows.push(RankedRow {
            rank: 0,
            candidate: point.candidate.clone(),
            msg: point.msg,
            lower: point.msg - sd,
            upper: point.msg + sd,
            cluster,
            qualification,
        });
    }

    rows.sort_by(|a, b| {
        b.msg
            .partial_cmp(&a.msg)
            .expect("finite means")
            .then_with(|| a.candidate.cmp(&b.candidate))
    });
    for (i, row) in rows.iter_mut().enumerate() {
        row.rank = i + 1;
    }
    Ok(rows)
}

fn sample_sd<T: Real>(values: &[T]) -> T {
    let n = values.len();
    if n < 2 {
        return T::zero();
    }
    let nf = T::of_usize(n);
    let mean = values.iter().copied().sum::<T>() / nf;
    let ss = values.iter().map(|&v| (v - mean) * (v - mean)).sum::<T>();
    (ss / (nf - T::one())).sqrt()
}

/// How to order clusters when recommending candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Policy {
    /// Highest mean gap cluster first (most over-qualified).
    MostQualified,
    /// Cluster nearest the equilibrium line first (least absolute gap).
    ClosestFit,
}

impl Policy {
    pub fn as_str(self) -> &'static str {
        match self {
            Policy::MostQualified => "most_qualified",
            Policy::ClosestFit => "closest_fit",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "most_qualified" => Some(Policy::MostQualified),
            "closest_fit" => Some(Policy::ClosestFit),
            _ => None,
        }
    }
}

/// Re-orders the report's clusters under a policy, keeping within-cluster
/// order untouched.
pub fn apply_policy<T: Real>(rows: &[RankedRow<T>], policy: Policy) -> Vec<RankedRow<T>> {
    // rows are cluster-contiguous because clusters never interleave in mean
    // order; group them without assuming index arithmetic
    let mut groups: Vec<Vec<RankedRow<T>>> = Vec::new();
    for row in rows {
        match groups.last_mut() {
            Some(group) if group[0].cluster == row.cluster => group.push(row.clone()),
            _ => groups.push(vec![row.clone()]),
        }
    }
    match policy {
        Policy::MostQualified => {}
        Policy::ClosestFit => {
            groups.sort_by(|a, b| {
                let mean_abs = |g: &[RankedRow<T>]| {
                    g.iter().map(|r| r.msg.abs()).sum::<T>() / T::of_usize(g.len())
                };
                mean_abs(a)
                    .partial_cmp(&mean_abs(b))
                    .expect("finite means")
                    .then_with(|| a[0].cluster.cmp(&b[0].cluster))
            });
        }
    }
    groups.into_iter().flatten().collect()
}
