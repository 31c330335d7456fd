//! Scott-Knott clustering of candidate means.
//!
//! Recursive binary partitioning of the sorted means: at each step the
//! contiguous split maximizing the between-group sum of squares is tested
//! with a chi-square criterion; significant groups are split further,
//! the rest become homogeneous clusters. The result is a ranking into
//! non-overlapping groups, unlike pairwise multiple-comparison tests.

use thiserror::Error;

use crate::dist::{chi_sq_critical, DistError};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SkError {
    #[error("need at least 2 means to split, got {0}")]
    TooFewMeans(usize),
    #[error("means must be sorted ascending")]
    UnsortedInput,
    #[error("error variance must be positive, got {0}")]
    NonpositiveVariance(String),
    #[error("no candidates to cluster")]
    EmptyInput,
    #[error(transparent)]
    Dist(#[from] DistError),
}

impl SkError {
    pub fn rule_name(&self) -> &'static str {
        match self {
            SkError::TooFewMeans(_) => "TooFewMeans",
            SkError::UnsortedInput => "UnsortedInput",
            SkError::NonpositiveVariance(_) => "NonpositiveVariance",
            SkError::EmptyInput => "EmptyInput",
            SkError::Dist(e) => e.rule_name(),
        }
    }
}

/// Best contiguous split of ascending means: evaluates every cut position,
/// returns the index (size of the lower group) and the maximal
/// between-group sum of squares, scaled by the number of blocks behind each
/// mean. Ties break toward the smallest index.
pub fn best_split<T: Real>(sorted_means: &[T], k_blocks: usize) -> Result<(usize, T), SkError> {
    let n = sorted_means.len();
    if n < 2 {
        return Err(SkError::TooFewMeans(n));
    }
    if sorted_means.windows(2).any(|w| w[0] > w[1]) {
        return Err(SkError::UnsortedInput);
    }
    let k = T::of_usize(k_blocks);
    let total: T = sorted_means.iter().copied().sum();
    let grand = total / T::of_usize(n);

    let mut best_index = 1;
    let mut best_ss = T::neg_infinity();
    let mut lower_sum = T::zero();
    for i in 1..n {
        lower_sum = lower_sum + sorted_means[i - 1];
        let upper_sum = total - lower_sum;
        let n1 = T::of_usize(i);
        let n2 = T::of_usize(n - i);
        let d1 = lower_sum / n1 - grand;
        let d2 = upper_sum / n2 - grand;
        let ss = k * (n1 * d1 * d1 + n2 * d2 * d2);
        if ss > best_ss {
            best_ss = ss;
            best_index = i;
        }
    }
    Ok((best_index, best_ss))
}

/// One homogeneous group of candidates, members ordered by descending mean.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster<T> {
    pub members: Vec<String>,
    pub mean_msg: T,
}

/// Ranking into non-overlapping clusters, best (highest mean gap) first.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterPartition<T> {
    pub clusters: Vec<Cluster<T>>,
}

impl<T: Real> ClusterPartition<T> {
    /// 1-based cluster index of a candidate, if present.
    pub fn cluster_of(&self, candidate: &str) -> Option<usize> {
        self.clusters
            .iter()
            .position(|c| c.members.iter().any(|m| m == candidate))
            .map(|i| i + 1)
    }

    pub fn candidate_count(&self) -> usize {
        self.clusters.iter().map(|c| c.members.len()).sum()
    }
}

/// Runs the recursive clustering over per-candidate mean gaps.
///
/// `s2` is the error mean square from the block-design ANOVA, estimated once
/// and reused at every recursion depth; `k_blocks` is the number of blocks
/// (level-2 competences) behind each mean.
pub fn scott_knott<T: Real>(
    msg_by_candidate: &[(String, T)],
    s2: T,
    k_blocks: usize,
    alpha: T,
) -> Result<ClusterPartition<T>, SkError> {
    if msg_by_candidate.is_empty() {
        return Err(SkError::EmptyInput);
    }
    if !(s2 > T::zero()) {
        return Err(SkError::NonpositiveVariance(format!("{s2}")));
    }
    if !(alpha > T::zero() && alpha < T::one()) {
        return Err(SkError::Dist(DistError::InvalidAlpha(format!("{alpha}"))));
    }

    // ascending by mean, then by id for a deterministic order under ties
    let mut entries: Vec<(String, T)> = msg_by_candidate.to_vec();
    entries.sort_by(|a, b| {
        a.1.partial_cmp(&b.1)
            .expect("finite means")
            .then_with(|| a.0.cmp(&b.0))
    });

    let pi = T::pi();
    let lambda_scale = pi / (T::of(2.0) * (pi - T::of(2.0)));

    let mut ascending: Vec<Cluster<T>> = Vec::new();
    split_group(&entries, s2, k_blocks, alpha, lambda_scale, &mut ascending)?;

    let mut clusters: Vec<Cluster<T>> = ascending.into_iter().rev().collect();
    for cluster in &mut clusters {
        cluster.members.reverse(); // descending mean within each cluster
    }
    Ok(ClusterPartition { clusters })
}

fn split_group<T: Real>(
    group: &[(String, T)],
    s2: T,
    k_blocks: usize,
    alpha: T,
    lambda_scale: T,
    out: &mut Vec<Cluster<T>>,
) -> Result<(), SkError> {
    let emit = |out: &mut Vec<Cluster<T>>| {
        let mean = group.iter().map(|(_, m)| *m).sum::<T>() / T::of_usize(group.len());
        out.push(Cluster {
            members: group.iter().map(|(id, _)| id.clone()).collect(),
            mean_msg: mean,
        });
    };
    if group.len() < 2 {
        emit(out);
        return Ok(());
    }

    let means: Vec<T> = group.iter().map(|(_, m)| *m).collect();
    let (index, bg_ss) = best_split(&means, k_blocks)?;
    let lambda = lambda_scale * bg_ss / s2;
    // degrees of freedom from the number of means under test, floored at 1
    let nu_raw = T::of_usize(group.len()) / (T::pi() - T::of(2.0));
    let nu = (nu_raw.round().to_usize().unwrap_or(1)).max(1);
    let critical = chi_sq_critical(nu, alpha)?;

    if lambda > critical {
        split_group(&group[..index], s2, k_blocks, alpha, lambda_scale, out)?;
        split_group(&group[index..], s2, k_blocks, alpha, lambda_scale, out)?;
    } else {
        emit(out);
    }
    Ok(())
}
