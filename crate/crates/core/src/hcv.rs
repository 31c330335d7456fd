//! Hierarchical cumulative voting: fixed-total allocations at levels 1 and 2
//! turned into normalized absolute level-2 weights.
//!
//! Each level-1 group receives an amount `w_i` out of a fixed total `f`
//! (usually 100), and the children of each group split `f` again among
//! themselves. The absolute weight of a level-2 competence is
//! `(w_i / f) * (y_ij / f)`; when both sum constraints hold these weights
//! sum to 1 by construction, and a final renormalization guards against
//! rounding residue in user-entered allocations.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::matrix::ScoreMatrix;
use crate::scalar::Real;
use crate::tree::{CompetenceId, CompetenceTree};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HcvError {
    #[error("allocation for {group} sums to {got}, expected {expected}")]
    AllocationSumMismatch {
        group: String,
        got: String,
        expected: String,
    },
    #[error("allocation amount {amount} for {id} outside [0, {f}]")]
    AmountOutOfRange {
        id: String,
        amount: String,
        f: String,
    },
    #[error("allocation does not cover {0}")]
    AllocationCoverageGap(String),
    #[error("allocation references {0} which is not in the tree at the expected level")]
    UnknownCompetence(String),
    #[error("weights do not cover matrix column {0}")]
    WeightCoverageGap(String),
    #[error("relative importance against a zero allocation for {0}")]
    DivisionByZeroWeight(String),
    #[error("{0} and {1} are not at the same level")]
    LevelMismatch(String, String),
    #[error("total must be positive, got {0}")]
    NonpositiveTotal(String),
}

impl HcvError {
    pub fn rule_name(&self) -> &'static str {
        match self {
            HcvError::AllocationSumMismatch { .. } => "AllocationSumMismatch",
            HcvError::AmountOutOfRange { .. } => "AmountOutOfRange",
            HcvError::AllocationCoverageGap(_) => "AllocationCoverageGap",
            HcvError::UnknownCompetence(_) => "UnknownCompetence",
            HcvError::WeightCoverageGap(_) => "WeightCoverageGap",
            HcvError::DivisionByZeroWeight(_) => "DivisionByZeroWeight",
            HcvError::LevelMismatch(..) => "LevelMismatch",
            HcvError::NonpositiveTotal(_) => "NonpositiveTotal",
        }
    }
}

fn sum_tolerance<T: Real>(f: T) -> T {
    (T::of(1e-9) * f.abs().max(T::one())).max(T::epsilon() * T::of(64.0) * f.abs())
}

/// Validated cumulative-voting allocation: level-1 amounts plus per-group
/// level-2 amounts, every group summing to the fixed total `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct HcvAllocation<T> {
    f: T,
    level1: BTreeMap<CompetenceId, T>,
    /// level-2 amounts grouped under their level-1 parent
    level2: BTreeMap<CompetenceId, BTreeMap<CompetenceId, T>>,
}

impl<T: Real> HcvAllocation<T> {
    /// Validates amounts against the tree: full coverage of levels 1 and 2,
    /// every amount in `[0, f]`, and each group summing to `f`.
    pub fn new(
        f: T,
        level1: BTreeMap<CompetenceId, T>,
        level2: BTreeMap<CompetenceId, T>,
        tree: &CompetenceTree,
    ) -> Result<Self, HcvError> {
        if !(f > T::zero()) {
            return Err(HcvError::NonpositiveTotal(format!("{f}")));
        }
        let tol = sum_tolerance(f);

        for id in level1.keys().chain(level2.keys()) {
            if !tree.contains(id) {
                return Err(HcvError::UnknownCompetence(id.to_string()));
            }
        }

        let roots = tree.roots();
        for root in &roots {
            if !level1.contains_key(root) {
                return Err(HcvError::AllocationCoverageGap(root.to_string()));
            }
        }
        if level1.len() != roots.len() {
            let stray = level1
                .keys()
                .find(|id| id.level() != 1)
                .expect("extra key must be non-root");
            return Err(HcvError::UnknownCompetence(stray.to_string()));
        }
        check_group_sum(&level1, f, tol, "level-1")?;

        let mut grouped: BTreeMap<CompetenceId, BTreeMap<CompetenceId, T>> = BTreeMap::new();
        for root in &roots {
            let mut group = BTreeMap::new();
            for child in tree.children(root).expect("root exists") {
                let amount = *level2
                    .get(child)
                    .ok_or_else(|| HcvError::AllocationCoverageGap(child.to_string()))?;
                group.insert(child.clone(), amount);
            }
            check_group_sum(&group, f, tol, &root.to_string())?;
            grouped.insert((*root).clone(), group);
        }
        let covered: usize = grouped.values().map(|g| g.len()).sum();
        if level2.len() != covered {
            let stray = level2
                .keys()
                .find(|id| id.level() != 2 || !tree.contains(id))
                .or_else(|| {
                    level2
                        .keys()
                        .find(|id| !grouped.values().any(|g| g.contains_key(*id)))
                })
                .expect("extra key exists");
            return Err(HcvError::UnknownCompetence(stray.to_string()));
        }

        Ok(HcvAllocation {
            f,
            level1,
            level2: grouped,
        })
    }

    pub fn total(&self) -> T {
        self.f
    }

    pub fn level1_amount(&self, id: &CompetenceId) -> Option<T> {
        self.level1.get(id).copied()
    }

    pub fn level2_amount(&self, id: &CompetenceId) -> Option<T> {
        self.level2.values().find_map(|g| g.get(id).copied())
    }

    /// Absolute level-2 weights: product of the normalized level-1 and
    /// level-2 shares, renormalized by the computed total as a numerical
    /// safeguard.
    pub fn absolute_weights(&self) -> WeightScheme<T> {
        let mut weights = BTreeMap::new();
        for (parent, group) in &self.level2 {
            let share1 = self.level1[parent] / self.f;
            for (child, amount) in group {
                weights.insert(child.clone(), share1 * (*amount / self.f));
            }
        }
        let total: T = weights.values().copied().sum();
        if total > T::zero() {
            for w in weights.values_mut() {
                *w = *w / total;
            }
        }
        WeightScheme { weights }
    }

    /// Ratio of raw allocation amounts between two ids at the same level.
    pub fn relative_importance(
        &self,
        a: &CompetenceId,
        b: &CompetenceId,
    ) -> Result<T, HcvError> {
        if a.level() != b.level() {
            return Err(HcvError::LevelMismatch(a.to_string(), b.to_string()));
        }
        let (num, den) = match a.level() {
            1 => (self.level1_amount(a), self.level1_amount(b)),
            2 => (self.level2_amount(a), self.level2_amount(b)),
            _ => (None, None),
        };
        let num = num.ok_or_else(|| HcvError::UnknownCompetence(a.to_string()))?;
        let den = den.ok_or_else(|| HcvError::UnknownCompetence(b.to_string()))?;
        if den == T::zero() {
            return Err(HcvError::DivisionByZeroWeight(b.to_string()));
        }
        Ok(num / den)
    }
}

fn check_group_sum<T: Real>(
    group: &BTreeMap<CompetenceId, T>,
    f: T,
    tol: T,
    label: &str,
) -> Result<(), HcvError> {
    for (id, amount) in group {
        if *amount < T::zero() || *amount > f {
            return Err(HcvError::AmountOutOfRange {
                id: id.to_string(),
                amount: format!("{amount}"),
                f: format!("{f}"),
            });
        }
    }
    let total: T = group.values().copied().sum();
    if (total - f).abs() > tol {
        return Err(HcvError::AllocationSumMismatch {
            group: label.to_string(),
            got: format!("{total}"),
            expected: format!("{f}"),
        });
    }
    Ok(())
}

/// Absolute level-2 weights summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightScheme<T> {
    weights: BTreeMap<CompetenceId, T>,
}

impl<T: Real> WeightScheme<T> {
    pub fn get(&self, id: &CompetenceId) -> Option<T> {
        self.weights.get(id).copied()
    }

    /// Entries in id order.
    pub fn iter(&self) -> impl Iterator<Item = (&CompetenceId, T)> + '_ {
        self.weights.iter().map(|(k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn sum(&self) -> T {
        self.weights.values().copied().sum()
    }
}

/// Multiplies every matrix entry by its column weight. Applies identically
/// to ACD matrices and single-row RCD matrices.
pub fn apply_weights<T: Real>(
    matrix: &ScoreMatrix<T>,
    scheme: &WeightScheme<T>,
) -> Result<ScoreMatrix<T>, HcvError> {
    let mut col_weights = Vec::with_capacity(matrix.n_competences());
    for id in matrix.competences() {
        let w = scheme
            .get(id)
            .ok_or_else(|| HcvError::WeightCoverageGap(id.to_string()))?;
        col_weights.push(w);
    }
    let mut values = Vec::with_capacity(matrix.values().len());
    for row in 0..matrix.n_candidates() {
        for (col, &w) in col_weights.iter().enumerate() {
            values.push(matrix.get(row, col) * w);
        }
    }
    Ok(ScoreMatrix::new(
        matrix.candidates().to_vec(),
        matrix.competences().to_vec(),
        values,
    )
    .expect("shape preserved"))
}
