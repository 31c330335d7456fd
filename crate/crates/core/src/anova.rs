//! Two-way additive ANOVA for the randomized complete block design:
//! candidates as treatments, level-2 competences as blocks, one observation
//! per cell.

use thiserror::Error;

use crate::dist::{f_sf, DistError};
use crate::gap::{GapKind, GapMatrix};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnovaError {
    #[error("expected a simple-gap matrix, got {0:?}")]
    KindMismatch(GapKind),
    #[error("gap matrix has a non-finite value for {candidate:?} / {competence}")]
    IncompleteMatrix {
        candidate: String,
        competence: String,
    },
    #[error("need at least 2 treatments, got {0}")]
    TooFewTreatments(usize),
    #[error("need at least 2 blocks, got {0}")]
    TooFewBlocks(usize),
    #[error("error sum of squares is zero; F is undefined")]
    DegenerateVariance,
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error("effect size {0} outside [0, 1]")]
    OutOfRange(String),
}

impl AnovaError {
    pub fn rule_name(&self) -> &'static str {
        match self {
            AnovaError::KindMismatch(_) => "KindMismatch",
            AnovaError::IncompleteMatrix { .. } => "IncompleteMatrix",
            AnovaError::TooFewTreatments(_) => "TooFewTreatments",
            AnovaError::TooFewBlocks(_) => "TooFewBlocks",
            AnovaError::DegenerateVariance => "DegenerateVariance",
            AnovaError::Dist(e) => e.rule_name(),
            AnovaError::OutOfRange(_) => "OutOfRange",
        }
    }
}

/// Sum of squares, degrees of freedom, mean square, F, p and partial eta
/// squared for one factor.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorStats<T> {
    pub ss: T,
    pub df: usize,
    pub ms: T,
    pub f: T,
    pub p: T,
    pub partial_eta_squared: T,
}

/// Full ANOVA table for the balanced complete two-way design.
#[derive(Debug, Clone, PartialEq)]
pub struct AnovaTable<T> {
    /// Candidates.
    pub treatments: FactorStats<T>,
    /// Level-2 competences.
    pub blocks: FactorStats<T>,
    pub error_ss: T,
    pub error_df: usize,
    /// Error mean square; the s-squared reused by the clustering stage.
    pub error_ms: T,
}

impl<T: Real> AnovaTable<T> {
    pub fn s2(&self) -> T {
        self.error_ms
    }

    pub fn total_ss(&self) -> T {
        self.treatments.ss + self.blocks.ss + self.error_ss
    }
}

/// Runs the blocked two-way ANOVA on a signed gap matrix (rows candidates,
/// columns blocks).
pub fn rcbd_anova<T: Real>(gaps: &GapMatrix<T>) -> Result<AnovaTable<T>, AnovaError> {
    if gaps.kind != GapKind::Simple {
        return Err(AnovaError::KindMismatch(gaps.kind));
    }
    let m = &gaps.matrix;
    let t = m.n_candidates();
    let c = m.n_competences();
    if t < 2 {
        return Err(AnovaError::TooFewTreatments(t));
    }
    if c < 2 {
        return Err(AnovaError::TooFewBlocks(c));
    }
    for (i, &v) in m.values().iter().enumerate() {
        if !v.is_finite() {
            return Err(AnovaError::IncompleteMatrix {
                candidate: m.candidates()[i / c].clone(),
                competence: m.competences()[i % c].to_string(),
            });
        }
    }

    let t_f = T::of_usize(t);
    let c_f = T::of_usize(c);
    let grand = m.values().iter().copied().sum::<T>() / (t_f * c_f);
    let treat_means: Vec<T> = (0..t)
        .map(|i| m.row(i).iter().copied().sum::<T>() / c_f)
        .collect();
    let block_means: Vec<T> = (0..c)
        .map(|j| (0..t).map(|i| m.get(i, j)).sum::<T>() / t_f)
        .collect();

    let ss_treat = c_f
        * treat_means
            .iter()
            .map(|&ti| (ti - grand) * (ti - grand))
            .sum::<T>();
    let ss_block = t_f
        * block_means
            .iter()
            .map(|&bj| (bj - grand) * (bj - grand))
            .sum::<T>();
    // residuals directly, not by subtraction, so the error SS is exactly
    // non-negative
    let mut ss_error = T::zero();
    for i in 0..t {
        for j in 0..c {
            let r = m.get(i, j) - treat_means[i] - block_means[j] + grand;
            ss_error = ss_error + r * r;
        }
    }

    let df_treat = t - 1;
    let df_block = c - 1;
    let df_error = df_treat * df_block;
    if !(ss_error > T::zero()) {
        return Err(AnovaError::DegenerateVariance);
    }
    let ms_error = ss_error / T::of_usize(df_error);

    let factor = |ss: T, df: usize| -> Result<FactorStats<T>, AnovaError> {
        let ms = ss / T::of_usize(df);
        let f = ms / ms_error;
        let p = f_sf(f, df, df_error)?;
        Ok(FactorStats {
            ss,
            df,
            ms,
            f,
            p,
            partial_eta_squared: ss / (ss + ss_error),
        })
    };

    Ok(AnovaTable {
        treatments: factor(ss_treat, df_treat)?,
        blocks: factor(ss_block, df_block)?,
        error_ss: ss_error,
        error_df: df_error,
        error_ms: ms_error,
    })
}

/// Conventional effect-size benchmarks for partial eta squared.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EffectSize {
    Negligible,
    Small,
    Medium,
    Large,
}

impl EffectSize {
    pub fn as_str(self) -> &'static str {
        match self {
            EffectSize::Negligible => "negligible",
            EffectSize::Small => "small",
            EffectSize::Medium => "medium",
            EffectSize::Large => "large",
        }
    }
}

/// Labels a partial eta squared with the 0.01 / 0.06 / 0.14 benchmarks.
pub fn effect_size_label<T: Real>(partial_eta2: T) -> Result<EffectSize, AnovaError> {
    if !(T::zero()..=T::one()).contains(&partial_eta2) {
        return Err(AnovaError::OutOfRange(format!("{partial_eta2}")));
    }
    Ok(if partial_eta2 < T::of(0.01) {
        EffectSize::Negligible
    } else if partial_eta2 < T::of(0.06) {
        EffectSize::Small
    } else if partial_eta2 < T::of(0.14) {
        EffectSize::Medium
    } else {
        EffectSize::Large
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ScoreMatrix;
    use crate::tree::CompetenceId;

    fn gap_matrix(rows: usize, cols: usize, values: Vec<f64>) -> GapMatrix<f64> {
        let candidates = (1..=rows).map(|i| format!("c{i}")).collect();
        let competences = (1..=cols)
            .map(|j| CompetenceId::parse(&format!("C1.{j}")).unwrap())
            .collect();
        GapMatrix {
            kind: GapKind::Simple,
            matrix: ScoreMatrix::new(candidates, competences, values).unwrap(),
        }
    }

    #[test]
    fn hand_checked_two_by_three() {
        // rows (0,1,2) and (2,3,7): grand mean 2.5, row means 1 and 4,
        // column means 1, 2 and 4.5
        let gaps = gap_matrix(2, 3, vec![0.0, 1.0, 2.0, 2.0, 3.0, 7.0]);
        let table = rcbd_anova(&gaps).unwrap();
        assert!((table.treatments.ss - 13.5).abs() < 1e-12);
        assert!((table.blocks.ss - 13.0).abs() < 1e-12);
        assert!((table.error_ss - 3.0).abs() < 1e-12);
        assert_eq!(table.treatments.df, 1);
        assert_eq!(table.blocks.df, 2);
        assert_eq!(table.error_df, 2);
        assert!((table.treatments.f - 9.0).abs() < 1e-12);
        assert!((table.blocks.f - 13.0 / 3.0).abs() < 1e-12);
        // identity eta = F df_f / (F df_f + df_e)
        for fs in [&table.treatments, &table.blocks] {
            let df_f = fs.df as f64;
            let expect = fs.f * df_f / (fs.f * df_f + table.error_df as f64);
            assert!((fs.partial_eta_squared - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_variance_cases() {
        // constant matrix: everything zero
        let gaps = gap_matrix(2, 2, vec![1.0; 4]);
        assert!(matches!(
            rcbd_anova(&gaps),
            Err(AnovaError::DegenerateVariance)
        ));

        // ((0,0),(1,1)): SS_treat = 1, SS_block = 0, SS_error = 0
        let gaps = gap_matrix(2, 2, vec![0.0, 0.0, 1.0, 1.0]);
        assert!(matches!(
            rcbd_anova(&gaps),
            Err(AnovaError::DegenerateVariance)
        ));
    }

    #[test]
    fn shape_and_kind_guards() {
        let gaps = gap_matrix(1, 3, vec![1.0, 2.0, 3.0]);
        assert!(matches!(
            rcbd_anova(&gaps),
            Err(AnovaError::TooFewTreatments(1))
        ));

        let gaps = gap_matrix(3, 1, vec![1.0, 2.0, 3.0]);
        assert!(matches!(rcbd_anova(&gaps), Err(AnovaError::TooFewBlocks(1))));

        let mut gaps = gap_matrix(2, 2, vec![0.0, 1.0, 1.0, 0.0]);
        gaps.kind = GapKind::Absolute;
        assert!(matches!(rcbd_anova(&gaps), Err(AnovaError::KindMismatch(_))));

        let gaps = gap_matrix(2, 2, vec![0.0, f64::NAN, 1.0, 0.0]);
        assert!(matches!(
            rcbd_anova(&gaps),
            Err(AnovaError::IncompleteMatrix { .. })
        ));
    }

    #[test]
    fn effect_size_benchmarks() {
        assert_eq!(effect_size_label(0.005f64).unwrap(), EffectSize::Negligible);
        assert_eq!(effect_size_label(0.01f64).unwrap(), EffectSize::Small);
        assert_eq!(effect_size_label(0.059f64).unwrap(), EffectSize::Small);
        assert_eq!(effect_size_label(0.06f64).unwrap(), EffectSize::Medium);
        assert_eq!(effect_size_label(0.14f64).unwrap(), EffectSize::Large);
        assert_eq!(effect_size_label(0.797f64).unwrap(), EffectSize::Large);
        assert_eq!(effect_size_label(0.196f64).unwrap(), EffectSize::Large);
        assert!(effect_size_label(-0.1f64).is_err());
        assert!(effect_size_label(1.1f64).is_err());
    }
}
