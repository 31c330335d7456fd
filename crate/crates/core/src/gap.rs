//! Gap scores between weighted acquired and required competences, the
//! over/under-qualification sums and the Qualification Space indicators.
//!
//! Gaps are computed on already-weighted level-2 scores, so the weight sits
//! inside every gap term. The (SOQ, SUQ) pair places each candidate in the
//! Qualification Space plane, where the diagonal SUQ = -SOQ separates
//! over-qualified from under-qualified candidates.

use thiserror::Error;

use crate::matrix::ScoreMatrix;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GapError {
    #[error("matrices do not share the same competence columns")]
    ColumnMismatch,
    #[error("requirement matrix must have exactly one row, got {0}")]
    RequirementShape(usize),
    #[error("expected {expected:?} gaps, got {got:?}")]
    KindMismatch { expected: GapKind, got: GapKind },
    #[error("unknown candidate {0:?}")]
    UnknownCandidate(String),
    #[error("number of competences must be positive")]
    NonpositiveN,
    #[error("qualification point violates SOQ >= 0 >= SUQ: ({soq}, {suq})")]
    SignViolation { soq: String, suq: String },
}

impl GapError {
    pub fn rule_name(&self) -> &'static str {
        match self {
            GapError::ColumnMismatch => "ColumnMismatch",
            GapError::RequirementShape(_) => "RequirementShape",
            GapError::KindMismatch { .. } => "KindMismatch",
            GapError::UnknownCandidate(_) => "UnknownCandidate",
            GapError::NonpositiveN => "NonpositiveN",
            GapError::SignViolation { .. } => "SignViolation",
        }
    }
}

/// The three gap functions between acquired and required scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapKind {
    /// Signed difference A - R.
    Simple,
    /// Absolute difference |A - R|.
    Absolute,
    /// Squared difference (A - R)^2.
    Squared,
}

impl GapKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GapKind::Simple => "SG",
            GapKind::Absolute => "AG",
            GapKind::Squared => "SQG",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "SG" | "sg" | "simple" => Some(GapKind::Simple),
            "AG" | "ag" | "absolute" => Some(GapKind::Absolute),
            "SQG" | "sqg" | "squared" => Some(GapKind::Squared),
            _ => None,
        }
    }
}

/// Candidates-by-competences gap values of one kind.
#[derive(Debug, Clone, PartialEq)]
pub struct GapMatrix<T> {
    pub kind: GapKind,
    pub matrix: ScoreMatrix<T>,
}

/// Computes gaps from weighted ACD rows against a single weighted RCD row.
pub fn gap_scores<T: Real>(
    weighted_acd: &ScoreMatrix<T>,
    weighted_rcd: &ScoreMatrix<T>,
    kind: GapKind,
) -> Result<GapMatrix<T>, GapError> {
    if weighted_rcd.n_candidates() != 1 {
        return Err(GapError::RequirementShape(weighted_rcd.n_candidates()));
    }
    if !weighted_acd.same_competences(weighted_rcd) {
        return Err(GapError::ColumnMismatch);
    }
    let req: Vec<T> = weighted_acd
        .competences()
        .iter()
        .map(|id| {
            let col = weighted_rcd.competence_index(id).expect("same columns");
            weighted_rcd.get(0, col)
        })
        .collect();

    let mut values = Vec::with_capacity(weighted_acd.values().len());
    for row in 0..weighted_acd.n_candidates() {
        for (col, &r) in req.iter().enumerate() {
            let d = weighted_acd.get(row, col) - r;
            values.push(match kind {
                GapKind::Simple => d,
                GapKind::Absolute => d.abs(),
                GapKind::Squared => d * d,
            });
        }
    }
    Ok(GapMatrix {
        kind,
        matrix: ScoreMatrix::new(
            weighted_acd.candidates().to_vec(),
            weighted_acd.competences().to_vec(),
            values,
        )
        .expect("shape preserved"),
    })
}

/// Splits one candidate's signed gap row into the over-qualification sum
/// (non-negative gaps) and the under-qualification sum (negative gaps,
/// kept signed).
pub fn soq_suq<T: Real>(gaps: &GapMatrix<T>, candidate: &str) -> Result<(T, T), GapError> {
    if gaps.kind != GapKind::Simple {
        return Err(GapError::KindMismatch {
            expected: GapKind::Simple,
            got: gaps.kind,
        });
    }
    let row = gaps
        .matrix
        .candidate_index(candidate)
        .map_err(|_| GapError::UnknownCandidate(candidate.to_string()))?;
    Ok(soq_suq_row(gaps.matrix.row(row)))
}

/// Row-level building block: zero gaps count toward the over side.
pub fn soq_suq_row<T: Real>(sg_row: &[T]) -> (T, T) {
    let mut soq = T::zero();
    let mut suq = T::zero();
    for &g in sg_row {
        if g >= T::zero() {
            soq = soq + g;
        } else {
            suq = suq + g;
        }
    }
    (soq, suq)
}

/// Mean simple gap and mean absolute gap over `n` competences.
pub fn msg_mag<T: Real>(soq: T, suq: T, n: usize) -> Result<(T, T), GapError> {
    if n == 0 {
        return Err(GapError::NonpositiveN);
    }
    let nf = T::of_usize(n);
    Ok(((soq + suq) / nf, (soq + suq.abs()) / nf))
}

/// A candidate's position in the Qualification Space.
#[derive(Debug, Clone, PartialEq)]
pub struct QualificationPoint<T> {
    pub candidate: String,
    pub soq: T,
    pub suq: T,
    pub msg: T,
    pub mag: T,
}

impl<T: Real> QualificationPoint<T> {
    pub fn new(candidate: impl Into<String>, soq: T, suq: T, n: usize) -> Result<Self, GapError> {
        if soq < T::zero() || suq > T::zero() {
            return Err(GapError::SignViolation {
                soq: format!("{soq}"),
                suq: format!("{suq}"),
            });
        }
        let (msg, mag) = msg_mag(soq, suq, n)?;
        Ok(QualificationPoint {
            candidate: candidate.into(),
            soq,
            suq,
            msg,
            mag,
        })
    }
}

/// Qualification points for every candidate of a signed gap matrix.
pub fn qualification_points<T: Real>(
    gaps: &GapMatrix<T>,
) -> Result<Vec<QualificationPoint<T>>, GapError> {
    if gaps.kind != GapKind::Simple {
        return Err(GapError::KindMismatch {
            expected: GapKind::Simple,
            got: gaps.kind,
        });
    }
    let n = gaps.matrix.n_competences();
    gaps.matrix
        .candidates()
        .iter()
        .enumerate()
        .map(|(i, cand)| {
            let (soq, suq) = soq_suq_row(gaps.matrix.row(i));
            QualificationPoint::new(cand.clone(), soq, suq, n)
        })
        .collect()
}

/// Which side of the equilibrium diagonal a point falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QsSide {
    OverQualified,
    UnderQualified,
    Equilibrium,
}

impl QsSide {
    pub fn as_str(self) -> &'static str {
        match self {
            QsSide::OverQualified => "over-qualified",
            QsSide::UnderQualified => "under-qualified",
            QsSide::Equilibrium => "equilibrium",
        }
    }
}

/// Geometric indicators read off the Qualification Space plot.
#[derive(Debug, Clone, PartialEq)]
pub struct QsGeometry<T> {
    /// Signed length of the horizontal-plus-vertical segments to the
    /// diagonal; equals SOQ + SUQ = n * MSG.
    pub segment: T,
    /// Manhattan distance to the origin; equals SOQ + |SUQ| = n * MAG.
    pub manhattan: T,
    pub side: QsSide,
}

pub fn qs_geometry<T: Real>(point: &QualificationPoint<T>) -> Result<QsGeometry<T>, GapError> {
    if point.soq < T::zero() || point.suq > T::zero() {
        return Err(GapError::SignViolation {
            soq: format!("{}", point.soq),
            suq: format!("{}", point.suq),
        });
    }
    let segment = point.soq + point.suq;
    let side = if segment > T::zero() {
        QsSide::OverQualified
    } else if segment < T::zero() {
        QsSide::UnderQualified
    } else {
        QsSide::Equilibrium
    };
    Ok(QsGeometry {
        segment,
        manhattan: point.soq + point.suq.abs(),
        side,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::CompetenceId;

    fn cid(s: &str) -> CompetenceId {
        CompetenceId::parse(s).unwrap()
    }

    fn two_col(acd: [f64; 2], req: [f64; 2]) -> (ScoreMatrix<f64>, ScoreMatrix<f64>) {
        let cols = vec![cid("C1.1"), cid("C1.2")];
        (
            ScoreMatrix::new(vec!["a".into()], cols.clone(), acd.to_vec()).unwrap(),
            ScoreMatrix::single_row("Req", cols, req.to_vec()).unwrap(),
        )
    }

    #[test]
    fn gap_kinds() {
        let (acd, rcd) = two_col([0.12, 2.0], [0.45, 5.0]);
        let sg = gap_scores(&acd, &rcd, GapKind::Simple).unwrap();
        assert!((sg.matrix.get(0, 0) - (-0.33)).abs() < 1e-12);
        let ag = gap_scores(&acd, &rcd, GapKind::Absolute).unwrap();
        assert!((ag.matrix.get(0, 0) - 0.33).abs() < 1e-12);
        let sqg = gap_scores(&acd, &rcd, GapKind::Squared).unwrap();
        assert!((sqg.matrix.get(0, 1) - 9.0).abs() < 1e-12);

        // SQG is SG squared, cell by cell
        for (s, q) in sg.matrix.values().iter().zip(sqg.matrix.values()) {
            assert!((s * s - q).abs() < 1e-12);
        }
    }

    #[test]
    fn perfect_fit_is_all_zero() {
        let (acd, rcd) = two_col([3.0, 4.0], [3.0, 4.0]);
        for kind in [GapKind::Simple, GapKind::Absolute, GapKind::Squared] {
            let g = gap_scores(&acd, &rcd, kind).unwrap();
            assert!(g.matrix.values().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn column_mismatch_detected() {
        let acd =
            ScoreMatrix::new(vec!["a".into()], vec![cid("C1.1")], vec![1.0]).unwrap();
        let rcd =
            ScoreMatrix::single_row("Req", vec![cid("C1.2")], vec![1.0]).unwrap();
        assert!(matches!(
            gap_scores(&acd, &rcd, GapKind::Simple),
            Err(GapError::ColumnMismatch)
        ));

        let two_rows = ScoreMatrix::new(
            vec!["a".into(), "b".into()],
            vec![cid("C1.1")],
            vec![1.0, 2.0],
        )
        .unwrap();
        assert!(matches!(
            gap_scores(&acd, &two_rows, GapKind::Simple),
            Err(GapError::RequirementShape(2))
        ));
    }

    #[test]
    fn soq_suq_printed_columns() {
        // printed gap column of the fourth candidate in the reference tables
        let cnd4: [f64; 12] = [
            0.06, 0.06, -0.02, 0.08, 0.08, 0.05, 0.00, 0.00, 0.04, 0.06, 0.03, 0.00,
        ];
        let (soq, suq) = soq_suq_row(&cnd4);
        assert!((soq - 0.46).abs() < 1e-12);
        assert!((suq - (-0.02)).abs() < 1e-12);

        let cnd6: [f64; 12] = [
            -0.30, -0.30, -0.18, -0.16, -0.24, -0.19, -0.21, -0.21, -0.19, -0.19, -0.13, -0.13,
        ];
        let (soq, suq) = soq_suq_row(&cnd6);
        assert_eq!(soq, 0.0);
        assert!((suq - (-2.43)).abs() < 1e-12);

        let (soq, suq) = soq_suq_row(&[0.0f64; 12]);
        assert_eq!((soq, suq), (0.0, 0.0));
    }

    #[test]
    fn soq_suq_requires_simple_kind() {
        let (acd, rcd) = two_col([1.0, 2.0], [2.0, 1.0]);
        let ag = gap_scores(&acd, &rcd, GapKind::Absolute).unwrap();
        assert!(matches!(
            soq_suq(&ag, "a"),
            Err(GapError::KindMismatch { .. })
        ));
        let sg = gap_scores(&acd, &rcd, GapKind::Simple).unwrap();
        let (soq, suq) = soq_suq(&sg, "a").unwrap();
        assert_eq!((soq, suq), (1.0, -1.0));
        assert!(matches!(
            soq_suq(&sg, "zz"),
            Err(GapError::UnknownCandidate(_))
        ));
    }

    #[test]
    fn msg_mag_values() {
        let (msg, mag) = msg_mag(0.46f64, -0.02, 12).unwrap();
        assert!((msg - 0.44 / 12.0).abs() < 1e-12);
        assert!((mag - 0.48 / 12.0).abs() < 1e-12);

        let (msg, _) = msg_mag(0.0f64, -2.43, 12).unwrap();
        assert!((msg - (-0.2025)).abs() < 1e-12);

        assert_eq!(msg_mag(0.0f64, 0.0, 7).unwrap(), (0.0, 0.0));
        assert!(matches!(msg_mag(1.0f64, -1.0, 0), Err(GapError::NonpositiveN)));
    }

    #[test]
    fn geometry_indicators() {
        let over = QualificationPoint::new("c4", 0.46f64, -0.02, 12).unwrap();
        let g = qs_geometry(&over).unwrap();
        assert_eq!(g.side, QsSide::OverQualified);
        assert!((g.segment - 0.44).abs() < 1e-12);
        assert!((g.segment - 12.0 * over.msg).abs() < 1e-12);
        assert!((g.manhattan - 12.0 * over.mag).abs() < 1e-12);

        let under = QualificationPoint::new("c6", 0.0f64, -2.43, 12).unwrap();
        let g = qs_geometry(&under).unwrap();
        assert_eq!(g.side, QsSide::UnderQualified);
        assert!((g.manhattan - 2.43).abs() < 1e-12);

        let balanced = QualificationPoint::new("c0", 0.0f64, 0.0, 12).unwrap();
        let g = qs_geometry(&balanced).unwrap();
        assert_eq!(g.side, QsSide::Equilibrium);
        assert_eq!((g.segment, g.manhattan), (0.0, 0.0));

        assert!(QualificationPoint::new("bad", -0.1f64, 0.0, 12).is_err());
    }
}
