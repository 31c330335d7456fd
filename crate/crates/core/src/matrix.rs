//! Dense candidates-by-competences score matrices.

use thiserror::Error;

use crate::scalar::Real;
use crate::tree::{CompetenceId, CompetenceTree};

/// Hierarchy level of an ACD matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    One,
    Two,
    Three,
}

impl Level {
    pub fn as_u8(self) -> u8 {
        match self {
            Level::One => 1,
            Level::Two => 2,
            Level::Three => 3,
        }
    }

    pub fn parent(self) -> Option<Level> {
        match self {
            Level::One => None,
            Level::Two => Some(Level::One),
            Level::Three => Some(Level::Two),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix shape {rows}x{cols} does not match {values} values")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        values: usize,
    },
    #[error("duplicate candidate {0:?}")]
    DuplicateCandidate(String),
    #[error("duplicate competence column {0}")]
    DuplicateCompetence(String),
    #[error("unknown candidate {0:?}")]
    UnknownCandidate(String),
    #[error("unknown competence column {0}")]
    UnknownCompetence(String),
    #[error("matrix is missing competence {0} required by the tree")]
    IncompleteMatrix(String),
}

impl MatrixError {
    pub fn rule_name(&self) -> &'static str {
        match self {
            MatrixError::ShapeMismatch { .. } => "ShapeMismatch",
            MatrixError::DuplicateCandidate(_) => "DuplicateCandidate",
            MatrixError::DuplicateCompetence(_) => "DuplicateCompetence",
            MatrixError::UnknownCandidate(_) => "UnknownCandidate",
            MatrixError::UnknownCompetence(_) => "UnknownCompetence",
            MatrixError::IncompleteMatrix(_) => "IncompleteMatrix",
        }
    }
}

/// Row-major scores: one row per candidate, one column per competence.
///
/// A single-row matrix doubles as a requirement (RCD) vector, so rollups and
/// weighting apply identically to acquired and required scores.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix<T> {
    candidates: Vec<String>,
    competences: Vec<CompetenceId>,
    values: Vec<T>,
}

impl<T: Real> ScoreMatrix<T> {
    pub fn new(
        candidates: Vec<String>,
        competences: Vec<CompetenceId>,
        values: Vec<T>,
    ) -> Result<Self, MatrixError> {
        if candidates.len() * competences.len() != values.len() {
            return Err(MatrixError::ShapeMismatch {
                rows: candidates.len(),
                cols: competences.len(),
                values: values.len(),
            });
        }
        for (i, c) in candidates.iter().enumerate() {
            if candidates[..i].contains(c) {
                return Err(MatrixError::DuplicateCandidate(c.clone()));
            }
        }
        for (i, c) in competences.iter().enumerate() {
            if competences[..i].contains(c) {
                return Err(MatrixError::DuplicateCompetence(c.to_string()));
            }
        }
        Ok(ScoreMatrix {
            candidates,
            competences,
            values,
        })
    }

    /// Single-row matrix for a requirement vector.
    pub fn single_row(
        label: impl Into<String>,
        competences: Vec<CompetenceId>,
        values: Vec<T>,
    ) -> Result<Self, MatrixError> {
        Self::new(vec![label.into()], competences, values)
    }

    pub fn n_candidates(&self) -> usize {
        self.candidates.len()
    }

    pub fn n_competences(&self) -> usize {
        self.competences.len()
    }

    pub fn candidates(&self) -> &[String] {
        &self.candidates
    }

    pub fn competences(&self) -> &[CompetenceId] {
        &self.competences
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        self.values[row * self.competences.len() + col]
    }

    pub fn row(&self, row: usize) -> &[T] {
        let m = self.competences.len();
        &self.values[row * m..(row + 1) * m]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn candidate_index(&self, candidate: &str) -> Result<usize, MatrixError> {
        self.candidates
            .iter()
            .position(|c| c == candidate)
            .ok_or_else(|| MatrixError::UnknownCandidate(candidate.to_string()))
    }

    pub fn competence_index(&self, id: &CompetenceId) -> Result<usize, MatrixError> {
        self.competences
            .iter()
            .position(|c| c == id)
            .ok_or_else(|| MatrixError::UnknownCompetence(id.to_string()))
    }

    pub fn value_at(&self, candidate: &str, id: &CompetenceId) -> Result<T, MatrixError> {
        Ok(self.get(self.candidate_index(candidate)?, self.competence_index(id)?))
    }

    /// New matrix keeping only the given candidates, in the given order.
    pub fn select_candidates(&self, keep: &[String]) -> Result<Self, MatrixError> {
        let m = self.competences.len();
        let mut values = Vec::with_capacity(keep.len() * m);
        for c in keep {
            let i = self.candidate_index(c)?;
            values.extend_from_slice(self.row(i));
        }
        ScoreMatrix::new(keep.to_vec(), self.competences.clone(), values)
    }

    /// Applies `f` to every value, keeping the shape.
    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        ScoreMatrix {
            candidates: self.candidates.clone(),
            competences: self.competences.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// True when the competence sets (ignoring order) coincide.
    pub fn same_competences(&self, other: &Self) -> bool {
        let mut a: Vec<_> = self.competences.clone();
        let mut b: Vec<_> = other.competences.clone();
        a.sort();
        b.sort();
        a == b
    }
}

/// ACD score matrix at a fixed hierarchy level. Values stay within the
/// 1-5 mark range because every aggregation in the pipeline is convex.
#[derive(Debug, Clone, PartialEq)]
pub struct AcdMatrix<T> {
    pub level: Level,
    pub matrix: ScoreMatrix<T>,
}

impl<T: Real> AcdMatrix<T> {
    pub fn new(level: Level, matrix: ScoreMatrix<T>) -> Self {
        AcdMatrix { level, matrix }
    }

    /// Checks the column set against the tree's node set at this level.
    pub fn check_columns(&self, tree: &CompetenceTree) -> Result<(), MatrixError> {
        let mut expected: Vec<CompetenceId> = tree
            .level_ids(self.level.as_u8())
            .into_iter()
            .cloned()
            .collect();
        let mut got = self.matrix.competences().to_vec();
        expected.sort();
        got.sort();
        if expected != got {
            // a tree id absent from the matrix is an incomplete matrix; a
            // matrix column outside the tree level is an unknown competence
            if let Some(missing) = expected.iter().find(|id| !got.contains(id)) {
                return Err(MatrixError::IncompleteMatrix(missing.to_string()));
            }
            let extra = got.iter().find(|id| !expected.contains(id)).expect("sets differ");
            return Err(MatrixError::UnknownCompetence(extra.to_string()));
        }
        Ok(())
    }
}
