//! Input file parsing: tree JSON, job-profile JSON, ACD CSV and the
//! optional long-form raw responses CSV.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::assess::{AssessError, AssessmentType, AssessorRole};
use crate::matrix::{Level, MatrixError};
use crate::profile::{ProfileError, RcdValue};
use crate::tree::{CompetenceNode, TreeError};
use crate::{AcdMatrix, CompetenceTree, EligibilityRule, JobProfile, Scalar, ScoreMatrix,
    StatementResponse};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{file}:{line}: parse error: {message}")]
    Parse {
        file: String,
        line: usize,
        message: String,
    },
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Assess(#[from] AssessError),
    #[error("{file}: {source}")]
    Io {
        file: String,
        #[source]
        source: std::io::Error,
    },
}

impl LoadError {
    pub fn rule_name(&self) -> &'static str {
        match self {
            LoadError::Parse { .. } => "ParseError",
            LoadError::Tree(e) => e.rule_name(),
            LoadError::Profile(e) => e.rule_name(),
            LoadError::Matrix(e) => e.rule_name(),
            LoadError::Assess(e) => e.rule_name(),
            LoadError::Io { .. } => "IoError",
        }
    }

    pub fn is_io(&self) -> bool {
        matches!(self, LoadError::Io { .. })
    }
}

fn read_file(path: &Path) -> Result<String, LoadError> {
    std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        file: path.display().to_string(),
        source,
    })
}

fn json_parse_error(file: &str, err: &serde_json::Error) -> LoadError {
    LoadError::Parse {
        file: file.to_string(),
        line: err.line(),
        message: err.to_string(),
    }
}

// ---------------------------------------------------------------------------
// tree JSON: array of {"id", "name", "parent"} with null parent for roots
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
struct TreeNodeFile {
    id: String,
    name: String,
    parent: Option<String>,
}

pub fn parse_tree_json(content: &str, file: &str) -> Result<CompetenceTree, LoadError> {
    let nodes: Vec<TreeNodeFile> =
        serde_json::from_str(content).map_err(|e| json_parse_error(file, &e))?;
    let nodes = nodes
        .into_iter()
        .map(|n| CompetenceNode::new(&n.id, n.name, n.parent.as_deref()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CompetenceTree::build(nodes)?)
}

pub fn read_tree_json(path: &Path) -> Result<CompetenceTree, LoadError> {
    parse_tree_json(&read_file(path)?, &path.display().to_string())
}

// ---------------------------------------------------------------------------
// job profile JSON
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct JobFile {
    job_id: String,
    #[serde(default = "default_total")]
    f: Scalar,
    rcd3: BTreeMap<String, serde_json::Value>,
    hcv1: BTreeMap<String, Scalar>,
    hcv2: BTreeMap<String, Scalar>,
    #[serde(default)]
    eligibility: Vec<RuleFile>,
}

fn default_total() -> Scalar {
    100.0
}

#[derive(Debug, Deserialize)]
struct RuleFile {
    competence: String,
    min_score: Scalar,
    #[serde(default)]
    description: String,
}

pub fn parse_job_json(
    content: &str,
    file: &str,
    tree: &CompetenceTree,
) -> Result<JobProfile, LoadError> {
    let job: JobFile =
        serde_json::from_str(content).map_err(|e| json_parse_error(file, &e))?;

    let mut rcd = Vec::with_capacity(job.rcd3.len());
    for (id, value) in job.rcd3 {
        let id = crate::CompetenceId::parse(&id)?;
        let value = match value {
            serde_json::Value::Number(n) => {
                RcdValue::Score(n.as_f64().ok_or_else(|| LoadError::Parse {
                    file: file.to_string(),
                    line: 0,
                    message: format!("rcd3 score for {id} is not a finite number"),
                })?)
            }
            serde_json::Value::String(term) => RcdValue::Term(term),
            other => {
                return Err(LoadError::Parse {
                    file: file.to_string(),
                    line: 0,
                    message: format!(
                        "rcd3 entry for {id} must be a number or an importance term, got {other}"
                    ),
                })
            }
        };
        rcd.push((id, value));
    }

    let parse_amounts = |map: BTreeMap<String, Scalar>| {
        map.into_iter()
            .map(|(id, amount)| Ok((crate::CompetenceId::parse(&id)?, amount)))
            .collect::<Result<BTreeMap<_, _>, TreeError>>()
    };
    let hcv1 = parse_amounts(job.hcv1)?;
    let hcv2 = parse_amounts(job.hcv2)?;

    let eligibility = job
        .eligibility
        .into_iter()
        .map(|r| {
            Ok(EligibilityRule {
                competence: crate::CompetenceId::parse(&r.competence)?,
                min_score: r.min_score,
                description: r.description,
            })
        })
        .collect::<Result<Vec<_>, TreeError>>()?;

    Ok(JobProfile::build(
        tree,
        job.job_id,
        rcd,
        hcv1,
        hcv2,
        eligibility,
        job.f,
    )?)
}

pub fn read_job_json(path: &Path, tree: &CompetenceTree) -> Result<JobProfile, LoadError> {
    parse_job_json(&read_file(path)?, &path.display().to_string(), tree)
}

// ---------------------------------------------------------------------------
// ACD CSV: first column "competence" with level-3 ids, one column per
// candidate (the layout of the reference score table)
// ---------------------------------------------------------------------------

pub fn parse_acd_csv(content: &str, file: &str) -> Result<AcdMatrix, LoadError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(content.as_bytes());

    let headers = reader
        .headers()
        .map_err(|e| csv_parse_error(file, &e))?
        .clone();
    if headers.is_empty() || !headers[0].eq_ignore_ascii_case("competence") {
        return Err(LoadError::Parse {
            file: file.to_string(),
            line: 1,
            message: format!(
                "first header cell must be \"competence\", got {:?}",
                headers.get(0).unwrap_or("")
            ),
        });
    }
    let candidates: Vec<String> = headers.iter().skip(1).map(str::to_string).collect();
    if candidates.is_empty() {
        return Err(LoadError::Parse {
            file: file.to_string(),
            line: 1,
            message: "no candidate columns".to_string(),
        });
    }

    let mut competences = Vec::new();
    let mut by_competence: Vec<Vec<Scalar>> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_parse_error(file, &e))?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        if record.len() != candidates.len() + 1 {
            return Err(LoadError::Parse {
                file: file.to_string(),
                line,
                message: format!(
                    "expected {} cells, got {}",
                    candidates.len() + 1,
                    record.len()
                ),
            });
        }
        competences.push(crate::CompetenceId::parse(&record[0])?);
        let row = record
            .iter()
            .skip(1)
            .map(|cell| {
                cell.parse::<Scalar>().map_err(|_| LoadError::Parse {
                    file: file.to_string(),
                    line,
                    message: format!("not a number: {cell:?}"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        by_competence.push(row);
    }

    // transpose: the file is competence-major, the matrix candidate-major
    let mut values = Vec::with_capacity(candidates.len() * competences.len());
    for cand_idx in 0..candidates.len() {
        for row in &by_competence {
            values.push(row[cand_idx]);
        }
    }
    let matrix = ScoreMatrix::new(candidates, competences, values)?;
    Ok(AcdMatrix::new(Level::Three, matrix))
}

pub fn read_acd_csv(path: &Path) -> Result<AcdMatrix, LoadError> {
    parse_acd_csv(&read_file(path)?, &path.display().to_string())
}

fn csv_parse_error(file: &str, err: &csv::Error) -> LoadError {
    let line = match err.position() {
        Some(p) => p.line() as usize,
        None => 0,
    };
    LoadError::Parse {
        file: file.to_string(),
        line,
        message: err.to_string(),
    }
}

// ---------------------------------------------------------------------------
// raw responses CSV:
// assessee,assessment_type,assessor_role,competence,statement_id,value,weight
// ---------------------------------------------------------------------------

pub fn parse_responses_csv(
    content: &str,
    file: &str,
) -> Result<Vec<StatementResponse>, LoadError> {
    const HEADER: [&str; 7] = [
        "assessee",
        "assessment_type",
        "assessor_role",
        "competence",
        "statement_id",
        "value",
        "weight",
    ];
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(content.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| csv_parse_error(file, &e))?
        .clone();
    let got: Vec<&str> = headers.iter().collect();
    if got != HEADER {
        return Err(LoadError::Parse {
            file: file.to_string(),
            line: 1,
            message: format!("expected header {HEADER:?}, got {got:?}"),
        });
    }

    let mut responses = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_parse_error(file, &e))?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        let parse_err = |message: String| LoadError::Parse {
            file: file.to_string(),
            line,
            message,
        };

        let assessment_type = AssessmentType::parse(&record[1])
            .ok_or_else(|| parse_err(format!("unknown assessment_type {:?}", &record[1])))?;
        let assessor_role = AssessorRole::parse(&record[2])
            .ok_or_else(|| parse_err(format!("unknown assessor_role {:?}", &record[2])))?;
        let value: u8 = record[5]
            .parse()
            .map_err(|_| parse_err(format!("not an integer Likert value: {:?}", &record[5])))?;
        let weight: Scalar = record[6]
            .parse()
            .map_err(|_| parse_err(format!("not a number: {:?}", &record[6])))?;

        responses.push(StatementResponse::new(
            record[0].to_string(),
            crate::CompetenceId::parse(&record[3])?,
            record[4].to_string(),
            value,
            weight,
            assessor_role,
            assessment_type,
        )?);
    }
    Ok(responses)
}

pub fn read_responses_csv(path: &Path) -> Result<Vec<StatementResponse>, LoadError> {
    parse_responses_csv(&read_file(path)?, &path.display().to_string())
}
