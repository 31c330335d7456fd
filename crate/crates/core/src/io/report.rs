//! Output rendering: fixed-decimal display formatting, the CSV tables one
//! run emits, and the combined JSON document.
//!
//! Table values are formatted at the configured display precision; the JSON
//! document carries full precision. The weight and ANOVA tables keep extra
//! digits because their values live on much smaller scales than the 1-5
//! score tables.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::anova::FactorStats;
use crate::gap::QsSide;
use crate::matrix::ScoreMatrix as GenericMatrix;
use crate::pipeline::RunResult;
use crate::{Scalar, WeightScheme};

/// Formats with a fixed number of decimals. Rust's float formatting rounds
/// ties to even on the exact binary value, which is what the reference
/// tables use; a rounded-to-zero negative loses its sign.
pub fn fmt_fixed(value: Scalar, decimals: usize) -> String {
    let s = format!("{value:.decimals$}");
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s[1..].to_string()
    } else {
        s
    }
}

/// p-value display: four decimals, with the conventional floor notation.
pub fn fmt_p(p: Scalar) -> String {
    if p < 0.001 {
        "<0.001".to_string()
    } else {
        format!("{p:.4}")
    }
}

fn csv_from_rows(rows: Vec<Vec<String>>) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf8")
}

/// Competence-major table (competence rows, candidate columns), optionally
/// with a trailing requirement column; the layout of the score tables.
fn competence_major_csv(matrices: &[&GenericMatrix<Scalar>], decimals: usize) -> String {
    let first = matrices[0];
    let mut header = vec!["competence".to_string()];
    for m in matrices {
        header.extend(m.candidates().iter().cloned());
    }
    let mut rows = vec![header];
    for id in first.competences() {
        let mut row = vec![id.to_string()];
        for m in matrices {
            let col = m.competence_index(id).expect("same columns");
            for i in 0..m.n_candidates() {
                row.push(fmt_fixed(m.get(i, col), decimals));
            }
        }
        rows.push(row);
    }
    csv_from_rows(rows)
}

/// Level-2 scores with the requirement column (reference table layout).
pub fn render_acd_level2_csv(result: &RunResult<Scalar>) -> String {
    competence_major_csv(
        &[&result.acd2.matrix, &result.rcd2],
        result.config.display_decimals,
    )
}

/// Weighted level-2 scores with the weighted requirement column.
pub fn render_weighted_csv(result: &RunResult<Scalar>) -> String {
    competence_major_csv(
        &[&result.weighted_acd2, &result.weighted_rcd2],
        result.config.display_decimals,
    )
}

/// Gap table: competence rows, candidate columns.
pub fn render_gaps_csv(result: &RunResult<Scalar>) -> String {
    let gaps = result.gaps_alt.as_ref().unwrap_or(&result.gaps);
    competence_major_csv(&[&gaps.matrix], result.config.display_decimals)
}

/// Level-1 scores: one row per candidate with the total first.
pub fn render_acd_level1_csv(result: &RunResult<Scalar>) -> String {
    let d = result.config.display_decimals;
    let m = &result.acd1.matrix;
    let mut header = vec!["candidate".to_string(), "Total".to_string()];
    header.extend(m.competences().iter().map(|c| c.to_string()));
    let mut rows = vec![header];
    for (i, candidate) in m.candidates().iter().enumerate() {
        let mut row = vec![candidate.clone(), fmt_fixed(result.totals[i], d)];
        row.extend(m.row(i).iter().map(|&v| fmt_fixed(v, d)));
        rows.push(row);
    }
    csv_from_rows(rows)
}

/// Descriptive statistics for the total and each level-1 category.
pub fn render_stats_csv(result: &RunResult<Scalar>) -> String {
    render_stats_rows(&result.stats, result.config.display_decimals)
}

pub fn render_stats_rows(stats: &[crate::pipeline::StatsRow<Scalar>], decimals: usize) -> String {
    let mut rows = vec![vec![
        "competence".to_string(),
        "n".to_string(),
        "mean".to_string(),
        "sd".to_string(),
        "median".to_string(),
        "min".to_string(),
        "max".to_string(),
    ]];
    for row in stats {
        let s = &row.stats;
        rows.push(vec![
            row.label.clone(),
            s.n.to_string(),
            fmt_fixed(s.mean, decimals),
            s.sd.map(|v| fmt_fixed(v, decimals)).unwrap_or_default(),
            fmt_fixed(s.median, decimals),
            fmt_fixed(s.min, decimals),
            fmt_fixed(s.max, decimals),
        ]);
    }
    csv_from_rows(rows)
}

/// The derived weight scheme, in id order, with audit precision.
pub fn render_weights_csv(scheme: &WeightScheme) -> String {
    let mut rows = vec![vec!["id".to_string(), "weight".to_string()]];
    for (id, w) in scheme.iter() {
        rows.push(vec![id.to_string(), format!("{w:.10}")]);
    }
    csv_from_rows(rows)
}

/// Qualification-space points.
pub fn render_qs_points_csv(result: &RunResult<Scalar>) -> String {
    let d = result.config.display_decimals;
    let mut rows = vec![vec![
        "candidate".to_string(),
        "SOQ".to_string(),
        "SUQ".to_string(),
        "MSG".to_string(),
        "MAG".to_string(),
        "side".to_string(),
    ]];
    for p in &result.points {
        rows.push(vec![
            p.candidate.clone(),
            fmt_fixed(p.soq, d),
            fmt_fixed(p.suq, d),
            fmt_fixed(p.msg, d),
            fmt_fixed(p.mag, d),
            side_of(p.soq, p.suq).as_str().to_string(),
        ]);
    }
    csv_from_rows(rows)
}

fn side_of(soq: Scalar, suq: Scalar) -> QsSide {
    let segment = soq + suq;
    if segment > 0.0 {
        QsSide::OverQualified
    } else if segment < 0.0 {
        QsSide::UnderQualified
    } else {
        QsSide::Equilibrium
    }
}

/// ANOVA table; sums of squares and mean squares keep six decimals.
pub fn render_anova_csv(result: &RunResult<Scalar>) -> String {
    let a = &result.anova;
    let factor_row = |name: &str, f: &FactorStats<Scalar>| {
        vec![
            name.to_string(),
            format!("{:.6}", f.ss),
            f.df.to_string(),
            format!("{:.6}", f.ms),
            format!("{:.6}", f.f),
            fmt_p(f.p),
            format!("{:.6}", f.partial_eta_squared),
        ]
    };
    let rows = vec![
        vec![
            "factor".to_string(),
            "ss".to_string(),
            "df".to_string(),
            "ms".to_string(),
            "f".to_string(),
            "p".to_string(),
            "partial_eta_squared".to_string(),
        ],
        factor_row("candidates", &a.treatments),
        factor_row("blocks", &a.blocks),
        vec![
            "error".to_string(),
            format!("{:.6}", a.error_ss),
            a.error_df.to_string(),
            format!("{:.6}", a.error_ms),
            String::new(),
            String::new(),
            String::new(),
        ],
    ];
    csv_from_rows(rows)
}

/// Ranked report rows (reference ranking table layout).
pub fn render_ranking_csv(result: &RunResult<Scalar>) -> String {
    let d = result.config.display_decimals;
    let mut rows = vec![vec![
        "rank".to_string(),
        "candidate".to_string(),
        "msg".to_string(),
        "lower".to_string(),
        "upper".to_string(),
        "cluster".to_string(),
        "qualification".to_string(),
    ]];
    for r in &result.ranking {
        rows.push(vec![
            r.rank.to_string(),
            r.candidate.clone(),
            fmt_fixed(r.msg, d),
            fmt_fixed(r.lower, d),
            fmt_fixed(r.upper, d),
            r.cluster.to_string(),
            r.qualification.as_str().to_string(),
        ]);
    }
    csv_from_rows(rows)
}

// ---------------------------------------------------------------------------
// combined JSON document (full precision)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub candidates: Vec<String>,
    pub competences: Vec<String>,
    /// One row per candidate.
    pub values: Vec<Vec<Scalar>>,
}

impl MatrixDoc {
    fn from_matrix(m: &GenericMatrix<Scalar>) -> Self {
        MatrixDoc {
            candidates: m.candidates().to_vec(),
            competences: m.competences().iter().map(|c| c.to_string()).collect(),
            values: (0..m.n_candidates()).map(|i| m.row(i).to_vec()).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExclusionDoc {
    pub candidate: String,
    pub competence: String,
    pub min_score: Scalar,
    pub actual: Scalar,
    pub description: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StatsDoc {
    pub label: String,
    pub n: usize,
    pub mean: Scalar,
    pub sd: Option<Scalar>,
    pub median: Scalar,
    pub min: Scalar,
    pub max: Scalar,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GapsDoc {
    pub kind: String,
    #[serde(flatten)]
    pub matrix: MatrixDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointDoc {
    pub candidate: String,
    pub soq: Scalar,
    pub suq: Scalar,
    pub msg: Scalar,
    pub mag: Scalar,
    pub side: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FactorDoc {
    pub ss: Scalar,
    pub df: usize,
    pub ms: Scalar,
    pub f: Scalar,
    pub p: Scalar,
    pub partial_eta_squared: Scalar,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnovaDoc {
    pub treatments: FactorDoc,
    pub blocks: FactorDoc,
    pub error_ss: Scalar,
    pub error_df: usize,
    pub error_ms: Scalar,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClusterDoc {
    pub members: Vec<String>,
    pub mean_msg: Scalar,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankedRowDoc {
    pub rank: usize,
    pub candidate: String,
    pub msg: Scalar,
    pub lower: Scalar,
    pub upper: Scalar,
    pub cluster: usize,
    pub qualification: String,
}

/// The full-precision result document written as `result.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResultDoc {
    pub job_id: String,
    pub alpha: Scalar,
    pub gap_kind: String,
    pub policy: String,
    pub display_decimals: usize,
    pub candidates: Vec<String>,
    pub eligible: Vec<String>,
    pub exclusions: Vec<ExclusionDoc>,
    pub acd_level3: MatrixDoc,
    pub acd_level2: MatrixDoc,
    pub rcd_level2: MatrixDoc,
    pub acd_level1: MatrixDoc,
    pub totals: Vec<Scalar>,
    pub stats: Vec<StatsDoc>,
    pub weights: BTreeMap<String, Scalar>,
    pub weighted_acd_level2: MatrixDoc,
    pub weighted_rcd_level2: MatrixDoc,
    pub gaps: GapsDoc,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gaps_alt: Option<GapsDoc>,
    pub qs_points: Vec<PointDoc>,
    pub anova: AnovaDoc,
    pub clusters: Vec<ClusterDoc>,
    pub ranking: Vec<RankedRowDoc>,
    /// Candidate ids in policy order.
    pub recommendation: Vec<String>,
}

impl ResultDoc {
    pub fn from_run(result: &RunResult<Scalar>) -> Self {
        let factor = |f: &FactorStats<Scalar>| FactorDoc {
            ss: f.ss,
            df: f.df,
            ms: f.ms,
            f: f.f,
            p: f.p,
            partial_eta_squared: f.partial_eta_squared,
        };
        let gaps_doc = |g: &crate::GapMatrix| GapsDoc {
            kind: g.kind.as_str().to_string(),
            matrix: MatrixDoc::from_matrix(&g.matrix),
        };
        ResultDoc {
            job_id: result.job_id.clone(),
            alpha: result.config.alpha,
            gap_kind: result.config.gap_kind.as_str().to_string(),
            policy: result.config.policy.as_str().to_string(),
            display_decimals: result.config.display_decimals,
            candidates: result.acd3.matrix.candidates().to_vec(),
            eligible: result.eligibility.eligible.clone(),
            exclusions: result
                .eligibility
                .exclusions
                .iter()
                .map(|e| ExclusionDoc {
                    candidate: e.candidate.clone(),
                    competence: e.rule.competence.to_string(),
                    min_score: e.rule.min_score,
                    actual: e.actual,
                    description: e.rule.description.clone(),
                })
                .collect(),
            acd_level3: MatrixDoc::from_matrix(&result.acd3.matrix),
            acd_level2: MatrixDoc::from_matrix(&result.acd2.matrix),
            rcd_level2: MatrixDoc::from_matrix(&result.rcd2),
            acd_level1: MatrixDoc::from_matrix(&result.acd1.matrix),
            totals: result.totals.clone(),
            stats: result
                .stats
                .iter()
                .map(|s| StatsDoc {
                    label: s.label.clone(),
                    n: s.stats.n,
                    mean: s.stats.mean,
                    sd: s.stats.sd,
                    median: s.stats.median,
                    min: s.stats.min,
                    max: s.stats.max,
                })
                .collect(),
            weights: result
                .weights
                .iter()
                .map(|(id, w)| (id.to_string(), w))
                .collect(),
            weighted_acd_level2: MatrixDoc::from_matrix(&result.weighted_acd2),
            weighted_rcd_level2: MatrixDoc::from_matrix(&result.weighted_rcd2),
            gaps: gaps_doc(&result.gaps),
            gaps_alt: result.gaps_alt.as_ref().map(gaps_doc),
            qs_points: result
                .points
                .iter()
                .map(|p| PointDoc {
                    candidate: p.candidate.clone(),
                    soq: p.soq,
                    suq: p.suq,
                    msg: p.msg,
                    mag: p.mag,
                    side: side_of(p.soq, p.suq).as_str().to_string(),
                })
                .collect(),
            anova: AnovaDoc {
                treatments: factor(&result.anova.treatments),
                blocks: factor(&result.anova.blocks),
                error_ss: result.anova.error_ss,
                error_df: result.anova.error_df,
                error_ms: result.anova.error_ms,
            },
            clusters: result
                .partition
                .clusters
                .iter()
                .map(|c| ClusterDoc {
                    members: c.members.clone(),
                    mean_msg: c.mean_msg,
                })
                .collect(),
            ranking: result
                .ranking
                .iter()
                .map(|r| RankedRowDoc {
                    rank: r.rank,
                    candidate: r.candidate.clone(),
                    msg: r.msg,
                    lower: r.lower,
                    upper: r.upper,
                    cluster: r.cluster,
                    qualification: r.qualification.as_str().to_string(),
                })
                .collect(),
            recommendation: result
                .recommendation
                .iter()
                .map(|r| r.candidate.clone())
                .collect(),
        }
    }

    /// Points for the qualification-space plot, colored by cluster.
    pub fn plot_points(&self) -> Vec<crate::io::svg::PlotPoint> {
        self.qs_points
            .iter()
            .map(|p| {
                let cluster = self
                    .ranking
                    .iter()
                    .find(|r| r.candidate == p.candidate)
                    .map(|r| r.cluster)
                    .unwrap_or(1);
                crate::io::svg::PlotPoint {
                    candidate: p.candidate.clone(),
                    soq: p.soq,
                    suq: p.suq,
                    cluster,
                }
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable document");
        s.push('\n');
        s
    }

    pub fn from_json(content: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(content)
    }
}

/// Renders `result.json` for a run.
pub fn render_result_json(result: &RunResult<Scalar>) -> String {
    ResultDoc::from_run(result).to_json()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_formatting_rounds_ties_to_even() {
        // exact binary ties
        assert_eq!(fmt_fixed(3.625, 2), "3.62");
        assert_eq!(fmt_fixed(3.375, 2), "3.38");
        assert_eq!(fmt_fixed(0.125, 2), "0.12");
        // not ties once the binary value is considered: the f64 nearest
        // 0.105 sits just below it
        assert_eq!(fmt_fixed(-0.105, 2), "-0.10");
        assert_eq!(fmt_fixed(0.2625, 2), "0.26");
        assert_eq!(fmt_fixed(1.1875, 2), "1.19");
        assert_eq!(fmt_fixed(4.0625, 2), "4.06");
        // a negative that rounds to zero drops the sign
        assert_eq!(fmt_fixed(-0.0004, 2), "0.00");
        assert_eq!(fmt_fixed(-0.0, 2), "0.00");
        assert_eq!(fmt_fixed(2.5, 0), "2");
    }

    #[test]
    fn p_formatting() {
        assert_eq!(fmt_p(0.0005), "<0.001");
        assert_eq!(fmt_p(0.009294476), "0.0093");
        assert_eq!(fmt_p(0.5), "0.5000");
    }
}
