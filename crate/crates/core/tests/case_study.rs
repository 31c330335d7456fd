//! End-to-end run over the bundled reference dataset: eleven candidates,
//! the canonical 3/12/48 taxonomy and the derived weighting allocation.

use std::path::PathBuf;

use skillgap_core::assess::RollupWeights as GenericRollupWeights;
use skillgap_core::eligibility::{filter_eligible, EligibilityRule};
use skillgap_core::io::{read_acd_csv, read_job_json, read_tree_json};
use skillgap_core::pipeline::{run_pipeline, PipelineConfig};
use skillgap_core::{CompetenceId, Level};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn cid(s: &str) -> CompetenceId {
    CompetenceId::parse(s).unwrap()
}

fn run_fixtures() -> skillgap_core::RunResult {
    let tree = read_tree_json(&fixture("tree.json")).unwrap();
    let acd = read_acd_csv(&fixture("acd.csv")).unwrap();
    let job = read_job_json(&fixture("job.json"), &tree).unwrap();
    run_pipeline(&tree, &acd, &job, &PipelineConfig::default()).unwrap()
}

#[test]
fn fixtures_load_and_validate() {
    let tree = read_tree_json(&fixture("tree.json")).unwrap();
    assert_eq!(tree.roots().len(), 3);
    assert_eq!(tree.level_len(2), 12);
    assert_eq!(tree.level_len(3), 48);

    let acd = read_acd_csv(&fixture("acd.csv")).unwrap();
    assert_eq!(acd.matrix.n_candidates(), 11);
    assert_eq!(acd.matrix.n_competences(), 48);
    acd.check_columns(&tree).unwrap();

    let job = read_job_json(&fixture("job.json"), &tree).unwrap();
    assert_eq!(job.rcd3().len(), 48);
    assert!(job.eligibility.is_empty());
}

#[test]
fn level2_rollup_spot_values() {
    let result = run_fixtures();
    let m = &result.acd2.matrix;
    assert!((m.value_at("Cnd 1", &cid("C1.1")).unwrap() - 3.75).abs() < 1e-12);
    assert!((m.value_at("Cnd 2", &cid("C1.1")).unwrap() - 1.00).abs() < 1e-12);
    assert!((m.value_at("Cnd 4", &cid("C1.4")).unwrap() - 4.50).abs() < 1e-12);
    assert!((m.value_at("Cnd 11", &cid("C3.3")).unwrap() - 2.75).abs() < 1e-12);
    // requirement row rolls up the same way
    assert!((result.rcd2.value_at("Req", &cid("C1.1")).unwrap() - 3.75).abs() < 1e-12);
    assert!((result.rcd2.value_at("Req", &cid("C2.3")).unwrap() - 4.00).abs() < 1e-12);
}

#[test]
fn level1_scores_and_totals() {
    let result = run_fixtures();
    let m = &result.acd1.matrix;
    // first candidate: 3.6875 / 3.5 / 3.8125, total 3.6667
    assert!((m.value_at("Cnd 1", &cid("C1")).unwrap() - 3.6875).abs() < 1e-12);
    assert!((m.value_at("Cnd 1", &cid("C2")).unwrap() - 3.5).abs() < 1e-12);
    assert!((m.value_at("Cnd 1", &cid("C3")).unwrap() - 3.8125).abs() < 1e-12);
    assert!((result.totals[0] - 11.0 / 3.0).abs() < 1e-12);
    // fifth candidate's social score is exactly 4
    assert!((m.value_at("Cnd 5", &cid("C3")).unwrap() - 4.0).abs() < 1e-12);
}

#[test]
fn weighted_scores_and_gaps() {
    let result = run_fixtures();
    assert!((result.weights.sum() - 1.0).abs() < 1e-12);
    let w = &result.weighted_acd2;
    assert!((w.value_at("Cnd 1", &cid("C1.1")).unwrap() - 0.45).abs() < 1e-9);
    assert!(
        (result.weighted_rcd2.value_at("Req", &cid("C2.2")).unwrap() - 0.2625).abs() < 1e-9
    );
    let g = &result.gaps.matrix;
    assert!((g.value_at("Cnd 2", &cid("C1.1")).unwrap() - (-0.33)).abs() < 1e-9);
}

#[test]
fn qualification_points_match_reference() {
    let result = run_fixtures();
    let point = |cand: &str| result.points.iter().find(|p| p.candidate == cand).unwrap();
    // unrounded pipeline values
    let p4 = point("Cnd 4");
    assert!((p4.soq - 0.45).abs() < 1e-9);
    assert!((p4.suq - (-0.02)).abs() < 1e-9);
    let p6 = point("Cnd 6");
    assert!(p6.soq.abs() < 1e-12);
    assert!((p6.suq - (-2.41375)).abs() < 1e-9);
    assert!((p6.msg - (-0.201145833333)).abs() < 1e-9);
}

#[test]
fn anova_matches_reference_values() {
    let result = run_fixtures();
    let a = &result.anova;
    assert_eq!(a.treatments.df, 10);
    assert_eq!(a.blocks.df, 11);
    assert_eq!(a.error_df, 110);
    assert!((a.treatments.f - 43.143932128).abs() < 1e-6);
    assert!((a.blocks.f - 2.436824270).abs() < 1e-6);
    assert!((a.treatments.partial_eta_squared - 0.796837806794).abs() < 1e-9);
    assert!((a.blocks.partial_eta_squared - 0.195936214646).abs() < 1e-9);
    assert!((a.s2() - 0.0015573872245179).abs() < 1e-12);
    assert!(a.treatments.p < 0.001);
    assert!((a.blocks.p - 0.009294476777).abs() < 1e-8);
}

#[test]
fn ranking_and_clusters_match_reference() {
    let result = run_fixtures();
    let order: Vec<&str> = result
        .ranking
        .iter()
        .map(|r| r.candidate.as_str())
        .collect();
    assert_eq!(
        order,
        vec![
            "Cnd 4", "Cnd 10", "Cnd 1", "Cnd 5", "Cnd 9", "Cnd 11", "Cnd 8", "Cnd 3",
            "Cnd 7", "Cnd 2", "Cnd 6"
        ]
    );
    let members: Vec<Vec<&str>> = result
        .partition
        .clusters
        .iter()
        .map(|c| c.members.iter().map(String::as_str).collect())
        .collect();
    assert_eq!(
        members,
        vec![
            vec!["Cnd 4", "Cnd 10"],
            vec!["Cnd 1", "Cnd 5", "Cnd 9", "Cnd 11", "Cnd 8"],
            vec!["Cnd 3", "Cnd 7"],
            vec!["Cnd 2"],
            vec!["Cnd 6"],
        ]
    );
    // closest-fit policy promotes the second cluster
    let closest = skillgap_core::rank::apply_policy(
        &result.ranking,
        skillgap_core::Policy::ClosestFit,
    );
    assert_eq!(closest[0].cluster, 2);
    assert_eq!(result.recommendation[0].candidate, "Cnd 4");
}

#[test]
fn eligibility_examples_from_reference_data() {
    let tree = read_tree_json(&fixture("tree.json")).unwrap();
    let acd = read_acd_csv(&fixture("acd.csv")).unwrap();
    let w3 = GenericRollupWeights::equal(&tree, Level::Three);
    let w2 = GenericRollupWeights::equal(&tree, Level::Two);

    // a minimum of 2 on C1.3.1 excludes only the sixth candidate
    let rule = EligibilityRule {
        competence: cid("C1.3.1"),
        min_score: 2.0,
        description: "minimum on C1.3.1".into(),
    };
    let out = filter_eligible(&acd, &tree, &[rule], &w3, &w2).unwrap();
    assert_eq!(out.eligible.len(), 10);
    assert!(!out.eligible.contains(&"Cnd 6".to_string()));
    assert_eq!(out.exclusions.len(), 1);
    assert_eq!(out.exclusions[0].candidate, "Cnd 6");
    assert_eq!(out.exclusions[0].actual, 1.0);

    // a rolled-up minimum of 4 on C1.1 keeps exactly three candidates
    let rule = EligibilityRule {
        competence: cid("C1.1"),
        min_score: 4.0,
        description: "strong managerial".into(),
    };
    let out = filter_eligible(&acd, &tree, &[rule], &w3, &w2).unwrap();
    assert_eq!(
        out.eligible,
        vec!["Cnd 4".to_string(), "Cnd 9".to_string(), "Cnd 10".to_string()]
    );
}

#[test]
fn stats_rows_match_reference_display() {
    use skillgap_core::io::fmt_fixed;
    let result = run_fixtures();
    let row = |label: &str| {
        result
            .stats
            .iter()
            .find(|r| r.label == label)
            .unwrap_or_else(|| panic!("missing stats row {label}"))
    };
    let check = |label: &str, mean: &str, sd: &str, median: &str, min: &str, max: &str| {
        let s = &row(label).stats;
        assert_eq!(s.n, 11, "{label} n");
        assert_eq!(fmt_fixed(s.mean, 2), mean, "{label} mean");
        assert_eq!(fmt_fixed(s.sd.unwrap(), 2), sd, "{label} sd");
        assert_eq!(fmt_fixed(s.median, 2), median, "{label} median");
        assert_eq!(fmt_fixed(s.min, 2), min, "{label} min");
        assert_eq!(fmt_fixed(s.max, 2), max, "{label} max");
    };
    check("Total", "3.10", "0.90", "3.40", "1.19", "4.04");
    check("C1", "3.05", "0.90", "3.38", "1.31", "4.06");
    check("C2", "3.08", "0.83", "3.44", "1.19", "4.06");
    check("C3", "3.18", "1.00", "3.62", "1.06", "4.06");
}
