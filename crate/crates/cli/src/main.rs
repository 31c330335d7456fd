//! Command-line front end: validates input files, runs the full analysis
//! pipeline into an output directory, prints summary tables and renders the
//! qualification-space plot.
//!
//! Exit codes: 0 success, 1 validation failure, 2 computation error,
//! 3 I/O error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use skillgap_core::assess::RollupWeights;
use skillgap_core::io::formats::{self, LoadError};
use skillgap_core::io::report::{self, ResultDoc};
use skillgap_core::io::svg::render_qs_svg;
use skillgap_core::pipeline::{self, run_pipeline};
use skillgap_core::{
    AcdMatrix, CompetenceTree, JobProfile, Level, PipelineConfig, Policy, RunResult,
};

#[derive(Parser)]
#[command(name = "skillgap", version, about = "Competence gap analysis and candidate ranking")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PolicyArg {
    #[value(name = "most_qualified")]
    MostQualified,
    #[value(name = "closest_fit")]
    ClosestFit,
}

impl From<PolicyArg> for Policy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::MostQualified => Policy::MostQualified,
            PolicyArg::ClosestFit => Policy::ClosestFit,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check the input files against every structural rule
    Validate {
        #[arg(long, value_name = "PATH")]
        tree: PathBuf,
        #[arg(long, value_name = "PATH")]
        acd: PathBuf,
        #[arg(long, value_name = "PATH")]
        job: PathBuf,
    },
    /// Run the full pipeline and write all result artifacts
    Run {
        #[arg(long, value_name = "PATH")]
        tree: PathBuf,
        #[arg(long, value_name = "PATH")]
        acd: PathBuf,
        #[arg(long, value_name = "PATH")]
        job: PathBuf,
        /// Output directory for the result artifacts
        #[arg(long, value_name = "DIR", required_unless_present = "stdout")]
        out: Option<PathBuf>,
        /// Significance level for the clustering test
        #[arg(long, value_name = "F", default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, value_enum, default_value = "most_qualified")]
        policy: PolicyArg,
        /// Display precision of the CSV tables
        #[arg(long, value_name = "N", default_value_t = 2)]
        decimals: usize,
        /// Print the ranking table to stdout instead of writing files
        #[arg(long)]
        stdout: bool,
    },
    /// Print descriptive statistics for the total and each level-1 category
    Stats {
        #[arg(long, value_name = "PATH")]
        tree: PathBuf,
        #[arg(long, value_name = "PATH")]
        acd: PathBuf,
        #[arg(long, value_name = "N", default_value_t = 2)]
        decimals: usize,
    },
    /// Render the qualification-space SVG from a result document or raw inputs
    Plot {
        /// result.json from a previous run
        #[arg(long, value_name = "PATH", conflicts_with_all = ["tree", "acd", "job"])]
        result: Option<PathBuf>,
        #[arg(long, value_name = "PATH", requires_all = ["acd", "job"])]
        tree: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        acd: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        job: Option<PathBuf>,
        /// Path of the SVG file to write
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
        #[arg(long, value_name = "F", default_value_t = 0.05)]
        alpha: f64,
    },
    /// Print the derived level-2 weight scheme as CSV
    Weights {
        #[arg(long, value_name = "PATH")]
        tree: PathBuf,
        #[arg(long, value_name = "PATH")]
        job: PathBuf,
    },
}

enum CliError {
    Validation(String),
    Compute(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Compute(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Compute(m) | CliError::Io(m) => m,
        }
    }
}

impl From<LoadError> for CliError {
    fn from(e: LoadError) -> Self {
        if e.is_io() {
            CliError::Io(format!("{}: {e}", e.rule_name()))
        } else {
            CliError::Validation(format!("{}: {e}", e.rule_name()))
        }
    }
}

impl From<skillgap_core::PipelineError> for CliError {
    fn from(e: skillgap_core::PipelineError) -> Self {
        let message = format!("{}: {e}", e.rule_name());
        if e.is_computational() {
            CliError::Compute(message)
        } else {
            CliError::Validation(message)
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("IoError: {}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Validate { tree, acd, job } => cmd_validate(&tree, &acd, &job),
        Command::Run {
            tree,
            acd,
            job,
            out,
            alpha,
            policy,
            decimals,
            stdout,
        } => cmd_run(
            &tree,
            &acd,
            &job,
            out.as_deref(),
            alpha,
            policy.into(),
            decimals,
            stdout,
        ),
        Command::Stats {
            tree,
            acd,
            decimals,
        } => cmd_stats(&tree, &acd, decimals),
        Command::Plot {
            result,
            tree,
            acd,
            job,
            out,
            alpha,
        } => cmd_plot(
            result.as_deref(),
            tree.as_deref(),
            acd.as_deref(),
            job.as_deref(),
            &out,
            alpha,
        ),
        Command::Weights { tree, job } => cmd_weights(&tree, &job),
    }
}

fn load_inputs(
    tree_path: &Path,
    acd_path: &Path,
    job_path: &Path,
) -> Result<(CompetenceTree, AcdMatrix, JobProfile), CliError> {
    let tree = formats::read_tree_json(tree_path)?;
    let acd = formats::read_acd_csv(acd_path)?;
    let job = formats::read_job_json(job_path, &tree)?;
    Ok((tree, acd, job))
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

fn cmd_validate(tree_path: &Path, acd_path: &Path, job_path: &Path) -> Result<ExitCode, CliError> {
    let mut diagnostics: Vec<String> = Vec::new();
    let mut push_load_error = |file: &Path, e: &LoadError| {
        diagnostics.push(format!("{}: {}: {e}", file.display(), e.rule_name()));
    };

    let tree = match formats::read_tree_json(tree_path) {
        Ok(tree) => Some(tree),
        Err(e) if e.is_io() => return Err(e.into()),
        Err(e) => {
            push_load_error(tree_path, &e);
            None
        }
    };
    let acd = match formats::read_acd_csv(acd_path) {
        Ok(acd) => Some(acd),
        Err(e) if e.is_io() => return Err(e.into()),
        Err(e) => {
            push_load_error(acd_path, &e);
            None
        }
    };
    let job = match &tree {
        Some(tree) => match formats::read_job_json(job_path, tree) {
            Ok(job) => Some(job),
            Err(e) if e.is_io() => return Err(e.into()),
            Err(e) => {
                push_load_error(job_path, &e);
                None
            }
        },
        None => None,
    };

    if let (Some(tree), Some(acd)) = (&tree, &acd) {
        if let Err(e) = acd.check_columns(tree) {
            diagnostics.push(format!("{}: {}: {e}", acd_path.display(), e.rule_name()));
        }
        if let Err(e) = pipeline::check_acd_scores(acd) {
            diagnostics.push(format!("{}: {}: {e}", acd_path.display(), e.rule_name()));
        }
    }

    if diagnostics.is_empty() {
        let tree = tree.expect("validated");
        let acd = acd.expect("validated");
        let _ = job.expect("validated");
        println!(
            "OK: {}/{}/{} tree, {} candidates, profile valid",
            tree.level_len(1),
            tree.level_len(2),
            tree.level_len(3),
            acd.matrix.n_candidates()
        );
        Ok(ExitCode::SUCCESS)
    } else {
        for d in &diagnostics {
            println!("{d}");
        }
        Ok(ExitCode::from(1))
    }
}

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

#[allow(clippy::too_many_arguments)]
fn cmd_run(
    tree_path: &Path,
    acd_path: &Path,
    job_path: &Path,
    out: Option<&Path>,
    alpha: f64,
    policy: Policy,
    decimals: usize,
    stdout: bool,
) -> Result<ExitCode, CliError> {
    let (tree, acd, job) = load_inputs(tree_path, acd_path, job_path)?;
    let config = PipelineConfig {
        alpha,
        policy,
        display_decimals: decimals,
        ..PipelineConfig::default()
    };
    let result = run_pipeline(&tree, &acd, &job, &config)?;

    if let Some(dir) = out {
        write_run_artifacts(dir, &result)?;
        println!("wrote {} artifacts to {}", ARTIFACTS, dir.display());
    }
    if stdout {
        print!("{}", report::render_ranking_csv(&result));
    }
    Ok(ExitCode::SUCCESS)
}

const ARTIFACTS: usize = 11;

fn write_run_artifacts(dir: &Path, result: &RunResult) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;

    let doc = ResultDoc::from_run(result);
    let svg = render_qs_svg(&doc.plot_points())
        .map_err(|e| CliError::Compute(format!("{}: {e}", e.rule_name())))?;

    let files: Vec<(&str, String)> = vec![
        ("acd_level2.csv", report::render_acd_level2_csv(result)),
        ("acd_level1.csv", report::render_acd_level1_csv(result)),
        ("stats.csv", report::render_stats_csv(result)),
        ("weights.csv", report::render_weights_csv(&result.weights)),
        ("weighted.csv", report::render_weighted_csv(result)),
        ("gaps.csv", report::render_gaps_csv(result)),
        ("qs_points.csv", report::render_qs_points_csv(result)),
        ("anova.csv", report::render_anova_csv(result)),
        ("ranking.csv", report::render_ranking_csv(result)),
        ("result.json", doc.to_json()),
        ("qs_plot.svg", svg),
    ];
    debug_assert_eq!(files.len(), ARTIFACTS);

    // all content is rendered before the first write; clean up whatever was
    // written if a later write fails
    let mut written: Vec<PathBuf> = Vec::new();
    for (name, content) in &files {
        let path = dir.join(name);
        if let Err(e) = std::fs::write(&path, content) {
            for partial in &written {
                let _ = std::fs::remove_file(partial);
            }
            return Err(io_error(&path, e));
        }
        written.push(path);
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// stats
// ---------------------------------------------------------------------------

fn cmd_stats(tree_path: &Path, acd_path: &Path, decimals: usize) -> Result<ExitCode, CliError> {
    let tree = formats::read_tree_json(tree_path)?;
    let acd = formats::read_acd_csv(acd_path)?;
    acd.check_columns(&tree)
        .map_err(|e| CliError::Validation(format!("{}: {e}", e.rule_name())))?;
    pipeline::check_acd_scores(&acd)
        .map_err(|e| CliError::Validation(format!("{}: {e}", e.rule_name())))?;

    let w3 = RollupWeights::equal(&tree, Level::Three);
    let w2 = RollupWeights::equal(&tree, Level::Two);
    let (_, _, stats) = pipeline::level1_stats(&tree, &acd, &w3, &w2)?;
    print!("{}", report::render_stats_rows(&stats, decimals));
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// plot
// ---------------------------------------------------------------------------

fn cmd_plot(
    result: Option<&Path>,
    tree: Option<&Path>,
    acd: Option<&Path>,
    job: Option<&Path>,
    out: &Path,
    alpha: f64,
) -> Result<ExitCode, CliError> {
    let doc = match (result, tree, acd, job) {
        (Some(result_path), ..) => {
            let content = std::fs::read_to_string(result_path)
                .map_err(|e| io_error(result_path, e))?;
            ResultDoc::from_json(&content).map_err(|e| {
                CliError::Validation(format!(
                    "ParseError: {}:{}: {e}",
                    result_path.display(),
                    e.line()
                ))
            })?
        }
        (None, Some(tree_path), Some(acd_path), Some(job_path)) => {
            let (tree, acd, job) = load_inputs(tree_path, acd_path, job_path)?;
            let config = PipelineConfig {
                alpha,
                ..PipelineConfig::default()
            };
            ResultDoc::from_run(&run_pipeline(&tree, &acd, &job, &config)?)
        }
        _ => {
            return Err(CliError::Validation(
                "MissingInput: plot needs --result or all of --tree/--acd/--job".to_string(),
            ))
        }
    };

    let svg = render_qs_svg(&doc.plot_points())
        .map_err(|e| CliError::Compute(format!("{}: {e}", e.rule_name())))?;
    std::fs::write(out, svg).map_err(|e| io_error(out, e))?;
    println!("wrote {}", out.display());
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// weights
// ---------------------------------------------------------------------------

fn cmd_weights(tree_path: &Path, job_path: &Path) -> Result<ExitCode, CliError> {
    let tree = formats::read_tree_json(tree_path)?;
    let job = formats::read_job_json(job_path, &tree)?;
    print!("{}", report::render_weights_csv(&job.hcv.absolute_weights()));
    Ok(ExitCode::SUCCESS)
}
