use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cofix_cli::{
    cmd_classify, cmd_fixtures, cmd_recheck, cmd_search, cmd_solve, cmd_verify, default_epsilon, load, parse_kind,
    parse_seeds, write_json, CliError, Outcome, Source, DEFAULT_MAX_ITER,
};
use cofix_core::conditions::ConditionKind;
use cofix_core::explorer::DEFAULT_MAGNITUDE;
use cofix_core::fixtures::FixtureId;
use cofix_core::ExactScalar;

/// Exact checks of contractive conditions, coincidence and common fixed
/// points for pairs of selfmaps.
///
/// Exit codes: 0 ok, 1 condition violated, 2 input error, 3 hypothesis
/// failed, 4 no convergence within the iteration budget.
#[derive(Parser)]
#[command(name = "cofix", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SourceArgs {
    /// Bundled problem: example_1_10, example_2_4 or example_3_4.
    #[arg(long)]
    fixture: Option<FixtureId>,
    /// Path to a JSON problem file.
    #[arg(long)]
    problem: Option<PathBuf>,
}

impl SourceArgs {
    fn source(&self) -> Source {
        match (&self.fixture, &self.problem) {
            (Some(id), _) => Source::Fixture(*id),
            (None, Some(p)) => Source::File(p.clone()),
            (None, None) => unreachable!("clap requires one source"),
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Check one condition at given constants.
    Verify {
        #[command(flatten)]
        src: SourceArgs,
        #[arg(long, value_parser = parse_kind)]
        kind: Option<ConditionKind>,
        #[arg(long)]
        delta: Option<ExactScalar>,
        #[arg(long = "L")]
        l: Option<ExactScalar>,
        /// Grid spacing for interval spaces.
        #[arg(long)]
        grid_step: Option<ExactScalar>,
        /// Also write the report as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Least delta and L for every condition kind.
    Classify {
        #[command(flatten)]
        src: SourceArgs,
        #[arg(long)]
        grid_step: Option<ExactScalar>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Check hypotheses, iterate, and report coincidence and common fixed points.
    Solve {
        #[command(flatten)]
        src: SourceArgs,
        /// Condition used for the hypothesis check and the rate.
        #[arg(long, value_parser = parse_kind)]
        kind: Option<ConditionKind>,
        /// Starting point: a label or index on finite spaces, a rational on intervals.
        #[arg(long)]
        x0: Option<String>,
        /// Stop once the a-posteriori bound is at most this; 0 means exact only.
        #[arg(long)]
        epsilon: Option<ExactScalar>,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
        #[arg(long)]
        grid_step: Option<ExactScalar>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Search random finite instances whose five-term rate lies in [1/2, 1).
    Search {
        /// Seed range a..b (b excluded).
        #[arg(long, default_value = "0..1000", value_parser = parse_seeds)]
        seeds: std::ops::Range<u64>,
        #[arg(long, default_value_t = 5)]
        n_max: usize,
        /// Largest integer edge weight before metric closure.
        #[arg(long, default_value_t = DEFAULT_MAGNITUDE)]
        magnitude: i64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Re-verify a saved candidate or search report.
    Recheck { path: PathBuf },
    /// List the bundled fixtures, or print one as a problem file.
    Fixtures { name: Option<FixtureId> },
}

fn run(cli: Cli) -> Result<(Outcome, Option<PathBuf>), CliError> {
    Ok(match cli.cmd {
        Cmd::Verify { src, kind, delta, l, grid_step, json } => {
            let p = load(&src.source(), grid_step.as_ref())?;
            (cmd_verify(&p, kind, delta, l)?, json)
        }
        Cmd::Classify { src, grid_step, json } => (cmd_classify(&load(&src.source(), grid_step.as_ref())?), json),
        Cmd::Solve { src, kind, x0, epsilon, max_iter, grid_step, json } => {
            let p = load(&src.source(), grid_step.as_ref())?;
            let eps = epsilon.unwrap_or_else(default_epsilon);
            (cmd_solve(&p, kind, x0.as_deref(), &eps, max_iter)?, json)
        }
        Cmd::Search { seeds, n_max, magnitude, json } => (cmd_search(seeds, n_max, magnitude)?, json),
        Cmd::Recheck { path } => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| CliError::Io { path: path.display().to_string(), source: e })?;
            (cmd_recheck(&text)?, None)
        }
        Cmd::Fixtures { name } => (cmd_fixtures(name), None),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((outcome, json_path)) => {
            print!("{}", outcome.text);
            if let Some(path) = json_path {
                if let Err(e) = write_json(&path, &outcome.json) {
                    eprintln!("error: {e}");
                    return ExitCode::from(e.exit_code() as u8);
                }
            }
            ExitCode::from(outcome.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
