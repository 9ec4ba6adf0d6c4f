use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use oiglab_cli::doc::{
    canonical_json, read_json, Direction, ExperimentDoc, FdsDoc, LearnerKind, Params, ProblemDoc, SettingDoc, SweepDoc, TaskKind,
    TieBreakKind,
};
use oiglab_cli::error::{CliError, CliResult};
use oiglab_cli::report::Report;
use oiglab_cli::tasks::{execute, Job};
use oiglab_cli::{run_experiment_file, run_sweep_file, stem, validate_params};

/// Optimal transductive learners via one-inclusion graphs and b-matching.
#[derive(Parser)]
#[command(name = "oiglab", version)]
struct Cli {
    /// Master seed for stochastic tasks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Cap on labelings produced by restrictions and OIG builds.
    #[arg(long, global = true, env = "OIGLAB_BUDGET_NODES")]
    budget_nodes: Option<usize>,
    /// Cap on right nodes for exhaustive subset enumeration.
    #[arg(long, global = true)]
    budget_subsets: Option<usize>,
    /// Write the CSV (or document) here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Append a wall_ms column (not reproducible across runs).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ProblemArgs {
    /// Problem document (JSON).
    #[arg(long)]
    spec: PathBuf,
    #[arg(long, value_enum)]
    setting: Option<SettingDoc>,
}

#[derive(Subcommand)]
enum Command {
    /// Build the bipartite one-inclusion graph.
    BuildOig(ProblemArgs),
    /// Optimal orientation, Hall complexity and density.
    Orient(ProblemArgs),
    /// Exact and fractional Hall complexity; with --eps, feasibility and a Hall witness.
    Hall {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long)]
        eps: Option<String>,
    },
    /// Maximum average degree of the binary OIG.
    Mad(ProblemArgs),
    /// Worst-case transductive error of a learner.
    Evaluate {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, value_enum)]
        learner: LearnerKind,
        #[arg(long = "tie", value_enum)]
        tie_break: Option<TieBreakKind>,
    },
    /// Monte Carlo true loss of a PAC learner, one row per trial.
    PacEval {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, value_enum)]
        learner: LearnerKind,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        trials: usize,
    },
    /// Reductions between transductive and PAC learners.
    Reduce {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, value_enum)]
        direction: Direction,
        #[arg(long, value_enum)]
        learner: Option<LearnerKind>,
        #[arg(long)]
        delta: Option<String>,
        #[arg(long)]
        holdout_eps: Option<String>,
        #[arg(long)]
        block: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long = "tie", value_enum)]
        tie_break: Option<TieBreakKind>,
    },
    /// FDS assignment problems.
    Fds {
        #[command(subcommand)]
        command: FdsCommand,
    },
    /// Whole-graph eps-feasibility against every finite right subset.
    Compactness {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        max_subset: Option<usize>,
    },
    /// Run a sweep spec over a grid of sizes.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Run an experiment spec.
    Run {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Print a document in canonical form.
    Canon {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_enum)]
        kind: DocKind,
    },
}

#[derive(Subcommand)]
enum FdsCommand {
    /// Find an assignment with every output at most eps, or a certificate.
    Solve {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        eps: String,
    },
    /// The least achievable maximum output.
    Minmax {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Encode a transductive problem as an FDS document.
    Encode(ProblemArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum DocKind {
    Problem,
    Fds,
    Experiment,
    Sweep,
}

impl Cli {
    fn overrides(&self) -> Params {
        Params { seed: self.seed, budget_nodes: self.budget_nodes, budget_subsets: self.budget_subsets, ..Params::default() }
    }
}

fn problem_job(task: TaskKind, args: &ProblemArgs, mut params: Params) -> CliResult<Job> {
    let problem: ProblemDoc = read_json(&args.spec)?;
    params.setting = args.setting;
    validate_params(task, &params)?;
    Ok(Job { id: stem(&args.spec), task, problem: Some(problem), fds: None, params })
}

fn fds_job(task: TaskKind, spec: &Path, params: Params) -> CliResult<Job> {
    let fds: FdsDoc = read_json(spec)?;
    validate_params(task, &params)?;
    Ok(Job { id: stem(spec), task, problem: None, fds: Some(fds), params })
}

fn canon(spec: &Path, kind: DocKind) -> CliResult<Report> {
    let text = match kind {
        DocKind::Problem => canonical_json(&read_json::<ProblemDoc>(spec)?.canonical()?),
        DocKind::Fds => canonical_json(&read_json::<FdsDoc>(spec)?.canonical()?),
        DocKind::Experiment => canonical_json(&read_json::<ExperimentDoc>(spec)?.canonical()?),
        DocKind::Sweep => canonical_json(&read_json::<SweepDoc>(spec)?.canonical()?),
    };
    let mut r = Report::new(&[]);
    r.document = Some(text);
    Ok(r)
}

fn dispatch(cli: &Cli) -> CliResult<(Report, Option<PathBuf>)> {
    let base = cli.overrides();
    let report = match &cli.command {
        Command::BuildOig(p) => execute(&problem_job(TaskKind::BuildOig, p, base)?)?,
        Command::Orient(p) => execute(&problem_job(TaskKind::Orient, p, base)?)?,
        Command::Hall { problem, eps } => execute(&problem_job(TaskKind::Hall, problem, Params { eps: eps.clone(), ..base })?)?,
        Command::Mad(p) => execute(&problem_job(TaskKind::Mad, p, base)?)?,
        Command::Evaluate { problem, learner, tie_break } => execute(&problem_job(
            TaskKind::Evaluate,
            problem,
            Params { learner: Some(*learner), tie_break: *tie_break, ..base },
        )?)?,
        Command::PacEval { problem, learner, samples, trials } => execute(&problem_job(
            TaskKind::PacEval,
            problem,
            Params { learner: Some(*learner), samples: Some(*samples), trials: Some(*trials), ..base },
        )?)?,
        Command::Reduce { problem, direction, learner, delta, holdout_eps, block, trials, tie_break } => execute(&problem_job(
            TaskKind::Reduce,
            problem,
            Params {
                direction: Some(*direction),
                learner: *learner,
                delta: delta.clone(),
                holdout_eps: holdout_eps.clone(),
                block: *block,
                trials: *trials,
                tie_break: *tie_break,
                ..base
            },
        )?)?,
        Command::Fds { command } => match command {
            FdsCommand::Solve { spec, eps } => execute(&fds_job(TaskKind::FdsSolve, spec, Params { eps: Some(eps.clone()), ..base })?)?,
            FdsCommand::Minmax { spec } => execute(&fds_job(TaskKind::FdsMinmax, spec, base)?)?,
            FdsCommand::Encode(p) => execute(&problem_job(TaskKind::FdsEncode, p, base)?)?,
        },
        Command::Compactness { problem, eps, max_subset } => execute(&problem_job(
            TaskKind::Compactness,
            problem,
            Params { eps: Some(eps.clone()), max_subset: *max_subset, ..base },
        )?)?,
        Command::Sweep { spec } => run_sweep_file(spec, &base)?,
        Command::Run { spec } => return run_experiment_file(spec, &base),
        Command::Canon { spec, kind } => canon(spec, *kind)?,
    };
    Ok((report, None))
}

fn write_output(report: &Report, path: Option<&Path>) -> CliResult<()> {
    match path {
        Some(p) => {
            let mut f = std::fs::File::create(p).map_err(|e| CliError::Io { path: p.display().to_string(), message: e.to_string() })?;
            report.write_to(&mut f)
        }
        None => report.write_to(&mut std::io::stdout().lock()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let result = dispatch(&cli).and_then(|(mut report, spec_out)| {
        if cli.timing && report.document.is_none() {
            report = report.with_column("wall_ms", &start.elapsed().as_millis().to_string());
        }
        write_output(&report, cli.out.as_deref().or(spec_out.as_deref()))?;
        Ok(report)
    });
    match result {
        Ok(report) => {
            let _ = std::io::stderr().write_all(report.summary.as_bytes());
            ExitCode::from(report.status.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
