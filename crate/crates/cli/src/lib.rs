//! Command-line front end for `oiglab`: JSON problem documents in, CSV out.

pub mod doc;
pub mod error;
pub mod report;
pub mod sweep;
pub mod tasks;

use std::path::{Path, PathBuf};

use doc::{read_json, ExperimentDoc, Params, SweepDoc};
use error::{CliError, CliResult};
use report::Report;
use tasks::Job;

/// The file name without extension, used as the instance id.
pub fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(|| "instance".into(), |s| s.to_string_lossy().into_owned())
}

/// Resolves the documents of an experiment; `overrides` win over the spec's parameters.
pub fn job_from_experiment(doc: &ExperimentDoc, base: Option<&Path>, default_id: &str, overrides: &Params) -> CliResult<Job> {
    let problem = doc.problem.as_ref().map(|s| s.load(base)).transpose()?;
    let fds = doc.fds.as_ref().map(|s| s.load(base)).transpose()?;
    if doc.task.needs_fds() && fds.is_none() {
        return Err(CliError::Missing("fds"));
    }
    if !doc.task.needs_fds() && problem.is_none() {
        return Err(CliError::Missing("problem"));
    }
    let params = overrides.or(&doc.params);
    validate_params(doc.task, &params)?;
    Ok(Job { id: doc.id.clone().unwrap_or_else(|| default_id.into()), task: doc.task, problem, fds, params })
}

/// Checks the parameters each task requires; stochastic tasks need a seed.
pub fn validate_params(task: doc::TaskKind, p: &Params) -> CliResult<()> {
    use doc::{Direction, LearnerKind, TaskKind::*, TieBreakKind};
    let need = |ok: bool, name: &'static str| if ok { Ok(()) } else { Err(CliError::Missing(name)) };
    match task {
        Hall | BuildOig | Orient | Mad | FdsMinmax | FdsEncode => Ok(()),
        FdsSolve | Compactness => need(p.eps.is_some(), "eps"),
        Evaluate => {
            need(p.learner.is_some(), "learner")?;
            let seeded = p.learner == Some(LearnerKind::Erm) && p.tie_break == Some(TieBreakKind::Seeded);
            need(!seeded || p.seed.is_some(), "seed")
        }
        PacEval => {
            need(p.learner.is_some(), "learner")?;
            need(p.samples.is_some(), "samples")?;
            need(p.trials.is_some(), "trials")?;
            need(p.seed.is_some(), "seed")
        }
        Reduce => {
            need(p.seed.is_some(), "seed")?;
            match p.direction {
                None => Err(CliError::Missing("direction")),
                Some(Direction::P2t) => Ok(()),
                Some(Direction::T2p) => {
                    need(p.delta.is_some(), "delta")?;
                    need(p.holdout_eps.is_some(), "holdout_eps")?;
                    need(p.block.is_some(), "block")?;
                    need(p.trials.is_some(), "trials")
                }
            }
        }
    }
}

/// Runs an experiment spec file. Returns the report and where the spec wants it written.
pub fn run_experiment_file(path: &Path, overrides: &Params) -> CliResult<(Report, Option<PathBuf>)> {
    let doc: ExperimentDoc = read_json(path)?;
    let base = path.parent();
    let job = job_from_experiment(&doc, base, &stem(path), overrides)?;
    let report = tasks::execute(&job)?;
    let output = doc.output.as_ref().map(|o| base.map_or_else(|| PathBuf::from(o), |b| b.join(o)));
    Ok((report, output))
}

pub fn run_sweep_file(path: &Path, overrides: &Params) -> CliResult<Report> {
    let doc: SweepDoc = read_json(path)?;
    let problem = doc.template.problem.as_ref().ok_or(CliError::Missing("problem"))?.load(path.parent())?;
    sweep::run_sweep(&doc, &problem, overrides)
}
