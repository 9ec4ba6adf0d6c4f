//! Parameter sweeps over the number of datapoints.

use oiglab::Rational;
use rayon::prelude::*;

use crate::doc::{with_points, Params, SweepDoc, TaskKind};
use crate::error::{CliError, CliResult};
use crate::report::{blank, exact, Report};
use crate::tasks::{evaluate_value, orient_value, Job};

/// One row per grid value, in grid order. A failing grid point records its
/// error in the `status` column and the sweep goes on.
pub fn run_sweep(doc: &SweepDoc, problem: &crate::doc::ProblemDoc, overrides: &Params) -> CliResult<Report> {
    let task = doc.template.task;
    if !matches!(task, TaskKind::Evaluate | TaskKind::Orient) {
        return Err(CliError::Invalid(format!("sweeps support evaluate and orient, not {}", task.name())));
    }
    let params = overrides.or(&doc.template.params);
    let id = doc.template.id.clone().unwrap_or_else(|| "sweep".into());
    let rows: Vec<Vec<String>> = doc
        .grid
        .par_iter()
        .map(|&n| {
            let mut row = vec![n.to_string()];
            match point_value(doc, problem, &params, &id, task, n) {
                Ok((count, value)) => {
                    row.push(count.to_string());
                    row.extend(exact(value));
                    row.push("ok".into());
                }
                Err(e) => {
                    row.push(String::new());
                    row.extend(blank());
                    row.push(format!("error: {e}"));
                }
            }
            row
        })
        .collect();
    let mut r = Report::new(&["n", "instances", "value_num", "value_den", "value", "status"]);
    let failed = rows.iter().filter(|r| r[5] != "ok").count();
    for row in rows {
        r.push(row);
    }
    r.summary = format!("{} sweep over {} grid points, {failed} failed\n", task.name(), doc.grid.len());
    Ok(r)
}

/// Worst value over every point configuration generated for `n`.
fn point_value(
    doc: &SweepDoc,
    problem: &crate::doc::ProblemDoc,
    params: &Params,
    id: &str,
    task: TaskKind,
    n: usize,
) -> CliResult<(usize, Rational)> {
    let configs = doc.generate(n)?;
    let mut worst: Option<Rational> = None;
    for pts in &configs {
        let job = Job { id: id.to_string(), task, problem: Some(with_points(problem, pts)), fds: None, params: params.clone() };
        let v = match task {
            TaskKind::Evaluate => evaluate_value(&job)?.1,
            _ => orient_value(&job)?,
        };
        worst = Some(worst.map_or(v, |w| w.max(v)));
    }
    worst.map(|w| (configs.len(), w)).ok_or_else(|| CliError::Invalid(format!("no point configuration of size {n}")))
}
